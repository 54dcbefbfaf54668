"""Large-electorate limit of the winner probability for arbitrary cultures.

As the number of voters grows, the standardized pairwise vote margins of each
candidate converge jointly to a multivariate normal vector, so the limiting
probability that candidate i beats everyone is a normal orthant probability.
Three per-voter quantities drive the computation:

* the expected pairwise margin lambda[i, j], the mean of the +/-1 preference
  of a single voter between i and j (equals 2 p_ij - 1);
* its sign, which turns each pairwise condition into an integration threshold
  of 0 (balanced pair) or -inf / +inf (pair decided surely in the limit);
  note the inversion: a positive margin means the condition is free, so the
  threshold is -inf;
* the correlation matrix of candidate i's margins against the other m - 1
  candidates.

The limit is the sum over candidates of the resulting orthant probabilities.
For three candidates the 27 sign patterns of the margins reduce to a fixed
table of closed forms (``TABLE1``), each row of which can be audited against
an independent Monte Carlo evaluation of the orthant decomposition.

The module also provides the impartial-culture (uniform) limit: closed forms
for 3..7 candidates, the equicorrelated single-integral form for any count,
the recursion check, a decreasing upper bound, and the curve of the limit
against the number of candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .culture import Culture, pair_sign_matrix
from .exact import Method, WinnerProbability
from .orthant import (
    DEFAULT_MC_SAMPLES,
    DEFAULT_MC_SEED,
    equicorrelated_orthant,
    orthant_mc,
    orthant_zero_probability,
)

_TWO_PI = 2.0 * math.pi

DELTA_SIGN_TOL = 1e-12
DEGENERATE_MARGIN_TOL = 1e-12

NEG_INF = -math.inf
POS_INF = math.inf


class DegenerateVarianceError(ValueError):
    """A pairwise margin is +/-1, so the margin has zero variance.

    Correlation entries involving such a pair are undefined; callers handle
    the pair through its +/-inf threshold instead.
    """


def lambda_matrix(culture: Culture) -> np.ndarray:
    """Expected pairwise margins: entry [i, j] = 2 p_ij - 1, antisymmetric."""
    signs = pair_sign_matrix(culture.m).astype(float)
    return signs @ culture.probs


def classify_deltas(lam: np.ndarray, tol: float = DELTA_SIGN_TOL) -> dict[tuple[int, int], float]:
    """Integration thresholds induced by the margin signs, per ordered pair.

    A margin above ``tol`` maps to -inf (the pairwise condition holds surely
    in the limit), below ``-tol`` to +inf (it fails surely), and anything
    within ``tol`` of zero to 0.
    """
    if tol < 0.0:
        raise ValueError(f"tolerance must be >= 0, got {tol!r}")
    lam = np.asarray(lam, dtype=float)
    m = lam.shape[0]
    out: dict[tuple[int, int], float] = {}
    for i in range(m):
        for j in range(m):
            if i != j:
                out[(i, j)] = _delta(lam[i, j], tol)
    return out


def _delta(lam_ij: float, tol: float) -> float:
    if lam_ij > tol:
        return NEG_INF
    if lam_ij < -tol:
        return POS_INF
    return 0.0


def _rivals(m: int, i: int) -> list[int]:
    return [j for j in range(m) if j != i]


def _correlation_submatrix(culture: Culture, i: int, rivals: list[int], lam: np.ndarray) -> np.ndarray:
    """Correlation matrix of candidate i's margins against ``rivals``.

    Entry (j, l) is (E[s_ij s_il] - lam_ij lam_il) / sqrt((1 - lam_ij^2)(1 - lam_il^2))
    where s_ij is the voter's +/-1 preference between i and j. All listed
    rivals must have |lam_ij| < 1.
    """
    signs = pair_sign_matrix(culture.m)
    rows = signs[i, rivals, :].astype(float)  # (len(rivals), K)
    lam_row = lam[i, rivals]
    second_moment = (rows * culture.probs) @ rows.T
    sd = np.sqrt(1.0 - lam_row**2)
    r = (second_moment - np.outer(lam_row, lam_row)) / np.outer(sd, sd)
    r = (r + r.T) / 2.0
    np.fill_diagonal(r, 1.0)
    return r


def correlation_matrix(culture: Culture, i: int) -> np.ndarray:
    """The (m-1) x (m-1) margin correlation matrix of candidate i.

    Rows and columns are indexed by the other candidates in ascending order.
    Raises :class:`DegenerateVarianceError` when any margin involving i is
    +/-1 within 1e-12 (zero variance; the pair must be handled through its
    +/-inf threshold instead).
    """
    if not 0 <= i < culture.m:
        raise ValueError(f"candidate out of range for m={culture.m}: {i}")
    lam = lambda_matrix(culture)
    rivals = _rivals(culture.m, i)
    degenerate = [j for j in rivals if abs(lam[i, j]) >= 1.0 - DEGENERATE_MARGIN_TOL]
    if degenerate:
        raise DegenerateVarianceError(
            f"margin of candidate {i} against {degenerate} is +/-1; "
            "the correlation entry is undefined"
        )
    return _correlation_submatrix(culture, i, rivals, lam)


def _candidate_term(
    culture: Culture,
    i: int,
    lam: np.ndarray,
    tol: float,
    mc_samples: int,
    mc_seed,
) -> dict:
    """One candidate's contribution to the limit, with its diagnostics."""
    rivals = _rivals(culture.m, i)
    deltas = [_delta(lam[i, j], tol) for j in rivals]
    term = {
        "candidate": i,
        "deltas": [_delta_label(d) for d in deltas],
        "correlation": None,
        "L": 0.0,
        "method": "exact",
        "stderr": None,
    }
    if any(d == POS_INF for d in deltas):
        return term
    kept = [j for j, d in zip(rivals, deltas) if d == 0.0]
    if not kept:
        term["L"] = 1.0
        return term
    sub = _correlation_submatrix(culture, i, kept, lam)
    value, stderr, method = orthant_zero_probability(sub, mc_samples, mc_seed)
    term.update(
        correlation=[[float(x) for x in row] for row in sub],
        L=float(value),
        method=method,
        stderr=stderr,
    )
    return term


def _delta_label(d: float) -> str:
    if d == NEG_INF:
        return "-inf"
    if d == POS_INF:
        return "+inf"
    return "0"


def limiting_probability(
    culture: Culture,
    tol: float = DELTA_SIGN_TOL,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    mc_seed=DEFAULT_MC_SEED,
) -> WinnerProbability:
    """Probability that a winner exists as the number of voters grows without bound.

    Sums, over candidates, the orthant probability of the candidate's
    standardized margin vector with thresholds from the margin signs. Pairs
    with margin +/-1 never touch a correlation entry: their thresholds are
    +/-inf, so the coordinate is dropped (or the whole term is zero) before
    any submatrix is built.

    The returned detail carries the per-candidate terms; ``detail["case"]``
    holds the three-candidate table row when m = 3.
    """
    lam = lambda_matrix(culture)
    terms = [
        _candidate_term(culture, i, lam, tol, mc_samples, mc_seed)
        for i in range(culture.m)
    ]
    total = math.fsum(t["L"] for t in terms)
    detail = {"terms": terms, "terms_sum": total}
    if culture.m == 3:
        detail["case"] = _TABLE1_BY_SIGNS[_sign_triple(lam, tol)].number
    return WinnerProbability(min(max(total, 0.0), 1.0), Method.LIMIT, detail=detail)


# ---------------------------------------------------------------------------
# Three candidates: the 27 margin-sign patterns and their closed forms.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    """One sign pattern of the three pairwise margins and its limit formula.

    ``signs`` holds the signs of the expected margins for the candidate pairs
    (0,1), (0,2), (1,2). ``kind`` selects the formula: the full three-term sum
    ("sum3"), 3/4 plus an arcsine of one correlation entry ("arcsin", with
    ``arcsin_candidate`` naming whose correlation matrix feeds it), or a
    constant ("half", "one", "zero"). ``note`` records how the value arises
    from the per-candidate orthant terms.
    """

    number: int
    signs: tuple[int, int, int]
    kind: str
    arcsin_candidate: int | None = None
    note: str = ""


def _term_structure_note(signs: tuple[int, int, int]) -> str:
    """Describe the three orthant terms produced by a sign pattern."""
    s01, s02, s12 = signs
    pieces = []
    for i, pair_signs in ((0, (s01, s02)), (1, (-s01, s12)), (2, (-s02, -s12))):
        if any(s < 0 for s in pair_signs):
            pieces.append("0")
        else:
            zeros = sum(1 for s in pair_signs if s == 0)
            if zeros == 0:
                pieces.append("1")
            elif zeros == 1:
                pieces.append("1/2")
            else:
                pieces.append(f"L2(R{i})")
    return "terms " + " + ".join(pieces)


def _build_table1() -> tuple[Table1Row, ...]:
    z, p, n = 0, 1, -1
    entries = [
        (1, (z, z, z), "sum3", None),
        (2, (z, z, p), "arcsin", 0),
        (3, (z, z, n), "arcsin", 0),
        (4, (z, p, z), "arcsin", 1),
        (5, (z, n, z), "arcsin", 1),
        (6, (z, p, n), "half", None),
        (7, (z, p, p), "one", None),
        (8, (z, n, p), "half", None),
        (9, (z, n, n), "one", None),
        (10, (p, z, p), "half", None),
        (11, (p, p, z), "one", None),
        (12, (p, z, n), "one", None),
        (13, (p, n, z), "half", None),
        (14, (p, p, p), "one", None),
        (15, (p, n, n), "one", None),
        (16, (p, p, n), "one", None),
        (17, (p, n, p), "zero", None),
        (18, (p, z, z), "arcsin", 2),
        (19, (n, z, z), "arcsin", 2),
        (20, (n, z, p), "one", None),
        (21, (n, z, n), "half", None),
        (22, (n, p, z), "half", None),
        (23, (n, p, p), "one", None),
        (24, (n, p, n), "zero", None),
        (25, (n, n, z), "one", None),
        (26, (n, n, p), "one", None),
        (27, (n, n, n), "one", None),
    ]
    return tuple(
        Table1Row(number, signs, kind, cand, _term_structure_note(signs))
        for number, signs, kind, cand in entries
    )


TABLE1: tuple[Table1Row, ...] = _build_table1()
_TABLE1_BY_SIGNS: dict[tuple[int, int, int], Table1Row] = {row.signs: row for row in TABLE1}


def _sign_triple(lam: np.ndarray, tol: float) -> tuple[int, int, int]:
    def sgn(x: float) -> int:
        if x > tol:
            return 1
        if x < -tol:
            return -1
        return 0

    return (sgn(lam[0, 1]), sgn(lam[0, 2]), sgn(lam[1, 2]))


def classify_m3(culture: Culture, tol: float = DELTA_SIGN_TOL) -> tuple[int, float]:
    """Table row (1..27) and limiting winner probability for three candidates.

    The value is computed from the row's stored formula, not from the general
    orthant machinery, so it can be cross-checked against
    :func:`limiting_probability`.
    """
    if culture.m != 3:
        raise ValueError(f"classification table applies to m=3, got m={culture.m}")
    lam = lambda_matrix(culture)
    row = _TABLE1_BY_SIGNS[_sign_triple(lam, tol)]
    if row.kind == "sum3":
        value = math.fsum(
            0.25 + math.asin(float(correlation_matrix(culture, i)[0, 1])) / _TWO_PI
            for i in range(3)
        )
    elif row.kind == "arcsin":
        entry = float(correlation_matrix(culture, row.arcsin_candidate)[0, 1])
        value = 0.75 + math.asin(entry) / _TWO_PI
    elif row.kind == "half":
        value = 0.5
    elif row.kind == "one":
        value = 1.0
    else:
        value = 0.0
    return row.number, value


_MARGIN_COEFFS = np.array(
    [
        [1.0, 1.0, -1.0, -1.0, 1.0, -1.0],  # margin of candidate 0 over 1
        [1.0, 1.0, 1.0, -1.0, -1.0, -1.0],  # margin of candidate 0 over 2
        [1.0, -1.0, 1.0, 1.0, -1.0, -1.0],  # margin of candidate 1 over 2
    ]
)


def sign_pattern_culture(signs: tuple[int, int, int], magnitude: float = 0.12) -> Culture:
    """Three-candidate culture whose expected margins realize a sign pattern.

    Starts from the uniform culture and adds the minimum-norm perturbation
    whose margins equal ``magnitude`` times the requested signs. Magnitudes up
    to ~0.2 keep every order probability positive.
    """
    if len(signs) != 3 or any(s not in (-1, 0, 1) for s in signs):
        raise ValueError(f"signs must be a triple over {{-1, 0, 1}}, got {signs!r}")
    target = magnitude * np.asarray(signs, dtype=float)
    gram = _MARGIN_COEFFS @ _MARGIN_COEFFS.T
    probs = np.full(6, 1.0 / 6.0) + _MARGIN_COEFFS.T @ np.linalg.solve(gram, target)
    if probs.min() <= 0.0:
        raise ValueError(f"magnitude {magnitude!r} pushes a probability below zero")
    return Culture(3, probs)


def case7_culture() -> Culture:
    """Worked example reaching table row 7 (limit exactly 1).

    Candidates 0 and 1 each beat candidate 2 in expectation while their own
    pairing is balanced, so one of them always wins in the limit.
    """
    return Culture(3, np.array([1 / 6, 1 / 6, 2 / 5, 0.0, 1 / 6, 1 / 10]))


def case17_culture() -> Culture:
    """Worked example reaching table row 17 (limit exactly 0).

    The expected margins form a cycle (0 beats 1, 1 beats 2, 2 beats 0), so
    every candidate surely loses some pairing in the limit.
    """
    return Culture(3, np.array([3 / 22, 3 / 22, 9 / 44, 5 / 22, 13 / 44, 0.0]))


@dataclass(frozen=True)
class Table1AuditRow:
    """Outcome of auditing one table row against a Monte Carlo evaluation."""

    number: int
    signs: tuple[int, int, int]
    formula_value: float
    mc_value: float
    mc_stderr: float
    passed: bool


def audit_table1(
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = DEFAULT_MC_SEED,
    magnitude: float = 0.12,
) -> list[Table1AuditRow]:
    """Check every table row against a Monte Carlo orthant evaluation.

    For each sign pattern a culture realizing it is constructed, classified,
    and its tabulated value compared with a direct simulation of the
    three-term orthant decomposition (4-sigma criterion). Rows whose terms are
    all forced to 0 or 1 by infinite thresholds have zero stderr and must
    match exactly. Deterministic for a fixed seed.
    """
    results = []
    for row in TABLE1:
        culture = sign_pattern_culture(row.signs, magnitude)
        number, formula_value = classify_m3(culture)
        if number != row.number:
            raise AssertionError(
                f"constructed culture for row {row.number} classified as {number}"
            )
        lam = lambda_matrix(culture)
        mc_total = 0.0
        variance = 0.0
        for i in range(3):
            rivals = _rivals(3, i)
            deltas = [_delta(lam[i, j], DELTA_SIGN_TOL) for j in rivals]
            if any(d == POS_INF for d in deltas):
                continue
            kept = [j for j, d in zip(rivals, deltas) if d == 0.0]
            if not kept:
                mc_total += 1.0
                continue
            sub = _correlation_submatrix(culture, i, kept, lam)
            estimate, stderr = orthant_mc(sub, samples, seed=(seed, row.number, i))
            mc_total += estimate
            variance += stderr**2
        mc_stderr = math.sqrt(variance)
        if mc_stderr > 0.0:
            passed = abs(formula_value - mc_total) <= 4.0 * mc_stderr
        else:
            passed = formula_value == mc_total
        results.append(
            Table1AuditRow(row.number, row.signs, formula_value, mc_total, mc_stderr, passed)
        )
    return results


# ---------------------------------------------------------------------------
# Impartial culture: closed forms, the equicorrelated integral, and bounds.
# ---------------------------------------------------------------------------

_ARCSIN_THIRD = math.asin(1.0 / 3.0)


def _inner_kernel(lam: float) -> float:
    return math.asin(lam / (1.0 + 2.0 * lam)) / math.sqrt(1.0 - lam * lam)


def _kernel_integral() -> float:
    value, _ = quad(_inner_kernel, 0.0, 1.0 / 3.0, epsabs=1e-11, epsrel=1e-11)
    return value


def _kernel_double_integral() -> float:
    def outer(mu: float) -> float:
        upper = mu / (1.0 + 2.0 * mu)
        inner, _ = quad(_inner_kernel, 0.0, upper, epsabs=1e-12, epsrel=1e-12)
        return inner / math.sqrt(1.0 - mu * mu)

    value, _ = quad(outer, 0.0, 1.0 / 3.0, epsabs=1e-11, epsrel=1e-11)
    return value


def ic_limit_closed(m: int) -> float:
    """Uniform-culture limit from the printed closed forms, m in 3..7.

    The forms for 5..7 contain one- and two-dimensional integrals of
    arcsin(lam / (1 + 2 lam)) kernels, evaluated by adaptive quadrature.
    """
    if not 3 <= m <= 7:
        raise ValueError(f"closed forms cover m in [3, 7], got {m}")
    a = _ARCSIN_THIRD
    if m == 3:
        return 0.75 + 3.0 * a / _TWO_PI
    if m == 4:
        return 0.5 * (1.0 + 6.0 * a / math.pi)
    i1 = _kernel_integral()
    if m == 5:
        return (5.0 / 16.0) * (1.0 + 12.0 * a / math.pi + 24.0 * i1 / math.pi**2)
    if m == 6:
        return (3.0 / 16.0) * (1.0 + 20.0 * a / math.pi + 120.0 * i1 / math.pi**2)
    i2 = _kernel_double_integral()
    return (7.0 / 64.0) * (
        1.0 + 30.0 * a / math.pi + 360.0 * i1 / math.pi**2 + 720.0 * i2 / math.pi**3
    )


def ic_limit_sampford(m: int) -> float:
    """Uniform-culture limit for any m >= 2 via the equicorrelated integral.

    Under the uniform culture all margins are balanced and every candidate's
    correlation matrix is equicorrelated at 1/3, so the limit is m times the
    (m-1)-dimensional orthant value.
    """
    if m < 2:
        raise ValueError(f"candidate count must be >= 2, got {m}")
    value = m * equicorrelated_orthant(1.0 / 3.0, m - 1)
    if value > 1.0 + 1e-9:
        raise RuntimeError(f"quadrature produced an invalid probability {value!r}")
    return min(value, 1.0)


def may_bound(m: int) -> float:
    """Decreasing upper bound 2 pi sqrt(2) / sqrt(2m + 1) on the uniform limit."""
    if m < 2:
        raise ValueError(f"candidate count must be >= 2, got {m}")
    return _TWO_PI * math.sqrt(2.0) / math.sqrt(2.0 * m + 1.0)


def ic_curve(ms: list[int]) -> list[tuple[int, float]]:
    """Rows (m, uniform-culture limit) for plotting the limit against m."""
    return [(m, ic_limit_sampford(m)) for m in ms]
