"""Rank orders over candidates and probability distributions (cultures) on them.

Candidates are the integers 0..m-1. A rank order is a tuple of all m
candidates, most preferred first, and the K = m! orders are indexed in
lexicographic sequence. Every probability vector in this package is aligned
with that canonical indexing (index 0 is always (0, 1, ..., m-1)).

Cultures are validated strictly: entries must be non-negative and sum to one
within 1e-12. Inputs that fail are rejected rather than silently renormalized,
so data errors surface at the boundary instead of being averaged away.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

MIN_CANDIDATES = 2
MAX_CANDIDATES = 8  # K = 8! = 40320, the largest order enumeration kept in memory
PROBABILITY_SUM_TOL = 1e-12
DUAL_TOL = 1e-12


class CultureFormatError(ValueError):
    """A culture file or probability vector failed validation."""


def _check_candidate_count(m: int) -> None:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise ValueError(f"candidate count must be an integer, got {m!r}")
    if not MIN_CANDIDATES <= m <= MAX_CANDIDATES:
        raise ValueError(
            f"candidate count must be in [{MIN_CANDIDATES}, {MAX_CANDIDATES}], got {m}"
        )


def _validate_order(order) -> tuple[int, ...]:
    o = tuple(int(c) for c in order)
    _check_candidate_count(len(o))
    if sorted(o) != list(range(len(o))):
        raise ValueError(f"not a permutation of 0..{len(o) - 1}: {order!r}")
    return o


@lru_cache(maxsize=None)
def enumerate_rank_orders(m: int) -> tuple[tuple[int, ...], ...]:
    """Return all m! rank orders of m candidates in lexicographic order.

    The position of an order in this sequence is its canonical index; every
    culture probability vector is aligned with it.
    """
    _check_candidate_count(m)
    return tuple(itertools.permutations(range(m)))


@lru_cache(maxsize=None)
def _order_index_map(m: int) -> dict[tuple[int, ...], int]:
    return {o: i for i, o in enumerate(enumerate_rank_orders(m))}


def order_index(order) -> int:
    """Canonical index of a rank order within ``enumerate_rank_orders``."""
    o = _validate_order(order)
    return _order_index_map(len(o))[o]


def dual_order(order) -> tuple[int, ...]:
    """The reversal of a rank order (an involution)."""
    return tuple(reversed(_validate_order(order)))


@lru_cache(maxsize=None)
def _dual_permutation(m: int) -> tuple[int, ...]:
    index = _order_index_map(m)
    return tuple(index[tuple(reversed(o))] for o in enumerate_rank_orders(m))


def preference_sign(order, i: int, j: int) -> int:
    """+1 if candidate i is ranked above candidate j in the order, else -1."""
    o = _validate_order(order)
    m = len(o)
    if i == j:
        raise ValueError("candidates must be distinct")
    if not (0 <= i < m and 0 <= j < m):
        raise ValueError(f"candidate out of range for m={m}: ({i}, {j})")
    return 1 if o.index(i) < o.index(j) else -1


def joint_preference_sign(order, i: int, j: int, l: int) -> int:
    """+1 if i beats both j and l, or loses to both, in the order; else -1.

    Equals the product ``preference_sign(order, i, j) * preference_sign(order, i, l)``.
    """
    o = _validate_order(order)
    m = len(o)
    if len({i, j, l}) != 3:
        raise ValueError("candidates must be pairwise distinct")
    if not all(0 <= c < m for c in (i, j, l)):
        raise ValueError(f"candidate out of range for m={m}: ({i}, {j}, {l})")
    pi, pj, pl = o.index(i), o.index(j), o.index(l)
    return 1 if (pi < pj) == (pi < pl) else -1


@lru_cache(maxsize=None)
def pair_sign_matrix(m: int) -> np.ndarray:
    """Signed preference tensor of shape (m, m, K).

    Entry [i, j, k] is +1 when rank order k puts candidate i above candidate j,
    -1 when below, and 0 on the diagonal i == j. Shared by every computation
    that turns vote counts or probabilities into pairwise margins.
    """
    orders = np.array(enumerate_rank_orders(m), dtype=np.int64)
    positions = np.argsort(orders, axis=1)  # positions[k, c] = rank of candidate c
    diff = positions[:, None, :] - positions[:, :, None]  # [k, i, j] = pos(j) - pos(i)
    signs = np.sign(diff).astype(np.int8).transpose(1, 2, 0)
    signs.flags.writeable = False
    return signs


@dataclass(frozen=True)
class Culture:
    """Probability distribution over the m! rank orders of m candidates.

    ``probs[i]`` is the probability that a single voter casts the rank order
    with canonical index i. Instances are immutable and safe to share across
    threads; the underlying array is read-only.
    """

    m: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        _check_candidate_count(self.m)
        p = np.array(self.probs, dtype=float)
        k = math.factorial(self.m)
        if p.shape != (k,):
            raise CultureFormatError(
                f"expected {k} probabilities for m={self.m}, got shape {p.shape}"
            )
        if np.any(p < 0.0):
            bad = int(np.argmin(p))
            raise CultureFormatError(
                f"negative probability {p[bad]!r} at order index {bad}"
            )
        total = float(p.sum())
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise CultureFormatError(
                f"probabilities sum to {total!r}, off by {total - 1.0:+.3e} "
                f"(tolerance {PROBABILITY_SUM_TOL:g}); inputs are not renormalized"
            )
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def n_orders(self) -> int:
        return self.probs.shape[0]

    def support(self) -> np.ndarray:
        """Indices of rank orders carrying non-zero probability."""
        return np.nonzero(self.probs > 0.0)[0]


def impartial_culture(m: int) -> Culture:
    """The uniform culture: every rank order has probability 1/m!."""
    _check_candidate_count(m)
    k = math.factorial(m)
    return Culture(m, np.full(k, 1.0 / k))


def cyclic_minimizer_culture(m: int) -> Culture:
    """Mass 1/m on each cyclic rotation of (0, 1, ..., m-1), zero elsewhere.

    This culture minimizes the winner probability over all cultures for every
    number of voters.
    """
    _check_candidate_count(m)
    probs = np.zeros(math.factorial(m))
    for shift in range(m):
        rotation = tuple((shift + off) % m for off in range(m))
        probs[order_index(rotation)] = 1.0 / m
    return Culture(m, probs)


def is_dual_culture(culture: Culture, tol: float = DUAL_TOL) -> bool:
    """True when every rank order and its reversal carry equal probability."""
    dual = np.array(_dual_permutation(culture.m))
    return bool(np.all(np.abs(culture.probs - culture.probs[dual]) <= tol))


def pairwise_win_probability(culture: Culture, i: int, j: int) -> float:
    """Probability that a single voter ranks candidate i above candidate j."""
    if i == j:
        raise ValueError("candidates must be distinct")
    if not (0 <= i < culture.m and 0 <= j < culture.m):
        raise ValueError(f"candidate out of range for m={culture.m}: ({i}, {j})")
    mask = pair_sign_matrix(culture.m)[i, j] > 0
    return float(culture.probs[mask].sum())


# ---------------------------------------------------------------------------
# Serialization. Both formats round-trip floats exactly (17 significant
# digits); the CSV order key is the candidate sequence joined by hyphens.
# ---------------------------------------------------------------------------


def culture_to_json(culture: Culture) -> str:
    return json.dumps({"m": culture.m, "probs": [float(p) for p in culture.probs]})


def culture_from_json(text: str) -> Culture:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CultureFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or set(obj) != {"m", "probs"}:
        raise CultureFormatError('expected a JSON object with keys "m" and "probs"')
    m, probs = obj["m"], obj["probs"]
    if not isinstance(m, int):
        raise CultureFormatError(f'field "m" must be an integer, got {m!r}')
    if not isinstance(probs, list):
        raise CultureFormatError('field "probs" must be a list of numbers')
    return Culture(m, np.array(probs, dtype=float))


def culture_to_csv(culture: Culture) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["order", "prob"])
    for o, p in zip(enumerate_rank_orders(culture.m), culture.probs):
        writer.writerow(["-".join(map(str, o)), format(p, ".17g")])
    return out.getvalue()


def culture_from_csv(text: str) -> Culture:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [f.strip() for f in rows[0]] != ["order", "prob"]:
        raise CultureFormatError('expected CSV header "order,prob"')
    m = None
    seen: dict[int, float] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise CultureFormatError(f"line {lineno}: expected 2 fields, got {len(row)}")
        key, value = row[0].strip(), row[1].strip()
        try:
            order = tuple(int(part) for part in key.split("-"))
        except ValueError:
            raise CultureFormatError(
                f"line {lineno}, field 'order': cannot parse {key!r}"
            ) from None
        if m is None:
            m = len(order)
        elif len(order) != m:
            raise CultureFormatError(
                f"line {lineno}, field 'order': expected {m} candidates, got {len(order)}"
            )
        try:
            idx = order_index(order)
        except ValueError as exc:
            raise CultureFormatError(f"line {lineno}, field 'order': {exc}") from None
        if idx in seen:
            raise CultureFormatError(f"line {lineno}: duplicate order key {key!r}")
        try:
            prob = float(value)
        except ValueError:
            raise CultureFormatError(
                f"line {lineno}, field 'prob': cannot parse {value!r}"
            ) from None
        if prob < 0.0:
            raise CultureFormatError(f"line {lineno}, field 'prob': negative value {value}")
        seen[idx] = prob
    if m is None:
        raise CultureFormatError("no culture rows found")
    k = math.factorial(m)
    if len(seen) != k:
        raise CultureFormatError(f"expected {k} rows for m={m}, got {len(seen)}")
    probs = np.zeros(k)
    for idx, prob in seen.items():
        probs[idx] = prob
    return Culture(m, probs)


def save_culture(culture: Culture, path, fmt: str | None = None) -> None:
    """Write a culture to ``path`` as JSON or CSV (inferred from the suffix)."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    if fmt == "json":
        path.write_text(culture_to_json(culture) + "\n")
    elif fmt == "csv":
        path.write_text(culture_to_csv(culture))
    else:
        raise ValueError(f"unknown culture format {fmt!r}")


def load_culture_file(path, fmt: str | None = None) -> Culture:
    """Read a culture from a JSON or CSV file written by :func:`save_culture`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CultureFormatError(f"cannot read {path}: {exc}") from None
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    try:
        if fmt == "csv":
            return culture_from_csv(text)
        if fmt == "json":
            return culture_from_json(text)
    except CultureFormatError as exc:
        raise CultureFormatError(f"{path}: {exc}") from None
    raise ValueError(f"unknown culture format {fmt!r}")
