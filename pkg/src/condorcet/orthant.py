"""Positive-orthant probabilities of zero-mean multivariate normal vectors.

These are the L-functions of the large-electorate limit: the probability that
every coordinate of a standardized normal vector with correlation matrix R is
non-negative. Closed forms exist through dimension three; equicorrelated
matrices of any dimension reduce to a one-dimensional integral; everything
else falls back to a seeded Monte Carlo estimate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_TWO_PI = 2.0 * math.pi

DEFAULT_MC_SAMPLES = 10_000_000
DEFAULT_MC_SEED = 123456789
EQUICORRELATION_TOL = 1e-12
_INTEGRATION_HALF_WIDTH = 12.0  # exp(-144) tail, truncation error far below 1e-30


class CorrelationMatrixError(ValueError):
    """A matrix handed to the orthant routines is not a usable correlation matrix."""


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to full relative precision in both tails."""
    return 0.5 * math.erfc(-x / _SQRT2)


def validate_correlation_matrix(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise CorrelationMatrixError(f"expected a square matrix, got shape {r.shape}")
    if r.size == 0:
        return r
    if not np.allclose(r, r.T, atol=1e-9, rtol=0.0):
        raise CorrelationMatrixError("matrix is not symmetric")
    if np.any(np.abs(np.diag(r) - 1.0) > 1e-12):
        raise CorrelationMatrixError("diagonal entries must equal 1")
    if np.any(np.abs(r) > 1.0 + 1e-12):
        raise CorrelationMatrixError("off-diagonal entries must lie in [-1, 1]")
    if np.min(np.linalg.eigvalsh((r + r.T) / 2.0)) < -1e-9:
        raise CorrelationMatrixError("matrix is not positive semidefinite")
    return r


def _common_correlation(r: np.ndarray, tol: float = EQUICORRELATION_TOL) -> float | None:
    """The shared off-diagonal value when ``r`` is equicorrelated, else None."""
    d = r.shape[0]
    off = r[~np.eye(d, dtype=bool)]
    if off.size == 0:
        return None
    first = float(off[0])
    return first if np.all(np.abs(off - first) <= tol) else None


def equicorrelated_orthant(rho: float, d: int) -> float:
    """Orthant probability for d standardized normals with common correlation rho.

    Uses the scale-mixture representation: with a = sqrt(2 rho / (1 - rho)),

        L_d(rho) = pi**-0.5 * integral exp(-t^2) (1 - Phi(a t))**d dt

    over the real line, truncated to [-12, 12] (truncation error below 1e-30)
    and evaluated by adaptive quadrature to an absolute tolerance of 1e-12.
    Requires 0 <= rho < 1; rho = 1/3 gives a = 1.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"common correlation must be in [0, 1), got {rho!r}")
    a = math.sqrt(2.0 * rho / (1.0 - rho))

    def integrand(t: float) -> float:
        return math.exp(-t * t) * (1.0 - std_normal_cdf(a * t)) ** d

    value, _ = quad(
        integrand,
        -_INTEGRATION_HALF_WIDTH,
        _INTEGRATION_HALF_WIDTH,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=400,
    )
    return value / _SQRT_PI


def bacon_recursion(rho: float, d: int) -> float:
    """Odd-dimensional equicorrelated orthant probability by recursion.

    For odd d >= 3 the orthant probability follows from the lower-dimensional
    values:

        L_d = (1/2) [1 - d/2 + sum_{k=2}^{d-1} (-1)^k C(d, k) L_k]

    with L_1 = 1/2 and L_2 = 1/4 + arcsin(rho) / (2 pi). Even terms of
    dimension >= 4 are taken from :func:`equicorrelated_orthant`, which
    restricts d >= 5 to rho >= 0.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"recursion applies to odd dimensions >= 3, got {d}")
    if not abs(rho) < 1.0:
        raise ValueError(f"common correlation must satisfy |rho| < 1, got {rho!r}")
    if d >= 5 and rho < 0.0:
        raise ValueError("dimensions >= 5 require a non-negative common correlation")
    values = {1: 0.5, 2: 0.25 + math.asin(rho) / _TWO_PI}
    for dim in range(3, d + 1):
        if dim % 2 == 0:
            values[dim] = equicorrelated_orthant(rho, dim)
        else:
            acc = 1.0 - dim / 2.0
            for k in range(2, dim):
                acc += (-1) ** k * math.comb(dim, k) * values[k]
            values[dim] = 0.5 * acc
    return values[d]


def _cholesky_with_jitter(r: np.ndarray) -> np.ndarray:
    for jitter in (0.0, 1e-14, 1e-12, 1e-10):
        try:
            return np.linalg.cholesky(r + jitter * np.eye(r.shape[0]))
        except np.linalg.LinAlgError:
            continue
    raise CorrelationMatrixError(
        "matrix is not positive semidefinite within jitter 1e-10"
    )


def orthant_mc(
    r: np.ndarray,
    samples: int = DEFAULT_MC_SAMPLES,
    seed=DEFAULT_MC_SEED,
    chunk: int = 1_000_000,
) -> tuple[float, float]:
    """Monte Carlo estimate of the positive-orthant probability of N(0, R).

    Returns (estimate, stderr). Deterministic for a fixed seed: samples are
    drawn in fixed-size chunks from a single PCG64 stream.
    """
    r = validate_correlation_matrix(r)
    if samples < 1:
        raise ValueError(f"sample count must be >= 1, got {samples}")
    d = r.shape[0]
    if d == 0:
        return 1.0, 0.0
    chol = _cholesky_with_jitter(r)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    hits = 0
    remaining = samples
    while remaining > 0:
        batch = min(chunk, remaining)
        z = rng.standard_normal((batch, d)) @ chol.T
        hits += int(np.count_nonzero(np.all(z >= 0.0, axis=1)))
        remaining -= batch
    estimate = hits / samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / samples)
    return estimate, stderr


def orthant_zero_probability(
    r: np.ndarray,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    mc_seed=DEFAULT_MC_SEED,
) -> tuple[float, float | None, str]:
    """Orthant probability with all thresholds at zero: (value, stderr, method).

    Dimensions 0..3 use closed forms; dimension >= 4 uses the equicorrelated
    integral when the matrix is equicorrelated with non-negative correlation
    (detected within 1e-12), otherwise a Monte Carlo estimate whose stderr is
    reported.
    """
    r = np.asarray(r, dtype=float)
    d = r.shape[0]
    if d == 0:
        return 1.0, None, "exact"
    if d == 1:
        return 0.5, None, "exact"
    if d == 2:
        return 0.25 + math.asin(float(r[0, 1])) / _TWO_PI, None, "closed-form"
    if d == 3:
        arcs = math.asin(float(r[0, 1])) + math.asin(float(r[0, 2])) + math.asin(float(r[1, 2]))
        return (1.0 + (2.0 / math.pi) * arcs) / 8.0, None, "closed-form"
    rho = _common_correlation(r)
    if rho is not None and rho >= 0.0:
        return equicorrelated_orthant(rho, d), None, "equicorrelated-integral"
    estimate, stderr = orthant_mc(r, mc_samples, mc_seed)
    return estimate, stderr, "monte-carlo"


def orthant_probability(
    deltas,
    r: np.ndarray,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    mc_seed=DEFAULT_MC_SEED,
) -> float:
    """L-function with thresholds restricted to 0 and +/- infinity.

    Any +inf threshold forces the value to 0. -inf thresholds are dropped and
    the marginal correlation submatrix of the remaining coordinates is used;
    what remains is an all-zero-threshold orthant problem.
    """
    deltas = np.asarray(deltas, dtype=float)
    r = np.asarray(r, dtype=float)
    if deltas.shape != (r.shape[0],):
        raise ValueError(
            f"got {deltas.shape[0] if deltas.ndim else 0} thresholds "
            f"for a correlation matrix of dimension {r.shape[0]}"
        )
    finite = np.isfinite(deltas)
    if np.any(deltas[finite] != 0.0):
        raise ValueError("finite thresholds must be exactly 0")
    if np.any(deltas == math.inf):
        return 0.0
    keep = deltas == 0.0
    sub = r[np.ix_(keep, keep)]
    value, _, _ = orthant_zero_probability(sub, mc_samples, mc_seed)
    return value
