"""Closed-form quantities: lower bounds, moment formulas, packing, tails.

The two lower-bound evaluators (a fully explicit one and an order-of-magnitude
one with all constants set to 1) are plain formula transcriptions, clamped at
zero.  The published display and the end of its own derivation disagree by a
factor of 16 on one branch of the inner minimum; ``log_multiplier`` switches
between the two readings (1 keeps the display, 16 keeps the derivation).

Two of the published moment formulas (shot variance, mean gap) do not agree
with the sampling construction they describe for r >= 2; the module carries
both the published forms and the first-principles ones, and the verification
suites report each against Monte Carlo.  See the *_exact functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .haar import haar_state, haar_unitary
from .linalg import trace_distance_pure
from .rng import Rng, as_generator

__all__ = [
    "BoundInput",
    "nfl_bound_formal",
    "formal_branch_switch_m",
    "nfl_bound_informal",
    "ideal_nfl_bound",
    "expected_shot_variance",
    "shot_variance_exact",
    "expected_mean_gap_sq",
    "mean_gap_sq_exact",
    "PackingResult",
    "packing_sample",
    "validate_packing",
    "TailEstimate",
    "projector_overlap_tail",
]


def admissible_eps_interval(gamma: float = 4.0) -> tuple[float, float]:
    """Open interval of eps_tilde values satisfying 0 < 4 g^2 e^2 - 1 < 1 and e < 1/2."""
    lo = 1.0 / (2.0 * gamma)
    hi = min(0.5, math.sqrt(2.0) / (2.0 * gamma))
    return lo, hi


@dataclass(frozen=True)
class BoundInput:
    """Arguments of the explicit lower bound.

    eps_tilde is the rescaled packing radius; with the default gamma = 4 it
    must lie in (1/8, sqrt(2)/8).  m may be math.inf, which forces the
    data-independent branch of the inner minimum.
    """

    d: int
    N: int
    m: int | float
    r: int
    eps_tilde: float = 0.15
    gamma: float = 4.0
    log_multiplier: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d={self.d} must be at least 2")
        if not 1 <= self.r <= self.d:
            raise ValueError(f"r={self.r} outside [1, {self.d}]")
        if self.N < 0:
            raise ValueError(f"N={self.N} must be non-negative")
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 0) and not (
            isinstance(self.m, float) and math.isinf(self.m) and self.m > 0
        ):
            raise ValueError(f"m={self.m!r} must be a non-negative integer or inf")
        if self.gamma <= 2:
            raise ValueError(f"gamma={self.gamma} must exceed 2")
        lo, hi = admissible_eps_interval(self.gamma)
        if not lo < self.eps_tilde < hi:
            raise ValueError(
                f"eps_tilde={self.eps_tilde} outside the admissible interval ({lo:.6g}, {hi:.6g})"
            )
        if self.log_multiplier not in (1, 16):
            raise ValueError(f"log_multiplier={self.log_multiplier} must be 1 or 16")


def _margin_denominator(eps_tilde: float, gamma: float) -> float:
    return min((1.0 - 2.0 * eps_tilde) ** 2, (4.0 * gamma**2 * eps_tilde**2 - 1.0) ** 2)


def nfl_bound_formal(inp: BoundInput) -> float:
    """Explicit risk lower bound, clamped at zero.

    Evaluates e^2/(8d(d+1)) * (1 - (N min{8 g^2 m e^2 / ((d+1) r),
    L r log2 d} + 16) / (d min{(1-2e)^2, (4 g^2 e^2 - 1)^2})) with e the
    rescaled radius, g = gamma and L the log multiplier.  All logs are base 2,
    which turns the additive log-2 constant into exactly 16.
    """
    d, e, g = inp.d, inp.eps_tilde, inp.gamma
    shot_branch = 8.0 * g**2 * inp.m * e**2 / ((d + 1) * inp.r) if not math.isinf(inp.m) else math.inf
    dim_branch = inp.log_multiplier * inp.r * math.log2(d)
    numerator = inp.N * min(shot_branch, dim_branch) + 16.0
    value = e**2 / (8.0 * d * (d + 1)) * (1.0 - numerator / (d * _margin_denominator(e, g)))
    return max(0.0, value)


def formal_branch_switch_m(inp: BoundInput) -> float:
    """Shot count at which the inner minimum changes branch.

    Solves 8 g^2 m e^2 / ((d+1) r) = L r log2 d for m; below the value the
    shot branch is active, above it the dimension branch.
    """
    d, e, g = inp.d, inp.eps_tilde, inp.gamma
    return inp.log_multiplier * inp.r**2 * (d + 1) * math.log2(d) / (8.0 * g**2 * e**2)


def nfl_bound_informal(n: int, N: int, m: int | float, r: int, eps_tilde: float = 0.15) -> float:
    """Order-of-magnitude form of the bound with every constant set to 1.

    Evaluates (e^2/4^n)(1 - N min{m/(r c1), r n} / (2^n c2)) with
    c1 = 128 (2^n + 1)/e^2 and c2 = min{(1-2e)^2, (64 e^2 - 1)^2}, clamped
    at zero.  n is the qubit count, d = 2^n.
    """
    if n < 1:
        raise ValueError(f"n={n} must be at least 1")
    d = 2**n
    inp = BoundInput(d=d, N=N, m=m, r=r, eps_tilde=eps_tilde)  # reuse argument validation
    e = inp.eps_tilde
    c1 = 128.0 * (d + 1) / e**2
    c2 = _margin_denominator(e, 4.0)
    shot_branch = m / (r * c1) if not math.isinf(m) else math.inf
    value = e**2 / 4**n * (1.0 - N * min(shot_branch, r * n) / (d * c2))
    return max(0.0, value)


def ideal_nfl_bound(d: int, r: int, N: int) -> float:
    """Risk floor for noiseless learning: max(0, 1 - (d + r^2 N^2)/(d(d+1))).

    Depends on r and N only through the product r*N.
    """
    if d < 2:
        raise ValueError(f"d={d} must be at least 2")
    if r < 1 or N < 0:
        raise ValueError(f"r={r}, N={N} out of range")
    return max(0.0, 1.0 - (d + (r * N) ** 2) / (d * (d + 1.0)))


def expected_shot_variance(d: int, r: int, m: int | float) -> float:
    """Published closed form (dr - 1)/(m r d (d+1)) for the response variance.

    This is the equal-weight value; the sampling construction's true value is
    :func:`shot_variance_exact`, which differs for r >= 2.  Also note the
    published claim that this quantity is at least 1/(md) is false for every
    r >= 1: the value is always strictly below 1/(md).
    """
    _check_variance_args(d, r, m)
    if math.isinf(m):
        return 0.0
    return (d * r - 1.0) / (m * r * d * (d + 1.0))


def shot_variance_exact(d: int, r: int, m: int | float) -> float:
    """First-principles response variance under Haar (flat-Dirichlet) weights.

    E[u(1-u)]/m with E[u^2] = (r+3)/((r+1) d (d+1)), which the weight and
    family moments give directly; equals the published form only at r = 1.
    """
    _check_variance_args(d, r, m)
    if math.isinf(m):
        return 0.0
    return (r * d + d - 2.0) / (m * (r + 1.0) * d * (d + 1.0))


def _check_variance_args(d: int, r: int, m: int | float) -> None:
    if d < 2 or not 1 <= r <= d:
        raise ValueError(f"need d >= 2 and 1 <= r <= d, got d={d}, r={r}")
    if not (isinstance(m, (int, np.integer)) and m >= 1) and not (
        isinstance(m, float) and math.isinf(m) and m > 0
    ):
        raise ValueError(f"m={m!r} must be a positive integer or inf")


def expected_mean_gap_sq(rho: float, d: int, r: int) -> float:
    """Published mean squared response gap between two fixed orthogonal targets.

    2 rho^2/(r+1) - (r-1)/((r+1) d (d^2-1)) with rho the rescaled distance of
    the two targets.  The cross-term constant is too small by the factor 2
    that the orthogonal-pair moment actually carries; the corrected value is
    :func:`mean_gap_sq_exact`.  The two agree at r = 1.
    """
    _check_gap_args(rho, d, r)
    return 2.0 * rho**2 / (r + 1.0) - (r - 1.0) / ((r + 1.0) * d * (d**2 - 1.0))


def mean_gap_sq_exact(rho: float, d: int, r: int) -> float:
    """First-principles mean squared response gap, rho^2 (2d-r-1)/((r+1)(d-1))."""
    _check_gap_args(rho, d, r)
    return rho**2 * (2.0 * d - r - 1.0) / ((r + 1.0) * (d - 1.0))


def _check_gap_args(rho: float, d: int, r: int) -> None:
    if d < 2 or not 1 <= r <= d:
        raise ValueError(f"need d >= 2 and 1 <= r <= d, got d={d}, r={r}")
    if rho < 0:
        raise ValueError(f"rho={rho} must be non-negative")


@dataclass(frozen=True)
class PackingResult:
    """Outcome of a randomized packing search.

    On success ``states`` holds the packed pure states as rows.  On failure it
    is None and the violation counters say how many pair distances fell below
    the lower edge or above the upper edge across all attempts.
    """

    success: bool
    attempts: int
    states: np.ndarray | None = None
    below: int = 0
    above: int = 0
    window: tuple[float, float] = field(default=(0.0, 0.0))


def _pairwise_trace_distances(states: np.ndarray) -> np.ndarray:
    overlaps = np.abs(states @ states.conj().T) ** 2
    iu = np.triu_indices(states.shape[0], k=1)
    return 2.0 * np.sqrt(np.maximum(0.0, 1.0 - overlaps[iu]))


def packing_sample(
    d: int,
    L: int,
    eps: float,
    gamma: float,
    rng: Rng | np.random.Generator,
    max_attempts: int = 100,
) -> PackingResult:
    """Try to draw L Haar states with all pairwise trace distances in [2 eps, gamma eps].

    Rejection-samples whole L-tuples.  A lower window edge above 2, the
    largest possible trace distance, fails immediately with zero attempts.
    """
    if d < 2 or L < 2:
        raise ValueError(f"need d >= 2 and L >= 2, got d={d}, L={L}")
    if eps <= 0:
        raise ValueError(f"eps={eps} must be positive")
    if gamma <= 2:
        raise ValueError(f"gamma={gamma} must exceed 2")
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    lo, hi = 2.0 * eps, gamma * eps
    if lo > 2.0:
        return PackingResult(success=False, attempts=0, window=(lo, hi))
    gen = as_generator(rng)
    below = above = 0
    for attempt in range(1, max_attempts + 1):
        states = haar_state(d, gen, size=L)
        dists = _pairwise_trace_distances(states)
        n_below = int((dists < lo).sum())
        n_above = int((dists > hi).sum())
        if n_below == 0 and n_above == 0:
            return PackingResult(success=True, attempts=attempt, states=states, window=(lo, hi))
        below += n_below
        above += n_above
    return PackingResult(success=False, attempts=max_attempts, below=below, above=above, window=(lo, hi))


def validate_packing(states, eps: float, gamma: float) -> list[tuple[int, int, float, str]]:
    """Replay the packing postcondition; returns the list of violating pairs."""
    states = np.asarray(states, dtype=np.complex128)
    lo, hi = 2.0 * eps, gamma * eps
    bad = []
    for i in range(states.shape[0]):
        for j in range(i + 1, states.shape[0]):
            dist = trace_distance_pure(states[i], states[j])
            if dist < lo:
                bad.append((i, j, dist, "below"))
            elif dist > hi:
                bad.append((i, j, dist, "above"))
    return bad


@dataclass(frozen=True)
class TailEstimate:
    """Empirical two-sided tail frequencies of the projector overlap, with bounds."""

    lower: float
    upper: float
    lower_bound: float
    upper_bound: float
    lower_se: float
    upper_se: float
    samples: int


def projector_overlap_tail(
    d: int,
    r1: int,
    r2: int,
    t: float,
    samples: int,
    rng: Rng | np.random.Generator,
    batch: int = 20_000,
) -> TailEstimate:
    """Empirical tails of Tr(P1 W P2 W') around its Haar mean r1 r2 / d.

    P1 and P2 are rank-r1 and rank-r2 basis projectors; W is Haar.  The lower
    tail is the frequency of values at most (1-t) r1 r2 / d, the upper tail of
    values at least (1+t) r1 r2 / d.  Exponential reference bounds
    exp(-r1 r2 t^2 / 2) and exp(-r1 r2 t^2 / 4) come along for comparison.
    """
    if not (1 <= r1 <= d and 1 <= r2 <= d):
        raise ValueError(f"ranks must lie in [1, {d}], got r1={r1}, r2={r2}")
    if not 0 < t < 1:
        raise ValueError(f"t={t} outside (0, 1)")
    if samples < 1:
        raise ValueError("samples must be positive")
    gen = as_generator(rng)
    mean = r1 * r2 / d
    n_lower = n_upper = 0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        w = haar_unitary(d, gen, size=k)
        overlap = (np.abs(w[:, :r1, :r2]) ** 2).sum(axis=(1, 2))
        n_lower += int((overlap <= (1.0 - t) * mean).sum())
        n_upper += int((overlap >= (1.0 + t) * mean).sum())
        done += k
    p_lo = n_lower / samples
    p_hi = n_upper / samples
    return TailEstimate(
        lower=p_lo,
        upper=p_hi,
        lower_bound=math.exp(-r1 * r2 * t**2 / 2.0),
        upper_bound=math.exp(-r1 * r2 * t**2 / 4.0),
        lower_se=math.sqrt(max(p_lo * (1 - p_lo), 1e-12) / samples),
        upper_se=math.sqrt(max(p_hi * (1 - p_hi), 1e-12) / samples),
        samples=samples,
    )
