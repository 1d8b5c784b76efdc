"""Incoherent learning protocol and its risk functionals.

A trial works on basis-measurement data only: the hidden target is a basis
index k*, each training state is diagonal, and every response is a finite-shot
(or exact) estimate of a diagonal observable mean.  The learner scores each
candidate index by the squared-difference match between the candidate's
response profile and the target's responses, then picks the argmin with a
uniform tie-break.

Risk between two target hypotheses is the Haar-averaged squared difference of
their measurement means; for rank-1 observables it collapses to an overlap
formula, and a numerically independent trace-norm route is kept alongside for
cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import sample_diagonal_state, sample_orthogonal_family
from .linalg import MAX_QUBITS, as_state
from .rng import Rng, as_generator

_MASK64 = (1 << 64) - 1


def _check_shots(value, name: str) -> int | float:
    if value is None:
        raise ValueError(f"{name} must be a positive integer or inf")
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        if not value.is_integer():
            raise ValueError(f"{name} must be a positive integer or inf, got {value}")
        value = int(value)
    if not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{name} must be a positive integer or inf, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of one learning trial on an n-qubit system."""

    n: int
    r: int
    m: int | float
    N: int
    ortho: bool = False
    candidate_shots: int | float | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n={self.n} outside [1, {MAX_QUBITS}]")
        d = 2**self.n
        if not 1 <= self.r <= d:
            raise ValueError(f"r={self.r} outside [1, {d}]")
        if self.N < 1:
            raise ValueError(f"N={self.N} must be at least 1")
        object.__setattr__(self, "m", _check_shots(self.m, "m"))
        if self.candidate_shots is not None:
            object.__setattr__(self, "candidate_shots", _check_shots(self.candidate_shots, "candidate_shots"))

    @property
    def d(self) -> int:
        return 2**self.n

    def effective_candidate_shots(self) -> int | float:
        return self.m if self.candidate_shots is None else self.candidate_shots


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial, one row of the results table."""

    n: int
    d: int
    r: int
    m: int | float
    N: int
    ortho: bool
    trial_u: int
    trial_d: int
    k_star: int
    k_hat: int
    error_indicator: int
    risk: float
    normalized_error: float
    seed_hash: int


def measure_mean(u: float, shots: int | float, rng: Rng | np.random.Generator) -> float:
    """Mean of `shots` one-bit measurements with success probability u.

    Exact binomial sampling; shots=inf returns u itself.  u may stray from
    [0, 1] by at most 1e-9 of float dust and is clamped back.
    """
    if not -1e-9 <= u <= 1 + 1e-9:
        raise ValueError(f"mean {u} outside [0, 1]")
    u = min(max(u, 0.0), 1.0)
    shots = _check_shots(shots, "shots")
    if math.isinf(shots):
        return u
    gen = as_generator(rng)
    return int(gen.binomial(shots, u)) / shots


def _binomial_mean_array(gen: np.random.Generator, probs: np.ndarray, shots: int | float) -> np.ndarray:
    if math.isinf(shots):
        return probs.astype(float, copy=True)
    return gen.binomial(int(shots), np.clip(probs, 0.0, 1.0)) / shots


def learn_index(target_responses, candidate_responses, rng: Rng | np.random.Generator) -> int:
    """Argmin-score candidate index, ties broken uniformly at random.

    ``candidate_responses`` is a (d, N) matrix whose row k is the response
    profile of candidate k; ``target_responses`` is the length-N target row.
    The tie-break consumes randomness only when there is an exact score tie.
    """
    target = np.asarray(target_responses, dtype=float)
    cand = np.asarray(candidate_responses, dtype=float)
    if target.ndim != 1 or cand.ndim != 2 or cand.shape[1] != target.size:
        raise ValueError(f"shape mismatch: target {target.shape}, candidates {cand.shape}")
    scores = ((cand - target) ** 2).sum(axis=1)
    best = np.flatnonzero(scores == scores.min())
    if best.size == 1:
        return int(best[0])
    gen = as_generator(rng)
    return int(best[gen.integers(best.size)])


def run_trial(
    config: TrialConfig,
    rng: Rng,
    target_rng: Rng | None = None,
    trial_u: int = 0,
    trial_d: int = 0,
) -> TrialRecord:
    """Run one full trial: draw target and data, learn, score.

    ``rng`` drives the dataset and all measurement noise; the hidden target
    index comes from ``target_rng`` (defaults to a child of ``rng``), so a
    harness can hold the target fixed across several dataset redraws.

    Draw order on the data stream is fixed: states first (support permutation
    then weights, state by state), then target responses, then candidate
    responses, then the tie-break if one is needed.
    """
    d = config.d
    if target_rng is None:
        target_rng = rng.child("target")
    k_star = int(target_rng.generator().integers(d))

    gen = rng.generator()
    if config.ortho:
        states = sample_orthogonal_family(d, config.r, config.N, gen)
    else:
        states = [sample_diagonal_state(d, config.r, gen) for _ in range(config.N)]

    # profile[k, j] = mean of the |e_k><e_k| observable on state j
    profile = np.zeros((d, config.N))
    for j, state in enumerate(states):
        profile[state.support, j] = state.weights

    target_responses = _binomial_mean_array(gen, profile[k_star], config.m)
    candidate_responses = _binomial_mean_array(gen, profile, config.effective_candidate_shots())
    k_hat = learn_index(target_responses, candidate_responses, gen)

    wrong = int(k_hat != k_star)
    risk = wrong * 2.0 / (d * (d + 1))
    return TrialRecord(
        n=config.n,
        d=d,
        r=config.r,
        m=config.m,
        N=config.N,
        ortho=config.ortho,
        trial_u=trial_u,
        trial_d=trial_d,
        k_star=k_star,
        k_hat=k_hat,
        error_indicator=wrong,
        risk=risk,
        normalized_error=risk * d * d / 2.0,
        seed_hash=rng.stream & _MASK64,
    )


def rho_metric(mu, nu) -> float:
    """Distance between two back-propagated observable states.

    The trace distance of the pure states rescaled by 1/sqrt(2d(d+1)), which
    makes squared distance equal to the averaged risk.
    """
    from .linalg import trace_distance_pure

    mu = as_state(mu, name="mu")
    d = mu.size
    return trace_distance_pure(mu, nu) / math.sqrt(2 * d * (d + 1))


def risk_closed_form(mu, nu) -> float:
    """Averaged risk between rank-1 hypotheses via the overlap formula.

    mu and nu are the observable's back-propagated pure states under the two
    unitaries; the risk is 2(1 - |<mu|nu>|^2)/(d(d+1)).
    """
    from .linalg import fidelity_pure

    mu = as_state(mu, name="mu")
    nu = as_state(nu, name="nu")
    d = mu.size
    return 2.0 * (1.0 - fidelity_pure(mu, nu)) / (d * (d + 1))


def risk_trace_norm_form(mu, nu) -> float:
    """Same risk through the trace-norm route, kept numerically independent.

    Computes ||mu mu' - nu nu'||_1 from eigenvalues and squares it, rather
    than reusing the overlap shortcut, so the two routes cross-check each
    other in tests.
    """
    mu = as_state(mu, name="mu")
    nu = as_state(nu, name="nu")
    if mu.size != nu.size:
        raise ValueError(f"dimension mismatch: {mu.size} vs {nu.size}")
    d = mu.size
    diff = np.outer(mu, mu.conj()) - np.outer(nu, nu.conj())
    one_norm = float(np.abs(np.linalg.eigvalsh(diff)).sum())
    return one_norm**2 / (2.0 * d * (d + 1))


def risk_monte_carlo(
    mu,
    nu,
    samples: int,
    rng: Rng | np.random.Generator,
    batch: int = 100_000,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the averaged risk, with its standard error.

    Averages (|<mu|phi>|^2 - |<nu|phi>|^2)^2 over Haar states phi, drawn in
    batches.  Returns (estimate, stderr).
    """
    from .haar import haar_state

    mu = as_state(mu, name="mu")
    nu = as_state(nu, name="nu")
    if mu.size != nu.size:
        raise ValueError(f"dimension mismatch: {mu.size} vs {nu.size}")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    gen = as_generator(rng)
    d = mu.size
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        phi = haar_state(d, gen, size=k)
        vals = (np.abs(phi @ mu.conj()) ** 2 - np.abs(phi @ nu.conj()) ** 2) ** 2
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        done += k
    mean = total / samples
    var = max(0.0, total_sq / samples - mean**2) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)
