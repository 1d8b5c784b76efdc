"""Training-state ensembles.

Two samplers matter.  The general one draws an entangled pure state on a
main (x) reference register pair with a given Schmidt rank: Haar weights,
one orthonormal Haar family per register.  The diagonal one is its
computational-basis specialization used by the measurement protocol, where
a state is just a weighted subset of basis indices.  Orthogonal families
pack several diagonal states onto disjoint index blocks of one permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .haar import haar_probability_vector, orthonormal_haar_family
from .linalg import ATOL, kron
from .rng import Rng, as_generator

__all__ = [
    "EntangledState",
    "DiagonalState",
    "TrainingExample",
    "sample_entangled_general",
    "sample_diagonal_state",
    "sample_orthogonal_family",
    "expectation_diagonal",
    "expectation_general",
]


def _check_weights(weights: np.ndarray, r: int) -> None:
    if weights.shape != (r,):
        raise ValueError(f"weights shape {weights.shape} does not match rank {r}")
    if np.any(weights < -ATOL):
        raise ValueError("weights must be non-negative")
    if abs(weights.sum() - 1.0) > 1e-8:
        raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")


def _check_orthonormal_rows(mat: np.ndarray, name: str) -> None:
    gram = mat @ mat.conj().T
    if not np.allclose(gram, np.eye(mat.shape[0]), atol=1e-8):
        raise ValueError(f"{name} rows are not orthonormal")


@dataclass(frozen=True)
class EntangledState:
    """Schmidt-rank-r pure state sum_k sqrt(w_k) |xi_k>|zeta_k> on C^d (x) C^d.

    ``xi`` and ``zeta`` hold the two orthonormal families as rows, shape (r, d).
    """

    d: int
    r: int
    weights: np.ndarray
    xi: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        if not 1 <= self.r <= self.d:
            raise ValueError(f"rank r={self.r} must satisfy 1 <= r <= d={self.d}")
        _check_weights(self.weights, self.r)
        for name, fam in (("xi", self.xi), ("zeta", self.zeta)):
            if fam.shape != (self.r, self.d):
                raise ValueError(f"{name} shape {fam.shape}, expected {(self.r, self.d)}")
            _check_orthonormal_rows(fam, name)

    def vector(self) -> np.ndarray:
        """Amplitudes on the composite register, main index major."""
        out = np.zeros(self.d * self.d, dtype=np.complex128)
        for w, x, z in zip(np.sqrt(self.weights), self.xi, self.zeta):
            out += w * kron(x, z)
        return out

    def reduced_main(self) -> np.ndarray:
        """Density matrix sum_k w_k |xi_k><xi_k| left on the main register."""
        return np.einsum("k,ki,kj->ij", self.weights, self.xi, self.xi.conj())


@dataclass(frozen=True)
class DiagonalState:
    """Mixed state diagonal in the computational basis with r-point support."""

    d: int
    support: np.ndarray  # shape (r,), distinct indices in [0, d)
    weights: np.ndarray  # shape (r,), probabilities on the support

    def __post_init__(self):
        sup = self.support
        if sup.ndim != 1 or sup.size < 1:
            raise ValueError("support must be a non-empty 1-D index array")
        if np.unique(sup).size != sup.size:
            raise ValueError("support indices must be distinct")
        if sup.min() < 0 or sup.max() >= self.d:
            raise ValueError(f"support indices must lie in [0, {self.d})")
        _check_weights(self.weights, sup.size)

    @property
    def r(self) -> int:
        return int(self.support.size)

    def dense_probabilities(self) -> np.ndarray:
        """Length-d vector of diagonal entries (basis-measurement profile)."""
        out = np.zeros(self.d)
        out[self.support] = self.weights
        return out


@dataclass(frozen=True)
class TrainingExample:
    """One labelled example: a training state and its measured mean response."""

    state: DiagonalState | EntangledState
    response: float
    shots: int | float

    def __post_init__(self):
        if not 0.0 <= self.response <= 1.0:
            raise ValueError(f"response {self.response} outside [0, 1]")
        if np.isfinite(self.shots):
            k = self.response * self.shots
            if abs(k - round(k)) > 1e-9:
                raise ValueError(f"response {self.response} is not a multiple of 1/{self.shots}")


def sample_entangled_general(d: int, r: int, rng: Rng | np.random.Generator) -> EntangledState:
    """Draw one rank-r entangled training state (Haar weights and families)."""
    gen = as_generator(rng)
    weights = haar_probability_vector(r, gen)
    xi = orthonormal_haar_family(d, r, gen)
    zeta = orthonormal_haar_family(d, r, gen)
    return EntangledState(d=d, r=r, weights=weights, xi=xi, zeta=zeta)


def sample_diagonal_state(d: int, r: int, rng: Rng | np.random.Generator) -> DiagonalState:
    """Draw one diagonal training state: uniform r-subset support, Haar weights."""
    gen = as_generator(rng)
    support = gen.permutation(d)[:r]
    weights = haar_probability_vector(r, gen)
    return DiagonalState(d=d, support=support, weights=weights)


def sample_orthogonal_family(d: int, r: int, n_states: int, rng: Rng | np.random.Generator) -> list[DiagonalState]:
    """n_states diagonal states on disjoint supports carved from one permutation.

    State j occupies slots [j*r, (j+1)*r) of a single uniform permutation, so
    the supports partition r*n_states of the d indices.  Requires r*n_states <= d.
    """
    if r * n_states > d:
        raise ValueError(f"orthogonal family needs r*N <= d, got {r}*{n_states} > {d}")
    gen = as_generator(rng)
    perm = gen.permutation(d)
    states = []
    for j in range(n_states):
        support = perm[j * r : (j + 1) * r]
        weights = haar_probability_vector(r, gen)
        states.append(DiagonalState(d=d, support=support, weights=weights))
    return states


def expectation_diagonal(state: DiagonalState, index: int) -> float:
    """Mean of the |e_index><e_index| observable on a diagonal state."""
    if not 0 <= index < state.d:
        raise ValueError(f"index {index} outside [0, {state.d})")
    hits = np.flatnonzero(state.support == index)
    return float(state.weights[hits[0]]) if hits.size else 0.0


def expectation_general(state: EntangledState, target) -> float:
    """Mean of |t><t| measured after the target acts: sum_k w_k |<t|xi_k>|^2."""
    t = np.asarray(target, dtype=np.complex128)
    if t.shape != (state.d,):
        raise ValueError(f"target shape {t.shape}, expected ({state.d},)")
    overlaps = np.abs(state.xi @ t.conj()) ** 2
    return float(state.weights @ overlaps)
