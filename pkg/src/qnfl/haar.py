"""Haar-random sampling and the closed-form moments that cross-check it.

Unitaries come from the Ginibre + QR construction with the R-diagonal phase
correction, which makes the QR factorization unique and the resulting Q
exactly Haar distributed.  All samplers accept an optional ``size`` and then
return a stacked batch, which is what keeps the Monte-Carlo verification
suites fast.
"""

from __future__ import annotations

import numpy as np

from .rng import Rng, as_generator

_SQRT2 = np.sqrt(2.0)


def _ginibre(gen: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / _SQRT2


def _phase_corrected_q(z: np.ndarray) -> np.ndarray:
    # multiply column j of Q by the phase of R[j, j]; the corrected Q is the
    # unique factor with positive-diagonal R and is Haar on the isometries
    q, r = np.linalg.qr(z)
    diag = np.einsum("...ii->...i", r).copy()
    diag /= np.abs(diag)
    return q * diag[..., None, :]


def haar_unitary(d: int, rng: Rng | np.random.Generator, size: int | None = None) -> np.ndarray:
    """One Haar-random d x d unitary, or a (size, d, d) batch."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    gen = as_generator(rng)
    shape = (d, d) if size is None else (size, d, d)
    return _phase_corrected_q(_ginibre(gen, shape))


def haar_state(d: int, rng: Rng | np.random.Generator, size: int | None = None) -> np.ndarray:
    """One Haar-random pure state of dimension d, or a (size, d) batch."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    gen = as_generator(rng)
    shape = (d,) if size is None else (size, d)
    z = _ginibre(gen, shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def orthonormal_haar_family(
    d: int, r: int, rng: Rng | np.random.Generator, size: int | None = None
) -> np.ndarray:
    """r jointly Haar-distributed orthonormal states, as rows of an (r, d) array.

    Distributed as the first r columns of a Haar unitary; sampled directly
    from the reduced QR of a d x r Ginibre block.  With ``size`` the result
    is stacked to (size, r, d).
    """
    if not 1 <= r <= d:
        raise ValueError(f"family size r={r} must satisfy 1 <= r <= d={d}")
    gen = as_generator(rng)
    shape = (d, r) if size is None else (size, d, r)
    q = _phase_corrected_q(_ginibre(gen, shape))
    return np.swapaxes(q, -1, -2)


def haar_probability_vector(
    r: int, rng: Rng | np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Squared moduli of a Haar state's amplitudes: a length-r probability vector.

    Phases never enter downstream formulas, so only the probabilities are
    returned.  Marginals are Beta(1, r-1); the vector is flat-Dirichlet.
    """
    amps = haar_state(r, rng, size=size)
    # squared moduli of a unit vector can overshoot 1 by one ulp
    return np.clip(np.abs(amps) ** 2, 0.0, 1.0)


def _trace(m: np.ndarray) -> complex:
    return complex(np.trace(m))


def analytic_moment(kind: str, operands: list | tuple, d: int):
    """Closed-form Haar moment for the five integral identities used here.

    kind "conj1":     int dW Tr(W A W' B)                       -> Tr(A)Tr(B)/d
    kind "conj2":     int dW Tr(W A W' B) Tr(W C W' D)          -> rank-2 Weingarten form
    kind "state1":    int dphi phi phi'                         -> I/d   (or Tr(A)/d with operand A)
    kind "state2":    int dphi Tr(phi A) Tr(phi B)              -> (Tr A Tr B + Tr AB)/(d(d+1))
    kind "orth_pair": int Tr(A mu mu') Tr(A nu nu'), mu perp nu -> -Tr(A^2)/(d(d^2-1)), traceless A

    Scalar kinds return a complex number (real for Hermitian operands);
    "state1" with no operand returns the d x d matrix I/d.
    """
    from .linalg import as_operator

    def need(count: int) -> list[np.ndarray]:
        if len(operands) != count:
            raise ValueError(f"kind {kind!r} takes {count} operand(s), got {len(operands)}")
        return [as_operator(op, d) for op in operands]

    if kind == "conj1":
        a, b = need(2)
        return _trace(a) * _trace(b) / d

    if kind == "conj2":
        if d < 2:
            raise ValueError("conj2 moment requires d >= 2")
        a, b, c, e = need(4)
        ta, tb, tc, te = _trace(a), _trace(b), _trace(c), _trace(e)
        tac = _trace(a @ c)
        tbe = _trace(b @ e)
        lead = (ta * tb * tc * te + tac * tbe) / (d**2 - 1)
        sub = (tac * tb * te + ta * tc * tbe) / (d * (d**2 - 1))
        return lead - sub

    if kind == "state1":
        if len(operands) == 0:
            return np.eye(d, dtype=np.complex128) / d
        (a,) = need(1)
        return _trace(a) / d

    if kind == "state2":
        a, b = need(2)
        return (_trace(a) * _trace(b) + _trace(a @ b)) / (d * (d + 1))

    if kind == "orth_pair":
        if d < 2:
            raise ValueError("orth_pair moment requires d >= 2")
        (a,) = need(1)
        ta = _trace(a)
        scale = max(1.0, float(np.abs(a).max()))
        if abs(ta) > 1e-8 * scale * d:
            raise ValueError(f"orth_pair moment requires a traceless operand, got trace {ta}")
        return -_trace(a @ a) / (d * (d**2 - 1))

    raise ValueError(f"unknown moment kind {kind!r}")
