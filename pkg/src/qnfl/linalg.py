"""Dense complex linear algebra for small quantum systems.

Conventions: pure states are 1-D complex ndarrays, operators are 2-D.
Systems are capped at 8 qubits (dimension 256); everything here is exact
dense arithmetic with a 1e-10 tolerance on algebraic identities.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-10
MAX_QUBITS = 8
MAX_DIM = 2**MAX_QUBITS


def as_state(vec, *, name: str = "state") -> np.ndarray:
    """Validate and return a normalized pure-state vector as complex128."""
    arr = np.asarray(vec, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D amplitude vector, got shape {arr.shape}")
    if not 1 <= arr.size <= MAX_DIM:
        raise ValueError(f"{name} dimension {arr.size} outside [1, {MAX_DIM}]")
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"{name} is not normalized (|norm - 1| = {abs(norm - 1.0):.3e})")
    return arr


def as_operator(mat, d: int | None = None, *, name: str = "operator") -> np.ndarray:
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if d is not None and arr.shape[0] != d:
        raise ValueError(f"{name} has dimension {arr.shape[0]}, expected {d}")
    return arr


def dagger(mat: np.ndarray) -> np.ndarray:
    return np.asarray(mat).conj().T


def matmul(a, b) -> np.ndarray:
    """Matrix (or matrix-vector) product with an explicit dimension check."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; composite dimension is the product of the factors."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def is_unitary(u, atol: float = ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.allclose(dagger(u) @ u, eye, atol=atol) and np.allclose(u @ dagger(u), eye, atol=atol))


def fidelity_pure(a, b) -> float:
    """Squared overlap |<a|b>|^2 of two pure states."""
    a = as_state(a, name="a")
    b = as_state(b, name="b")
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    f = abs(np.vdot(a, b)) ** 2
    # overlap of normalized vectors can exceed 1 by float dust only
    return float(min(f, 1.0))


def trace_distance_pure(a, b) -> float:
    """Trace distance ||aa' - bb'||_1 = 2 sqrt(1 - F) of two pure states."""
    f = fidelity_pure(a, b)
    return 2.0 * np.sqrt(max(0.0, 1.0 - f))


def partial_trace_reference(psi, d: int) -> np.ndarray:
    """Reduced state of the main register for a main (x) reference pure state.

    ``psi`` lives on a composite of two d-dimensional registers with the main
    index major: entry i*d + j is amplitude <i|_main <j|_ref.  Returns the
    d x d density matrix after tracing out the reference register.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1:
        raise ValueError(f"composite state must be 1-D, got shape {psi.shape}")
    if d < 1 or psi.size != d * d:
        raise ValueError(f"composite dimension {psi.size} does not factor as {d} x {d}")
    m = psi.reshape(d, d)
    return m @ m.conj().T
