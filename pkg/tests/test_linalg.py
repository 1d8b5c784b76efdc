import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnfl.haar import haar_state, haar_unitary
from qnfl.linalg import (
    as_state,
    fidelity_pure,
    is_unitary,
    kron,
    matmul,
    partial_trace_reference,
    trace_distance_pure,
)
from qnfl.rng import Rng


def basis(d, k):
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def test_matmul_matches_numpy_and_checks_dims():
    gen = Rng(1).generator()
    a = gen.standard_normal((3, 4)) + 1j * gen.standard_normal((3, 4))
    b = gen.standard_normal((4, 2)) + 1j * gen.standard_normal((4, 2))
    assert np.allclose(matmul(a, b), a @ b)
    with pytest.raises(ValueError, match="dimension mismatch"):
        matmul(a, a)


def test_kron_dimensions_multiply():
    a = np.eye(3)
    b = np.ones((2, 2))
    assert kron(a, b).shape == (6, 6)
    psi = kron(basis(2, 0), basis(4, 3))
    assert psi.shape == (8,)
    assert psi[3] == 1.0


def test_as_state_rejects_unnormalized_and_oversized():
    with pytest.raises(ValueError, match="not normalized"):
        as_state([1.0, 1.0])
    with pytest.raises(ValueError, match="outside"):
        as_state(np.ones(512) / np.sqrt(512))
    with pytest.raises(ValueError, match="1-D"):
        as_state(np.eye(2))


def test_fidelity_basic_values():
    e0, e1 = basis(2, 0), basis(2, 1)
    assert fidelity_pure(e0, e0) == 1.0
    assert fidelity_pure(e0, e1) == 0.0
    plus = np.array([1, 1]) / np.sqrt(2)
    assert fidelity_pure(plus, e0) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_symmetric_and_phase_invariant():
    gen = Rng(2).generator()
    a = haar_state(8, gen)
    b = haar_state(8, gen)
    assert fidelity_pure(a, b) == pytest.approx(fidelity_pure(b, a), abs=1e-12)
    assert fidelity_pure(np.exp(0.7j) * a, b) == pytest.approx(fidelity_pure(a, b), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_fidelity_unitary_invariant(seed):
    gen = Rng(seed).generator()
    a = haar_state(4, gen)
    b = haar_state(4, gen)
    u = haar_unitary(4, gen)
    assert fidelity_pure(u @ a, u @ b) == pytest.approx(fidelity_pure(a, b), abs=1e-10)


def test_trace_distance_extremes():
    e0, e1 = basis(4, 0), basis(4, 1)
    assert trace_distance_pure(e0, e1) == pytest.approx(2.0, abs=1e-12)
    assert trace_distance_pure(e0, e0) == 0.0


def test_trace_distance_matches_eigenvalue_route():
    # independent route: trace norm from the spectrum of the difference
    gen = Rng(3).generator()
    for _ in range(10):
        a = haar_state(6, gen)
        b = haar_state(6, gen)
        diff = np.outer(a, a.conj()) - np.outer(b, b.conj())
        one_norm = np.abs(np.linalg.eigvalsh(diff)).sum()
        assert trace_distance_pure(a, b) == pytest.approx(one_norm, abs=1e-10)


def test_mean_haar_fidelity_is_one_over_d():
    d, samples = 16, 100_000
    gen = Rng(4).generator()
    a = haar_state(d, gen, size=samples)
    b = haar_state(d, gen, size=samples)
    f = np.abs(np.einsum("ki,ki->k", a.conj(), b)) ** 2
    se = f.std(ddof=1) / np.sqrt(samples)
    assert abs(f.mean() - 1 / d) <= 3 * se


def test_is_unitary():
    assert is_unitary(np.eye(3))
    assert not is_unitary(np.ones((2, 2)))
    assert not is_unitary(np.ones((2, 3)))


def test_partial_trace_of_product_state():
    psi = haar_state(4, Rng(5).generator())
    phi = haar_state(4, Rng(6).generator())
    rho = partial_trace_reference(kron(psi, phi), 4)
    assert np.allclose(rho, np.outer(psi, psi.conj()), atol=1e-10)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)


def test_partial_trace_of_maximally_entangled_prefix():
    d, r = 4, 3
    vec = np.zeros(d * d, dtype=complex)
    for k in range(r):
        vec += kron(basis(d, k), basis(d, k)) / np.sqrt(r)
    rho = partial_trace_reference(vec, d)
    expected = np.diag([1 / r] * r + [0.0] * (d - r))
    assert np.allclose(rho, expected, atol=1e-10)


def test_partial_trace_rejects_non_square_composite():
    with pytest.raises(ValueError, match="does not factor"):
        partial_trace_reference(np.ones(6) / np.sqrt(6), 2)
