import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epmult.linalg import (
    InputError,
    assemble_blocks,
    blocks,
    hermitian_eigensystem,
    holder_trace_bound,
    kron,
    matrix_unit,
    random_density,
    random_unitary,
    schatten_norm,
)

from conftest import random_complex


def test_schatten_examples():
    assert schatten_norm(np.eye(3), 1) == pytest.approx(3)
    assert schatten_norm(np.diag([3, 4]), 2) == pytest.approx(5)
    assert schatten_norm(np.diag([0.5, 0.5]), 2) == pytest.approx(2**-0.5, abs=1e-10)
    assert schatten_norm(np.diag([3, 4]), np.inf) == 4
    assert schatten_norm(np.diag([3, 4]), "inf") == 4
    assert schatten_norm(np.zeros((2, 2)), 1.5) == 0


def test_schatten_rejects_bad_input():
    with pytest.raises(InputError):
        schatten_norm(np.array([[np.nan, 0], [0, 1]]), 2)
    with pytest.raises(InputError):
        schatten_norm(np.eye(2), 0.5)
    with pytest.raises(InputError):
        schatten_norm(np.zeros((0, 0)), 2)


def test_schatten_rectangular_uses_singular_values(rng):
    A = random_complex(rng, 3, 5)
    s = np.linalg.svd(A, compute_uv=False)
    assert schatten_norm(A, 3) == pytest.approx(np.sum(s**3) ** (1 / 3), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from([1, 1.5, 2, 3, 4, np.inf]),
       c=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_homogeneity(seed, p, c):
    A = random_complex(np.random.default_rng(seed), 4, 4)
    assert schatten_norm(c * A, p) == pytest.approx(abs(c) * schatten_norm(A, p), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_norm_nonincreasing_in_p(seed):
    rho = random_density(4, np.random.default_rng(seed))
    vals = [schatten_norm(rho, p) for p in (1, 1.5, 2, 3, 4)]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from([1, 1.5, 2, 3, np.inf]))
def test_unitary_invariance(seed, p):
    rng = np.random.default_rng(seed)
    A = random_complex(rng, 3, 3)
    U, V = random_unitary(3, rng), random_unitary(3, rng)
    assert schatten_norm(U @ A @ V, p) == pytest.approx(schatten_norm(A, p), rel=1e-10)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_holder_trace_inequality(rng, k):
    for _ in range(200):
        mats = [random_complex(rng, 3, 3) for _ in range(k)]
        lhs, rhs = holder_trace_bound(mats)
        assert lhs <= rhs * (1 + 1e-9)


def test_holder_equality_for_equal_psd(rng):
    rho = random_density(3, rng)
    lhs, rhs = holder_trace_bound([rho, rho, rho])
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_kron_examples():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    E = kron(matrix_unit(0, 0, 2), matrix_unit(0, 0, 2))
    assert E[0, 0] == 1 and np.count_nonzero(E) == 1
    assert np.array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_kron_size_guard():
    with pytest.raises(InputError):
        kron(np.ones((2**7, 2**7)), np.ones((2**7, 2**7)))


def test_eigensystem_examples():
    w, _ = hermitian_eigensystem(np.diag([1.0, 2.0]))
    assert np.allclose(w, [2, 1])
    w, _ = hermitian_eigensystem(np.array([[0, 1], [1, 0]]))
    assert np.allclose(w, [1, -1])
    psi = np.array([1, 1j, -1]) / np.sqrt(3)
    w, V = hermitian_eigensystem(np.outer(psi, psi.conj()))
    assert np.allclose(w, [1, 0, 0], atol=1e-12)
    assert abs(abs(np.vdot(V[:, 0], psi)) - 1) < 1e-12


def test_eigensystem_reconstruction_and_phase(rng):
    for d in (2, 5, 9):
        G = random_complex(rng, d, d)
        A = G + G.conj().T
        w, V = hermitian_eigensystem(A)
        assert np.all(np.diff(w) <= 0)
        err = np.linalg.norm(A - (V * w) @ V.conj().T)
        assert err <= 1e-9 * np.linalg.norm(A)
        for col in V.T:
            first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
            assert abs(first.imag) < 1e-14 and first.real > 0


def test_eigensystem_rejects_non_hermitian():
    with pytest.raises(InputError):
        hermitian_eigensystem(np.array([[0, 1], [0, 0]]))


def test_blocks_examples(rng):
    g = blocks(np.eye(4), 2, 2)
    assert np.array_equal(g[0, 0], np.eye(2)) and np.array_equal(g[1, 1], np.eye(2))
    assert not g[0, 1].any() and not g[1, 0].any()
    ent = sum(np.kron(matrix_unit(i, j, 2), matrix_unit(i, j, 2)) for i in range(2) for j in range(2))
    g = blocks(ent, 2, 2)
    for i in range(2):
        for j in range(2):
            assert np.array_equal(g[i, j], matrix_unit(i, j, 2))
    A = random_complex(rng, 6, 6)
    assert np.array_equal(assemble_blocks(blocks(A, 3, 2)), A)


def test_blocks_match_tensor_decomposition(rng):
    A = random_complex(rng, 6, 6)
    g = blocks(A, 3, 2)
    rebuilt = sum(np.kron(matrix_unit(i, j, 3), g[i, j]) for i in range(3) for j in range(3))
    assert np.array_equal(rebuilt, A)


def test_blocks_dimension_mismatch():
    with pytest.raises(InputError):
        blocks(np.eye(5), 2, 2)
