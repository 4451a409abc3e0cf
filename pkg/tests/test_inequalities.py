import numpy as np
import pytest

from epmult import channels as ch
from epmult.inequalities import (
    bhatia_kittaneh_check,
    beta_matrix,
    block_norm_matrix,
    contraction_decomposition,
)
from epmult.linalg import InputError, blocks, matrix_unit, psd_power, schatten_norm

from conftest import random_complex


def max_entangled(d, normalized=True):
    v = np.eye(d).reshape(-1)
    P = np.outer(v, v).astype(complex)
    return P / d if normalized else P


def wishart(rng, d, rank=None):
    G = random_complex(rng, d, rank or d)
    return G @ G.conj().T


def test_bk_examples():
    r = bhatia_kittaneh_check(np.eye(4), 2, 2, 2)
    assert r.lhs == pytest.approx(4) and r.rhs == pytest.approx(4) and r.holds
    E = np.zeros((4, 4))
    E[0, 0] = 1
    r = bhatia_kittaneh_check(E, 2, 2, 1)
    assert r.lhs == pytest.approx(1) and r.rhs == pytest.approx(1) and r.holds


def test_bk_rejects_large_p():
    with pytest.raises(InputError):
        bhatia_kittaneh_check(np.eye(4), 2, 2, 2.5)


def test_bk_random(rng):
    for _ in range(300):
        A = random_complex(rng, 6, 6)
        assert bhatia_kittaneh_check(A, 3, 2, 1.5).holds


def test_bk_fails_beyond_two():
    # for p = inf the block inequality is false (documented range is [1, 2])
    A = np.eye(4)
    lhs = np.sum(block_norm_matrix(A, 2, 2, np.inf) ** 2)
    assert lhs > schatten_norm(A, np.inf) ** 2


def test_block_norm_matrix_examples(rng):
    assert np.allclose(block_norm_matrix(np.eye(4), 2, 2, 2), np.sqrt(2) * np.eye(2))
    assert np.allclose(block_norm_matrix(max_entangled(2, normalized=False), 2, 2, 1), np.ones((2, 2)))
    G = random_complex(rng, 6, 6)
    H = G + G.conj().T
    a = block_norm_matrix(H, 3, 2, 1.5)
    assert np.allclose(a, a.T)


def test_block_norm_matrix_chain(rng):
    # ||alpha||_2 <= ||A||_p restates the block inequality
    for p in (1, 1.5, 2):
        for _ in range(50):
            A = random_complex(rng, 6, 6)
            alpha = block_norm_matrix(A, 3, 2, p)
            assert schatten_norm(alpha, 2) <= schatten_norm(A, p) * (1 + 1e-9)


def test_contraction_examples():
    A = np.kron(np.diag([0.3, 0.7]), np.eye(2) / 2)
    R, nrm = contraction_decomposition(A, 2, 2, 0, 1)
    assert nrm == 0 and not R.any()
    R, nrm = contraction_decomposition(max_entangled(2), 2, 2, 0, 1)
    assert np.allclose(R, matrix_unit(0, 1, 2)) and nrm == pytest.approx(1)


def test_contraction_random_and_reconstruction(rng):
    for _ in range(200):
        A = wishart(rng, 6, int(rng.integers(1, 7)))
        for i, j in [(0, 1), (2, 0), (1, 2)]:
            R, nrm = contraction_decomposition(A, 3, 2, i, j)
            assert nrm <= 1 + 1e-8
            g = blocks(A, 3, 2)
            rebuilt = psd_power(g[i, i], 0.5) @ R @ psd_power(g[j, j], 0.5)
            assert np.allclose(rebuilt, g[i, j], atol=1e-8 * np.abs(A).max())


def test_contraction_rejects_non_psd():
    with pytest.raises(InputError):
        contraction_decomposition(-np.eye(4), 2, 2, 0, 1)
    with pytest.raises(InputError):
        contraction_decomposition(np.eye(4), 2, 2, 1, 1)


def test_block_norm_bound_after_cp_map(rng):
    # ||Omega(A_ij)||_t <= ||Omega(A_ii)||_t^1/2 ||Omega(A_jj)||_t^1/2 for CP Omega
    Omega = ch.random_cp_channel(2, 3, 2, seed=3)
    for _ in range(100):
        A = wishart(rng, 6)
        g = blocks(A, 3, 2)
        beta = beta_matrix(Omega, A, 3, 3)
        for i in range(3):
            for j in range(3):
                assert schatten_norm(Omega.apply(g[i, j]), 3) <= beta[i, j] * (1 + 1e-9)
