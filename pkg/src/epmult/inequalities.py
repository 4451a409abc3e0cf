"""Block-matrix inequalities behind the multiplicativity arguments.

Each function evaluates both sides of one inequality for a concrete matrix so
it can be checked numerically on random instances.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import InputError, as_matrix, blocks, parse_exponent, psd_power, schatten_norm

__all__ = [
    "InequalityCheck",
    "block_norm_matrix",
    "bhatia_kittaneh_check",
    "contraction_decomposition",
    "beta_matrix",
    "block_expansion",
]


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def block_norm_matrix(A, n, m, p):
    """``n x n`` matrix of block norms ``||A_ij||_p``."""
    p = parse_exponent(p)
    grid = blocks(A, n, m)
    return np.array([[schatten_norm(grid[i, j], p) for j in range(n)] for i in range(n)])


def bhatia_kittaneh_check(A, n, m, p, rtol=1e-9):
    """``sum_ij ||A_ij||_p**2 <= ||A||_p**2`` for ``1 <= p <= 2``."""
    p = parse_exponent(p)
    if p > 2:
        raise InputError(f"the block inequality is only claimed for 1 <= p <= 2, got p={p}")
    lhs = float(np.sum(block_norm_matrix(A, n, m, p) ** 2))
    rhs = schatten_norm(A, p) ** 2
    return InequalityCheck(lhs, rhs, bool(lhs <= rhs + rtol * rhs))


def contraction_decomposition(A, n, m, i, j, psd_tol=1e-9):
    """Factor an off-diagonal block of a PSD matrix as ``A_ii^1/2 R A_jj^1/2``.

    Returns ``(R, ||R||_inf)`` with ``R = A_ii^{-1/2} A_ij A_jj^{-1/2}``,
    inverses taken on the supports.  For PSD `A` the factor is a contraction.
    """
    A = as_matrix(A)
    if i == j:
        raise InputError("contraction decomposition needs i != j")
    grid = blocks(A, n, m)
    scale = max(1.0, schatten_norm(A, np.inf))
    if schatten_norm(A - A.conj().T, np.inf) > psd_tol * scale:
        raise InputError("matrix is not Hermitian")
    lam_min = np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0]
    if lam_min < -psd_tol * scale:
        raise InputError(f"matrix is not positive semidefinite (lambda_min = {lam_min:.3e})")
    R = psd_power(grid[i, i], -0.5) @ grid[i, j] @ psd_power(grid[j, j], -0.5)
    return R, schatten_norm(R, np.inf)


def beta_matrix(Omega, A, n, t):
    """``beta_ij = ||Omega(A_ii)||_t^1/2 ||Omega(A_jj)||_t^1/2`` for ``A`` on ``C^n (x) C^{Omega.n}``."""
    grid = blocks(A, n, Omega.n)
    d = np.array([schatten_norm(Omega.apply(grid[i, i]), t) for i in range(n)])
    r = np.sqrt(d)
    return np.outer(r, r)


def block_expansion(K, L, A):
    """``sum_ij K(E_ij) (x) L(A_ij)`` computed block by block."""
    grid = blocks(A, K.n, L.n)
    out = np.zeros((K.m * L.m, K.m * L.m), dtype=complex)
    for i in range(K.n):
        for j in range(K.n):
            E = np.zeros((K.n, K.n), dtype=complex)
            E[i, j] = 1
            out += np.kron(K.apply(E), L.apply(grid[i, j]))
    return out
