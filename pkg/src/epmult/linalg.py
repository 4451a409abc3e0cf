"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
helpers here validate shape and finiteness, compute Schatten norms, Hermitian
eigensystems with a reproducible phase convention, and split block matrices
into their ``m x m`` blocks.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "InputError",
    "as_matrix",
    "parse_exponent",
    "schatten_norm",
    "singular_values",
    "kron",
    "hermitian_eigensystem",
    "blocks",
    "assemble_blocks",
    "psd_power",
    "holder_trace_bound",
    "random_unitary",
    "random_density",
    "random_pure_state",
    "matrix_unit",
]

# Largest number of entries a Kronecker product may produce.
MAX_ENTRIES = 2**26


class InputError(ValueError):
    """Raised when an argument violates a documented precondition."""


def as_matrix(A, name="A"):
    """Return `A` as a finite 2-D complex array, raising InputError otherwise."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.size == 0:
        raise InputError(f"{name} must be a nonempty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def parse_exponent(p):
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            return np.inf
        p = float(p)
    p = float(p)
    if not p >= 1:
        raise InputError(f"Schatten exponent must be >= 1 or inf, got {p}")
    return p


def singular_values(A):
    """Singular values of `A` in descending order."""
    return np.linalg.svd(as_matrix(A), compute_uv=False)


def schatten_norm(A, p):
    """Schatten p-norm ``(sum_i s_i**p)**(1/p)`` of `A`.

    Parameters
    ----------
    A : array_like
        Any nonempty finite matrix (rectangular allowed).
    p : float or "inf"
        Exponent, ``p >= 1``.  ``np.inf`` (or ``"inf"``) gives the operator norm.
    """
    p = parse_exponent(p)
    s = singular_values(A)
    if p == np.inf:
        return float(s[0])
    smax = s[0]
    if smax == 0:
        return 0.0
    # Factor out the largest singular value to avoid overflow for large p.
    return float(smax * np.sum((s / smax) ** p) ** (1.0 / p))


def kron(A, B):
    """Kronecker product with a guard on the output size."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if rows * cols > MAX_ENTRIES:
        raise InputError(f"Kronecker product of size {rows}x{cols} is too large")
    return np.kron(A, B)


def _fix_phases(V):
    # First component with non-negligible modulus made real positive.
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            z = col[idx[0]]
            V[:, k] = col * (abs(z) / z)
    return V


def hermitian_eigensystem(A, herm_tol=None):
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix.

    The Hermiticity test uses ``||A - A*||_inf <= herm_tol`` with the default
    ``herm_tol = 1e-9 * max(1, ||A||_inf)``.  Eigenvector phases are fixed so
    that the first non-negligible component of each column is real positive.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"matrix must be square, got {A.shape}")
    scale = max(1.0, schatten_norm(A, np.inf))
    tol = 1e-9 * scale if herm_tol is None else herm_tol
    dev = schatten_norm(A - A.conj().T, np.inf)
    if dev > tol:
        raise InputError(f"matrix is not Hermitian (||A - A*|| = {dev:.3e} > {tol:.3e})")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    w, V = w[::-1], V[:, ::-1]
    return w.copy(), _fix_phases(V)


def blocks(A, n, m):
    """Split an ``nm x nm`` matrix into an ``(n, n, m, m)`` array of blocks.

    ``blocks(A, n, m)[i, j]`` is the block ``A_ij`` so that
    ``A = sum_ij E_ij (x) A_ij``.
    """
    A = as_matrix(A)
    if A.shape != (n * m, n * m):
        raise InputError(f"expected a {n * m}x{n * m} matrix, got {A.shape}")
    return A.reshape(n, m, n, m).transpose(0, 2, 1, 3).copy()


def assemble_blocks(grid):
    """Inverse of :func:`blocks`."""
    grid = np.asarray(grid, dtype=complex)
    if grid.ndim != 4 or grid.shape[0] != grid.shape[1] or grid.shape[2] != grid.shape[3]:
        raise InputError(f"expected an (n, n, m, m) block grid, got {grid.shape}")
    n, _, m, _ = grid.shape
    return grid.transpose(0, 2, 1, 3).reshape(n * m, n * m)


def psd_power(A, power, cutoff=1e-12):
    """``A**power`` for PSD `A` via its eigensystem.

    Eigenvalues below ``cutoff * max(1, lambda_max)`` are treated as zero, so a
    negative `power` yields the power of the pseudo-inverse on the support.
    """
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    thresh = cutoff * max(1.0, float(w.max(initial=0.0)))
    keep = w > thresh
    f = np.zeros_like(w)
    f[keep] = w[keep] ** power
    return (V * f) @ V.conj().T


def holder_trace_bound(mats):
    """Return ``(|Tr(B_1 ... B_k)|, prod_i ||B_i||_k)`` for square `mats`."""
    mats = [as_matrix(B) for B in mats]
    k = len(mats)
    prod = mats[0]
    for B in mats[1:]:
        prod = prod @ B
    lhs = abs(np.trace(prod))
    rhs = float(np.prod([schatten_norm(B, k) for B in mats]))
    return float(lhs), rhs


def matrix_unit(i, j, n, m=None):
    """``E_ij = |i><j|`` as an ``n x m`` matrix (``m`` defaults to ``n``)."""
    E = np.zeros((n, n if m is None else m), dtype=complex)
    E[i, j] = 1.0
    return E


def random_unitary(d, rng):
    """Haar-random ``d x d`` unitary."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_pure_state(d, rng):
    """Uniformly random unit vector in ``C^d``."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d, rng, rank=None):
    """Random density matrix of the given rank (Wishart construction)."""
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real
