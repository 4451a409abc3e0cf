"""Linear maps on matrix algebras.

A :class:`ChannelMap` stores the ``m**2 x n**2`` transfer matrix of a map
``M_n -> M_m`` acting on column-stacked matrices, ``vec(K(A)) = T vec(A)``
with ``vec(A)[i + n*j] = A[i, j]``.  Choi and Kraus views are derived from it.

Structural predicates (complete positivity, entrywise positivity, trace
preservation, sampled 2-positivity) return small named tuples carrying the
witness alongside the boolean.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .linalg import (
    InputError,
    as_matrix,
    hermitian_eigensystem,
    random_pure_state,
    schatten_norm,
)

__all__ = [
    "ChannelMap",
    "QubitDiagonalParams",
    "CPCheck",
    "EPCheck",
    "TwoPositiveCheck",
    "PAULI",
    "vec",
    "unvec",
    "from_transfer",
    "from_choi",
    "from_kraus",
    "identity_channel",
    "zero_map",
    "unitary_channel",
    "transpose_map",
    "depolarizing",
    "generalized_depolarizing",
    "transpose_depolarizing",
    "werner_holevo",
    "random_unitary_permutation",
    "qubit_from_diagonal",
    "qubit_is_ep_canonical",
    "pauli_transfer",
    "from_pauli_transfer",
    "rotate_bases",
    "real_condition_violation",
    "random_cp_channel",
    "random_ep_cp_channel",
    "random_linear_map",
    "random_ep_noncp_map",
    "random_ep_qubit_params",
    "tensor",
    "compose",
    "is_cp",
    "is_ep_in_basis",
    "is_trace_preserving",
    "two_positive_falsify",
    "channel_to_dict",
    "channel_from_dict",
    "save_channel",
    "load_channel",
]

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def vec(A):
    """Column-stacking vectorization."""
    return np.asarray(A, dtype=complex).reshape(-1, order="F")


def unvec(v, rows, cols=None):
    return np.asarray(v).reshape((rows, rows if cols is None else cols), order="F")


class ChannelMap:
    """Linear map ``M_n -> M_m`` stored as its transfer matrix.

    Instances are immutable; the transfer array is marked read-only and the
    Choi matrix is computed on first access and cached.

    Parameters
    ----------
    n, m : int
        Input and output dimensions.
    transfer : array_like
        ``m**2 x n**2`` complex matrix.
    meta : dict, optional
        Free-form description (``family``, ``params``, ``seed``) carried into
        serialized output.
    """

    def __init__(self, n, m, transfer, meta=None):
        n, m = int(n), int(m)
        if n < 1 or m < 1:
            raise InputError(f"dimensions must be positive, got n={n}, m={m}")
        T = as_matrix(transfer, "transfer").copy()
        if T.shape != (m * m, n * n):
            raise InputError(f"transfer must be {m * m}x{n * n}, got {T.shape}")
        T.flags.writeable = False
        self.n = n
        self.m = m
        self.transfer = T
        self.meta = dict(meta or {})

    def __repr__(self):
        fam = self.meta.get("family", "map")
        return f"ChannelMap({fam}, n={self.n}, m={self.m})"

    def _tensor4(self):
        # t[a, b, i, j] = coefficient of A[i, j] in K(A)[a, b]
        return self.transfer.reshape((self.m, self.m, self.n, self.n), order="F")

    def apply(self, A):
        """Evaluate ``K(A)`` for an ``n x n`` matrix `A`."""
        A = as_matrix(A)
        if A.shape != (self.n, self.n):
            raise InputError(f"input must be {self.n}x{self.n}, got {A.shape}")
        return unvec(self.transfer @ vec(A), self.m)

    __call__ = apply

    @cached_property
    def choi(self):
        """``nm x nm`` Choi matrix whose ``(i, j)`` block is ``K(E_ij)``."""
        C = self._tensor4().transpose(2, 0, 3, 1).reshape(self.n * self.m, self.n * self.m)
        C = C.copy()
        C.flags.writeable = False
        return C

    def kraus(self, tol=1e-12):
        """Kraus operators from the Choi eigendecomposition (CP maps only)."""
        w, V = hermitian_eigensystem(self.choi)
        if w[-1] < -max(tol, 1e-9 * max(1.0, w[0])):
            raise InputError("map is not completely positive; no Kraus form")
        ops = []
        for lam, v in zip(w, V.T):
            if lam > tol * max(1.0, w[0]):
                # v[i*m + a] = A[a, i] / sqrt(lam)
                ops.append(np.sqrt(lam) * v.reshape(self.n, self.m).T)
        if not ops:
            ops.append(np.zeros((self.m, self.n), dtype=complex))
        return ops

    def adjoint(self):
        """Hilbert-Schmidt adjoint ``M_m -> M_n``; its transfer is ``T*``."""
        return ChannelMap(self.m, self.n, self.transfer.conj().T, {"family": "adjoint"})

    def tensor(self, other):
        return tensor(self, other)

    def compose(self, other):
        """``self o other`` (apply `other` first)."""
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, ChannelMap):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and np.array_equal(
            self.transfer, other.transfer
        )

    __hash__ = None


def from_transfer(transfer, n=None, m=None, meta=None):
    T = as_matrix(transfer, "transfer")
    n = int(round(math.sqrt(T.shape[1]))) if n is None else n
    m = int(round(math.sqrt(T.shape[0]))) if m is None else m
    return ChannelMap(n, m, T, meta)


def from_choi(C, n, m, meta=None):
    """Build a map from its ``nm x nm`` Choi matrix."""
    C = as_matrix(C, "choi")
    if C.shape != (n * m, n * m):
        raise InputError(f"Choi matrix must be {n * m}x{n * m}, got {C.shape}")
    t = C.reshape(n, m, n, m).transpose(1, 3, 0, 2)
    return ChannelMap(n, m, t.reshape((m * m, n * n), order="F"), meta)


def from_kraus(ops, meta=None):
    """Map ``rho -> sum_k A_k rho A_k*`` for a nonempty list of ``m x n`` operators."""
    ops = [as_matrix(A, "Kraus operator") for A in ops]
    if not ops:
        raise InputError("Kraus set must be nonempty")
    shape = ops[0].shape
    if any(A.shape != shape for A in ops):
        raise InputError("Kraus operators must share one shape")
    m, n = shape
    T = sum(np.kron(A.conj(), A) for A in ops)
    return ChannelMap(n, m, T, meta or {"family": "kraus"})


def tensor(K, L):
    """Tensor product ``K (x) L`` acting on ``M_{n_K n_L} -> M_{m_K m_L}``."""
    N, M = K.n * L.n, K.m * L.m
    if (M * M) * (N * N) > 2**26:
        raise InputError(f"tensor product transfer {M * M}x{N * N} is too large")
    t = np.einsum("abij,cdkl->acbdikjl", K._tensor4(), L._tensor4())
    t = t.reshape(M, M, N, N)
    meta = {"family": "tensor", "factors": [K.meta, L.meta]}
    return ChannelMap(N, M, t.reshape((M * M, N * N), order="F"), meta)


def compose(K, L):
    """``K o L``: apply `L`, then `K`."""
    if L.m != K.n:
        raise InputError(f"cannot compose: L outputs {L.m}x{L.m}, K takes {K.n}x{K.n}")
    return ChannelMap(L.n, K.m, K.transfer @ L.transfer, {"family": "composition"})


# --------------------------------------------------------------------------
# named families
# --------------------------------------------------------------------------


def identity_channel(d):
    return ChannelMap(d, d, np.eye(d * d), {"family": "identity", "params": {"d": d}})


def zero_map(n, m=None):
    m = n if m is None else m
    return ChannelMap(n, m, np.zeros((m * m, n * n)), {"family": "zero", "params": {"n": n, "m": m}})


def unitary_channel(U):
    """``Gamma_U(Q) = U Q U*``."""
    U = as_matrix(U, "U")
    return from_kraus([U], {"family": "unitary"})


def transpose_map(d):
    T = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            T[j + d * i, i + d * j] = 1.0
    return ChannelMap(d, d, T, {"family": "transpose", "params": {"d": d}})


def _replacement_transfer(d, sigma):
    # rho -> Tr(rho) sigma
    return np.outer(vec(sigma), vec(np.eye(d)).conj())


def depolarizing(d, lam):
    """``rho -> lam rho + (1 - lam) Tr(rho) I/d``."""
    if d < 2:
        raise InputError(f"depolarizing channel needs d >= 2, got {d}")
    T = lam * np.eye(d * d) + (1 - lam) * _replacement_transfer(d, np.eye(d) / d)
    return ChannelMap(d, d, T, {"family": "depolarizing", "params": {"d": d, "lambda": lam}})


def generalized_depolarizing(lam, gamma, diagonalize_gamma=False):
    """``rho -> lam rho + (1 - lam) Tr(rho) gamma`` for a density matrix `gamma`.

    With ``diagonalize_gamma=True`` the map is written in an eigenbasis of
    `gamma` (used on both sides), which makes it entrywise nonnegative for
    ``0 <= lam <= 1``.
    """
    gamma = as_matrix(gamma, "gamma")
    d = gamma.shape[0]
    if gamma.shape != (d, d):
        raise InputError("gamma must be square")
    if schatten_norm(gamma - gamma.conj().T, np.inf) > 1e-10:
        raise InputError("gamma must be Hermitian")
    w, V = np.linalg.eigh(0.5 * (gamma + gamma.conj().T))
    if w.min() < -1e-10 or abs(w.sum() - 1) > 1e-10:
        raise InputError("gamma must be positive semidefinite with unit trace")
    if diagonalize_gamma:
        gamma = np.diag(w[::-1]).astype(complex)
    T = lam * np.eye(d * d) + (1 - lam) * _replacement_transfer(d, gamma)
    meta = {
        "family": "generalized_depolarizing",
        "params": {"lambda": lam, "gamma": _encode_matrix(gamma), "diagonalized": bool(diagonalize_gamma)},
    }
    return ChannelMap(d, d, T, meta)


def transpose_depolarizing(d, lam):
    """``rho -> lam rho^T + (1 - lam) Tr(rho) I/d``.

    Entrywise nonnegative for ``0 <= lam <= 1`` and positive on that range, but
    completely positive only for ``lam <= 1/(d+1)``.
    """
    T = lam * transpose_map(d).transfer + (1 - lam) * _replacement_transfer(d, np.eye(d) / d)
    return ChannelMap(d, d, T, {"family": "transpose_depolarizing", "params": {"d": d, "lambda": lam}})


def werner_holevo(d):
    """``rho -> (Tr(rho) I - rho^T) / (d - 1)``."""
    if d < 2:
        raise InputError(f"Werner-Holevo map needs d >= 2, got {d}")
    T = (_replacement_transfer(d, np.eye(d)) - transpose_map(d).transfer) / (d - 1)
    return ChannelMap(d, d, T, {"family": "werner_holevo", "params": {"d": d}})


def random_unitary_permutation(probs, perms):
    """Random-unitary channel with Kraus operators ``sqrt(p_k) P_k``.

    `perms` are permutations of ``range(d)``; ``P_k`` maps ``e_i`` to
    ``e_{perm[i]}``.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or len(probs) != len(perms) or len(probs) == 0:
        raise InputError("need one probability per permutation")
    if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-10:
        raise InputError("probabilities must be nonnegative and sum to 1")
    d = len(perms[0])
    ops = []
    for p, perm in zip(probs, perms):
        if sorted(perm) != list(range(d)):
            raise InputError(f"invalid permutation of size {d}: {perm}")
        P = np.zeros((d, d))
        P[list(perm), list(range(d))] = 1.0
        ops.append(np.sqrt(p) * P)
    meta = {"family": "random_unitary_permutation",
            "params": {"probs": probs.tolist(), "perms": [list(map(int, q)) for q in perms]}}
    return from_kraus(ops, meta)


# --------------------------------------------------------------------------
# qubit maps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QubitDiagonalParams:
    """Axis lengths ``lambda_k`` and translations ``t_k`` of a qubit map."""

    lambda1: float
    lambda2: float
    lambda3: float
    t1: float = 0.0
    t2: float = 0.0
    t3: float = 0.0

    def __post_init__(self):
        vals = (self.lambda1, self.lambda2, self.lambda3, self.t1, self.t2, self.t3)
        if not all(math.isfinite(float(v)) for v in vals):
            raise InputError("qubit parameters must be finite")

    @classmethod
    def from_arrays(cls, lambdas, ts=(0.0, 0.0, 0.0)):
        return cls(*map(float, lambdas), *map(float, ts))

    @property
    def lambdas(self):
        return np.array([self.lambda1, self.lambda2, self.lambda3])

    @property
    def ts(self):
        return np.array([self.t1, self.t2, self.t3])


def from_pauli_transfer(a, meta=None):
    """Qubit map from its real 4x4 matrix ``a_jk = Tr[s_j K(s_k)] / 2``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (4, 4):
        raise InputError(f"Pauli transfer matrix must be 4x4, got {a.shape}")
    S = np.stack([vec(s) for s in PAULI], axis=1)
    return ChannelMap(2, 2, 0.5 * S @ a @ S.conj().T, meta)


def pauli_transfer(K):
    """Real 4x4 matrix ``a_jk = Tr[s_j K(s_k)] / 2`` of a qubit map."""
    if (K.n, K.m) != (2, 2):
        raise InputError("Pauli transfer matrix is defined for qubit maps only")
    S = np.stack([vec(s) for s in PAULI], axis=1)
    a = 0.5 * S.conj().T @ K.transfer @ S
    if np.max(np.abs(a.imag)) > 1e-10:
        raise InputError("map is not Hermiticity-preserving; Pauli matrix is complex")
    return a.real.copy()


def qubit_from_diagonal(params):
    """Qubit map ``I + w.s -> I + sum_k (lambda_k w_k + t_k) s_k``."""
    a = np.zeros((4, 4))
    a[0, 0] = 1.0
    a[1:, 0] = params.ts
    a[1:, 1:] = np.diag(params.lambdas)
    meta = {"family": "qubit_diag",
            "params": {"lambdas": params.lambdas.tolist(), "ts": params.ts.tolist()}}
    return from_pauli_transfer(a, meta)


def qubit_is_ep_canonical(params):
    """EP criterion for the diagonal form: ``l1 >= |l2|``, ``t1 >= 0``, ``t2 == 0``."""
    return bool(params.lambda1 >= abs(params.lambda2) and params.t1 >= 0 and params.t2 == 0)


def _check_orthogonal(O, name):
    O = np.asarray(O, dtype=float)
    if O.shape != (3, 3) or np.max(np.abs(O @ O.T - np.eye(3))) > 1e-9:
        raise InputError(f"{name} must be a 3x3 orthogonal matrix")
    return O


def rotate_bases(a, O1, O2):
    """Apply ``v -> O1 v`` and ``T -> O1 T O2`` to a Pauli transfer matrix.

    Row 0 transforms as ``a_0k -> (a_0. O2)_k`` so the whole matrix becomes
    ``diag(1, O1) a diag(1, O2)``.
    """
    O1 = _check_orthogonal(O1, "O1")
    O2 = _check_orthogonal(O2, "O2")
    R1 = np.eye(4)
    R1[1:, 1:] = O1
    R2 = np.eye(4)
    R2[1:, 1:] = O2
    return R1 @ np.asarray(a, dtype=float) @ R2


def real_condition_violation(a):
    """Largest ``|a_j2|`` or ``|a_2k|`` for ``j, k in {0, 1, 3}``.

    Zero is necessary for every ``Tr E_ij K(E_kl)`` to be real, hence for the
    map to be entrywise nonnegative in the standard basis.
    """
    a = np.asarray(a, dtype=float)
    idx = [0, 1, 3]
    return float(max(np.max(np.abs(a[idx, 2])), np.max(np.abs(a[2, idx]))))


# --------------------------------------------------------------------------
# random instances
# --------------------------------------------------------------------------


def _rng(seed):
    return np.random.default_rng(seed)


def _sqrt_inv(S):
    w, V = np.linalg.eigh(S)
    return (V / np.sqrt(w)) @ V.conj().T


def random_cp_channel(n, m, kraus_count, seed, trace_preserving=True):
    """Random CP map from Gaussian Kraus operators.

    Normalized to ``sum_k A_k* A_k = I`` when `trace_preserving`, otherwise
    scaled so that this sum has operator norm one (trace non-increasing).
    """
    if n < 1 or m < 1 or kraus_count < 1:
        raise InputError("dimensions and kraus_count must be positive")
    if trace_preserving and kraus_count * m < n:
        raise InputError("a trace-preserving map needs kraus_count * m >= n")
    rng = _rng(seed)
    ops = [rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)) for _ in range(kraus_count)]
    S = sum(A.conj().T @ A for A in ops)
    if trace_preserving:
        R = _sqrt_inv(S)
        ops = [A @ R for A in ops]
    else:
        ops = [A / np.sqrt(np.linalg.eigvalsh(S)[-1]) for A in ops]
    meta = {"family": "random_cp", "params": {"n": n, "m": m, "kraus_count": kraus_count,
                                               "trace_preserving": trace_preserving}, "seed": seed}
    return from_kraus(ops, meta)


def random_ep_cp_channel(n, m, kraus_count, seed, trace_preserving=True):
    """Random CP map whose Kraus operators have nonnegative real entries.

    For a trace-preserving map the stacked Kraus matrix must be an isometry
    with nonnegative entries, so each input column gets a random disjoint set
    of ``(kraus index, output row)`` slots holding a nonnegative unit vector.
    This needs ``kraus_count * m >= n``.
    """
    if n < 1 or m < 1 or kraus_count < 1:
        raise InputError("dimensions and kraus_count must be positive")
    rng = _rng(seed)
    slots = kraus_count * m
    if trace_preserving:
        if slots < n:
            raise InputError("trace-preserving EP construction needs kraus_count * m >= n")
        owner = np.concatenate([np.arange(n), rng.integers(0, n, slots - n)])
        rng.shuffle(owner)
        W = np.zeros((slots, n))
        for j in range(n):
            rows = np.flatnonzero(owner == j)
            x = rng.random(rows.size) + 0.05
            W[rows, j] = x / np.linalg.norm(x)
        ops = [W[k * m:(k + 1) * m] for k in range(kraus_count)]
    else:
        ops = [rng.random((m, n)) for _ in range(kraus_count)]
        S = sum(A.T @ A for A in ops)
        ops = [A / np.sqrt(np.linalg.eigvalsh(S)[-1]) for A in ops]
    meta = {"family": "random_ep_cp", "params": {"n": n, "m": m, "kraus_count": kraus_count,
                                                  "trace_preserving": trace_preserving}, "seed": seed}
    return from_kraus(ops, meta)


def random_linear_map(n, m, seed):
    """Map with an i.i.d. complex Gaussian transfer matrix, scaled by ``1/(nm)``."""
    rng = _rng(seed)
    T = (rng.standard_normal((m * m, n * n)) + 1j * rng.standard_normal((m * m, n * n))) / (n * m)
    return ChannelMap(n, m, T, {"family": "random_linear", "params": {"n": n, "m": m}, "seed": seed})


def random_ep_noncp_map(d, seed, max_tries=50):
    """Entrywise nonnegative positive map on ``M_d`` that is not CP.

    Draws either ``lam rho^T + (1-lam) Tr(rho) I/d`` with ``lam`` above the CP
    threshold ``1/(d+1)``, or the transpose of a random EP-CP channel, and
    returns the first draw whose Choi matrix has a negative eigenvalue.
    """
    rng = _rng(seed)
    for _ in range(max_tries):
        if rng.random() < 0.5:
            lam = float(rng.uniform(1.0 / (d + 1) + 0.1, 1.0))
            K = transpose_depolarizing(d, lam)
        else:
            inner = random_ep_cp_channel(d, d, int(rng.integers(2, 4)), int(rng.integers(2**31)))
            K = compose(transpose_map(d), inner)
            K = ChannelMap(d, d, K.transfer, {"family": "transpose_of_ep_cp", "params": inner.meta})
        if not is_cp(K).ok:
            K.meta["seed"] = seed
            return K
    raise RuntimeError("could not draw an EP map that is not CP")


def random_ep_qubit_params(seed, max_tries=1000):
    """Random CP, trace-preserving diagonal qubit parameters satisfying the EP criterion."""
    rng = _rng(seed)
    for _ in range(max_tries):
        lam = rng.uniform(-1, 1, 3)
        lam[0] = abs(lam[0])
        if lam[0] < abs(lam[1]):
            lam[0], lam[1] = abs(lam[1]), lam[0] * np.sign(lam[1])
        t = rng.uniform(-0.5, 0.5, 3) * (1 - np.abs(lam))
        t[0] = abs(t[0])
        t[1] = 0.0
        params = QubitDiagonalParams.from_arrays(lam, t)
        if qubit_is_ep_canonical(params) and is_cp(qubit_from_diagonal(params)).ok:
            return params
    raise RuntimeError("could not draw CP qubit parameters")


# --------------------------------------------------------------------------
# structural predicates
# --------------------------------------------------------------------------


class CPCheck(NamedTuple):
    ok: bool
    hermitian: bool
    min_eigenvalue: float
    witness: np.ndarray | None


class EPCheck(NamedTuple):
    ok: bool
    worst_violation: float
    worst_index: tuple  # (i, j, k, l): entry <f_l| K(E_ij) |f_k>


class TwoPositiveCheck(NamedTuple):
    ok: bool
    min_eigenvalue: float
    counterexample: np.ndarray | None


def is_cp(K, tol=1e-9):
    """Complete positivity via the smallest Choi eigenvalue.

    A Choi matrix that is not Hermitian (the map does not preserve
    Hermiticity) is reported with ``hermitian=False`` and ``ok=False``.
    """
    C = K.choi
    scale = max(1.0, schatten_norm(C, np.inf))
    if schatten_norm(C - C.conj().T, np.inf) > 1e-9 * scale:
        return CPCheck(False, False, float("nan"), None)
    w, V = hermitian_eigensystem(C)
    return CPCheck(bool(w[-1] >= -tol), True, float(w[-1]), V[:, -1])


def is_ep_in_basis(K, tol=1e-10, U=None, V=None):
    """Entrywise nonnegativity of the Choi matrix.

    Tests ``Gamma_V o K o Gamma_U`` when unitaries are given, i.e. the map
    written in the bases formed by the columns of ``U`` (input) and ``V*``
    (output).
    """
    if U is not None:
        K = compose(K, unitary_channel(U))
    if V is not None:
        K = compose(unitary_channel(V), K)
    C = K.choi
    viol = np.maximum(-C.real, np.abs(C.imag))
    r, c = np.unravel_index(int(np.argmax(viol)), viol.shape)
    worst = float(viol[r, c])
    i, l = divmod(int(r), K.m)
    j, k = divmod(int(c), K.m)
    return EPCheck(bool(worst <= tol), worst, (i, j, k, l))


def is_trace_preserving(K, tol=1e-10):
    """``Tr K(E_ij) = delta_ij`` for all ``i, j``."""
    tr = K.transfer.T @ vec(np.eye(K.m))
    return bool(np.max(np.abs(tr - vec(np.eye(K.n)))) <= tol)


def two_positive_falsify(K, samples=1000, seed=0, tol=1e-10):
    """Search for a PSD input on which ``id_2 (x) K`` is not positive.

    Inputs alternate between random pure states and full-rank Wishart
    matrices on ``C^2 (x) C^n``.  ``ok=True`` only means no counterexample
    was found.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    ext = tensor(identity_channel(2), K)
    rng = _rng(seed)
    d = 2 * K.n
    worst = np.inf
    for s in range(samples):
        if s % 2 == 0:
            psi = random_pure_state(d, rng)
            X = np.outer(psi, psi.conj())
        else:
            G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            X = G @ G.conj().T / np.trace(G @ G.conj().T).real
        Y = ext.apply(X)
        lam = float(np.linalg.eigvalsh(0.5 * (Y + Y.conj().T))[0])
        worst = min(worst, lam)
        if lam < -tol:
            return TwoPositiveCheck(False, lam, X)
    return TwoPositiveCheck(True, worst, None)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _encode_matrix(A):
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def channel_to_dict(K, metadata=None):
    """JSON-ready dict ``{n, m, transfer, metadata}``.

    ``transfer`` lists ``[re, im]`` pairs for the transfer matrix in row-major order.
    """
    doc = {
        "n": K.n,
        "m": K.m,
        "transfer": [[float(z.real), float(z.imag)] for z in K.transfer.reshape(-1)],
    }
    meta = dict(K.meta if metadata is None else metadata)
    if meta:
        doc["metadata"] = meta
    return doc


def channel_from_dict(doc):
    try:
        n, m = int(doc["n"]), int(doc["m"])
        pairs = np.asarray(doc["transfer"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed channel document: {exc}") from None
    if n < 1 or m < 1:
        raise InputError("n and m must be positive")
    if pairs.shape != (m * m * n * n, 2):
        raise InputError(f"transfer must hold {m * m * n * n} [re, im] pairs, got shape {pairs.shape}")
    if not np.all(np.isfinite(pairs)):
        raise InputError("transfer has non-finite entries")
    T = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(m * m, n * n)
    return ChannelMap(n, m, T, doc.get("metadata"))


def save_channel(K, path, metadata=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_dict(K, metadata), fh)


def load_channel(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from None
    return channel_from_dict(doc)
