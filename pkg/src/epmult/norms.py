"""Maximal p -> q norms and maximal output t-norms of linear maps.

Both quantities are suprema of a convex function over a convex set
(``A -> ||K(A)||_q`` over the unit p-ball, ``rho -> ||K(rho)||_t`` over
density matrices), so they are estimated by the linearize-and-maximize
iteration: at the current point take the gradient ``G`` of the objective and
jump to the point of the feasible set maximizing ``Re Tr(G* X)``.  Convexity
makes each step non-decreasing in value; the iteration stops when the duality
gap between ``max_X Re Tr(G* X)`` and the current value falls below
``step_tolerance`` (relative), which is first-order stationarity.

Every reported value is the objective evaluated at the returned maximizer,
i.e. a certified lower bound on the supremum.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import ChannelMap, unvec, vec
from .linalg import InputError, as_matrix, parse_exponent, schatten_norm

__all__ = [
    "OptimizerConfig",
    "NormResult",
    "p2q_norm",
    "nu",
    "evaluate_p2q",
    "evaluate_nu",
    "AGREEMENT_RTOL",
]

# Relative distance within which two restarts count as agreeing.
AGREEMENT_RTOL = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 500
    step_tolerance: float = 1e-8
    value_tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise InputError("restarts and max_iters must be >= 1")
        if not (self.step_tolerance > 0 and self.value_tolerance > 0):
            raise InputError("tolerances must be positive")

    def scaled(self, factor):
        """Same stream with ``factor`` times as many restarts."""
        return OptimizerConfig(self.restarts * factor, self.max_iters, self.step_tolerance,
                               self.value_tolerance, self.seed)


@dataclass
class NormResult:
    """Outcome of a norm maximization.

    ``maximizer`` is a unit p-norm input matrix for :func:`p2q_norm` and a
    unit vector ``psi`` (input state ``psi psi*``) for :func:`nu`.
    """

    value: float
    maximizer: np.ndarray
    restarts_agreeing: int
    converged: bool
    iterations: int = 0
    exact: bool = False
    restart_values: list = field(default_factory=list, repr=False)

    def to_dict(self):
        M = np.asarray(self.maximizer)
        if M.ndim == 1:
            enc = [[float(z.real), float(z.imag)] for z in M]
        else:
            enc = [[[float(z.real), float(z.imag)] for z in row] for row in M]
        return {
            "value": float(self.value),
            "converged": bool(self.converged),
            "restarts_agreeing": int(self.restarts_agreeing),
            "maximizer": enc,
        }


def evaluate_p2q(K, A, p, q):
    """``||K(A)||_q / ||A||_p``."""
    return schatten_norm(K.apply(A), q) / schatten_norm(A, p)


def evaluate_nu(K, psi, t):
    """``||K(psi psi*)||_t / ||psi||^2``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    rho = np.outer(psi, psi.conj())
    return schatten_norm(K.apply(rho), t) / float(np.vdot(psi, psi).real)


def _norm_gradient(X, q):
    """Value ``||X||_q`` and the gradient ``G`` with ``Re Tr(G* X) = ||X||_q``."""
    W, s, Vh = np.linalg.svd(X)
    if s[0] == 0:
        return 0.0, np.zeros_like(X)
    if q == np.inf:
        return float(s[0]), np.outer(W[:, 0], Vh[0])
    r = s / s[0]
    f = float(s[0] * np.sum(r**q) ** (1 / q))
    # s^(q-1) / f^(q-1), computed in scaled form
    g = r ** (q - 1) / np.sum(r**q) ** ((q - 1) / q)
    k = len(s)
    return f, (W[:, :k] * g) @ Vh[:k]


def _unit_ball_argmax(G, p):
    """Maximize ``Re Tr(G* A)`` over ``||A||_p <= 1``; return ``(A, dual norm of G)``."""
    U, s, Vh = np.linalg.svd(G)
    k = len(s)
    if s[0] == 0:
        return None, 0.0
    if p == 1:
        return np.outer(U[:, 0], Vh[0]), float(s[0])
    if p == np.inf:
        return U[:, :k] @ Vh[:k], float(np.sum(s))
    pd = p / (p - 1)
    a = (s / s[0]) ** (pd - 1)
    a /= np.sum(a**p) ** (1 / p)
    dual = float(s[0] * np.sum((s / s[0]) ** pd) ** (1 / pd))
    return (U[:, :k] * a) @ Vh[:k], dual


class _Objective:
    """Shared pieces for both iterations; works on the raw transfer matrix."""

    def __init__(self, K, q):
        self.T = np.ascontiguousarray(K.transfer)
        self.Th = np.ascontiguousarray(K.transfer.conj().T)
        self.n, self.m = K.n, K.m
        self.q = q

    def grad(self, A):
        X = unvec(self.T @ vec(A), self.m)
        f, GX = _norm_gradient(X, self.q)
        return f, unvec(self.Th @ vec(GX), self.n)


def _ascend(step, x0, cfg):
    x = x0
    for it in range(1, cfg.max_iters + 1):
        f, x_next, gap = step(x)
        if gap <= cfg.step_tolerance * max(f, 1e-300) or x_next is None:
            return x, f, True, it
        x = x_next
    f, _, gap = step(x)
    return x, f, gap <= cfg.step_tolerance * max(f, 1e-300), cfg.max_iters


def _best_of(runs):
    # runs: list of (x, value, converged, iters); ties go to the lower index
    best = max(range(len(runs)), key=lambda i: (runs[i][1], -i))
    x, f, conv, iters = runs[best]
    agree = sum(abs(r[1] - f) <= AGREEMENT_RTOL * max(abs(f), 1e-300) for r in runs)
    return x, f, conv, iters, agree


def _restart_rngs(cfg):
    # spawn keys are positional, so the first k streams do not depend on cfg.restarts
    return [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)]


def _optimize_p2q(K, p, q, cfg, initial):
    obj = _Objective(K, q)
    n = K.n

    def step(A):
        f, G = obj.grad(A)
        A_next, dual = _unit_ball_argmax(G, p)
        return f, A_next, dual - f

    starts = []
    for A in initial or ():
        A = as_matrix(A, "initial point")
        if A.shape != (n, n):
            raise InputError(f"initial point must be {n}x{n}")
        starts.append(A / schatten_norm(A, p))
    for rng in _restart_rngs(cfg):
        Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        starts.append(Z / schatten_norm(Z, p))
    runs = [_ascend(step, A, cfg) for A in starts]
    A, f, conv, iters, agree = _best_of(runs)
    f = evaluate_p2q(K, A, p, q)
    return NormResult(f, A, agree, conv, iters, restart_values=[r[1] for r in runs])


def p2q_norm(K: ChannelMap, p, q, cfg: OptimizerConfig | None = None, initial=None, exact=True):
    """Lower bound on ``sup ||K(A)||_q / ||A||_p`` over nonzero complex `A`.

    Parameters
    ----------
    K : ChannelMap
    p, q : float or "inf"
        Schatten exponents, ``>= 1``.
    cfg : OptimizerConfig, optional
    initial : sequence of arrays, optional
        Extra starting points tried before the random restarts.
    exact : bool
        For ``p = q = 2`` return the largest singular value of the transfer
        matrix, with the optimizer run as a cross-check (``converged`` is
        False if the two disagree beyond ``1e-6`` relative).
    """
    p, q = parse_exponent(p), parse_exponent(q)
    cfg = cfg or OptimizerConfig()
    res = _optimize_p2q(K, p, q, cfg, initial)
    if exact and p == 2 and q == 2:
        U, s, Vh = np.linalg.svd(K.transfer)
        A = unvec(Vh[0].conj(), K.n)
        agrees = abs(res.value - s[0]) <= AGREEMENT_RTOL * max(s[0], 1e-300)
        return NormResult(float(s[0]), A, res.restarts_agreeing, bool(res.converged and agrees),
                          res.iterations, True, res.restart_values)
    return res


def nu(K: ChannelMap, t, cfg: OptimizerConfig | None = None, initial=None):
    """Lower bound on the maximal output t-norm ``sup_rho ||K(rho)||_t``.

    The supremum of the convex function ``rho -> ||K(rho)||_t`` over density
    matrices is attained on pure states, so the search runs over unit vectors
    ``psi``; the gradient step jumps to the top eigenvector of the Hermitian
    part of ``K^(G)``.
    """
    t = parse_exponent(t)
    cfg = cfg or OptimizerConfig()
    obj = _Objective(K, t)
    n = K.n

    def step(psi):
        f, G = obj.grad(np.outer(psi, psi.conj()))
        H = 0.5 * (G + G.conj().T)
        w, V = np.linalg.eigh(H)
        if f == 0:
            return 0.0, None, 0.0
        return f, V[:, -1], float(w[-1]) - f

    starts = []
    for psi in initial or ():
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        if psi.shape != (n,) or not np.all(np.isfinite(psi)):
            raise InputError(f"initial state must be a finite vector of length {n}")
        starts.append(psi / np.linalg.norm(psi))
    for rng in _restart_rngs(cfg):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        starts.append(v / np.linalg.norm(v))
    runs = [_ascend(step, psi, cfg) for psi in starts]
    psi, f, conv, iters, agree = _best_of(runs)
    return NormResult(evaluate_nu(K, psi, t), psi, agree, conv, iters,
                      restart_values=[r[1] for r in runs])
