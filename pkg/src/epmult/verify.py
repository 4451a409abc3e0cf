"""Numerical experiments for the multiplicativity statements.

Each ``check_*`` function evaluates both sides of one product identity (or
inequality) for a concrete pair of maps and returns a
:class:`VerificationReport`.  :func:`run_suite` generates cases from a
master seed and writes JSON-lines and CSV artifacts.

Inputs that fail a hypothesis (EP, CP, 2-positivity) raise
:class:`RejectedCase`; suites record those as ``status == "rejected"``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import channels as ch
from .linalg import InputError
from .norms import OptimizerConfig, nu, p2q_norm

__all__ = [
    "RejectedCase",
    "VerificationReport",
    "SuiteConfig",
    "SuiteResult",
    "EPHatProbe",
    "check_theorem1",
    "check_theorem2",
    "check_theorem4",
    "wh_violation",
    "ep_hat_probe",
    "run_suite",
    "reports_to_jsonl",
    "summarize",
    "summary_to_csv",
]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-3


class RejectedCase(ValueError):
    """A case whose maps do not satisfy the hypotheses of the check."""


@dataclass
class VerificationReport:
    case_id: str
    theorem_tag: str
    channels: list
    p: float | None
    t: float | None
    lhs: float
    rhs: float
    ratio: float
    tolerance: float
    passed: bool
    status: str = "passed"
    seed: int | None = None
    wall_time: float = 0.0
    diagnostic: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self, include_timing=False):
        d = asdict(self)
        if not include_timing:
            del d["wall_time"]
        return d

    def to_json(self, include_timing=False):
        return json.dumps(_jsonable(self.to_dict(include_timing)), sort_keys=True)

    @classmethod
    def from_json(cls, line):
        d = json.loads(line)
        return cls(**d)

    @property
    def violated(self):
        return bool(self.extra.get("violated", False))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 1.0 if lhs == 0 else float("inf")


def _descr(K):
    return _jsonable(K.meta)


# --------------------------------------------------------------------------
# single checks
# --------------------------------------------------------------------------


def check_theorem1(K, L, p, t, cfg=None, tol=DEFAULT_TOL, case_id="thm1", _retry=True):
    """``||K (x) L||_{p->2t} <= ||K||_{2->2t} ||L||_{p->2t}`` for EP `K`, equality at ``p = 2``."""
    cfg = cfg or OptimizerConfig()
    ep = ch.is_ep_in_basis(K)
    if not ep.ok:
        raise RejectedCase(f"K is not entrywise nonnegative (worst entry {ep.worst_violation:.3e} at {ep.worst_index})")
    if not (1 <= p <= 2):
        raise RejectedCase(f"p must lie in [1, 2], got {p}")
    if int(t) != t or t < 1:
        raise RejectedCase(f"t must be a positive integer, got {t}")
    q = 2 * int(t)
    start = time.perf_counter()
    rK = p2q_norm(K, 2, q, cfg)
    rL = p2q_norm(L, p, q, cfg)
    KL = ch.tensor(K, L)
    rKL = p2q_norm(KL, p, q, cfg, initial=[np.kron(rK.maximizer, rL.maximizer)])
    lhs, rhs = rKL.value, rK.value * rL.value
    ratio = _ratio(lhs, rhs)
    passed = lhs <= rhs * (1 + tol)
    if p == 2:
        passed = passed and lhs >= rhs * (1 - tol)
    if not passed and _retry:
        log.info("%s failed at ratio %.6g; re-running with 4x restarts", case_id, ratio)
        return check_theorem1(K, L, p, t, cfg.scaled(4), tol, case_id, _retry=False)
    return VerificationReport(
        case_id, "thm1", [_descr(K), _descr(L)], float(p), int(t), lhs, rhs, ratio, tol,
        bool(passed), "passed" if passed else "failed", cfg.seed, time.perf_counter() - start,
        extra={"converged": [rK.converged, rL.converged, rKL.converged], "restarts": cfg.restarts},
    )


def _check_nu_product(tag, Phi, Omega, t, cfg, tol, case_id, retry, check_again):
    start = time.perf_counter()
    rP = nu(Phi, t, cfg)
    rO = nu(Omega, t, cfg)
    rPO = nu(ch.tensor(Phi, Omega), t, cfg, initial=[np.kron(rP.maximizer, rO.maximizer)])
    lhs, rhs = rPO.value, rP.value * rO.value
    if rhs > 0:
        ratio = lhs / rhs
        passed = abs(ratio - 1) <= tol
    else:
        ratio = _ratio(lhs, rhs)
        passed = lhs <= tol
    if not passed and retry:
        log.info("%s failed at ratio %.6g; re-running with 4x restarts", case_id, ratio)
        return check_again(cfg.scaled(4))
    return VerificationReport(
        case_id, tag, [_descr(Phi), _descr(Omega)], None, t, lhs, rhs, ratio, tol,
        bool(passed), "passed" if passed else "failed", cfg.seed, time.perf_counter() - start,
        extra={"converged": [rP.converged, rO.converged, rPO.converged], "restarts": cfg.restarts},
    )


def check_theorem2(Phi, Omega, t, cfg=None, tol=DEFAULT_TOL, case_id="thm2", _retry=True):
    """``nu_t(Phi (x) Omega) = nu_t(Phi) nu_t(Omega)`` for CP `Phi`, `Omega` with `Phi` EP."""
    cfg = cfg or OptimizerConfig()
    if not ch.is_cp(Phi).ok:
        raise RejectedCase("Phi is not completely positive")
    ep = ch.is_ep_in_basis(Phi)
    if not ep.ok:
        raise RejectedCase(f"Phi is not entrywise nonnegative (worst entry {ep.worst_violation:.3e})")
    if not ch.is_cp(Omega).ok:
        raise RejectedCase("Omega is not completely positive")
    if int(t) != t or t < 1:
        raise RejectedCase(f"t must be a positive integer, got {t}")
    return _check_nu_product(
        "thm2", Phi, Omega, int(t), cfg, tol, case_id, _retry,
        lambda c: check_theorem2(Phi, Omega, t, c, tol, case_id, _retry=False),
    )


def check_theorem4(Phi, Omega, t, cfg=None, tol=DEFAULT_TOL, case_id="thm4", _retry=True,
                   two_positive_samples=1000):
    """``nu_2t(Phi (x) Omega) = nu_2t(Phi) nu_2t(Omega)`` for EP `Phi` and 2-positive `Omega`.

    `t` is the integer whose double is the exponent actually used.
    """
    cfg = cfg or OptimizerConfig()
    ep = ch.is_ep_in_basis(Phi)
    if not ep.ok:
        raise RejectedCase(f"Phi is not entrywise nonnegative (worst entry {ep.worst_violation:.3e})")
    if int(t) != t or t < 1:
        raise RejectedCase(f"t must be a positive integer, got {t}")
    if _retry:
        tp = ch.two_positive_falsify(Omega, two_positive_samples, seed=cfg.seed)
        if not tp.ok:
            raise RejectedCase(f"Omega is not 2-positive (output eigenvalue {tp.min_eigenvalue:.3e})")
    rep = _check_nu_product(
        "thm4", Phi, Omega, 2 * int(t), cfg, tol, case_id, _retry,
        lambda c: check_theorem4(Phi, Omega, t, c, tol, case_id, _retry=False),
    )
    rep.extra["phi_cp"] = ch.is_cp(Phi).ok
    return rep


def _max_entangled(d):
    v = np.eye(d).reshape(-1) / np.sqrt(d)
    return np.outer(v, v)


def wh_violation(d, t, cfg=None, case_id=None):
    """Compare ``nu_t(W)**2`` with the output t-norm of ``(W (x) W)`` on a maximally entangled state.

    ``W`` is the Werner-Holevo map on ``M_d``.  No optimizer is involved: the
    single-copy value follows from the flat output spectrum and the two-copy
    value is a direct eigendecomposition.  ``extra["violated"]`` is True when
    the entangled witness beats the product value by more than ``1e-9``.
    """
    start = time.perf_counter()
    W = ch.werner_holevo(d)
    rhs = float((d - 1) ** (2 * (1 - t) / t))
    out = ch.tensor(W, W).apply(_max_entangled(d))
    ev = np.clip(np.linalg.eigvalsh(0.5 * (out + out.conj().T)), 0, None)
    lhs = float(np.sum(ev**t) ** (1 / t))
    ratio = lhs / rhs
    return VerificationReport(
        case_id or f"wh-d{d}-t{t}", "wh", [_descr(W)], None, t, lhs, rhs, ratio, 1e-9,
        True, "passed", None, time.perf_counter() - start,
        extra={"violated": bool(ratio > 1 + 1e-9), "ratio_witness": ratio,
               "output_spectrum": sorted(ev.tolist(), reverse=True)},
    )


class EPHatProbe(NamedTuple):
    b: np.ndarray
    ep_hat: bool
    pauli: np.ndarray


def ep_hat_probe(params):
    """Entries of ``adjoint(K) o K`` for a diagonal-form qubit map with ``t2 = 0``.

    ``pauli`` is ``A^T A`` for the Pauli transfer matrix ``A``.  ``b`` is the
    same map written on matrix units ordered ``(E11, E12, E21, E22)``, scaled
    by 2 so that ``b[1, 2] = lambda1**2 - lambda2**2``; ``ep_hat`` is True
    when every entry of ``b`` is nonnegative (to ``1e-12``).
    """
    if params.t2 != 0:
        raise InputError("ep_hat_probe covers the t2 = 0 case only")
    A = ch.pauli_transfer(ch.qubit_from_diagonal(params))
    B = A.T @ A
    S = np.stack([ch.PAULI[k].reshape(-1) for k in range(4)], axis=1)
    b = S @ B @ S.conj().T
    if np.max(np.abs(b.imag)) > 1e-12:
        raise InputError("unexpected complex entries")
    b = b.real
    return EPHatProbe(b, bool(np.all(b >= -1e-12)), B)


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------


@dataclass
class SuiteConfig:
    theorem: str = "thm2"
    cases: int = 20
    t_values: tuple = (2, 3)
    p_values: tuple = (1.0, 1.5, 2.0)
    max_dim: int = 3
    seed: int = 0
    tol: float = DEFAULT_TOL
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    workers: int = 1

    def __post_init__(self):
        if self.theorem not in ("thm1", "thm2", "thm4"):
            raise InputError(f"unknown theorem tag {self.theorem!r}")
        if self.cases < 0:
            raise InputError("cases must be >= 0")
        if self.max_dim < 2:
            raise InputError("max_dim must be >= 2")
        if not self.t_values:
            raise InputError("t_values must be nonempty")


@dataclass
class SuiteResult:
    reports: list
    summary: dict


def _case_maker(cfg, index):
    """Deterministic inputs for case `index` of a suite."""
    ss = np.random.SeedSequence([cfg.seed, index])
    rng = np.random.default_rng(ss)
    seeds = [int(s) for s in rng.integers(0, 2**31, 4)]
    dims = list(range(2, cfg.max_dim + 1))
    t = int(cfg.t_values[index % len(cfg.t_values)])
    n = int(rng.choice(dims))
    m = int(rng.choice(dims))
    case_cfg = OptimizerConfig(cfg.optimizer.restarts, cfg.optimizer.max_iters,
                               cfg.optimizer.step_tolerance, cfg.optimizer.value_tolerance, seeds[3])
    case_id = f"{cfg.theorem}-{index:04d}"
    if cfg.theorem == "thm2":
        if rng.random() < 0.3:
            Phi = ch.qubit_from_diagonal(ch.random_ep_qubit_params(seeds[0]))
            Phi.meta["seed"] = seeds[0]
        else:
            Phi = ch.random_ep_cp_channel(n, n, int(rng.integers(1, 4)), seeds[0])
        Omega = ch.random_cp_channel(m, m, int(rng.integers(1, 4)), seeds[1])
        return case_id, lambda: check_theorem2(Phi, Omega, t, case_cfg, cfg.tol, case_id)
    if cfg.theorem == "thm4":
        Phi = ch.random_ep_noncp_map(n, seeds[0])
        Omega = ch.random_cp_channel(m, m, int(rng.integers(1, 4)), seeds[1])
        return case_id, lambda: check_theorem4(Phi, Omega, t, case_cfg, cfg.tol, case_id)
    p = float(cfg.p_values[(index // len(cfg.t_values)) % len(cfg.p_values)])
    K = ch.random_ep_cp_channel(n, n, int(rng.integers(1, 4)), seeds[0])
    if rng.random() < 0.5:
        L = ch.random_cp_channel(m, m, int(rng.integers(1, 4)), seeds[1])
    else:
        L = ch.random_linear_map(m, m, seeds[1])
    return case_id, lambda: check_theorem1(K, L, p, t, case_cfg, cfg.tol, case_id)


def _run_case(cfg, index):
    case_id, thunk = _case_maker(cfg, index)
    try:
        return thunk()
    except RejectedCase as exc:
        return VerificationReport(case_id, cfg.theorem, [], None, None, float("nan"), float("nan"),
                                  float("nan"), cfg.tol, False, "rejected", cfg.seed, 0.0, str(exc))


def summarize(reports, runtime):
    by_tag = {}
    for r in reports:
        s = by_tag.setdefault(r.theorem_tag, {"cases": 0, "passed": 0, "failed": 0, "rejected": 0,
                                              "worst_ratio": None})
        s["cases"] += 1
        s[r.status] += 1
        if r.status != "rejected":
            dev = abs(r.ratio - 1)
            if s["worst_ratio"] is None or dev > abs(s["worst_ratio"] - 1):
                s["worst_ratio"] = r.ratio
    for s in by_tag.values():
        judged = s["passed"] + s["failed"]
        s["pass_rate"] = s["passed"] / judged if judged else 0.0
    total = len(reports)
    passed = sum(r.status == "passed" for r in reports)
    return {
        "cases": total,
        "passed": passed,
        "failed": sum(r.status == "failed" for r in reports),
        "rejected": sum(r.status == "rejected" for r in reports),
        "pass_rate": passed / total if total else 0.0,
        "by_theorem": by_tag,
        "runtime": runtime,
    }


def reports_to_jsonl(reports, include_timing=False):
    return "".join(r.to_json(include_timing) + "\n" for r in reports)


def summary_to_csv(summary, include_timing=False):
    """One row per theorem tag; ``.`` decimal separator via ``repr`` of floats."""
    buf = io.StringIO()
    cols = ["theorem", "cases", "passed", "failed", "rejected", "pass_rate", "worst_ratio"]
    if include_timing:
        cols.append("runtime")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for tag in sorted(summary["by_theorem"]):
        s = summary["by_theorem"][tag]
        row = [tag, s["cases"], s["passed"], s["failed"], s["rejected"], repr(float(s["pass_rate"])),
               "" if s["worst_ratio"] is None else repr(float(s["worst_ratio"]))]
        if include_timing:
            row.append(repr(float(summary["runtime"])))
        w.writerow(row)
    return buf.getvalue()


def run_suite(cfg, jsonl_path=None, csv_path=None, include_timing=False):
    """Run ``cfg.cases`` generated cases and optionally write report files.

    Cases are independent and may run on ``cfg.workers`` threads; reports are
    ordered by ``case_id``.  Timing is left out of the files unless
    `include_timing`, so equal seeds give byte-identical files.
    """
    start = time.perf_counter()
    if cfg.workers > 1 and cfg.cases > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            reports = list(pool.map(lambda i: _run_case(cfg, i), range(cfg.cases)))
    else:
        reports = [_run_case(cfg, i) for i in range(cfg.cases)]
    reports.sort(key=lambda r: r.case_id)
    summary = summarize(reports, time.perf_counter() - start)
    if jsonl_path is not None:
        with open(jsonl_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports_to_jsonl(reports, include_timing))
    if csv_path is not None:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(summary_to_csv(summary, include_timing))
    return SuiteResult(reports, summary)
