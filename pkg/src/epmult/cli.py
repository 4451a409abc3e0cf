"""Command-line front end: ``epmult {norm, check, verify}``.

Exit codes: 0 success, 1 bad input, 2 optimizer did not converge (value is
still printed), 3 I/O failure, 4 a verification case failed or was rejected.

``EPMULT_SEED`` and ``EPMULT_RESTARTS`` override the default seed and
restart count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import channels as ch
from .linalg import InputError, parse_exponent
from .norms import OptimizerConfig, nu, p2q_norm
from .verify import SuiteConfig, reports_to_jsonl, run_suite, summarize, summary_to_csv, wh_violation

EXIT_OK, EXIT_INPUT, EXIT_NOCONV, EXIT_IO, EXIT_FAILED = 0, 1, 2, 3, 4

FAMILIES = (
    "identity", "depolarizing", "generalized_depolarizing", "qubit_diag", "werner_holevo",
    "transpose", "transpose_depolarizing", "random_cp", "random_ep_cp",
)


class CliError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text, field, count=None):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(field, f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise CliError(field, f"expected {count} values, got {len(vals)}")
    return vals


def _ints(text, field):
    vals = _floats(text, field)
    if any(v != int(v) for v in vals):
        raise CliError(field, f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _need(args, name, field):
    val = getattr(args, name)
    if val is None:
        raise CliError(field, f"required for --family {args.family}")
    return val


def build_channel(args):
    """Construct the channel described by the parsed arguments."""
    if args.file:
        try:
            return ch.load_channel(args.file)
        except OSError as exc:
            raise CliError("--file", str(exc)) from None
        except InputError as exc:
            raise CliError("--file", str(exc)) from None
    fam = args.family
    if fam is None:
        raise CliError("--family", "give --family or --file")
    try:
        if fam == "identity":
            return ch.identity_channel(_need(args, "d", "--d"))
        if fam == "depolarizing":
            return ch.depolarizing(_need(args, "d", "--d"), _need(args, "lam", "--lambda"))
        if fam == "transpose":
            return ch.transpose_map(_need(args, "d", "--d"))
        if fam == "transpose_depolarizing":
            return ch.transpose_depolarizing(_need(args, "d", "--d"), _need(args, "lam", "--lambda"))
        if fam == "werner_holevo":
            return ch.werner_holevo(_need(args, "d", "--d"))
        if fam == "generalized_depolarizing":
            gamma = np.diag(_floats(_need(args, "gamma", "--gamma"), "--gamma"))
            return ch.generalized_depolarizing(_need(args, "lam", "--lambda"), gamma, diagonalize_gamma=True)
        if fam == "qubit_diag":
            lam = _floats(_need(args, "lambdas", "--lambdas"), "--lambdas", 3)
            ts = _floats(args.ts or "0,0,0", "--ts", 3)
            return ch.qubit_from_diagonal(ch.QubitDiagonalParams.from_arrays(lam, ts))
        if fam in ("random_cp", "random_ep_cp"):
            n = _need(args, "n", "--n")
            m = args.m or n
            make = ch.random_cp_channel if fam == "random_cp" else ch.random_ep_cp_channel
            return make(n, m, args.kraus, args.channel_seed)
    except InputError as exc:
        raise CliError(f"--family {fam}", str(exc)) from None
    raise CliError("--family", f"unknown family {fam!r}")


def _optimizer(args):
    try:
        return OptimizerConfig(args.restarts, args.max_iters, args.step_tolerance, 1e-10, args.seed)
    except InputError as exc:
        raise CliError("optimizer", str(exc)) from None


def _resolved(args):
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _format(config, rows, fmt, extra=None):
    """Render a header with the resolved config followed by flat result rows."""
    if fmt == "json":
        doc = {"config": config, "result": rows if len(rows) != 1 else rows[0]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, sort_keys=True, default=_default) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True, default=_default) + "\n")
    keys = list(rows[0]) if rows else []
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r[k]) for k in keys])
        return buf.getvalue()
    for r in rows:
        width = max(len(k) for k in keys)
        for k in keys:
            buf.write(f"{k:<{width}}  {_cell(r[k])}\n")
        buf.write("\n")
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, default=_default)
    return str(v)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(type(o).__name__)


def cmd_norm(args):
    K = build_channel(args)
    cfg = _optimizer(args)
    try:
        if args.nu:
            if args.t is None:
                raise CliError("--t", "required with --nu")
            res = nu(K, parse_exponent(args.t), cfg)
            kind = "nu"
        else:
            if args.p is None or args.q is None:
                raise CliError("--p/--q", "give --p and --q, or --nu with --t")
            res = p2q_norm(K, parse_exponent(args.p), parse_exponent(args.q), cfg)
            kind = "p2q"
    except InputError as exc:
        raise CliError("exponent", str(exc)) from None
    row = {"quantity": kind, **res.to_dict()}
    if args.format != "json":
        row["maximizer"] = res.to_dict()["maximizer"]
    _emit(_format(_resolved(args), [row], args.format), args.output)
    return EXIT_OK if res.converged else EXIT_NOCONV


def cmd_check(args):
    K = build_channel(args)
    cp = ch.is_cp(K, args.tol_cp)
    ep = ch.is_ep_in_basis(K, args.tol_ep)
    tp = ch.is_trace_preserving(K, args.tol_ep)
    two = ch.two_positive_falsify(K, args.samples, args.seed)
    row = {
        "cp": cp.ok,
        "cp_hermitian_preserving": cp.hermitian,
        "cp_min_eigenvalue": cp.min_eigenvalue,
        "ep": ep.ok,
        "ep_standard_basis": ep.ok,
        "ep_worst_violation": ep.worst_violation,
        "ep_worst_index": list(ep.worst_index),
        "tp": tp,
        "two_positive_not_falsified": two.ok,
        "two_positive_min_eigenvalue": two.min_eigenvalue,
    }
    if args.family == "qubit_diag" and not args.file:
        params = ch.QubitDiagonalParams.from_arrays(_floats(args.lambdas, "--lambdas", 3),
                                                   _floats(args.ts or "0,0,0", "--ts", 3))
        row["ep_canonical"] = ch.qubit_is_ep_canonical(params)
        row["ep"] = row["ep_canonical"]
    if cp.witness is not None:
        row["cp_witness"] = [[float(z.real), float(z.imag)] for z in cp.witness]
    _emit(_format(_resolved(args), [row], args.format), args.output)
    return EXIT_OK


def cmd_verify(args):
    t_values = _ints(args.t, "--t")
    if args.wh:
        if args.d is None:
            raise CliError("--d", "required with --wh")
        reports = [wh_violation(args.d, t) for t in t_values]
        ok = True
    else:
        if args.theorem is None:
            raise CliError("--theorem", "give --theorem or --wh")
        try:
            cfg = SuiteConfig(
                theorem=f"thm{args.theorem}", cases=args.cases, t_values=tuple(t_values),
                p_values=tuple(_floats(args.p_list, "--p")), max_dim=args.max_dim, seed=args.seed,
                tol=args.tol, optimizer=_optimizer(args), workers=args.workers,
            )
        except InputError as exc:
            raise CliError("suite", str(exc)) from None
        reports = run_suite(cfg).reports
        ok = all(r.status == "passed" for r in reports)
    summary = summarize(reports, 0.0)
    summary.pop("runtime")
    try:
        if args.jsonl:
            with open(args.jsonl, "w", encoding="utf-8", newline="") as fh:
                fh.write(reports_to_jsonl(reports))
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(summary_to_csv(summary))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    rows = [_row(r) for r in reports]
    if args.format == "json":
        text = _format(_resolved(args), rows, "json", {"summary": summary}) if rows else \
            json.dumps({"config": _resolved(args), "result": [], "summary": summary}, sort_keys=True) + "\n"
    else:
        text = _format(_resolved(args), rows or [{"cases": 0}], args.format)
    _emit(text, args.output)
    return EXIT_OK if ok else EXIT_FAILED


def _row(r):
    d = r.to_dict()
    d.pop("channels")
    extra = d.pop("extra")
    if "violated" in extra:
        d["violated"] = extra["violated"]
        d["output_spectrum"] = extra["output_spectrum"]
    return d


def _env_int(name, default):
    val = os.environ.get(name)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        raise CliError(name, f"expected an integer, got {val!r}") from None


def make_parser():
    seed = _env_int("EPMULT_SEED", 0)
    restarts = _env_int("EPMULT_RESTARTS", 32)

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=seed)
    common.add_argument("--restarts", type=int, default=restarts)
    common.add_argument("--max-iters", type=int, default=500)
    common.add_argument("--step-tolerance", type=float, default=1e-8)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")

    chan = _Parser(add_help=False)
    chan.add_argument("--family", choices=FAMILIES)
    chan.add_argument("--file", help="channel JSON document")
    chan.add_argument("--d", type=int)
    chan.add_argument("--lambda", dest="lam", type=float)
    chan.add_argument("--lambdas", help="lambda1,lambda2,lambda3 for qubit_diag")
    chan.add_argument("--ts", help="t1,t2,t3 for qubit_diag")
    chan.add_argument("--gamma", help="eigenvalues of gamma for generalized_depolarizing")
    chan.add_argument("--n", type=int)
    chan.add_argument("--m", type=int)
    chan.add_argument("--kraus", type=int, default=2)
    chan.add_argument("--channel-seed", type=int, default=0)

    parser = _Parser(prog="epmult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common, chan], help="maximal p->q norm or nu_t")
    p.add_argument("--nu", action="store_true")
    p.add_argument("--t")
    p.add_argument("--p")
    p.add_argument("--q")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("check", parents=[common, chan], help="CP / EP / TP / 2-positivity")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol-cp", type=float, default=1e-9)
    p.add_argument("--tol-ep", type=float, default=1e-10)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="theorem suites and the Werner-Holevo witness")
    p.add_argument("--theorem", type=int, choices=(1, 2, 4))
    p.add_argument("--wh", action="store_true")
    p.add_argument("--d", type=int)
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--t", default="2,3")
    p.add_argument("--p", dest="p_list", default="1,1.5,2")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--jsonl")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    try:
        parser = make_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
