"""Command-line front end: seeded, machine-readable reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .acceptance import CRITERIA, run_all
from .jacobi import cosine_coeffs, jacobi_P, jacobi_Q
from .kernels import (
    MercerKernel, decay_verdict_holder, decay_verdict_sobolev, eigen_sequence,
    example_kernel, n_width, validate,
)
from .multipliers import (
    default_smoothness_order, gen_shift_values, marcinkiewicz_report, one_minus_gen_shift,
    proof_sequences,
)
from .smoothness import equivalence_report
from .spaces import catalog, cumulative_dims, harmonic_dims, laplace_eigenvalue
from .zonal import ZonalFunction, lp_norm, random_zonal

THREADS_ENV = "TWOPOINT_THREADS"


@dataclass(frozen=True)
class RunConfig:
    command: str
    args: dict
    seed: int
    format: str
    out: str | None


class CommandError(Exception):
    """A numerical gate or input problem; exits nonzero with a message."""


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def render(config: RunConfig, result: dict, rows: list[dict]) -> str:
    if config.format == "json":
        doc = {"tool": "twopoint", "version": __version__, "config": asdict(config), "result": result}
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# twopoint {__version__}\n")
    buf.write("# config " + json.dumps(_jsonable(asdict(config)), sort_keys=True) + "\n")
    if rows:
        names = list(rows[0])
        for row in rows[1:]:
            names += [k for k in row if k not in names]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for row in rows:
            w.writerow([_fmt(row.get(n)) for n in names])
    return buf.getvalue()


def _space(args):
    return catalog(args.family, args.m)


def _load_json(path):
    """Plain object JSON, or a report whose ``result`` holds the object."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return data.get("result", data) if isinstance(data, dict) else data


def _function(args):
    if getattr(args, "fn", None):
        return ZonalFunction.from_dict(_load_json(args.fn))
    if args.family is None or args.m is None:
        raise CommandError("give --fn FILE or --family/--m for a seeded random function")
    return random_zonal(catalog(args.family, args.m), args.kmax, args.seed, args.decay)


def cmd_space_info(args):
    p = _space(args)
    k = np.arange(args.kmax + 1)
    dims = harmonic_dims(p, args.kmax)
    cum = cumulative_dims(p, args.kmax)
    lam = laplace_eigenvalue(p, k)
    rows = [{"k": int(i), "eigenvalue": float(lam[i]), "dim": int(dims[i]), "cumulative_dim": int(cum[i])}
            for i in k]
    result = {"family": p.family.value, "m": p.m, "sigma": p.sigma, "rho": p.rho,
              "alpha": p.alpha, "beta": p.beta, "table": rows}
    return result, rows


def _jacobi_index(args):
    if args.family is not None:
        p = _space(args)
        return (p.alpha, p.beta)
    if args.alpha is None or args.beta is None:
        raise CommandError("give --alpha/--beta or --family/--m")
    return (args.alpha, args.beta)


def cmd_jacobi_eval(args):
    idx = _jacobi_index(args)
    rows = [{"k": args.k, "x": x, "P": jacobi_P(idx, args.k, x), "Q": jacobi_Q(idx, args.k, x)} for x in args.x]
    return {"alpha": idx[0], "beta": idx[1], "values": rows}, rows


def cmd_jacobi_cosine(args):
    idx = _jacobi_index(args)
    c = cosine_coeffs(idx, args.k)
    rows = [{"v": v, "coeff": float(c[v])} for v in range(c.size)]
    return {"alpha": idx[0], "beta": idx[1], "k": args.k, "coeffs": c, "min_coeff": float(c.min())}, rows


def cmd_fn_norm(args):
    f = _function(args)
    rows = [{"p": p, "norm": lp_norm(f, p)} for p in args.p]
    return {"function": f.to_dict(), "norms": rows}, rows


def cmd_mult_table(args):
    p = _space(args)
    k = np.arange(args.kmax + 1)
    rows = []
    for t in args.t:
        q = gen_shift_values(p, 1, t, args.kmax)
        m_r = gen_shift_values(p, args.r, t, args.kmax)
        gap = one_minus_gen_shift(p, args.r, t, args.kmax)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(k > 0, gap / (k * t) ** (2 * args.r), np.nan)
        rows += [{"t": t, "k": int(i), "Q_k": float(q[i]), "m_r": float(m_r[i]),
                  "one_minus_m_r": float(gap[i]), "ratio_kt_2r": float(ratio[i])} for i in k]
    return {"family": p.family.value, "m": p.m, "r": args.r, "table": rows}, rows


def cmd_mult_marcinkiewicz(args):
    p = _space(args)
    s = args.s or default_smoothness_order(p.m)
    kmax = 2 ** (args.jmax + 1) + s
    mus = dict(zip(("mu1", "mu2", "mu3"), proof_sequences(p, args.r, args.t, args.a, kmax)))
    rows = []
    summary = {}
    for name in args.which:
        rep = marcinkiewicz_report(mus[name], s, args.jmax)
        summary[name] = {"sup_abs": rep.sup_abs, "bound": rep.bound}
        rows += [{"seq": name, "j": j, "stat": float(v)} for j, v in enumerate(rep.block_stats)]
    return {"family": p.family.value, "m": p.m, "s": s, "r": args.r, "t": args.t, "a": args.a,
            "summary": summary, "blocks": rows}, rows


def cmd_kfunc_report(args):
    f = _function(args)
    t_grid = np.geomspace(args.tmin, args.tmax, args.points)
    rep = equivalence_report(f, args.r, t_grid, args.p, args.a)
    rows = rep.rows()
    return {"function": f.to_dict(), "r": args.r, "p": args.p, "a": args.a,
            "rows": rows, "ratio_spread": rep.ratio_spread}, rows


def _kernel(args):
    return MercerKernel.from_dict(_load_json(args.input))


def cmd_kernel_decay(args):
    k = _kernel(args)
    v = validate(k)
    if not v.valid:
        raise CommandError("kernel fails validation: " + "; ".join(v.violations()))
    window = tuple(args.window) if args.window else None
    try:
        if args.mode == "holder":
            if args.beta is None:
                raise CommandError("--mode holder needs --beta")
            rep = decay_verdict_holder(k, args.beta, window, args.tol)
        else:
            if args.r is None:
                raise CommandError("--mode sobolev needs --r")
            rep = decay_verdict_sobolev(k, args.r, window, args.tol)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    d = rep.to_dict()
    return d, [d | {"fit_window": f"{rep.fit_window[0]:.17g}:{rep.fit_window[1]:.17g}",
                    "diagnostics": "; ".join(rep.diagnostics)}]


def cmd_kernel_nwidth(args):
    k = _kernel(args)
    seq = eigen_sequence(k)
    ns = [n for n in args.n]
    rows = [{"n": n, "kappa": n_width(k, n), "lambda_n_plus_1": seq.eigenvalue(n + 1)} for n in ns]
    return {"space": k.to_dict() | {"coeffs": None}, "widths": rows}, rows


def cmd_kernel_example(args):
    p = _space(args)
    try:
        k = example_kernel(p, args.eps, args.r, args.kmax)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    data = k.to_dict() | {"notes": list(k.notes), "eps": args.eps, "r": args.r}
    rows = [{"k": i, "b": float(b)} for i, b in enumerate(k.coeffs)]
    return data, rows


def cmd_verify_all(args):
    results = run_all(args.seed, args.only)
    for r in results:
        print(r.line(), file=sys.stderr)
    data = {"all_passed": all(r.passed for r in results), "criteria": [r.to_dict() for r in results]}
    rows = [{"id": r.id, "name": r.name, "passed": r.passed} for r in results]
    failed = [r for r in results if not r.passed]
    return data, rows, (1 if failed else 0), [f"criterion {r.id} failed: {r.name}" for r in failed]


def _global_flags(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--format", choices=("csv", "json"),
                        default=default if suppress else "json", help="report format")
    parser.add_argument("--seed", type=int, default=default if suppress else 0,
                        help="seed for random test functions (64-bit)")
    parser.add_argument("--out", default=default, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twopoint", description=__doc__)
    parser.add_argument("--version", action="version", version=f"twopoint {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--family", required=True)
    space.add_argument("--m", type=int, required=True)
    opt_space = argparse.ArgumentParser(add_help=False)
    opt_space.add_argument("--family")
    opt_space.add_argument("--m", type=int)
    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--fn", "--input", dest="fn", help="function JSON {family, m, coeffs}")
    fn.add_argument("--kmax", type=int, default=128)
    fn.add_argument("--decay", type=float, default=2.0)

    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group_name, help_text):
        g = groups.add_parser(group_name, help=help_text)
        return g.add_subparsers(dest="action", required=True)

    s = sub("space", "space catalog")
    p = s.add_parser("info", parents=[common, space])
    p.add_argument("--kmax", type=int, default=10)
    p.set_defaults(func=cmd_space_info)

    s = sub("jacobi", "Jacobi polynomials")
    p = s.add_parser("eval", parents=[common, opt_space])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_jacobi_eval)
    p = s.add_parser("cosine-coeffs", parents=[common, opt_space])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_jacobi_cosine)

    s = sub("fn", "zonal functions")
    p = s.add_parser("norm", parents=[common, opt_space, fn])
    p.add_argument("--p", type=float, nargs="+", default=[2.0])
    p.set_defaults(func=cmd_fn_norm)

    s = sub("mult", "multiplier sequences")
    p = s.add_parser("table", parents=[common, space])
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--t", type=float, nargs="+", required=True)
    p.add_argument("--kmax", type=int, default=32)
    p.set_defaults(func=cmd_mult_table)
    p = s.add_parser("marcinkiewicz", parents=[common, space])
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--t", type=float, default=0.01)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--jmax", type=int, default=10)
    p.add_argument("--s", type=int, help="difference order (default floor(m/2)+1)")
    p.add_argument("--which", nargs="+", choices=("mu1", "mu2", "mu3"), default=["mu1", "mu2", "mu3"])
    p.set_defaults(func=cmd_mult_marcinkiewicz)

    s = sub("kfunc", "K-functionals and moduli")
    p = s.add_parser("report", parents=[common, opt_space, fn])
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--tmin", type=float, default=0.01)
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--points", type=int, default=32)
    p.set_defaults(func=cmd_kfunc_report)

    s = sub("kernel", "Mercer kernels")
    p = s.add_parser("decay", parents=[common])
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("holder", "sobolev"), required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--window", type=float, nargs=2)
    p.set_defaults(func=cmd_kernel_decay)
    p = s.add_parser("nwidth", parents=[common])
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_kernel_nwidth)
    p = s.add_parser("example", parents=[common, space])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--kmax", type=int, default=256)
    p.set_defaults(func=cmd_kernel_example)

    p = groups.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", type=int, nargs="+", choices=sorted(CRITERIA))
    p.set_defaults(func=cmd_verify_all, action=None)
    return parser


def _config(args) -> RunConfig:
    skip = {"func", "group", "action", "format", "seed", "out"}
    command = " ".join(x for x in (args.group, args.action) if x)
    extra = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return RunConfig(command, extra, int(args.seed), args.format, args.out)


def _limit_threads():
    n = os.environ.get(THREADS_ENV)
    if not n:
        return None
    from threadpoolctl import threadpool_limits
    return threadpool_limits(int(n))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    _limit_threads()
    messages = []
    try:
        out = args.func(args)
    except (CommandError, ValueError, OSError, KeyError) as exc:
        print(f"twopoint: error: {exc}", file=sys.stderr)
        return 2
    if len(out) == 2:
        result, rows = out
        status = 0
    else:
        result, rows, status, messages = out
    text = render(config, result, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in messages:
        print(f"twopoint: {msg}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
