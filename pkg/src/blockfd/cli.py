"""
Command-line entry point: ``blockfd <command> [options]``.

Tables go to stdout (or --out) as CSV with a JSON metadata line, or as JSON.
The exit status is nonzero when a built-in check fails: the DG block
residual in ``dg-check`` or a disagreement between the closed-form and the
dense stability verdicts in ``stability``.
"""

import argparse
import sys
from dataclasses import asdict

from . import experiments as ex

COMMANDS = ("convergence", "long-time", "error-vs-time", "phase-demo", "stability",
            "dg-check", "symbol-dump")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scheme", choices=ex.SCHEMES, default="bfd")
    common.add_argument("--c1", type=float, default=0.5)
    common.add_argument("--c2", type=float, default=0.5)
    common.add_argument("--order", type=int, choices=(2, 4, 6), default=4)
    common.add_argument("--N", type=int, action="append", help="blocks; repeat for a list")
    common.add_argument("--L", type=float, default=1.0)
    common.add_argument("--T", type=float)
    common.add_argument("--cfl", type=float, default=0.2)
    common.add_argument("--post-process", action="store_true")
    common.add_argument("--propagator", choices=("rk", "modal"))
    common.add_argument("--out")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="blockfd", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "stability":
            p.add_argument("--lattice", type=int, default=33)
        if name == "error-vs-time":
            p.add_argument("--t-max", type=float, default=1e10)
    return parser


_DEFAULTS = {
    "convergence": dict(N=ex.REFINEMENT_N, T=1.0, propagator="rk"),
    "long-time": dict(N=ex.REFINEMENT_N, T=100.0, propagator="modal"),
    "error-vs-time": dict(N=(16, 128), T=0.0, propagator="modal"),
    "phase-demo": dict(N=(32,), T=4800.0, propagator="modal"),
    "stability": dict(N=(16,), T=0.0, propagator="modal"),
    "dg-check": dict(N=(16,), T=0.0, propagator="rk"),
    "symbol-dump": dict(N=(16,), T=0.0, propagator="modal"),
}


def config_from_args(args) -> ex.ExperimentConfig:
    d = _DEFAULTS[args.command]
    return ex.ExperimentConfig(
        command=args.command, scheme=args.scheme, c1=args.c1, c2=args.c2, order=args.order,
        N=tuple(args.N) if args.N else d["N"], L=args.L,
        T=args.T if args.T is not None else d["T"], cfl=args.cfl,
        post_process=args.post_process, propagator=args.propagator or d["propagator"],
        out=args.out, fmt=args.fmt, seed=args.seed)


def _convergence_rows(report):
    return [dict(N=N, h=h, l2_error=l2, linf_error=li) for N, h, l2, li in report.rows]


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    # the output path is not part of the result
    meta = {"config": {k: v for k, v in asdict(cfg).items() if k != "out"}}
    status = 0

    if cfg.command in ("convergence", "long-time"):
        run_study = ex.cmd_convergence if cfg.command == "convergence" else ex.cmd_long_time
        report = run_study(cfg)
        rows = _convergence_rows(report)
        meta["fit"] = report.summary()
        meta["failed"] = report.failed
    elif cfg.command == "error-vs-time":
        curves = ex.cmd_error_vs_time(cfg, ex.log_times(args.t_max))
        rows = [dict(label=c.label, N=c.N, t=t, error=e)
                for c in curves for t, e in zip(c.t, c.error)]
        meta["plateau"] = {f"{c.label}/N={c.N}": c.plateau for c in curves}
    elif cfg.command == "phase-demo":
        profiles = ex.cmd_phase_demo(cfg)
        rows = [dict(label=p.label, x=x, u_exact=a, u_numeric=b)
                for p in profiles for x, a, b in zip(p.x, p.exact, p.numeric)]
        meta["linf_error"] = {p.label: p.linf_error for p in profiles}
    elif cfg.command == "stability":
        rows = ex.cmd_stability(args.lattice, N=cfg.N[0])
        mismatch = [r for r in rows if r["stable"] != r["dense_stable"]]
        meta["verdict_mismatches"] = len(mismatch)
        meta["claim_violations"] = sum(r["claimed_stable"] and not r["stable"] for r in rows)
        status = 1 if mismatch else 0
    elif cfg.command == "dg-check":
        result = ex.cmd_dg_check(cfg.c1, cfg.c2, 1.0 / cfg.N[0])
        rows = [dict(name=k, value=v) for k, v in result["penalties"].items()]
        meta.update({k: v for k, v in result.items() if k != "penalties"})
        status = 0 if result["passed"] else 1
    else:
        rows = ex.cmd_symbol_dump(cfg.c1, cfg.c2, cfg.N[0], cfg.L)

    text = ex.write_table(rows, meta, cfg.out, cfg.fmt)
    if not cfg.out:
        sys.stdout.write(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
