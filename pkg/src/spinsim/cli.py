"""Command-line front end.

Subcommands: ``run <config>``, ``figure <id>``, ``verify``,
``dump-circuit <config>``.  Exit codes: 0 success, 2 validation error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import sys

from . import compiler, runner, trotter
from .errors import InputError, ResourceError


def _add_override_flags(p: argparse.ArgumentParser):
    p.add_argument("--gateset", choices=["S1", "S2", "S3", "S4"], help="override gate set")
    p.add_argument("--order", type=int, choices=[1, 2], help="override Trotter order")
    p.add_argument("--steps", type=int, help="override: fixed step count")
    p.add_argument("--eps", type=float, help="override: fixed digital error budget")
    p.add_argument(
        "--growth", choices=["linear", "quadratic"], help="override: fixed-eps growth"
    )
    p.add_argument("--out", help="write output to this file instead of stdout")


def _apply_overrides(cfg, args):
    from dataclasses import replace

    if args.gateset:
        cfg = replace(cfg, gate_set=compiler.GateSet(args.gateset))
    order = args.order if args.order else cfg.plan.order
    if args.steps is not None:
        cfg = replace(cfg, plan=trotter.TrotterPlan.fixed_n(args.steps, order=order))
    elif args.eps is not None:
        growth = args.growth or cfg.plan.growth
        cfg = replace(cfg, plan=trotter.TrotterPlan.fixed_eps(args.eps, growth, order=order))
    elif args.order:
        plan = cfg.plan
        if plan.n_steps is not None:
            cfg = replace(cfg, plan=trotter.TrotterPlan.fixed_n(plan.n_steps, order=order))
        else:
            cfg = replace(
                cfg, plan=trotter.TrotterPlan.fixed_eps(plan.eps, plan.growth, order=order)
            )
    return cfg


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return runner.parse_config(fh.read())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinsim",
        description="Digital quantum simulation of spin models (CSV output).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config file")
    p_run.add_argument("config")
    _add_override_flags(p_run)

    p_fig = sub.add_parser("figure", help="run a figure-reproduction preset")
    p_fig.add_argument("id", help=f"one of: {', '.join(runner.FIGURE_IDS)}")
    _add_override_flags(p_fig)

    p_ver = sub.add_parser("verify", help="run the decomposition verification suite")
    p_ver.add_argument("--out", help="write the report to this file")

    p_dump = sub.add_parser(
        "dump-circuit", help="compile the config's full-time evolution circuit"
    )
    p_dump.add_argument("config")
    _add_override_flags(p_dump)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = _apply_overrides(_load_config(args.config), args)
            _emit(runner.run(cfg), args.out)
        elif args.command == "figure":
            cfg = _apply_overrides(runner.figure_preset(args.id), args)
            _emit(runner.run(cfg), args.out)
        elif args.command == "verify":
            checks = runner.verify_suite()
            _emit(runner.format_verify_report(checks) + "\n", args.out)
            if not all(c.passed for c in checks):
                return 1
        elif args.command == "dump-circuit":
            cfg = _apply_overrides(_load_config(args.config), args)
            runner.validate_config(cfg)
            h = runner.build_hamiltonian(cfg)
            circ, _ = runner._digital_circuit(cfg, h, cfg.t_max)
            _emit(compiler.dumps_circuit(circ), args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
