"""Command-line front end: ``pesmc run | eigs | check-gain | audit``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pesmc.config import FIG1_PARAMS, SCENARIOS, parse_config, parse_overrides
from pesmc.control import certify_gain
from pesmc.core import PhysicalParams
from pesmc.diagnostics import audit_certificate, summarize
from pesmc.errors import DivergenceError, InsufficientTrace
from pesmc.sim import run
from pesmc.spectral import DEFAULT_N_MAX, modal_report
from pesmc.traceio import read_trace, write_trace

log = logging.getLogger("pesmc")


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def cmd_run(args) -> int:
    overrides = parse_overrides(args.set)
    for flag, key in (("t_final", "t_final"), ("dt", "dt"), ("grid_n", "grid_n"), ("snapshot_stride", "snapshot_stride")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    if args.open_loop:
        overrides["controller"] = None
    scenario = args.scenario if args.config is None or args.scenario is not None else None
    if args.config is None and scenario is None:
        scenario = "fig1-closed-loop"
    cfg = parse_config(args.config, overrides, scenario)
    try:
        trace = run(cfg)
    except DivergenceError as exc:
        if exc.trace is not None and len(exc.trace):
            write_trace(exc.trace, args.out)
            log.error("partial trace written to %s", args.out)
        raise
    write_trace(trace, args.out)
    print(f"trace = {args.out}")
    for key, value in summarize(trace).items():
        print(f"{key} = {_fmt(value)}")
    return 0


def cmd_eigs(args) -> int:
    params = PhysicalParams(args.gamma, args.rho, args.alpha, args.beta)
    print(modal_report(params, args.n_max).format())
    return 0


def cmd_check_gain(args) -> int:
    cert = certify_gain(args.gain, args.psi1, args.d_max, args.r_max, args.s0)
    print(cert.format())
    return 0


def cmd_audit(args) -> int:
    trace = read_trace(args.trace)
    if trace.remainder is None:
        raise InsufficientTrace(f"{args.trace}: no remainder data, was this an open-loop run?")
    cfg = trace.config_echo
    gain = args.gain
    psi1 = args.psi1
    d_max = args.d_max
    if cfg is not None and cfg.controller is not None:
        gain = cfg.controller.gain if gain is None else gain
        psi1 = cfg.controller.psi.boundary_value if psi1 is None else psi1
        d_max = cfg.disturbance.bound if d_max is None else d_max
    missing = [n for n, v in (("--gain", gain), ("--psi1", psi1), ("--d-max", d_max)) if v is None]
    if missing:
        raise ValueError(f"trace has no controller metadata; pass {', '.join(missing)}")
    report = audit_certificate(trace, gain, psi1, d_max, band=args.band)
    print(report.format())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pesmc",
        description="Sliding-mode boundary control of a parabolic-elliptic PDE.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario or config file and write a CSV trace")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--config", type=Path, help="YAML configuration file")
    p.add_argument("--out", type=Path, default=Path("trace.csv"))
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--grid-n", dest="grid_n", type=int)
    p.add_argument("--snapshot-stride", dest="snapshot_stride", type=int)
    p.add_argument("--open-loop", action="store_true", help="drop the controller")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="dotted override, e.g. controller.gain=3")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eigs", help="eigenvalues and stability of the uncontrolled system")
    for name in ("gamma", "rho", "alpha", "beta"):
        p.add_argument(f"--{name}", type=float, default=FIG1_PARAMS[name])
    p.add_argument("--n-max", dest="n_max", type=int, default=DEFAULT_N_MAX)
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("check-gain", help="reaching condition, eta and settling-time bound")
    p.add_argument("--gain", type=float, required=True)
    p.add_argument("--psi1", type=float, default=1.0)
    p.add_argument("--d-max", dest="d_max", type=float, required=True)
    p.add_argument("--r-max", dest="r_max", type=float, default=0.0)
    p.add_argument("--s0", type=float, required=True)
    p.set_defaults(func=cmd_check_gain)

    p = sub.add_parser("audit", help="audit the reaching condition along a recorded trace")
    p.add_argument("trace", type=Path)
    p.add_argument("--gain", type=float)
    p.add_argument("--psi1", type=float)
    p.add_argument("--d-max", dest="d_max", type=float)
    p.add_argument("--band", type=float)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
