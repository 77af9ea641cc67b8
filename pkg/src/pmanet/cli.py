"""``pmanet`` command line: run, sweep, compare, mpr-util.

Scenario keys can come from a ``key=value`` file (``--config``) and be
overridden by flags named after the same dotted keys, e.g.
``--protocol.olsr.hello_interval 1.0`` or ``--nodes=25``.
"""
from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional, Sequence

from . import experiment as ex
from .analytics import MprUtilizationParams, mpr_utilization
from .config import ConfigError, known_keys, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def parse_overrides(extra: Sequence[str]) -> Dict[str, str]:
    """Turn leftover ``--dotted.key value`` / ``--dotted.key=value`` flags into a mapping."""
    out: Dict[str, str] = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"flag --{key} needs a value")
            i += 1
            value = extra[i]
        out[key] = value
        i += 1
    return out


def _int_list(text: str) -> List[int]:
    """``1,2,5`` or ``1-5``."""
    vals: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            vals.extend(range(int(lo), int(hi) + 1))
        else:
            vals.append(int(part))
    return vals


def _float_list(text: str) -> List[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _str_list(text: str) -> List[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _emit(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        ex.write_atomic(path, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmanet",
        description="Packet-level simulator for DSDV, FSR and OLSR.",
        epilog=f"Scenario keys: {', '.join(known_keys())}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and print its record")
    run.add_argument("--config", help="key=value scenario file")
    run.add_argument("--out", help="record file (default: stdout)")
    run.add_argument("--audit", help="also write the per-event audit log here")

    sweep = sub.add_parser("sweep", help="run a sweep family over protocols, presets, points and seeds")
    sweep.add_argument("--family", required=True, choices=sorted(ex.FAMILIES))
    sweep.add_argument("--config", help="key=value base scenario file")
    sweep.add_argument("--points", help="comma list overriding the family's points")
    sweep.add_argument("--seeds", default="1", help="seed list, e.g. 1,2,3 or 1-5")
    sweep.add_argument("--protocols", default="dsdv,fsr,olsr")
    sweep.add_argument("--presets", default="original,modified")
    sweep.add_argument("--out", help="per-run records (default: stdout)")
    sweep.add_argument("--aggregate", help="mean/std file per protocol, preset and point")

    cmp_ = sub.add_parser("compare", help="simulated control count against the closed-form prediction")
    cmp_.add_argument("--config", help="key=value scenario file")
    cmp_.add_argument("--out", help="comparison record file (default: stdout)")

    mpr = sub.add_parser("mpr-util", help="evaluate the MPR two-hop utilisation score")
    mpr.add_argument("--b-available", type=float, required=True, help="bandwidth at the relay, b/s")
    mpr.add_argument("--b-requested", type=float, required=True, help="bandwidth requested by the source, b/s")
    mpr.add_argument("--e-available", type=float, required=True, help="energy left at the relay, J")
    mpr.add_argument("--e-transmit", type=float, required=True, help="energy to transmit one hop, J")
    mpr.add_argument("--delay", type=float, required=True, help="source to relay delay, s")
    return parser


def _cmd_run(args, overrides) -> int:
    cfg = load_config(args.config, overrides)
    result = ex.run_scenario(cfg, audit=args.audit is not None)
    if args.audit:
        ex.write_atomic(args.audit, ex.audit_text(result.audit))
    _emit(args.out, ex.records_text([ex.record_of(result)]))
    return EXIT_OK


def _cmd_sweep(args, overrides) -> int:
    base = load_config(args.config, overrides, defaults=ex.FAMILIES[args.family][2])
    try:
        points = _float_list(args.points) if args.points else ()
        seeds = _int_list(args.seeds)
    except ValueError as exc:
        raise ConfigError(f"bad list: {exc}") from None
    if args.family == "scalability":
        points = tuple(int(p) for p in points)
    spec = ex.SweepSpec(args.family, points, seeds, _str_list(args.protocols), _str_list(args.presets), base)
    records = ex.run_many(spec.configs())
    if args.aggregate:
        ex.write_atomic(args.aggregate, ex.aggregate_text(ex.aggregate(records)))
    _emit(args.out, ex.records_text(records))
    return EXIT_OK


def _cmd_compare(args, overrides) -> int:
    cfg = load_config(args.config, overrides)
    result = ex.run_scenario(cfg, audit=True)
    _emit(args.out, ex.comparison_text([ex.emit_analytic_comparison(result)]))
    return EXIT_OK


def _cmd_mpr_util(args) -> int:
    try:
        q = MprUtilizationParams(args.b_available, args.b_requested, args.e_available, args.e_transmit, args.delay)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    print(repr(mpr_utilization(q)))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if args.command == "mpr-util":
            if extra:
                raise ConfigError(f"unexpected arguments {extra}")
            return _cmd_mpr_util(args)
        overrides = parse_overrides(extra)
        handler = {"run": _cmd_run, "sweep": _cmd_sweep, "compare": _cmd_compare}[args.command]
        return handler(args, overrides)
    except ConfigError as exc:
        print(f"pmanet: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"pmanet: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
