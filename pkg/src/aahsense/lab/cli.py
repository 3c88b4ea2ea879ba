"""Command line: ``aahsense {qfi,ofi,sweep,fit,validate}``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ..fisher import qfi
from ..model import LatticeSpec
from ..observables import SharpObservableError, observable, ofi
from .config import ConfigError, SweepConfig
from .fitting import fit_power_law, points_from_records
from .sweep import read_csv, run_sweep, write_csv
from .validate import run_validation

EXIT_FAILURE = 1
EXIT_USAGE = 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 34/55, got {text!r}") from None


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=int, required=True, help="number of sites")
    p.add_argument("--V", type=float, default=2.0, help="AAH amplitude (default 2)")
    p.add_argument("--h", type=float, default=1e-9, help="Stark strength (default 1e-9)")
    p.add_argument("--phi", type=float, default=0.0, help="phase offset in [0, 1)")
    p.add_argument("--omega", type=_fraction, default=None, help="modulation p/q (default: Fibonacci approximant)")
    p.add_argument("--n-f", type=int, default=None, help="particle number; omit for the single-particle probe")


def _spec(args) -> LatticeSpec:
    return LatticeSpec(args.L, args.V, args.h, omega=args.omega, phi=args.phi)


def _cmd_qfi(args) -> int:
    spec = _spec(args)
    est = qfi(spec, args.n_f)
    print(json.dumps({"spec": spec.to_record(), "n_f": args.n_f, **est.to_dict()}, indent=2))
    return 0


def _cmd_ofi(args) -> int:
    spec = _spec(args)
    try:
        est = ofi(spec, observable(args.observable, spec.L), args.n_f)
    except SharpObservableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(json.dumps({"spec": spec.to_record(), "n_f": args.n_f, **est.to_dict()}, indent=2))
    return 0


def _cmd_sweep(args) -> int:
    try:
        config = SweepConfig.from_file(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = run_sweep(config, workers=args.workers)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    return 0


def _cmd_fit(args) -> int:
    with open(args.csv, newline="") as fh:
        records = read_csv(fh)
    quantity = args.quantity
    if quantity is None:
        names = sorted({r.quantity for r in records})
        if len(names) != 1:
            print(f"error: CSV holds quantities {names}; pass --quantity", file=sys.stderr)
            return EXIT_USAGE
        quantity = names[0]
    try:
        pts = points_from_records(records, quantity, args.h)
        fit = fit_power_law(pts)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(json.dumps({"quantity": quantity, **fit.to_dict()}, indent=2))
    return 0


def _cmd_validate(args) -> int:
    checks = run_validation()
    for c in checks:
        print(c.line())
    return 0 if all(c.ok for c in checks) else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aahsense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qfi", help="QFI for one lattice spec, as JSON")
    _add_spec_args(p)
    p.set_defaults(func=_cmd_qfi)

    p = sub.add_parser("ofi", help="OFI for one lattice spec and observable, as JSON")
    _add_spec_args(p)
    p.add_argument("--observable", choices=("cdw", "h2"), default="h2")
    p.set_defaults(func=_cmd_ofi)

    p = sub.add_parser("sweep", help="run a sweep config, write CSV")
    p.add_argument("config", type=Path)
    p.add_argument("-o", "--output", type=Path, default=None, help="CSV path (default stdout)")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $AAHSENSE_WORKERS or 1)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="power-law fit of one quantity in a sweep CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("--quantity", default=None)
    p.add_argument("--h", type=float, default=None, help="field value to fit at (needed for multi-h CSVs)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("validate", help="oracle equivalence and invariant checks")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
