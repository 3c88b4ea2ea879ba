#!/usr/bin/env python3
"""Half-filled Slater probe at phi = 0: QFI and position-OFI scaling, optional h sweep.

Desk scale: sizes 21, 55, 89, 233. ``--full`` adds 377 and 987 (n_f = 188, 493).
There is no phase averaging, so even the full run is minutes rather than hours.
"""
import argparse
import json
from pathlib import Path

from aahsense.lab import SweepConfig, fit_power_law, points_from_records, run_sweep, write_csv
from aahsense.lab.config import DEFAULT_H_GRID

DESK = (21, 55, 89, 233)
FULL = (21, 55, 89, 233, 377, 987)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V", type=float, default=2.0)
    ap.add_argument("--full", action="store_true", help="include L = 377 and 987")
    ap.add_argument("--h-sweep", action="store_true", help="also sweep h over the default 40-point log grid")
    ap.add_argument("--cdw", action="store_true", help="also evaluate the CDW observable")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", type=Path, default=Path("."))
    args = ap.parse_args()
    sizes = FULL if args.full else DESK
    quantities = ("qfi", "ofi_h2") + (("ofi_cdw",) if args.cdw else ())
    args.out.mkdir(parents=True, exist_ok=True)

    config = SweepConfig(sizes=sizes, V=args.V, h_grid=(1e-9,), probe_kind="half_filled", observables=quantities)
    records = run_sweep(config, workers=args.workers)
    with open(args.out / "half_scaling.csv", "w", newline="") as fh:
        write_csv(records, fh)
    fits = {}
    for q in quantities:
        try:
            f = fit_power_law(points_from_records(records, q))
            fits[q] = {"beta": f.beta, "r_squared": f.r_squared}
        except ValueError as exc:
            fits[q] = {"error": str(exc)}
    print(json.dumps({"fillings": {L: config.filling(L) for L in sizes}, "fits": fits}, indent=2))

    if args.h_sweep:
        config = SweepConfig(sizes=sizes[1:], V=args.V, h_grid=DEFAULT_H_GRID, probe_kind="half_filled",
                             observables=quantities)
        with open(args.out / "half_hsweep.csv", "w", newline="") as fh:
            write_csv(run_sweep(config, workers=args.workers), fh)


if __name__ == "__main__":
    main()
