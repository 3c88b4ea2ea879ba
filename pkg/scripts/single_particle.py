#!/usr/bin/env python3
"""Single-particle QFI and OFI: size scaling at h = 1e-9 and, optionally, the h sweep.

Desk scale (default): sizes 21..233, 200 phase samples, a few seconds.
``--full``: sizes 21..610 for the fit, 144..987 for the h sweep, 8000 samples (hours).

    python scripts/single_particle.py                 # V = 2, fit only
    python scripts/single_particle.py --V 0           # pure Stark
    python scripts/single_particle.py --h-sweep --workers 4 --out runs/
"""
import argparse
import json
from pathlib import Path

from aahsense.lab import SweepConfig, fit_power_law, points_from_records, run_sweep, write_csv
from aahsense.lab.config import DEFAULT_H_GRID

DESK = dict(fit_sizes=(21, 34, 55, 89, 144, 233), sweep_sizes=(144, 233), samples=200)
FULL = dict(fit_sizes=(21, 34, 55, 89, 144, 233, 377, 610), sweep_sizes=(144, 233, 377, 610, 987), samples=8000)
QUANTITIES = ("qfi", "ofi_cdw", "ofi_h2")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--V", type=float, default=2.0)
    ap.add_argument("--full", action="store_true", help="full-scale sizes and 8000 phase samples")
    ap.add_argument("--h-sweep", action="store_true", help="also sweep h over the default 40-point log grid")
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", type=Path, default=Path("."))
    args = ap.parse_args()
    scale = FULL if args.full else DESK
    args.out.mkdir(parents=True, exist_ok=True)
    tag = f"single_V{args.V:g}"

    config = SweepConfig(sizes=scale["fit_sizes"], V=args.V, h_grid=(1e-9,), observables=QUANTITIES,
                         phase_samples=scale["samples"], seed=args.seed)
    records = run_sweep(config, workers=args.workers)
    with open(args.out / f"{tag}_scaling.csv", "w", newline="") as fh:
        write_csv(records, fh)
    fits = {q: fit_power_law(points_from_records(records, q)) for q in QUANTITIES}
    print(json.dumps({q: {"beta": f.beta, "r_squared": f.r_squared} for q, f in fits.items()}, indent=2))

    if args.h_sweep:
        config = SweepConfig(sizes=scale["sweep_sizes"], V=args.V, h_grid=DEFAULT_H_GRID, observables=QUANTITIES,
                             phase_samples=scale["samples"], seed=args.seed)
        with open(args.out / f"{tag}_hsweep.csv", "w", newline="") as fh:
            write_csv(run_sweep(config, workers=args.workers), fh)


if __name__ == "__main__":
    main()
