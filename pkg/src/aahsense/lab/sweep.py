"""Phase-averaged sweeps over (L, h) grids and their CSV form.

Phase sample ``k`` is a pure function of ``(seed, stream, k)`` and every
(L, sample) pair is one independent task, so the output does not depend on how
tasks are scheduled across workers. All sizes and field values of a sweep share
stream 0: sample ``k`` sees the same ``phi`` at every L, which pairs the
finite-size comparison instead of adding independent sampling noise to it.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from ..fisher import qfi
from ..model import LatticeSpec
from ..observables import SharpObservableError, ofi, observable
from .config import SweepConfig

CSV_COLUMNS = ("L", "n_f", "V", "h", "quantity", "mean", "stderr", "samples", "converged_fraction")
WORKERS_ENV = "AAHSENSE_WORKERS"


def phase_sample(seed: int, k: int, stream: int = 0) -> float:
    """Uniform variate in [0, 1) keyed by ``(seed, stream, k)``; 53 random bits."""
    word = np.random.SeedSequence([seed, stream, k]).generate_state(1, np.uint64)[0]
    return float(int(word) >> 11) * 2.0**-53


@dataclass(frozen=True)
class SweepRecord:
    L: int
    n_f: int
    V: float
    h: float
    quantity: str
    mean: float
    stderr: float
    samples: int
    converged_fraction: float

    def row(self) -> list[str]:
        return [
            str(self.L), str(self.n_f), _fmt(self.V), _fmt(self.h), self.quantity,
            _fmt(self.mean), _fmt(self.stderr), str(self.samples), _fmt(self.converged_fraction),
        ]


@dataclass
class SweepResult:
    records: list[SweepRecord]
    # (L, h, quantity) -> per-sample values in sample order; NaN marks a failed point.
    samples: dict[tuple[int, float, str], np.ndarray]
    phases: np.ndarray


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def evaluate_point(spec: LatticeSpec, n_f: int | None, quantities: Iterable[str]) -> dict[str, tuple[float, bool]]:
    """All requested quantities at one (L, h, phi); values are ``(value, converged)``."""
    quantities = tuple(quantities)
    est = qfi(spec, n_f)
    out = {}
    if "qfi" in quantities:
        out["qfi"] = (est.value, est.converged and not est.degenerate)
    for q in quantities:
        if not q.startswith("ofi_"):
            continue
        obs = observable(q[4:], spec.L)
        try:
            o = ofi(spec, obs, n_f, delta_h=est.delta_h)
        except SharpObservableError:
            out[q] = (math.nan, False)
        else:
            out[q] = (o.value, o.converged and not o.degenerate)
    return out


def _task(args):
    L, V, n_f, phi, h_grid, quantities = args
    rows = []
    for h in h_grid:
        res = evaluate_point(LatticeSpec(L, V, h, phi=phi), n_f, quantities)
        rows.append([res[q] for q in quantities])
    return rows


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, workers)


def config_phases(config: SweepConfig) -> np.ndarray:
    if config.phi_fixed is not None:
        return np.full(config.phase_samples, config.phi_fixed)
    return np.array([phase_sample(config.seed, k) for k in range(config.phase_samples)])


def evaluate_sweep(config: SweepConfig, workers: int | None = None) -> SweepResult:
    workers = _workers(workers)
    quantities = config.observables
    tasks, keys = [], []
    phases = config_phases(config)
    for L in config.sizes:
        n_f = config.filling(L)
        for k, phi in enumerate(phases):
            tasks.append((L, config.V, n_f, float(phi), config.h_grid, quantities))
            keys.append((L, k))

    if workers == 1:
        results = [_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks, chunksize=chunk))

    n_h, n_q = len(config.h_grid), len(quantities)
    values: dict[int, np.ndarray] = {}
    flags: dict[int, np.ndarray] = {}
    for L in config.sizes:
        values[L] = np.empty((config.phase_samples, n_h, n_q))
        flags[L] = np.empty((config.phase_samples, n_h, n_q), dtype=bool)
    for (L, k), rows in zip(keys, results):
        for j, row in enumerate(rows):
            for q, (v, ok) in enumerate(row):
                values[L][k, j, q] = v
                flags[L][k, j, q] = ok

    records, samples = [], {}
    for L in config.sizes:
        n_f = config.filling(L) or 0
        for j, h in enumerate(config.h_grid):
            for q, name in enumerate(quantities):
                col = values[L][:, j, q]
                samples[(L, h, name)] = col.copy()
                mean, se, n = aggregate(col)
                records.append(SweepRecord(
                    L=L, n_f=n_f, V=config.V, h=h, quantity=name, mean=mean, stderr=se,
                    samples=n, converged_fraction=float(np.count_nonzero(flags[L][:, j, q])) / len(col),
                ))
    return SweepResult(records, samples, phases)


def aggregate(values: np.ndarray) -> tuple[float, float, int]:
    """``(mean, standard error, count)`` over finite entries, summed in order with ``fsum``."""
    finite = [float(v) for v in values if math.isfinite(v)]
    n = len(finite)
    if n == 0:
        return math.nan, math.nan, 0
    mean = math.fsum(finite) / n
    if n == 1:
        return mean, 0.0, 1
    var = math.fsum((v - mean) ** 2 for v in finite) / (n - 1)
    return mean, math.sqrt(var / n), n


def run_sweep(config: SweepConfig, workers: int | None = None) -> list[SweepRecord]:
    return evaluate_sweep(config, workers).records


def write_csv(records: Iterable[SweepRecord], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(src: TextIO) -> list[SweepRecord]:
    reader = csv.reader(src)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"expected CSV header {','.join(CSV_COLUMNS)}, got {header}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
        out.append(SweepRecord(
            L=int(row[0]), n_f=int(row[1]), V=float(row[2]), h=float(row[3]), quantity=row[4],
            mean=float(row[5]), stderr=float(row[6]), samples=int(row[7]),
            converged_fraction=float(row[8]),
        ))
    return out
