"""Power-law fits ``F = A L^beta`` by least squares on ``(ln L, ln F)``."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from ..model import is_fibonacci
from .sweep import SweepRecord


@dataclass(frozen=True)
class ScalingFit:
    beta: float
    log_prefactor: float
    r_squared: float
    points: tuple[tuple[int, float], ...]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["points"] = [list(p) for p in self.points]
        return d


def fit_power_law(points: Iterable[Sequence[float]], require_fibonacci: bool = True) -> ScalingFit:
    pts = [(int(L), float(F)) for L, F in points]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points for a scaling fit, got {len(pts)}")
    for L, F in pts:
        if not (F > 0 and math.isfinite(F)):
            raise ValueError(f"nonpositive or non-finite value at point (L={L}, F={F!r})")
        if require_fibonacci and not is_fibonacci(L):
            raise ValueError(f"scaling fits take Fibonacci sizes only, got L={L}")
    x = np.log([L for L, _ in pts])
    y = np.log([F for _, F in pts])
    A = np.vstack([x, np.ones_like(x)]).T
    (beta, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (beta * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(beta), float(intercept), r2, tuple(pts))


def points_from_records(records: Iterable[SweepRecord], quantity: str, h: float | None = None) -> list[tuple[int, float]]:
    """``(L, mean)`` pairs for one quantity at one field value.

    ``h`` may be omitted when the records hold a single field value; otherwise the
    closest grid value (relative distance) is used.
    """
    chosen = [r for r in records if r.quantity == quantity]
    if not chosen:
        raise ValueError(f"no records for quantity {quantity!r}")
    hs = sorted({r.h for r in chosen})
    if h is None:
        if len(hs) > 1:
            raise ValueError(f"records span {len(hs)} field values; pass h explicitly")
        target = hs[0]
    else:
        target = min(hs, key=lambda v: abs(math.log(v / h)) if v > 0 and h > 0 else abs(v - h))
    pts = [(r.L, r.mean) for r in chosen if r.h == target]
    return sorted(pts)
