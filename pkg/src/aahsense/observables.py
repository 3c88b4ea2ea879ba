"""Site-diagonal observables and their operator Fisher information.

For an observable ``O = sum_i w_i n_i`` the OFI is ``(d<O>/dh)^2 / Var(O)``.
Slater-state variances use Wick's theorem with ``C_ij = <c_i^dag c_j>``:

    Var(O) = sum_i w_i^2 C_ii - sum_ij w_i w_j C_ij C_ji
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .fisher import DEFAULT_POLICY, StepPolicy, InfidelityCurve, choose_step
from .model import LatticeSpec
from .probes import SingleParticleProbe, SlaterProbe, make_probe

SHARP_VARIANCE = 1e-30
CLAMP_TOL = 1e-14


class SharpObservableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DiagonalObservable:
    weights: np.ndarray
    label: str

    def __len__(self) -> int:
        return len(self.weights)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def cdw_observable(L: int) -> DiagonalObservable:
    """Even/odd occupation imbalance, weights ``(-1)^i``."""
    if L < 2:
        raise ValueError("L must be >= 2")
    return DiagonalObservable(np.where(np.arange(L) % 2 == 0, 1.0, -1.0), "cdw")


def position_observable(L: int, offset: float = 0.0) -> DiagonalObservable:
    """Position (Stark-term) observable, weights ``i + offset``."""
    if L < 2:
        raise ValueError("L must be >= 2")
    return DiagonalObservable(np.arange(L, dtype=float) + offset, "h2")


OBSERVABLES = {"cdw": cdw_observable, "h2": position_observable}


def observable(label: str, L: int) -> DiagonalObservable:
    try:
        return OBSERVABLES[label](L)
    except KeyError:
        raise ValueError(f"unknown observable {label!r}; expected one of {sorted(OBSERVABLES)}") from None


def _check(probe, obs: DiagonalObservable) -> None:
    if len(obs) != probe.spec.L:
        raise ValueError(f"observable has {len(obs)} weights, probe has L={probe.spec.L}")


def densities(probe: SingleParticleProbe | SlaterProbe) -> np.ndarray:
    if isinstance(probe, SingleParticleProbe):
        return probe.psi0**2
    return np.diag(probe.correlation).copy()


def expectation(probe: SingleParticleProbe | SlaterProbe, obs: DiagonalObservable) -> float:
    _check(probe, obs)
    return float(obs.weights @ densities(probe))


def variance(probe: SingleParticleProbe | SlaterProbe, obs: DiagonalObservable) -> float:
    _check(probe, obs)
    w = obs.weights
    if isinstance(probe, SingleParticleProbe):
        p = probe.psi0**2
        mean = w @ p
        var = (w - mean) ** 2 @ p
    else:
        C = probe.correlation
        var = (w**2) @ np.diag(C) - w @ (C * C.T) @ w
    var = float(var)
    if var < 0.0:
        if var < -CLAMP_TOL * max(1.0, float(w @ w)):
            raise ArithmeticError(f"negative variance {var:g} beyond rounding")
        var = 0.0
    return var


@dataclass(frozen=True)
class OfiEstimate:
    value: float
    h: float
    delta_h: float
    mean: float
    variance: float
    slope: float
    converged: bool
    degenerate: bool
    label: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def central_slope(spec: LatticeSpec, obs: DiagonalObservable, n_f: int | None, delta_h: float) -> tuple[float, bool]:
    lo = make_probe(spec.with_h(spec.h - delta_h), n_f)
    hi = make_probe(spec.with_h(spec.h + delta_h), n_f)
    slope = (expectation(hi, obs) - expectation(lo, obs)) / (2.0 * delta_h)
    return slope, lo.degenerate or hi.degenerate


def ofi(
    spec: LatticeSpec,
    obs: DiagonalObservable,
    n_f: int | None = None,
    policy: StepPolicy = DEFAULT_POLICY,
    delta_h: float | None = None,
) -> OfiEstimate:
    """``(d<O>/dh)^2 / Var(O)`` at ``spec.h`` for the single-particle (``n_f=None``)
    or Slater probe.

    The slope is a central difference with the step the QFI policy picks; pass
    ``delta_h`` to reuse a step already chosen for the same spec.
    """
    probe = make_probe(spec, n_f)
    mean = expectation(probe, obs)
    var = variance(probe, obs)
    if var < SHARP_VARIANCE:
        raise SharpObservableError("observable is sharp; OFI undefined")
    if delta_h is None:
        delta_h, _, _ = choose_step(InfidelityCurve(spec, n_f), spec.h, policy)
    slope, deg = central_slope(spec, obs, n_f, delta_h)
    slope_half, deg_half = central_slope(spec, obs, n_f, delta_h / 2)
    scale = max(abs(slope), abs(slope_half))
    converged = scale == 0.0 or abs(slope_half - slope) <= policy.rtol * scale
    return OfiEstimate(
        value=slope**2 / var,
        h=spec.h,
        delta_h=delta_h,
        mean=mean,
        variance=var,
        slope=slope,
        converged=bool(converged),
        degenerate=bool(probe.degenerate or deg or deg_half),
        label=obs.label,
    )
