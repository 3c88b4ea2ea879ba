"""Ground-state fidelity, fidelity susceptibility and QFI with respect to the Stark strength.

The finite-difference route uses ``F_Q = 4 chi = 8 (1 - f) / dh^2``. The
perturbative route ``F_Q = 4 sum_n |<n|X|0>|^2 / (E_n - E_0)^2`` (with
``X = sum_i i n_i``) is kept independent of it and serves as the oracle.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .model import LatticeSpec, build_hamiltonian
from .probes import make_probe
from .spectral import DEGENERACY_TOL, eigendecompose


class DegeneracyWarning(RuntimeWarning):
    pass


class DegenerateStateError(ValueError):
    pass


@dataclass(frozen=True)
class StepPolicy:
    """Adaptive finite-difference step.

    Start at ``initial_scale * max(|h|, floor)`` and rescale by ``base`` until the
    infidelity lands inside ``window``; then compare against the halved step.
    """

    initial_scale: float = 1e-6
    floor: float = 1e-6
    window: tuple[float, float] = (1e-8, 1e-4)
    base: float = 10.0
    max_rescales: int = 60
    rtol: float = 0.01
    max_step: float = 1e6

    def initial(self, h: float) -> float:
        return self.initial_scale * max(abs(h), self.floor)


DEFAULT_POLICY = StepPolicy()


@dataclass(frozen=True)
class FisherEstimate:
    value: float
    h: float
    delta_h: float
    one_minus_f: float
    converged: bool
    degenerate: bool
    # Estimate at delta_h / 2, kept for diagnostics.
    value_half: float = math.nan

    def to_dict(self) -> dict:
        return asdict(self)


def _states(spec: LatticeSpec, n_f: int | None) -> tuple[np.ndarray, bool]:
    probe = make_probe(spec, n_f)
    if n_f is None:
        return probe.psi0[:, None], probe.degenerate
    return probe.orbitals, probe.degenerate


def subspace_infidelity(A: np.ndarray, B: np.ndarray) -> float:
    """``1 - |det(A^T B)|`` for column-orthonormal ``A``, ``B`` of equal shape.

    ``|det(A^T B)|`` is the product of cosines of the principal angles between the
    two column spaces; the sines come from the component of ``B`` orthogonal to
    ``A``, so no ``1 - (1 - eps)`` cancellation occurs.
    """
    resid = B - A @ (A.T @ B)
    if resid.shape[1] == 1:
        sin2 = np.array([resid[:, 0] @ resid[:, 0]])
    else:
        sin2 = np.linalg.eigvalsh(resid.T @ resid)
    sin2 = np.clip(sin2, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        log_f = 0.5 * np.sum(np.log1p(-sin2))
    return float(min(max(-math.expm1(log_f), 0.0), 1.0))


def _flag(degenerate: bool, spec: LatticeSpec) -> None:
    if degenerate:
        warnings.warn(
            f"near-degenerate level (gap < {DEGENERACY_TOL:g}) for {spec!r}; fidelity unreliable",
            DegeneracyWarning,
            stacklevel=3,
        )


def fidelity_single(spec: LatticeSpec, delta_h: float) -> float:
    """``|<psi0(h)|psi0(h + delta_h)>|`` for the single-particle ground state."""
    a, deg_a = _states(spec, None)
    b, deg_b = _states(spec.with_h(spec.h + delta_h), None)
    _flag(deg_a or deg_b, spec)
    return float(min(abs(a[:, 0] @ b[:, 0]), 1.0))


def fidelity_slater(spec: LatticeSpec, n_f: int, delta_h: float) -> float:
    """``|det P|`` with ``P_lm = <psi_l(h)|psi_m(h + delta_h)>`` over the occupied orbitals.

    Overlaps enter the determinant with their signs.
    """
    a, deg_a = _states(spec, n_f)
    b, deg_b = _states(spec.with_h(spec.h + delta_h), n_f)
    _flag(deg_a or deg_b, spec)
    return float(min(abs(np.linalg.det(a.T @ b)), 1.0))


def infidelity(spec: LatticeSpec, delta_h: float, n_f: int | None = None) -> tuple[float, bool]:
    """``(1 - f, degenerate)`` between ``h`` and ``h + delta_h``, computed without cancellation."""
    a, deg_a = _states(spec, n_f)
    b, deg_b = _states(spec.with_h(spec.h + delta_h), n_f)
    return subspace_infidelity(a, b), deg_a or deg_b


class InfidelityCurve:
    """``delta_h -> 1 - f`` between the states at ``h - delta_h/2`` and ``h + delta_h/2``.

    Centering removes the ``O(delta_h^3)`` term that a one-sided pair picks up
    wherever ``chi`` varies with ``h``.
    """

    def __init__(self, spec: LatticeSpec, n_f: int | None):
        self.spec = spec
        self.n_f = n_f
        self.degenerate = False

    def __call__(self, delta_h: float) -> float:
        h = self.spec.h
        a, deg_a = _states(self.spec.with_h(h - delta_h / 2), self.n_f)
        b, deg_b = _states(self.spec.with_h(h + delta_h / 2), self.n_f)
        self.degenerate = self.degenerate or deg_a or deg_b
        return subspace_infidelity(a, b)


def choose_step(curve, h: float, policy: StepPolicy = DEFAULT_POLICY) -> tuple[float, float, bool]:
    """Rescale the step until ``curve(step)`` falls inside the policy window.

    Returns ``(step, curve(step), in_window)``.
    """
    lo, hi = policy.window
    step = policy.initial(h)
    u = curve(step)
    for _ in range(policy.max_rescales):
        if u < lo:
            if step * policy.base > policy.max_step:
                return step, u, False
            step *= policy.base
        elif u > hi:
            step /= policy.base
        else:
            return step, u, True
        u = curve(step)
    return step, u, lo <= u <= hi


def qfi(spec: LatticeSpec, n_f: int | None = None, policy: StepPolicy = DEFAULT_POLICY) -> FisherEstimate:
    """Finite-difference QFI ``8 (1 - f) / dh^2`` at ``spec.h``, with ``f`` the overlap of
    the states at ``h -+ dh/2``.

    ``n_f=None`` selects the single-particle probe, an integer the Slater probe.
    """
    curve = InfidelityCurve(spec, n_f)
    step, u, in_window = choose_step(curve, spec.h, policy)
    value = 8.0 * u / step**2
    u_half = curve(step / 2)
    value_half = 8.0 * u_half / (step / 2) ** 2
    if value == 0.0 and value_half == 0.0:
        # e.g. a filled band: the state does not depend on h at all
        converged = True
    else:
        converged = in_window and abs(value_half - value) <= policy.rtol * max(value, value_half)
    return FisherEstimate(
        value=value,
        h=spec.h,
        delta_h=step,
        one_minus_f=u,
        converged=bool(converged),
        degenerate=bool(curve.degenerate),
        value_half=value_half,
    )


def _position_matrix_elements(spec: LatticeSpec):
    spectrum = eigendecompose(build_hamiltonian(spec), "all")
    U = spectrum.orbitals
    weights = np.arange(spec.L, dtype=float) + spec.stark_offset
    return spectrum.energies, U.T @ (weights[:, None] * U)


def qfi_perturbative_single(spec: LatticeSpec) -> float:
    """``4 sum_{n>0} |<n|X|0>|^2 / (E_n - E_0)^2`` from the full spectrum."""
    energies, X = _position_matrix_elements(spec)
    gaps = energies[1:] - energies[0]
    if gaps[0] < DEGENERACY_TOL:
        raise DegenerateStateError(f"degenerate ground state for {spec!r}")
    return float(4.0 * np.sum(X[1:, 0] ** 2 / gaps**2))


def qfi_perturbative_slater(spec: LatticeSpec, n_f: int) -> float:
    """Slater analogue: sum over occupied ``m`` and empty ``n`` orbitals."""
    energies, X = _position_matrix_elements(spec)
    if n_f == spec.L:
        return 0.0
    gaps = energies[n_f:, None] - energies[None, :n_f]
    if gaps.min() < DEGENERACY_TOL:
        raise DegenerateStateError(f"degenerate Fermi level for {spec!r}, n_f={n_f}")
    return float(4.0 * np.sum(X[n_f:, :n_f] ** 2 / gaps**2))
