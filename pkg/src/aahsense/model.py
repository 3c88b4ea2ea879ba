"""Lattice model: AAH quasiperiodic potential plus a linear Stark ramp on an open chain.

Sites are indexed ``i = 0 .. L-1``. The onsite energy is

    eps_i = V cos(2 pi (i omega + phi)) + h (i + stark_offset)

and every bond carries hopping -1, which fixes the energy unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Mapping

import numpy as np

GOLDEN_OMEGA = (math.sqrt(5.0) - 1.0) / 2.0

RECORD_KEYS = ("L", "V", "h", "omega_num", "omega_den", "phi")


def fibonacci_sizes(n_max: int) -> list[int]:
    """Return ``[F_1, ..., F_{n_max}]`` with ``F_1 = F_2 = 1``."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    seq = [1, 1][:n_max]
    while len(seq) < n_max:
        seq.append(seq[-1] + seq[-2])
    return seq


def is_fibonacci(L: int) -> bool:
    a, b = 1, 1
    while b < L:
        a, b = b, a + b
    return b == L


def omega_for_size(L: int, allow_golden: bool = False) -> Fraction:
    """Adjacent-Fibonacci approximant ``F_n / F_{n+1}`` for ``L = F_{n+1}``.

    With ``allow_golden`` a non-Fibonacci ``L`` falls back to the inverse golden
    ratio, stored as the exact binary fraction of its double value.
    """
    if L >= 2:
        a, b = 1, 1
        while b < L:
            a, b = b, a + b
        if b == L:
            return Fraction(a, b)
    if allow_golden:
        return Fraction(GOLDEN_OMEGA)
    raise ValueError(f"omega_for_size requires Fibonacci system size, got L={L}")


@dataclass(frozen=True)
class LatticeSpec:
    """Full model definition. ``omega`` defaults to the Fibonacci approximant for ``L``
    (golden-ratio limit for other sizes)."""

    L: int
    V: float = 2.0
    h: float = 0.0
    omega: Fraction | None = None
    phi: float = 0.0
    boundary: str = "open"
    # Origin of the Stark weight; Fisher quantities do not depend on it.
    stark_offset: float = 0.0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValueError(f"L must be an integer >= 2, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))
        if self.omega is None:
            object.__setattr__(self, "omega", omega_for_size(self.L, allow_golden=True))
        else:
            object.__setattr__(self, "omega", Fraction(self.omega))
        if not 0 < self.omega < 1:
            raise ValueError(f"omega must lie in (0, 1), got {self.omega}")
        if not 0.0 <= self.phi < 1.0:
            raise ValueError(f"phi must lie in [0, 1), got {self.phi!r}")
        if self.boundary != "open":
            raise ValueError("only open boundary conditions are supported")
        for name in ("V", "h", "phi", "stark_offset"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def with_h(self, h: float) -> "LatticeSpec":
        return LatticeSpec(self.L, self.V, h, self.omega, self.phi, self.boundary, self.stark_offset)

    def with_phi(self, phi: float) -> "LatticeSpec":
        return LatticeSpec(self.L, self.V, self.h, self.omega, phi, self.boundary, self.stark_offset)

    def to_record(self) -> dict:
        rec = {
            "L": self.L,
            "V": self.V,
            "h": self.h,
            "omega_num": self.omega.numerator,
            "omega_den": self.omega.denominator,
            "phi": self.phi,
        }
        if self.stark_offset:
            rec["stark_offset"] = self.stark_offset
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "LatticeSpec":
        unknown = set(rec) - set(RECORD_KEYS) - {"stark_offset"}
        if unknown:
            raise KeyError(f"unknown lattice key(s): {', '.join(sorted(unknown))}")
        if "L" not in rec:
            raise KeyError("missing lattice key: L")
        if ("omega_num" in rec) != ("omega_den" in rec):
            raise KeyError("omega_num and omega_den must be given together")
        omega = Fraction(int(rec["omega_num"]), int(rec["omega_den"])) if "omega_num" in rec else None
        return cls(
            L=int(rec["L"]),
            V=float(rec.get("V", 2.0)),
            h=float(rec.get("h", 0.0)),
            omega=omega,
            phi=float(rec.get("phi", 0.0)),
            stark_offset=float(rec.get("stark_offset", 0.0)),
        )


@dataclass(frozen=True, eq=False)
class TridiagonalHamiltonian:
    diagonal: np.ndarray
    offdiagonal: np.ndarray
    spec: LatticeSpec | None = None

    @property
    def L(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        """Dense copy, for tests and tiny systems only."""
        return (
            np.diag(self.diagonal)
            + np.diag(self.offdiagonal, 1)
            + np.diag(self.offdiagonal, -1)
        )


@lru_cache(maxsize=64)
def _reduced_phases(L: int, omega: Fraction) -> np.ndarray:
    # i*omega mod 1 reduced exactly, so large i loses no precision inside the cosine.
    out = np.array([float((k * omega) % 1) for k in range(L)])
    out.setflags(write=False)
    return out


def onsite_energies(L: int, V: float, h: float, omega, phi: float, stark_offset: float = 0.0) -> np.ndarray:
    i = np.arange(L, dtype=float)
    phase = _reduced_phases(L, Fraction(omega)) + phi
    return V * np.cos(2.0 * np.pi * phase) + h * (i + stark_offset)


def build_hamiltonian(spec: LatticeSpec) -> TridiagonalHamiltonian:
    diag = onsite_energies(spec.L, spec.V, spec.h, spec.omega, spec.phi, spec.stark_offset)
    off = -np.ones(spec.L - 1)
    diag.setflags(write=False)
    off.setflags(write=False)
    return TridiagonalHamiltonian(diag, off, spec)
