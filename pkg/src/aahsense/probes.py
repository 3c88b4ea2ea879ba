"""Probe states: the single-particle ground state and the lowest-n_f Slater determinant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LatticeSpec, build_hamiltonian
from .spectral import DEGENERACY_TOL, eigendecompose

# Reference half-filled particle numbers per size. Not a single
# (L +- 1)/2 rule: 55 takes (L+1)/2, the others (L-1)/2.
REFERENCE_FILLINGS = {21: 10, 55: 28, 89: 44, 233: 116, 377: 188, 987: 493}


def default_filling(L: int) -> int:
    """Half filling for ``L`` sites: the reference filling when one exists, else ``L // 2``
    (which is ``(L-1)/2`` for odd ``L``)."""
    return REFERENCE_FILLINGS.get(L, max(L // 2, 1))


@dataclass(frozen=True, eq=False)
class SingleParticleProbe:
    spec: LatticeSpec
    psi0: np.ndarray
    energy: float
    gap: float

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_TOL


@dataclass(frozen=True, eq=False)
class SlaterProbe:
    spec: LatticeSpec
    n_f: int
    orbitals: np.ndarray
    energies: np.ndarray
    correlation: np.ndarray
    # E_{n_f} - E_{n_f - 1}; infinite for a filled band.
    fermi_gap: float

    @property
    def degenerate(self) -> bool:
        return self.fermi_gap < DEGENERACY_TOL

    @property
    def energy(self) -> float:
        return float(np.sum(self.energies))


def single_particle_probe(spec: LatticeSpec) -> SingleParticleProbe:
    spectrum = eigendecompose(build_hamiltonian(spec), k=2)
    return SingleParticleProbe(
        spec=spec,
        psi0=spectrum.orbitals[:, 0],
        energy=float(spectrum.energies[0]),
        gap=spectrum.gap,
    )


def slater_probe(spec: LatticeSpec, n_f: int) -> SlaterProbe:
    if not 1 <= n_f <= spec.L:
        raise ValueError(f"n_f must satisfy 1 <= n_f <= L={spec.L}, got {n_f}")
    k = min(n_f + 1, spec.L)
    spectrum = eigendecompose(build_hamiltonian(spec), k=k)
    occ = spectrum.orbitals[:, :n_f]
    corr = occ @ occ.T
    corr.setflags(write=False)
    fermi_gap = spectrum.level_gap(n_f) if n_f < spec.L else np.inf
    return SlaterProbe(
        spec=spec,
        n_f=n_f,
        orbitals=occ,
        energies=spectrum.energies[:n_f],
        correlation=corr,
        fermi_gap=fermi_gap,
    )


def make_probe(spec: LatticeSpec, n_f: int | None = None):
    """Single-particle probe for ``n_f=None``, Slater probe otherwise."""
    if n_f is None:
        return single_particle_probe(spec)
    return slater_probe(spec, n_f)
