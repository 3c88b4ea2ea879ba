"""Self-check suite behind ``aahsense validate``: oracle equivalence plus core invariants."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fisher import fidelity_slater, qfi, qfi_perturbative_single, qfi_perturbative_slater
from ..model import LatticeSpec, build_hamiltonian
from ..observables import observable, ofi, position_observable, variance
from ..oracle import fock_fidelity, fock_ground_state, fock_variance
from ..probes import slater_probe
from ..spectral import eigendecompose

ORACLE_SIZES = range(2, 9)
ORACLE_V = (0.0, 2.0)
ORACLE_H = (1e-3, 1e-1)
ORACLE_PHI = (0.0, 0.37)
ORACLE_STEP = 1e-2


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.detail}"


def oracle_grid():
    for L in ORACLE_SIZES:
        for V in ORACLE_V:
            for h in ORACLE_H:
                for phi in ORACLE_PHI:
                    yield LatticeSpec(L, V, h, phi=phi)


def oracle_equivalence() -> dict[str, float]:
    """Worst deviations over the small-system grid (fidelity and variance absolute, QFI relative)."""
    worst = {"fidelity": 0.0, "variance": 0.0, "qfi_rel": 0.0, "energy_rel": 0.0}
    for spec in oracle_grid():
        for n_f in range(1, min(spec.L, 4) + 1):
            worst["fidelity"] = max(worst["fidelity"], abs(
                fidelity_slater(spec, n_f, ORACLE_STEP) - fock_fidelity(spec, n_f, ORACLE_STEP)))
            probe = slater_probe(spec, n_f)
            for label in ("cdw", "h2"):
                obs = observable(label, spec.L)
                worst["variance"] = max(worst["variance"], abs(variance(probe, obs) - fock_variance(spec, n_f, obs)))
            energy, _, _ = fock_ground_state(spec, n_f)
            worst["energy_rel"] = max(worst["energy_rel"], abs(energy - probe.energy) / max(1.0, abs(energy)))
            if n_f < spec.L:
                ref = qfi_perturbative_slater(spec, n_f)
                worst["qfi_rel"] = max(worst["qfi_rel"], abs(qfi(spec, n_f).value - ref) / ref)
        ref = qfi_perturbative_single(spec)
        worst["qfi_rel"] = max(worst["qfi_rel"], abs(qfi(spec).value - ref) / ref)
    return worst


def run_validation() -> list[Check]:
    checks = []
    worst = oracle_equivalence()
    checks.append(Check("slater fidelity vs Fock", worst["fidelity"] <= 1e-10, f"max |diff| = {worst['fidelity']:.3g}"))
    checks.append(Check("Wick variance vs Fock", worst["variance"] <= 1e-10, f"max |diff| = {worst['variance']:.3g}"))
    checks.append(Check("free-fermion additivity", worst["energy_rel"] <= 1e-10, f"max rel = {worst['energy_rel']:.3g}"))
    checks.append(Check("finite-difference vs perturbative QFI", worst["qfi_rel"] <= 1e-3, f"max rel = {worst['qfi_rel']:.3g}"))

    two = LatticeSpec(2, V=0.0, h=0.0)
    q, o = qfi(two).value, ofi(two, position_observable(2)).value
    checks.append(Check("2-site closed form", abs(q - 0.25) <= 1e-6 and abs(o - 0.25) <= 1e-6, f"QFI = {q:.9f}, OFI = {o:.9f}"))

    L = 55
    spectrum = eigendecompose(build_hamiltonian(LatticeSpec(L, V=0.0, h=0.0)))
    exact = np.sort(-2 * np.cos(np.pi * np.arange(1, L + 1) / (L + 1)))
    dev = float(np.max(np.abs(spectrum.energies - exact)))
    checks.append(Check("open-chain spectrum", dev <= 1e-10, f"max |diff| = {dev:.3g}"))

    spec = LatticeSpec(233, V=2.0, h=1e-9, phi=0.37)
    H = build_hamiltonian(spec)
    spectrum = eigendecompose(H)
    U = spectrum.orbitals
    orth = float(np.max(np.abs(U.T @ U - np.eye(spec.L))))
    trace = abs(math.fsum(spectrum.energies) - math.fsum(H.diagonal))
    checks.append(Check("orthonormal eigenvectors", orth <= 1e-12, f"max |U^T U - I| = {orth:.3g}"))
    checks.append(Check("trace preservation", trace <= 1e-10 * spec.L, f"|diff| = {trace:.3g}"))

    est = qfi(spec)
    pos = ofi(spec, position_observable(spec.L), delta_h=est.delta_h)
    checks.append(Check("Cramer-Rao bound", pos.value <= est.value * (1 + 1e-4), f"OFI/QFI = {pos.value / est.value:.6f}"))
    return checks
