"""Quantum Fisher information for Stark-field sensing on an AAH chain."""
from .fisher import FisherEstimate, fidelity_single, fidelity_slater, qfi, qfi_perturbative_single
from .model import LatticeSpec, build_hamiltonian, fibonacci_sizes, omega_for_size
from .observables import cdw_observable, expectation, ofi, position_observable, variance
from .probes import default_filling, single_particle_probe, slater_probe
from .spectral import Spectrum, eigendecompose, ground_gap

__version__ = "0.1.0"

__all__ = [
    "FisherEstimate", "LatticeSpec", "Spectrum", "build_hamiltonian", "cdw_observable",
    "default_filling", "eigendecompose", "expectation", "fibonacci_sizes", "fidelity_single",
    "fidelity_slater", "ground_gap", "ofi", "omega_for_size", "position_observable", "qfi",
    "qfi_perturbative_single", "single_particle_probe", "slater_probe", "variance",
]
