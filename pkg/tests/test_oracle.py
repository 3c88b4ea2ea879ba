from math import comb

import numpy as np
import pytest

from aahsense.model import LatticeSpec
from aahsense.oracle import (
    FockCapExceeded, fock_basis, fock_fidelity, fock_ground_state, fock_hamiltonian, hop,
)
from aahsense.probes import single_particle_probe, slater_probe


@pytest.mark.parametrize("L, n_f", [(2, 1), (4, 2), (8, 4), (7, 3), (5, 0), (6, 6)])
def test_basis(L, n_f):
    b = fock_basis(L, n_f)
    assert len(b) == comb(L, n_f)
    assert all(bin(int(s)).count("1") == n_f for s in b.states)
    assert list(b.states) == sorted(b.states)


def test_cap():
    with pytest.raises(FockCapExceeded):
        fock_basis(20, 10)


def test_hop_signs():
    # site 0 is the least significant bit
    assert hop(0b01, 1, 0) == (0b10, 1)
    assert hop(0b110, 0, 2) == (0b011, -1)
    assert hop(0b011, 1, 0) is None
    assert hop(0b010, 1, 0) is None


def test_hamiltonian_hermitian():
    spec = LatticeSpec(6, V=2.0, h=0.1, phi=0.3)
    H = fock_hamiltonian(spec, fock_basis(6, 3)).toarray()
    np.testing.assert_allclose(H, H.T, atol=1e-15)


def test_filled_band_single_state():
    energy, psi, basis = fock_ground_state(LatticeSpec(2, V=0.0, h=0.0), 2)
    assert len(basis) == 1
    np.testing.assert_array_equal(psi, [1.0])
    assert energy == pytest.approx(0.0, abs=1e-15)


def test_single_particle_reduction():
    spec = LatticeSpec(2, V=0.0, h=0.0)
    energy, psi, _ = fock_ground_state(spec, 1)
    p = single_particle_probe(spec)
    assert energy == pytest.approx(p.energy)
    np.testing.assert_allclose(psi, p.psi0, atol=1e-14)


@pytest.mark.parametrize("spec, n_f", [
    (LatticeSpec(6, V=2.0, h=1e-3, phi=0.3), 3),
    (LatticeSpec(8, V=0.0, h=0.1, phi=0.0), 4),
    (LatticeSpec(7, V=2.0, h=1e-1, phi=0.37), 2),
])
def test_free_fermion_additivity(spec, n_f):
    energy, _, _ = fock_ground_state(spec, n_f)
    assert energy == pytest.approx(slater_probe(spec, n_f).energy, rel=1e-10)


def test_fidelity_zero_step_and_symmetry():
    spec = LatticeSpec(6, V=2.0, h=1e-2, phi=0.1)
    assert fock_fidelity(spec, 3, 0.0) == pytest.approx(1.0, abs=1e-14)
    fwd = fock_fidelity(spec, 3, 0.05)
    back = fock_fidelity(spec.with_h(spec.h + 0.05), 3, -0.05)
    assert fwd == pytest.approx(back, abs=1e-12)
