import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aahsense.fisher import (
    fidelity_single, fidelity_slater, infidelity, qfi, qfi_perturbative_single,
    qfi_perturbative_slater, subspace_infidelity,
)
from aahsense.model import LatticeSpec
from aahsense.oracle import fock_fidelity
from aahsense.probes import slater_probe


def two_site_ground(d):
    """Ground vector of [[0, -1], [-1, d]] in closed form."""
    e0 = (d - math.sqrt(d * d + 4)) / 2
    v = np.array([1.0, -e0])
    return v / np.linalg.norm(v)


def test_zero_step_is_identity():
    spec = LatticeSpec(21, V=2.0, h=1e-3, phi=0.2)
    assert fidelity_single(spec, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert fidelity_slater(spec, 10, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_two_site_fidelity_closed_form():
    dh = 1e-4
    spec = LatticeSpec(2, V=0.0, h=0.0)
    exact = abs(two_site_ground(0.0) @ two_site_ground(dh))
    assert fidelity_single(spec, dh) == pytest.approx(exact, abs=1e-15)
    # chi = |<1|X|0>|^2 / (E_1 - E_0)^2 = (1/4) / 4
    u, _ = infidelity(spec, dh)
    assert u == pytest.approx(dh**2 / 2 / 16, rel=1e-6)


def test_two_site_qfi():
    spec = LatticeSpec(2, V=0.0, h=0.0)
    est = qfi(spec)
    assert est.value == pytest.approx(0.25, abs=1e-6)
    assert est.converged and not est.degenerate
    assert 1e-8 <= est.one_minus_f <= 1e-4
    assert qfi_perturbative_single(spec) == pytest.approx(0.25, abs=1e-14)


def test_three_site_cross_check():
    spec = LatticeSpec(3, V=0.0, h=0.0)
    assert qfi(spec).value == pytest.approx(qfi_perturbative_single(spec), rel=1e-3)


@pytest.mark.parametrize("c", [-7.0, 3.0, 100.0])
def test_index_shift_invariance(c):
    base = LatticeSpec(34, V=2.0, h=1e-3, phi=0.4)
    shifted = LatticeSpec(34, V=2.0, h=1e-3, phi=0.4, stark_offset=c)
    assert qfi_perturbative_single(shifted) == pytest.approx(qfi_perturbative_single(base), rel=1e-10)
    assert qfi(shifted).value == pytest.approx(qfi(base).value, rel=1e-6)
    assert qfi(shifted, 17).value == pytest.approx(qfi(base, 17).value, rel=1e-6)


@pytest.mark.parametrize("L", [5, 21, 55, 89])
@pytest.mark.parametrize("V", [0.0, 2.0])
@pytest.mark.parametrize("h", [1e-9, 1e-3])
def test_oracle_equivalence(L, V, h):
    spec = LatticeSpec(L, V, h, phi=0.37)
    est = qfi(spec)
    assert est.converged
    assert est.value == pytest.approx(qfi_perturbative_single(spec), rel=1e-3)


@pytest.mark.parametrize("L, n_f", [(21, 10), (55, 28), (89, 44), (34, 17)])
def test_slater_qfi_matches_perturbation_sum(L, n_f):
    spec = LatticeSpec(L, V=2.0, h=1e-9, phi=0.0)
    est = qfi(spec, n_f)
    assert est.converged
    assert est.value == pytest.approx(qfi_perturbative_slater(spec, n_f), rel=1e-3)


@pytest.mark.parametrize("n_f", [None, 44])
@pytest.mark.parametrize("h", [1e-9, 1e-2])
def test_quadratic_infidelity(n_f, h):
    spec = LatticeSpec(89, V=2.0, h=h, phi=0.1)
    est = qfi(spec, n_f)
    u_half, _ = infidelity(spec, est.delta_h / 2, n_f)
    u, _ = infidelity(spec, est.delta_h, n_f)
    assert u_half / u == pytest.approx(0.25, rel=0.01)


def test_single_vs_one_particle_slater():
    spec = LatticeSpec(55, V=2.0, h=1e-3, phi=0.8)
    for dh in (1e-5, 1e-3):
        assert fidelity_slater(spec, 1, dh) == pytest.approx(fidelity_single(spec, dh), abs=1e-13)


def test_full_band_fidelity_is_one():
    spec = LatticeSpec(13, V=2.0, h=0.2, phi=0.5)
    assert fidelity_slater(spec, 13, 0.1) == pytest.approx(1.0, abs=1e-12)
    est = qfi(spec, 13)
    assert est.value == pytest.approx(0.0, abs=1e-6)


def test_slater_fidelity_against_fock_space():
    spec = LatticeSpec(4, V=2.0, h=1e-3)
    assert fidelity_slater(spec, 2, 1e-6) == pytest.approx(fock_fidelity(spec, 2, 1e-6), abs=1e-10)


def test_infidelity_agrees_with_direct_overlap():
    spec = LatticeSpec(34, V=2.0, h=1e-2, phi=0.3)
    for n_f, dh in ((None, 1e-2), (17, 1e-2), (17, 1e-1)):
        f = fidelity_single(spec, dh) if n_f is None else fidelity_slater(spec, n_f, dh)
        assert infidelity(spec, dh, n_f)[0] == pytest.approx(1 - f, rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 30), st.data())
def test_gauge_invariance(L, data):
    rng = np.random.default_rng(L)
    n_f = data.draw(st.integers(1, L // 2))
    A = np.linalg.qr(rng.standard_normal((L, n_f)))[0]
    B = np.linalg.qr(A + 0.05 * rng.standard_normal((L, n_f)))[0]
    flips = np.array(data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=n_f, max_size=n_f)))
    ref = subspace_infidelity(A, B)
    assert subspace_infidelity(A * flips, B) == pytest.approx(ref, rel=1e-10, abs=1e-16)
    assert subspace_infidelity(A, B * flips) == pytest.approx(ref, rel=1e-10, abs=1e-16)
    assert 1 - abs(np.linalg.det(A.T @ B)) == pytest.approx(ref, rel=1e-6)


def test_fidelity_gauge_invariance_direct():
    spec = LatticeSpec(21, V=2.0, h=1e-2, phi=0.3)
    a = slater_probe(spec, 10).orbitals
    b = slater_probe(spec.with_h(spec.h + 1e-3), 10).orbitals
    flips = np.where(np.arange(10) % 3 == 0, -1.0, 1.0)
    assert abs(np.linalg.det(a.T @ (b * flips))) == pytest.approx(abs(np.linalg.det(a.T @ b)), abs=1e-14)


@pytest.mark.parametrize("L", [34, 144])
def test_localized_qfi_below_plateau(L):
    spec = LatticeSpec(L, V=2.0, h=1e-9, phi=0.2)
    assert qfi(spec.with_h(1.0)).value < qfi(spec).value
    assert qfi(spec.with_h(1.0), L // 2).value < qfi(spec, L // 2).value
