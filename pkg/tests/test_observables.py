import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aahsense.fisher import qfi
from aahsense.lab.sweep import phase_sample
from aahsense.model import LatticeSpec
from aahsense.observables import (
    DiagonalObservable, SharpObservableError, cdw_observable, expectation, observable, ofi,
    position_observable, variance,
)
from aahsense.oracle import fock_moments
from aahsense.probes import single_particle_probe, slater_probe

TWO = LatticeSpec(2, V=0.0, h=0.0)


def test_weights():
    np.testing.assert_array_equal(cdw_observable(4).weights, [1, -1, 1, -1])
    np.testing.assert_array_equal(position_observable(3).weights, [0, 1, 2])
    np.testing.assert_array_equal(position_observable(2).weights, [0, 1])
    with pytest.raises(ValueError):
        observable("spin", 4)


def test_expectations_two_site():
    p = single_particle_probe(TWO)
    assert expectation(p, cdw_observable(2)) == pytest.approx(0.0, abs=1e-15)
    assert expectation(p, position_observable(2)) == pytest.approx(0.5)
    assert expectation(slater_probe(TWO, 2), position_observable(2)) == pytest.approx(1.0)


def test_variances_two_site():
    assert variance(single_particle_probe(TWO), cdw_observable(2)) == pytest.approx(1.0)
    # Wick: 1/4 + 1/4 + 2 * (-1) * (-1/4) = 1
    assert variance(slater_probe(TWO, 1), cdw_observable(2)) == pytest.approx(1.0)
    assert variance(slater_probe(TWO, 2), cdw_observable(2)) == pytest.approx(0.0, abs=1e-15)


def test_length_mismatch():
    with pytest.raises(ValueError):
        expectation(single_particle_probe(TWO), cdw_observable(4))


def test_two_site_ofi_saturates_qfi():
    est = ofi(TWO, position_observable(2))
    assert est.slope == pytest.approx(-0.25, rel=1e-6)
    assert est.variance == pytest.approx(0.25)
    assert est.value == pytest.approx(0.25, abs=1e-6)
    assert est.value == pytest.approx(qfi(TWO).value, rel=1e-6)
    assert est.converged


def test_sharp_observable():
    number = DiagonalObservable(np.ones(8), "N")
    with pytest.raises(SharpObservableError, match="sharp"):
        ofi(LatticeSpec(8, V=2.0, h=0.1), number)
    with pytest.raises(SharpObservableError):
        ofi(LatticeSpec(8, V=2.0, h=0.1), cdw_observable(8), n_f=8)


def test_wick_vs_fock_four_sites():
    spec = LatticeSpec(4, V=2.0, h=1e-3)
    probe = slater_probe(spec, 2)
    for obs in (cdw_observable(4), position_observable(4)):
        mean, var = fock_moments(spec, 2, obs)
        assert variance(probe, obs) == pytest.approx(var, abs=1e-10)
        assert expectation(probe, obs) == pytest.approx(mean, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.data(), st.sampled_from([0.0, 2.0]), st.floats(1e-4, 1.0), st.floats(0, 0.999))
def test_wick_vs_fock(L, data, V, h, phi):
    n_f = data.draw(st.integers(1, min(L, 4)))
    spec = LatticeSpec(L, V, h, phi=phi)
    probe = slater_probe(spec, n_f)
    for obs in (cdw_observable(L), position_observable(L)):
        assert abs(variance(probe, obs) - fock_moments(spec, n_f, obs)[1]) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([5, 8, 13, 21, 34, 55]), st.sampled_from([0.0, 1.0, 2.0, 3.0]),
    st.sampled_from([1e-9, 1e-4, 1e-2, 1.0]), st.floats(0, 0.999), st.booleans(),
)
def test_cramer_rao(L, V, h, phi, half):
    spec = LatticeSpec(L, V, h, phi=phi)
    n_f = L // 2 if half else None
    est = qfi(spec, n_f)
    for label in ("cdw", "h2"):
        try:
            o = ofi(spec, observable(label, L), n_f, delta_h=est.delta_h)
        except SharpObservableError:
            continue
        assert o.value <= est.value * (1 + 1e-4)


@pytest.mark.parametrize("n_f", [None, 10])
@pytest.mark.parametrize("c", [-3.0, 50.0])
def test_position_origin_invariance(n_f, c):
    spec = LatticeSpec(21, V=2.0, h=1e-3, phi=0.2)
    a = ofi(spec, position_observable(21), n_f)
    b = ofi(spec, position_observable(21, offset=c), n_f, delta_h=a.delta_h)
    n = 1 if n_f is None else n_f
    assert b.mean - a.mean == pytest.approx(c * n, rel=1e-10)
    assert b.variance == pytest.approx(a.variance, rel=1e-10)
    assert b.slope == pytest.approx(a.slope, rel=1e-10)
    assert b.value == pytest.approx(a.value, rel=1e-10)


def test_localized_ofi_is_size_independent():
    def averaged(L):
        vals = []
        for k in range(200):
            spec = LatticeSpec(L, V=2.0, h=1.0, phi=phase_sample(99, k))
            vals.append(ofi(spec, position_observable(L)).value)
        return math.fsum(vals) / len(vals)

    a, b = averaged(144), averaged(233)
    assert abs(a - b) <= 0.1 * max(a, b)
