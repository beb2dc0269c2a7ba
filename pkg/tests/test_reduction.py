"""Field traced out: mixture weights and the X-shaped atomic density."""

import math

import numpy as np
import pytest

from thermalqubits import (
    AtomicMixtureSpec,
    CouplingPair,
    ThermalFieldSpec,
    TwoQubitDensity,
    negativity,
    reduced_density,
)


def test_weights_partition_unity():
    rng = np.random.default_rng(19)
    for theta, vartheta in rng.uniform(0.0, math.tau, size=(40, 2)):
        w = AtomicMixtureSpec(float(theta), float(vartheta)).weights()
        assert set(w) == {"ee", "eg", "gg"}
        assert all(0.0 <= v <= 1.0 for v in w.values())
        assert math.fsum(w.values()) == pytest.approx(1.0, abs=1e-15)


def test_weight_dials_reach_each_pure_start():
    assert AtomicMixtureSpec(math.pi / 2.0, 0.0).weights()["ee"] == pytest.approx(1.0)
    assert AtomicMixtureSpec(0.0, 0.0).weights()["eg"] == 1.0
    assert AtomicMixtureSpec(math.pi / 2.0, math.pi / 2.0).weights()["gg"] == pytest.approx(1.0)


def test_components_round_trip():
    rho = TwoQubitDensity.from_components(0.1, 0.2, 0.3, 0.4, 0.05 + 0.02j)
    assert rho.B_ee == 0.1
    assert rho.B_egeg == 0.2
    assert rho.B_gege == 0.3
    assert rho.B_gg == 0.4
    assert rho.B_coh == 0.05 + 0.02j
    assert rho.matrix[2, 1] == 0.05 - 0.02j
    assert rho.trace == pytest.approx(1.0, abs=1e-15)


def test_zero_time_density_is_the_starting_mixture():
    spec = ThermalFieldSpec(1.0)
    mix = AtomicMixtureSpec(0.9, 0.4)
    rho = reduced_density(spec, mix, CouplingPair.from_gamma(0.3), 0.0)
    w = mix.weights()
    mass = spec.retained_mass()
    assert rho.B_ee == pytest.approx(w["ee"] * mass, abs=1e-12)
    assert rho.B_egeg == pytest.approx(w["eg"] * mass, abs=1e-12)
    assert rho.B_gg == pytest.approx(w["gg"] * mass, abs=1e-12)
    assert rho.B_gege == 0.0
    assert rho.B_coh == 0.0


def test_corners_vanish_identically():
    spec = ThermalFieldSpec(1.0, 1e-8)
    rho = reduced_density(
        spec, AtomicMixtureSpec(1.1, 0.6), CouplingPair.from_gamma(0.8), 7.7
    )
    m = rho.matrix
    x_mask = np.zeros((4, 4), dtype=bool)
    x_mask[np.arange(4), np.arange(4)] = True
    x_mask[1, 2] = x_mask[2, 1] = True
    assert np.all(m[~x_mask] == 0.0)
    assert m[2, 1] == np.conj(m[1, 2])


def test_trace_is_the_retained_photon_mass():
    for nbar, tol in ((0.0, 1e-10), (0.5, 1e-6), (1.0, 1e-10)):
        spec = ThermalFieldSpec(nbar, tol)
        rho = reduced_density(
            spec, AtomicMixtureSpec(0.7, 0.2), CouplingPair.from_gamma(0.4), 3.3
        )
        assert rho.trace == pytest.approx(spec.retained_mass(), abs=1e-12)


def test_equal_couplings_balance_the_middle_populations():
    # an ee or gg start cannot tell the atoms apart when the couplings match
    spec = ThermalFieldSpec(1.0, 1e-8)
    mix = AtomicMixtureSpec(math.pi / 2.0, 0.7)
    for t in (1.0, 4.2, 13.0):
        rho = reduced_density(spec, mix, CouplingPair.from_gamma(0.0), t)
        assert rho.B_egeg == pytest.approx(rho.B_gege, abs=1e-12)


def test_density_entries_stay_physical():
    spec = ThermalFieldSpec(1.0, 1e-8)
    pair = CouplingPair.from_gamma(0.6)
    rng = np.random.default_rng(31)
    for t in rng.uniform(0.0, 20.0, size=10):
        rho = reduced_density(spec, AtomicMixtureSpec(0.5, 0.5), pair, float(t))
        for value in (rho.B_ee, rho.B_egeg, rho.B_gege, rho.B_gg):
            assert -1e-12 <= value <= 1.0 + 1e-12
        assert abs(rho.B_coh) <= math.sqrt(rho.B_egeg * rho.B_gege) + 1e-12


def test_lone_excitation_in_vacuum_peaks_at_half_transfer():
    # one excited atom, empty cavity, equal couplings: a quarter Rabi
    # period in, the excitation is shared and the pair maximally entangled
    spec = ThermalFieldSpec(0.0)
    mix = AtomicMixtureSpec(0.0, 0.0)
    pair = CouplingPair.from_gamma(0.0)
    t = math.pi / (2.0 * math.sqrt(2.0))
    rho = reduced_density(spec, mix, pair, t)
    assert rho.B_egeg == pytest.approx(0.25, abs=1e-14)
    assert rho.B_gege == pytest.approx(0.25, abs=1e-14)
    assert rho.B_gg == pytest.approx(0.5, abs=1e-14)
    assert rho.B_coh.real == pytest.approx(-0.25, abs=1e-14)
    xi = negativity(rho).xi
    assert xi == pytest.approx((math.sqrt(2.0) - 1.0) / 2.0, abs=1e-12)


def test_closed_form_matches_the_diagonalized_reference():
    from thermalqubits.oracle import oracle_reduced_density

    spec = ThermalFieldSpec(0.5, 1e-8)
    mix = AtomicMixtureSpec(1.2, 0.4)
    pair = CouplingPair(1.6, 0.7)
    for t in (0.4, 2.9, 11.0):
        a = reduced_density(spec, mix, pair, t).matrix
        b = oracle_reduced_density(spec, mix, pair, t).matrix
        assert np.abs(a - b).max() < 1e-12
