"""Tests for closed-form bound states, residuals and extended shape invariance."""

from __future__ import annotations

import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ptscatter.errors import DegenerateParamError, EmptySpectrum, ParameterWarning
from ptscatter.potentials import PotentialSpec, RMParams, ScarfParams
from ptscatter.spectra import (
    closed_form_states,
    residual,
    rm_deleted_level,
    rm_energies,
    rm_si_check,
    rm_superpotential,
    rm_superpotential_deriv,
    rm_wavefunction,
    scarf_energies,
    scarf_psym_energies,
    scarf_wavefunction,
)


class TestEnergies:
    @pytest.mark.parametrize("A, expected", [(2.0, [-4.0, -1.0]), (0.5, [-0.25]), (2.5, [-6.25, -2.25, -0.25])])
    def test_scarf(self, A, expected):
        assert_allclose(scarf_energies(ScarfParams(A, 1.0)), expected, rtol=0, atol=0)

    @pytest.mark.parametrize("B, expected", [(2.0, [-2.25, -0.25]), (0.5, []), (1.0, [-0.25])])
    def test_scarf_psym(self, B, expected):
        assert scarf_psym_energies(ScarfParams(1.0, B)) == expected

    def test_rm_conventional(self):
        assert_allclose(rm_energies(RMParams(2.0, 2.0)), [-3.0, 3.0], rtol=1e-15)
        assert_allclose(rm_energies(RMParams(2.0, 0.0)), [-4.0, -1.0], rtol=1e-15)

    def test_rm_extended(self):
        assert_allclose(rm_energies(RMParams(1.0, 1.0, 1), extended=True), [-3.75, 0.0], atol=1e-15)

    def test_isospectral_lists(self):
        assert scarf_energies(ScarfParams(2.5, 1.3, 2)) == scarf_energies(ScarfParams(2.5, 1.3, 0))
        assert rm_energies(RMParams(2.0, 1.0, 1), extended=True) == rm_energies(RMParams(3.0, 1.0))

    def test_deleted_level(self):
        assert rm_deleted_level(RMParams(2.0, 1.0, 1)) == 1
        assert rm_deleted_level(RMParams(2.0, 1.0, 0)) == 0


class TestResidual:
    def test_free_particle(self):
        k = 1.7
        assert residual(lambda x: 0.0 * x, lambda x: np.sin(k * x), k * k, (-5.0, 5.0, 1e-3)) < 1e-8

    def test_scarf_ground_state(self):
        s = scarf_wavefunction(ScarfParams(2.0, 1.0), "conventional", 0)
        assert residual(s.potential(), s, s.energy) < 1e-6

    def test_detects_wrong_energy(self):
        s = scarf_wavefunction(ScarfParams(2.0, 1.0), "conventional", 0)
        assert residual(s.potential(), s, s.energy + 0.1) > 1e-2


class TestScarfStates:
    def test_ground_state_form(self):
        p = ScarfParams(2.5, 1.3)
        s = scarf_wavefunction(p, "conventional", 0)
        x = np.linspace(-4, 4, 9)
        ref = np.cosh(x) ** -2.5 * np.exp(-1.3j * np.arctan(np.sinh(x)))
        assert_allclose(s(x), ref, rtol=1e-13)

    def test_m0_extended_equals_conventional(self):
        p = ScarfParams(2.5, 1.3, 0)
        x = np.linspace(-4, 4, 17)
        for n in range(3):
            a = scarf_wavefunction(p, "extended", n)(x)
            b = scarf_wavefunction(p, "conventional", n)(x)
            assert_allclose(a, b, rtol=1e-13)

    @pytest.mark.parametrize("variant", ["conventional", "extended", "psym-conventional", "psym-extended"])
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_residuals(self, variant, m):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            p = ScarfParams(2.5, 1.8, m)
        levels = scarf_psym_energies(p) if variant.startswith("psym") else scarf_energies(p)
        for n in range(len(levels)):
            s = scarf_wavefunction(p, variant, n)
            assert residual(s.potential(), s, s.energy) < 1e-6, (variant, m, n)

    def test_empty_partner_family(self):
        with pytest.raises(EmptySpectrum):
            scarf_wavefunction(ScarfParams(2.0, 0.5), "psym-extended", 0)

    def test_level_out_of_range(self):
        with pytest.raises(ValueError):
            scarf_wavefunction(ScarfParams(2.0, 1.0), "conventional", 2)

    def test_normalization(self):
        s = scarf_wavefunction(ScarfParams(2.0, 1.0), "conventional", 0).normalized()
        assert_allclose(s.l2_norm(), 1.0, rtol=1e-10)
        assert not s.near_threshold


class TestRMStates:
    def test_conventional_ground_state_form(self):
        p = RMParams(2.0, 1.0)
        s = rm_wavefunction(p, "conventional", 0)
        x = np.linspace(-3, 3, 7)
        z = np.tanh(x)
        a, b = 2.0 + 0.5j, 2.0 - 0.5j
        assert_allclose(s(x), (1 - z) ** (a / 2) * (1 + z) ** (b / 2), rtol=1e-12)

    @pytest.mark.parametrize("A, B", [(2.0, 1.0), (2.5, 1.3), (1.0, 1.0)])
    def test_conventional_residuals(self, A, B):
        p = RMParams(A, B)
        for n in range(len(rm_energies(p))):
            s = rm_wavefunction(p, "conventional", n)
            if s.decay >= 0.7:
                assert residual(s.potential(), s, s.energy) < 1e-6

    @pytest.mark.parametrize("variant", ["extended-closed-form", "extended-operator"])
    def test_extended_residual(self, variant):
        p = RMParams(2.0, 1.0, 1)
        for n in (0, 2):
            s = rm_wavefunction(p, variant, n)
            assert residual(s.potential(), s, s.energy) < 1e-6

    @pytest.mark.parametrize("n", [0, 2])
    def test_dual_path_proportional(self, n):
        p = RMParams(2.0, 1.0, 1)
        x = np.linspace(-6, 6, 121)
        a = rm_wavefunction(p, "extended-closed-form", n)(x)
        b = rm_wavefunction(p, "extended-operator", n)(x)
        ratio = a / b
        assert np.max(np.abs(ratio / ratio[60] - 1)) < 1e-9

    def test_deleted_level_raises(self):
        p = RMParams(2.0, 1.0, 1)
        with pytest.raises(DegenerateParamError):
            rm_wavefunction(p, "extended-closed-form", 1)
        with pytest.raises(DegenerateParamError):
            rm_wavefunction(p, "extended-operator", 1)

    def test_closed_form_states_report_deletion(self):
        states = closed_form_states(PotentialSpec("rm", 2.0, 1.0, 1))
        assert [n for n, _, s, _ in states if s is None] == [1]


class TestSuperpotential:
    def test_asymptote(self):
        p = RMParams(2.0, 1.0, 1)
        assert_allclose(rm_superpotential(p, 40.0), 1j / 3 + 3, rtol=1e-13)

    def test_log_derivative_of_ground_state(self):
        p = RMParams(2.0, 1.0, 1)
        s = rm_wavefunction(p, "extended-closed-form", 0)
        h, x = 1e-5, 0.3
        fd = -(np.log(s(x + h)) - np.log(s(x - h))) / (2 * h)
        assert_allclose(rm_superpotential(p, x), fd, rtol=1e-7)

    def test_derivative(self):
        p = RMParams(2.5, 1.3, 2)
        h, x = 1e-5, -0.7
        fd = (rm_superpotential(p, x + h) - rm_superpotential(p, x - h)) / (2 * h)
        assert_allclose(rm_superpotential_deriv(p, x), fd, rtol=1e-8)

    def test_shape_invariance(self):
        si = rm_si_check(RMParams(2.0, 1.0, 1))
        assert si.max_dev < 1e-8
        assert_allclose(si.const_minus, si.ground_energy, atol=1e-8)
        assert si.alternative_max_dev > 1e-3

    def test_shape_invariance_requires_extension(self):
        with pytest.raises(ValueError):
            rm_si_check(RMParams(2.0, 1.0, 0))


class TestDecay:
    @pytest.mark.parametrize("spec", [
        PotentialSpec("scarf", 2.5, 1.8, 1), PotentialSpec("scarf-psym", 2.5, 1.8, 1),
        PotentialSpec("rm", 2.0, 1.0, 0), PotentialSpec("rm", 2.5, 1.3, 1),
    ])
    def test_tails_vanish(self, spec):
        x = np.linspace(-5, 5, 1001)
        checked = 0
        for _, _, s, _ in closed_form_states(spec):
            if s is None or s.decay < 0.7:
                continue
            peak = np.max(np.abs(s(x)))
            assert np.max(np.abs(s(np.array([-25.0, 25.0])))) < 1e-6 * peak
            checked += 1
        assert checked > 0
