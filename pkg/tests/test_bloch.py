"""Floquet analysis of the Hill operator below its spectrum."""

import math

import numpy as np
import pytest

from sgslab import bloch, oracle
from sgslab.errors import LambdaInSpectrum
from sgslab.media import FunctionDescriptor

V_CONST = FunctionDescriptor(const=1.0)
V_MATHIEU = FunctionDescriptor(const=1.0, cos=((1, 0.5),))


def test_monodromy_constant_closed_form():
    # [[cosh k, sinh k / k], [k sinh k, cosh k]] with k = sqrt(v0 - lambda)
    M = bloch.monodromy(V_CONST, -1.0)
    k = math.sqrt(2.0)
    assert M.trace == pytest.approx(2 * math.cosh(k), abs=1e-10)
    assert M.m12 == pytest.approx(math.sinh(k) / k, abs=1e-10)
    assert M.m21 == pytest.approx(k * math.sinh(k), abs=1e-10)
    assert M.det == pytest.approx(1.0, abs=1e-10)


def test_monodromy_band_edge_limit():
    M = bloch.monodromy(V_CONST, 1.0)
    assert M.m11 == pytest.approx(1.0, abs=1e-10)
    assert M.m12 == pytest.approx(1.0, abs=1e-10)
    assert M.m21 == pytest.approx(0.0, abs=1e-10)
    assert M.m22 == pytest.approx(1.0, abs=1e-10)


def test_monodromy_det_identity():
    M = bloch.monodromy(V_MATHIEU, -5.0)
    assert M.det == pytest.approx(1.0, abs=1e-10)


def test_spectrum_min_constant():
    assert bloch.spectrum_min(V_CONST) == pytest.approx(1.0, abs=1e-8)
    assert bloch.spectrum_min(FunctionDescriptor(const=0.0)) == pytest.approx(0.0, abs=1e-8)


def test_spectrum_min_mathieu():
    lam = bloch.spectrum_min(V_MATHIEU)
    assert 0.5 < lam < 1.5
    assert bloch.discriminant(V_MATHIEU, lam) == pytest.approx(2.0, abs=1e-8)


def test_bloch_modes_constant_reference():
    bd = bloch.bloch_modes(V_CONST, -1.0)
    ref = oracle.constant_bloch_reference(1.0, -1.0)
    assert bd.kappa == pytest.approx(ref.kappa, abs=1e-10)
    assert np.max(np.abs(bd.p_plus - 1.0)) <= 1e-8
    assert np.max(np.abs(bd.p_minus - 1.0)) <= 1e-8
    assert bd.omega == pytest.approx(ref.omega, abs=1e-8)
    assert bd.discriminant == pytest.approx(ref.discriminant, abs=1e-8)
    assert bd.multiplier_plus * bd.multiplier_minus == pytest.approx(1.0, abs=1e-10)


def test_bloch_modes_band_edge_kappa_small():
    bd = bloch.bloch_modes(V_CONST, 0.999, check_spectrum=False)
    assert bd.kappa == pytest.approx(math.sqrt(0.001), rel=1e-4)


def test_lambda_in_spectrum_rejected():
    with pytest.raises(LambdaInSpectrum):
        bloch.bloch_modes(V_CONST, 1.5)


def test_kappa_bounds():
    # decay exponent bounded by sqrt(-sup|V| - lambda) and sqrt(sup|V| - lambda)
    sup = V_MATHIEU.sup_norm()
    for lam in (-5.0, -10.0, -100.0):
        bd = bloch.bloch_modes(V_MATHIEU, lam, check_spectrum=False)
        assert math.sqrt(-sup - lam) <= bd.kappa <= math.sqrt(sup - lam)


def test_wronskian_constant_along_period():
    bd = bloch.bloch_modes(V_MATHIEU, -5.0)
    samples = bd.wronskian_samples()
    idx = np.linspace(0, len(samples) - 1, 11).astype(int)
    spread = np.ptp(samples[idx]) / abs(bd.omega)
    assert spread <= 1e-8


def test_discriminant_monotone_below_bottom():
    lams = np.linspace(-10.0, 0.9, 12)
    ds = [bloch.discriminant(V_MATHIEU, lam) for lam in lams]
    assert all(a > b + 1e-8 for a, b in zip(ds, ds[1:]))


def test_step_halving_converged():
    k1 = bloch.bloch_modes(V_MATHIEU, -5.0, steps=4096, check_spectrum=False).kappa
    k2 = bloch.bloch_modes(V_MATHIEU, -5.0, steps=8192, check_spectrum=False).kappa
    assert abs(k1 - k2) <= 1e-9


def test_positive_periodic_parts():
    bd = bloch.bloch_modes(V_MATHIEU, -2.0, check_spectrum=False)
    assert bd.p_plus.min() > 0
    assert bd.p_minus.min() > 0
    assert bd.p_plus.max() == pytest.approx(1.0, abs=1e-10)
    assert bd.p_minus.max() == pytest.approx(1.0, abs=1e-10)


def test_asymptotic_diagnostics_free_operator():
    kg, sg, pd = bloch.asymptotic_diagnostics(FunctionDescriptor(const=0.0), -4.0)
    assert abs(kg) <= 1e-10
    assert abs(sg) <= 1e-9
    assert pd <= 1e-9


def test_asymptotic_diagnostics_constant_exact():
    kg, sg, _ = bloch.asymptotic_diagnostics(V_CONST, -1e4)
    assert kg == pytest.approx(math.sqrt(10001.0) - 100.0, abs=1e-9)
    assert sg == pytest.approx(100.0 * (math.sqrt(10001.0) - 100.0) - 0.5, abs=1e-7)


def test_p_representation_constant():
    bd = bloch.bloch_modes(V_CONST, -1.0, samples=4097)
    assert bloch.verify_p_representation(bd, V_CONST) <= 1e-8


def test_p_representation_mathieu():
    bd = bloch.bloch_modes(V_MATHIEU, -100.0, samples=2049)
    assert bloch.verify_p_representation(bd, V_MATHIEU) <= 1e-6


def test_p_representation_detects_corruption():
    # the representation map is linear in p_minus, so a uniform rescaling is a
    # fixed point as well and cannot be detected; corrupt the shape instead
    bd = bloch.bloch_modes(V_MATHIEU, -100.0, samples=2049)
    bump = 1.0 + 0.1 * np.cos(2.0 * np.pi * bd.x)
    corrupted = bloch.BlochData(
        lam=bd.lam,
        kappa=bd.kappa,
        discriminant=bd.discriminant,
        omega=bd.omega,
        p_plus=bd.p_plus,
        p_minus=bd.p_minus * bump,
        dp_plus=bd.dp_plus,
        dp_minus=bd.dp_minus * bump,
        x=bd.x,
    )
    assert bloch.verify_p_representation(corrupted, V_MATHIEU) >= 0.05
