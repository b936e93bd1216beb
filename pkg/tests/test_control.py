"""Bessel machinery and the zero-area pulse condition."""

import math

import numpy as np
import pytest
import scipy.special

from nmq import control
from nmq.errors import (
    ConfigInvalid,
    DimMismatch,
    GapCollapse,
    NonIntegerN,
    OutOfValidatedRange,
)

# first zeros of J_0 and J_1 (Abramowitz & Stegun 9.5, scipy agrees)
J0_ZERO_1 = 2.404825557695773
J0_ZERO_2 = 5.520078110286311
J1_ZERO_1 = 3.831705970207512

TAU = math.pi / 30


def sine(intensity, a=1.0, b=0.0, tau=TAU, gap_rescaled=False):
    return control.ControlSpec(kind=control.PULSE_SINE, intensity=intensity,
                               a=a, b=b, half_period=tau,
                               gap_rescaled=gap_rescaled)


def test_bessel_matches_scipy_on_validated_box():
    xs = np.arange(0.0, 50.01, 0.5)
    worst = 0.0
    for n in range(0, 21):
        ref = scipy.special.jv(n, xs)
        got = np.array([control.bessel_j(n, float(x)) for x in xs])
        worst = max(worst, float(np.max(np.abs(got - ref))))
    assert worst < 1e-10


def test_bessel_series_and_recurrence_agree_at_cutoff():
    for n in (0, 3, 11, 20):
        assert abs(control._series_jn(n, 12.0) - control._miller_jn(n, 12.0)) < 1e-10


def test_bessel_recurrence():
    # J_{n-1}(x) + J_{n+1}(x) = (2n/x) J_n(x)
    for n in range(1, 20):
        for x in np.arange(0.5, 50.0, 0.5):
            lhs = control.bessel_j(n - 1, x) + control.bessel_j(n + 1, x)
            rhs = (2.0 * n / x) * control.bessel_j(n, x)
            assert abs(lhs - rhs) < 1e-9


def test_bessel_outside_validated_box():
    with pytest.raises(OutOfValidatedRange):
        control.bessel_j(21, 1.0)
    with pytest.raises(OutOfValidatedRange):
        control.bessel_j(0, 50.5)
    with pytest.raises(OutOfValidatedRange):
        control.bessel_j(0, -1.0)
    with pytest.raises(OutOfValidatedRange):
        control.bessel_j(-1, 1.0)


def test_bessel_zero_values():
    assert control.bessel_zero(0, 1) == pytest.approx(J0_ZERO_1, abs=1e-10)
    assert control.bessel_zero(0, 2) == pytest.approx(J0_ZERO_2, abs=1e-6)
    assert control.bessel_zero(1, 1) == pytest.approx(J1_ZERO_1, abs=1e-10)
    assert abs(control.bessel_j(0, control.bessel_zero(0, 1))) < 1e-10


def test_bessel_zero_interlacing():
    for n in range(0, 4):
        for k in range(1, 4):
            jnk = control.bessel_zero(n, k)
            assert jnk < control.bessel_zero(n + 1, k) < control.bessel_zero(n, k + 1)


def test_residual_without_drive_is_tau():
    cond = control.condition_residual(sine(0.0))
    assert abs(cond.residual) == pytest.approx(TAU, abs=1e-12)
    assert cond.n == 0 and cond.z == 0.0
    assert not cond.is_valid


def test_residual_tracks_bessel_magnitude():
    # |residual| = tau |J_0(z)| along a=1, b=0: the two violation measures
    # rise and fall together on z in [0, 6]
    w = math.pi / TAU
    for z in np.arange(0.0, 6.01, 0.1):
        cond = control.condition_residual(sine(z * w))
        assert abs(abs(cond.residual) - TAU * abs(control.bessel_j(0, z))) < 1e-10
        assert (abs(cond.residual) < 1e-6 * TAU) == (cond.jn_abs < 1e-6)


def test_residual_at_j0_of_one():
    w = math.pi / TAU
    cond = control.condition_residual(sine(1.0 * w))
    assert abs(cond.residual) / TAU == pytest.approx(0.7652, abs=1e-4)


def test_residual_vanishes_at_bessel_zero():
    w = math.pi / TAU
    cond = control.condition_residual(sine(J0_ZERO_1 * w))
    assert abs(cond.residual) < 1e-6 * TAU
    assert cond.is_valid


def test_non_integer_winding_rejected():
    with pytest.raises(NonIntegerN):
        control.condition_residual(sine(1.0, b=0.37))


def test_design_pulse_reproduces_quoted_intensity():
    ctrl = control.design_pulse(0, 1, math.pi / 30)
    # 4-significant-figure rounding of I / omega_ratio
    assert round(ctrl.intensity / 30, 3) == 2.405
    cond = control.condition_residual(ctrl)
    assert abs(cond.residual) < 1e-6 * ctrl.half_period
    assert cond.is_valid


def test_design_pulse_family_is_valid():
    for n in range(0, 4):
        for k in range(1, 4):
            ctrl = control.design_pulse(n, k, 0.25)
            cond = control.condition_residual(ctrl)
            assert cond.is_valid
            assert cond.n == n


def test_pulse_value_shape():
    ctrl = sine(2.0)
    assert control.pulse_value(ctrl, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert control.pulse_value(ctrl, TAU / 2) == pytest.approx(2.0)
    assert control.pulse_value(control.NO_CONTROL, 0.3) == 0.0


def test_pulse_value_gap_rescaling():
    ctrl = sine(2.0, gap_rescaled=True)
    assert control.pulse_value(ctrl, TAU / 2, gap=0.5) == pytest.approx(4.0)
    with pytest.raises(DimMismatch):
        control.pulse_value(ctrl, TAU / 2)
    with pytest.raises(GapCollapse):
        control.pulse_value(ctrl, TAU / 2, gap=1e-9)


def test_control_spec_validation():
    with pytest.raises(ConfigInvalid):
        control.ControlSpec(kind="square_pulse")
    with pytest.raises(ConfigInvalid):
        control.ControlSpec(kind=control.PULSE_SINE, half_period=0.0)
    with pytest.raises(ConfigInvalid):
        control.condition_residual(control.NO_CONTROL)
