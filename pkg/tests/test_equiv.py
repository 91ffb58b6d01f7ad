import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncfield.constants import C_LIGHT, G_NEWTON, HBAR_SI, M_ELECTRON, PARTICLE_MASSES, ParticleSpec, UniversalConstants
from ncfield.equiv import (
    EPCalibration,
    RegimeViolation,
    calibrate_from_conditions,
    check_condition_A,
    check_condition_gamma,
    derive_particle_params,
    electron_calibration,
    ep_violation_report,
    freefall_simulate,
    gravity_correction,
    meff_gravity,
)
from ncfield.spectra import NumericParams

SI = UniversalConstants.codata2018()
WU = UniversalConstants.working_units()
CATALOG5 = ("electron", "muon", "tau", "proton", "neutron")


def mp_planck():
    mpmath.mp.dps = 40
    h, c, G = (mpmath.mpf(repr(v)) for v in (HBAR_SI, C_LIGHT, G_NEWTON))
    return mpmath.sqrt(h * c / G), mpmath.sqrt(h * G / c ** 3), mpmath.sqrt(c ** 5 / (h * G))


def test_planck_units_against_mpmath():
    mp, lp, wp = mp_planck()
    assert SI.planck_mass == pytest.approx(float(mp), rel=1e-14)
    assert SI.planck_length == pytest.approx(float(lp), rel=1e-14)
    assert SI.planck_frequency == pytest.approx(float(wp), rel=1e-14)
    assert SI.planck_energy == pytest.approx(float(mpmath.mpf(repr(HBAR_SI)) * wp), rel=1e-14)


def test_constants_consistency_enforced():
    with pytest.raises(ValueError):
        UniversalConstants(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        ParticleSpec("x", -1.0)
    assert ParticleSpec.known("proton").mass == PARTICLE_MASSES["proton"]


def test_calibration_matches_high_precision():
    mp, _, _ = mp_planck()
    ratio = mpmath.mpf(repr(M_ELECTRON)) / mp
    cal = electron_calibration(SI)
    assert cal.gamma_tilde == pytest.approx(float(ratio), rel=1e-12)
    assert cal.A_tilde == pytest.approx(float(ratio ** 3), rel=1e-12)


def test_calibration_rounded_values():
    cal = electron_calibration()
    assert abs(cal.A_tilde / 7.3e-68 - 1) < 0.02
    assert abs(cal.gamma_tilde / 4.2e-23 - 1) < 0.02


def test_electron_gets_planck_anchors():
    cal = electron_calibration(SI)
    e = derive_particle_params(M_ELECTRON, cal, SI)
    assert e.l0 == pytest.approx(SI.planck_length, rel=1e-12)
    assert e.l_osc == pytest.approx(SI.planck_length, rel=1e-12)
    assert e.omega == pytest.approx(SI.planck_frequency, rel=1e-12)
    assert e.m_osc == pytest.approx(SI.planck_mass, rel=1e-12)


@given(st.floats(-35.0, -20.0))
def test_l_osc_closed_form(log_m):
    m = 10.0 ** log_m
    cal = electron_calibration(SI)
    pp = derive_particle_params(m, cal, SI)
    # l_osc = l_P sqrt(A m_P^2 / (gamma^2 m_osc m)), written in logs
    log_ref = SI.log10_planck_length + 0.5 * (cal.log10_A_tilde + 2 * SI.log10_planck_mass
                                              - 2 * cal.log10_gamma_tilde - pp.log10_m_osc - log_m)
    assert pp.log10_l_osc == pytest.approx(log_ref, abs=1e-12)


@given(st.floats(-35.0, -20.0))
def test_calibration_roundtrip(log_m):
    cal = electron_calibration(SI)
    pp = derive_particle_params(10.0 ** log_m, cal, SI)
    back = calibrate_from_conditions(pp, SI)
    assert back.log10_A_tilde == pytest.approx(cal.log10_A_tilde, abs=1e-11)
    assert back.log10_gamma_tilde == pytest.approx(cal.log10_gamma_tilde, abs=1e-11)


def test_conditions_hold_for_catalog():
    cal = electron_calibration(SI)
    pps = [derive_particle_params(PARTICLE_MASSES[n], cal, SI, name=n) for n in CATALOG5]
    assert check_condition_A(pps, 1e-12, SI).passed
    assert check_condition_gamma(pps, SI, 1e-12).passed
    dimless = check_condition_A(pps, constants=SI).dimensionless
    assert all(v == pytest.approx(cal.A_tilde, rel=1e-11) for v in dimless)


def test_conditions_fail_for_shared_params():
    rows = [(PARTICLE_MASSES[n], SI.planck_length, SI.planck_frequency, SI.planck_mass) for n in CATALOG5]
    assert not check_condition_A(rows, 1e-12).passed


def test_meff_gravity_values():
    assert meff_gravity(1.0, 1.0, NumericParams()) == pytest.approx(4 / 3, rel=1e-15)
    assert meff_gravity(2.0, 0.0, NumericParams()) == 2.0
    with pytest.raises(RegimeViolation):
        meff_gravity(2.0, 1.0, NumericParams())


def test_gravity_correction_underflow_uses_logs():
    p = NumericParams(hbar=HBAR_SI, mass=M_ELECTRON, field_factor=0.0, l0=SI.planck_length,
                      m_osc=SI.planck_mass, omega=SI.planck_frequency)
    c, lc = gravity_correction(M_ELECTRON, 9.8, p)
    assert 0 < c < 1e-150
    assert math.log10(c) == pytest.approx(lc, abs=1e-9)


@given(st.floats(0.1, 0.5), st.floats(0.05, 0.3))
def test_cube_law_shared(m0, g):
    masses = [m0, 2 * m0, 4 * m0]
    rep = ep_violation_report(masses, g, shared_params=NumericParams())
    scaled = [c / m ** 3 for c, m in zip(rep.correction, masses)]
    assert max(scaled) / min(scaled) - 1 < 1e-12
    assert rep.cube_slope == pytest.approx(3.0, abs=1e-9)
    assert not rep.recovered


def test_cube_law_masses_half_one_two():
    rep = ep_violation_report([0.5, 1.0, 2.0], 0.5, shared_params=NumericParams())
    assert abs(rep.cube_slope - 3) < 1e-9
    assert rep.eta > 0.1


def test_recovery_per_particle_working_units():
    # correction kept O(0.1) so the check is not trivially satisfied by tiny numbers
    cal = EPCalibration(math.log10(0.4), 0.0)
    pps = [derive_particle_params(m, cal, WU) for m in (0.3, 0.7, 1.0, 1.9, 3.1)]
    rep = ep_violation_report([p.mass for p in pps], 1.0, per_particle=pps, constants=WU)
    corr = rep.correction[0]
    assert corr == pytest.approx(0.1, rel=1e-12)
    assert rep.eta < 1e-12
    assert rep.recovered


def test_recovery_si_catalog():
    cal = electron_calibration(SI)
    pps = [derive_particle_params(PARTICLE_MASSES[n], cal, SI, name=n) for n in CATALOG5]
    rep = ep_violation_report([p.mass for p in pps], 9.80665, per_particle=pps, constants=SI)
    assert rep.eta < 1e-12 and rep.recovered
    assert rep.condition_A.passed and rep.condition_gamma.passed


def test_shared_si_not_recovered():
    shared = NumericParams(hbar=HBAR_SI, mass=M_ELECTRON, field_factor=0.0, l0=SI.planck_length,
                           m_osc=SI.planck_mass, omega=SI.planck_frequency)
    masses = [PARTICLE_MASSES[n] for n in CATALOG5]
    rep = ep_violation_report(masses, 9.80665, shared_params=shared, constants=SI)
    assert rep.cube_slope == pytest.approx(3.0, abs=1e-9)
    assert not rep.recovered


def test_report_argument_errors():
    with pytest.raises(ValueError):
        ep_violation_report([1.0], 1.0)
    with pytest.raises(ValueError):
        ep_violation_report([], 1.0, shared_params=NumericParams())


def test_trajectories_coincide_under_recovery():
    cal = EPCalibration(math.log10(0.4), 0.0)
    t = np.linspace(0, 2, 21)
    trs = []
    for m in (0.5, 3.0):
        pp = derive_particle_params(m, cal, WU)
        trs.append(freefall_simulate(m, pp.numeric(1.0), 1.0, (0, 0, 1), t, velocity=(1.0, -0.5, 0.2)))
    assert np.max(np.abs(trs[0].x - trs[1].x)) < 1e-12


def test_trajectories_split_with_shared_params():
    t = np.linspace(0, 2, 5)
    a = freefall_simulate(0.5, NumericParams(), 0.5, (0, 0, 0), t, velocity=(1, 0, 0))
    b = freefall_simulate(1.0, NumericParams(), 0.5, (0, 0, 0), t, velocity=(1, 0, 0))
    assert abs(a.x[-1, 0] - b.x[-1, 0]) > 1e-3
    assert np.array_equal(a.x[:, 2], b.x[:, 2])  # field direction is mass independent


def test_trajectory_closed_form():
    t = np.array([0.0, 1.0, 2.0])
    tr = freefall_simulate(1.0, NumericParams(), 1.0, (1, 2, 3), t, momentum=(0.4, 0.0, 1.0))
    assert tr.meff == pytest.approx(4 / 3)
    np.testing.assert_allclose(tr.x[:, 0], 1 + 0.4 * 0.75 * t, rtol=1e-15)
    np.testing.assert_allclose(tr.x[:, 2], 3 + t + 0.5 * t ** 2, rtol=1e-15)
    with pytest.raises(ValueError):
        freefall_simulate(1.0, NumericParams(), 1.0, (0, 0, 0), t)
