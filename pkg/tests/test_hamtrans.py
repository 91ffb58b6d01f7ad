import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncfield.hamtrans import (
    DecompositionFailure,
    build_total_hamiltonian,
    complete_squares,
    derive,
    gravity_field_factor,
    reference_effective_mass,
    verify_commuting_split,
    verify_q_brackets,
)
from ncfield.opalg import RationalParamExpr, gen, param

HALF = Fraction(1, 2)
hbar, l0, m, mo, w, k, g = (param(s) for s in ("hbar", "l0", "m", "m_osc", "omega", "kappa", "g"))


def p_sq():
    return sum((gen(f"p{i}") ** 2 for i in (1, 2, 3)), 0 * gen("p1"))


def osc():
    H = 0 * gen("a1")
    for i in (1, 2, 3):
        H = H + HALF * param("m_osc", -1) * gen(f"pa{i}") ** 2 + HALF * mo * w * w * gen(f"a{i}") ** 2
    return H


def test_substituted_form_matches_written_hamiltonian():
    # p^2/2m + k x3 + (k l0/2 hbar)(a1 p2 - a2 p1) + oscillator
    expect = (HALF * param("m", -1) * p_sq() + k * gen("x3")
              + HALF * k * l0 * param("hbar", -1) * (gen("a1") * gen("p2") - gen("a2") * gen("p1")) + osc())
    assert derive().substituted == expect


def test_square_completed_form_matches_written_hamiltonian():
    red = 1 - k * k * l0 * l0 * m * Fraction(1, 4) * param("hbar", -2) * param("omega", -2) * param("m_osc", -1)
    c = HALF * k * l0 * param("hbar", -1) * param("omega", -2) * param("m_osc", -1)
    q1, q2 = gen("a1") + c * gen("p2"), gen("a2") - c * gen("p1")
    expect = (red * HALF * param("m", -1) * (gen("p1") ** 2 + gen("p2") ** 2) + HALF * param("m", -1) * gen("p3") ** 2
              + k * gen("x3") + sum((HALF * param("m_osc", -1) * gen(f"pa{i}") ** 2 for i in (1, 2, 3)), 0 * gen("p1"))
              + HALF * mo * w * w * (q1 * q1 + q2 * q2 + gen("a3") ** 2))
    d = derive()
    assert d.decomposed.reexpand() == expect
    assert d.decomposed.q_defs == (q1, q2, gen("a3"))


def test_effective_mass_symbolic():
    t = time.perf_counter()
    d = derive()
    assert d.exact
    assert d.effective_mass == reference_effective_mass()
    assert d.effective_mass == RationalParamExpr(m) / (1 - RationalParamExpr(
        k * k * l0 * l0 * m, 4 * hbar * hbar * w * w * mo))
    assert time.perf_counter() - t < 5


def test_p3_mass_untouched():
    d = derive()
    assert d.decomposed.kinetic_coeffs[2] == RationalParamExpr(HALF * param("m", -1))
    assert d.decomposed.field_term == k * gen("x3")


def test_gravity_specialization():
    dg = derive(gravity_field_factor())
    assert dg.exact
    assert dg.effective_mass == derive().effective_mass.subs({"kappa": -m * g})
    assert dg.effective_mass == RationalParamExpr(m) / (1 - RationalParamExpr(
        l0 * l0 * g * g * m ** 3, 4 * hbar * hbar * w * w * mo))


def test_zero_field_and_l0_zero_limits():
    assert derive(0).effective_mass == RationalParamExpr(m)
    d = derive()
    assert d.effective_mass.subs({"l0": 0}) == RationalParamExpr(m)
    assert d.substituted.subs_params({"l0": 0}) == HALF * param("m", -1) * p_sq() + k * gen("x3") + osc()


def test_q_and_split_reports():
    d = derive()
    assert verify_q_brackets(d.decomposed).passed
    assert len(verify_q_brackets(d.decomposed)) == 36
    assert verify_commuting_split(d.decomposed).passed


def test_numeric_value_all_ones():
    vals = dict.fromkeys(("hbar", "l0", "m", "m_osc", "omega", "kappa"), 1.0)
    assert derive().effective_mass.evaluate(vals) == pytest.approx(4 / 3, rel=1e-15)


pos = st.floats(0.2, 3.0)


@given(pos, pos, pos, pos, pos, st.floats(-1.0, 1.0))
def test_meff_matches_float_formula(hb, ll, mm, mosc, om, kap):
    vals = {"hbar": hb, "l0": ll, "m": mm, "m_osc": mosc, "omega": om, "kappa": kap}
    corr = kap ** 2 * ll ** 2 * mm / (4 * hb ** 2 * om ** 2 * mosc)
    if abs(1 - corr) < 1e-3:
        return
    got = derive().effective_mass.evaluate(vals)
    assert got.real == pytest.approx(mm / (1 - corr), rel=1e-10)
    assert abs(got.imag) < 1e-12


def test_decomposition_is_deterministic():
    assert derive().decomposed.to_text() == complete_squares(derive().substituted).to_text()


def test_rejects_non_oscillator_input():
    with pytest.raises(DecompositionFailure):
        complete_squares(gen("a1") * gen("a2") + gen("a1") ** 2 + gen("a2") ** 2)


def test_build_total_hamiltonian_placeholders():
    H = build_total_hamiltonian()
    assert H.coefficient([]).is_zero()
    assert H.coefficient((0, 0, 1) + (0,) * 9) == k
