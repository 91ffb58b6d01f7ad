import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg

from ncfield.spectra import (
    BasisTooLarge,
    FockBasisSpec,
    InvalidField,
    NonConvergence,
    NumericParams,
    airy_levels,
    dispersion_fit,
    ground_energy,
    oscillator_offset,
    oscillator_sector_matrix,
    symbolic_effective_mass,
)

ONES = NumericParams()


def displaced_oracle(p: NumericParams, k1: float, k2: float) -> float:
    """Closed form: each linear term c*a lowers a mode by c^2 / (2 m_osc omega^2)."""
    c = p.field_factor * p.l0 / 2
    shift = ((c * k2) ** 2 + (c * k1) ** 2) / (2 * p.m_osc * p.omega ** 2)
    return p.hbar ** 2 * (k1 ** 2 + k2 ** 2) / (2 * p.mass) + 1.5 * p.hbar * p.omega - shift


def separable_oracle(p, k1, k2, levels):
    """Sum of single-mode ground energies from 1D truncated matrices."""
    n = np.arange(levels)
    lo = math.sqrt(p.hbar / (p.m_osc * p.omega))
    x = np.diag(np.sqrt(n[1:]) * lo / math.sqrt(2), 1)
    x = x + x.T
    e = np.diag(p.hbar * p.omega * (n + 0.5))
    c = p.field_factor * p.l0 / 2
    total = p.hbar ** 2 * (k1 ** 2 + k2 ** 2) / (2 * p.mass)
    for coef in (c * k2, -c * k1, 0.0):
        total += np.linalg.eigvalsh(e + coef * x)[0]
    return total


def test_oracle_values():
    assert displaced_oracle(ONES, 1, 0) == 1.875
    assert separable_oracle(ONES, 1, 0, 13) == pytest.approx(1.875, abs=1e-12)


def test_ground_energy_at_unit_k():
    g = ground_energy(ONES, 1.0, 0.0, FockBasisSpec(12))
    assert g.energy == pytest.approx(1.875, abs=1e-6)
    assert g.analytic == pytest.approx(0.5 * 0.75 + 1.5)


def test_matrix_hermitian():
    H = oscillator_sector_matrix(ONES, 0.7, -0.3, FockBasisSpec(6))
    assert np.max(np.abs(H - H.conj().T)) < 1e-13


@settings(max_examples=15)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0.3, 2.0), st.floats(0.0, 1.5))
def test_full_matches_separable(k1, k2, om, l0):
    p = ONES.replace(omega=om, l0=l0)
    basis = FockBasisSpec(5)
    H = oscillator_sector_matrix(p, k1, k2, basis)
    e = linalg.eigh(H, eigvals_only=True, subset_by_index=[0, 0])[0]
    assert e == pytest.approx(separable_oracle(p, k1, k2, basis.levels), abs=1e-10)


@settings(max_examples=10)
@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
def test_converges_to_closed_form(k1, k2):
    g = ground_energy(ONES, k1, k2, FockBasisSpec(8))
    assert g.energy == pytest.approx(displaced_oracle(ONES, k1, k2), abs=1e-10)


def test_meff_dispersion_small_k():
    # ground energy transverse curvature equals 1/m_eff
    p = ONES
    for k in (0.1, 0.3):
        g = ground_energy(p, k, 0.0, FockBasisSpec(8))
        assert (g.energy - 1.5) / (k * k / 2) == pytest.approx(1 / symbolic_effective_mass(p), rel=1e-9)


def test_dense_vs_sparse():
    basis = FockBasisSpec(8)
    for k1, k2 in ((1.0, 0.0), (0.3, 0.8)):
        d = ground_energy(ONES, k1, k2, basis, method="dense").energy
        s = ground_energy(ONES, k1, k2, basis, method="sparse").energy
        assert abs(d - s) < 1e-9


def test_truncation_convergence_invariant():
    e12 = ground_energy(ONES, 1.0, 0.0, FockBasisSpec(12), method="sparse").energy
    e16 = ground_energy(ONES, 1.0, 0.0, FockBasisSpec(16), method="sparse").energy
    assert abs(e12 - e16) < 1e-6


def test_variational_from_above():
    es = [ground_energy(ONES, 2.0, 0.0, FockBasisSpec(n)).energy for n in (2, 4, 6, 8)]
    assert all(a >= b - 1e-13 for a, b in zip(es, es[1:]))
    assert es[-1] >= displaced_oracle(ONES, 2.0, 0.0) - 1e-12


def test_rotation_invariance():
    a = ground_energy(ONES, 0.6, 0.8, FockBasisSpec(8)).energy
    b = ground_energy(ONES, 1.0, 0.0, FockBasisSpec(8)).energy
    assert a == pytest.approx(b, abs=1e-12)


def test_l0_zero_is_free_mass():
    p = ONES.replace(l0=0.0)
    assert symbolic_effective_mass(p) == 1.0
    g = ground_energy(p, 0.5, 0.0, FockBasisSpec(2))
    assert g.energy == pytest.approx(0.125 + 1.5, abs=1e-14)


def test_dispersion_fit_recovers_meff():
    fit = dispersion_fit(ONES, (0.1, 0.2, 0.3, 0.4), FockBasisSpec(10))
    assert fit.meff_symbolic == pytest.approx(4 / 3, rel=1e-15)
    assert fit.rel_dev < 1e-6
    assert fit.fit_residual < 1e-10
    assert [r["k1"] for r in fit.rows()] == [0.1, 0.2, 0.3, 0.4]


def test_dispersion_fit_rejects_bad_grids():
    with pytest.raises(ValueError):
        dispersion_fit(ONES, (0.1, 0.2), FockBasisSpec(4))
    with pytest.raises(ValueError):
        dispersion_fit(ONES, (0.5, 1.0, 2.0), FockBasisSpec(4))


def test_basis_too_large():
    with pytest.raises(BasisTooLarge):
        oscillator_sector_matrix(ONES, 0, 0, FockBasisSpec(20), max_bytes=1 << 20)


def test_non_convergence():
    with pytest.raises(NonConvergence) as info:
        ground_energy(ONES.replace(field_factor=3.0), 2.0, 0.0, FockBasisSpec(2), tol=1e-14, n_max_cap=2)
    assert info.value.delta > 1e-14 and info.value.n_max == 2


def test_growth_reaches_tolerance():
    g = ground_energy(ONES, 1.0, 0.0, FockBasisSpec(4), tol=1e-10, n_max_cap=14)
    assert g.truncation_delta <= 1e-10 and g.n_max > 4


def test_oscillator_offset():
    off = oscillator_offset(ONES, FockBasisSpec(4))
    assert off.measured == pytest.approx(1.5, abs=1e-9)
    assert off.matches_three_mode and not off.matches_half_quantum
    assert off.to_dict()["half_quantum_discrepancy"] is True


def test_params_validation():
    with pytest.raises(ValueError):
        NumericParams(mass=0.0)
    with pytest.raises(ValueError):
        NumericParams(omega=float("nan"))
    with pytest.raises(ValueError):
        FockBasisSpec(0)


def test_airy_levels_scale():
    lv = airy_levels(ONES, 3)
    assert lv[0] == pytest.approx(2 ** (-1 / 3) * 2.338107410459767, rel=1e-12)
    with pytest.raises(InvalidField):
        airy_levels(ONES.replace(field_factor=0.0), 2)
