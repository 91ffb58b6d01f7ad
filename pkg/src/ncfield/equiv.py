"""Gravitational specialization and the equivalence-principle recovery conditions.

Planck-regime quantities (the calibration constants are ~1e-68) are handled as
base-10 logarithms and mass ratios.  ``g`` is the uniform free-fall
acceleration, the field factor being ``-m*g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .constants import M_ELECTRON, ParticleSpec, UniversalConstants
from .spectra import NumericParams

__all__ = [
    "ConditionReport",
    "EPCalibration",
    "EPReport",
    "ParticleParams",
    "RegimeViolation",
    "Trajectory",
    "calibrate_from_conditions",
    "check_condition_A",
    "check_condition_gamma",
    "derive_particle_params",
    "electron_calibration",
    "ep_violation_report",
    "freefall_simulate",
    "gravity_correction",
    "meff_gravity",
]

_LOG10_4 = math.log10(4.0)


class RegimeViolation(ValueError):
    """The mass correction reached 1, outside the closed form's physical regime."""


def _log10(v: float) -> float:
    return math.log10(abs(v))


def _spread_from_logs(logs: Sequence[float]) -> float:
    """``1 - min/max`` of positive values given by their logarithms."""
    if len(logs) < 2:
        return 0.0
    return max(0.0, -math.expm1(math.log(10.0) * (min(logs) - max(logs))))


def gravity_correction(m: float, g: float, params: NumericParams) -> tuple[float, float]:
    """``l0^2 g^2 m^3 / (4 hbar^2 omega^2 m_osc)`` and its log10 (``-inf`` if zero)."""
    if m <= 0:
        raise ValueError("mass must be positive")
    if params.l0 == 0 or g == 0:
        return 0.0, -math.inf
    log_c = (
        2 * _log10(params.l0) + 2 * _log10(g) + 3 * math.log10(m)
        - _LOG10_4 - 2 * math.log10(params.hbar) - 2 * math.log10(params.omega)
        - math.log10(params.m_osc)
    )
    with np.errstate(all="ignore"):
        direct = (params.l0 * g) ** 2 * m**3 / (4.0 * params.hbar**2 * params.omega**2 * params.m_osc)
    if math.isfinite(direct) and direct >= np.finfo(float).tiny:
        return direct, log_c
    return 10.0**log_c, log_c


def meff_gravity(m: float, g: float, params: NumericParams) -> float:
    """``m (1 - l0^2 g^2 m^3 / (4 hbar^2 omega^2 m_osc))^-1``."""
    corr, _ = gravity_correction(m, g, params)
    if corr >= 1.0:
        raise RegimeViolation(f"mass correction {corr:.6g} >= 1 for m={m}")
    return m / (1.0 - corr)


# -- conditions ----------------------------------------------------------

@dataclass
class ConditionReport:
    name: str
    values: list[float]
    log10_values: list[float]
    spread: float
    tolerance: float
    dimensionless: list[float] | None = None

    @property
    def passed(self) -> bool:
        return self.spread < self.tolerance

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "values": self.values,
            "log10_values": self.log10_values,
            "spread": self.spread,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.dimensionless is not None:
            d["dimensionless"] = self.dimensionless
        return d


def check_condition_A(particles, tolerance: float = 1e-12, constants: UniversalConstants | None = None) -> ConditionReport:
    """``A = l0^2 m^3 / (omega^2 m_osc)`` per particle and its relative spread.

    ``particles`` holds ``(mass, l0, omega, m_osc)`` tuples or ParticleParams.
    With ``constants`` given, the dimensionless ``A*omega_P^2/(l_P^2 m_P^2)``
    is reported too.
    """
    rows = [p.condition_A_args() if isinstance(p, ParticleParams) else p for p in particles]
    if not rows:
        raise ValueError("no particles")
    logs = [2 * _log10(l0) + 3 * math.log10(m) - 2 * math.log10(w) - math.log10(mo) for m, l0, w, mo in rows]
    dimless = None
    if constants is not None:
        shift = 2 * constants.log10_planck_frequency - 2 * constants.log10_planck_length - 2 * constants.log10_planck_mass
        dimless = [10.0 ** (v + shift) for v in logs]
    return ConditionReport("A", [10.0**v for v in logs], logs, _spread_from_logs(logs), tolerance, dimless)


def check_condition_gamma(particles, constants: UniversalConstants, tolerance: float = 1e-12) -> ConditionReport:
    """``gamma~ = (l0 l_osc / l_P^2)(m / m_P)`` per particle; rows ``(mass, l0, l_osc)``."""
    rows = [p.condition_gamma_args() if isinstance(p, ParticleParams) else p for p in particles]
    if not rows:
        raise ValueError("no particles")
    logs = [
        _log10(l0) + _log10(lo) - 2 * constants.log10_planck_length + math.log10(m) - constants.log10_planck_mass
        for m, l0, lo in rows
    ]
    vals = [10.0**v for v in logs]
    return ConditionReport("gamma_tilde", vals, logs, _spread_from_logs(logs), tolerance, vals)


# -- calibration ---------------------------------------------------------

@dataclass(frozen=True)
class EPCalibration:
    log10_A_tilde: float
    log10_gamma_tilde: float
    A_tilde: float = field(init=False)
    gamma_tilde: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "A_tilde", 10.0**self.log10_A_tilde)
        object.__setattr__(self, "gamma_tilde", 10.0**self.log10_gamma_tilde)
        if not (self.A_tilde > 0 and self.gamma_tilde > 0):
            raise ValueError("calibration constants must be positive")

    def to_dict(self) -> dict:
        return {
            "A_tilde": self.A_tilde,
            "gamma_tilde": self.gamma_tilde,
            "log10_A_tilde": self.log10_A_tilde,
            "log10_gamma_tilde": self.log10_gamma_tilde,
        }


def electron_calibration(constants: UniversalConstants | None = None, electron_mass: float = M_ELECTRON) -> EPCalibration:
    """Anchor l0 = l_osc = l_P and omega = omega_P on the electron.

    Then ``gamma~ = m_e/m_P`` and ``A~ = gamma~^3``.
    """
    constants = UniversalConstants.codata2018() if constants is None else constants
    log_ratio = math.log10(electron_mass) - constants.log10_planck_mass
    return EPCalibration(3 * log_ratio, log_ratio)


def calibrate_from_conditions(particle: "ParticleParams", constants: UniversalConstants) -> EPCalibration:
    """Read A~ and gamma~ off one particle's parameters through the two conditions."""
    a = check_condition_A([particle], constants=constants)
    gm = check_condition_gamma([particle], constants)
    shift = 2 * constants.log10_planck_frequency - 2 * constants.log10_planck_length - 2 * constants.log10_planck_mass
    return EPCalibration(a.log10_values[0] + shift, gm.log10_values[0])


@dataclass(frozen=True)
class ParticleParams:
    """Oscillator and noncommutativity parameters attached to one particle."""

    mass: float
    log10_omega: float
    log10_l_osc: float
    log10_l0: float
    log10_m_osc: float
    name: str = ""

    @property
    def omega(self) -> float:
        return 10.0**self.log10_omega

    @property
    def l_osc(self) -> float:
        return 10.0**self.log10_l_osc

    @property
    def l0(self) -> float:
        return 10.0**self.log10_l0

    @property
    def m_osc(self) -> float:
        return 10.0**self.log10_m_osc

    @classmethod
    def from_values(cls, mass, omega, l_osc, l0, m_osc, name="") -> "ParticleParams":
        return cls(mass, math.log10(omega), math.log10(l_osc), math.log10(l0), math.log10(m_osc), name)

    def condition_A_args(self):
        return (self.mass, self.l0, self.omega, self.m_osc)

    def condition_gamma_args(self):
        return (self.mass, self.l0, self.l_osc)

    def numeric(self, hbar: float, g: float = 0.0) -> NumericParams:
        return NumericParams(hbar=hbar, mass=self.mass, field_factor=-self.mass * g,
                             l0=self.l0, m_osc=self.m_osc, omega=self.omega)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mass": self.mass,
            "omega": self.omega,
            "l_osc": self.l_osc,
            "l0": self.l0,
            "m_osc": self.m_osc,
        }


def derive_particle_params(
    m_i: float,
    cal: EPCalibration,
    constants: UniversalConstants | None = None,
    m_osc: float | None = None,
    name: str = "",
) -> ParticleParams:
    """Parameters for a particle of mass ``m_i`` that satisfy both recovery conditions.

    ``omega = (gamma~^2/A~) omega_P m/m_P``, ``l_osc = sqrt(hbar/(m_osc omega))``,
    ``l0 = l_P sqrt(gamma~^4 m_osc / (A~ m))``.  The oscillator mass defaults
    to ``hbar/(omega_P l_P^2)``, which equals the Planck mass.
    """
    if not m_i > 0:
        raise ValueError("mass must be positive")
    c = UniversalConstants.codata2018() if constants is None else constants
    lm = math.log10(m_i)
    log_mosc = (c.log10_hbar - c.log10_planck_frequency - 2 * c.log10_planck_length
                if m_osc is None else math.log10(m_osc))
    log_w = 2 * cal.log10_gamma_tilde - cal.log10_A_tilde + c.log10_planck_frequency + lm - c.log10_planck_mass
    log_losc = 0.5 * (c.log10_hbar - log_mosc - log_w)
    log_l0 = c.log10_planck_length + 0.5 * (4 * cal.log10_gamma_tilde + log_mosc - cal.log10_A_tilde - lm)
    return ParticleParams(m_i, log_w, log_losc, log_l0, log_mosc, name)


# -- violation report ----------------------------------------------------

@dataclass
class EPReport:
    mode: str
    masses: list[float]
    meff_over_m: list[float]
    correction: list[float]  # 1 - m/m_eff
    log10_correction: list[float]
    eta: float
    cube_slope: float | None
    condition_A: ConditionReport | None
    condition_gamma: ConditionReport | None
    tolerance: float

    @property
    def recovered(self) -> bool:
        checks = [self.eta <= self.tolerance]
        for cond in (self.condition_A, self.condition_gamma):
            if cond is not None:
                checks.append(cond.passed)
        return all(checks)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "masses": self.masses,
            "meff_over_m": self.meff_over_m,
            "correction": self.correction,
            "log10_correction": self.log10_correction,
            "eta": self.eta,
            "cube_slope": self.cube_slope,
            "condition_A": None if self.condition_A is None else self.condition_A.to_dict(),
            "condition_gamma": None if self.condition_gamma is None else self.condition_gamma.to_dict(),
            "tolerance": self.tolerance,
            "recovered": self.recovered,
        }


def _eta(corrs: Sequence[float]) -> float:
    """Max pairwise ``|r_i/r_j - 1|`` for ``r = 1/(1 - c)``, free of cancellation."""
    worst = 0.0
    for ci, cj in combinations(corrs, 2):
        worst = max(worst, abs(ci - cj) / (1.0 - ci), abs(ci - cj) / (1.0 - cj))
    return worst


def ep_violation_report(
    masses: Sequence[float],
    g: float,
    shared_params: NumericParams | None = None,
    per_particle: Sequence[ParticleParams] | None = None,
    constants: UniversalConstants | None = None,
    tolerance: float = 1e-12,
) -> EPReport:
    """Mass dependence of ``m_eff/m`` under shared or per-particle parameters.

    In shared mode the log-log slope of ``1 - m/m_eff`` against ``m`` is fitted
    (3 for the closed form).
    """
    masses = [float(m) for m in masses]
    if not masses:
        raise ValueError("no masses")
    if (shared_params is None) == (per_particle is None):
        raise ValueError("give exactly one of shared_params or per_particle")
    if per_particle is not None:
        if len(per_particle) != len(masses):
            raise ValueError("per_particle must match masses")
        hbar = constants.hbar if constants is not None else 1.0
        plist = [pp.numeric(hbar) for pp in per_particle]
        mode = "per_particle"
    else:
        plist = [shared_params] * len(masses)
        mode = "shared"

    corrs, logs, ratios = [], [], []
    for m, p in zip(masses, plist):
        c, lc = gravity_correction(m, g, p)
        if c >= 1.0:
            raise RegimeViolation(f"mass correction {c:.6g} >= 1 for m={m}")
        corrs.append(c)
        logs.append(lc)
        ratios.append(1.0 / (1.0 - c))

    slope = None
    if mode == "shared" and len(set(masses)) >= 2 and all(math.isfinite(v) for v in logs):
        lm = np.log10(masses)
        slope = float(np.polyfit(lm, np.array(logs), 1)[0])

    cond_a = cond_g = None
    if mode == "per_particle":
        cond_a = check_condition_A(per_particle, tolerance, constants)
        if constants is not None:
            cond_g = check_condition_gamma(per_particle, constants, tolerance)
    else:
        rows = [(m, p.l0, p.omega, p.m_osc) for m, p in zip(masses, plist)]
        if shared_params.l0 != 0:
            cond_a = check_condition_A(rows, tolerance, constants)
            if constants is not None:
                l_osc = math.sqrt(shared_params.hbar / (shared_params.m_osc * shared_params.omega))
                cond_g = check_condition_gamma([(m, shared_params.l0, l_osc) for m in masses], constants, tolerance)

    return EPReport(mode, masses, ratios, corrs, logs, _eta(corrs), slope, cond_a, cond_g, tolerance)


# -- trajectories --------------------------------------------------------

@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray  # shape (len(t), 3)
    meff: float
    mass: float
    name: str = ""

    def rows(self) -> list[dict]:
        return [{"t": float(t), "x1": float(a), "x2": float(b), "x3": float(c)}
                for t, (a, b, c) in zip(self.t, self.x)]


def freefall_simulate(
    mass: float,
    params: NumericParams,
    g: float,
    position,
    t_grid,
    velocity=None,
    momentum=None,
    name: str = "",
) -> Trajectory:
    """Closed-form Heisenberg trajectories of the decomposed Hamiltonian.

    Transverse: ``x_i(t) = x_i(0) + p_i t / m_eff``.  Along the field:
    ``x_3(t) = x_3(0) + p_3 t / m + g t^2 / 2``.  An initial ``velocity`` means
    the ordinary-space momentum ``p = m v``.
    """
    if (velocity is None) == (momentum is None):
        raise ValueError("give exactly one of velocity or momentum")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be a one-dimensional ascending sequence")
    x0 = np.asarray(position, dtype=float).reshape(3)
    p0 = mass * np.asarray(velocity, dtype=float).reshape(3) if momentum is None \
        else np.asarray(momentum, dtype=float).reshape(3)
    corr, _ = gravity_correction(mass, g, params)
    if corr >= 1.0:
        raise RegimeViolation(f"mass correction {corr:.6g} >= 1 for m={mass}")
    meff = mass / (1.0 - corr)
    # p/m_eff = p (1 - c)/m keeps the rounding identical across particles with equal m_eff/m
    rate = p0[:2] * (1.0 - corr) / mass
    x = np.empty((t.size, 3))
    x[:, 0] = x0[0] + rate[0] * t
    x[:, 1] = x0[1] + rate[1] * t
    x[:, 2] = x0[2] + p0[2] / mass * t + 0.5 * g * t**2
    return Trajectory(t, x, meff, mass, name)
