"""CODATA 2018 constants and Planck-scale anchors, with base-10 logarithms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "C_LIGHT",
    "G_NEWTON",
    "HBAR_SI",
    "M_ELECTRON",
    "PARTICLE_MASSES",
    "ParticleSpec",
    "UniversalConstants",
]

# CODATA 2018, SI
HBAR_SI = 1.054571817e-34  # J s
C_LIGHT = 299792458.0  # m / s
G_NEWTON = 6.67430e-11  # m^3 / (kg s^2)
M_ELECTRON = 9.1093837015e-31  # kg

PARTICLE_MASSES = {
    "electron": M_ELECTRON,
    "muon": 1.883531627e-28,
    "tau": 3.16754e-27,
    "proton": 1.67262192369e-27,
    "neutron": 1.67492749804e-27,
    "deuteron": 3.3435837724e-27,
    "alpha": 6.6446573357e-27,
}


@dataclass(frozen=True)
class UniversalConstants:
    """Planck mass, length and frequency (hbar*omega_P = E_P) plus hbar.

    The four values must satisfy ``hbar = m_P l_P^2 omega_P``.
    """

    planck_mass: float
    planck_length: float
    planck_frequency: float
    hbar: float
    log10_planck_mass: float = field(init=False)
    log10_planck_length: float = field(init=False)
    log10_planck_frequency: float = field(init=False)
    log10_hbar: float = field(init=False)

    def __post_init__(self):
        for name in ("planck_mass", "planck_length", "planck_frequency", "hbar"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite")
            object.__setattr__(self, f"log10_{name}", math.log10(v))
        lhs = self.log10_hbar
        rhs = self.log10_planck_mass + 2 * self.log10_planck_length + self.log10_planck_frequency
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
            raise ValueError("Planck anchors are inconsistent with hbar = m_P l_P^2 omega_P")

    @classmethod
    def codata2018(cls) -> "UniversalConstants":
        m_p = math.sqrt(HBAR_SI * C_LIGHT / G_NEWTON)
        l_p = math.sqrt(HBAR_SI * G_NEWTON / C_LIGHT**3)
        w_p = math.sqrt(C_LIGHT**5 / (HBAR_SI * G_NEWTON))
        return cls(m_p, l_p, w_p, HBAR_SI)

    @classmethod
    def working_units(cls) -> "UniversalConstants":
        """Unit anchors hbar = m_P = l_P = omega_P = 1."""
        return cls(1.0, 1.0, 1.0, 1.0)

    @property
    def planck_energy(self) -> float:
        return self.hbar * self.planck_frequency


@dataclass(frozen=True)
class ParticleSpec:
    name: str
    mass: float
    log10_mass: float = field(init=False)

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"particle {self.name!r} needs a positive mass")
        object.__setattr__(self, "log10_mass", math.log10(self.mass))

    @classmethod
    def known(cls, name: str) -> "ParticleSpec":
        return cls(name, PARTICLE_MASSES[name])
