"""Numerical confirmation of the symbolic results.

At fixed transverse wave numbers the plane-wave factor diagonalizes ``p_1,
p_2`` and leaves a finite problem in the three auxiliary oscillator modes,
which is solved in a truncated Fock basis.  The field-direction motion is
checked on the hard-wall linear potential, whose levels are set by Airy zeros.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import eigsh

from .airy import airy_zeros
from .hamtrans import derive

__all__ = [
    "BasisTooLarge",
    "DispersionFit",
    "FockBasisSpec",
    "GroundEnergy",
    "InvalidField",
    "NonConvergence",
    "NumericParams",
    "OffsetAdjudication",
    "SpectrumResult",
    "airy_levels",
    "dispersion_fit",
    "ground_energy",
    "oscillator_offset",
    "oscillator_sector_matrix",
    "spectrum",
    "symbolic_effective_mass",
]

DEFAULT_MAX_BYTES = 1 << 30


class BasisTooLarge(ValueError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, message, delta=None, n_max=None):
        super().__init__(message)
        self.delta = delta
        self.n_max = n_max


class InvalidField(ValueError):
    pass


@dataclass(frozen=True)
class NumericParams:
    """Floating-point values of the model symbols, in working units."""

    hbar: float = 1.0
    mass: float = 1.0
    field_factor: float = 1.0
    l0: float = 1.0
    m_osc: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name, v in asdict(self).items():
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        for name in ("hbar", "mass", "m_osc", "omega"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def symbol_values(self) -> dict[str, float]:
        """Values keyed by the symbolic parameter names."""
        return {
            "hbar": self.hbar,
            "m": self.mass,
            "kappa": self.field_factor,
            "l0": self.l0,
            "m_osc": self.m_osc,
            "omega": self.omega,
        }

    def replace(self, **changes) -> "NumericParams":
        return NumericParams(**{**asdict(self), **changes})


@dataclass(frozen=True)
class FockBasisSpec:
    n_max: int = 12

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def size(self) -> int:
        return self.levels**3


def symbolic_effective_mass(p: NumericParams) -> float:
    """The symbolic effective mass evaluated at ``p``."""
    value = derive().effective_mass.evaluate(p.symbol_values())
    return value.real


# -- matrices ------------------------------------------------------------

def _mode_ops(levels: int, p: NumericParams):
    """Position operator and oscillator energy of one mode in the number basis."""
    n = np.arange(levels)
    l_osc = math.sqrt(p.hbar / (p.m_osc * p.omega))
    off = np.sqrt(n[1:]) * (l_osc / math.sqrt(2.0))
    position = np.diag(off, 1) + np.diag(off, -1)
    energy = np.diag(p.hbar * p.omega * (n + 0.5))
    return position, energy


def _linear_coeffs(p: NumericParams, k1: float, k2: float) -> tuple[float, float]:
    # (f l0 / 2 hbar)(a1 hbar k2 - a2 hbar k1)
    c = p.field_factor * p.l0 / 2.0
    return c * k2, -c * k1


def _check_size(basis: FockBasisSpec, max_bytes: int) -> None:
    if 8 * basis.size**2 > max_bytes:
        raise BasisTooLarge(
            f"basis of size {basis.size} needs {8 * basis.size**2} bytes (cap {max_bytes})"
        )


def oscillator_sector_matrix(
    p: NumericParams,
    k1: float,
    k2: float,
    basis: FockBasisSpec,
    max_bytes: int = DEFAULT_MAX_BYTES,
) -> np.ndarray:
    """Dense Hamiltonian of the oscillator sector at wave numbers (k1, k2).

    Basis index is ``n1*L**2 + n2*L + n3`` with ``L = n_max + 1``.  The
    oscillator energy is taken diagonal, ``hbar*omega*(n + 1/2)`` per mode.
    """
    _check_size(basis, max_bytes)
    L = basis.levels
    pos, en = _mode_ops(L, p)
    eye = np.eye(L)
    c1, c2 = _linear_coeffs(p, k1, k2)
    kinetic = p.hbar**2 * (k1**2 + k2**2) / (2.0 * p.mass)
    one_mode = [en + c1 * pos, en + c2 * pos, en]
    H = kinetic * np.eye(basis.size)
    H += np.kron(np.kron(one_mode[0], eye), eye)
    H += np.kron(np.kron(eye, one_mode[1]), eye)
    H += np.kron(np.kron(eye, eye), one_mode[2])
    return H


def _sparse_matrix(p, k1, k2, basis):
    L = basis.levels
    pos, en = _mode_ops(L, p)
    c1, c2 = _linear_coeffs(p, k1, k2)
    eye = sparse.identity(L, format="csr")
    kinetic = p.hbar**2 * (k1**2 + k2**2) / (2.0 * p.mass)
    m1, m2, m3 = (sparse.csr_matrix(en + c * pos) for c in (c1, c2, 0.0))
    H = sparse.kron(sparse.kron(m1, eye), eye)
    H = H + sparse.kron(sparse.kron(eye, m2), eye) + sparse.kron(sparse.kron(eye, eye), m3)
    return (H + kinetic * sparse.identity(basis.size)).tocsc()


def _lowest(p, k1, k2, basis, method: str, max_bytes: int) -> float:
    if method == "dense":
        H = oscillator_sector_matrix(p, k1, k2, basis, max_bytes)
        return float(linalg.eigh(H, eigvals_only=True, subset_by_index=[0, 0])[0])
    if method == "sparse":
        H = _sparse_matrix(p, k1, k2, basis)
        v0 = np.zeros(basis.size)
        v0[0] = 1.0
        vals = eigsh(H, k=1, which="SA", v0=v0 + 1e-3, tol=1e-14, maxiter=20000)[0]
        return float(vals[0])
    raise ValueError(f"unknown method {method!r}")


# -- results -------------------------------------------------------------

@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    truncation_delta: float
    params_echo: dict = field(default_factory=dict)


def spectrum(p, k1, k2, basis: FockBasisSpec, max_bytes: int = DEFAULT_MAX_BYTES) -> SpectrumResult:
    """All eigenvalues of the oscillator sector (ascending) by dense diagonalization."""
    H = oscillator_sector_matrix(p, k1, k2, basis, max_bytes)
    vals = linalg.eigh(H, eigvals_only=True)
    lower = FockBasisSpec(max(basis.n_max - 2, 1)) if basis.n_max > 1 else basis
    e_low = _lowest(p, k1, k2, lower, "dense", max_bytes)
    echo = {**asdict(p), "k1": k1, "k2": k2, "n_max": basis.n_max}
    return SpectrumResult(vals, abs(vals[0] - e_low), echo)


@dataclass(frozen=True)
class GroundEnergy:
    energy: float
    truncation_delta: float
    n_max: int
    k1: float
    k2: float
    analytic: float
    analytic_half_quantum: float
    meff_symbolic: float

    @property
    def rel_err(self) -> float:
        return abs(self.energy - self.analytic) / abs(self.analytic)


def ground_energy(
    p: NumericParams,
    k1: float,
    k2: float,
    basis: FockBasisSpec,
    tol: float | None = None,
    n_max_cap: int | None = None,
    method: str = "dense",
    max_bytes: int = DEFAULT_MAX_BYTES,
) -> GroundEnergy:
    """Lowest eigenvalue with a truncation estimate.

    ``truncation_delta`` is the change of the ground energy from
    ``n_max - 2`` to ``n_max``.  With ``tol`` set, ``n_max`` is raised in steps
    of two up to ``n_max_cap`` (default: no growth) until the delta is below
    ``tol``; NonConvergence is raised otherwise.
    """
    n_max = basis.n_max
    cap = n_max if n_max_cap is None else max(n_max_cap, n_max)
    while True:
        e = _lowest(p, k1, k2, FockBasisSpec(n_max), method, max_bytes)
        lower = max(n_max - 2, 0)
        if lower >= 1:
            e_low = _lowest(p, k1, k2, FockBasisSpec(lower), method, max_bytes)
        else:
            # single-level basis: only the diagonal survives
            e_low = p.hbar**2 * (k1**2 + k2**2) / (2 * p.mass) + 1.5 * p.hbar * p.omega
        delta = abs(e - e_low)
        if tol is None or delta <= tol:
            break
        if n_max + 2 > cap:
            raise NonConvergence(
                f"truncation delta {delta:.3e} exceeds tolerance {tol:.3e} at n_max={n_max}",
                delta=delta,
                n_max=n_max,
            )
        n_max += 2
    meff = symbolic_effective_mass(p)
    transverse = p.hbar**2 * (k1**2 + k2**2) / (2.0 * meff)
    return GroundEnergy(
        energy=e,
        truncation_delta=delta,
        n_max=n_max,
        k1=k1,
        k2=k2,
        analytic=transverse + 1.5 * p.hbar * p.omega,
        analytic_half_quantum=transverse + 0.5 * p.hbar * p.omega,
        meff_symbolic=meff,
    )


@dataclass
class DispersionFit:
    points: list[GroundEnergy]
    e0: float
    inv_meff_fit: float
    meff_fit: float
    meff_symbolic: float
    fit_residual: float

    @property
    def rel_dev(self) -> float:
        return abs(self.meff_fit - self.meff_symbolic) / abs(self.meff_symbolic)

    def rows(self) -> list[dict]:
        return [
            {
                "k1": g.k1,
                "k2": g.k2,
                "ground_energy": g.energy,
                "analytic_energy": g.analytic,
                "rel_err": g.rel_err,
            }
            for g in self.points
        ]


def _as_wavevectors(k_grid, direction) -> list[tuple[float, float]]:
    out = []
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    for k in k_grid:
        if np.ndim(k) == 0:
            out.append((float(k * d[0]), float(k * d[1])))
        else:
            out.append((float(k[0]), float(k[1])))
    return out


def dispersion_fit(
    p: NumericParams,
    k_grid: Sequence,
    basis: FockBasisSpec,
    direction=(1.0, 0.0),
    tol: float | None = None,
    n_max_cap: int | None = None,
    method: str = "dense",
) -> DispersionFit:
    """Fit ``E(k) - E(0) = (1/m_eff) * hbar^2 k^2 / 2`` by least squares through the origin."""
    ks = _as_wavevectors(k_grid, direction)
    k2s = sorted({round(a * a + b * b, 15) for a, b in ks})
    if len([v for v in k2s if v > 0]) < 3:
        raise ValueError("need at least 3 distinct nonzero |k| values")
    meff = symbolic_effective_mass(p)
    if meff > 0 and p.hbar**2 * max(k2s) / (2 * meff) > p.hbar * p.omega / 10:
        raise ValueError("k grid leaves the small-k regime (hbar^2 k^2/2m_eff > hbar*omega/10)")
    g0 = ground_energy(p, 0.0, 0.0, basis, tol, n_max_cap, method)
    points = [ground_energy(p, a, b, basis, tol, n_max_cap, method) for a, b in ks]
    u = np.array([p.hbar**2 * (g.k1**2 + g.k2**2) / 2.0 for g in points])
    y = np.array([g.energy - g0.energy for g in points])
    slope = float(u @ y / (u @ u))
    residual = float(np.max(np.abs(y - slope * u)))
    return DispersionFit(points, g0.energy, slope, 1.0 / slope, meff, residual)


@dataclass(frozen=True)
class OffsetAdjudication:
    """Constant oscillator energy at k = 0, l0 = 0 against the two conventions."""

    measured: float
    three_mode: float
    half_quantum: float
    tolerance: float

    @property
    def matches_three_mode(self) -> bool:
        return abs(self.measured - self.three_mode) <= self.tolerance

    @property
    def matches_half_quantum(self) -> bool:
        return abs(self.measured - self.half_quantum) <= self.tolerance

    @property
    def half_quantum_discrepancy(self) -> bool:
        return not self.matches_half_quantum

    def to_dict(self) -> dict:
        return {
            "measured_offset": self.measured,
            "three_mode_offset": self.three_mode,
            "half_quantum_offset": self.half_quantum,
            "tolerance": self.tolerance,
            "matches_three_mode": self.matches_three_mode,
            "matches_half_quantum": self.matches_half_quantum,
            "half_quantum_discrepancy": self.half_quantum_discrepancy,
            "note": (
                "ground energy of the three-mode oscillator sector; an additive "
                "hbar*omega/2 holds for a single mode only"
            ),
        }


def oscillator_offset(p: NumericParams, basis: FockBasisSpec, tolerance: float = 1e-9) -> OffsetAdjudication:
    g = ground_energy(p.replace(l0=0.0), 0.0, 0.0, basis)
    hw = p.hbar * p.omega
    return OffsetAdjudication(g.energy, 1.5 * hw, 0.5 * hw, tolerance * hw)


def airy_levels(p: NumericParams, n_levels: int) -> np.ndarray:
    """Hard-wall linear-potential levels ``(hbar^2 f^2 / 2m)^(1/3) |a_n|``."""
    if p.field_factor == 0:
        raise InvalidField("a zero field has no bound levels")
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    scale = (p.hbar**2 * p.field_factor**2 / (2.0 * p.mass)) ** (1.0 / 3.0)
    return scale * np.abs(np.array(airy_zeros(n_levels)))
