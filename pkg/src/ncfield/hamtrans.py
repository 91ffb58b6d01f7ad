"""Uniform-field Hamiltonian: substitution, square completion and the effective mass.

The abstract Hamiltonian is written over the placeholder slots ``x_i, p_i``
standing for the noncommutative ``X_i, P_i``.  That is unambiguous here
because each of its words is a power of a single generator; substituting the
representation then gives the canonical-variable form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ncspace import NCRep, build_ncrep, levi_civita
from .opalg import (
    I,
    Generator,
    OperatorExpr,
    ParamExpr,
    RationalParamExpr,
    collect_quadratic,
    commutator,
    gen,
    param,
    substitute,
)
from .report import VerificationReport

__all__ = [
    "DecomposedHamiltonian",
    "DecompositionFailure",
    "Derivation",
    "build_total_hamiltonian",
    "complete_squares",
    "derive",
    "extract_effective_mass",
    "gravity_field_factor",
    "reference_effective_mass",
    "to_canonical_vars",
    "verify_commuting_split",
    "verify_q_brackets",
]

HALF = Fraction(1, 2)
_A = tuple(Generator("a", i) for i in (1, 2, 3))
_X3 = (0, 0, 1) + (0,) * 9


class DecompositionFailure(RuntimeError):
    """Square completion could not reproduce the input Hamiltonian."""


def gravity_field_factor() -> ParamExpr:
    """Field factor ``-m*g`` of a uniform gravitational field along the third axis."""
    return -param("m") * param("g")


def build_total_hamiltonian(field_factor=None) -> OperatorExpr:
    """``P^2/2m + f*X_3 + (pa)^2/2m_osc + m_osc*omega^2*a^2/2`` on placeholder slots."""
    f = param("kappa") if field_factor is None else ParamExpr.coerce(field_factor)
    inv2m = HALF * param("m", -1)
    inv2mosc = HALF * param("m_osc", -1)
    spring = HALF * param("m_osc") * param("omega", 2)
    H = f * gen("x3")
    for i in (1, 2, 3):
        H = H + inv2m * gen(f"p{i}") ** 2
        H = H + inv2mosc * gen(f"pa{i}") ** 2 + spring * gen(f"a{i}") ** 2
    return H


def to_canonical_vars(H: OperatorExpr, rep: NCRep | None = None) -> OperatorExpr:
    rep = build_ncrep() if rep is None else rep
    return substitute(H, rep.substitution_map())


@dataclass(frozen=True)
class DecomposedHamiltonian:
    kinetic_coeffs: tuple[RationalParamExpr, RationalParamExpr, RationalParamExpr]
    field_term: OperatorExpr
    osc_part: OperatorExpr
    q_defs: tuple[OperatorExpr, OperatorExpr, OperatorExpr]
    field_factor: ParamExpr
    spring: tuple[ParamExpr, ParamExpr, ParamExpr]

    def kinetic_term(self, i: int) -> OperatorExpr:
        return self.kinetic_coeffs[i - 1].as_param_expr() * gen(f"p{i}") ** 2

    def parts(self) -> dict[str, OperatorExpr]:
        """The four mutually commuting pieces H1, H2, H3 and Hosc."""
        return {
            "H1": self.kinetic_term(1),
            "H2": self.kinetic_term(2),
            "H3": self.kinetic_term(3) + self.field_term,
            "Hosc": self.osc_part,
        }

    def reexpand(self) -> OperatorExpr:
        return sum(self.parts().values(), OperatorExpr())

    def osc_in_q(self) -> str:
        """Oscillator part written against the shifted coordinates, for display."""
        terms = []
        for i, k in enumerate(self.spring, start=1):
            terms.append(f"({k.to_text()})*q{i}^2")
        pa2 = self.osc_part.coefficient([Generator("pa", 1)] * 2)
        terms.append(f"({pa2.to_text()})*(pa1^2 + pa2^2 + pa3^2)")
        return " + ".join(terms)

    def to_text(self) -> str:
        lines = [f"kinetic[{i}] = {c.to_text()}" for i, c in enumerate(self.kinetic_coeffs, 1)]
        lines.append(f"field_term = {self.field_term.to_text()}")
        lines += [f"q{i} = {q.to_text()}" for i, q in enumerate(self.q_defs, 1)]
        lines.append(f"osc_part[q] = {self.osc_in_q()}")
        lines.append(f"osc_part = {self.osc_part.to_text()}")
        return "\n".join(lines) + "\n"


def _has_pa(word) -> bool:
    return any(word[9:12])


def complete_squares(H: OperatorExpr) -> DecomposedHamiltonian:
    """Complete the squares in ``a_1, a_2, a_3`` and split H into commuting parts."""
    form = collect_quadratic(H, _A)
    spring = []
    for i in range(3):
        for j in range(3):
            if i != j and not form.Q[i][j].is_zero():
                raise DecompositionFailure("oscillator quadratic form is not diagonal")
        qii = form.Q[i][i]
        if not qii.is_scalar() or not qii.scalar_part().is_monomial():
            raise DecompositionFailure(f"a{i + 1}^2 coefficient is not an invertible scalar")
        spring.append(qii.scalar_part())

    shifts = [form.L[i] * (HALF * spring[i].inverse()) for i in range(3)]
    q_defs = tuple(gen(f"a{i + 1}") + shifts[i] for i in range(3))
    pa_part = OperatorExpr({w: c for w, c in form.C.terms.items() if _has_pa(w)})
    osc_part = pa_part + sum((spring[i] * q_defs[i] * q_defs[i] for i in range(3)), OperatorExpr())

    rest = form.C - pa_part - sum((spring[i] * shifts[i] * shifts[i] for i in range(3)), OperatorExpr())
    kin = []
    for i in (1, 2, 3):
        c = rest.coefficient([Generator("p", i)] * 2)
        kin.append(RationalParamExpr(c))
        rest = rest - c * gen(f"p{i}") ** 2

    D = DecomposedHamiltonian(
        kinetic_coeffs=tuple(kin),
        field_term=rest,
        osc_part=osc_part,
        q_defs=q_defs,
        field_factor=H.coefficient(_X3),
        spring=tuple(spring),
    )
    residual = D.reexpand() - H
    if not residual.is_zero():
        raise DecompositionFailure(f"re-expansion residual {residual.to_text()}")
    return D


def extract_effective_mass(D: DecomposedHamiltonian) -> RationalParamExpr:
    """``1 / (2 * coefficient of p_1^2)``."""
    return (D.kinetic_coeffs[0] * 2).reciprocal()


def reference_effective_mass(field_factor=None) -> RationalParamExpr:
    """Closed form ``m (1 - f^2 l0^2 m / (4 hbar^2 omega^2 m_osc))^-1``, built independently."""
    f = param("kappa") if field_factor is None else ParamExpr.coerce(field_factor)
    m = param("m")
    corr = f * f * param("l0", 2) * m * Fraction(1, 4) * param("hbar", -2) * param("omega", -2) * param("m_osc", -1)
    return RationalParamExpr(m) / RationalParamExpr(1 - corr)


def verify_q_brackets(D: DecomposedHamiltonian) -> VerificationReport:
    report = VerificationReport("shifted oscillator coordinates")
    ihbar = I * param("hbar")
    # -i eps_ij3 f l0 / (2 m_osc omega^2)
    cross = -I * D.field_factor * param("l0") * HALF * param("m_osc", -1) * param("omega", -2)
    q = D.q_defs
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            delta = ihbar if i == j else 0
            report.add(f"[q{i},q{j}] = 0", commutator(q[i - 1], q[j - 1]), 0)
            report.add(f"[q{i},pa{j}] = i*hbar*delta", commutator(q[i - 1], gen(f"pa{j}")),
                       OperatorExpr.scalar(delta))
            report.add(f"[q{i},p{j}] = 0", commutator(q[i - 1], gen(f"p{j}")), 0)
            report.add(f"[q{i},x{j}] = -i*eps_{i}{j}3*f*l0/(2*m_osc*omega^2)",
                       commutator(q[i - 1], gen(f"x{j}")),
                       OperatorExpr.scalar(levi_civita(i, j, 3) * cross))
    return report


def verify_commuting_split(D: DecomposedHamiltonian) -> VerificationReport:
    report = VerificationReport("commuting split")
    parts = list(D.parts().items())
    for n, (na, A) in enumerate(parts):
        for nb, B in parts[n + 1:]:
            report.add(f"[{na},{nb}] = 0", commutator(A, B), 0)
    return report


@dataclass(frozen=True)
class Derivation:
    abstract: OperatorExpr
    substituted: OperatorExpr
    decomposed: DecomposedHamiltonian
    effective_mass: RationalParamExpr

    @property
    def exact(self) -> bool:
        return (self.decomposed.reexpand() - self.substituted).is_zero()


@lru_cache(maxsize=32)
def _derive(field_factor: ParamExpr, shift: Fraction) -> Derivation:
    H = build_total_hamiltonian(field_factor)
    Hc = to_canonical_vars(H, build_ncrep(shift))
    D = complete_squares(Hc)
    return Derivation(H, Hc, D, extract_effective_mass(D))


def derive(field_factor=None, shift: Fraction = HALF) -> Derivation:
    """Run build -> substitute -> complete squares -> effective mass (cached)."""
    f = param("kappa") if field_factor is None else ParamExpr.coerce(field_factor)
    return _derive(f, Fraction(shift))
