"""Noncommutative coordinates built from canonical variables and their bracket checks.

The coordinate tensor is ``theta_ij = (l0/hbar) eps_ijk a_k`` and the
coordinates are ``X_i = x_i - (1/2) theta_ij p_j``, ``P_i = p_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .opalg import I, Generator, OperatorExpr, ParamExpr, commutator, gen, param
from .report import VerificationReport

__all__ = ["NCRep", "build_ncrep", "levi_civita", "verify_algebra", "verify_jacobi"]


def levi_civita(i: int, j: int, k: int) -> int:
    """eps_ijk for 1-based indices."""
    if len({i, j, k}) < 3:
        return 0
    return 1 if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def _vec(kind: str) -> tuple[OperatorExpr, ...]:
    return tuple(gen(f"{kind}{i}") for i in (1, 2, 3))


def cross(u, v) -> tuple[OperatorExpr, ...]:
    """``(u x v)_i = eps_ijk u_j v_k`` with operator order kept as u before v."""
    out = []
    for i in (1, 2, 3):
        acc = OperatorExpr()
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                e = levi_civita(i, j, k)
                if e:
                    acc = acc + e * (u[j - 1] * v[k - 1])
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class NCRep:
    X: tuple[OperatorExpr, ...]
    P: tuple[OperatorExpr, ...]
    theta: tuple[tuple[OperatorExpr, ...], ...]
    Ltilde: tuple[OperatorExpr, ...]
    shift: Fraction = Fraction(1, 2)

    @property
    def a(self):
        return _vec("a")

    @property
    def pa(self):
        return _vec("pa")

    def substitution_map(self) -> dict[Generator, OperatorExpr]:
        """Map the x/p placeholder slots of an abstract expression to X/P."""
        m = {Generator("x", i): self.X[i - 1] for i in (1, 2, 3)}
        m.update({Generator("p", i): self.P[i - 1] for i in (1, 2, 3)})
        return m

    def named_operators(self) -> list[tuple[str, OperatorExpr]]:
        """The twelve operators of the noncommutative algebra, in a fixed order."""
        ops = [(f"X{i}", self.X[i - 1]) for i in (1, 2, 3)]
        ops += [(f"P{i}", self.P[i - 1]) for i in (1, 2, 3)]
        ops += [(f"a{i}", self.a[i - 1]) for i in (1, 2, 3)]
        ops += [(f"pa{i}", self.pa[i - 1]) for i in (1, 2, 3)]
        return ops


def build_ncrep(shift: Fraction = Fraction(1, 2)) -> NCRep:
    """Build X, P, theta and the total angular momentum.

    ``shift`` is the factor in front of ``theta_ij p_j``; anything other than
    1/2 gives a deliberately broken representation for negative controls.
    """
    shift = Fraction(shift)
    l0_over_hbar = param("l0") * param("hbar", -1)
    a, p = _vec("a"), _vec("p")
    theta = tuple(
        tuple(
            sum((levi_civita(i, j, k) * l0_over_hbar * a[k - 1] for k in (1, 2, 3)), OperatorExpr())
            for j in (1, 2, 3)
        )
        for i in (1, 2, 3)
    )
    x = _vec("x")
    X = tuple(
        x[i] - shift * sum((theta[i][j] * p[j] for j in range(3)), OperatorExpr())
        for i in range(3)
    )
    L = tuple(u + v for u, v in zip(cross(x, p), cross(a, _vec("pa"))))
    return NCRep(X=X, P=p, theta=theta, Ltilde=L, shift=shift)


def ltilde_alternative(rep: NCRep) -> tuple[OperatorExpr, ...]:
    """``X x P + (l0/2hbar) P x (a x P) + a x pa``; equals Ltilde for a valid rep."""
    c = ParamExpr.const(Fraction(1, 2)) * param("l0") * param("hbar", -1)
    pap = cross(rep.P, cross(rep.a, rep.P))
    return tuple(
        u + c * v + w for u, v, w in zip(cross(rep.X, rep.P), pap, cross(rep.a, rep.pa))
    )


def verify_algebra(rep: NCRep) -> VerificationReport:
    """Check every bracket relation of the noncommutative algebra exactly."""
    report = VerificationReport("noncommutative algebra")
    ihbar = I * param("hbar")
    il0 = I * param("l0")
    X, P, a, pa, L = rep.X, rep.P, rep.a, rep.pa, rep.Ltilde
    r = (1, 2, 3)

    def eps_sum(i, j, vec, scale):
        return sum(
            (levi_civita(i, j, k) * scale * vec[k - 1] for k in r), OperatorExpr()
        )

    for i in r:
        for j in r:
            report.add(f"[X{i},X{j}] = i*eps_{i}{j}k*l0*a_k", commutator(X[i - 1], X[j - 1]),
                       eps_sum(i, j, a, il0))
    for i in r:
        for j in r:
            report.add(f"[X{i},X{j}] = i*hbar*theta_{i}{j}", commutator(X[i - 1], X[j - 1]),
                       ihbar * rep.theta[i - 1][j - 1])
            report.add(f"theta_{i}{j} = -theta_{j}{i}", rep.theta[i - 1][j - 1],
                       -rep.theta[j - 1][i - 1])
    for i in r:
        for j in r:
            delta = ihbar if i == j else 0
            report.add(f"[X{i},P{j}] = i*hbar*delta", commutator(X[i - 1], P[j - 1]),
                       OperatorExpr.scalar(delta))
            report.add(f"[P{i},P{j}] = 0", commutator(P[i - 1], P[j - 1]), 0)
    half_il0 = il0 * Fraction(1, 2)
    for i in r:
        for j in r:
            report.add(f"[X{i},pa{j}] = i*eps_{i}{j}k*l0*p_k/2", commutator(X[i - 1], pa[j - 1]),
                       eps_sum(i, j, P, half_il0))
    for i in r:
        for j in r:
            delta = ihbar if i == j else 0
            report.add(f"[a{i},a{j}] = 0", commutator(a[i - 1], a[j - 1]), 0)
            report.add(f"[pa{i},pa{j}] = 0", commutator(pa[i - 1], pa[j - 1]), 0)
            report.add(f"[a{i},pa{j}] = i*hbar*delta", commutator(a[i - 1], pa[j - 1]),
                       OperatorExpr.scalar(delta))
            report.add(f"[a{i},X{j}] = 0", commutator(a[i - 1], X[j - 1]), 0)
            report.add(f"[a{i},P{j}] = 0", commutator(a[i - 1], P[j - 1]), 0)
            report.add(f"[pa{i},P{j}] = 0", commutator(pa[i - 1], P[j - 1]), 0)
    for name, vec in (("X", X), ("P", P), ("a", a), ("pa", pa)):
        for i in r:
            for j in r:
                report.add(f"[{name}{i},Lt{j}] = i*hbar*eps_{i}{j}k*{name}_k",
                           commutator(vec[i - 1], L[j - 1]), eps_sum(i, j, vec, ihbar))
    for i in r:
        for j in r:
            report.add(f"[Lt{i},Lt{j}] = i*hbar*eps_{i}{j}k*Lt_k",
                       commutator(L[i - 1], L[j - 1]), eps_sum(i, j, L, ihbar))
    for i, alt in zip(r, ltilde_alternative(rep)):
        report.add(f"Lt{i} = (X x P + (l0/2hbar) P x (a x P) + a x pa)_{i}", L[i - 1], alt)
    return report


def jacobi_residual(A: OperatorExpr, B: OperatorExpr, C: OperatorExpr) -> OperatorExpr:
    return (
        commutator(commutator(A, B), C)
        + commutator(commutator(B, C), A)
        + commutator(commutator(C, A), B)
    )


def verify_jacobi(rep: NCRep) -> VerificationReport:
    """Cyclic Jacobi sum for all 220 unordered triples of the twelve operators."""
    report = VerificationReport("Jacobi identity")
    ops = rep.named_operators()
    for (na, A), (nb, B), (nc, C) in combinations(ops, 3):
        report.add(f"Jacobi({na},{nb},{nc})", jacobi_residual(A, B, C), 0)
    return report
