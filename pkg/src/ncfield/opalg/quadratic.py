"""Split an operator into quadratic, linear and constant parts in chosen variables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .operators import NSLOTS, Generator, OperatorExpr, commutator

__all__ = ["DegreeTooHigh", "NoncommutingCoefficient", "QuadraticForm", "collect_quadratic"]


class DegreeTooHigh(ValueError):
    """A term is cubic or higher in the collected variables."""


class NoncommutingCoefficient(ValueError):
    """A coefficient fails to commute with one of the collected variables."""


@dataclass(frozen=True)
class QuadraticForm:
    """``sum_ij Q[i][j] v_i v_j + sum_i L[i] v_i + C`` with Q symmetric.

    Entries of Q and L are OperatorExprs that commute with every variable.
    """

    variables: tuple[Generator, ...]
    Q: tuple[tuple[OperatorExpr, ...], ...]
    L: tuple[OperatorExpr, ...]
    C: OperatorExpr

    def reexpand(self) -> OperatorExpr:
        v = [OperatorExpr.generator(g) for g in self.variables]
        total = self.C
        for i, vi in enumerate(v):
            total = total + self.L[i] * vi
            for j, vj in enumerate(v):
                if not self.Q[i][j].is_zero():
                    total = total + self.Q[i][j] * vi * vj
        return total


def _strip(word: tuple, slots) -> tuple[tuple, tuple]:
    rest = list(word)
    var = [0] * NSLOTS
    for s in slots:
        var[s], rest[s] = word[s], 0
    return tuple(rest), tuple(var)


def collect_quadratic(expr: OperatorExpr, variables: Sequence[Generator]) -> QuadraticForm:
    """Collect ``expr`` as a quadratic form in ``variables``.

    Raises DegreeTooHigh for cubic terms and NoncommutingCoefficient when a
    coefficient does not commute with every variable.  The result is checked
    by re-expansion.
    """
    variables = tuple(sorted(set(variables), key=lambda g: g.slot))
    index = {g.slot: i for i, g in enumerate(variables)}
    slots = list(index)
    n = len(variables)
    v_ops = [OperatorExpr.generator(g) for g in variables]
    Q = [[OperatorExpr() for _ in range(n)] for _ in range(n)]
    L = [OperatorExpr() for _ in range(n)]
    C = OperatorExpr()

    for word, c in expr.terms.items():
        rest, var = _strip(word, slots)
        degree = sum(var)
        if degree > 2:
            raise DegreeTooHigh(f"term of degree {degree} in {', '.join(map(str, variables))}")
        coeff = OperatorExpr({rest: c})
        if degree == 0:
            C = C + coeff
            continue
        for v in v_ops:
            if not commutator(coeff, v).is_zero():
                raise NoncommutingCoefficient(f"coefficient {coeff} does not commute with {v}")
        present = [index[s] for s in slots if var[s] for _ in range(var[s])]
        if degree == 1:
            L[present[0]] = L[present[0]] + coeff
        else:
            i, j = present
            if i == j:
                Q[i][i] = Q[i][i] + coeff
            else:
                half = coeff * Fraction(1, 2)
                Q[i][j] = Q[i][j] + half
                Q[j][i] = Q[j][i] + half
                # v_i v_j = (v_i v_j + v_j v_i)/2 + [v_i, v_j]/2
                C = C + half * commutator(v_ops[i], v_ops[j])

    form = QuadraticForm(variables, tuple(map(tuple, Q)), tuple(L), C)
    if form.reexpand() != expr:
        raise RuntimeError("quadratic collection failed to reproduce its input")
    return form
