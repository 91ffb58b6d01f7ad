"""Parameter symbols, Laurent polynomials over them, and their ratios.

A :class:`ParamExpr` is a finite sum ``sum_k c_k * prod_s s**e_{k,s}`` where the
``c_k`` are Gaussian rationals and the exponents are integers (negative ones
allowed, so ``1/hbar`` is still a ParamExpr).  Genuine ratios such as the
effective mass live in :class:`RationalParamExpr`.
"""

from __future__ import annotations

import re
from typing import Mapping

from .scalars import ONE, ZERO, GaussianRational, as_gaussian

__all__ = [
    "BUILTIN_SYMBOLS",
    "ParamExpr",
    "ParamSymbol",
    "RationalParamExpr",
    "is_registered",
    "param",
    "register_symbol",
    "registered_symbols",
]

# Display names of the seven symbols that are always present, in canonical order.
BUILTIN_SYMBOLS = ("hbar", "l0", "m", "m_osc", "omega", "kappa", "g")

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_registry: list[str] = list(BUILTIN_SYMBOLS)


class ParamSymbol(str):
    """A registered parameter name."""

    def __new__(cls, name: str):
        if name not in _registry:
            raise KeyError(f"unregistered parameter symbol {name!r}")
        return super().__new__(cls, name)


def register_symbol(name: str) -> ParamSymbol:
    """Add a user symbol to the universe (idempotent)."""
    if not _IDENT.match(name):
        raise ValueError(f"invalid symbol name {name!r}")
    if name not in _registry:
        _registry.append(name)
    return ParamSymbol(name)


def registered_symbols() -> tuple[str, ...]:
    return tuple(_registry)


def is_registered(name: str) -> bool:
    return name in _registry


def _order(name: str) -> int:
    try:
        return _registry.index(name)
    except ValueError:
        raise KeyError(f"unregistered parameter symbol {name!r}") from None


Monomial = tuple  # tuple[tuple[str, int], ...] sorted by symbol order


def _mono_key(mono: Monomial):
    return tuple((_order(s), e) for s, e in mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(((s, e) for s, e in exps.items() if e), key=lambda t: _order(t[0])))


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out


def _mono_text(mono: Monomial) -> str:
    return "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)


class ParamExpr:
    """Exact Laurent polynomial in the registered parameter symbols."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = as_gaussian(c)
            if c is NotImplemented:
                raise TypeError(f"bad coefficient {c!r}")
            mono = tuple(sorted(((s, e) for s, e in mono if e), key=lambda t: _order(t[0])))
            total = clean.get(mono, ZERO) + c
            if total:
                clean[mono] = total
            else:
                clean.pop(mono, None)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ParamExpr is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "ParamExpr":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "ParamExpr":
        _order(name)
        return cls({((name, power),): ONE})

    @classmethod
    def coerce(cls, value) -> "ParamExpr":
        if isinstance(value, ParamExpr):
            return value
        c = as_gaussian(value)
        if c is NotImplemented:
            raise TypeError(f"cannot coerce {value!r} to ParamExpr")
        return cls({(): c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((), ZERO)

    def symbols(self) -> set[str]:
        return {s for mono in self._terms for s, _ in mono}

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -------------------------------------------------------
    def _other(self, other):
        if isinstance(other, ParamExpr):
            return other
        c = as_gaussian(other)
        if c is NotImplemented:
            return NotImplemented
        return ParamExpr({(): c})

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for mono, c in other._terms.items():
            terms[mono] = terms.get(mono, ZERO) + c
        return ParamExpr(terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mono_mul(ma, mb)
                terms[mono] = terms.get(mono, ZERO) + ca * cb
        return ParamExpr(terms)

    __rmul__ = __mul__

    def inverse(self) -> "ParamExpr":
        """Inverse of a single-term expression."""
        if not self.is_monomial():
            raise ValueError("only single-term ParamExprs are invertible; use RationalParamExpr")
        ((mono, c),) = self._terms.items()
        return ParamExpr({tuple((s, -e) for s, e in mono): c.inverse()})

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ParamExpr.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ParamExpr.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "ParamExpr":
        """Complex conjugate, treating every symbol as real."""
        return ParamExpr({m: c.conjugate() for m, c in self._terms.items()})

    # -- substitution / evaluation ---------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "ParamExpr":
        """Replace symbols by ParamExprs (or numbers).

        A symbol carrying a negative exponent may only be replaced by a
        single-term expression.
        """
        images = {k: ParamExpr.coerce(v) for k, v in mapping.items()}
        result = ParamExpr()
        for mono, c in self._terms.items():
            term = ParamExpr({(): c})
            kept = []
            for s, e in mono:
                if s in images:
                    term = term * images[s] ** e
                else:
                    kept.append((s, e))
            result = result + term * ParamExpr({tuple(kept): ONE})
        return result

    def evaluate(self, values: Mapping[str, float]) -> complex:
        total = 0j
        for mono, c in self._terms.items():
            v = complex(c)
            for s, e in mono:
                v *= float(values[s]) ** e
            total += v
        return total

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self._terms)

    def to_text(self) -> str:
        """Deterministic text, terms ordered by exponent vector."""
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            if not mono:
                parts.append(c.to_text())
            elif c == ONE:
                parts.append(_mono_text(mono))
            elif c == -ONE:
                parts.append("-" + _mono_text(mono))
            else:
                parts.append(f"{c.to_text()}*{_mono_text(mono)}")
        return _join_terms(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"ParamExpr({self.to_text()!r})"


def param(name: str, power: int = 1) -> ParamExpr:
    """Shorthand for :meth:`ParamExpr.symbol`."""
    return ParamExpr.symbol(name, power)


def _clear_monomial(num: ParamExpr, den: ParamExpr):
    """Multiply through so all exponents are >= 0 and no symbol divides both."""
    monos = [dict(mono) for expr in (num, den) for mono in expr._terms]
    names = {s for mono in monos for s in mono}
    low = {s: min(mono.get(s, 0) for mono in monos) for s in names}
    low = {s: e for s, e in low.items() if e}
    if not low:
        return num, den
    shift = ParamExpr({tuple((s, -e) for s, e in low.items()): ONE})
    return num * shift, den * shift


class RationalParamExpr:
    """Ratio of two ParamExprs kept in a normalized form.

    Normalization clears common monomial factors and negative exponents and
    scales so the leading denominator coefficient is 1.  Equality is decided
    exactly by cross-multiplication, so a shared non-monomial factor in
    numerator and denominator does not break comparisons.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        num = ParamExpr.coerce(numerator)
        den = ParamExpr.coerce(denominator)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if num.is_zero():
            den = ParamExpr.const(1)
        num, den = _clear_monomial(num, den)
        lead = den.items()[-1][1]
        scale = lead.inverse()
        object.__setattr__(self, "numerator", num * scale)
        object.__setattr__(self, "denominator", den * scale)

    def __setattr__(self, name, value):
        raise AttributeError("RationalParamExpr is immutable")

    @classmethod
    def coerce(cls, value) -> "RationalParamExpr":
        if isinstance(value, RationalParamExpr):
            return value
        return cls(value)

    def __add__(self, other):
        o = RationalParamExpr.coerce(other)
        return RationalParamExpr(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalParamExpr(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-RationalParamExpr.coerce(other))

    def __rsub__(self, other):
        return RationalParamExpr.coerce(other) - self

    def __mul__(self, other):
        o = RationalParamExpr.coerce(other)
        return RationalParamExpr(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalParamExpr":
        if self.numerator.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return RationalParamExpr(self.denominator, self.numerator)

    def __truediv__(self, other):
        return self * RationalParamExpr.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return RationalParamExpr.coerce(other) * self.reciprocal()

    def subs(self, mapping) -> "RationalParamExpr":
        return RationalParamExpr(self.numerator.subs(mapping), self.denominator.subs(mapping))

    def evaluate(self, values: Mapping[str, float]) -> complex:
        return self.numerator.evaluate(values) / self.denominator.evaluate(values)

    def as_param_expr(self) -> ParamExpr:
        """Return the equivalent ParamExpr when the denominator is a monomial."""
        return self.numerator / self.denominator

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __eq__(self, other):
        try:
            o = RationalParamExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self.numerator * o.denominator == o.numerator * self.denominator

    __hash__ = None

    def to_text(self) -> str:
        num, den = self.numerator.to_text(), self.denominator.to_text()
        if den == "1":
            return num
        return f"({num}) / ({den})"

    __str__ = to_text

    def __repr__(self):
        return f"RationalParamExpr({self.to_text()!r})"
