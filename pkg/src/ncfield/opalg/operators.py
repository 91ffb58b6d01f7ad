"""Normal-ordered operator expressions over the twelve canonical generators.

Generators are ``x_i, p_i`` (particle) and ``a_i, pa_i`` (auxiliary
oscillator), ``i = 1, 2, 3``.  The only nonvanishing base brackets are
``[x_i, p_i] = [a_i, pa_i] = i*hbar``.

A canonical word lists generators in the fixed order
``x1 x2 x3 p1 p2 p3 a1 a2 a3 pa1 pa2 pa3``, so a word is fully described by
its exponent vector.  Operator expressions map words to ParamExpr
coefficients; with that order fixed the representation is unique and
structural equality is mathematical equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .params import ParamExpr, _join_terms, param
from .scalars import GaussianRational

__all__ = [
    "GENERATORS",
    "Generator",
    "OperatorExpr",
    "canonicalize",
    "commutator",
    "gen",
    "substitute",
]

KINDS = ("x", "p", "a", "pa")
NSLOTS = 12
# (left, right) slot pairs with [left, right] = i*hbar
CONJUGATE_PAIRS = tuple((i, i + 3) for i in range(3)) + tuple((6 + i, 9 + i) for i in range(3))


@dataclass(frozen=True, order=True)
class Generator:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.index not in (1, 2, 3):
            raise ValueError(f"generator index must be 1..3, got {self.index}")

    @property
    def slot(self) -> int:
        return KINDS.index(self.kind) * 3 + self.index - 1

    @classmethod
    def from_slot(cls, slot: int) -> "Generator":
        return GENERATORS[slot]

    @classmethod
    def parse(cls, name: str) -> "Generator":
        kind, index = name[:-1], int(name[-1])
        return cls(kind, index)

    def __str__(self):
        return f"{self.kind}{self.index}"


GENERATORS = tuple(Generator(k, i) for k in KINDS for i in (1, 2, 3))
_NAMES = tuple(str(g) for g in GENERATORS)
_EMPTY = (0,) * NSLOTS
_HBAR = param("hbar")
_MINUS_I = GaussianRational(0, -1)


def _expand(word: tuple) -> tuple:
    """Exponent vector -> slot sequence, used for lexicographic ordering."""
    out = []
    for slot, e in enumerate(word):
        out.extend([slot] * e)
    return tuple(out)


def _word_text(word: tuple) -> str:
    parts = []
    for slot, e in enumerate(word):
        if e == 1:
            parts.append(_NAMES[slot])
        elif e:
            parts.append(f"{_NAMES[slot]}^{e}")
    return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def _pair_product(alpha, beta, gamma, delta):
    """(q^alpha p^beta)(q^gamma p^delta) for one conjugate pair [q, p] = i*hbar.

    Returns a tuple of (integer factor, k, q exponent, p exponent); the full
    coefficient of each term is integer factor * (-i*hbar)**k.
    """
    out = []
    for k in range(min(beta, gamma) + 1):
        c = factorial(k) * comb(beta, k) * comb(gamma, k)
        out.append((c, k, alpha + gamma - k, beta + delta - k))
    return tuple(out)


@lru_cache(maxsize=65536)
def _word_product(wa: tuple, wb: tuple):
    """Normal-ordered product of two canonical words.

    Returns tuple of (integer factor, total hbar power k, word); the
    coefficient is factor * (-i)**k * hbar**k.
    """
    per_pair = []
    for q, p in CONJUGATE_PAIRS:
        per_pair.append(_pair_product(wa[q], wa[p], wb[q], wb[p]))
    result: dict = {}
    for choice in product(*per_pair):
        word = [0] * NSLOTS
        factor, ktot = 1, 0
        for (q, p), (c, k, eq, ep) in zip(CONJUGATE_PAIRS, choice):
            word[q], word[p] = eq, ep
            factor *= c
            ktot += k
        key = (ktot, tuple(word))
        result[key] = result.get(key, 0) + factor
    return tuple((f, k, w) for (k, w), f in result.items() if f)


_hbar_cache: dict = {}


def _hbar_factor(k: int) -> ParamExpr:
    if k not in _hbar_cache:
        _hbar_cache[k] = ParamExpr.const(_MINUS_I**k) * _HBAR**k
    return _hbar_cache[k]


class OperatorExpr:
    """Immutable normal-ordered element of the operator algebra."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for word, c in (terms or {}).items():
            c = ParamExpr.coerce(c)
            if len(word) != NSLOTS:
                raise ValueError("words must be exponent vectors of length 12")
            total = clean[word] + c if word in clean else c
            if total.is_zero():
                clean.pop(word, None)
            else:
                clean[word] = total
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorExpr is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> "OperatorExpr":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c) -> "OperatorExpr":
        return cls({_EMPTY: c})

    @classmethod
    def generator(cls, g: Generator, power: int = 1) -> "OperatorExpr":
        word = [0] * NSLOTS
        word[g.slot] = power
        return cls({tuple(word): 1})

    @classmethod
    def coerce(cls, value) -> "OperatorExpr":
        if isinstance(value, OperatorExpr):
            return value
        if isinstance(value, Generator):
            return cls.generator(value)
        return cls.scalar(ParamExpr.coerce(value))

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (lexicographic word) order."""
        return sorted(self._terms.items(), key=lambda kv: _expand(kv[0]))

    def coefficient(self, word) -> ParamExpr:
        """Coefficient of a word given as exponent vector or generator sequence."""
        word = tuple(word)
        if not word:
            word = _EMPTY
        elif isinstance(word[0], Generator):
            vec = [0] * NSLOTS
            for g in word:
                vec[g.slot] += 1
            word = tuple(vec)
        return self._terms.get(tuple(word), ParamExpr())

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return not self._terms or set(self._terms) == {_EMPTY}

    def scalar_part(self) -> ParamExpr:
        return self._terms.get(_EMPTY, ParamExpr())

    def degree_in(self, gens: Iterable[Generator]) -> int:
        slots = [g.slot for g in gens]
        return max((sum(w[s] for s in slots) for w in self._terms), default=0)

    def generators(self) -> set[Generator]:
        return {GENERATORS[s] for w in self._terms for s, e in enumerate(w) if e}

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for w, c in other._terms.items():
            if w in terms:
                s = terms[w] + c
                if s.is_zero():
                    del terms[w]
                else:
                    terms[w] = s
            else:
                terms[w] = c
        return OperatorExpr._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (ParamExpr, int, GaussianRational)) or _is_rational(other):
            c = ParamExpr.coerce(other)
            if c.is_zero():
                return OperatorExpr()
            return OperatorExpr._raw({w: v * c for w, v in self._terms.items()})
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        acc: dict = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                cab = ca * cb
                for f, k, w in _word_product(wa, wb):
                    c = cab * f if k == 0 else cab * (_hbar_factor(k) * f)
                    acc[w] = acc[w] + c if w in acc else c
        return OperatorExpr._raw({w: c for w, c in acc.items() if not c.is_zero()})

    def __rmul__(self, other):
        # scalars commute with everything
        if isinstance(other, (ParamExpr, int, GaussianRational)) or _is_rational(other):
            return self * other
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = OperatorExpr.scalar(1)
        for _ in range(n):
            result = result * self
        return result

    def adjoint(self) -> "OperatorExpr":
        """Hermitian adjoint, with every generator and symbol Hermitian/real."""
        out = OperatorExpr()
        for w, c in self._terms.items():
            seq = [GENERATORS[s] for s in _expand(w)][::-1]
            out = out + canonicalize([(c.conjugate(), seq)])
        return out

    def subs_params(self, mapping) -> "OperatorExpr":
        return OperatorExpr({w: c.subs(mapping) for w, c in self._terms.items()})

    # -- comparison / text -----------------------------------------------
    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
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
        """Canonical serialization: words lexicographic, coefficients by exponent vector."""
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            ctext = c.to_text()
            if len(c) > 1:
                ctext = f"({ctext})"
            if w == _EMPTY:
                parts.append(ctext)
            elif ctext == "1":
                parts.append(_word_text(w))
            else:
                parts.append(f"{ctext}*{_word_text(w)}")
        return _join_terms(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"OperatorExpr({self.to_text()!r})"


def _is_rational(v) -> bool:
    from numbers import Rational

    return isinstance(v, Rational)


def _coerce_or_none(value):
    try:
        return OperatorExpr.coerce(value)
    except TypeError:
        return None


def gen(name: str) -> OperatorExpr:
    """``gen("pa2")`` -> the generator pa_2 as an OperatorExpr."""
    return OperatorExpr.generator(Generator.parse(name))


def canonicalize(raw: Iterable[tuple[object, Sequence[Generator]]]) -> OperatorExpr:
    """Normal-order a sum of ``(coefficient, generator word)`` pairs."""
    total = OperatorExpr()
    for coeff, word in raw:
        term = OperatorExpr.scalar(ParamExpr.coerce(coeff))
        for g in word:
            term = term * OperatorExpr.generator(g)
        total = total + term
    return total


def commutator(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    a = OperatorExpr.coerce(a)
    b = OperatorExpr.coerce(b)
    return a * b - b * a


def substitute(expr: OperatorExpr, mapping: Mapping[Generator, OperatorExpr]) -> OperatorExpr:
    """Replace generators in every canonical word, preserving word order."""
    if not mapping:
        return expr
    images = {g.slot: OperatorExpr.coerce(v) for g, v in mapping.items()}
    total = OperatorExpr()
    for w, c in expr._terms.items():
        term = OperatorExpr.scalar(c)
        for slot in _expand(w):
            term = term * images.get(slot, OperatorExpr.generator(GENERATORS[slot]))
        total = total + term
    return total
