"""Airy function Ai from its Maclaurin series and large-argument asymptotics, plus its zeros.

The series is summed in multiprecision so that the cancellation between its
two branches for negative arguments does not eat the double-precision
result.  Past ``|x| > SERIES_LIMIT`` the standard asymptotic expansions are
used instead.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
from scipy.optimize import brentq

__all__ = ["SERIES_LIMIT", "airy_ai", "airy_zero", "airy_zeros"]

SERIES_LIMIT = 10.0
_DPS = 50


@lru_cache(maxsize=1)
def _series_constants():
    with mpmath.workdps(_DPS):
        c1 = 1 / (mpmath.power(3, mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.power(3, mpmath.mpf(1) / 3) * mpmath.gamma(mpmath.mpf(1) / 3))
    return c1, c2


def _ai_series(x: float) -> float:
    """Ai(x) = c1 f(x) - c2 g(x) with the two Maclaurin branches f, g."""
    c1, c2 = _series_constants()
    with mpmath.workdps(_DPS):
        z = mpmath.mpf(x)
        z3 = z**3
        f_term, g_term = mpmath.mpf(1), z
        f_sum, g_sum = f_term, g_term
        eps = mpmath.mpf(10) ** (-_DPS + 5)
        k = 0
        while True:
            k += 1
            f_term *= z3 / ((3 * k - 1) * (3 * k))
            g_term *= z3 / ((3 * k) * (3 * k + 1))
            f_sum += f_term
            g_sum += g_term
            if abs(f_term) + abs(g_term) < eps * (abs(f_sum) + abs(g_sum)) and k > 3:
                break
        return float(c1 * f_sum - c2 * g_sum)


def _u_coeffs(n: int) -> list[float]:
    """u_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)) and v_k = -(6k+1)/(6k-1) u_k."""
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return u


_U = _u_coeffs(24)
_V = [1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, len(_U))]


def _truncated(coeffs, zeta: float, signs) -> float:
    """Sum an asymptotic series, stopping at its smallest term."""
    total, last = 0.0, math.inf
    for k, c in enumerate(coeffs):
        term = signs(k) * c / zeta**k
        if abs(term) > last:
            break
        total += term
        last = abs(term)
    return total


def _ai_asymptotic(x: float) -> float:
    if x > 0:
        zeta = 2.0 / 3.0 * x**1.5
        s = _truncated(_U, zeta, lambda k: (-1) ** k)
        return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x**0.25) * s
    z = -x
    zeta = 2.0 / 3.0 * z**1.5
    # P, Q: even / odd parts of sum u_k zeta^-k with alternating pairs
    P = _truncated(_U[0::2], zeta**2, lambda k: (-1) ** k)
    Q = _truncated(_U[1::2], zeta**2, lambda k: (-1) ** k) / zeta
    phase = zeta - math.pi / 4.0
    return (math.cos(phase) * P + math.sin(phase) * Q) / (math.sqrt(math.pi) * z**0.25)


def airy_ai(x: float) -> float:
    """Airy function Ai(x) for real x."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("argument must be finite")
    if abs(x) <= SERIES_LIMIT:
        return _ai_series(x)
    return _ai_asymptotic(x)


def _zero_guess(n: int) -> float:
    t = 3.0 * math.pi / 8.0 * (4 * n - 1)
    return -(t ** (2.0 / 3.0)) * (1 + 5.0 / 48.0 * t**-2 - 5.0 / 36.0 * t**-4)


@lru_cache(maxsize=None)
def airy_zero(n: int) -> float:
    """n-th zero a_n < 0 of Ai (1-based), by bracketed root finding."""
    if n < 1:
        raise ValueError("zeros are numbered from 1")
    guess = _zero_guess(n)
    # neighbouring zeros are at least ~1.2 apart; bracket well inside that
    width = 0.3 if n > 1 else 0.5
    lo, hi = guess - width, guess + width
    flo, fhi = airy_ai(lo), airy_ai(hi)
    if flo * fhi > 0:
        raise RuntimeError(f"failed to bracket Ai zero {n} near {guess}")
    return brentq(airy_ai, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)


def airy_zeros(n_levels: int) -> list[float]:
    return [airy_zero(n) for n in range(1, n_levels + 1)]
