"""Ordinates of the first nontrivial zeros of the Riemann zeta function.

``zeta(1/2 + it)`` comes from the alternating Dirichlet eta series,
accelerated with Borwein's Chebyshev weights, divided by ``1 - 2**(1-s)``.
Multiplying by ``exp(i*theta(t))`` gives the real Hardy function ``Z(t)``.
Zeros are located by a sign-change scan followed by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import loggamma

from .errors import InvalidParams, OutOfValidatedRange, WindowExhausted

T_MAX = 120.0
MAX_ZEROS = 25
SCAN_STEP = 0.05
SCAN_START = 0.5
XTOL = 1e-8


@lru_cache(maxsize=None)
def _borwein_weights(n: int) -> np.ndarray:
    """Signed weights ``(-1)**k (d_n - d_k) / d_n`` for k = 0..n-1, from exact integers."""
    d = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    w = np.array([float(Fraction(dn - d[k], dn)) for k in range(n)])
    w[1::2] *= -1
    w.setflags(write=False)
    return w


def _terms_for(t_max: float) -> int:
    # truncation error ~ (1 + 2t) exp(pi t / 2) / (3 + sqrt 8)**n, pushed below 1e-17
    bound = math.pi * t_max / 2 + math.log(3 * (1 + 2 * t_max)) + 40
    n = int(math.ceil(bound / math.log(3 + math.sqrt(8))))
    return 10 * int(math.ceil(n / 10))


def _check_window(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > T_MAX):
        raise OutOfValidatedRange(f"t must lie in (0, {T_MAX:g}]")
    return t


def zeta_critical(t):
    """``zeta(1/2 + i t)`` for ``0 < t <= 120`` (scalar or array)."""
    t = _check_window(t)
    n = _terms_for(float(np.max(t)))
    w = _borwein_weights(n)
    s = 0.5 + 1j * np.atleast_1d(t)
    logk = np.log(np.arange(1, n + 1, dtype=float))
    eta = np.exp(-s[:, None] * logk[None, :]) @ w
    zeta = eta / (1 - 2.0 ** (1 - s))
    return zeta[0] if t.ndim == 0 else zeta


def riemann_siegel_theta(t):
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def hardy_Z_complex(t):
    """``exp(i theta(t)) zeta(1/2 + i t)``; its imaginary part should vanish."""
    return np.exp(1j * riemann_siegel_theta(t)) * zeta_critical(t)


def hardy_Z(t):
    """Real Hardy function ``Z(t)`` on the validated window ``0 < t <= 120``."""
    z = np.real(hardy_Z_complex(t))
    return float(z) if np.ndim(z) == 0 else z


@dataclass(frozen=True)
class ZeroTable:
    ordinates: np.ndarray
    bracket_widths: np.ndarray
    method: str
    tol: float

    def __len__(self):
        return len(self.ordinates)


def sign_change_brackets(t_lo: float, t_hi: float, step: float = SCAN_STEP):
    """Consecutive scan nodes ``(a, b)`` on which ``Z`` changes sign."""
    n = int(math.floor((t_hi - t_lo) / step + 1e-9))
    nodes = t_lo + step * np.arange(n + 1)
    vals = hardy_Z(nodes)
    brackets = []
    for j in range(n):
        a, b = vals[j], vals[j + 1]
        if a == 0.0:
            brackets.append((nodes[j], nodes[j]))
        elif a * b < 0:
            brackets.append((nodes[j], nodes[j + 1]))
    return brackets


def bisect_zero(a: float, b: float, xtol: float = XTOL):
    """Bisection on ``Z`` over a sign-change bracket; returns (midpoint, width)."""
    fa = hardy_Z(a)
    if a == b or fa == 0.0:
        return a, 0.0
    while b - a > xtol:
        mid = 0.5 * (a + b)
        fm = hardy_Z(mid)
        if fm == 0.0:
            return mid, 0.0
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b), b - a


def find_zeros(m: int, step: float = SCAN_STEP, xtol: float = XTOL) -> ZeroTable:
    """First ``m`` zero ordinates, each certified by a sign change of ``Z``."""
    if not 1 <= m <= MAX_ZEROS:
        raise InvalidParams(f"m must be in 1..{MAX_ZEROS}, got {m}")
    brackets = sign_change_brackets(SCAN_START, T_MAX, step)
    if len(brackets) < m:
        raise WindowExhausted(f"only {len(brackets)} sign changes below t={T_MAX:g}")
    found = [bisect_zero(a, b, xtol) for a, b in brackets[:m]]
    ords = np.array([f[0] for f in found])
    widths = np.array([f[1] for f in found])
    return ZeroTable(ords, widths, f"eta-borwein+bisection(step={step:g})", xtol)


def count_zeros_below(T: float, step: float = SCAN_STEP) -> int:
    return len(sign_change_brackets(SCAN_START, T, step))
