"""Counting binomial coefficients in one Pascal row by exact prime-power
divisibility.

``theta(p, j, n)`` counts the entries of row n divisible by p^j but not
p^(j+1).  The generating polynomial of a row,

    T_n(x) = sum_j theta(p, j, n) x^j,

satisfies T_a = a + 1 for 0 <= a < p and, for n >= 1 and 0 <= a < p,

    T_{p n + a} = (a + 1) T_n + (p - a - 1) x^{v_p(n) + 1} T_{n - 1},

which is the recurrence everything here is built on.  ``tilde_theta``
re-indexes theta by digit sums, which turns the two-variable generating
function into an explicit infinite product (``tilde_product_table``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .ratcore import PolyQ
from .words import Word, digit_sum, expand, padic_valuation

_T_CACHE: dict[tuple[int, int], PolyQ] = {}
_TILDE_CACHE: dict[tuple[int, int, int], int] = {}


def T_poly(p: int, n: int) -> PolyQ:
    """Row polynomial T_n(x) over base p; coefficients are the theta counts."""
    if p < 2:
        raise ValueError("base must be >= 2")
    if n < 0:
        raise ValueError("row index must be >= 0")
    if n < p:
        return PolyQ((n + 1,))
    key = (p, n)
    cached = _T_CACHE.get(key)
    if cached is not None:
        return cached
    m, a = divmod(n, p)
    t = T_poly(p, m) * (a + 1)
    rest = p - a - 1
    if rest:
        shift = padic_valuation(m, p) + 1
        t = t + PolyQ.monomial(rest, shift) * T_poly(p, m - 1)
    _T_CACHE[key] = t
    return t


def theta(p: int, j: int, n: int) -> int:
    """Entries of row n exactly divisible by p^j; zero outside the support."""
    if j < 0:
        return 0
    t = T_poly(p, n)
    if j > t.degree:
        return 0
    c = t.coeffs[j]
    return int(c)


def theta0(p: int, n: int) -> int:
    """Entries of row n not divisible by p: the product of (digit + 1)."""
    out = 1
    for d in expand(n, p).digits:
        out *= d + 1
    return out


def Tbar(p: int, v: Union[int, Word]) -> PolyQ:
    """Row polynomial normalized to constant term 1."""
    if isinstance(v, Word):
        if v.p != p:
            raise ValueError("word base does not match p")
        v = v.value
    t = T_poly(p, v)
    c0 = t.coeffs[0]
    return t * (Fraction(1) / c0)


def psi(p: int, j: int, n: int) -> int:
    """Shifted companion count used by the Carlitz-style recurrence system.

    psi(p, j, n) counts entries t of row n with v_p(C(n, t)) = j - v_p(n+1);
    it equals theta(p, j - v_p(n+1), n) when j >= v_p(n+1) and is 0
    otherwise, with psi(p, j, -1) = 0 by convention.
    """
    if n < 0 or j < 0:
        return 0
    v = padic_valuation(n + 1, p)
    if j < v:
        return 0
    return theta(p, j - v, n)


def tilde_theta(p: int, k: int, n: int) -> int:
    """Digit-sum re-indexing: theta with j = (k - s_p(n)) / (p - 1).

    Nonzero only when k >= s_p(n) and p-1 divides k - s_p(n).  Computed by
    its own recurrence so the defining transform can be tested against it:

        tt(k, p n + a) = (a+1) tt(k-a, n) + (p-a-1) tt(k-p-a, n-1).
    """
    if k < 0 or n < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    key = (p, k, n)
    cached = _TILDE_CACHE.get(key)
    if cached is not None:
        return cached
    m, a = divmod(n, p)
    out = (a + 1) * tilde_theta(p, k - a, m) + (p - a - 1) * tilde_theta(p, k - p - a, m - 1)
    _TILDE_CACHE[key] = out
    return out


def tilde_table(p: int, kmax: int, nmax: int) -> list[list[int]]:
    """Rows k = 0..kmax, columns n = 0..nmax of tilde_theta."""
    return [[tilde_theta(p, k, n) for n in range(nmax + 1)] for k in range(kmax + 1)]


def tilde_product_table(p: int, x_order: int, z_order: int) -> list[list[int]]:
    """Coefficients of prod_{i>=0} (1 + x z^{p^i} + ... + x^{p-1} z^{(p-1) p^i})^2.

    Entry [k][n] is the coefficient of x^k z^n, truncated to k <= x_order and
    n <= z_order; only factors with p^i <= z_order can contribute.  This is
    the closed product form of the tilde_theta table.
    """
    table = [[0] * (z_order + 1) for _ in range(x_order + 1)]
    table[0][0] = 1
    step = 1
    while step <= z_order:
        # each factor appears squared
        for _ in range(2):
            new = [[0] * (z_order + 1) for _ in range(x_order + 1)]
            for k in range(x_order + 1):
                row = table[k]
                for n in range(z_order + 1):
                    c = row[n]
                    if not c:
                        continue
                    for m in range(p):
                        kk = k + m
                        nn = n + m * step
                        if kk > x_order or nn > z_order:
                            break
                        new[kk][nn] += c
            table = new
        step *= p
    return table
