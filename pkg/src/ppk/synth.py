"""Synthesis of the universal block-count polynomials.

For every level j there is a polynomial P_j in variables X_w, one per
admissible word w of length <= j+1, such that for every row n

    theta(p, j, n) / theta(p, 0, n) = P_j evaluated at X_w = |n|_w,

where |n|_w is the padded factor count of w in the base-p expansion of n.
The coefficients come from a generating function: the coefficient series of
the monomial X_{w1}^{k1} ... X_{wl}^{kl} across all levels is

    prod_i (1 / k_i!) (log r_{w_i})^{k_i},

where r_w is the telescoping quotient of normalized row polynomials

    r_w = Tbar_w Tbar_{w_LR} / (Tbar_{w_R} Tbar_{w_L}),

which also has the closed form 1 + alpha_w x^{len(w)-1} / (Tbar_{w_L}
Tbar_{w_R}) with an explicit rational alpha_w.  This module builds r_w both
ways, extracts the log series, enumerates monomials by total weight, and
assembles the polynomials exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ratcore import PolyQ, RationalFunctionQ, SeriesQ, rational_to_str
from .theta import Tbar, theta0
from .words import (
    Word,
    counting_factor_counts,
    enumerate_admissible,
    expand,
    truncations,
    weight,
)

__all__ = [
    "Monomial",
    "BlockPolynomial",
    "alpha_coefficient",
    "r_w_quotient",
    "r_w_closed",
    "log_rw_series",
    "monomials_up_to_weight",
    "monomial_series",
    "block_polynomial",
    "block_polynomials_up_to",
    "cumulative_polynomial",
    "telescope_identity_holds",
    "telescope_random_check",
    "rw_identity_scan",
]


def alpha_coefficient(w: Word) -> Fraction:
    """Leading coefficient of r_w - 1; positive for every admissible word.

    alpha_w = p^{mu-2} * d_lead/(d_lead+1) * (p-1-d_last)/(d_last+1)
              * prod over interior digits v of 1/(v+1)^2 (nonzero v only),
    with mu the length of w.
    """
    if not w.is_admissible:
        raise ValueError(f"alpha is defined for admissible words only: {w}")
    d = w.digits
    p = w.p
    a = Fraction(p) ** (len(d) - 2)
    a *= Fraction(d[0], d[0] + 1)
    a *= Fraction(p - 1 - d[-1], d[-1] + 1)
    for v in d[1:-1]:
        if v:
            a /= (v + 1) ** 2
    return a


def r_w_quotient(w: Word) -> RationalFunctionQ:
    """r_w from its definition as a quotient of normalized row polynomials."""
    if not w.in_counting_set:
        raise ValueError(f"r_w needs a counting word (nonzero lead): {w}")
    wl, wr, wlr = truncations(w)
    num = Tbar(w.p, w) * Tbar(w.p, wlr)
    den = Tbar(w.p, wr) * Tbar(w.p, wl)
    return RationalFunctionQ(num, den)


def r_w_closed(w: Word) -> RationalFunctionQ:
    """r_w from the closed form 1 + alpha x^{len(w)-1}/(Tbar_{w_L} Tbar_{w_R})."""
    wl, wr, _ = truncations(w)
    den = Tbar(w.p, wl) * Tbar(w.p, wr)
    num = den + PolyQ.monomial(alpha_coefficient(w), len(w.digits) - 1)
    return RationalFunctionQ(num, den)


_LOG_CACHE: dict[tuple[int, tuple[int, ...], int], SeriesQ] = {}
_RW_Q_CACHE: dict[tuple[int, tuple[int, ...], int], SeriesQ] = {}


def log_rw_series(w: Word, order: int) -> SeriesQ:
    """log r_w as a series, from the closed form of r_w."""
    key = (w.p, w.digits, order)
    hit = _LOG_CACHE.get(key)
    if hit is None:
        wl, wr, _ = truncations(w)
        den = Tbar(w.p, wl) * Tbar(w.p, wr)
        num = den + PolyQ.monomial(alpha_coefficient(w), len(w.digits) - 1)
        s = SeriesQ.from_poly(num, order) / SeriesQ.from_poly(den, order)
        hit = s.log()
        _LOG_CACHE[key] = hit
    return hit


def _rw_series_from_quotient(w: Word, order: int) -> SeriesQ:
    """Series of r_w built from the defining quotient (no closed form used)."""
    key = (w.p, w.digits, order)
    hit = _RW_Q_CACHE.get(key)
    if hit is None:
        wl, wr, wlr = truncations(w)
        num = Tbar(w.p, w) * Tbar(w.p, wlr)
        den = Tbar(w.p, wr) * Tbar(w.p, wl)
        hit = SeriesQ.from_poly(num, order) / SeriesQ.from_poly(den, order)
        _RW_Q_CACHE[key] = hit
    return hit


@dataclass(frozen=True, slots=True)
class Monomial:
    """Product of X_w^k factors, stored sorted by the canonical word order."""

    factors: tuple[tuple[Word, int], ...]

    def __post_init__(self) -> None:
        seen: list[tuple[int, tuple[int, ...]]] = []
        for w, k in self.factors:
            if w.is_empty:
                raise ValueError("monomial factors need nonempty words")
            if k < 1:
                raise ValueError("monomial exponents must be >= 1")
            seen.append(w.sort_key())
        if seen != sorted(set(seen)):
            raise ValueError("monomial factors must be sorted and distinct")

    @classmethod
    def of(cls, pairs: Iterable[tuple[Word, int]]) -> "Monomial":
        return cls(tuple(sorted(pairs, key=lambda fk: fk[0].sort_key())))

    @property
    def is_constant(self) -> bool:
        return not self.factors

    @property
    def weight(self) -> int:
        return sum(k * (len(w.digits) - 1) for w, k in self.factors)

    def sort_key(self) -> tuple:
        """Total weight, then the factor-size partition (largest part first),
        then the factor words; reproduces the conventional display order."""
        shape: list[int] = []
        expanded: list[tuple[int, tuple[int, ...]]] = []
        for w, k in self.factors:
            shape.extend([len(w.digits) - 1] * k)
            expanded.extend([w.sort_key()] * k)
        shape.sort(reverse=True)
        return (self.weight, tuple(shape), tuple(expanded))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for w, k in self.factors:
            body = f"X[{w}]"
            parts.append(body if k == 1 else f"{body}^{k}")
        return "*".join(parts)


def monomials_up_to_weight(p: int, jmax: int) -> list[Monomial]:
    """All monomials of total weight <= jmax (constant included), in canonical
    order."""
    words = enumerate_admissible(p, jmax)
    wts = [len(w.digits) - 1 for w in words]
    out: list[Monomial] = []
    factors: list[tuple[Word, int]] = []

    def rec(idx: int, budget: int) -> None:
        out.append(Monomial(tuple(factors)))
        for i in range(idx, len(words)):
            wt = wts[i]
            if wt > budget:
                break
            for k in range(1, budget // wt + 1):
                factors.append((words[i], k))
                rec(i + 1, budget - k * wt)
                factors.pop()

    rec(0, jmax)
    out.sort(key=Monomial.sort_key)
    return out


def monomial_series(mono: Monomial, order: int) -> SeriesQ:
    """Coefficient series of a monomial: prod (log r_w)^k / k!.

    Coefficients below the total weight vanish; the order must reach the
    weight so the first nonzero coefficient is representable.
    """
    if order < mono.weight:
        raise ValueError(
            f"order {order} is below the monomial weight {mono.weight}"
        )
    s = SeriesQ.one(order)
    for w, k in mono.factors:
        ls = log_rw_series(w, order)
        for i in range(1, k + 1):
            s = (s * ls) / i
    return s


@dataclass
class BlockPolynomial:
    """Polynomial for one level j: maps factor counts to theta(j)/theta(0)."""

    p: int
    j: int
    terms: dict[Monomial, Fraction]

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def words(self) -> set[Word]:
        return {w for mono in self.terms for w, _ in mono.factors}

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, coeff in self.sorted_terms():
            mag = abs(coeff)
            if mono.is_constant:
                body = rational_to_str(mag)
            elif mag == 1:
                body = str(mono)
            else:
                body = f"{rational_to_str(mag)}*{mono}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def json_obj(self) -> dict:
        return {
            "p": self.p,
            "j": self.j,
            "terms": [
                {
                    "monomial": [
                        {"word": str(w), "exp": k} for w, k in mono.factors
                    ],
                    "coeff": rational_to_str(coeff),
                }
                for mono, coeff in self.sorted_terms()
            ],
        }

    def evaluate_counts(self, counts: dict[Word, int]) -> Fraction:
        """Substitute X_w = counts.get(w, 0) and evaluate exactly."""
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            prod = 1
            for w, k in mono.factors:
                c = counts.get(w, 0)
                if not c:
                    prod = 0
                    break
                prod *= c**k
            if prod:
                total += coeff * prod
        return total

    def evaluate(self, n: int) -> Fraction:
        """Evaluate at the factor counts of a row index n."""
        return self.evaluate_counts(counting_factor_counts(expand(n, self.p)))


_BLOCK_CACHE: dict[tuple[int, int], BlockPolynomial] = {}


def block_polynomials_up_to(p: int, jmax: int) -> list[BlockPolynomial]:
    """Build P_0 .. P_jmax in one shared pass over the monomial tree.

    The tree walk reuses the partial coefficient-series product of each
    monomial prefix, so every monomial costs one truncated series
    multiplication.
    """
    words = enumerate_admissible(p, jmax)
    logs = [log_rw_series(w, jmax) for w in words]
    wts = [len(w.digits) - 1 for w in words]
    tables: list[dict[Monomial, Fraction]] = [{} for _ in range(jmax + 1)]
    factors: list[tuple[Word, int]] = []

    def record(series: SeriesQ) -> None:
        mono = Monomial(tuple(factors))
        for j in range(mono.weight, jmax + 1):
            c = series.coeffs[j]
            if c:
                tables[j][mono] = c

    def rec(idx: int, budget: int, series: SeriesQ) -> None:
        record(series)
        for i in range(idx, len(words)):
            wt = wts[i]
            if wt > budget:
                break
            s = series
            for k in range(1, budget // wt + 1):
                s = (s * logs[i]) / k
                factors.append((words[i], k))
                rec(i + 1, budget - k * wt, s)
                factors.pop()

    rec(0, jmax, SeriesQ.one(jmax))
    out = []
    for j in range(jmax + 1):
        ordered = dict(sorted(tables[j].items(), key=lambda kv: kv[0].sort_key()))
        poly = BlockPolynomial(p, j, ordered)
        _BLOCK_CACHE[(p, j)] = poly
        out.append(poly)
    return out


def block_polynomial(p: int, j: int) -> BlockPolynomial:
    """P_j for one level (cached; builds all lower levels alongside)."""
    if j < 0:
        raise ValueError("level must be >= 0")
    hit = _BLOCK_CACHE.get((p, j))
    if hit is None:
        hit = block_polynomials_up_to(p, j)[j]
    return hit


def cumulative_polynomial(p: int, j: int) -> BlockPolynomial:
    """P'_j = P_0 + ... + P_{j-1}: the share of entries with valuation < j."""
    if j < 1:
        raise ValueError("cumulative level must be >= 1")
    merged: dict[Monomial, Fraction] = {}
    for i in range(j):
        for mono, c in block_polynomial(p, i).terms.items():
            acc = merged.get(mono, Fraction(0)) + c
            if acc:
                merged[mono] = acc
            else:
                merged.pop(mono, None)
    ordered = dict(sorted(merged.items(), key=lambda kv: kv[0].sort_key()))
    return BlockPolynomial(p, j, ordered)


def telescope_identity_holds(v: Word, order: int) -> bool:
    """Check Tbar_v = prod over counting factors w of r_w^{|v|_w} as series.

    The right side multiplies quotient-built r_w series (the closed form is
    not used), so this verifies the telescoping product independently.
    """
    if not (v.is_empty or v.in_counting_set):
        raise ValueError("telescope check needs a counting word or eps")
    rhs = SeriesQ.one(order)
    counts = counting_factor_counts(v)
    for w in sorted(counts, key=Word.sort_key):
        rs = _rw_series_from_quotient(w, order)
        for _ in range(counts[w]):
            rhs = rhs * rs
    lhs = SeriesQ.from_poly(Tbar(v.p, v), order)
    return lhs == rhs


def telescope_random_check(
    p: int, count: int, max_len: int, order: int, seed: int
) -> tuple[int, list[Word]]:
    """Run the telescope check on seeded random counting words.

    Returns (number checked, failing words).
    """
    rng = random.Random(seed)
    failures: list[Word] = []
    for _ in range(count):
        length = rng.randint(1, max_len)
        digits = [rng.randint(1, p - 1)]
        digits.extend(rng.randint(0, p - 1) for _ in range(length - 1))
        v = Word(p, tuple(digits))
        if not telescope_identity_holds(v, order):
            failures.append(v)
    return count, failures


# ---------------------------------------------------------------------------
# Exhaustive closed-form consistency scan.
#
# Cross-multiplying r_w_closed == r_w_quotient and clearing the (equal)
# normalizing constants theta0(w) theta0(w_LR) = theta0(w_L) theta0(w_R)
# leaves an identity between integer row polynomials:
#
#     T_w T_{w_LR} - T_{w_L} T_{w_R} = theta0(w) theta0(w_LR) alpha_w x^{mu-1}.
#
# The scan walks the digit trie of counting words once, carrying the pairs
# (T_u, T_{u-1}) for the prefix u and its suffix u_L, so each word costs a
# constant number of polynomial operations.  Polynomials ride in single
# integers with 64-bit coefficient lanes (coefficients stay below 2^46 for
# base 5, length 9), which makes products one machine bigint multiply.
# ---------------------------------------------------------------------------

_LANE = 64


def _ext_pair(pair: tuple[int, int], tz: int, a: int, p: int) -> tuple[int, int]:
    """Extend packed (T_n, T_{n-1}) for a prefix with tz trailing zeros by
    digit a, giving (T_{pn+a}, T_{pn+a-1})."""
    tn, tn1 = pair
    sh = _LANE * (tz + 1)
    if a == 0:
        return tn + (((p - 1) * tn1) << sh), p * tn1
    return (
        (a + 1) * tn + (((p - a - 1) * tn1) << sh),
        a * tn + (((p - a) * tn1) << sh),
    )


def rw_identity_scan(p: int, max_len: int) -> tuple[int, list[Word]]:
    """Verify closed form == quotient for every admissible word of length
    <= max_len; returns (words checked, mismatching words)."""
    failures: list[Word] = []
    checked = 0
    digits: list[int] = []

    def rec(depth, pair, tz, cf, lpair, cl):
        nonlocal checked
        if depth == max_len:
            return
        for a in range(p):
            child_pair = _ext_pair(pair, tz, a, p)
            if lpair is None:
                child_l = None if a == 0 else (a + 1, a)
                child_cl = 1 if a == 0 else a + 1
            else:
                child_l = _ext_pair(lpair, tz, a, p)
                child_cl = cl * (a + 1)
            if a != p - 1:
                checked += 1
                c_w = cf * (a + 1)
                c_wlr = cl if lpair is not None else 1
                d0 = digits[0]
                anum = p ** (depth - 1) * d0 * (p - 1 - a)
                aden = (d0 + 1) * (a + 1)
                for v in digits[1:]:
                    if v:
                        aden *= (v + 1) ** 2
                expected = Fraction(c_w * c_wlr * anum, aden)
                ok = expected.denominator == 1
                if ok:
                    lhs = child_pair[0] * (lpair[0] if lpair is not None else 1)
                    rhs = (child_l[0] if child_l is not None else 1) * pair[0]
                    ok = lhs == rhs + (int(expected) << (_LANE * depth))
                if not ok:
                    failures.append(Word(p, tuple(digits) + (a,)))
            digits.append(a)
            rec(
                depth + 1,
                child_pair,
                tz + 1 if a == 0 else 0,
                cf * (a + 1),
                child_l,
                child_cl,
            )
            digits.pop()

    for c in range(1, p):
        digits.append(c)
        rec(1, (c + 1, c), 0, c + 1, None, 1)
        digits.pop()
    return checked, failures
