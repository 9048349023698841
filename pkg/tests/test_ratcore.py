"""Exact arithmetic layer: polynomials, truncated series, rational functions."""

import random
from fractions import Fraction

import pytest

from ppk.ratcore import (
    PolyQ,
    RationalFunctionQ,
    SeriesQ,
    poly_gcd,
    rational_from_str,
    rational_to_str,
    squarefree_decomposition,
)


def rand_poly(rng, degree, scale=9):
    return PolyQ(
        [Fraction(rng.randint(-scale, scale), rng.randint(1, scale)) for _ in range(degree + 1)]
    )


class TestRationalStrings:
    def test_round_trip(self):
        rng = random.Random(1)
        for _ in range(200):
            q = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            assert rational_from_str(rational_to_str(q)) == q

    def test_integer_form_drops_denominator(self):
        assert rational_to_str(Fraction(-6, 3)) == "-2"
        assert rational_to_str(Fraction(7, 2)) == "7/2"
        assert rational_to_str(3) == "3"


class TestPolyQ:
    def test_trailing_zeros_dropped(self):
        assert PolyQ([1, 2, 0, 0]).coeffs == (1, 2)
        assert PolyQ([0, 0]).is_zero
        assert PolyQ().degree == -1

    def test_ring_identities(self):
        rng = random.Random(2)
        for _ in range(40):
            a = rand_poly(rng, rng.randint(0, 6))
            b = rand_poly(rng, rng.randint(0, 6))
            c = rand_poly(rng, rng.randint(0, 6))
            assert (a + b) * c == a * c + b * c
            assert a * b == b * a
            assert a - a == PolyQ()

    def test_divmod_invariant(self):
        rng = random.Random(3)
        for _ in range(60):
            a = rand_poly(rng, rng.randint(0, 8))
            b = rand_poly(rng, rng.randint(0, 4))
            if b.is_zero:
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.degree < b.degree

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            divmod(PolyQ([1]), PolyQ())

    def test_evaluation_is_horner(self):
        f = PolyQ([3, 0, -2, 1])
        # 3 - 2x^2 + x^3 at x = 5/2
        assert f(Fraction(5, 2)) == 3 - 2 * Fraction(25, 4) + Fraction(125, 8)

    def test_derivative_product_rule(self):
        rng = random.Random(4)
        for _ in range(30):
            a = rand_poly(rng, rng.randint(0, 5))
            b = rand_poly(rng, rng.randint(0, 5))
            assert (a * b).derivative() == a.derivative() * b + a * b.derivative()

    def test_text_rendering(self):
        assert PolyQ([2, 1, 2, 4]).text() == "2 + x + 2x^2 + 4x^3"
        assert PolyQ([1, Fraction(1, 2), 1]).text() == "1 + 1/2*x + x^2"
        assert PolyQ([0, -1, 0, Fraction(-3, 4)]).text() == "-x - 3/4*x^3"
        assert PolyQ().text() == "0"

    def test_monomial_and_constant(self):
        assert PolyQ.monomial(5, 3) == PolyQ([0, 0, 0, 5])
        assert PolyQ.constant(Fraction(1, 3))(10) == Fraction(1, 3)
        with pytest.raises(ValueError):
            PolyQ.monomial(1, -1)


class TestGcdAndSquarefree:
    def test_gcd_of_common_factor(self):
        rng = random.Random(5)
        for _ in range(25):
            f = rand_poly(rng, rng.randint(1, 3))
            g = rand_poly(rng, rng.randint(0, 3))
            h = rand_poly(rng, rng.randint(0, 3))
            if f.is_zero or g.is_zero or h.is_zero:
                continue
            d = poly_gcd(f * g, f * h)
            # d is monic and divisible by the monic part of f
            assert d.coeffs[-1] == 1
            assert (d % f.monic()).is_zero

    def test_gcd_zero_cases(self):
        f = PolyQ([1, 2])
        assert poly_gcd(f, PolyQ()) == f.monic()
        assert poly_gcd(PolyQ(), PolyQ()).is_zero

    def test_squarefree_reconstruction(self):
        rng = random.Random(6)
        for _ in range(25):
            # build from distinct monic linear factors with multiplicities
            roots = rng.sample(range(-6, 7), rng.randint(1, 4))
            mults = [rng.randint(1, 3) for _ in roots]
            f = PolyQ([rng.randint(1, 5)])
            for root, m in zip(roots, mults):
                lin = PolyQ([-root, 1])
                for _ in range(m):
                    f = f * lin
            parts = squarefree_decomposition(f)
            rebuilt = PolyQ([f.coeffs[-1]])
            for g, i in parts:
                for _ in range(i):
                    rebuilt = rebuilt * g
            assert rebuilt == f
            assert sorted(i for _, i in parts) == sorted(set(mults))
            for g, _ in parts:
                assert poly_gcd(g, g.derivative()).degree == 0


class TestSeriesQ:
    def test_order_mismatch_raises(self):
        a = SeriesQ.one(4)
        b = SeriesQ.one(5)
        for op in (lambda: a + b, lambda: a - b, lambda: a * b, lambda: a / b):
            with pytest.raises(ValueError):
                op()

    def test_construction_validates_length(self):
        with pytest.raises(ValueError):
            SeriesQ(3, (1, 2))
        with pytest.raises(ValueError):
            SeriesQ(-1, ())

    def test_division_round_trip(self):
        rng = random.Random(7)
        for _ in range(30):
            n = rng.randint(0, 8)
            a = SeriesQ(n, [rng.randint(-9, 9) for _ in range(n + 1)])
            b_coeffs = [1] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
            b = SeriesQ(n, b_coeffs)
            assert (a / b) * b == a

    def test_division_needs_unit(self):
        with pytest.raises(ZeroDivisionError):
            SeriesQ.one(3) / SeriesQ.zero(3)

    def test_log_exp_round_trip(self):
        rng = random.Random(8)
        for _ in range(25):
            n = rng.randint(1, 10)
            coeffs = [1] + [Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(n)]
            u = SeriesQ(n, coeffs)
            assert u.log().exp() == u
            v = SeriesQ(n, [0] + list(coeffs[1:]))
            assert v.exp().log() == v

    def test_log_turns_products_into_sums(self):
        rng = random.Random(9)
        for _ in range(20):
            n = rng.randint(1, 9)
            mk = lambda: SeriesQ(
                n, [1] + [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(n)]
            )
            u, v = mk(), mk()
            assert (u * v).log() == u.log() + v.log()

    def test_log_golden(self):
        # log(1 + x/2) = x/2 - x^2/8 + x^3/24 - x^4/64 + ...
        s = SeriesQ(4, (1, Fraction(1, 2), 0, 0, 0)).log()
        assert s.coeffs == (
            0,
            Fraction(1, 2),
            Fraction(-1, 8),
            Fraction(1, 24),
            Fraction(-1, 64),
        )

    def test_domain_guards(self):
        with pytest.raises(ValueError):
            SeriesQ(2, (2, 0, 0)).log()
        with pytest.raises(ValueError):
            SeriesQ(2, (1, 0, 0)).exp()

    def test_from_poly_pads_and_truncates(self):
        f = PolyQ([1, 2, 3])
        assert SeriesQ.from_poly(f, 4).coeffs == (1, 2, 3, 0, 0)
        assert SeriesQ.from_poly(f, 1).coeffs == (1, 2)

    def test_json_round_trip(self):
        s = SeriesQ(3, (1, Fraction(-1, 2), 0, Fraction(5, 3)))
        assert SeriesQ.from_json(s.to_json()) == s
        assert s.to_json() == ["1", "-1/2", "0", "5/3"]


class TestRationalFunctionQ:
    def test_canonical_form(self):
        # common factor and rational scaling are both removed
        a = RationalFunctionQ(PolyQ([2, 2]), PolyQ([4, 2]))
        b = RationalFunctionQ(PolyQ([Fraction(1, 2), Fraction(1, 2)]), PolyQ([1, Fraction(1, 2)]))
        assert a == b
        assert a.num == PolyQ([1, 1])
        assert a.den == PolyQ([2, 1])

    def test_gcd_cancellation(self):
        common = PolyQ([1, 3, 1])
        a = RationalFunctionQ(common * PolyQ([1, 1]), common * PolyQ([2, 5]))
        assert a == RationalFunctionQ(PolyQ([1, 1]), PolyQ([2, 5]))

    def test_denominator_constant_sign(self):
        a = RationalFunctionQ(PolyQ([1]), PolyQ([-2, 1]))
        assert a.den(0) > 0
        assert a.eval(0) == Fraction(-1, 2)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValueError):
            RationalFunctionQ(PolyQ([1]), PolyQ())
        with pytest.raises(ValueError):
            RationalFunctionQ(PolyQ([1]), PolyQ([0, 1]))

    def test_mul_div_eval(self):
        rng = random.Random(10)
        for _ in range(25):
            a = RationalFunctionQ(rand_poly(rng, 2) + 1, rand_poly(rng, 2) * PolyQ([0, 1]) + 1)
            b = RationalFunctionQ(rand_poly(rng, 2) + 1, rand_poly(rng, 2) * PolyQ([0, 1]) + 1)
            x = Fraction(rng.randint(1, 5), rng.randint(6, 9))
            try:
                lhs = (a * b).eval(x)
                rhs = a.eval(x) * b.eval(x)
            except ZeroDivisionError:
                continue
            assert lhs == rhs

    def test_series_agrees_with_eval_structure(self):
        f = RationalFunctionQ(PolyQ([1]), PolyQ([1, -1]))
        # geometric series 1/(1 - x)
        assert f.series(5).coeffs == (1, 1, 1, 1, 1, 1)

    def test_zero_function(self):
        z = RationalFunctionQ(PolyQ(), PolyQ([3, 1]))
        assert z.num.is_zero
        assert z.den == PolyQ([1])
