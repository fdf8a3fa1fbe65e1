import pytest
from hypothesis import given, settings, strategies as st

from em_lab.errors import DivisibilityError, NotInvertibleAsSeries, TruncationRequired, UniverseError
from em_lab.qpoly import (DegreeCap, Poly, PolyRing, complete_homogeneous, double_pochhammer,
                          expand_rational, pochhammer, poly_arith, q_analogue, q_binomial,
                          q_factorial)

R = PolyRing("q", "x")
q, x = R.gens()
Q = PolyRing("q")
qq = Q.gen("q")
QPZ = PolyRing("q", "p", "z")
q3, p3, z3 = QPZ.gens()


def small_polys(ring=R):
    term = st.tuples(st.integers(0, 3), st.integers(0, 3))
    return st.dictionaries(term, st.integers(-5, 5), max_size=5).map(lambda d: Poly(ring.vars, d))


class TestArithmetic:
    def test_difference_of_squares(self):
        assert poly_arith(1 + qq, 1 - qq, "mul") == 1 - qq ** 2

    def test_additive_identity(self):
        assert poly_arith(1 + qq, Q.zero, "add") == 1 + qq

    def test_scalar_exact_div(self):
        assert poly_arith(3 + 3 * qq, Q(3), "exact_div") == 1 + qq

    def test_exact_div_remainder(self):
        with pytest.raises(DivisibilityError):
            (1 + qq ** 2).exact_div(1 + qq)
        with pytest.raises(DivisibilityError):
            (1 + qq).exact_div(Q(2))

    def test_universe_mismatch_is_an_error(self):
        with pytest.raises(UniverseError):
            _ = qq + x

    def test_no_zero_coefficients_stored(self):
        p = Poly(("q",), {(1,): 2, (2,): 0})
        assert dict(p.terms) == {(1,): 2}
        assert (qq - qq).is_zero()

    def test_canonical_text(self):
        assert str(1 + 2 * q + q ** 2 * x) == "1 + 2*q + q^2*x"
        assert str(R.zero) == "0"
        assert str(-q + 1) == "1 - q"

    def test_json_round_trip_and_schema(self):
        p = 1 + 2 * q + q ** 2 * x
        assert p.to_json_obj() == {"vars": ["q", "x"], "terms": [
            {"c": "1", "e": [0, 0]}, {"c": "2", "e": [1, 0]}, {"c": "1", "e": [2, 1]}]}
        assert Poly.from_json(p.to_json()) == p

    def test_big_coefficients_stay_exact(self):
        big = (1 + qq) ** 200
        assert big[(100,)] == __import__("math").comb(200, 100)

    @settings(max_examples=60, deadline=None)
    @given(small_polys(), small_polys(), small_polys())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=60, deadline=None)
    @given(small_polys(), small_polys())
    def test_exact_div_inverts_mul(self, a, b):
        if not b.is_zero():
            assert (a * b).exact_div(b) == a

    @settings(max_examples=40, deadline=None)
    @given(small_polys(), st.integers(0, 3), st.integers(0, 3))
    def test_truncate_idempotent(self, a, dq, dx):
        cap = DegreeCap(q=dq, x=dx)
        assert a.truncate(cap).truncate(cap) == a.truncate(cap)


class TestQNumbers:
    def test_q_analogue(self):
        assert q_analogue(0, qq).is_zero()
        assert q_analogue(3, qq) == 1 + qq + qq ** 2
        assert q_analogue(2, x) == 1 + x

    def test_q_factorial(self):
        assert q_factorial(0, qq) == 1
        assert q_factorial(3, qq) == 1 + 2 * qq + 2 * qq ** 2 + qq ** 3
        P = PolyRing("p")
        assert q_factorial(2, P.gen("p")) == 1 + P.gen("p")

    def test_q_binomial(self):
        assert q_binomial(4, 2, qq) == 1 + qq + 2 * qq ** 2 + qq ** 3 + qq ** 4
        assert q_binomial(5, 0, qq) == 1
        assert q_binomial(2, 3, qq).is_zero()

    @pytest.mark.parametrize("n", range(7))
    def test_q_binomial_matches_factorial_quotient(self, n):
        for k in range(n + 1):
            lhs = q_binomial(n, k, qq) * q_factorial(k, qq) * q_factorial(n - k, qq)
            assert lhs == q_factorial(n, qq)

    def test_q_analogue_at_power_base(self):
        # [3]_{q^2}
        assert q_analogue(3, qq ** 2) == 1 + qq ** 2 + qq ** 4


class TestPochhammer:
    def test_empty(self):
        assert pochhammer(x, q, 0) == 1

    def test_two_factors(self):
        assert pochhammer(x, q, 2) == (1 - x) * (1 - x * q)

    def test_single_factor_monomial(self):
        assert pochhammer(z3 * q3 * p3, q3 ** 2, 1) == 1 - z3 * q3 * p3

    def test_double_single_factor(self):
        assert double_pochhammer(z3, q3, p3, 1, 1) == 1 - z3

    def test_double_finite_with_cap(self):
        got = double_pochhammer(z3, q3, p3, 2, 1, DegreeCap(z=2))
        assert got == 1 - z3 - z3 * q3 + z3 ** 2 * q3

    def test_double_unbounded(self):
        got = double_pochhammer(z3, q3, p3, None, None, DegreeCap(q=1, p=1, z=1))
        assert got == 1 - z3 - z3 * q3 - z3 * p3 - z3 * q3 * p3

    def test_unbounded_needs_cap(self):
        with pytest.raises(TruncationRequired):
            double_pochhammer(z3, q3, p3, None, 2, DegreeCap(z=3))


class TestSeries:
    def test_geometric_product(self):
        got = expand_rational(R.one, [1 - x, 1 - x * q], "x", 2)
        assert got == 1 + (1 + q) * x + (1 + q + q ** 2) * x ** 2

    def test_carlitz_cross_check(self):
        got = expand_rational(1 + x * q, [1 - x, 1 - x * q, 1 - x * q ** 2], "x", 1)
        assert got == 1 + (1 + 2 * q + q ** 2) * x

    def test_zero_numerator(self):
        assert expand_rational(R.zero, [1 - x], "x", 5).is_zero()

    def test_bad_constant_term(self):
        with pytest.raises(NotInvertibleAsSeries):
            expand_rational(R.one, [2 - x], "x", 3)

    def test_non_monomial_factor(self):
        # 1/(1 + x + x^2) = (1 - x)/(1 - x^3)
        got = expand_rational(R.one, [1 + x + x ** 2], "x", 6)
        assert got == expand_rational(1 - x, [1 - x ** 3], "x", 6)

    @pytest.mark.parametrize("n", range(6))
    def test_gaussian_binomial_coefficients(self, n):
        M = 8
        s = expand_rational(R.one, [1 - x * q ** i for i in range(n + 1)], "x", M)
        for m in range(M + 1):
            assert s.coefficient("x", m) == q_binomial(m + n, n, q)

    @pytest.mark.parametrize("n", range(5))
    def test_pochhammer_times_inverse(self, n):
        M = 6
        s = expand_rational(R.one, [1 - x * q ** i for i in range(n)], "x", M)
        assert (pochhammer(x, q, n) * s).truncate(DegreeCap(x=M)) == 1


class TestCompleteHomogeneous:
    def test_two_letters(self):
        assert complete_homogeneous([Q.one, qq], 2) == 1 + qq + qq ** 2

    def test_degree_zero(self):
        assert complete_homogeneous([qq, qq ** 3], 0) == 1

    def test_empty_alphabet(self):
        assert complete_homogeneous([], 1, ("q",)).is_zero()

    @pytest.mark.parametrize("k,l", [(1, 1), (2, 1), (2, 3), (3, 3)])
    def test_matches_double_pochhammer_inverse(self, k, l):
        N = 4
        alphabet = [q3 ** i * p3 ** j for i in range(k) for j in range(l)]
        inv = expand_rational(QPZ.one, [double_pochhammer(z3, q3, p3, k, l)], "z", N)
        for n in range(N + 1):
            assert complete_homogeneous(alphabet, n, QPZ.vars) == inv.coefficient("z", n)
