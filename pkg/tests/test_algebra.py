from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffauto.algebra import (
    BOTTOM,
    DiffPolynomial,
    DiffVar,
    compare_monomials,
    deg,
    deg_w,
    derive,
    derive_op,
    leader,
    leading_part,
    limits,
    make_monomial,
    multidegree,
    substitute,
)
from diffauto.errors import DomainError, ParameterError, ResourceError
from diffauto.expr import parse_poly

from conftest import polys


def P(text, m=2, names=("x", "y")):
    return parse_poly(text, m, names)


def gen(var, *op):
    return DiffVar(var, tuple(op))


# -- examples -------------------------------------------------------------------


class TestAdd:
    def test_additive_inverse(self):
        assert P("x") + (-P("x")) == 0

    def test_two_terms(self):
        s = P("x") + P("y")
        assert len(s) == 2
        assert str(s) == "x + y"

    def test_cancellation(self):
        assert (P("x_(1,0) - y_(0,1)") + P("y_(0,1)")) == P("x_(1,0)")

    def test_ambient_mismatch(self):
        with pytest.raises(ParameterError):
            P("x", m=1) + P("x", m=2)


class TestMul:
    def test_unit(self):
        assert P("x") * 1 == P("x")
        assert P("x") * DiffPolynomial.one(2, 2) == P("x")

    def test_square(self):
        sq = P("x") * P("x")
        assert sq.terms == {((gen(0, 0, 0), 2),): 1}

    def test_square_of_binomial_against_distributivity(self):
        a, b = P("x_(1,0)"), P("y_(0,1)")
        # brute-force distributivity: (a - b)(a - b) = aa - ab - ba + bb
        expected = a * a - a * b - b * a + b * b
        got = (a - b) * (a - b)
        assert got == expected
        assert got.terms == {
            ((gen(0, 1, 0), 2),): 1,
            make_monomial([(gen(0, 1, 0), 1), (gen(1, 0, 1), 1)]): -2,
            ((gen(1, 0, 1), 2),): 1,
        }

    def test_degree_guard(self):
        with limits(max_degree=5):
            with pytest.raises(ResourceError):
                P("x^3") * P("y^3")
            assert (P("x^2") * P("y^3")).deg() == 5


class TestDerive:
    def test_generator(self):
        assert derive(P("x"), 0) == P("x_(1,0)")

    def test_leibniz_example(self):
        assert derive(P("x*y", m=1), 0) == P("x_(1)*y + x*y_(1)", m=1)

    def test_commuting(self):
        x = P("x")
        assert derive(derive(x, 0), 1) == derive(derive(x, 1), 0) == P("x_(1,1)")

    def test_constants_are_killed(self):
        assert derive(P("5"), 0) == 0

    def test_bad_index(self):
        with pytest.raises(ParameterError):
            derive(P("x"), 2)

    def test_derive_op(self):
        assert derive_op(P("y"), (0, 2)) == P("y_(0,2)")
        p = P("x*y + 3*x_(1,0)")
        assert derive_op(p, (0, 0)) == p
        assert derive_op(P("x*y"), (1, 0)) == P("x_(1,0)*y + x*y_(1,0)")


class TestGrading:
    def test_multidegree(self):
        assert multidegree(((gen(0, 1, 1), 1),), 2, 2) == (1, 0, 1, 1)
        assert multidegree((), 2, 2) == (0, 0, 0, 0)
        mono = make_monomial([(gen(0, 0, 0), 1), (gen(1, 0, 1), 1)])
        assert multidegree(mono, 2, 2) == (1, 1, 0, 1)

    def test_deg(self):
        assert deg(P("x_(2,0) - y_(1,1)")) == 3
        assert deg(P("5")) == 0
        assert deg(P("0")) is BOTTOM

    def test_bottom(self):
        assert BOTTOM < 0 and BOTTOM < -10
        assert BOTTOM + 3 is BOTTOM and 3 + BOTTOM is BOTTOM
        assert max(BOTTOM, 2) == 2

    def test_deg_w(self):
        assert deg_w(P("x*y"), (1, 1, 0, 0)) == 2
        assert deg_w(P("x_(1,1)"), (1, 1, 1, 1)) == 3
        assert deg_w(P("x_(1,1)"), (3, 3, 1, 1)) == 5
        with pytest.raises(ParameterError):
            deg_w(P("x"), (1, 1))

    def test_leading_part(self):
        assert leading_part(P("x + x_(1,1) - y_(0,2)")) == P("x_(1,1) - y_(0,2)")
        assert leading_part(P("7/3"), (2, 5, 1, 1)) == P("7/3")
        assert leading_part(P("x^2 + x")) == P("x^2")
        with pytest.raises(DomainError):
            leading_part(P("0"))


class TestSubstitute:
    def test_derivative_of_target(self):
        g = P("z_(1,0)", names=("z",))
        assert substitute(g, [P("x*y")]) == P("x_(1,0)*y + x*y_(1,0)")

    def test_sum(self):
        g = P("z1 + z2", names=("z1", "z2"))
        assert substitute(g, [P("x"), P("y")]) == P("x + y")

    def test_product(self):
        g = P("z_(1,0)*z", names=("z",))
        assert substitute(g, [P("y")]) == P("y_(1,0)*y")

    def test_arity(self):
        with pytest.raises(ParameterError):
            substitute(P("z1 + z2", names=("z1", "z2")), [P("x")])

    def test_m_mismatch(self):
        with pytest.raises(ParameterError):
            substitute(P("z", m=1, names=("z",)), [P("x", m=2)])


class TestOrder:
    def test_degree_first(self):
        x, x2 = P("x").sorted_terms()[0][0], P("x^2").sorted_terms()[0][0]
        assert compare_monomials(x, x2, 2, 2) == -1
        assert compare_monomials(x2, x2, 2, 2) == 0

    def test_lex_on_multidegree(self):
        # alpha(x^{d2}) = (1,0,0,1) < alpha(x^{d1}) = (1,0,1,0)
        xd2, xd1 = ((gen(0, 0, 1), 1),), ((gen(0, 1, 0), 1),)
        assert compare_monomials(xd2, xd1, 2, 2) == -1

    def test_x_beats_y(self):
        assert compare_monomials(((gen(1, 0, 0), 1),), ((gen(0, 0, 0), 1),), 2, 2) == -1

    def test_tie_on_multidegree_broken_by_factors(self):
        a = make_monomial([(gen(0, 1), 1), (gen(1, 0), 1)])  # x^{d1} y
        b = make_monomial([(gen(0, 0), 1), (gen(1, 1), 1)])  # x y^{d1}
        assert multidegree(a, 2, 1) == multidegree(b, 2, 1)
        assert compare_monomials(a, b, 2, 1) == 1


class TestLeader:
    def test_by_enumeration(self):
        # enumerate the generators of p and take the max in the (deg, alpha-lex) order
        p = P("x + y^2")
        gens = sorted(p.generators(), key=lambda g: (1 + sum(g.op), multidegree(((g, 1),), 2, 2)))
        assert leader(p) == gens[-1] == gen(0, 0, 0)

    def test_single_generator(self):
        assert leader(P("x_(1,0)")) == gen(0, 1, 0)

    def test_ordered_pair(self):
        # both degree 2; alpha = (1,0,1,0) for x^{d1} beats (0,1,0,1) for y^{d2}
        assert leader(P("x_(1,0) + y_(0,1)")) == gen(0, 1, 0)
        assert leader(P("y_(0,2) + x_(1,0)")) == gen(1, 0, 2)

    def test_constant(self):
        with pytest.raises(DomainError):
            leader(P("3"))


# -- properties -------------------------------------------------------------------

M = st.integers(1, 2)


@settings(max_examples=1000)
@given(st.data())
def test_ring_laws(data):
    m = data.draw(M)
    p, q, r = (data.draw(polys(m, max_deg=2)) for _ in range(3))
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=300)
@given(st.data())
def test_leibniz_and_commutation(data):
    m = data.draw(M)
    p, q = data.draw(polys(m)), data.draw(polys(m))
    i, j = data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, m - 1))
    assert derive(p * q, i) == derive(p, i) * q + p * derive(q, i)
    assert derive(derive(p, i), j) == derive(derive(p, j), i)


@settings(max_examples=300)
@given(st.data())
def test_grading_is_additive(data):
    m = data.draw(M)
    p = data.draw(polys(m).filter(bool))
    q = data.draw(polys(m).filter(bool))
    w = data.draw(st.tuples(*[st.integers(-2, 3)] * (2 + m)))
    assert deg(p * q) == deg(p) + deg(q)
    assert deg_w(p * q, w) == deg_w(p, w) + deg_w(q, w)
    assert leading_part(p * q, w) == leading_part(p, w) * leading_part(q, w)
    for a, b in product(p.terms, q.terms):
        prod = (DiffPolynomial.from_monomial(2, m, a) * DiffPolynomial.from_monomial(2, m, b))
        (mono,) = prod.terms
        assert multidegree(mono, 2, m) == tuple(u + v for u, v in zip(multidegree(a, 2, m), multidegree(b, 2, m)))


@settings(max_examples=200)
@given(st.data())
def test_substitute_is_a_differential_homomorphism(data):
    m = data.draw(M)
    g1 = data.draw(polys(m, max_deg=3))
    g2 = data.draw(polys(m, max_deg=3))
    F = [data.draw(polys(m, max_terms=3, max_deg=2)) for _ in range(2)]
    i = data.draw(st.integers(0, m - 1))
    assert substitute(g1 + g2, F) == substitute(g1, F) + substitute(g2, F)
    assert substitute(g1 * g2, F) == substitute(g1, F) * substitute(g2, F)
    assert substitute(derive(g1, i), F) == derive(substitute(g1, F), i)


@settings(max_examples=300)
@given(st.data())
def test_leading_part_of_composite(data):
    m = data.draw(M)
    f = data.draw(polys(m, max_deg=3).filter(lambda p: not p.is_constant()))
    g = data.draw(polys(m, n=1, max_deg=3).filter(bool))
    lhs = leading_part(substitute(g, [f]))
    g_tilde = leading_part(g, (deg(f),) + (1,) * m)
    assert lhs == substitute(g_tilde, [leading_part(f)])


def test_fraction_coefficients_stay_reduced():
    p = P("2/4*x + 3/6*y")
    assert all(c.denominator == 2 for c in p.terms.values())
    assert p.coefficient(((gen(0, 0, 0), 1),)) == Fraction(1, 2)
