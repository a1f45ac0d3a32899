from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from qbfalg.errors import NotInIdeal, ParseError, UnassignedVariable
from qbfalg.poly import (Monomial, Polynomial, ZERO, add, evaluate, express_in_ideal, format_poly,
                         ind_rho, indicator, mul, multilinearize, parse_poly, poly_sum,
                         reduce_boolean, restrict, scale, split_on, twin, var)
from qbfalg.qbf import Qbf, axiom_poly

P = parse_poly


def test_add_inverse_is_empty():
    assert add(var(1), -var(1)) == ZERO
    assert len(add(var(1), -var(1))) == 0


def test_mul_distributes():
    assert mul(var(1) + twin(2), var(1)) == P("x1^2 + x1*~x2")


def test_scale():
    assert scale(P("2*x1 - 3"), Fraction(1, 2)) == P("x1 - 3/2")


def test_evaluate_examples():
    assert evaluate(P("x1*~x2"), {1: 1, 2: 0}) == 1
    assert evaluate(P("1 - 2*x1"), {1: 1}) == -1
    assert evaluate(P("-x1 - x2 - x3 + 5/4"), {1: 1, 2: 1, 3: 0}) == Fraction(-3, 4)


def test_evaluate_missing_variable():
    with pytest.raises(UnassignedVariable):
        evaluate(var(3), {1: 0})


def test_restrict_examples():
    assert restrict(P("x1*~x3 + ~x2"), 3, 0) == P("x1 + ~x2")
    assert restrict(P("1 - 2*x3"), 3, 1) == Polynomial.const(-1)
    q = P("x1*x2 + 3")
    assert restrict(q, 5, 1) == q


def test_indicator_examples():
    assert Polynomial.monomial(indicator({1: 1, 2: 0})) == P("x1*~x2")
    assert indicator({}) == Monomial(())
    alpha = {1: 1, 2: 0}
    for bits in product((0, 1), repeat=2):
        beta = dict(zip((1, 2), bits))
        expect = 1 if beta == alpha else 0
        assert evaluate(Polynomial.monomial(indicator(alpha)), beta) == expect


def test_ind_rho_examples():
    assert ind_rho({3: 0}) == P("1 - x3")
    assert ind_rho({1: 1, 3: 0}) == P("x1 - x1*x3")
    assert ind_rho({}) == Polynomial.const(1)


def _check_expression(r, phi, mult):
    total = poly_sum(q * axiom_poly(phi, k) for k, q in mult.items())
    assert total == r


def test_express_in_ideal_examples():
    phi = Qbf.build([("e", 1), ("a", 2)], [(1, 2)])
    r = var(1) * twin(1)
    mult = express_in_ideal(r, phi)
    _check_expression(r, phi, mult)
    from qbfalg.qbf import bool_ax, twin_ax
    assert mult == {bool_ax(1): Polynomial.const(-1), twin_ax(1): var(1)}
    assert express_in_ideal(ZERO, phi) == {}
    assert express_in_ideal(P("~x2 - 1 + x2"), phi) == {twin_ax(2): Polynomial.const(1)}


def test_express_in_ideal_rejects_nonvanishing():
    phi = Qbf.build([("e", 1)], [(1,)])
    with pytest.raises(NotInIdeal):
        express_in_ideal(Polynomial.const(1), phi)


def test_format_parse_round_trip_and_order():
    p = P("3*x2*~x1 + x1^2 - 1/2 + ~x3")
    assert P(format_poly(p)) == p
    assert format_poly(p) == format_poly(P(format_poly(p)))
    with pytest.raises(ParseError):
        P("x1 + * 2")


# property tests -------------------------------------------------------------------------

VARS = (1, 2, 3, 4)


@st.composite
def polys(draw, max_terms=4, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        keys = draw(st.lists(st.tuples(st.sampled_from(VARS), st.booleans(), st.integers(1, 2)),
                             max_size=max_deg))
        exps = {}
        for v, tw, e in keys:
            k = 2 * v + int(tw)
            exps[k] = exps.get(k, 0) + e
        m = Monomial(sorted(exps.items()))
        terms[m] = terms.get(m, 0) + Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return Polynomial(terms)


ASSIGN = [dict(zip(VARS, bits)) for bits in product((0, 1), repeat=len(VARS))]


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_evaluation_is_a_ring_homomorphism(p, q):
    for a in ASSIGN:
        assert evaluate(p + q, a) == evaluate(p, a) + evaluate(q, a)
        assert evaluate(p * q, a) == evaluate(p, a) * evaluate(q, a)


@settings(max_examples=60, deadline=None)
@given(polys(), st.sampled_from(VARS), st.integers(0, 1))
def test_restrict_then_evaluate(p, v, b):
    r = restrict(p, v, b)
    for a in ASSIGN:
        if a[v] == b:
            assert evaluate(r, a) == evaluate(p, a)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_reduce_boolean_identity(p):
    nf, B, T = reduce_boolean(p)
    from qbfalg.poly import bool_axiom, twin_axiom
    back = nf + poly_sum(q * bool_axiom(v) for v, q in B.items()) + poly_sum(
        q * twin_axiom(v) for v, q in T.items())
    assert back == p
    assert nf.is_twin_free
    assert multilinearize(nf) == nf
    for a in ASSIGN:
        assert evaluate(nf, a) == evaluate(p, a)


@settings(max_examples=60, deadline=None)
@given(polys(), st.sampled_from(VARS))
def test_split_on_values(p, v):
    p0, p1, _, _ = split_on(p, v)
    for a in ASSIGN:
        assert evaluate(p, a) == evaluate(p1 if a[v] else p0, a)


@settings(max_examples=40, deadline=None)
@given(polys())
def test_express_in_ideal_reexpands_exactly(p):
    phi = Qbf.build([("e", 1), ("a", 2), ("e", 3), ("e", 4)], [(1, -2), (2, 3, -4), (4,)])
    # force membership: subtract the value table interpolated through satisfying points
    from qbfalg.qbf import satisfying_assignments
    fix = poly_sum(Polynomial.monomial(indicator(a), evaluate(p, a)) for a in satisfying_assignments(phi))
    r = p - fix
    mult = express_in_ideal(r, phi)
    _check_expression(r, phi, mult)


def test_indicators_partition_unity():
    for n in range(1, 5):
        vs = list(range(1, n + 1))
        total = poly_sum(Polynomial.monomial(indicator(dict(zip(vs, bits))))
                         for bits in product((0, 1), repeat=n))
        nf, _, _ = reduce_boolean(total)
        assert nf == Polynomial.const(1)
