import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbfalg.cert import Certificate
from qbfalg.errors import NotVerified, QdegTooHigh
from qbfalg.pexp import (audit, build_equality_pe, format_audit, pe_evaluate, random_pieces,
                         sample_audits)
from qbfalg.poly import Polynomial, ZERO, parse_poly
from qbfalg.qbf import AxiomId, clause_ax, gen_equality, gen_parity

P = parse_poly


def _pieces(universal, mult=None, rem=None, system="QSA"):
    return Certificate(system, mult or {}, universal, rem)


def test_gamma_choices():
    assert build_equality_pe(1, _pieces({2: P("3")})).gamma == (0,)
    assert build_equality_pe(1, _pieces({2: P("-1")})).gamma == (1,)
    assert build_equality_pe(2, _pieces({})).gamma == (0, 0)


def test_pe_values():
    e = build_equality_pe(1, _pieces({}))
    assert pe_evaluate(e, Polynomial.const(1)) == 1
    assert pe_evaluate(e, P("x1")) == Fraction(1, 2)
    assert pe_evaluate(e, ZERO) == 0
    # the points sit on u = gamma and t = x xor gamma
    assert pe_evaluate(e, P("x2")) == 0
    assert pe_evaluate(e, P("x1*x3 + ~x1*~x3")) == 1


def test_all_zero_pieces():
    r = audit(gen_equality(2), _pieces({}))
    assert r.total == 1 and r.ok


def test_qdeg_too_high():
    with pytest.raises(QdegTooHigh):
        build_equality_pe(2, _pieces({4: P("x1*x2")}))
    with pytest.raises(QdegTooHigh):
        build_equality_pe(1, _pieces({2: P("x1")}))


def test_only_equality_is_audited():
    with pytest.raises(NotVerified):
        audit(gen_parity(2), _pieces({}))


def test_near_miss_for_equality_two():
    # degree-1 universal multipliers with implication-clause and remainder terms
    universal = {3: P("2*x1 - ~x2 + 1/2"), 4: P("-x1 + 3*x3 - 1")}
    mult = {clause_ax(0): P("x2 - 5"), clause_ax(3): P("~x1*x4"), AxiomId("twin", 5): P("7*x6")}
    r = audit(gen_equality(2), _pieces(universal, mult, P("x1*x5 + 1/3")))
    assert r.ok


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("system", ["QSA", "QSOS"])
def test_random_candidates_are_not_refutations(n, system):
    for r in sample_audits(n, 100, seed=n, system=system):
        assert r.conditions == (True, True, True)
        assert r.total >= 1


def test_adversarial_candidate_breaks_condition_two():
    rng = random.Random(0)
    r = audit(gen_equality(2), random_pieces(2, rng, adversarial=True))
    assert r.conditions[1] is False and not r.ok


def test_format_audit():
    text = format_audit(audit(gen_equality(1), _pieces({})))
    assert text.splitlines()[0] == "verdict: not-a-refutation"
    assert "E[expression]: 1 ok" in text


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 30), st.integers(1, 3))
def test_pe_is_normalized_and_linear(seed, n):
    rng = random.Random(seed)
    pieces = random_pieces(n, rng)
    e = build_equality_pe(n, pieces)
    assert e(Polynomial.const(1)) == 1 and e(ZERO) == 0
    p = pieces.universal.get(n + 1, ZERO)
    q = pieces.multipliers.get(clause_ax(0), ZERO) + Polynomial.var(1)
    assert e(p + q.scale(3)) == e(p) + 3 * e(q)
