import random
from fractions import Fraction

import pytest

from qbfalg.cert import verify
from qbfalg.errors import (HypothesisViolated, NotWinning, NotWinningEval, SideConditionViolated)
from qbfalg.game import (EvalStrategy, _score_extremes, check_winning, combine, compile_v1_to_qsa,
                         compile_v2_to_qns, complete_from_countermodel, format_eval_strategy,
                         format_strategy, high_degree_monomials, parse_eval_strategy,
                         parse_strategy, qdeg_reduce, strategy_from_eval, strategy_qdeg,
                         strategy_size, total_score, winning_countermodel)
from qbfalg.poly import parse_poly
from qbfalg.qbf import (FAMILIES, Qbf, gen_forall_or, gen_qmajority, restrict_qbf)

from suite import (EX_X_FORALL_U, FORALL_U, TRUE_EX, accepted_certificates, ledger_certificate,
                   majority_strategy, random_qbf, winning_strategies)

P = parse_poly
OR2 = {1: P("1"), 2: P("2 - 2*x1")}


def test_total_score_examples():
    assert total_score(OR2, {1: 1, 2: 0}) == 1
    assert total_score({}, {1: 0}) == 0
    alpha = {1: 1, 2: 1, 3: 0, 4: 0}
    assert total_score(majority_strategy(3), alpha) == Fraction(3, 4)


def test_check_winning_examples():
    assert check_winning(gen_forall_or(2), OR2, 2)
    r = check_winning(FORALL_U, {}, 1)
    assert not r and r.counterexample == {1: 1}
    assert check_winning(gen_qmajority(3), majority_strategy(3), 1)


def test_strategy_from_eval_examples():
    phi = gen_forall_or(2)
    assert strategy_from_eval(phi, EvalStrategy.constant(phi, 0)) == OR2
    assert strategy_from_eval(FORALL_U, EvalStrategy.constant(FORALL_U, 0)) == {1: P("1")}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_strategy_from_eval_wins_on_families(name):
    for n in (1, 2, 3):
        phi = FAMILIES[name](n)
        sigma = strategy_from_eval(phi, winning_countermodel(phi))
        assert check_winning(phi, sigma, 2)


def test_losing_countermodel_rejected():
    with pytest.raises(NotWinningEval):
        strategy_from_eval(FORALL_U, EvalStrategy.constant(FORALL_U, 1))
    with pytest.raises(NotWinningEval):
        winning_countermodel(TRUE_EX)


def test_compile_v2_examples():
    c = compile_v2_to_qns(FORALL_U, {1: P("1")})
    assert c == ledger_certificate()
    c2 = compile_v2_to_qns(gen_forall_or(2), OR2)
    assert verify(gen_forall_or(2), c2).qsize == 3
    with pytest.raises(NotWinning):
        compile_v2_to_qns(FORALL_U, {1: P("2")})


def test_compile_v1_examples():
    phi = gen_qmajority(3)
    assert verify(phi, compile_v1_to_qsa(phi, majority_strategy(3))).qsize == 4
    c = compile_v1_to_qsa(FORALL_U, {1: P("1")})
    assert c.universal == {1: P("2")}
    assert c.remainder == P("x1")
    with pytest.raises(NotWinning):
        compile_v1_to_qsa(FORALL_U, {1: P("-1")})


def test_complete_examples():
    assert complete_from_countermodel(FORALL_U, EvalStrategy.constant(FORALL_U, 0)) == ledger_certificate()
    verify(EX_X_FORALL_U, complete_from_countermodel(EX_X_FORALL_U, EvalStrategy.constant(EX_X_FORALL_U, 0)))
    phi = gen_forall_or(3)
    verify(phi, complete_from_countermodel(phi, EvalStrategy.constant(phi, 0)))


def test_compiled_qsize_equals_strategy_size():
    for phi, sigma, variant in winning_strategies():
        size = strategy_size(sigma)
        if variant == 2:
            assert verify(phi, compile_v2_to_qns(phi, sigma)).qsize == size
        assert verify(phi, compile_v1_to_qsa(phi, sigma)).qsize == size


def test_certificate_multipliers_win():
    for phi, c in accepted_certificates():
        variant = 2 if c.system == "QNS" else 1
        assert check_winning(phi, c.universal, variant)


def test_strategy_file_round_trips():
    for phi, sigma, _ in winning_strategies()[:10]:
        assert parse_strategy(format_strategy(sigma)) == sigma
        tau = winning_countermodel(phi)
        back = parse_eval_strategy(format_eval_strategy(phi, tau))
        assert all(back.decide(phi, u, a) == tau.decide(phi, u, a)
                   for u in phi.universals for a in _left_assignments(phi, u))


def _left_assignments(phi, u):
    from qbfalg.qbf import all_assignments
    return list(all_assignments(phi.left_vars(u)))


# merging and degree reduction ------------------------------------------------------------

def test_combine_on_two_restrictions():
    phi = EX_X_FORALL_U
    s1 = strategy_from_eval(restrict_qbf(phi, 1, 1), winning_countermodel(restrict_qbf(phi, 1, 1)))
    s0 = strategy_from_eval(restrict_qbf(phi, 1, 0), winning_countermodel(restrict_qbf(phi, 1, 0)))
    out = combine(phi, 1, s1, s0)
    assert check_winning(phi, out, 1)
    assert strategy_qdeg(phi, out) == max(1 + strategy_qdeg(phi, s1), strategy_qdeg(phi, s0))


def test_combine_scale_when_scores_are_small():
    # restricted scores never exceed 1 in magnitude, so c = 2
    phi0 = restrict_qbf(EX_X_FORALL_U, 1, 0)
    big, _ = _score_extremes(phi0, {2: P("1")}, 24)
    assert big + 1 == 2
    out = combine(EX_X_FORALL_U, 1, {2: P("1")}, {2: P("1")})
    assert out == {2: P("x1 + 1/2")}


def test_combine_side_condition_gap():
    # the lead strategy moves a universal that precedes x; multiplying it by x breaks the prefix order
    phi = Qbf.build([("a", 1), ("e", 2), ("a", 3)], [(1, 2, 3), (1, -2, 3)])
    r1, r0 = restrict_qbf(phi, 2, 1), restrict_qbf(phi, 2, 0)
    s1 = strategy_from_eval(r1, winning_countermodel(r1))
    s0 = strategy_from_eval(r0, winning_countermodel(r0))
    assert s1.get(1)
    with pytest.raises(SideConditionViolated):
        combine(phi, 2, s1, s0)


def _leading_block_instances(count: int, seed: int):
    """False instances with at most 4 variables whose first variable is existential."""
    rng = random.Random(seed)
    from qbfalg.qbf import evaluate_qbf
    out = []
    while len(out) < count:
        phi = random_qbf(rng, 4, 5)
        if phi.prefix[0][0] != "e" or evaluate_qbf(phi):
            continue
        out.append(phi)
    return out


def test_combine_property():
    for phi in _leading_block_instances(40, 11):
        x = phi.prefix[0][1]
        r1, r0 = restrict_qbf(phi, x, 1), restrict_qbf(phi, x, 0)
        s1 = strategy_from_eval(r1, winning_countermodel(r1))
        s0 = strategy_from_eval(r0, winning_countermodel(r0))
        for pol, lead, other in ((1, s1, s0), (-1, s0, s1)):
            out = combine(phi, x, s1, s0, polarity=pol)
            assert check_winning(phi, out, 1)
            k = max(1 + strategy_qdeg(r1 if pol == 1 else r0, lead),
                    strategy_qdeg(r0 if pol == 1 else r1, other))
            assert strategy_qdeg(phi, out) <= k


def test_qdeg_reduce_base_case():
    sigma = {2: P("1")}
    assert qdeg_reduce(EX_X_FORALL_U, sigma, 0, 5) == sigma


def test_qdeg_reduce_hypothesis_violated():
    phi = Qbf.build([("e", 1), ("e", 2), ("a", 3)], [(3,)])
    sigma = {3: P("1 + x1*x2 - x1^2*x2")}
    assert check_winning(phi, sigma, 1)
    with pytest.raises(HypothesisViolated):
        qdeg_reduce(phi, sigma, 1, 0)


def test_qdeg_reduce_inflated_or():
    # forall-or(2) behind a dummy existential block, padded with terms that vanish on the cube
    phi = Qbf.build([("e", 1), ("e", 2), ("e", 3), ("a", 4), ("a", 5)], [(4, 5)])
    sigma = {4: P("1 + x1^3*x2*x3 - x1*x2*x3"), 5: P("2 - 2*x4")}
    assert check_winning(phi, sigma, 1)
    d = 2
    k = len(high_degree_monomials(phi, sigma, d))
    b = next(b for b in range(1, 20) if k * (1 - Fraction(d, 6)) ** b < 1)
    assert (k, b) == (2, 2) and strategy_qdeg(phi, sigma) > d + b
    out = qdeg_reduce(phi, sigma, d, b)
    assert check_winning(phi, out, 1)
    assert strategy_qdeg(phi, out) <= d + b


def test_qdeg_reduce_returns_strategy_already_within_bound():
    phi = Qbf.build([("e", 1), ("e", 2), ("a", 3), ("a", 4)], [(3, 4)])
    sigma = {3: P("1 + x1^2*x2 - x1*x2"), 4: P("2 - 2*x3")}
    assert qdeg_reduce(phi, sigma, 1, 4) == sigma


def test_qdeg_reduce_falls_back_to_the_cube_normal_form():
    # every split would make u1 depend on a later existential
    phi = Qbf.build([("a", 1), ("e", 2), ("e", 3), ("a", 4)], [(-4,), (4,), (-3,)])
    sigma = {1: P("1"), 4: P("1/2*x2*~x2^2*x3 - 2*x1 + 2")}
    assert check_winning(phi, sigma, 1)
    out = qdeg_reduce(phi, sigma, 1, 1)
    assert out == {1: P("1"), 4: P("2 - 2*x1")}
