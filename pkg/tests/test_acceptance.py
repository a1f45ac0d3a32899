"""Acceptance gate: one test per criterion, each timed against its limit.

Every test records a PASS/FAIL line, printed as it finishes and again in the
terminal summary.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings, strategies as st

from qbfalg.cert import qsa_to_qsos, verify
from qbfalg.errors import IdentityViolated, Infeasible
from qbfalg.extract import extract, ptf_truth_table
from qbfalg.game import (check_winning, combine, compile_v1_to_qsa, compile_v2_to_qns,
                         complete_from_countermodel, high_degree_monomials, qdeg_reduce,
                         restrict_strategy, strategy_from_eval, strategy_qdeg, strategy_size,
                         winning_countermodel)
from qbfalg.pexp import sample_audits
from qbfalg.poly import Monomial, Polynomial, bool_axiom
from qbfalg.proofs import (WRed, check_qpc, check_qures, check_wres, qns_to_qpc, qpc_to_qsos,
                           qsa_to_wres, qures_to_wres, wres_to_qsa)
from qbfalg.qbf import (evaluate_qbf, gen_equality, gen_forall_or, gen_parity, gen_qmajority,
                        restrict_qbf)
from qbfalg.search import SearchBudget, min_qdeg, ns_search, sa_search

from suite import (accepted_certificates, false_small, majority_strategy, mutations,
                   padded_strategy, qures_suite, random_qbf, random_small, winning_strategies)

RESULTS: list[str] = []


@contextmanager
def criterion(num, title, limit):
    start = time.perf_counter()
    try:
        yield
    except BaseException as e:
        line = "criterion %2d FAIL  %-48s %7.2fs  (%s)" % (num, title, time.perf_counter() - start,
                                                             type(e).__name__)
        RESULTS.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    line = "criterion %2d %s  %-48s %7.2fs  (limit %ds)" % (num, "PASS" if ok else "FAIL", title,
                                                          elapsed, limit)
    RESULTS.append(line)
    print(line)
    assert ok, "took %.1fs, limit %ds" % (elapsed, limit)


def test_01_qmajority_linear_qsize():
    with criterion(1, "q-majority compiles to qsize n+1", 10):
        for n in (3, 5):
            phi = gen_qmajority(n)
            c = compile_v1_to_qsa(phi, majority_strategy(n))
            assert verify(phi, c).qsize == n + 1
            assert verify(phi, qsa_to_qsos(c)).qsize == n + 1


def test_02_completeness():
    with criterion(2, "completeness from countermodels", 10):
        insts = [gen_forall_or(n) for n in range(1, 5)] + list(false_small())
        for phi in insts:
            c = complete_from_countermodel(phi, winning_countermodel(phi))
            assert c.system == "QNS"
            verify(phi, c)


def test_03_soundness():
    with criterion(3, "soundness on true formulas and mutations", 60):
        trues = random_small(True, 100, 3)
        assert len(trues) == 100 and all(len(phi.variables) <= 3 for phi in trues)
        for phi in trues:
            for d in range(0, 2 * len(phi.variables) + 1):
                for search in (ns_search, sa_search):
                    with pytest.raises(Infeasible):
                        search(phi, SearchBudget(d))
        certs = accepted_certificates()[:20]
        tried = 0
        for phi, c in certs:
            for bad in mutations(c):
                tried += 1
                with pytest.raises(IdentityViolated):
                    verify(phi, bad)
        assert tried > 0


def _is_xor(phi, m, n):
    table = ptf_truth_table(m, phi.universals[0])
    assert set(table) == set(product((0, 1), repeat=n))
    return all(b == sum(bits) % 2 for bits, b in table.items())


def test_04_parity_qdeg():
    with criterion(4, "parity needs qdeg n, extracted PTF is XOR", 300):
        for n in (2, 3):
            phi = gen_parity(n)
            with pytest.raises(Infeasible):
                sa_search(phi, SearchBudget(None, n - 1))
            k, c = min_qdeg(phi, "QSA")
            assert k == n
            assert verify(phi, c).qdeg == n
            assert _is_xor(phi, extract(phi, c), n)


def test_05_equality_qdeg():
    with criterion(5, "equality needs qdeg n, pseudo-expectation audit", 300):
        for n in (2, 3):
            phi = gen_equality(n)
            with pytest.raises(Infeasible):
                sa_search(phi, SearchBudget(None, n - 1))
            reports = list(sample_audits(n, 100, seed=n))
            assert len(reports) == 100
            for r in reports:
                assert r.conditions == (True, True, True)
                assert r.total >= 1


def _reductions(w):
    return sum(isinstance(s, WRed) for s in w.steps)


def test_06_qsa_wres_round_trip():
    with criterion(6, "QSA <-> weighted resolution round trips", 30):
        proofs = []
        for phi, c in accepted_certificates():
            if c.system != "QSA":
                continue
            q = verify(phi, c).qsize
            w = qsa_to_wres(phi, c)
            proofs.append((phi, w))
            assert verify(phi, wres_to_qsa(phi, w)).qsize == q
        proofs += [(phi, qures_to_wres(phi, pi)) for phi, pi in qures_suite()]
        for phi, w in proofs:
            check_wres(phi, w)
            back = qsa_to_wres(phi, wres_to_qsa(phi, w))
            check_wres(phi, back)
            assert _reductions(back) == _reductions(w)


def test_07_qures_to_wres_bound():
    with criterion(7, "QU-Res to weighted resolution size bound", 10):
        for phi, pi in qures_suite():
            s = check_wres(phi, qures_to_wres(phi, pi))
            assert s.size <= len(phi.variables) * len(pi.steps)
            assert s.qsize == check_qures(phi, pi).qsize


def _generic(coeffs):
    """Degree <= 2 polynomial over x1..x3; coeffs supplies the 10 coefficients as polynomials."""
    mons = [Monomial(())]
    mons += [Monomial(((2 * v, 1),)) for v in (1, 2, 3)]
    for i, j in combinations_with_replacement((1, 2, 3), 2):
        mons.append(Monomial(((2 * i, 2),)) if i == j else Monomial(((2 * i, 1), (2 * j, 1))))
    assert len(mons) == len(coeffs) == 10
    out = Polynomial({})
    for k, m in enumerate(mons):
        out = out + coeffs[k] * Polynomial({m: Fraction(1)})
    return out


def _identity_residuals(p, q, a, b, v):
    x = Polynomial.var(v)
    one = Polynomial.const(1)
    red = (q * q + (p * q).scale(2)) * (one - x.scale(2))
    sq = (p + q * x) ** 2
    return [
        -(p * a + q * b) ** 2 - ((p * p * a * a).scale(-2) + (q * q * b * b).scale(-2) + (p * a - q * b) ** 2),
        -(x * p) ** 2 - (-(p * p) + (p - x * p) ** 2 - (p * p).scale(2) * bool_axiom(v)),
        -(p * p) - (sq.scale(-2) + (p + q) ** 2 - red + (q * q).scale(2) * bool_axiom(v)),
        -(p + q) ** 2 - (sq.scale(-2) + p * p - red + (q * q).scale(2) * bool_axiom(v)),
    ]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=22, max_size=22),
       st.sampled_from((1, 2, 3)))
def _identities_on_numbers(cs, v):
    c = [Polynomial.const(x) for x in cs]
    p, q, a, b = _generic(c[:10]), _generic(c[10:20]), c[20], c[21]
    assert all(not r for r in _identity_residuals(p, q, a, b, v))


def test_08_qns_qpc_qsos_chain():
    with criterion(8, "QNS -> Q-PC -> QSOS chain and rewriting identities", 60):
        for phi, c in accepted_certificates():
            if c.system != "QNS":
                continue
            pi = qns_to_qpc(phi, c)
            check_qpc(phi, pi)
            out = qpc_to_qsos(phi, pi)
            assert out.system == "QSOS"
            verify(phi, out)
        # coefficients, a and b are fresh indeterminates, so this covers every p, q at once
        fresh = [Polynomial.var(100 + k) for k in range(22)]
        p, q, a, b = _generic(fresh[:10]), _generic(fresh[10:20]), fresh[20], fresh[21]
        for v in (1, 2, 3):
            assert all(not r for r in _identity_residuals(p, q, a, b, v))
        _identities_on_numbers()


def test_09_strategy_certificate_equivalence():
    with criterion(9, "strategies compile to certificates and back", 60):
        for phi, sigma, variant in winning_strategies():
            size = strategy_size(sigma)
            if variant == 2:
                assert verify(phi, compile_v2_to_qns(phi, sigma)).qsize == size
            assert verify(phi, compile_v1_to_qsa(phi, sigma)).qsize == size
        for phi, c in accepted_certificates():
            assert check_winning(phi, c.universal, 2 if c.system == "QNS" else 1)


def _false_instances(rng, count, leading_existential=False):
    out = []
    while len(out) < count:
        phi = random_qbf(rng, 4, 5)
        if leading_existential and phi.prefix[0][0] != "e":
            continue
        if not evaluate_qbf(phi):
            out.append(phi)
    return out


def _check_combine(phi):
    x = phi.prefix[0][1]
    r1, r0 = restrict_qbf(phi, x, 1), restrict_qbf(phi, x, 0)
    s1 = strategy_from_eval(r1, winning_countermodel(r1))
    s0 = strategy_from_eval(r0, winning_countermodel(r0))
    for pol in (1, -1):
        out = combine(phi, x, s1, s0, polarity=pol)
        assert check_winning(phi, out, 1)
        lead, other = (s1, s0) if pol == 1 else (s0, s1)
        rl, ro = (r1, r0) if pol == 1 else (r0, r1)
        assert strategy_qdeg(phi, out) <= max(1 + strategy_qdeg(rl, lead), strategy_qdeg(ro, other))
        # restricting back recovers winning strategies on both halves
        assert check_winning(r1, restrict_strategy(out, x, 1), 1)
        assert check_winning(r0, restrict_strategy(out, x, 0), 1)


def _smallest_b(phi, sigma, d):
    k = len(high_degree_monomials(phi, sigma, d))
    ne = len(phi.existentials)
    if k == 0:
        return None
    return next((b for b in range(1, 60) if ne <= d or k * (1 - Fraction(d, 2 * ne)) ** b < 1), None)


def _check_reduce(phi, sigma):
    """Runs qdeg_reduce at every d where the hypothesis holds; returns how many needed real work."""
    worked = 0
    for d in range(0, len(phi.existentials) + 1):
        b = _smallest_b(phi, sigma, d)
        if b is None:
            continue
        out = qdeg_reduce(phi, sigma, d, b)
        assert check_winning(phi, out, 1)
        assert strategy_qdeg(phi, out) <= d + b
        worked += strategy_qdeg(phi, sigma) > d + b
    return worked


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def _reduce_property(seed):
    rng = random.Random(seed)
    phi = _false_instances(rng, 1)[0]
    _check_reduce(phi, padded_strategy(phi, strategy_from_eval(phi, winning_countermodel(phi)), rng))


def test_10_combine_and_qdeg_reduce():
    with criterion(10, "merging restrictions and degree reduction", 60):
        for phi in _false_instances(random.Random(10), 60, leading_existential=True):
            _check_combine(phi)
        rng = random.Random(12)
        worked = 0
        for phi in _false_instances(rng, 150):
            sigma = padded_strategy(phi, strategy_from_eval(phi, winning_countermodel(phi)), rng)
            worked += _check_reduce(phi, sigma)
        print("qdeg_reduce: %d runs started above d+b" % worked)
        assert worked > 0
        _reduce_property()
