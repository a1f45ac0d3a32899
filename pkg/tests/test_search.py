import random
from fractions import Fraction

import pytest

from qbfalg.cert import verify
from qbfalg.errors import Infeasible, NoneFound, TooLarge
from qbfalg.search import (SearchBudget, bareiss_solve, check_farkas, min_qdeg, ns_search,
                           sa_search, simplex_phase1)
from qbfalg.qbf import gen_equality, gen_forall_or, gen_parity, gen_qmajority

from suite import FORALL_U, TRUE_EX, false_small, random_small

F = Fraction


def test_bareiss_solves_and_refutes():
    x, _ = bareiss_solve([[2, 1], [1, 3]], [3, 5], 2)
    assert x == [F(4, 5), F(7, 5)]
    x, y = bareiss_solve([[1, 1], [2, 2]], [1, 3], 2)
    assert x is None
    # y combines the rows to 0 = nonzero
    rows, rhs = [[1, 1], [2, 2]], [1, 3]
    assert all(sum(y[i] * rows[i][j] for i in range(2)) == 0 for j in range(2))
    assert sum(y[i] * rhs[i] for i in range(2)) != 0


def test_simplex_feasible_and_farkas():
    rows = [{0: F(1), 1: F(1)}, {0: F(1), 1: F(-1)}]
    z, _ = simplex_phase1(rows, [F(2), F(0)], 2)
    assert z == [1, 1]
    # x0 + x1 = -1 has no nonnegative solution
    rows = [{0: F(1), 1: F(1)}]
    z, y = simplex_phase1(rows, [F(-1)], 2)
    assert z is None and check_farkas(rows, [F(-1)], 2, y)


def test_forall_u_examples():
    with pytest.raises(Infeasible):
        ns_search(FORALL_U, SearchBudget(0))
    for search in (ns_search, sa_search):
        c = search(FORALL_U, SearchBudget(1))
        m = verify(FORALL_U, c)
        assert m.qsize == 1
    assert min_qdeg(FORALL_U, "QNS")[0] == 0
    assert min_qdeg(FORALL_U, "QSA")[0] == 0


def test_true_formula_has_no_certificate():
    for d in range(0, 5):
        for search in (ns_search, sa_search):
            with pytest.raises(Infeasible):
                search(TRUE_EX, SearchBudget(d))
    with pytest.raises(NoneFound):
        min_qdeg(TRUE_EX)


def test_soundness_on_random_true_formulas():
    for phi in random_small(True, 20, 19):
        for d in range(0, 2 * len(phi.variables) + 1):
            for search in (ns_search, sa_search):
                with pytest.raises(Infeasible):
                    search(phi, SearchBudget(d))


def test_qmajority_needs_only_qdeg_one():
    phi = gen_qmajority(3)
    c = sa_search(phi, SearchBudget(6, 1))
    m = verify(phi, c)
    assert m.qdeg <= 1
    with pytest.raises(Infeasible):
        sa_search(phi, SearchBudget(6, 0))


@pytest.mark.parametrize("gen", [gen_parity, gen_equality])
def test_qdeg_below_n_is_infeasible(gen):
    phi = gen(2)
    for search in (sa_search, ns_search):
        with pytest.raises(Infeasible) as exc:
            search(phi, SearchBudget(None, 1))
        assert exc.value.budget == SearchBudget(None, 1)
    assert min_qdeg(phi, "QSA")[0] == 2


def test_infeasible_sa_carries_a_farkas_vector():
    with pytest.raises(Infeasible) as exc:
        sa_search(gen_forall_or(3), SearchBudget(2))
    assert exc.value.farkas is not None


def test_cap_is_enforced():
    with pytest.raises(TooLarge):
        sa_search(gen_parity(3), SearchBudget(var_cap=5))


def _feasible(search, phi, d, k):
    try:
        verify(phi, search(phi, SearchBudget(d, k)))
        return True
    except Infeasible:
        return False


def test_monotone_in_budget_and_closed_under_verify():
    rng = random.Random(23)
    insts = list(false_small())[:20] + [gen_forall_or(2), gen_parity(1)]
    for phi in insts:
        n = len(phi.variables)
        for _ in range(3):
            d = rng.randint(0, n + 1)
            k = rng.randint(0, d)
            d2 = rng.randint(d, n + 2)
            k2 = rng.randint(k, d2)
            for search in (ns_search, sa_search):
                if _feasible(search, phi, d, k):
                    assert _feasible(search, phi, d2, k2)


def test_qns_feasible_implies_qsa_feasible():
    for phi in list(false_small())[:20]:
        for d in range(0, len(phi.variables) + 1):
            if _feasible(ns_search, phi, d, None):
                assert _feasible(sa_search, phi, d, None)
