"""Degree-bounded certificate search by exact linear algebra and linear programming.

Unknown coefficients are attached to every allowed monomial of every
multiplier, and the identity is imposed in the ring of functions on the
Boolean cube (multilinear, twin-free).  Any solution is turned back into a
genuine certificate: the difference between the polynomial expression and its
multilinear reading vanishes on the cube and is absorbed into Boolean and twin
axiom multipliers.

Template, for total degree ``d``:

* clause ``C``: ``q_C`` ranges over multilinear monomials in variables outside
  ``C`` of degree at most ``d - |C|``;
* universal ``u``: ``q_u`` ranges over multilinear monomials in variables left
  of ``u`` of degree at most ``d - 1`` with at most ``qdeg`` existential
  variables;
* QSA remainder: nonnegative combinations of literal conjunctions of size at
  most ``d`` (conjunctions that falsify a clause are already covered by the
  clause multipliers and are left out).

When ``d`` reaches the number of variables the clause part spans every
function vanishing on the satisfying assignments, so the template is
equivalent to one constraint per satisfying assignment.  That case is solved
directly on those points.

Infeasibility is always relative to the budget that was tried.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .cert import Certificate, verify
from .errors import Infeasible, NoneFound, TooLarge
from .poly import (Monomial, Polynomial, ZERO, express_in_ideal, indicator,
                   poly_sum, reduce_boolean)
from .qbf import AxiomId, Qbf, clause_ax, clause_monomial, satisfying_assignments

DEFAULT_VAR_CAP = 14


@dataclass(frozen=True)
class SearchBudget:
    degree: int | None = None
    qdeg: int | None = None
    var_cap: int = DEFAULT_VAR_CAP

    def resolve(self, phi: Qbf) -> tuple[int, int]:
        n = len(phi.variables)
        if n > self.var_cap:
            raise TooLarge("%d variables exceed the search cap of %d" % (n, self.var_cap))
        d = n if self.degree is None else self.degree
        if d < 0:
            raise ValueError("degree must be nonnegative")
        k = d if self.qdeg is None else min(self.qdeg, d)
        if k < 0:
            raise ValueError("qdeg cap must be nonnegative")
        return d, k


# ---------------------------------------------------------------------------
# exact solvers

def bareiss_solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int):
    """Solve an integer system by fraction-free elimination.

    Returns ``(solution, None)`` with free variables set to 0, or
    ``(None, y)`` where ``y`` is an integer row combination with
    ``y*A == 0`` and ``y*b != 0``.
    """
    m = len(rows)
    # augmented matrix with a tracking identity for the infeasibility witness
    M = [list(rows[i]) + [rhs[i]] + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    prev = 1
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pr = M[r]
        pv = pr[c]
        for i in range(m):
            if i == r:
                continue
            row = M[i]
            f = row[c]
            if i > r or f:
                M[i] = [(pv * a - f * b) // prev for a, b in zip(row, pr)] if i > r else row
        prev = pv
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][ncols]:
            return None, M[i][ncols + 1:]
    # back substitution on the echelon form
    x = [Fraction(0)] * ncols
    for i in range(r - 1, -1, -1):
        c = piv_cols[i]
        row = M[i]
        s = Fraction(row[ncols])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x, None


def _eliminate_free(rows: list[dict[int, Fraction]], rhs: list[Fraction], free: Sequence[int]):
    """Gauss-Jordan on the free columns.  Returns (pivot rows, remaining row indices)."""
    used: dict[int, int] = {}
    colrows: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for c in row:
            colrows.setdefault(c, set()).add(i)
    for c in free:
        cand = [i for i in colrows.get(c, ()) if i not in used.values() and rows[i].get(c)]
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(rows[i]), i))
        pr = rows[p]
        inv = 1 / pr[c]
        for k in list(pr):
            pr[k] *= inv
        rhs[p] *= inv
        for i in list(colrows.get(c, ())):
            if i == p:
                continue
            row = rows[i]
            f = row.get(c)
            if not f:
                continue
            for k, v in pr.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    if k not in row:
                        colrows.setdefault(k, set()).add(i)
                    row[k] = nv
                else:
                    row.pop(k, None)
                    colrows[k].discard(i)
            rhs[i] -= f * rhs[p]
        used[c] = p
    rest = [i for i in range(len(rows)) if i not in used.values()]
    return used, rest


def simplex_phase1(rows: list[dict[int, Fraction]], rhs: list[Fraction], ncols: int):
    """Feasibility of ``A z = b, z >= 0`` by phase-1 simplex with integer pivoting and Bland's rule.

    Returns ``(z, None)`` or ``(None, y)`` with ``y*A <= 0`` and ``y*b > 0``.
    """
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * ncols, None
    width = ncols + m + 1
    T: list[list[int]] = []
    signs = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        den = lcm(*(v.denominator for v in row.values()), Fraction(b).denominator)
        sg = -1 if b < 0 else 1
        signs.append(sg * den)
        line = [0] * width
        for k, v in row.items():
            line[k] = int(v * den) * sg
        line[ncols + i] = 1
        line[-1] = int(Fraction(b) * den) * sg
        T.append(line)
    obj = [0] * width
    for line in T:
        for j in range(ncols):
            obj[j] -= line[j]
        obj[-1] -= line[-1]
    basis = [ncols + i for i in range(m)]
    D = 1
    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                if best is None:
                    best = i
                else:
                    lhs = T[i][-1] * T[best][enter]
                    rhs_ = T[best][-1] * a
                    if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                        best = i
        if best is None:
            raise AssertionError("phase-1 objective is bounded below by zero")
        pr = T[best]
        pv = pr[enter]
        for i in range(m):
            if i == best:
                continue
            row = T[i]
            f = row[enter]
            if f:
                T[i] = [(pv * a - f * b) // D for a, b in zip(row, pr)]
            elif pv != D:
                T[i] = [(pv * a) // D for a in row]
        f = obj[enter]
        obj = [(pv * a - f * b) // D for a, b in zip(obj, pr)]
        D = pv
        basis[best] = enter
    if obj[-1] != 0:
        # reduced cost of artificial i is 1 - y_i
        y = [1 - Fraction(obj[ncols + i], D) for i in range(m)]
        return None, [y[i] * signs[i] for i in range(m)]
    z = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        if j < ncols:
            z[j] = Fraction(T[i][-1], D)
    return z, None


def check_farkas(rows: list[dict[int, Fraction]], rhs: list[Fraction], ncols: int, y) -> bool:
    col = [Fraction(0)] * ncols
    for yi, row in zip(y, rows):
        if yi:
            for k, v in row.items():
                col[k] += yi * v
    return all(c <= 0 for c in col) and sum(yi * b for yi, b in zip(y, rhs)) > 0


# ---------------------------------------------------------------------------
# templates

def _masks(pool: Sequence[int], maxdeg: int, ok=None):
    for k in range(0, min(maxdeg, len(pool)) + 1):
        for combo in combinations(pool, k):
            m = 0
            for b in combo:
                m |= 1 << b
            if ok is None or ok(combo):
                yield m


def _mask_poly(mask: int, var_of: Sequence[int]) -> Polynomial:
    keys = []
    i = 0
    while mask:
        if mask & 1:
            keys.append((2 * var_of[i], 1))
        mask >>= 1
        i += 1
    return Polynomial.monomial(Monomial(sorted(keys)))


def _universal_template(phi: Qbf, d: int, k: int):
    pos = {v: i for i, v in enumerate(phi.variables)}
    out = []
    for u in phi.universals:
        left = [pos[v] for v in phi.left_vars(u)]
        exist = {pos[v] for v in phi.left_vars(u) if phi.is_existential(v)}
        for m in _masks(left, d - 1, lambda combo: sum(b in exist for b in combo) <= k):
            out.append((u, m))
    return out


def _expand_conjunction(fixed1: int, fixed0: Sequence[int]) -> dict[int, int]:
    """Multilinear expansion of ``prod_{fixed1} x * prod_{fixed0} (1-x)``."""
    out = {fixed1: 1}
    for b in fixed0:
        nxt = dict(out)
        for m, c in out.items():
            nxt[m | (1 << b)] = nxt.get(m | (1 << b), 0) - c
        out = nxt
    return out


def _clause_falsifiers(phi: Qbf, pos):
    out = []
    for c in phi.clauses:
        one = 0   # variables set to 1 (negative literals)
        zero = 0  # variables set to 0 (positive literals)
        for lit in c:
            b = pos[abs(lit)]
            if lit > 0:
                zero |= 1 << b
            else:
                one |= 1 << b
        out.append((one, zero))
    return out


def _build(phi: Qbf, d: int, k: int, with_remainder: bool):
    pos = {v: i for i, v in enumerate(phi.variables)}
    n = len(pos)
    cols: list[tuple] = []
    vecs: list[dict[int, int]] = []
    for j, c in enumerate(phi.clauses):
        cmask = 0
        for lit in c:
            cmask |= 1 << pos[abs(lit)]
        one = sum(1 << pos[-l] for l in c if l < 0)
        zero = [pos[l] for l in c if l > 0]
        pool = [i for i in range(n) if not cmask >> i & 1]
        for m in _masks(pool, d - len(c)):
            cols.append(("clause", j, m))
            vecs.append(_expand_conjunction(m | one, zero))
    for u, m in _universal_template(phi, d, k):
        cols.append(("univ", u, m))
        vecs.append({m: 1, m | (1 << pos[u]): -2})
    nfree = len(cols)
    if with_remainder:
        fals = _clause_falsifiers(phi, pos)
        for size in range(0, min(d, n) + 1):
            for combo in combinations(range(n), size):
                for bits in range(1 << size):
                    one = zero = 0
                    for t, b in enumerate(combo):
                        if bits >> t & 1:
                            one |= 1 << b
                        else:
                            zero |= 1 << b
                    if any(o & ~one == 0 and z & ~zero == 0 for o, z in fals):
                        continue
                    cols.append(("rem", one, zero))
                    vecs.append(_expand_conjunction(one, [b for b in combo if zero >> b & 1]))
    return pos, cols, vecs, nfree


def _rows(vecs):
    rows: dict[int, dict[int, Fraction]] = {}
    for j, v in enumerate(vecs):
        for m, c in v.items():
            rows.setdefault(m, {})[j] = Fraction(c)
    rows.setdefault(0, {})
    keys = sorted(rows)
    return keys, [rows[m] for m in keys], [Fraction(-1) if m == 0 else Fraction(0) for m in keys]


def _assemble(phi: Qbf, system: str, pos, cols, values) -> Certificate:
    var_of = phi.variables
    clause_q: dict[int, Polynomial] = {}
    univ: dict[int, Polynomial] = {}
    rem_terms: dict[Monomial, Fraction] = {}
    for (kind, a, b), x in zip(cols, values):
        if not x:
            continue
        if kind == "clause":
            clause_q[a] = clause_q.get(a, ZERO) + _mask_poly(b, var_of).scale(x)
        elif kind == "univ":
            univ[a] = univ.get(a, ZERO) + _mask_poly(b, var_of).scale(x)
        else:
            rho = {var_of[i]: 1 for i in range(len(var_of)) if a >> i & 1}
            rho.update({var_of[i]: 0 for i in range(len(var_of)) if b >> i & 1})
            m = indicator(rho)
            rem_terms[m] = rem_terms.get(m, Fraction(0)) + x
    rem = Polynomial(rem_terms)
    mult: dict[AxiomId, Polynomial] = {clause_ax(j): q for j, q in clause_q.items()}
    expr = poly_sum([q * Polynomial.monomial(clause_monomial(phi.clauses[j])) for j, q in clause_q.items()]
                    + [q * (1 - 2 * Polynomial.var(u)) for u, q in univ.items()]
                    + [rem, Polynomial.const(1)])
    nf, B, T = reduce_boolean(expr)
    if nf:
        raise AssertionError("solution does not vanish on the cube")
    for v, q in B.items():
        mult[AxiomId("bool", v)] = mult.get(AxiomId("bool", v), ZERO) - q
    for v, q in T.items():
        mult[AxiomId("twin", v)] = mult.get(AxiomId("twin", v), ZERO) - q
    cert = Certificate(system, mult, univ, rem if system == "QSA" else None)
    verify(phi, cert)
    return cert


def _search_general(phi: Qbf, system: str, d: int, k: int, budget) -> Certificate:
    pos, cols, vecs, nfree = _build(phi, d, k, system == "QSA")
    _, rows, rhs = _rows(vecs)
    used, rest = _eliminate_free(rows, rhs, range(nfree))
    if system == "QNS":
        bad = next((i for i in rest if rhs[i]), None)
        if bad is not None:
            # the reduced row reads 0 == rhs
            raise Infeasible("no QNS certificate of degree %d and qdeg %d" % (d, k), budget, None)
        values = [Fraction(0)] * nfree
        for c, i in used.items():
            values[c] = rhs[i]
        return _assemble(phi, system, pos, cols, values)
    sub_rows = []
    for i in rest:
        sub_rows.append({j - nfree: v for j, v in rows[i].items()})
    sub_rhs = [rhs[i] for i in rest]
    nz = len(cols) - nfree
    z, y = simplex_phase1(sub_rows, sub_rhs, nz)
    if z is None:
        assert check_farkas(sub_rows, sub_rhs, nz, y)
        raise Infeasible("no QSA certificate of degree %d and qdeg %d" % (d, k), budget, y)
    values = [Fraction(0)] * nfree + z
    for c, i in used.items():
        s = rhs[i]
        for j, v in rows[i].items():
            if j != c and j >= nfree:
                s -= v * z[j - nfree]
        values[c] = s
    return _assemble(phi, system, pos, cols, values)


def _search_points(phi: Qbf, system: str, d: int, k: int, budget) -> Certificate:
    """Full-degree template: one constraint ``h(alpha) + 1 (+ slack) = 0`` per satisfying alpha."""
    pos = {v: i for i, v in enumerate(phi.variables)}
    tmpl = _universal_template(phi, d, k)
    sat = list(satisfying_assignments(phi))
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for a in sat:
        bits = 0
        for v, b in a.items():
            if b:
                bits |= 1 << pos[v]
        row = {}
        for j, (u, m) in enumerate(tmpl):
            if m & bits == m:
                row[j] = Fraction(1 - 2 * a[u])
        if system == "QSA":
            row[len(tmpl) + len(rows)] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(-1))
    nfree = len(tmpl)
    ncols = nfree + (len(sat) if system == "QSA" else 0)
    if system == "QNS":
        ints = [[int(row.get(j, 0)) for j in range(ncols)] for row in rows]
        x, y = bareiss_solve(ints, [-1] * len(rows), ncols)
        if x is None:
            raise Infeasible("no QNS certificate of qdeg %d" % k, budget, y)
        values = x
    else:
        used, rest = _eliminate_free(rows, rhs, range(nfree))
        sub_rows = [{j - nfree: v for j, v in rows[i].items()} for i in rest]
        sub_rhs = [rhs[i] for i in rest]
        z, y = simplex_phase1(sub_rows, sub_rhs, ncols - nfree)
        if z is None:
            assert check_farkas(sub_rows, sub_rhs, ncols - nfree, y)
            raise Infeasible("no QSA certificate of qdeg %d" % k, budget, y)
        values = [Fraction(0)] * nfree + z
        for c, i in used.items():
            s = rhs[i]
            for j, v in rows[i].items():
                if j != c and j >= nfree:
                    s -= v * z[j - nfree]
            values[c] = s
    var_of = phi.variables
    univ: dict[int, Polynomial] = {}
    for (u, m), x in zip(tmpl, values):
        if x:
            univ[u] = univ.get(u, ZERO) + _mask_poly(m, var_of).scale(x)
    h = poly_sum(q * (1 - 2 * Polynomial.var(u)) for u, q in univ.items())
    rem = None
    if system == "QSA":
        rem = Polynomial({indicator(a): values[nfree + i] for i, a in enumerate(sat)})
    mult = {kk: -q for kk, q in express_in_ideal(h + (rem or ZERO) + 1, phi).items()}
    cert = Certificate(system, mult, univ, rem)
    verify(phi, cert)
    return cert


def _search(phi: Qbf, system: str, budget: SearchBudget) -> Certificate:
    d, k = budget.resolve(phi)
    if d >= len(phi.variables):
        return _search_points(phi, system, d, k, budget)
    return _search_general(phi, system, d, k, budget)


def ns_search(phi: Qbf, budget: SearchBudget = SearchBudget()) -> Certificate:
    return _search(phi, "QNS", budget)


def sa_search(phi: Qbf, budget: SearchBudget = SearchBudget()) -> Certificate:
    return _search(phi, "QSA", budget)


def min_qdeg(phi: Qbf, system: str = "QSA", degree: int | None = None,
             max_qdeg: int | None = None, var_cap: int = DEFAULT_VAR_CAP) -> tuple[int, Certificate]:
    """Smallest qdeg cap at which the template is feasible, with the certificate found."""
    d, _ = SearchBudget(degree, None, var_cap).resolve(phi)
    top = d if max_qdeg is None else min(max_qdeg, d)
    fn = sa_search if system == "QSA" else ns_search
    for k in range(0, top + 1):
        try:
            return k, fn(phi, SearchBudget(d, k, var_cap))
        except Infeasible:
            continue
    raise NoneFound("no %s certificate with degree %d and qdeg <= %d" % (system, d, top))
