"""The score game.

The universal player announces, for every universal ``u``, a score polynomial
``s_u`` over the variables quantified before ``u``.  On a total assignment the
universal player earns ``s_u * (2*u - 1)`` summed over ``u``.  In variant 1 a
play satisfying the matrix must have positive total score, in variant 2 total
score exactly 1.  Winning is checked over every total assignment, since the
existential player may choose all values after seeing the scores.

Strategies are plain ``dict[int, Polynomial]`` values keyed by universal
variable.  This module also compiles strategies into certificates, builds
certificates from evaluation-game countermodels, and implements the
restriction/merge procedure that trades Q-size for existential degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .cert import Certificate, existential_degree, qsa_to_qsos
from .errors import (HypothesisViolated, NoSatisfyingAssignment, NotWinning,
                     NotWinningEval, ParseError, SideConditionViolated)
from .poly import (Monomial, Polynomial, ZERO, evaluate, express_in_ideal, reduce_boolean,
                   format_poly, ind_rho, indicator, multilinearize,
                   parse_poly, poly_sum, restrict, restrict_many)
from .qbf import (DEFAULT_CAP, AxiomId, Qbf, all_assignments, check_cap,
                  clause_ax, falsified_clause, restrict_qbf,
                  satisfying_assignments, twin_ax)

ScoreStrategy = dict  # universal variable -> Polynomial


def total_score(sigma: Mapping[int, Polynomial], alpha: Mapping[int, int]) -> Fraction:
    return sum((evaluate(s, alpha) * (2 * alpha[u] - 1) for u, s in sigma.items()), Fraction(0))


def final_score_poly(sigma: Mapping[int, Polynomial]) -> Polynomial:
    """``sum s_u * (2u - 1)`` as a polynomial."""
    return poly_sum(s * (2 * Polynomial.var(u) - 1) for u, s in sigma.items())


def strategy_size(sigma: Mapping[int, Polynomial]) -> int:
    return sum(len(s) for s in sigma.values())


def strategy_qdeg(phi: Qbf, sigma: Mapping[int, Polynomial]) -> int:
    return max((existential_degree(phi, s) for s in sigma.values()), default=0)


def check_strategy_shape(phi: Qbf, sigma: Mapping[int, Polynomial]) -> None:
    for u, s in sigma.items():
        if not phi.is_universal(u):
            raise SideConditionViolated(u, u)
        for v in sorted(s.bases()):
            if not phi.has_var(v) or not phi.left_of(v, u):
                raise SideConditionViolated(u, v)


@dataclass(frozen=True)
class WinResult:
    winning: bool
    counterexample: dict[int, int] | None = None
    score: Fraction | None = None

    def __bool__(self) -> bool:
        return self.winning


def _wins(score: Fraction, variant: int) -> bool:
    return score > 0 if variant == 1 else score == 1


def check_winning(phi: Qbf, sigma: Mapping[int, Polynomial], variant: int,
                  cap: int = DEFAULT_CAP) -> WinResult:
    """Plays that falsify the matrix are won by default; only satisfying plays are scored."""
    if variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    check_strategy_shape(phi, sigma)
    for alpha in satisfying_assignments(phi, cap):
        sc = total_score(sigma, alpha)
        if not _wins(sc, variant):
            return WinResult(False, alpha, sc)
    return WinResult(True)


def require_winning(phi: Qbf, sigma, variant: int, cap: int = DEFAULT_CAP) -> None:
    r = check_winning(phi, sigma, variant, cap)
    if not r:
        raise NotWinning("strategy loses variant %d at %s (score %s)"
                         % (variant, r.counterexample, r.score), r.counterexample)


# evaluation-game strategies ------------------------------------------------

@dataclass
class EvalStrategy:
    """Decision tables: for each universal, rows keyed by the bit tuple of its left variables."""

    tables: dict[int, dict[tuple[int, ...], int]] = field(default_factory=dict)
    default: dict[int, int] = field(default_factory=dict)

    @classmethod
    def constant(cls, phi: Qbf, b: int = 0) -> "EvalStrategy":
        return cls({}, {u: b for u in phi.universals})

    @classmethod
    def from_function(cls, phi: Qbf, fn) -> "EvalStrategy":
        """Tabulate ``fn(u, alpha_left) -> bit`` over all left assignments."""
        tables = {}
        for u in phi.universals:
            left = phi.left_vars(u)
            rows = {}
            for a in all_assignments(left):
                rows[tuple(a[v] for v in left)] = int(fn(u, a))
            tables[u] = rows
        return cls(tables)

    def decide(self, phi: Qbf, u: int, alpha: Mapping[int, int]) -> int:
        key = tuple(alpha[v] for v in phi.left_vars(u))
        row = self.tables.get(u, {}).get(key)
        if row is None:
            row = self.default.get(u)
        if row is None:
            raise KeyError("no decision for universal %d on %s" % (u, key))
        return row


def play_eval(phi: Qbf, tau: EvalStrategy, cap: int = DEFAULT_CAP) -> dict[int, int] | None:
    """First existential play (lexicographic) that satisfies the matrix, or None if ``tau`` wins."""
    check_cap(len(phi.variables), cap)
    order = phi.variables
    alpha: dict[int, int] = {}

    def rec(i: int):
        if falsified_clause(phi, alpha) is not None:
            return None
        if i == len(order):
            return dict(alpha)
        v = order[i]
        if phi.is_universal(v):
            choices = (tau.decide(phi, v, alpha),)
        else:
            choices = (0, 1)
        for b in choices:
            alpha[v] = b
            r = rec(i + 1)
            del alpha[v]
            if r is not None:
                return r
        return None

    return rec(0)


def require_eval_winning(phi: Qbf, tau: EvalStrategy, cap: int = DEFAULT_CAP) -> None:
    bad = play_eval(phi, tau, cap)
    if bad is not None:
        raise NotWinningEval("existential play %s satisfies the matrix" % bad, bad)


def winning_countermodel(phi: Qbf, cap: int = DEFAULT_CAP) -> EvalStrategy:
    """Minimax decision tables; each universal picks the smallest value that keeps the game lost for the existential player."""
    order = phi.variables
    check_cap(len(order), cap)
    memo: dict[tuple[int, ...], bool] = {}

    def val(bits: tuple[int, ...]) -> bool:
        r = memo.get(bits)
        if r is None:
            if falsified_clause(phi, dict(zip(order, bits))) is not None:
                r = False
            elif len(bits) == len(order):
                r = True
            else:
                sub = [val(bits + (b,)) for b in (0, 1)]
                r = any(sub) if phi.is_existential(order[len(bits)]) else all(sub)
            memo[bits] = r
        return r

    if val(()):
        raise NotWinningEval("the formula is true; no countermodel exists")
    return EvalStrategy.from_function(
        phi, lambda u, a: 1 if val(tuple(a[v] for v in phi.left_vars(u)) + (0,)) else 0)


def strategy_from_eval(phi: Qbf, tau: EvalStrategy, cap: int = DEFAULT_CAP) -> ScoreStrategy:
    """Score 1 - S against a deviation from ``tau``, where S is the running score."""
    require_eval_winning(phi, tau, cap)
    running = ZERO
    out: ScoreStrategy = {}
    for u in phi.universals:
        left = phi.left_vars(u)
        tu = ZERO
        for a in all_assignments(left, cap):
            if tau.decide(phi, u, a):
                tu = tu + Polynomial.monomial(indicator(a))
        s = (1 - 2 * tu) * (1 - running)
        if s:
            out[u] = s
        running = running + s * (2 * Polynomial.var(u) - 1)
    return out


# compilation ------------------------------------------------------------------

def _negate(d: dict) -> dict:
    return {k: -q for k, q in d.items()}


def compile_v2_to_qns(phi: Qbf, sigma: Mapping[int, Polynomial],
                      cap: int = DEFAULT_CAP) -> Certificate:
    require_winning(phi, sigma, 2, cap)
    h = poly_sum(s * (1 - 2 * Polynomial.var(u)) for u, s in sigma.items())
    mult = _negate(express_in_ideal(h + 1, phi))
    return Certificate("QNS", mult, dict(sigma))


def compile_v1_to_qsa(phi: Qbf, sigma: Mapping[int, Polynomial], as_qsos: bool = False,
                      strict: bool = False, cap: int = DEFAULT_CAP) -> Certificate:
    """Scale by half the least satisfying score; the slack becomes a nonnegative remainder."""
    require_winning(phi, sigma, 1, cap)
    sat = list(satisfying_assignments(phi, cap))
    if not sat:
        if strict:
            raise NoSatisfyingAssignment("matrix is unsatisfiable")
        qu = dict(sigma)
        rem = ZERO
    else:
        scores = [(a, total_score(sigma, a)) for a in sat]
        c = min(s for _, s in scores) / 2
        qu = {u: s.scale(1 / c) for u, s in sigma.items()}
        rem = Polynomial({indicator(a): s / c - 1 for a, s in scores})
    h = poly_sum(s * (1 - 2 * Polynomial.var(u)) for u, s in qu.items())
    mult = _negate(express_in_ideal(h + rem + 1, phi))
    cert = Certificate("QSA", mult, qu, rem)
    return qsa_to_qsos(cert) if as_qsos else cert


def strategy_of_certificate(c: Certificate) -> ScoreStrategy:
    return dict(c.universal)


# decision-tree completeness -----------------------------------------------------

def complete_from_countermodel(phi: Qbf, tau: EvalStrategy,
                               cap: int = DEFAULT_CAP) -> Certificate:
    """QNS certificate read off the pruned evaluation tree of a winning countermodel.

    Each node ``rho`` expresses ``coef * Ind(rho)``: leaves through the twin-free
    encoding of a falsified clause, existential nodes by splitting, universal
    nodes through ``2*Ind(child) -+ Ind(rho)*(1-2u)``.  The twin-free clause
    products are then rewritten with ``1 - v = ~v - (v + ~v - 1)``.
    """
    check_cap(len(phi.variables), cap)
    order = phi.variables
    clause_coef: dict[int, Polynomial] = {}
    univ: dict[int, Polynomial] = {}

    def rec(i: int, rho: dict[int, int], coef: Fraction) -> None:
        j = falsified_clause(phi, rho)
        if j is not None:
            cvars = {abs(l) for l in phi.clauses[j]}
            rest = {v: b for v, b in rho.items() if v not in cvars}
            clause_coef[j] = clause_coef.get(j, ZERO) + ind_rho(rest).scale(coef)
            return
        if i == len(order):
            raise NotWinningEval("existential play %s satisfies the matrix" % rho, dict(rho))
        v = order[i]
        if phi.is_universal(v):
            b = tau.decide(phi, v, rho)
            term = ind_rho(rho).scale(coef if b else -coef)
            univ[v] = univ.get(v, ZERO) + term
            rho[v] = b
            rec(i + 1, rho, 2 * coef)
            del rho[v]
        else:
            for b in (0, 1):
                rho[v] = b
                rec(i + 1, rho, coef)
                del rho[v]

    rec(0, {}, Fraction(1))
    mult: dict[AxiomId, Polynomial] = {}
    for j, a in sorted(clause_coef.items()):
        mult[clause_ax(j)] = -a
        for v, q in _twin_free_correction(phi.clauses[j]).items():
            k = twin_ax(v)
            mult[k] = mult.get(k, ZERO) + a * q
    return Certificate("QNS", mult, {u: -b for u, b in univ.items()})


def _twin_free_correction(clause) -> dict[int, Polynomial]:
    """``T`` with ``prod(1-v) prod(w) == M(C) - sum T[v]*(v + ~v - 1)``."""
    pos = [l for l in clause if l > 0]
    neg_part = Polynomial.monomial(Monomial(sorted((2 * -l, 1) for l in clause if l < 0)))
    out = {}
    for i, v in enumerate(pos):
        f = neg_part
        for w in pos[:i]:
            f = f * Polynomial.var(w, True)
        for w in pos[i + 1:]:
            f = f * (1 - Polynomial.var(w))
        out[v] = f
    return out


# combining restrictions -------------------------------------------------------------

def _score_extremes(phi: Qbf, sigma, cap: int):
    """``max |score|`` and least positive score over all total assignments of ``phi``."""
    big = Fraction(0)
    least = None
    for a in all_assignments(phi.variables, cap):
        s = total_score(sigma, a)
        big = max(big, abs(s))
        if s > 0 and (least is None or s < least):
            least = s
    return big, least


def combine(phi: Qbf, x: int, sigma1: Mapping[int, Polynomial], sigma0: Mapping[int, Polynomial],
            polarity: int = 1, cap: int = DEFAULT_CAP) -> ScoreStrategy:
    """Merge winning strategies for the two restrictions on ``x``.

    With ``polarity=1`` the result is ``x*s1 + (d/c)*s0``; with ``polarity=-1``
    it is ``~x*s0 + (d/c)*s1``.  The branch multiplied by the literal must
    vanish on every universal left of ``x``, otherwise the product would break
    the quantifier order and :class:`SideConditionViolated` is raised.
    """
    if not phi.is_existential(x):
        raise ValueError("variable %d is not existential" % x)
    phi1, phi0 = restrict_qbf(phi, x, 1), restrict_qbf(phi, x, 0)
    require_winning(phi1, sigma1, 1, cap)
    require_winning(phi0, sigma0, 1, cap)
    if polarity == 1:
        lit, lead, other, rest = Polynomial.var(x), sigma1, sigma0, phi0
        lead_phi = phi1
    elif polarity == -1:
        lit, lead, other, rest = Polynomial.var(x, True), sigma0, sigma1, phi1
        lead_phi = phi0
    else:
        raise ValueError("polarity must be 1 or -1")
    for u, s in lead.items():
        if s and not phi.left_of(x, u):
            raise SideConditionViolated(u, x)
    big, _ = _score_extremes(rest, other, cap)
    _, least = _score_extremes(lead_phi, lead, cap)
    c = big + 1
    d = least if least is not None else Fraction(1)
    out: ScoreStrategy = {}
    for u in phi.universals:
        s = lit * lead.get(u, ZERO) + other.get(u, ZERO).scale(d / c)
        if s:
            out[u] = s
    return out


def restrict_strategy(sigma: Mapping[int, Polynomial], x: int, b: int) -> ScoreStrategy:
    out = {}
    for u, s in sigma.items():
        r = restrict(s, x, b)
        if r:
            out[u] = r
    return out


def high_degree_monomials(phi: Qbf, sigma, d: int) -> list[tuple[int, Monomial]]:
    out = []
    for u, s in sigma.items():
        for m in s.terms:
            if sum(e for k, e in m if phi.is_existential(k >> 1)) > d:
                out.append((u, m))
    return out


def qdeg_reduce(phi: Qbf, sigma: Mapping[int, Polynomial], d: int, b: int,
                cap: int = DEFAULT_CAP) -> ScoreStrategy:
    """Lower the existential degree to at most ``d + b``.

    Requires fewer than ``(1 - d/2n)^(-b)`` monomials of existential degree
    above ``d`` (``n`` existential variables).  A strategy already within
    ``d + b`` is returned as is.  Otherwise splits on the literal that occurs
    in the most such monomials, recurses on both restrictions and merges them
    with :func:`combine`, multiplying the branch in which the literal is false
    by that literal.  If that merge would make a universal depend on a later
    variable, the next most frequent literal is tried, and as a last resort
    the multilinear twin-free normal form of the strategy.
    """
    require_winning(phi, sigma, 1, cap)
    return _reduce(phi, dict(sigma), d, b, cap)


def _reduce(phi: Qbf, sigma: dict, d: int, b: int, cap: int) -> ScoreStrategy:
    high = high_degree_monomials(phi, sigma, d)
    k = len(high)
    n = len(phi.existentials)
    if k == 0:
        return sigma
    if n <= d:
        return {u: s for u, s in ((u, multilinearize(s)) for u, s in sigma.items()) if s}
    if b <= 0 or k * (1 - Fraction(d, 2 * n)) ** b >= 1:
        raise HypothesisViolated(
            "%d monomials of existential degree > %d; need fewer than (1-%d/%d)^-%d"
            % (k, d, d, 2 * n, b))
    if strategy_qdeg(phi, sigma) <= d + b:
        return sigma
    counts: dict[int, int] = {}
    for _, m in high:
        for key in {kk for kk, _ in m}:
            if phi.is_existential(key >> 1):
                counts[key] = counts.get(key, 0) + 1
    # the most frequent literal first; later candidates only when the merge
    # would let a universal depend on a variable quantified after it
    errors: list[Exception] = []
    for key in sorted(counts, key=lambda kk: (-counts[kk], kk >> 1, kk & 1)):
        try:
            return _split(phi, sigma, key, d, b, cap)
        except (SideConditionViolated, HypothesisViolated) as e:
            errors.append(e)
    # no admissible split: the cube normal form is the same strategy, maybe of lower degree
    nf = {u: r for u, r in ((u, reduce_boolean(s)[0]) for u, s in sigma.items()) if r}
    if strategy_qdeg(phi, nf) <= d + b:
        return nf
    raise next((e for e in errors if isinstance(e, SideConditionViolated)), errors[0])


def _split(phi: Qbf, sigma: dict, key: int, d: int, b: int, cap: int) -> ScoreStrategy:
    x = key >> 1
    # the literal is false on its kill branch: x=0 for x, x=1 for ~x
    kill = 1 if key & 1 else 0
    s_kill = _reduce(restrict_qbf(phi, x, kill), restrict_strategy(sigma, x, kill), d, b - 1, cap)
    s_keep = _reduce(restrict_qbf(phi, x, 1 - kill), restrict_strategy(sigma, x, 1 - kill), d, b, cap)
    if kill == 1:
        return combine(phi, x, s_kill, s_keep, polarity=1, cap=cap)
    return combine(phi, x, s_keep, s_kill, polarity=-1, cap=cap)


# file formats ---------------------------------------------------------------------

def format_strategy(sigma: Mapping[int, Polynomial]) -> str:
    return "".join("u %d : %s\n" % (u, format_poly(s)) for u, s in sorted(sigma.items()))


def parse_strategy(text: str) -> ScoreStrategy:
    out: ScoreStrategy = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        toks = head.split()
        if not sep or len(toks) != 2 or toks[0] != "u" or not toks[1].isdigit():
            raise ParseError("expected 'u <var> : <poly>'", ln, 1)
        u = int(toks[1])
        out[u] = out.get(u, ZERO) + parse_poly(body, ln)
    return {u: s for u, s in out.items() if s}


def format_eval_strategy(phi: Qbf, tau: EvalStrategy) -> str:
    lines = []
    for u in phi.universals:
        if u in tau.default:
            lines.append("u %d : * -> %d" % (u, tau.default[u]))
        for key, b in sorted(tau.tables.get(u, {}).items()):
            lines.append("u %d : %s -> %d" % (u, "".join(map(str, key)), b))
    return "\n".join(lines) + "\n"


def parse_eval_strategy(text: str) -> EvalStrategy:
    """Lines ``u <var> : <bits over left variables in prefix order> -> <0|1>``; ``*`` is the default row."""
    tau = EvalStrategy()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        toks = head.split()
        row, arrow, val = body.partition("->")
        row, val = row.strip(), val.strip()
        if (not sep or not arrow or len(toks) != 2 or toks[0] != "u" or not toks[1].isdigit()
                or val not in ("0", "1") or not (row == "*" or set(row) <= {"0", "1"})):
            raise ParseError("expected 'u <var> : <bits|*> -> <0|1>'", ln, 1)
        u = int(toks[1])
        if row == "*":
            tau.default[u] = int(val)
        else:
            tau.tables.setdefault(u, {})[tuple(int(ch) for ch in row)] = int(val)
    return tau
