"""Line-based proof traces and the translations between them and certificates.

Three inference systems are supported:

* QU-resolution: axioms, resolution on any pivot, universal reduction.
* Weighted resolution (Q-w-Res): a sequence of configuration deltas over
  weighted (multiset) clauses.  Only the final configuration is sign
  constrained: it must hold the empty clause with positive weight and no
  negative weights.
* Polynomial calculus for QBF (Q-PC): axioms, linear combination,
  multiplication by a (twin) variable, scaling and universal reduction
  ``p -> p|u=b``.

Step indices are 0-based.  Clauses are tuples of DIMACS literals; in
weighted configurations they are sorted multisets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Union

from .cert import Certificate, check_shape, check_side_conditions, four_squares
from .errors import (FinalConfigViolation, IdentityViolated, InvalidAxiomId,
                     InvalidStep, NotNormalizable, NotRefuted, ParseError)
from .poly import (ExtVar, Monomial, Polynomial, ZERO, bool_axiom, format_poly,
                   poly_sum, restrict, split_on, twin_axiom)
from .qbf import (AxiomId, Qbf, axiom_poly, clause_monomial, clause_of_monomial,
                  norm_clause)


# ---------------------------------------------------------------------------
# QU-resolution

class QAxiom(NamedTuple):
    clause: int


class QResolve(NamedTuple):
    left: int
    right: int
    var: int


class QReduce(NamedTuple):
    premise: int
    var: int


@dataclass
class QuResProof:
    steps: list[Union[QAxiom, QResolve, QReduce]] = field(default_factory=list)


class ProofStats(NamedTuple):
    size: int
    qsize: int


def _ref(i: int, idx: int, n: int) -> None:
    if not isinstance(i, int) or not 0 <= i < n:
        raise InvalidStep(idx, "reference %r is not an earlier step" % (i,))


def _reduction_ok(phi: Qbf, clause, u: int, idx: int) -> None:
    if not phi.is_universal(u):
        raise InvalidStep(idx, "variable %d is not universal" % u)
    for lit in clause:
        v = abs(lit)
        if v != u and not phi.left_of(v, u):
            raise InvalidStep(idx, "variable %d is not left of %d" % (v, u))


def qures_clauses(phi: Qbf, pi: QuResProof) -> list[tuple[int, ...]]:
    """The clause derived at every step; raises :class:`InvalidStep`."""
    out: list[tuple[int, ...]] = []
    for idx, st in enumerate(pi.steps):
        if isinstance(st, QAxiom):
            if not 0 <= st.clause < len(phi.clauses):
                raise InvalidStep(idx, "no matrix clause %d" % st.clause)
            out.append(tuple(phi.clauses[st.clause]))
        elif isinstance(st, QResolve):
            _ref(st.left, idx, len(out))
            _ref(st.right, idx, len(out))
            a, b, x = set(out[st.left]), set(out[st.right]), st.var
            if x in a and -x in b:
                pass
            elif -x in a and x in b:
                a, b = b, a
            else:
                raise InvalidStep(idx, "pivot %d does not occur with both polarities" % x)
            res = (a - {x}) | (b - {-x})
            if any(-l in res for l in res):
                raise InvalidStep(idx, "resolvent is tautological")
            out.append(norm_clause(res))
        elif isinstance(st, QReduce):
            _ref(st.premise, idx, len(out))
            c = out[st.premise]
            u = st.var
            if u not in c and -u not in c:
                raise InvalidStep(idx, "variable %d does not occur in the premise" % u)
            _reduction_ok(phi, c, u, idx)
            out.append(tuple(l for l in c if abs(l) != u))
        else:
            raise InvalidStep(idx, "unknown step %r" % (st,))
    return out


def check_qures(phi: Qbf, pi: QuResProof) -> ProofStats:
    cl = qures_clauses(phi, pi)
    if not cl or cl[-1]:
        raise InvalidStep(max(len(cl) - 1, 0), "the last derived clause is not empty")
    return ProofStats(len(pi.steps), sum(isinstance(s, QReduce) for s in pi.steps))


# ---------------------------------------------------------------------------
# weighted resolution

class WAxiom(NamedTuple):
    clause: tuple[int, ...]
    w: int


class WCut(NamedTuple):
    ctx: tuple[int, ...]
    var: int
    w: int


class WIdem(NamedTuple):
    ctx: tuple[int, ...]
    lit: int
    w: int


class WRed(NamedTuple):
    ctx: tuple[int, ...]
    lit: int
    w: int


WStep = Union[WAxiom, WCut, WIdem, WRed]


@dataclass
class WResProof:
    steps: list[WStep] = field(default_factory=list)


def wstep_deltas(st: WStep) -> list[tuple[tuple[int, ...], Fraction]]:
    """The configuration changes of one step (negative weight runs the rule backwards)."""
    w = st.w
    if isinstance(st, WAxiom):
        return [(norm_clause(st.clause), w)]
    c = tuple(st.ctx)
    if isinstance(st, WCut):
        x = abs(st.var)
        return [(norm_clause(c + (x,)), -w), (norm_clause(c + (-x,)), -w), (norm_clause(c), w)]
    if isinstance(st, WIdem):
        l = st.lit
        return [(norm_clause(c + (l, l)), -w), (norm_clause(c + (l,)), w)]
    if isinstance(st, WRed):
        return [(norm_clause(c + (st.lit,)), -2 * w), (norm_clause(c), w)]
    raise TypeError(st)


def replay_wres(phi: Qbf, pi: WResProof) -> dict[tuple[int, ...], Fraction]:
    matrix = {norm_clause(c) for c in phi.clauses}
    conf: dict[tuple[int, ...], Fraction] = {}
    for idx, st in enumerate(pi.steps):
        if not isinstance(st, (WAxiom, WCut, WIdem, WRed)):
            raise InvalidStep(idx, "unknown step %r" % (st,))
        if not st.w:
            raise InvalidStep(idx, "zero weight")
        if isinstance(st, WAxiom):
            if norm_clause(st.clause) not in matrix:
                raise InvalidStep(idx, "%s is not a matrix clause" % (st.clause,))
        else:
            lits = tuple(st.ctx) + ((st.var,) if isinstance(st, WCut) else (st.lit,))
            for l in lits:
                if not l or not phi.has_var(abs(l)):
                    raise InvalidStep(idx, "unknown literal %r" % l)
        if isinstance(st, WRed):
            _reduction_ok(phi, st.ctx, abs(st.lit), idx)
            if any(abs(l) == abs(st.lit) for l in st.ctx):
                raise InvalidStep(idx, "context mentions the reduced variable")
        for c, d in wstep_deltas(st):
            s = conf.get(c, 0) + d
            if s:
                conf[c] = s
            else:
                conf.pop(c, None)
    return conf


def check_wres(phi: Qbf, pi: WResProof) -> ProofStats:
    conf = replay_wres(phi, pi)
    if conf.get((), 0) <= 0:
        raise FinalConfigViolation("the final configuration has no positive empty clause")
    bad = [(c, w) for c, w in conf.items() if w < 0]
    if bad:
        raise FinalConfigViolation("negative weight %s on clause %s" % (bad[0][1], bad[0][0]))
    return ProofStats(len(pi.steps), sum(isinstance(s, WRed) for s in pi.steps))


# ---------------------------------------------------------------------------
# polynomial calculus

class PAxiom(NamedTuple):
    axiom: AxiomId


class PLin(NamedTuple):
    left: int
    right: int
    a: Fraction
    b: Fraction


class PMul(NamedTuple):
    premise: int
    var: ExtVar


class PScale(NamedTuple):
    premise: int
    a: Fraction


class PRed(NamedTuple):
    premise: int
    var: int
    bit: int


PStep = Union[PAxiom, PLin, PMul, PScale, PRed]


@dataclass
class QpcProof:
    steps: list[PStep] = field(default_factory=list)


def qpc_lines(phi: Qbf, pi: QpcProof) -> list[Polynomial]:
    out: list[Polynomial] = []
    for idx, st in enumerate(pi.steps):
        n = len(out)
        if isinstance(st, PAxiom):
            try:
                p = axiom_poly(phi, AxiomId(*st.axiom))
            except InvalidAxiomId as e:
                raise InvalidStep(idx, str(e)) from None
        elif isinstance(st, PLin):
            _ref(st.left, idx, n)
            _ref(st.right, idx, n)
            p = out[st.left].scale(st.a) + out[st.right].scale(st.b)
        elif isinstance(st, PMul):
            _ref(st.premise, idx, n)
            ev = ExtVar(*st.var)
            if not phi.has_var(ev.base):
                raise InvalidStep(idx, "unknown variable %d" % ev.base)
            p = out[st.premise] * Polynomial.var(ev.base, ev.twin)
        elif isinstance(st, PScale):
            _ref(st.premise, idx, n)
            p = out[st.premise].scale(st.a)
        elif isinstance(st, PRed):
            _ref(st.premise, idx, n)
            if st.bit not in (0, 1):
                raise InvalidStep(idx, "reduction bit must be 0 or 1")
            prem = out[st.premise]
            _reduction_ok(phi, [v for v in prem.bases()], st.var, idx)
            p = restrict(prem, st.var, st.bit)
        else:
            raise InvalidStep(idx, "unknown step %r" % (st,))
        out.append(p)
    return out


def check_qpc(phi: Qbf, pi: QpcProof) -> ProofStats:
    lines = qpc_lines(phi, pi)
    if not lines or lines[-1] != Polynomial.const(1):
        raise NotRefuted("the last derived polynomial is %s, not 1"
                         % (format_poly(lines[-1]) if lines else "missing"))
    size = sum(len(p) for p in lines)
    qsize = sum(len(lines[s.premise]) for s in pi.steps if isinstance(s, PRed))
    return ProofStats(size, qsize)


# ---------------------------------------------------------------------------
# weighted resolution <-> QSA

class _Mult:
    def __init__(self):
        self.mult: dict[AxiomId, Polynomial] = {}
        self.univ: dict[int, Polynomial] = {}

    def ax(self, k: AxiomId, p: Polynomial) -> None:
        self.mult[k] = self.mult.get(k, ZERO) + p

    def u(self, u: int, p: Polynomial) -> None:
        self.univ[u] = self.univ.get(u, ZERO) + p


def _mono(clause) -> Polynomial:
    return Polynomial.monomial(clause_monomial(clause))


def wres_to_qsa(phi: Qbf, pi: WResProof) -> Certificate:
    """Each step changes ``-sum w*M(C)`` by a multiple of one axiom or of ``(1-2u)``."""
    check_wres(phi, pi)
    index = {}
    for j, c in enumerate(phi.clauses):
        index.setdefault(norm_clause(c), j)
    acc = _Mult()
    for st in pi.steps:
        w = Fraction(st.w)
        if isinstance(st, WAxiom):
            acc.ax(AxiomId("clause", index[norm_clause(st.clause)]), Polynomial.const(-w))
            continue
        m = _mono(st.ctx).scale(w)
        if isinstance(st, WCut):
            acc.ax(AxiomId("twin", abs(st.var)), m)
        elif isinstance(st, WIdem):
            x = abs(st.lit)
            acc.ax(AxiomId("bool", x), m)
            if st.lit > 0:
                acc.ax(AxiomId("twin", x), m * (Polynomial.var(x, True) - Polynomial.var(x)))
        else:
            u = abs(st.lit)
            if st.lit < 0:
                acc.u(u, -m)
            else:
                acc.u(u, m)
                acc.ax(AxiomId("twin", u), m.scale(2))
    conf = replay_wres(phi, pi)
    c = conf[()]
    rem = Polynomial({clause_monomial(cl): w / c for cl, w in conf.items() if cl})
    mult = {k: q.scale(1 / c) for k, q in acc.mult.items()}
    univ = {u: q.scale(1 / c) for u, q in acc.univ.items()}
    return Certificate("QSA", mult, univ, rem)


def qsa_to_wres(phi: Qbf, c: Certificate) -> WResProof:
    """Read weighted-resolution steps off a QSA certificate.

    Clause multipliers are first made non-positive scalars: a positive term
    ``a*m`` of ``q_C`` is moved into the remainder, a negative one is expanded
    by weakening ``C`` literal by literal into ``C + clause(m)``, which costs
    twin-axiom terms and further positive remainder terms.  Every remaining
    term maps to one step: Boolean terms to idempotence, twin terms to cuts,
    universal terms to reductions on the negative literal.
    """
    if c.system not in ("QSA", "QNS"):
        raise NotNormalizable("expected a QSA certificate, got %s" % c.system)
    try:
        check_side_conditions(phi, c)
        check_shape(c)
    except Exception as e:
        raise NotNormalizable(str(e)) from e
    res = c.expression(phi)
    if res:
        raise NotNormalizable("certificate identity fails; residual %s" % format_poly(res))
    axioms: dict[int, Fraction] = {}
    twins: dict[int, Polynomial] = {}
    bools: dict[int, Polynomial] = {}
    for k, q in c.multipliers.items():
        if k.kind == "bool":
            bools[k.ref] = bools.get(k.ref, ZERO) + q
        elif k.kind == "twin":
            twins[k.ref] = twins.get(k.ref, ZERO) + q
    for k, q in c.multipliers.items():
        if k.kind != "clause":
            continue
        base = tuple(phi.clauses[k.ref])
        for m, a in q:
            if a > 0:
                continue
            axioms[k.ref] = axioms.get(k.ref, Fraction(0)) - a
            extra = [l for l in clause_of_monomial(m)]
            ctx = base
            for lit in extra:
                # -|a| M(ctx + lit) = -|a| M(ctx) + |a| M(ctx + ~lit) - |a| M(ctx) * twin(lit)
                x = abs(lit)
                twins[x] = twins.get(x, ZERO) + _mono(ctx).scale(a)
                ctx = ctx + (lit,)
    steps: list[WStep] = []
    for j in sorted(axioms):
        if axioms[j]:
            steps.append(WAxiom(tuple(phi.clauses[j]), axioms[j]))
    for x in sorted(twins):
        for m, a in twins[x]:
            steps.append(WCut(clause_of_monomial(m), x, a))
    for x in sorted(bools):
        for m, a in bools[x]:
            steps.append(WIdem(clause_of_monomial(m), -x, a))
    for u, q in c.universal.items():
        for m, a in q:
            steps.append(WRed(clause_of_monomial(m), -u, -a))
    return WResProof(_integral(steps))


def _integral(steps: list[WStep]) -> list[WStep]:
    den = 1
    for s in steps:
        den = lcm(den, Fraction(s.w).denominator)
    return [s._replace(w=int(Fraction(s.w) * den)) for s in steps]


def qures_to_wres(phi: Qbf, pi: QuResProof) -> WResProof:
    """Replay a QU-resolution proof with halving weights.

    A resolution weakens half of each premise up to the resolvent's literals
    (reverse cuts) and then cuts half of the smaller weight.  A reduction
    consumes half of the premise's weight.
    """
    clauses = qures_clauses(phi, pi)
    check_qures(phi, pi)
    conf: dict[tuple[int, ...], Fraction] = {}
    steps: list[WStep] = []

    def emit(st: WStep) -> None:
        steps.append(st)
        for c, d in wstep_deltas(st):
            conf[c] = conf.get(c, 0) + d

    def weaken(base: tuple, target: set, w: Fraction) -> None:
        ctx = tuple(base)
        for lit in sorted(target - set(base), key=lambda l: (abs(l), l > 0)):
            emit(WCut(ctx, abs(lit), -w))
            ctx = norm_clause(ctx + (lit,))

    for idx, st in enumerate(pi.steps):
        if isinstance(st, QAxiom):
            emit(WAxiom(tuple(phi.clauses[st.clause]), Fraction(1)))
        elif isinstance(st, QReduce):
            prem = clauses[st.premise]
            w = conf[norm_clause(prem)]
            lit = next(l for l in prem if abs(l) == st.var)
            emit(WRed(clauses[idx], lit, w / 4))
        else:
            a, b, x = clauses[st.left], clauses[st.right], st.var
            if x not in a:
                a, b = b, a
            res = set(clauses[idx])
            wa, wb = conf[norm_clause(a)] / 2, conf[norm_clause(b)] / 2
            weaken(a, res | {x}, wa)
            weaken(b, res | {-x}, wb)
            emit(WCut(norm_clause(res), x, min(wa, wb)))
    return WResProof(_integral(steps))


# ---------------------------------------------------------------------------
# QNS -> Q-PC -> QSOS

def qns_to_qpc(phi: Qbf, c: Certificate) -> QpcProof:
    """Derive ``sum q_p p``, then remove the universal terms right to left."""
    check_side_conditions(phi, c)
    res = c.expression(phi)
    if c.system != "QNS" or res:
        raise IdentityViolated(res)
    steps: list[PStep] = []
    acc = None
    for k, q in c.multipliers.items():
        for m, a in q:
            steps.append(PAxiom(k))
            for key, e in m:
                for _ in range(e):
                    steps.append(PMul(len(steps) - 1, ExtVar.from_key(key)))
            if acc is None:
                steps.append(PScale(len(steps) - 1, a))
            else:
                steps.append(PLin(acc, len(steps) - 1, Fraction(1), a))
            acc = len(steps) - 1
    if acc is None:
        raise IdentityViolated(res)
    order = [u for u in reversed(phi.universals) if u in c.universal]
    for u in order:
        steps.append(PRed(acc, u, 1))
        steps.append(PRed(acc, u, 0))
        n = len(steps)
        steps.append(PLin(n - 2, n - 1, Fraction(1, 2), Fraction(1, 2)))
        acc = len(steps) - 1
    steps.append(PScale(acc, Fraction(-1)))
    return QpcProof(steps)


class _NegSquare:
    """A certified expression ``-p^2 = sum m_k*axiom_k + sum U_u*(1-2u) + sum c*s^2``."""

    __slots__ = ("mult", "univ", "sq")

    def __init__(self, mult=None, univ=None, sq=None):
        self.mult: dict[AxiomId, Polynomial] = mult or {}
        self.univ: dict[int, Polynomial] = univ or {}
        self.sq: dict[Polynomial, Fraction] = sq or {}

    def scaled(self, a: Fraction) -> "_NegSquare":
        return _NegSquare({k: q.scale(a) for k, q in self.mult.items()},
                          {u: q.scale(a) for u, q in self.univ.items()},
                          {s: c * a for s, c in self.sq.items()})

    def plus(self, other: "_NegSquare") -> "_NegSquare":
        out = _NegSquare(dict(self.mult), dict(self.univ), dict(self.sq))
        for k, q in other.mult.items():
            out.add_ax(k, q)
        for u, q in other.univ.items():
            out.add_u(u, q)
        for s, c in other.sq.items():
            out.add_sq(s, c)
        return out

    def add_ax(self, k: AxiomId, q: Polynomial) -> None:
        r = self.mult.get(k, ZERO) + q
        if r:
            self.mult[k] = r
        else:
            self.mult.pop(k, None)

    def add_u(self, u: int, q: Polynomial) -> None:
        r = self.univ.get(u, ZERO) + q
        if r:
            self.univ[u] = r
        else:
            self.univ.pop(u, None)

    def add_sq(self, s: Polynomial, c: Fraction) -> None:
        if not s or not c:
            return
        # keep one representative per square up to sign
        if (-s) in self.sq:
            s = -s
        self.sq[s] = self.sq.get(s, Fraction(0)) + c


def qpc_to_qsos(phi: Qbf, pi: QpcProof) -> Certificate:
    """Carry an expression for ``-p_i^2`` along the derivation; at ``p = 1`` it is a QSOS certificate."""
    lines = qpc_lines(phi, pi)
    check_qpc(phi, pi)
    ex: list[_NegSquare] = []
    for st, p in zip(pi.steps, lines):
        if isinstance(st, PAxiom):
            e = _NegSquare({AxiomId(*st.axiom): -p})
        elif isinstance(st, PLin):
            a, b = Fraction(st.a), Fraction(st.b)
            P, Q = lines[st.left], lines[st.right]
            e = ex[st.left].scaled(2 * a * a).plus(ex[st.right].scaled(2 * b * b))
            e.add_sq(P.scale(a) - Q.scale(b), Fraction(1))
        elif isinstance(st, PScale):
            e = ex[st.premise].scaled(Fraction(st.a) ** 2)
        elif isinstance(st, PMul):
            P = lines[st.premise]
            ev = ExtVar(*st.var)
            e = ex[st.premise].plus(_NegSquare())
            e.add_sq(P - p, Fraction(1))
            P2 = P * P
            e.add_ax(AxiomId("bool", ev.base), P2.scale(-2))
            if ev.twin:
                x, xt = Polynomial.var(ev.base), Polynomial.var(ev.base, True)
                e.add_ax(AxiomId("twin", ev.base), P2.scale(-2) * (xt - x))
        else:
            e = _reduction_step(ex[st.premise], lines[st.premise], st.var, st.bit)
        ex.append(e)
    final = ex[-1]
    squares: list[Polynomial] = []
    for s, cf in sorted(final.sq.items(), key=lambda t: str(t[0])):
        for k in four_squares(cf.numerator * cf.denominator):
            if k:
                squares.append(s.scale(Fraction(k, cf.denominator)))
    return Certificate("QSOS", final.mult, final.univ, squares)


def _reduction_step(E: _NegSquare, P: Polynomial, u: int, bit: int) -> _NegSquare:
    """From ``-P^2`` to ``-(P|u=bit)^2``.

    ``P`` is first rewritten as ``p + q*u`` with ``p, q`` free of ``u``; then
    ``-p^2 = -2(p+qu)^2 + (p+q)^2 - (q^2+2pq)(1-2u) + 2q^2(u^2-u)`` and
    ``-(p+q)^2 = -2(p+qu)^2 + p^2 - (q^2+2pq)(1-2u) + 2q^2(u^2-u)``.
    """
    p0, p1, bm, tm = split_on(P, u)
    q = p1 - p0
    # P = (p0 + q u) + D with D = bm*(u^2-u) + (tm + p0)*(u + ~u - 1)
    tcoef = tm + p0
    D = bm * bool_axiom(u) + tcoef * twin_axiom(u)
    E1 = E.plus(_NegSquare())
    if D:
        f = P.scale(2) - D
        E1.add_ax(AxiomId("bool", u), f * bm)
        E1.add_ax(AxiomId("twin", u), f * tcoef)
    out = E1.scaled(Fraction(2))
    out.add_sq(p0 + q if bit == 0 else p0, Fraction(1))
    out.add_u(u, -(q * q + (p0 * q).scale(2)))
    out.add_ax(AxiomId("bool", u), (q * q).scale(2))
    return out


# ---------------------------------------------------------------------------
# file formats

def _lits_text(lits) -> str:
    return " ".join(str(l) for l in lits) + (" 0" if lits else "0")


def format_qures(pi: QuResProof) -> str:
    out = []
    for st in pi.steps:
        if isinstance(st, QAxiom):
            out.append("a %d" % st.clause)
        elif isinstance(st, QResolve):
            out.append("r %d %d %d" % (st.left, st.right, st.var))
        else:
            out.append("d %d %d" % (st.premise, st.var))
    return "\n".join(out) + "\n"


def format_wres(pi: WResProof) -> str:
    out = []
    for st in pi.steps:
        if isinstance(st, WAxiom):
            out.append("ax %s : %s" % (st.w, _lits_text(st.clause)))
        elif isinstance(st, WCut):
            out.append("cut %s %d : %s" % (st.w, st.var, _lits_text(st.ctx)))
        elif isinstance(st, WIdem):
            out.append("idem %s %d : %s" % (st.w, st.lit, _lits_text(st.ctx)))
        else:
            out.append("red %s %d : %s" % (st.w, st.lit, _lits_text(st.ctx)))
    return "\n".join(out) + "\n"


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def format_qpc(pi: QpcProof) -> str:
    out = []
    for st in pi.steps:
        if isinstance(st, PAxiom):
            out.append("ax %s %d" % st.axiom)
        elif isinstance(st, PLin):
            out.append("lin %d %d %s %s" % (st.left, st.right, _frac(st.a), _frac(st.b)))
        elif isinstance(st, PMul):
            out.append("mul %d %s" % (st.premise, ExtVar(*st.var)))
        elif isinstance(st, PScale):
            out.append("scale %d %s" % (st.premise, _frac(st.a)))
        else:
            out.append("red %d %d %d" % (st.premise, st.var, st.bit))
    return "\n".join(out) + "\n"


def _content(text: str):
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line


def _int(tok: str, ln: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError("not an integer: %r" % tok, ln, 1) from None


def _rat(tok: str, ln: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError("not a rational: %r" % tok, ln, 1) from None


def parse_qures(text: str) -> QuResProof:
    steps = []
    for ln, line in _content(text):
        t = line.split()
        if t[0] == "a" and len(t) == 2:
            steps.append(QAxiom(_int(t[1], ln)))
        elif t[0] == "r" and len(t) == 4:
            steps.append(QResolve(_int(t[1], ln), _int(t[2], ln), abs(_int(t[3], ln))))
        elif t[0] == "d" and len(t) == 3:
            steps.append(QReduce(_int(t[1], ln), abs(_int(t[2], ln))))
        else:
            raise ParseError("unrecognised QU-resolution line", ln, 1)
    return QuResProof(steps)


def parse_wres(text: str) -> WResProof:
    steps: list[WStep] = []
    for ln, line in _content(text):
        head, sep, body = line.partition(":")
        t = head.split()
        if not sep or not t:
            raise ParseError("missing ':'", ln, 1)
        lits = [_int(x, ln) for x in body.split()]
        if not lits or lits[-1] != 0 or 0 in lits[:-1]:
            raise ParseError("literal list must end with a single 0", ln, len(head) + 2)
        lits = tuple(lits[:-1])
        if t[0] == "ax" and len(t) == 2:
            steps.append(WAxiom(lits, _int(t[1], ln)))
        elif t[0] in ("cut", "idem", "red") and len(t) == 3:
            w, v = _int(t[1], ln), _int(t[2], ln)
            if v == 0:
                raise ParseError("variable 0", ln, 1)
            cls = {"cut": WCut, "idem": WIdem, "red": WRed}[t[0]]
            steps.append(cls(lits, abs(v) if cls is WCut else v, w))
        else:
            raise ParseError("unrecognised weighted-resolution line", ln, 1)
    return WResProof(steps)


def _extvar(tok: str, ln: int) -> ExtVar:
    tw = tok.startswith("~")
    body = tok[1:] if tw else tok
    if body.startswith("x"):
        body = body[1:]
    v = _int(body, ln)
    if v < 1:
        raise ParseError("bad variable %r" % tok, ln, 1)
    return ExtVar(v, tw)


def parse_qpc(text: str) -> QpcProof:
    steps: list[PStep] = []
    for ln, line in _content(text):
        t = line.split()
        if t[0] == "ax" and len(t) == 3 and t[1] in ("clause", "bool", "twin"):
            steps.append(PAxiom(AxiomId(t[1], _int(t[2], ln))))
        elif t[0] == "lin" and len(t) == 5:
            steps.append(PLin(_int(t[1], ln), _int(t[2], ln), _rat(t[3], ln), _rat(t[4], ln)))
        elif t[0] == "mul" and len(t) == 3:
            steps.append(PMul(_int(t[1], ln), _extvar(t[2], ln)))
        elif t[0] == "scale" and len(t) == 3:
            steps.append(PScale(_int(t[1], ln), _rat(t[2], ln)))
        elif t[0] == "red" and len(t) == 4:
            steps.append(PRed(_int(t[1], ln), _int(t[2], ln), _int(t[3], ln)))
        else:
            raise ParseError("unrecognised Q-PC line", ln, 1)
    return QpcProof(steps)


def proof_kind(text: str) -> str | None:
    """Guess the trace format from its first keyword: ``qures``, ``wres`` or ``qpc``."""
    for _, line in _content(text):
        t = line.split()
        if t[0] in ("a", "r", "d"):
            return "qures"
        if t[0] in ("cut", "idem") or (":" in line and t[0] in ("ax", "red")):
            return "wres"
        if t[0] in ("ax", "lin", "mul", "scale", "red"):
            return "qpc"
        return None
    return None
