"""QBF data model, QDIMACS I/O, clause encoding and the benchmark families.

A literal is a nonzero DIMACS integer.  A clause is a tuple of literals sorted
by ``(variable, sign)``; the prefix is an ordered tuple of ``(quantifier, var)``
pairs with quantifier ``'e'`` or ``'a'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

from .errors import (InvalidAxiomId, InvalidSize, NotExistential, ParseError,
                     TautologyError, TooLarge, UndeclaredVariable)
from .poly import Monomial, Polynomial, _clause_monomial, bool_axiom, twin_axiom

DEFAULT_CAP = 24


def norm_clause(lits) -> tuple[int, ...]:
    return tuple(sorted(lits, key=lambda l: (abs(l), l > 0)))


def clause_text(clause) -> str:
    return " ".join(str(l) for l in clause) + (" 0" if clause else "0")


@dataclass(frozen=True)
class Qbf:
    prefix: tuple[tuple[str, int], ...]
    clauses: tuple[tuple[int, ...], ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pos = {}
        for i, (q, v) in enumerate(self.prefix):
            if q not in ("e", "a"):
                raise ValueError("quantifier must be 'e' or 'a'")
            if v in pos:
                raise ValueError("variable %d quantified twice" % v)
            pos[v] = i
        for c in self.clauses:
            for lit in c:
                if abs(lit) not in pos:
                    raise UndeclaredVariable("variable %d not in prefix" % abs(lit))
        object.__setattr__(self, "_pos", pos)

    @classmethod
    def build(cls, prefix: Sequence[tuple[str, int]], clauses) -> "Qbf":
        return cls(tuple((q, int(v)) for q, v in prefix),
                   tuple(norm_clause(c) for c in clauses))

    @cached_property
    def variables(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.prefix)

    @cached_property
    def universals(self) -> tuple[int, ...]:
        return tuple(v for q, v in self.prefix if q == "a")

    @cached_property
    def existentials(self) -> tuple[int, ...]:
        return tuple(v for q, v in self.prefix if q == "e")

    def position(self, v: int) -> int:
        return self._pos[v]

    def has_var(self, v: int) -> bool:
        return v in self._pos

    def is_universal(self, v: int) -> bool:
        return v in self._pos and self.prefix[self._pos[v]][0] == "a"

    def is_existential(self, v: int) -> bool:
        return v in self._pos and self.prefix[self._pos[v]][0] == "e"

    def left_of(self, w: int, u: int) -> bool:
        return self._pos[w] < self._pos[u]

    def left_vars(self, u: int) -> tuple[int, ...]:
        return self.variables[:self._pos[u]]


class AxiomId(NamedTuple):
    """``kind`` is ``'clause'`` (ref = clause index), ``'bool'`` or ``'twin'`` (ref = variable)."""

    kind: str
    ref: int

    def __str__(self) -> str:
        return "%s %d" % (self.kind, self.ref)


def clause_ax(j: int) -> AxiomId:
    return AxiomId("clause", j)


def bool_ax(v: int) -> AxiomId:
    return AxiomId("bool", v)


def twin_ax(v: int) -> AxiomId:
    return AxiomId("twin", v)


def clause_monomial(clause) -> Monomial:
    """``M(C)``: ``~v`` for each positive literal, ``v`` for each negative one."""
    return _clause_monomial(tuple(clause))


def clause_of_monomial(m: Monomial) -> tuple[int, ...]:
    """Inverse of :func:`clause_monomial` (a multiset clause)."""
    lits = []
    for k, e in m:
        lit = (k >> 1) if k & 1 else -(k >> 1)
        lits.extend([lit] * e)
    return norm_clause(lits)


def axiom_poly(phi: Qbf, aid: AxiomId) -> Polynomial:
    kind, ref = aid
    if kind == "clause":
        if not 0 <= ref < len(phi.clauses):
            raise InvalidAxiomId("clause index %d out of range" % ref)
        return Polynomial.monomial(clause_monomial(phi.clauses[ref]))
    if kind in ("bool", "twin"):
        if not phi.has_var(ref):
            raise InvalidAxiomId("variable %d not in prefix" % ref)
        return bool_axiom(ref) if kind == "bool" else twin_axiom(ref)
    raise InvalidAxiomId("unknown axiom kind %r" % kind)


def all_axioms(phi: Qbf) -> list[AxiomId]:
    out = [clause_ax(j) for j in range(len(phi.clauses))]
    out += [bool_ax(v) for v in phi.variables]
    out += [twin_ax(v) for v in phi.variables]
    return out


# restriction --------------------------------------------------------------

def restrict_qbf_map(phi: Qbf, v: int, b: int) -> tuple[Qbf, dict[int, int]]:
    """Restriction plus the map old clause index -> new index (satisfied clauses absent)."""
    if not phi.is_existential(v):
        raise NotExistential("variable %d is not existential in the prefix" % v)
    true_lit = v if b else -v
    clauses = []
    index = {}
    for j, c in enumerate(phi.clauses):
        if true_lit in c:
            continue
        index[j] = len(clauses)
        clauses.append(tuple(l for l in c if l != -true_lit))
    prefix = tuple(e for e in phi.prefix if e[1] != v)
    return Qbf(prefix, tuple(clauses)), index


def restrict_qbf(phi: Qbf, v: int, b: int) -> Qbf:
    return restrict_qbf_map(phi, v, b)[0]


# semantics ----------------------------------------------------------------

def satisfies(clauses, alpha) -> bool:
    for c in clauses:
        for lit in c:
            if (alpha[abs(lit)] == 1) == (lit > 0):
                break
        else:
            return False
    return True


def falsified_clause(phi: Qbf, alpha) -> int | None:
    """Index of the first clause all of whose literals are false under ``alpha``."""
    for j, c in enumerate(phi.clauses):
        for lit in c:
            b = alpha.get(abs(lit))
            if b is None or (b == 1) == (lit > 0):
                break
        else:
            return j
    return None


def check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise TooLarge("%d variables exceed the cap of %d" % (n, cap))


def satisfying_assignments(phi: Qbf, cap: int = DEFAULT_CAP) -> Iterator[dict[int, int]]:
    """All total assignments satisfying the matrix, lexicographic in prefix order (0 before 1)."""
    check_cap(len(phi.variables), cap)
    order = phi.variables
    n = len(order)
    occurs: dict[int, list[int]] = {v: [] for v in order}
    last = [-1] * len(phi.clauses)
    for j, c in enumerate(phi.clauses):
        for lit in c:
            occurs[abs(lit)].append(j)
            last[j] = max(last[j], phi.position(abs(lit)))
    closing: list[list[int]] = [[] for _ in range(n)]
    empty_clause = False
    for j, c in enumerate(phi.clauses):
        if not c:
            empty_clause = True
        else:
            closing[last[j]].append(j)
    if empty_clause:
        return
    alpha: dict[int, int] = {}
    clauses = phi.clauses

    def ok(i: int) -> bool:
        for j in closing[i]:
            for lit in clauses[j]:
                if (alpha[abs(lit)] == 1) == (lit > 0):
                    break
            else:
                return False
        return True

    def rec(i: int):
        if i == n:
            yield dict(alpha)
            return
        v = order[i]
        for b in (0, 1):
            alpha[v] = b
            if ok(i):
                yield from rec(i + 1)
        del alpha[v]

    yield from rec(0)


def all_assignments(variables: Sequence[int], cap: int = DEFAULT_CAP) -> Iterator[dict[int, int]]:
    check_cap(len(variables), cap)
    n = len(variables)
    for bits in range(1 << n):
        yield {v: (bits >> (n - 1 - i)) & 1 for i, v in enumerate(variables)}


def evaluate_qbf(phi: Qbf, cap: int = DEFAULT_CAP) -> bool:
    """Minimax over the prefix with clause simplification."""
    check_cap(len(phi.variables), cap)
    prefix = phi.prefix

    def rec(i: int, clauses: tuple) -> bool:
        if not clauses:
            return True
        if any(not c for c in clauses):
            return False
        q, v = prefix[i]
        results = []
        for b in (0, 1):
            t = v if b else -v
            nxt = tuple(tuple(l for l in c if l != -t) for c in clauses if t not in c)
            r = rec(i + 1, nxt)
            if q == "e" and r:
                return True
            if q == "a" and not r:
                return False
            results.append(r)
        return q == "a"

    return rec(0, phi.clauses)


# QDIMACS -----------------------------------------------------------------

def parse_qdimacs(text: str) -> Qbf:
    prefix: list[tuple[str, int]] = []
    clauses: list[tuple[int, ...]] = []
    header = None
    pending: list[int] = []
    seen: set[int] = set()
    clause_started = False
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise ParseError("duplicate problem line", ln, 1)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("malformed problem line", ln, 1)
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError("malformed problem line", ln, 1) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative counts in problem line", ln, 1)
            continue
        if header is None:
            raise ParseError("missing problem line", ln, 1)
        if toks[0] in ("e", "a"):
            if clause_started:
                raise ParseError("quantifier block after clauses", ln, 1)
            col = len(raw) - len(raw.lstrip()) + 3
            nums = _ints(toks[1:], ln, raw)
            if not nums or nums[-1] != 0:
                raise ParseError("quantifier line must end with 0", ln, len(raw))
            for v in nums[:-1]:
                if v <= 0 or v > header[0]:
                    raise ParseError("bad variable %d in quantifier block" % v, ln, col)
                if v in seen:
                    raise ParseError("variable %d quantified twice" % v, ln, col)
                seen.add(v)
                prefix.append((toks[0], v))
            continue
        clause_started = True
        for k, lit in enumerate(_ints(toks, ln, raw)):
            if lit == 0:
                _finish_clause(pending, seen, clauses, ln, header)
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise ParseError("missing problem line", 0, 0)
    if pending:
        raise ParseError("last clause not terminated by 0", len(text.splitlines()), 1)
    if len(clauses) != header[1]:
        raise ParseError("expected %d clauses, found %d" % (header[1], len(clauses)),
                         len(text.splitlines()), 1)
    return Qbf(tuple(prefix), tuple(clauses))


def _ints(toks, ln, raw):
    out = []
    for t in toks:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError("not an integer: %r" % t, ln, raw.find(t) + 1) from None
    return out


def _finish_clause(lits, seen, clauses, ln, header):
    for lit in lits:
        if abs(lit) > header[0]:
            raise ParseError("literal %d exceeds declared variable count" % lit, ln, 1)
        if abs(lit) not in seen:
            raise UndeclaredVariable("free variable %d (free variables are rejected)" % abs(lit), ln, 1)
    s = set(lits)
    for lit in s:
        if -lit in s:
            raise TautologyError("clause contains %d and %d" % (lit, -lit), ln, 1)
    clauses.append(norm_clause(s))


def write_qdimacs(phi: Qbf) -> str:
    nvars = max(phi.variables, default=0)
    lines = ["p cnf %d %d" % (nvars, len(phi.clauses))]
    block: list[int] = []
    cur = None
    for q, v in phi.prefix:
        if q != cur and block:
            lines.append("%s %s 0" % (cur, " ".join(map(str, block))))
            block = []
        cur = q
        block.append(v)
    if block:
        lines.append("%s %s 0" % (cur, " ".join(map(str, block))))
    for c in phi.clauses:
        lines.append(clause_text(c))
    return "\n".join(lines) + "\n"


# families ----------------------------------------------------------------

def _need(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidSize("size must be an integer >= 1, got %r" % (n,))


def gen_forall_or(n: int) -> Qbf:
    _need(n)
    return Qbf.build([("a", i) for i in range(1, n + 1)], [list(range(1, n + 1))])


def gen_parity(n: int) -> Qbf:
    """x = 1..n, u = n+1, t = n+2..2n+1; u must differ from the running XOR."""
    _need(n)
    x = list(range(1, n + 1))
    u = n + 1
    t = list(range(n + 2, 2 * n + 2))
    cl = [[-t[0], x[0]], [t[0], -x[0]]]
    for i in range(1, n):
        a, p, xi = t[i], t[i - 1], x[i]
        cl += [[-a, p, xi], [-a, -p, -xi], [a, -p, xi], [a, p, -xi]]
    cl += [[u, t[-1]], [-u, -t[-1]]]
    prefix = [("e", v) for v in x] + [("a", u)] + [("e", v) for v in t]
    return Qbf.build(prefix, cl)


def gen_equality(n: int) -> Qbf:
    """x = 1..n, u = n+1..2n, t = 2n+1..3n."""
    _need(n)
    x = list(range(1, n + 1))
    u = list(range(n + 1, 2 * n + 1))
    t = list(range(2 * n + 1, 3 * n + 1))
    cl = []
    for i in range(n):
        cl += [[-t[i], x[i], u[i]], [-t[i], -x[i], -u[i]]]
    cl.append(list(t))
    prefix = [("e", v) for v in x] + [("a", v) for v in u] + [("e", v) for v in t]
    return Qbf.build(prefix, cl)


def gen_qmajority(n: int) -> Qbf:
    """Threshold counter ``th(i,k) = th(i-1,k) or (x_i and th(i-1,k-1))``, one variable per gate.

    x = 1..n, u = n+1, gates numbered from n+2 in order of (i, k).  The output
    gate is ``th(n, ceil(n/2))`` and the last two clauses say ``u != output``.
    """
    _need(n)
    K = (n + 1) // 2
    u = n + 1
    gate: dict[tuple[int, int], int] = {}
    nxt = n + 2
    cl: list[list[int]] = []
    for i in range(1, n + 1):
        for k in range(1, min(i, K) + 1):
            t = nxt
            nxt += 1
            gate[(i, k)] = t
            xi = i
            a = gate.get((i - 1, k))          # None means constant false
            b = gate.get((i - 1, k - 1)) if k > 1 else True
            if a is None and b is True:       # t <-> x_i
                cl += [[-t, xi], [t, -xi]]
            elif a is None:                   # t <-> x_i and b
                cl += [[-t, xi], [-t, b], [t, -xi, -b]]
            elif b is True:                   # t <-> a or x_i
                cl += [[-t, a, xi], [t, -a], [t, -xi]]
            else:                             # t <-> a or (x_i and b)
                cl += [[-t, a, xi], [-t, a, b], [t, -a], [t, -xi, -b]]
    out = gate[(n, K)]
    cl += [[u, out], [-u, -out]]
    prefix = [("e", i) for i in range(1, n + 1)] + [("a", u)]
    prefix += [("e", t) for t in range(n + 2, nxt)]
    return Qbf.build(prefix, cl)


FAMILIES = {
    "forall_or": gen_forall_or,
    "parity": gen_parity,
    "equality": gen_equality,
    "qmajority": gen_qmajority,
}
