"""Sparse polynomials with exact rational coefficients over twinned Boolean variables.

Every Boolean variable ``v`` (a positive integer) comes with a formal twin
``~v`` that stands for ``1 - v`` on Boolean points.  A monomial is a product of
such extended variables with positive exponents; a polynomial maps monomials to
nonzero :class:`fractions.Fraction` coefficients.

Internally an extended variable is packed into the integer key ``2*v + twin``,
so sorting keys sorts by (base, twin flag).  A :class:`Monomial` is a tuple of
``(key, exponent)`` pairs in key order; the empty tuple is the constant 1.

Text form (shared by every file format)::

    -3/2*x2*~x3^2 + 1

Values are immutable after construction.  Ideal membership
(:func:`express_in_ideal`) enumerates a decision tree over the variables and
is exponential in the worst case; it is meant for small instances.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import NotInIdeal, ParseError, UnassignedVariable

Rational = Fraction


class ExtVar(NamedTuple):
    base: int
    twin: bool = False

    @property
    def key(self) -> int:
        return 2 * self.base + int(self.twin)

    @staticmethod
    def from_key(key: int) -> "ExtVar":
        return ExtVar(key >> 1, bool(key & 1))

    def __str__(self) -> str:
        return ("~x%d" if self.twin else "x%d") % self.base


class Monomial(tuple):
    """Sorted tuple of ``(key, exponent)`` pairs."""

    __slots__ = ()

    @classmethod
    def from_exponents(cls, exps: Mapping[ExtVar, int]) -> "Monomial":
        items = sorted((ev.key, e) for ev, e in exps.items() if e)
        for _, e in items:
            if e < 0:
                raise ValueError("negative exponent")
        return cls(items)

    @classmethod
    def of(cls, *evs: ExtVar) -> "Monomial":
        acc: dict[int, int] = {}
        for ev in evs:
            acc[ev.key] = acc.get(ev.key, 0) + 1
        return cls(sorted(acc.items()))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def exponents(self) -> dict[ExtVar, int]:
        return {ExtVar.from_key(k): e for k, e in self}

    def bases(self) -> set[int]:
        return {k >> 1 for k, _ in self}

    def times(self, other: "Monomial") -> "Monomial":
        return mono_mul(self, other)

    def divide(self, other: "Monomial") -> "Monomial | None":
        """Return ``self / other`` or None when ``other`` does not divide."""
        mine = dict(self)
        for k, e in other:
            have = mine.get(k, 0)
            if have < e:
                return None
            if have == e:
                del mine[k]
            else:
                mine[k] = have - e
        return Monomial(sorted(mine.items()))

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(_factor_text(k, e) for k, e in self)


ONE = Monomial(())


def _factor_text(key: int, e: int) -> str:
    s = ("~x%d" if key & 1 else "x%d") % (key >> 1)
    return s if e == 1 else "%s^%d" % (s, e)


def mono_mul(a: tuple, b: tuple) -> Monomial:
    if not a:
        return b if isinstance(b, Monomial) else Monomial(b)
    if not b:
        return a if isinstance(a, Monomial) else Monomial(a)
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ka, ea = a[i]
        kb, eb = b[j]
        if ka == kb:
            out.append((ka, ea + eb))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return Monomial(out)


def _sort_key(m: Monomial):
    return (-m.degree, tuple(m))


class Polynomial:
    """Immutable sparse polynomial.  Equality is equality of term maps."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    if not isinstance(m, Monomial):
                        m = Monomial(m)
                    clean[m] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def var(cls, v: int, twin: bool = False) -> "Polynomial":
        return cls._raw({Monomial(((2 * v + int(twin), 1),)): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "Polynomial":
        return cls({m: c})

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({mono_mul(m, mono): v * c for m, v in self.terms.items()})

    # queries ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda t: _sort_key(t[0])))

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def bases(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            for k, _ in m:
                out.add(k >> 1)
        return out

    def is_twin_free(self) -> bool:
        return all(not (k & 1) for m in self.terms for k, _ in m)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return "Polynomial(%r)" % format_poly(self)


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    return NotImplemented


ZERO = Polynomial()


def const(c) -> Polynomial:
    return Polynomial.const(c)


def var(v: int) -> Polynomial:
    return Polynomial.var(v)


def twin(v: int) -> Polynomial:
    return Polynomial.var(v, True)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def scale(p: Polynomial, c) -> Polynomial:
    return p.scale(c)


def poly_sum(polys: Iterable[Polynomial]) -> Polynomial:
    out: dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
    return Polynomial._raw({m: c for m, c in out.items() if c})


# evaluation and restriction ----------------------------------------------

def evaluate(p: Polynomial, alpha: Mapping[int, int]) -> Fraction:
    """Value of ``p`` at a Boolean point; twins evaluate to ``1 - alpha[v]``."""
    total = Fraction(0)
    for m, c in p.terms.items():
        for k, _ in m:
            b = alpha.get(k >> 1)
            if b is None:
                raise UnassignedVariable(k >> 1)
            if (b if not (k & 1) else 1 - b) == 0:
                break
        else:
            total += c
    return total


def restrict(p: Polynomial, v: int, b: int) -> Polynomial:
    """Substitute ``v := b`` and ``~v := 1 - b``."""
    return restrict_many(p, {v: b})


def restrict_many(p: Polynomial, rho: Mapping[int, int]) -> Polynomial:
    if not rho:
        return p
    out: dict[Monomial, Fraction] = {}
    touched = False
    for m, c in p.terms.items():
        keep = []
        dead = False
        for k, e in m:
            b = rho.get(k >> 1)
            if b is None:
                keep.append((k, e))
                continue
            touched = True
            if (b if not (k & 1) else 1 - b) == 0:
                dead = True
                break
        if dead:
            continue
        mm = Monomial(keep) if len(keep) != len(m) else m
        s = out.get(mm)
        out[mm] = c if s is None else s + c
    if not touched:
        return p
    return Polynomial._raw({m: c for m, c in out.items() if c})


def indicator(alpha: Mapping[int, int]) -> Monomial:
    """Monomial that is 1 exactly on ``alpha``: ``prod v`` (value 1) times ``prod ~v`` (value 0)."""
    return Monomial(sorted((2 * v + (0 if b else 1), 1) for v, b in alpha.items()))


def ind_rho(rho: Mapping[int, int]) -> Polynomial:
    """Twin-free indicator ``prod x * prod (1 - x)`` of a partial assignment."""
    out = Polynomial.const(1)
    for v in sorted(rho):
        x = Polynomial.var(v)
        out = out * (x if rho[v] else 1 - x)
    return out


def multilinearize(p: Polynomial) -> Polynomial:
    """Value-preserving rewrite on Boolean points: ``v^e -> v``; monomials with ``v*~v`` dropped."""
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        bases = [k >> 1 for k, _ in m]
        if len(set(bases)) != len(bases):
            continue
        mm = Monomial((k, 1) for k, _ in m)
        out[mm] = out.get(mm, 0) + c
    return Polynomial({m: c for m, c in out.items() if c})


# ideal reduction ------------------------------------------------------------

def bool_axiom(v: int) -> Polynomial:
    x = Monomial(((2 * v, 1),))
    return Polynomial._raw({Monomial(((2 * v, 2),)): Fraction(1), x: Fraction(-1)})


def twin_axiom(v: int) -> Polynomial:
    return Polynomial._raw({Monomial(((2 * v, 1),)): Fraction(1),
                            Monomial(((2 * v + 1, 1),)): Fraction(1),
                            ONE: Fraction(-1)})


class _Acc:
    """Mutable accumulator of multipliers keyed by an arbitrary label."""

    def __init__(self):
        self.data: dict[object, dict[Monomial, Fraction]] = {}

    def add(self, label, mono: Monomial, c: Fraction) -> None:
        d = self.data.setdefault(label, {})
        s = d.get(mono)
        d[mono] = c if s is None else s + c

    def add_poly(self, label, p: Polynomial, mono: Monomial = ONE, c=1) -> None:
        for m, v in p.terms.items():
            self.add(label, mono_mul(m, mono), v * c)

    def result(self) -> dict:
        out = {}
        for label, d in self.data.items():
            p = Polynomial._raw({m: c for m, c in d.items() if c})
            if p:
                out[label] = p
        return out


def reduce_boolean(p: Polynomial) -> tuple[Polynomial, dict[int, Polynomial], dict[int, Polynomial]]:
    """Normal form modulo ``v^2 - v`` and ``v + ~v - 1``.

    Returns ``(nf, B, T)`` with ``p == nf + sum B[v]*(v^2-v) + sum T[v]*(v+~v-1)``
    and ``nf`` multilinear and twin-free.
    """
    acc = _Acc()
    work: dict[Monomial, Fraction] = dict(p.terms)
    done: dict[Monomial, Fraction] = {}
    while work:
        m, c = work.popitem()
        if not c:
            continue
        hit = None
        for idx, (k, e) in enumerate(m):
            if k & 1 or e > 1:
                hit = idx
                break
        if hit is None:
            s = done.get(m)
            done[m] = c if s is None else s + c
            continue
        k, e = m[hit]
        rest = list(m)
        if k & 1:
            # m = m' * ~v ; ~v = (1 - v) + (v + ~v - 1)
            v = k >> 1
            if e == 1:
                del rest[hit]
            else:
                rest[hit] = (k, e - 1)
            mp = Monomial(rest)
            acc.add(("twin", v), mp, c)
            _push(work, mp, c)
            _push(work, mono_mul(mp, Monomial(((2 * v, 1),))), -c)
        else:
            # m = m' * v^e ; v^e - v = (v^2 - v) * (1 + v + ... + v^(e-2))
            v = k >> 1
            del rest[hit]
            mp = Monomial(rest)
            for j in range(e - 1):
                acc.add(("bool", v), mono_mul(mp, Monomial(((2 * v, j),)) if j else ONE), c)
            _push(work, mono_mul(mp, Monomial(((2 * v, 1),))), c)
    res = acc.result()
    B = {lab[1]: q for lab, q in res.items() if lab[0] == "bool"}
    T = {lab[1]: q for lab, q in res.items() if lab[0] == "twin"}
    nf = Polynomial._raw({m: c for m, c in done.items() if c})
    return nf, B, T


def _push(work: dict, m: Monomial, c: Fraction) -> None:
    s = work.get(m)
    if s is None:
        work[m] = c
    else:
        s += c
        if s:
            work[m] = s
        else:
            del work[m]


def split_on(p: Polynomial, v: int):
    """Split ``p`` on variable ``v``.

    Returns ``(p0, p1, b, t)`` with ``p == ~v*p0 + v*p1 + b*(v^2-v) + t*(v+~v-1)``
    where ``p0 = p|v=0`` and ``p1 = p|v=1``.
    """
    kv, kt = 2 * v, 2 * v + 1
    p0: dict[Monomial, Fraction] = {}
    p1: dict[Monomial, Fraction] = {}
    bm: dict[Monomial, Fraction] = {}
    tm: dict[Monomial, Fraction] = {}
    xv = Monomial(((kv, 1),))
    for m, c in p.terms.items():
        i = j = 0
        rest = []
        for k, e in m:
            if k == kv:
                i = e
            elif k == kt:
                j = e
            else:
                rest.append((k, e))
        mp = Monomial(rest)
        if i == 0:
            _push(p0, mp, c)
        if j == 0:
            _push(p1, mp, c)
        if i == 0 and j == 0:
            _push(tm, mp, -c)
        elif i == 0:
            # ~v^j - ~v = sum_{k<j-1} ~v^k * ((v^2 - v) + (~v - v)(v + ~v - 1))
            for kk in range(j - 1):
                base = mono_mul(mp, Monomial(((kt, kk),)) if kk else ONE)
                _push(bm, base, c)
                _push(tm, mono_mul(base, Monomial(((kt, 1),))), c)
                _push(tm, mono_mul(base, xv), -c)
        elif j == 0:
            for kk in range(i - 1):
                _push(bm, mono_mul(mp, Monomial(((kv, kk),)) if kk else ONE), c)
        else:
            # v*~v = -(v^2 - v) + v*(v + ~v - 1)
            fac = []
            if i > 1:
                fac.append((kv, i - 1))
            if j > 1:
                fac.append((kt, j - 1))
            base = mono_mul(mp, Monomial(fac))
            _push(bm, base, -c)
            _push(tm, mono_mul(base, xv), c)
    return (Polynomial._raw(p0), Polynomial._raw(p1),
            Polynomial._raw(bm), Polynomial._raw(tm))


def express_in_ideal(r: Polynomial, phi, check: bool = False) -> dict:
    """Multipliers ``{AxiomId: q}`` with ``r == sum q * axiom_poly(phi, id)``.

    The routine walks a decision tree.  At a node with partial assignment
    ``rho`` it holds the residual ``P`` (restricted to ``rho``) scaled by the
    indicator monomial of ``rho``.  Splitting on ``v`` uses the exact identity
    of :func:`split_on`; a node is closed when ``P`` vanishes or when ``rho``
    falsifies a clause ``C`` (then ``M(C)`` divides the indicator).  A
    satisfying total assignment with ``P != 0`` raises :class:`NotInIdeal`.
    The result is re-expanded and compared symbolically before returning.
    """
    from .qbf import axiom_poly, bool_ax, clause_ax, twin_ax

    clauses = [tuple(c) for c in phi.clauses]
    order = {v: i for i, v in enumerate(phi.variables)}
    nvar = len(order)

    if check:
        from .qbf import satisfying_assignments
        for alpha in satisfying_assignments(phi):
            val = evaluate(r, _complete(alpha, r))
            if val:
                raise NotInIdeal(alpha, val)

    acc = _Acc()
    stack: list[tuple[dict[int, int], Monomial, Polynomial]] = [({}, ONE, r)]
    while stack:
        rho, chi, P = stack.pop()
        if not P:
            continue
        status, j = _clause_status(clauses, rho)
        if status == "falsified":
            mc = _clause_monomial(clauses[j])
            acc.add_poly(clause_ax(j), P, chi.divide(mc))
            continue
        pv = P.bases() - rho.keys()
        if pv:
            v = min(pv, key=lambda x: (order.get(x, nvar + x), x))
        elif status == "satisfied":
            raise NotInIdeal(dict(rho), P.constant())
        else:
            v = _branch_var(clauses, rho, order, nvar)
        p0, p1, bm, tm = split_on(P, v)
        if bm:
            acc.add_poly(bool_ax(v), bm, chi)
        if tm:
            acc.add_poly(twin_ax(v), tm, chi)
        r1 = dict(rho)
        r1[v] = 1
        r0 = dict(rho)
        r0[v] = 0
        stack.append((r1, mono_mul(chi, Monomial(((2 * v, 1),))), p1))
        stack.append((r0, mono_mul(chi, Monomial(((2 * v + 1, 1),))), p0))
    res = acc.result()
    out = {k: res[k] for k in sorted(res)}
    back = poly_sum(q * axiom_poly(phi, k) for k, q in out.items())
    if back != r:
        raise AssertionError("ideal decomposition failed to re-expand")
    return out


def _complete(alpha: Mapping[int, int], p: Polynomial) -> dict[int, int]:
    full = dict(alpha)
    for v in p.bases():
        full.setdefault(v, 0)
    return full


def _clause_monomial(clause: tuple[int, ...]) -> Monomial:
    acc: dict[int, int] = {}
    for lit in clause:
        k = 2 * lit + 1 if lit > 0 else -2 * lit
        acc[k] = acc.get(k, 0) + 1
    return Monomial(sorted(acc.items()))


def _clause_status(clauses, rho):
    """('falsified', j) for the first falsified clause, else ('satisfied'|'open', None)."""
    open_ = False
    for j, c in enumerate(clauses):
        sat = False
        unassigned = False
        for lit in c:
            b = rho.get(abs(lit))
            if b is None:
                unassigned = True
            elif (b == 1) == (lit > 0):
                sat = True
                break
        if sat:
            continue
        if not unassigned:
            return "falsified", j
        open_ = True
    return ("open" if open_ else "satisfied"), None


def _branch_var(clauses, rho, order, nvar) -> int:
    best = None
    for c in clauses:
        free = []
        sat = False
        for lit in c:
            b = rho.get(abs(lit))
            if b is None:
                free.append(abs(lit))
            elif (b == 1) == (lit > 0):
                sat = True
                break
        if sat or not free:
            continue
        cand = (len(free), min(order.get(v, nvar + v) for v in free))
        if best is None or cand < best[0]:
            best = (cand, min(free, key=lambda x: (order.get(x, nvar + x), x)))
    assert best is not None
    return best[1]


# text form ------------------------------------------------------------------

def format_poly(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m, c in p:
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _num(a)
        elif a == 1:
            body = str(m)
        else:
            body = _num(a) + "*" + str(m)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def _num(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


_TOKEN = re.compile(r"(?P<num>\d+(?:/\d+)?)|(?P<var>~?x\d+)(?:\^(?P<exp>\d+))?|(?P<op>[-+*])")


def _tokens(text: str, line: int):
    pos, n = 0, len(text)
    out = []
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError("unexpected character %r" % text[pos], line, pos + 1)
        out.append((mt, pos + 1))
        pos = mt.end()
    return out


def parse_poly(text: str, line: int = 0) -> Polynomial:
    """Parse the polynomial text grammar; raises :class:`ParseError`."""
    toks = _tokens(text, line)
    if not toks:
        raise ParseError("empty polynomial", line, 1)
    terms: dict[Monomial, Fraction] = {}
    i = 0
    sign = 1
    if toks[0][0].group("op") in ("+", "-"):
        sign = -1 if toks[0][0].group("op") == "-" else 1
        i = 1
    while True:
        coef = Fraction(sign)
        factors: dict[int, int] = {}
        while True:
            if i >= len(toks):
                raise ParseError("expected a factor", line, len(text) + 1)
            mt, col = toks[i]
            i += 1
            if mt.group("num"):
                a, _, b = mt.group("num").partition("/")
                if b and int(b) == 0:
                    raise ParseError("zero denominator", line, col)
                coef *= Fraction(int(a), int(b) if b else 1)
            elif mt.group("var"):
                name = mt.group("var")
                tw = name.startswith("~")
                v = int(name[2:] if tw else name[1:])
                if v < 1:
                    raise ParseError("variable ids start at 1", line, col)
                e = int(mt.group("exp") or 1)
                if e < 1:
                    raise ParseError("exponent must be positive", line, col)
                k = 2 * v + int(tw)
                factors[k] = factors.get(k, 0) + e
            else:
                raise ParseError("expected a factor, got %r" % mt.group("op"), line, col)
            if i < len(toks) and toks[i][0].group("op") == "*":
                i += 1
                continue
            break
        m = Monomial(sorted(factors.items()))
        terms[m] = terms.get(m, Fraction(0)) + coef
        if i >= len(toks):
            break
        mt, col = toks[i]
        op = mt.group("op")
        if op not in ("+", "-"):
            raise ParseError("expected '+' or '-'", line, col)
        sign = -1 if op == "-" else 1
        i += 1
    return Polynomial(terms)
