"""Certificates for the static systems QNS, QSA and QSOS.

A certificate bundles clause/Boolean/twin multipliers, one polynomial per
universal variable and a remainder.  It is accepted when

    sum q_p * p + sum q_u * (1 - 2u) + q + 1 == 0

holds as a polynomial identity, each ``q_u`` only mentions variables quantified
before ``u``, and the remainder has the shape required by the system: absent
for QNS, nonnegative coefficients for QSA, a list of polynomials ``s`` with
``q = sum s^2`` for QSOS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (IdentityViolated, NotExistential, NotQSA,
                     NotQSOS, ParseError, RemainderShapeViolated,
                     SideConditionViolated)
from .poly import (Monomial, Polynomial, ZERO, evaluate, format_poly,
                   indicator, parse_poly, poly_sum,
                   restrict, express_in_ideal)
from .qbf import (DEFAULT_CAP, AxiomId, Qbf, all_assignments, axiom_poly,
                  check_cap, restrict_qbf_map)

SYSTEMS = ("QNS", "QSA", "QSOS")


@dataclass
class Certificate:
    system: str
    multipliers: dict[AxiomId, Polynomial] = field(default_factory=dict)
    universal: dict[int, Polynomial] = field(default_factory=dict)
    remainder: Polynomial | list[Polynomial] | None = None

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ValueError("unknown proof system %r" % self.system)
        self.multipliers = {AxiomId(*k): p for k, p in sorted(self.multipliers.items()) if p}
        self.universal = {u: p for u, p in sorted(self.universal.items()) if p}
        if self.system == "QSA" and self.remainder is None:
            self.remainder = ZERO
        if self.system == "QSOS":
            self.remainder = [s for s in (self.remainder or []) if s]

    def remainder_poly(self) -> Polynomial:
        if self.system == "QNS" or self.remainder is None:
            return ZERO
        if self.system == "QSA":
            return self.remainder
        return poly_sum(s * s for s in self.remainder)

    def universal_part(self) -> Polynomial:
        return poly_sum(q * (1 - 2 * Polynomial.var(u)) for u, q in self.universal.items())

    def expression(self, phi: Qbf) -> Polynomial:
        """The left side ``sum q_p p + sum q_u (1-2u) + q + 1``."""
        parts = [q * axiom_poly(phi, k) for k, q in self.multipliers.items()]
        parts.append(self.universal_part())
        parts.append(self.remainder_poly())
        parts.append(Polynomial.const(1))
        return poly_sum(parts)


@dataclass(frozen=True)
class Measures:
    size: int
    degree: int
    qsize: int
    qdeg: int
    qdeg_distinct: int


def existential_degree(phi: Qbf, q: Polynomial, distinct: bool = False) -> int:
    best = 0
    for m in q.terms:
        if distinct:
            n = len({k >> 1 for k, _ in m if phi.is_existential(k >> 1)})
        else:
            n = sum(e for k, e in m if phi.is_existential(k >> 1))
        best = max(best, n)
    return best


def measures(phi: Qbf, c: Certificate) -> Measures:
    size = sum(len(q) for q in c.multipliers.values())
    qsize = sum(len(q) for q in c.universal.values())
    size += qsize
    degs = [q.degree + axiom_poly(phi, k).degree for k, q in c.multipliers.items()]
    degs += [q.degree + 1 for q in c.universal.values()]
    if c.system == "QSA":
        size += len(c.remainder)
        if c.remainder:
            degs.append(c.remainder.degree)
    elif c.system == "QSOS":
        size += sum(len(s) for s in c.remainder)
        degs += [2 * s.degree for s in c.remainder]
    qdeg = max((existential_degree(phi, q) for q in c.universal.values()), default=0)
    qdd = max((existential_degree(phi, q, True) for q in c.universal.values()), default=0)
    return Measures(size, max(degs, default=0), qsize, qdeg, qdd)


def check_side_conditions(phi: Qbf, c: Certificate) -> None:
    for k in c.multipliers:
        axiom_poly(phi, k)
    for u, q in c.universal.items():
        if not phi.is_universal(u):
            raise SideConditionViolated(u, u)
        for v in sorted(q.bases()):
            if not phi.has_var(v) or not phi.left_of(v, u):
                raise SideConditionViolated(u, v)


def check_shape(c: Certificate) -> None:
    if c.system == "QNS":
        if c.remainder is not None and (not isinstance(c.remainder, Polynomial) or c.remainder):
            raise RemainderShapeViolated("QNS certificates carry no remainder")
    elif c.system == "QSA":
        if not isinstance(c.remainder, Polynomial):
            raise RemainderShapeViolated("QSA remainder must be a single polynomial")
        for m, a in c.remainder.terms.items():
            if a < 0:
                raise RemainderShapeViolated("negative remainder coefficient %s on %s" % (a, m))
    else:
        if not isinstance(c.remainder, list) or not all(isinstance(s, Polynomial) for s in c.remainder):
            raise RemainderShapeViolated("QSOS remainder must be a list of polynomials")


def verify(phi: Qbf, c: Certificate, check_identity: bool = True) -> Measures:
    """Check a certificate and return its measures; raises on rejection."""
    check_side_conditions(phi, c)
    check_shape(c)
    if check_identity:
        res = c.expression(phi)
        if res:
            raise IdentityViolated(res)
    return measures(phi, c)


# restriction ---------------------------------------------------------------

def restrict_certificate(phi: Qbf, c: Certificate, x: int, b: int) -> Certificate:
    if not phi.is_existential(x):
        raise NotExistential("variable %d is not existential in the prefix" % x)
    _, index = restrict_qbf_map(phi, x, b)
    mult: dict[AxiomId, Polynomial] = {}
    for k, q in c.multipliers.items():
        if k.kind == "clause":
            if k.ref not in index:
                continue
            nk = AxiomId("clause", index[k.ref])
        elif k.ref == x:
            continue
        else:
            nk = k
        mult[nk] = mult.get(nk, ZERO) + restrict(q, x, b)
    univ = {u: restrict(q, x, b) for u, q in c.universal.items()}
    if c.system == "QSA":
        rem = restrict(c.remainder, x, b)
    elif c.system == "QSOS":
        rem = [restrict(s, x, b) for s in c.remainder]
    else:
        rem = None
    return Certificate(c.system, mult, univ, rem)


# QSA <-> QSOS ----------------------------------------------------------------

def _probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d, r = d // 2, r + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _two_squares_prime(p: int) -> tuple[int, int] | None:
    """``(a, b)`` with ``a^2 + b^2 == p`` for a prime ``p = 1 mod 4`` (Hermite-Serret)."""
    for c in range(2, 200):
        t = pow(c, (p - 1) // 4, p)
        if t * t % p == p - 1:
            break
    else:
        return None
    a, b = p, t
    r = math.isqrt(p)
    while b > r:
        a, b = b, a % b
    rest = p - b * b
    c = math.isqrt(rest)
    return (b, c) if c * c == rest else None


def _four_squares_large(n: int) -> tuple[int, int, int, int]:
    scale = 1
    while n % 4 == 0:
        n, scale = n // 4, scale * 2
    x = math.isqrt(n)
    while x >= 0:
        y = math.isqrt(n - x * x)
        for y in range(y, max(y - 64, -1), -1):
            p = n - x * x - y * y
            if p in (0, 1, 2):
                ab = {0: (0, 0), 1: (1, 0), 2: (1, 1)}[p]
            elif p % 4 == 1 and _probable_prime(p):
                ab = _two_squares_prime(p)
                if ab is None:
                    continue
            else:
                continue
            out = tuple(sorted((scale * v for v in (x, y) + ab), reverse=True))
            if sum(v * v for v in out) == n * scale * scale:
                return out
        x -= 1
    raise AssertionError("no decomposition found")


def four_squares(n: int) -> tuple[int, int, int, int]:
    """Nonnegative ``(a, b, c, d)``, descending, with ``a^2 + b^2 + c^2 + d^2 == n``.

    Small inputs use an exhaustive search (the lexicographically largest
    answer); large ones split off two squares leaving a prime ``1 mod 4``.
    """
    if n < 0:
        raise ValueError("negative")
    if n > 10 ** 6:
        return _four_squares_large(n)

    def search(n: int, k: int, cap: int):
        if n == 0:
            return (0,) * k
        if k == 0:
            return None
        if k == 1:
            r = math.isqrt(n)
            return (r,) if r * r == n and r <= cap else None
        top = min(cap, math.isqrt(n))
        low = math.isqrt(n // k)
        for a in range(top, max(low, 0) - 1, -1):
            rest = search(n - a * a, k - 1, a)
            if rest is not None:
                return (a,) + rest
        return None

    out = search(n, 4, n)
    assert out is not None
    return out


def lift_to_square(m: Monomial) -> tuple[Monomial, dict[int, Polynomial], dict[int, Polynomial]]:
    """``(r, B, T)`` with ``m - r^2 == sum B[v]*(v^2-v) + sum T[v]*(v+~v-1)``.

    Odd powers are raised one factor at a time; the multipliers are
    monomial-sized, so the cost is linear in the length of ``m``.
    """
    B: dict[int, Polynomial] = {}
    T: dict[int, Polynomial] = {}
    done: list[tuple[int, int]] = []
    items = list(m)
    for i, (k, e) in enumerate(items):
        if e % 2:
            # w^e - w^(e+1) = -w^(e-1) * (w^2 - w), times the other factors
            ctx = Polynomial.monomial(Monomial(done + [(k, e - 1)] * (e > 1) + items[i + 1:]))
            v = k >> 1
            B[v] = B.get(v, ZERO) - ctx
            if k & 1:
                # ~v^2 - ~v = (v^2 - v) + (~v - v) * (v + ~v - 1)
                T[v] = T.get(v, ZERO) - ctx * (Polynomial.var(v, True) - Polynomial.var(v))
            done.append((k, e + 1))
        else:
            done.append((k, e))
    root = Monomial((k, e // 2) for k, e in done)
    return root, B, T


def qsa_to_qsos(c: Certificate) -> Certificate:
    """Rewrite each remainder term ``a/b * m`` as at most four rational squares."""
    if c.system != "QSA":
        raise NotQSA("expected a QSA certificate, got %s" % c.system)
    check_shape(c)
    mult = {k: q for k, q in c.multipliers.items()}
    squares: list[Polynomial] = []
    for m, a in c.remainder:
        r, B, T = lift_to_square(m)
        for v, q in B.items():
            _bump(mult, AxiomId("bool", v), q.scale(a))
        for v, q in T.items():
            _bump(mult, AxiomId("twin", v), q.scale(a))
        for s in four_squares(a.numerator * a.denominator):
            if s:
                squares.append(Polynomial.monomial(r, Fraction(s, a.denominator)))
    return Certificate("QSOS", mult, dict(c.universal), squares)


def _bump(mult: dict, k: AxiomId, q: Polynomial) -> None:
    mult[k] = mult.get(k, ZERO) + q


def qsos_to_qsa(phi: Qbf, c: Certificate, cap: int = DEFAULT_CAP) -> Certificate:
    """Replace ``sum s^2`` by its pointwise indicator expansion."""
    if c.system != "QSOS":
        raise NotQSOS("expected a QSOS certificate, got %s" % c.system)
    check_shape(c)
    q = c.remainder_poly()
    vs = sorted(q.bases())
    check_cap(len(vs), cap)
    terms: dict[Monomial, Fraction] = {}
    for alpha in all_assignments(vs, cap):
        val = evaluate(q, alpha)
        if val < 0:
            raise NotQSOS("remainder is negative at %s" % alpha)
        if val:
            terms[indicator(alpha)] = val
    rem = Polynomial(terms)
    mult = dict(c.multipliers)
    diff = q - rem
    if diff:
        for k, m in express_in_ideal(diff, phi).items():
            _bump(mult, k, m)
    return Certificate("QSA", mult, dict(c.universal), rem)


# file format ---------------------------------------------------------------

def format_certificate(c: Certificate) -> str:
    lines = ["qcert %s" % c.system]
    for k, q in c.multipliers.items():
        lines.append("p %s %d : %s" % (k.kind, k.ref, format_poly(q)))
    for u, q in c.universal.items():
        lines.append("u %d : %s" % (u, format_poly(q)))
    if c.system == "QSA":
        lines.append("r : %s" % format_poly(c.remainder))
    elif c.system == "QSOS":
        for s in c.remainder:
            lines.append("s : %s" % format_poly(s))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    system = None
    mult: dict[AxiomId, Polynomial] = {}
    univ: dict[int, Polynomial] = {}
    rem: Polynomial | None = None
    squares: list[Polynomial] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if system is None:
            toks = line.split()
            if len(toks) != 2 or toks[0] != "qcert" or toks[1] not in SYSTEMS:
                raise ParseError("expected 'qcert <QNS|QSA|QSOS>'", ln, 1)
            system = toks[1]
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError("missing ':'", ln, 1)
        p = parse_poly(body, ln)
        toks = head.split()
        try:
            if toks[0] == "p" and len(toks) == 3 and toks[1] in ("clause", "bool", "twin"):
                k = AxiomId(toks[1], int(toks[2]))
                mult[k] = mult.get(k, ZERO) + p
            elif toks[0] == "u" and len(toks) == 2:
                u = int(toks[1])
                univ[u] = univ.get(u, ZERO) + p
            elif toks == ["r"] and system == "QSA":
                rem = p if rem is None else rem + p
            elif toks == ["s"] and system == "QSOS":
                squares.append(p)
            else:
                raise ParseError("unrecognised line %r for %s" % (head.strip(), system), ln, 1)
        except (ValueError, IndexError):
            raise ParseError("malformed line", ln, 1) from None
    if system is None:
        raise ParseError("missing 'qcert' header", 0, 0)
    if system == "QSOS":
        return Certificate(system, mult, univ, squares)
    return Certificate(system, mult, univ, rem if system == "QSA" else None)
