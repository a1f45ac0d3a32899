"""Pseudo-expectation witnesses that a candidate expression is not a refutation.

A witness is a linear functional that is 1 on the constant 1, nonnegative on
the clause-and-remainder part and nonnegative on the universal part of the
candidate.  Its value on the whole expression is then at least 1, so the
expression cannot be the zero polynomial.

Only the Equality family ships a construction: the functional averages over
the ``2^n`` points ``x = alpha, u = gamma, t = alpha xor gamma`` where
``gamma`` maximizes the universal part.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cert import Certificate, existential_degree
from .errors import NotVerified, QdegTooHigh
from .poly import Polynomial, ZERO, evaluate, poly_sum, var, twin
from .qbf import DEFAULT_CAP, AxiomId, Qbf, axiom_poly, check_cap, clause_ax, gen_equality


@dataclass(frozen=True)
class PointAveragePE:
    """Uniform average of evaluations at a fixed list of Boolean points."""

    points: tuple[tuple[tuple[int, int], ...], ...]

    def __call__(self, p: Polynomial) -> Fraction:
        if not self.points:
            raise ValueError("empty point set")
        total = sum((evaluate(p, dict(a)) for a in self.points), Fraction(0))
        return total / len(self.points)


@dataclass(frozen=True)
class EqualityPE(PointAveragePE):
    n: int = 0
    gamma: tuple[int, ...] = field(default=())


def _bits(k: int, n: int) -> tuple[int, ...]:
    # first coordinate is the most significant bit, so counting order is lexicographic
    return tuple((k >> (n - 1 - i)) & 1 for i in range(n))


def universal_part(pieces: Certificate) -> Polynomial:
    return poly_sum(q * (1 - 2 * var(u)) for u, q in pieces.universal.items())


def constraint_part(phi: Qbf, pieces: Certificate) -> Polynomial:
    return poly_sum([q * axiom_poly(phi, k) for k, q in pieces.multipliers.items()]
                    + [pieces.remainder_poly()])


def _equality_size(phi: Qbf) -> int:
    n = len(phi.prefix) // 3
    if n < 1 or phi != gen_equality(n):
        raise NotVerified("formula is not an Equality instance")
    return n


def build_equality_pe(n: int, pieces: Certificate, cap: int = DEFAULT_CAP) -> EqualityPE:
    check_cap(2 * n, cap)
    phi = gen_equality(n)
    for u, q in pieces.universal.items():
        k = existential_degree(phi, q)
        if k >= n:
            raise QdegTooHigh("q_%d has existential degree %d >= %d" % (u, k, n))
    h = universal_part(pieces)
    xs = range(1, n + 1)
    us = range(n + 1, 2 * n + 1)
    best = None
    gamma: tuple[int, ...] = (0,) * n
    for g in range(1 << n):
        gb = _bits(g, n)
        s = Fraction(0)
        for a in range(1 << n):
            ab = _bits(a, n)
            alpha = dict(zip(xs, ab))
            alpha.update(zip(us, gb))
            s += evaluate(h, alpha)
        if best is None or s > best:
            best, gamma = s, gb
    pts = []
    for a in range(1 << n):
        ab = _bits(a, n)
        pt = list(zip(xs, ab)) + list(zip(us, gamma))
        pt += [(2 * n + 1 + i, ab[i] ^ gamma[i]) for i in range(n)]
        pts.append(tuple(pt))
    return EqualityPE(tuple(pts), n, gamma)


def pe_evaluate(e: PointAveragePE, p: Polynomial) -> Fraction:
    return e(p)


@dataclass(frozen=True)
class AuditReport:
    n: int
    gamma: tuple[int, ...]
    unit: Fraction
    constraints: Fraction
    universal: Fraction
    total: Fraction

    @property
    def conditions(self) -> tuple[bool, bool, bool]:
        return self.unit == 1, self.constraints >= 0, self.universal >= 0

    @property
    def ok(self) -> bool:
        return all(self.conditions) and self.total >= 1


def audit(phi: Qbf, pieces: Certificate, cap: int = DEFAULT_CAP) -> AuditReport:
    n = _equality_size(phi)
    e = build_equality_pe(n, pieces, cap)
    g = constraint_part(phi, pieces)
    h = universal_part(pieces)
    return AuditReport(n, e.gamma, e(Polynomial.const(1)), e(g), e(h), e(g + h + 1))


def format_audit(r: AuditReport) -> str:
    c1, c2, c3 = r.conditions
    lines = [
        "verdict: %s" % ("not-a-refutation" if r.ok else "inconclusive"),
        "n: %d" % r.n,
        "gamma: %s" % "".join(map(str, r.gamma)),
        "E[1]: %s %s" % (r.unit, "ok" if c1 else "FAIL"),
        "E[constraints]: %s %s" % (r.constraints, "ok" if c2 else "FAIL"),
        "E[universal]: %s %s" % (r.universal, "ok" if c3 else "FAIL"),
        "E[expression]: %s %s" % (r.total, "ok" if r.total >= 1 else "FAIL"),
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# random candidates

def _rand_coef(rng: random.Random, nonneg: bool = False) -> Fraction:
    a = rng.randint(0 if nonneg else -4, 4)
    return Fraction(a, rng.randint(1, 3))


def _rand_poly(rng: random.Random, pool: list[Polynomial], terms: int, maxdeg: int,
               nonneg: bool = False, exist_pool: int = 0, exist_cap: int | None = None) -> Polynomial:
    """Random combination of products of factors from ``pool``.

    The first ``exist_pool`` factors count against ``exist_cap``.
    """
    out = ZERO
    for _ in range(terms):
        m = Polynomial.const(_rand_coef(rng, nonneg))
        used_e = 0
        for _ in range(rng.randint(0, maxdeg)):
            i = rng.randrange(len(pool)) if pool else None
            if i is None:
                break
            if i < exist_pool:
                if exist_cap is not None and used_e >= exist_cap:
                    continue
                used_e += 1
            m = m * pool[i]
        out = out + m
    return out


def random_pieces(n: int, rng: random.Random, system: str = "QSA",
                  adversarial: bool = False) -> Certificate:
    """Random candidate pieces for Equality_n with qdeg < n.

    Clause multipliers on the implication clauses and all Boolean and twin
    multipliers are arbitrary; the multiplier of the big clause is a multiple
    of some ``t_i``; the remainder has nonnegative coefficients (QSA) or is a
    list of squares (QSOS).  With ``adversarial`` the big clause gets the
    multiplier ``-1`` and the remainder is dropped.
    """
    phi = gen_equality(n)
    xs = list(range(1, n + 1))
    us = list(range(n + 1, 2 * n + 1))
    ts = list(range(2 * n + 1, 3 * n + 1))
    lits_x = [var(v) for v in xs] + [twin(v) for v in xs]
    allv = [var(v) for v in phi.variables] + [twin(v) for v in phi.variables]
    universal = {}
    for i, u in enumerate(us):
        pool = lits_x + [var(w) for w in us[:i]] + [twin(w) for w in us[:i]]
        universal[u] = _rand_poly(rng, pool, 3, n + 1, exist_pool=len(lits_x), exist_cap=n - 1)
    mult: dict[AxiomId, Polynomial] = {}
    for j in range(2 * n):
        mult[clause_ax(j)] = _rand_poly(rng, allv, 2, 2)
    big = clause_ax(2 * n)
    for v in phi.variables:
        mult[AxiomId("bool", v)] = _rand_poly(rng, allv, 2, 2)
        mult[AxiomId("twin", v)] = _rand_poly(rng, allv, 2, 2)
    if adversarial:
        mult[big] = Polynomial.const(-1)
        return Certificate(system, mult, universal, None if system != "QSOS" else [])
    mult[big] = var(rng.choice(ts)) * _rand_poly(rng, allv, 2, 2)
    if system == "QSOS":
        rem: object = [_rand_poly(rng, allv, 2, 2) for _ in range(2)]
    elif system == "QSA":
        rem = _rand_poly(rng, allv, 3, 3, nonneg=True)
    else:
        rem = None
    return Certificate(system, mult, universal, rem)


def sample_audits(n: int, samples: int, seed: int = 0, system: str = "QSA") -> Iterable[AuditReport]:
    rng = random.Random(seed)
    phi = gen_equality(n)
    for _ in range(samples):
        yield audit(phi, random_pieces(n, rng, system))
