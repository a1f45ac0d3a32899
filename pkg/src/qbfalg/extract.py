"""Countermodels read off accepted certificates.

Universal ``u`` is set to 1 exactly when its multiplier ``q_u`` is negative at
the current point (``sign(0)`` counts as positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .cert import Certificate, verify
from .errors import NotVerified, QbfAlgError
from .poly import Polynomial, ZERO, evaluate, format_poly
from .qbf import DEFAULT_CAP, Qbf, all_assignments, check_cap, falsified_clause


@dataclass
class PtfCountermodel:
    thresholds: dict[int, Polynomial]
    left: dict[int, tuple[int, ...]]
    size: int = 0
    degree: int = 0

    def threshold(self, u: int) -> Polynomial:
        return self.thresholds.get(u, ZERO)

    def decide(self, u: int, alpha: Mapping[int, int]) -> int:
        return 1 if evaluate(self.threshold(u), alpha) < 0 else 0


def extract(phi: Qbf, c: Certificate) -> PtfCountermodel:
    try:
        m = verify(phi, c)
    except QbfAlgError as e:
        raise NotVerified("certificate rejected: %s" % e) from e
    return PtfCountermodel(
        {u: c.universal.get(u, ZERO) for u in phi.universals},
        {u: phi.left_vars(u) for u in phi.universals},
        size=m.qsize,
        degree=max((q.degree for q in c.universal.values()), default=0),
    )


def play(phi: Qbf, m: PtfCountermodel, exist: Mapping[int, int]) -> dict[int, int]:
    """Complete an existential assignment by the countermodel, in prefix order."""
    alpha: dict[int, int] = {}
    for q, v in phi.prefix:
        alpha[v] = exist[v] if q == "e" else m.decide(v, alpha)
    return alpha


def validate_countermodel(phi: Qbf, m: PtfCountermodel,
                          cap: int = DEFAULT_CAP) -> tuple[bool, dict[int, int] | None]:
    """``(True, None)`` if every play falsifies the matrix, else ``(False, satisfying play)``."""
    ex = phi.existentials
    check_cap(len(ex), cap)
    for a in all_assignments(ex, cap):
        alpha = play(phi, m, a)
        if falsified_clause(phi, alpha) is None:
            return False, alpha
    return True, None


def ptf_truth_table(m: PtfCountermodel, u: int,
                    cap: int = DEFAULT_CAP) -> dict[tuple[int, ...], int]:
    """Rows keyed by the bits of the left variables of ``u`` in prefix order."""
    left = m.left[u]
    check_cap(len(left), cap)
    return {tuple(a[v] for v in left): m.decide(u, a) for a in all_assignments(left, cap)}


def format_countermodel(m: PtfCountermodel, tables: bool = False) -> str:
    lines = ["# ptf size %d degree %d" % (m.size, m.degree)]
    for u in sorted(m.thresholds):
        lines.append("u %d : %s" % (u, format_poly(m.thresholds[u])))
    if tables:
        for u in sorted(m.thresholds):
            left = m.left[u]
            lines.append("# table u %d over %s" % (u, " ".join("x%d" % v for v in left) or "()"))
            for key, b in ptf_truth_table(m, u).items():
                lines.append("#   %s -> %d" % ("".join(map(str, key)) or "-", b))
    return "\n".join(lines) + "\n"
