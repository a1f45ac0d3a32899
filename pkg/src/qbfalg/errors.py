"""Exception hierarchy shared by every module.

All errors derive from :class:`QbfAlgError`.  The CLI maps these to exit
code 1 (a clean rejection); anything else is treated as a malfunction.
"""

from __future__ import annotations

from typing import Any


class QbfAlgError(Exception):
    """Base class for all rejections raised by the library."""


class TooLarge(QbfAlgError):
    """An exhaustive routine was asked to exceed its variable cap."""


# poly
class UnassignedVariable(QbfAlgError):
    def __init__(self, var: int):
        super().__init__(f"variable {var} has no value")
        self.var = var


class NotInIdeal(QbfAlgError):
    def __init__(self, assignment: dict[int, int], value: Any):
        super().__init__(
            f"polynomial takes value {value} on satisfying assignment {assignment}")
        self.assignment = assignment
        self.value = value


# qbf
class ParseError(QbfAlgError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class TautologyError(ParseError):
    pass


class UndeclaredVariable(ParseError):
    pass


class InvalidAxiomId(QbfAlgError):
    pass


class NotExistential(QbfAlgError):
    pass


class InvalidSize(QbfAlgError):
    pass


# cert
class IdentityViolated(QbfAlgError):
    def __init__(self, residual: Any):
        super().__init__(f"identity fails; residual {residual}")
        self.residual = residual


class SideConditionViolated(QbfAlgError):
    def __init__(self, u: int, var: int):
        super().__init__(f"multiplier of universal {u} mentions variable {var}, "
                         "which is not quantified to its left")
        self.u = u
        self.var = var


class RemainderShapeViolated(QbfAlgError):
    pass


class NotQSA(QbfAlgError):
    pass


class NotQSOS(QbfAlgError):
    pass


# game
class NotWinningEval(QbfAlgError):
    def __init__(self, message: str, counterexample: dict[int, int] | None = None):
        super().__init__(message)
        self.counterexample = counterexample


class NotWinning(QbfAlgError):
    def __init__(self, message: str, counterexample: dict[int, int] | None = None):
        super().__init__(message)
        self.counterexample = counterexample


class NoSatisfyingAssignment(QbfAlgError):
    pass


class HypothesisViolated(QbfAlgError):
    pass


# extract
class NotVerified(QbfAlgError):
    pass


# proofs
class InvalidStep(QbfAlgError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class FinalConfigViolation(QbfAlgError):
    pass


class NotRefuted(QbfAlgError):
    pass


class NotNormalizable(QbfAlgError):
    pass


# search
class Infeasible(QbfAlgError):
    def __init__(self, message: str, budget: Any = None, farkas: Any = None):
        super().__init__(message)
        self.budget = budget
        self.farkas = farkas


class NoneFound(QbfAlgError):
    pass


# pexp
class QdegTooHigh(QbfAlgError):
    pass
