"""Algebraic proof systems for false quantified Boolean formulas.

Exact polynomial certificates (nullstellensatz, Sherali-Adams and
sum-of-squares style), the score game that characterizes them, proof-trace
checkers with translations between systems, a degree-bounded certificate
search and a pseudo-expectation auditor.
"""

from .cert import Certificate, Measures, verify
from .errors import QbfAlgError
from .poly import Polynomial
from .qbf import Qbf, parse_qdimacs, write_qdimacs

__all__ = ["Certificate", "Measures", "Polynomial", "Qbf", "QbfAlgError",
           "parse_qdimacs", "verify", "write_qdimacs"]
__version__ = "0.1.0"
