"""Exact invariants and existence verdicts for coherent systems of type (n, d, n+1)."""

from .decision import RuleSet, Status, Target, Verdict, decide, sweep
from .exact_arith import DomainError
from .invariants import CSType, CurveContext

__all__ = [
    "CSType",
    "CurveContext",
    "DomainError",
    "RuleSet",
    "Status",
    "Target",
    "Verdict",
    "decide",
    "sweep",
]
__version__ = "0.1.0"
