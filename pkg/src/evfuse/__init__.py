"""Belief-function combination with order-invariant streaming fusion.

Build a :class:`Frame`, choose a :class:`Model` (free, exclusive, or
pairwise exclusions), assign masses to parsed propositions, and either
combine pairs with :func:`combine2` or stream any number of sources
through a :class:`FusionState` and take rule snapshots on demand.
"""

from .errors import ExpressionError, TotalConflictError, ValidationError
from .lattice import Frame, Model, Proposition, format_prop, make_model, parse_prop
from .mass import ColumnSums, MassFunction, column_sums, deviation, vbf
from .rules import (
    ConjunctiveResult,
    Rule,
    apply_transfer,
    combine2,
    conflict_of,
    conjunctive,
    sdli2,
    transfer_dempster,
    transfer_sdli,
    transfer_smets,
    transfer_union,
    transfer_yager,
)
from .engine import FusionState, batch, oracle_conjunctive

__version__ = "0.1.0"

__all__ = [
    "ColumnSums",
    "ConjunctiveResult",
    "ExpressionError",
    "Frame",
    "FusionState",
    "MassFunction",
    "Model",
    "Proposition",
    "Rule",
    "TotalConflictError",
    "ValidationError",
    "apply_transfer",
    "batch",
    "column_sums",
    "combine2",
    "conflict_of",
    "conjunctive",
    "deviation",
    "format_prop",
    "make_model",
    "oracle_conjunctive",
    "parse_prop",
    "sdli2",
    "transfer_dempster",
    "transfer_sdli",
    "transfer_smets",
    "transfer_union",
    "transfer_yager",
    "vbf",
]
