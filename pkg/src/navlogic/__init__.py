"""Navigation strategies under imperfect information: synthesis, model
checking and the two axiom systems with their canonical models."""

from . import errors
from .errors import NavlogicError
from .formula import (
    Atom, Implies, NavStatement, Not, format_formula, parse_atom, parse_formula, view_set,
)
from .navigation import (
    MEMORYLESS, RECALL, NavigabilityTable, check_memoryless_witness, check_recall_witness,
    compose_recall, evaluate, navigability_table, synth_memoryless, synth_recall,
)
from .strategies import MemorylessStrategy, RecallMachine, lift_memoryless
from .system import (
    History, TransitionSystem, class_of, format_system, histories_indistinguishable,
    is_history, parse_system, star, truncate_history, validate_system,
)

__version__ = "0.1.0"

__all__ = [
    "errors", "NavlogicError",
    "Atom", "Implies", "NavStatement", "Not", "format_formula", "parse_atom", "parse_formula",
    "view_set",
    "MEMORYLESS", "RECALL", "NavigabilityTable", "check_memoryless_witness",
    "check_recall_witness", "compose_recall", "evaluate", "navigability_table",
    "synth_memoryless", "synth_recall",
    "MemorylessStrategy", "RecallMachine", "lift_memoryless",
    "History", "TransitionSystem", "class_of", "format_system", "histories_indistinguishable",
    "is_history", "parse_system", "star", "truncate_history", "validate_system",
]
