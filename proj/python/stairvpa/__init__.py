"""Visibly pushdown automata with stair acceptance conditions."""

from ._core import (
    Automaton,
    ResourceLimitError,
    SemanticError,
    SyntaxError,
    accepts,
    check_removable,
    classify,
    diff,
    load,
    parse,
    remove_stair,
    serialize,
    stair_index,
)

__all__ = [
    "Automaton",
    "ResourceLimitError",
    "SemanticError",
    "SyntaxError",
    "accepts",
    "check_removable",
    "classify",
    "diff",
    "load",
    "parse",
    "remove_stair",
    "serialize",
    "stair_index",
]
