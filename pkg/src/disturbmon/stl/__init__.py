"""Formula syntax, parser, and dense-time monitors."""

from .ast import (FALSE, TRUE, And, Atom, Const, Eventually, Formula, G,
                  Globally, Interval, Not, Or, U, Until, F, conj, node_label,
                  preorder, pretty)
from .exemplify import ExemplifyResult, SignalTemplate, exemplify
from .intervals import IntervalSet, Ival
from .parser import parse
from .semantics import (LANE, NUMBER, VEHICLE, AtomSpec, EvalContext, Monitor,
                        atom_specs, eval_bool, eval_robust, eval_series,
                        lookup_atom, register_atom, register_macro)

__all__ = [
    "And", "Atom", "AtomSpec", "Const", "EvalContext", "Eventually",
    "ExemplifyResult", "F", "FALSE", "Formula", "G", "Globally", "Interval",
    "IntervalSet", "Ival", "LANE", "Monitor", "NUMBER", "Not", "Or",
    "SignalTemplate", "TRUE", "U", "Until", "VEHICLE", "atom_specs", "conj",
    "eval_bool", "eval_robust", "eval_series", "exemplify", "lookup_atom",
    "node_label", "parse", "preorder", "pretty", "register_atom",
    "register_macro",
]
