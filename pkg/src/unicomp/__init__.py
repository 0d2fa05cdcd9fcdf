"""Numerical toolkit for the resource cost of implementing bipartite unitaries by LOCC with shared entanglement."""

__version__ = "0.1.0"

from .gates import named_gate, resolve_gate
from .linalg import (
    LabeledOperator,
    LabeledState,
    SubsystemLayout,
    fidelity,
    maximally_entangled,
    mutual_information,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from .unitary import make_psi, schmidt_decompose, schmidt_strength

__all__ = [
    "LabeledOperator",
    "LabeledState",
    "SubsystemLayout",
    "fidelity",
    "make_psi",
    "maximally_entangled",
    "mutual_information",
    "named_gate",
    "partial_trace",
    "resolve_gate",
    "schmidt_decompose",
    "schmidt_strength",
    "tensor",
    "trace_distance",
    "von_neumann_entropy",
]
