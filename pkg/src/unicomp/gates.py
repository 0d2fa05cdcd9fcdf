"""Named bipartite gates and gate-spec resolution.

Registry names: ``I``, ``CZ``, ``CNOT``, ``SWAP``, ``CPHASE(phi)``, ``CT``.
``I``, ``CZ``, ``CNOT`` and ``SWAP`` take a local dimension ``d``; the qudit
versions of CZ and CNOT are ``sum_a |a><a| (x) Z^a`` and ``sum_a |a><a| (x) X^a``
with the generalized Paulis of :mod:`unicomp.pauli`.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .linalg import LabeledOperator, SubsystemLayout, matrix_from_json


class UnknownGateError(ValueError):
    pass


def bipartite_layout(d: int) -> SubsystemLayout:
    return SubsystemLayout.of(("A", d), ("B", d))


def _shift(d):
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j - 1) % d, j] = 1.0
    return x


def _clock(d):
    w = np.exp(2j * np.pi / d)
    return np.diag([w ** (j + 1) for j in range(d)])


def _controlled(d, local):
    mat = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        proj = np.zeros((d, d))
        proj[a, a] = 1.0
        mat += np.kron(proj, np.linalg.matrix_power(local, a))
    return mat


def identity_gate(d: int = 2) -> np.ndarray:
    return np.eye(d * d, dtype=complex)


def cz(d: int = 2) -> np.ndarray:
    if d == 2:
        return np.diag([1, 1, 1, -1]).astype(complex)
    return _controlled(d, _clock(d))


def cnot(d: int = 2) -> np.ndarray:
    if d == 2:
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    return _controlled(d, _shift(d))


def swap(d: int = 2) -> np.ndarray:
    mat = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            mat[b * d + a, a * d + b] = 1.0
    return mat


def cphase(phi: float) -> np.ndarray:
    """``|0><0| (x) I + |1><1| (x) diag(1, e^{i phi})``; ``cphase(pi)`` is CZ."""
    return np.diag([1, 1, 1, np.exp(1j * phi)]).astype(complex)


def controlled_exp_z(phi: float) -> np.ndarray:
    """``|0><0| (x) I + |1><1| (x) exp(i phi Z)`` with this package's ``Z = diag(-1, 1)``.

    Equal to ``cphase(2 phi)`` up to the local phase ``diag(1, e^{-i phi})`` on A.
    """
    return np.diag([1, 1, np.exp(-1j * phi), np.exp(1j * phi)]).astype(complex)


def controlled_t() -> np.ndarray:
    return cphase(np.pi / 4)


_PHI_RE = re.compile(r"^CPHASE\((.+)\)$", re.IGNORECASE)


def _parse_angle(text: str) -> float:
    expr = text.strip().lower().replace(" ", "")
    m = re.fullmatch(r"([-+]?[0-9.]*)\*?pi(?:/([0-9.]+))?", expr)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else (-1.0 if coef == "-" else float(coef))
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * np.pi / den
    try:
        return float(expr)
    except ValueError:
        raise UnknownGateError(f"cannot parse phase angle {text!r}") from None


def named_gate(name: str, d: int = 2) -> LabeledOperator:
    """Resolve a registry name to a unitary on ``A (x) B``."""
    key = name.strip()
    upper = key.upper()
    m = _PHI_RE.match(key)
    if m:
        _need_qubit(key, d)
        mat = cphase(_parse_angle(m.group(1)))
    elif upper == "I":
        mat = identity_gate(d)
    elif upper == "CZ":
        mat = cz(d)
    elif upper == "CNOT":
        mat = cnot(d)
    elif upper == "SWAP":
        mat = swap(d)
    elif upper == "CT":
        _need_qubit(key, d)
        mat = controlled_t()
    else:
        raise UnknownGateError(f"unknown gate {name!r}; known: I, CZ, CNOT, SWAP, CPHASE(phi), CT")
    return LabeledOperator(bipartite_layout(d), mat, kind="unitary")


def _need_qubit(name, d):
    if d != 2:
        raise UnknownGateError(f"gate {name!r} is defined for d=2 only")


def gate_from_file(path) -> LabeledOperator:
    """Load a bipartite unitary from the JSON interchange format."""
    try:
        text = Path(path).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed matrix file {path}: {exc}") from exc
    layout, mat = matrix_from_json(doc)
    if len(layout) != 2:
        raise ValueError(f"malformed matrix file {path}: expected two subsystems, got {len(layout)}")
    if layout.dims[0] != layout.dims[1]:
        raise ValueError(f"malformed matrix file {path}: subsystem dimensions differ {layout.dims}")
    d = layout.dims[0]
    # a gate file names its own registers; we rename positionally to A, B
    return LabeledOperator(bipartite_layout(d), mat, kind="unitary")


def resolve_gate(spec: str | None = None, d: int = 2, path=None) -> LabeledOperator:
    if path is not None:
        return gate_from_file(path)
    if spec is None:
        raise UnknownGateError("no gate given")
    return named_gate(spec, d)
