"""Dense linear algebra over labeled tensor-product spaces.

Every state and operator carries a :class:`SubsystemLayout`, an ordered list of
``(label, dim)`` pairs. Layouts are kept sorted by label so that two objects
over the same registers are directly comparable entry by entry.

Logarithms are base 2 throughout; entropies are in bits.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DIM_CAP = 4096
TOL = 1e-10

OPERATOR_KINDS = ("unitary", "isometry", "measurement-element", "general")


class DimensionCapError(ValueError):
    """Raised when a layout would exceed the configured dimension cap."""


def dim_cap() -> int:
    """Current cap on total Hilbert-space dimension (env ``UNICOMP_DIM_CAP``)."""
    raw = os.environ.get("UNICOMP_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"UNICOMP_DIM_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError("UNICOMP_DIM_CAP must be positive")
    return cap


@dataclass(frozen=True)
class SubsystemLayout:
    systems: tuple[tuple[str, int], ...]

    def __post_init__(self):
        systems = tuple((str(lab), int(dim)) for lab, dim in self.systems)
        object.__setattr__(self, "systems", systems)
        labels = [lab for lab, _ in systems]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate subsystem labels in {labels}")
        for lab, dim in systems:
            if dim < 1:
                raise ValueError(f"subsystem {lab!r} has non-positive dimension {dim}")
        cap = dim_cap()
        if self.dim > cap:
            raise DimensionCapError(
                f"total dimension {self.dim} exceeds the cap {cap} (set UNICOMP_DIM_CAP to raise it)"
            )

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "SubsystemLayout":
        return cls(tuple(pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.systems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.systems)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.systems else 1

    def dim_of(self, labels: Iterable[str]) -> int:
        lookup = dict(self.systems)
        return int(np.prod([lookup[lab] for lab in labels], dtype=np.int64))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown subsystem label {label!r}; layout has {list(self.labels)}") from None

    def sub(self, labels: Iterable[str]) -> "SubsystemLayout":
        keep = set(labels)
        for lab in keep:
            self.index(lab)
        return SubsystemLayout(tuple(s for s in self.systems if s[0] in keep))

    def sorted(self) -> "SubsystemLayout":
        return SubsystemLayout(tuple(sorted(self.systems)))

    def is_sorted(self) -> bool:
        return list(self.labels) == sorted(self.labels)

    def __add__(self, other: "SubsystemLayout") -> "SubsystemLayout":
        overlap = set(self.labels) & set(other.labels)
        if overlap:
            raise ValueError(f"overlapping labels {sorted(overlap)}")
        return SubsystemLayout(self.systems + other.systems)

    def __len__(self):
        return len(self.systems)


def _as_layout(layout) -> SubsystemLayout:
    if isinstance(layout, SubsystemLayout):
        return layout
    return SubsystemLayout(tuple(tuple(s) for s in layout))


def _permute_vector(vec: np.ndarray, layout: SubsystemLayout, order: Sequence[str]) -> np.ndarray:
    """Reorder the tensor factors of a ket-shaped array to follow ``order``."""
    if tuple(order) == layout.labels:
        return vec
    perm = [layout.index(lab) for lab in order]
    return vec.reshape(layout.dims).transpose(perm).reshape(-1)


def _permute_matrix(mat: np.ndarray, layout: SubsystemLayout, order: Sequence[str]) -> np.ndarray:
    if tuple(order) == layout.labels:
        return mat
    n = len(layout)
    perm = [layout.index(lab) for lab in order]
    t = mat.reshape(layout.dims + layout.dims).transpose(perm + [p + n for p in perm])
    return t.reshape(layout.dim, layout.dim)


class LabeledState:
    """Density operator on named subsystems; pure states keep their ket.

    Construct with either ``matrix`` or ``vector``. Instances are treated as
    immutable: arrays are flagged read-only.
    """

    __slots__ = ("layout", "_matrix", "_vector")

    def __init__(self, layout, matrix=None, vector=None, check: bool = True):
        layout = _as_layout(layout)
        if (matrix is None) == (vector is None):
            raise ValueError("give exactly one of matrix or vector")
        if not layout.is_sorted():
            order = sorted(layout.labels)
            if vector is not None:
                vector = _permute_vector(np.asarray(vector, dtype=complex).reshape(-1), layout, order)
            else:
                matrix = _permute_matrix(np.asarray(matrix, dtype=complex), layout, order)
            layout = layout.sorted()
        self.layout = layout
        self._vector = None
        self._matrix = None
        if vector is not None:
            vec = np.array(vector, dtype=complex).reshape(-1)
            if vec.shape[0] != layout.dim:
                raise ValueError(f"vector length {vec.shape[0]} does not match layout dimension {layout.dim}")
            if check and abs(np.vdot(vec, vec).real - 1.0) > TOL:
                raise ValueError(f"state vector is not normalized (norm^2 = {np.vdot(vec, vec).real})")
            vec.flags.writeable = False
            self._vector = vec
        else:
            mat = np.array(matrix, dtype=complex)
            if mat.shape != (layout.dim, layout.dim):
                raise ValueError(f"matrix shape {mat.shape} does not match layout dimension {layout.dim}")
            if check:
                _check_density(mat)
            mat.flags.writeable = False
            self._matrix = mat

    @property
    def is_pure(self) -> bool:
        return self._vector is not None

    @property
    def vector(self) -> np.ndarray | None:
        return self._vector

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            mat = np.outer(self._vector, self._vector.conj())
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    @property
    def dim(self) -> int:
        return self.layout.dim

    def purity(self) -> float:
        if self.is_pure:
            return 1.0
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def __repr__(self):
        kind = "pure" if self.is_pure else "mixed"
        return f"LabeledState({kind}, {list(self.layout.systems)})"


def _check_density(mat: np.ndarray, tol: float = TOL) -> None:
    herm = np.abs(mat - mat.conj().T).max()
    if herm > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(mat).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(mat).min()
    if lo < -tol:
        raise ValueError(f"matrix has negative eigenvalue {lo:.3g}")


class LabeledOperator:
    """Matrix acting on the registers of ``layout``.

    Non-square maps (measurement elements such as ``AA0 -> A``) carry a
    separate ``out_layout``.
    """

    __slots__ = ("layout", "out_layout", "matrix", "kind")

    def __init__(self, layout, matrix, kind: str = "general", out_layout=None, check: bool = True):
        if kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {kind!r}")
        layout = _as_layout(layout)
        out_layout = layout if out_layout is None else _as_layout(out_layout)
        mat = np.array(matrix, dtype=complex)
        if mat.shape != (out_layout.dim, layout.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match layouts ({out_layout.dim}, {layout.dim})")
        square = out_layout == layout
        if square and not layout.is_sorted():
            mat = _permute_matrix(mat, layout, sorted(layout.labels))
            layout = out_layout = layout.sorted()
        if check and kind == "unitary":
            if not square:
                raise ValueError("a unitary must map a layout to itself")
            eye = np.eye(layout.dim)
            dev = max(np.abs(mat.conj().T @ mat - eye).max(), np.abs(mat @ mat.conj().T - eye).max())
            if dev > TOL:
                raise ValueError(f"operator is not unitary (max deviation {dev:.3g})")
        if check and kind == "isometry":
            dev = np.abs(mat.conj().T @ mat - np.eye(layout.dim)).max()
            if dev > TOL:
                raise ValueError(f"operator is not an isometry (max deviation {dev:.3g})")
        mat.flags.writeable = False
        self.layout = layout
        self.out_layout = out_layout
        self.matrix = mat
        self.kind = kind

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    def dagger(self) -> "LabeledOperator":
        return LabeledOperator(self.out_layout, self.matrix.conj().T, kind=self.kind, out_layout=self.layout, check=False)

    def __matmul__(self, other: "LabeledOperator") -> "LabeledOperator":
        if other.out_layout != self.layout:
            raise ValueError("layouts do not compose")
        kind = self.kind if self.kind == other.kind else "general"
        return LabeledOperator(other.layout, self.matrix @ other.matrix, kind=kind, out_layout=self.out_layout, check=False)

    def __repr__(self):
        return f"LabeledOperator({self.kind}, {list(self.layout.systems)})"


def unitary(layout, matrix) -> LabeledOperator:
    return LabeledOperator(layout, matrix, kind="unitary")


def identity(layout) -> LabeledOperator:
    layout = _as_layout(layout)
    return LabeledOperator(layout, np.eye(layout.dim), kind="unitary", check=False)


# -- construction ------------------------------------------------------------

def ket(layout, index) -> LabeledState:
    """Computational basis ket; ``index`` is a flat index or a per-system tuple."""
    layout = _as_layout(layout)
    vec = np.zeros(layout.dim, dtype=complex)
    flat = index if np.isscalar(index) else int(np.ravel_multi_index(tuple(index), layout.dims))
    vec[flat] = 1.0
    return LabeledState(layout, vector=vec)


def maximally_entangled(d: int, a: str, b: str) -> LabeledState:
    """``|Phi_d> = d^{-1/2} sum_i |i>_a |i>_b``."""
    vec = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return LabeledState(SubsystemLayout.of((a, d), (b, d)), vector=vec)


def maximally_mixed(layout) -> LabeledState:
    layout = _as_layout(layout)
    return LabeledState(layout, matrix=np.eye(layout.dim) / layout.dim, check=False)


def relabel(obj, mapping: dict[str, str]):
    """Rename registers of a state or operator."""
    def rename(layout):
        return SubsystemLayout(tuple((mapping.get(lab, lab), dim) for lab, dim in layout.systems))

    if isinstance(obj, LabeledState):
        layout = rename(obj.layout)
        if obj.is_pure:
            return LabeledState(layout, vector=obj.vector, check=False)
        return LabeledState(layout, matrix=obj.matrix, check=False)
    if isinstance(obj, LabeledOperator):
        return LabeledOperator(rename(obj.layout), obj.matrix, kind=obj.kind,
                               out_layout=rename(obj.out_layout), check=False)
    raise TypeError(f"cannot relabel {type(obj).__name__}")


# -- operations ----------------------------------------------------------------

def tensor(a, b):
    """Kronecker product of two states or two operators on disjoint registers."""
    if isinstance(a, LabeledState) and isinstance(b, LabeledState):
        layout = a.layout + b.layout
        if a.is_pure and b.is_pure:
            return LabeledState(layout, vector=np.kron(a.vector, b.vector), check=False)
        return LabeledState(layout, matrix=np.kron(a.matrix, b.matrix), check=False)
    if isinstance(a, LabeledOperator) and isinstance(b, LabeledOperator):
        if a.out_layout != a.layout or b.out_layout != b.layout:
            raise ValueError("tensor of non-square operators is not supported")
        kind = a.kind if a.kind == b.kind else "general"
        return LabeledOperator(a.layout + b.layout, np.kron(a.matrix, b.matrix), kind=kind, check=False)
    raise TypeError("tensor expects two LabeledState or two LabeledOperator values")


def tensor_all(items):
    items = list(items)
    out = items[0]
    for item in items[1:]:
        out = tensor(out, item)
    return out


def partial_trace(s: LabeledState, keep: Iterable[str]) -> LabeledState:
    """Reduced state on the registers in ``keep``."""
    keep = set(keep)
    for lab in keep:
        s.layout.index(lab)
    kept = [lab for lab in s.labels if lab in keep]
    traced = [lab for lab in s.labels if lab not in keep]
    out_layout = s.layout.sub(kept)
    if not traced:
        return s
    if s.is_pure:
        psi = _permute_vector(s.vector, s.layout, kept + traced).reshape(out_layout.dim, -1)
        rho = psi @ psi.conj().T
    else:
        n = len(s.layout)
        dims = s.layout.dims
        t = s.matrix.reshape(dims + dims)
        kidx = [s.layout.index(lab) for lab in kept]
        tidx = [s.layout.index(lab) for lab in traced]
        t = t.transpose(kidx + tidx + [i + n for i in kidx] + [i + n for i in tidx])
        dk, dt = out_layout.dim, s.layout.dim_of(traced)
        rho = np.einsum("ajbj->ab", t.reshape(dk, dt, dk, dt))
    return LabeledState(out_layout, matrix=rho, check=False)


def _apply_to_ket(vec: np.ndarray, layout: SubsystemLayout, op: LabeledOperator):
    """Contract ``op`` into the matching registers of a ket; returns (ket, layout)."""
    in_labels = list(op.layout.labels)
    for lab in in_labels:
        if op.layout.dim_of([lab]) != layout.dim_of([lab]):
            raise ValueError(f"dimension mismatch on register {lab!r}")
    rest = [lab for lab in layout.labels if lab not in in_labels]
    psi = _permute_vector(vec, layout, in_labels + rest).reshape(op.layout.dim, -1)
    psi = op.matrix @ psi
    new_layout = op.out_layout + layout.sub(rest)
    order = sorted(new_layout.labels)
    return _permute_vector(psi.reshape(-1), new_layout, order), new_layout.sorted()


def apply_operator(op: LabeledOperator, s: LabeledState, normalize: bool = False):
    """Apply ``op`` to the matching registers: ``K rho K^dagger``.

    For non-unitary ``op`` the result is unnormalized unless ``normalize``;
    in that case the pair ``(state, weight)`` is returned where ``weight`` is
    the trace before normalization.
    """
    if s.is_pure:
        vec, layout = _apply_to_ket(s.vector, s.layout, op)
        if op.kind == "unitary" and not normalize:
            return LabeledState(layout, vector=vec, check=False)
        weight = float(np.vdot(vec, vec).real)
        if normalize:
            if weight <= 0:
                return None, 0.0
            return LabeledState(layout, vector=vec / np.sqrt(weight), check=False), weight
        return LabeledState(layout, vector=vec, check=False)
    labels = list(op.layout.labels)
    for lab in labels:
        if op.layout.dim_of([lab]) != s.layout.dim_of([lab]):
            raise ValueError(f"dimension mismatch on register {lab!r}")
    rest = [lab for lab in s.labels if lab not in labels]
    din, dout, dr = op.layout.dim, op.out_layout.dim, s.layout.dim_of(rest)
    rho = _permute_matrix(s.matrix, s.layout, labels + rest).reshape(din, dr, din, dr)
    k = op.matrix
    rho = np.einsum("ai,ibjc,dj->abdc", k, rho, k.conj(), optimize=True).reshape(dout * dr, dout * dr)
    new_layout = op.out_layout + s.layout.sub(rest)
    rho = _permute_matrix(rho, new_layout, sorted(new_layout.labels))
    new_layout = new_layout.sorted()
    if op.kind == "unitary" and not normalize:
        return LabeledState(new_layout, matrix=rho, check=False)
    weight = float(np.trace(rho).real)
    if normalize:
        if weight <= 0:
            return None, 0.0
        return LabeledState(new_layout, matrix=rho / weight, check=False), weight
    return LabeledState(new_layout, matrix=rho, check=False)


def conjugate_many(ops: Sequence[LabeledOperator], s: LabeledState) -> LabeledState:
    """Uniform mixture ``K^{-1} sum_k V_k rho V_k^dagger`` for unitaries on a common register set."""
    if not ops:
        raise ValueError("empty operator list")
    labels = list(ops[0].layout.labels)
    for op in ops:
        if list(op.layout.labels) != labels:
            raise ValueError("all members must act on the same registers")
    rest = [lab for lab in s.labels if lab not in labels]
    dv = ops[0].layout.dim
    dr = s.layout.dim_of(rest)
    rho = _permute_matrix(s.matrix, s.layout, labels + rest).reshape(dv, dr, dv, dr)
    acc = np.zeros_like(rho)
    for op in ops:
        v = op.matrix
        acc += np.einsum("ai,ibjc,dj->abdc", v, rho, v.conj(), optimize=True)
    acc /= len(ops)
    layout = SubsystemLayout(tuple((lab, s.layout.dim_of([lab])) for lab in labels + rest))
    out = acc.reshape(s.dim, s.dim)
    return LabeledState(layout, matrix=out, check=False)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def _same_layout(rho: LabeledState, sigma: LabeledState) -> None:
    if rho.layout != sigma.layout:
        raise ValueError(f"layout mismatch: {list(rho.layout.systems)} vs {list(sigma.layout.systems)}")


def trace_norm(mat: np.ndarray) -> float:
    """Sum of singular values; uses eigenvalues when ``mat`` is Hermitian."""
    if np.abs(mat - mat.conj().T).max() < 1e-12:
        return float(np.abs(np.linalg.eigvalsh((mat + mat.conj().T) / 2)).sum())
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def trace_distance(rho: LabeledState, sigma: LabeledState) -> float:
    """Unnormalized trace distance ``||rho - sigma||_1`` (ranges over [0, 2])."""
    _same_layout(rho, sigma)
    return trace_norm(rho.matrix - sigma.matrix)


def fidelity(rho: LabeledState, sigma: LabeledState) -> float:
    """Squared Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    _same_layout(rho, sigma)
    if rho.is_pure and sigma.is_pure:
        f = abs(np.vdot(rho.vector, sigma.vector)) ** 2
    elif sigma.is_pure:
        f = np.real(np.vdot(sigma.vector, rho.matrix @ sigma.vector))
    elif rho.is_pure:
        f = np.real(np.vdot(rho.vector, sigma.matrix @ rho.vector))
    else:
        # ||sqrt(rho) sqrt(sigma)||_1 == Tr sqrt(sqrt(rho) sigma sqrt(rho))
        s = np.linalg.svd(_psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix), compute_uv=False).sum()
        f = s ** 2
    return float(min(max(f, 0.0), 1.0))


def entropy_of_spectrum(eigs: np.ndarray) -> float:
    p = np.clip(np.asarray(eigs, dtype=float), 0.0, None)
    p = p[p > 1e-15]
    h = float(-(p * np.log2(p)).sum())
    # below 1e-12 bits the value is eigenvalue round-off, not entropy
    return h if h > 1e-12 else 0.0


def von_neumann_entropy(rho: LabeledState) -> float:
    """``-sum lambda log2 lambda`` with eigenvalues clipped at zero."""
    if rho.is_pure:
        return 0.0
    return max(entropy_of_spectrum(np.linalg.eigvalsh(rho.matrix)), 0.0)


def entropy_of(s: LabeledState, labels: Iterable[str]) -> float:
    """Entropy of the marginal on ``labels``; uses the smaller side for pure states."""
    labels = set(labels)
    if s.is_pure:
        other = set(s.labels) - labels
        if s.layout.dim_of(other) < s.layout.dim_of(labels):
            labels = other
        if not labels:
            return 0.0
    return von_neumann_entropy(partial_trace(s, labels))


def mutual_information(s: LabeledState, x: Iterable[str], y: Iterable[str]) -> float:
    """``S(X) + S(Y) - S(XY)`` in bits."""
    x, y = set(x), set(y)
    if x & y:
        raise ValueError(f"overlapping label sets {sorted(x & y)}")
    return entropy_of(s, x) + entropy_of(s, y) - entropy_of(s, x | y)


def conditional_entropy(s: LabeledState, x: Iterable[str], y: Iterable[str]) -> float:
    """``S(X|Y) = S(XY) - S(Y)``."""
    x, y = set(x), set(y)
    return entropy_of(s, x | y) - entropy_of(s, y)


# -- interchange -----------------------------------------------------------------

def matrix_to_json(layout, matrix: np.ndarray) -> dict:
    """Serialize to ``{"labels": [[lab, dim], ...], "re": [[...]], "im": [[...]]}``."""
    layout = _as_layout(layout)
    mat = np.asarray(matrix, dtype=complex)
    return {
        "labels": [[lab, dim] for lab, dim in layout.systems],
        "re": mat.real.tolist(),
        "im": mat.imag.tolist(),
    }


def matrix_from_json(obj) -> tuple[SubsystemLayout, np.ndarray]:
    """Parse the interchange format (dict or JSON text)."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        layout = SubsystemLayout(tuple((str(lab), int(dim)) for lab, dim in obj["labels"]))
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DimensionCapError):
            raise
        raise ValueError(f"malformed matrix document: {exc}") from exc
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError("malformed matrix document: 're' and 'im' must be equal-shape 2-D arrays")
    if re.shape != (layout.dim, layout.dim):
        raise ValueError(f"malformed matrix document: shape {re.shape} does not match labels (dim {layout.dim})")
    return layout, re + 1j * im


def state_to_json(s: LabeledState) -> dict:
    return matrix_to_json(s.layout, s.matrix)


def operator_to_json(op: LabeledOperator) -> dict:
    return matrix_to_json(op.layout, op.matrix)
