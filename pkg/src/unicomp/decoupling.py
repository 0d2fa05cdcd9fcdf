"""Random-unitary channels and partial decoupling of ``A R_A`` from ``R_B``.

The object of interest is the ``A R_A R_B`` marginal of ``Psi(U^dagger)^{(x) n}``.
A channel ``T(rho) = K^{-1} sum_k V_k rho V_k^dagger`` on the ``n`` copies of
``A`` decouples if its output is a product with ``I / d^n`` on the ``R_B``
copies. The deviation from that product, in trace norm, is what
:func:`decoupling_deviation` reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .linalg import (
    LabeledOperator,
    LabeledState,
    conjugate_many,
    maximally_mixed,
    partial_trace,
    relabel,
    tensor,
    tensor_all,
    trace_distance,
)
from .pauli import CliffordTable, PauliLabel, all_labels, pauli_string, translate_reference_pauli
from .unitary import make_psi

EXACT_TOL = 1e-10


def copy_labels(base: str, n: int) -> list[str]:
    """Register names for ``n`` copies: ``A`` for one copy, ``A.1 .. A.n`` otherwise."""
    if n < 1:
        raise ValueError(f"block length must be positive, got {n}")
    return [base] if n == 1 else [f"{base}.{i}" for i in range(1, n + 1)]


@dataclass(frozen=True)
class RandomUnitaryChannel:
    target: tuple[str, ...]
    members: tuple[LabeledOperator, ...] = field(repr=False)
    n: int = 1
    member_labels: tuple = ()

    def __post_init__(self):
        if not self.members:
            raise ValueError("a random-unitary channel needs at least one member")
        for m in self.members:
            if m.kind != "unitary":
                raise ValueError("channel members must be unitary")
            if set(m.labels) != set(self.target):
                raise ValueError(f"member acts on {list(m.labels)}, channel target is {list(self.target)}")

    @property
    def K(self) -> int:
        return len(self.members)

    @property
    def rate(self) -> float:
        return float(np.log2(self.K) / self.n)

    @classmethod
    def from_paulis(cls, labels, d: int, n: int = 1, base: str = "A") -> "RandomUnitaryChannel":
        """Channel from Pauli labels; each entry is a label (n=1) or a tuple of n labels."""
        regs = copy_labels(base, n)
        norm = [(lab,) if isinstance(lab, PauliLabel) else tuple(lab) for lab in labels]
        members = tuple(pauli_string(strs, regs) for strs in norm)
        return cls(target=tuple(sorted(regs)), members=members, n=n, member_labels=tuple(norm))

    @classmethod
    def full_pauli(cls, d: int, n: int = 1, base: str = "A") -> "RandomUnitaryChannel":
        return cls.from_paulis(list(product(all_labels(d), repeat=n)), d, n, base)


@dataclass(frozen=True)
class DecouplingReport:
    deviation: float
    rate: float
    ensemble_size: int
    n: int
    exact: bool
    member_labels: tuple = ()
    label: str = "numerical upper bound at block length n"

    def to_dict(self) -> dict:
        return {
            "deviation": self.deviation,
            "rate": self.rate,
            "ensemble_size": self.ensemble_size,
            "n": self.n,
            "exact": self.exact,
            "members": [[str(x) for x in m] for m in self.member_labels],
            "label": self.label,
        }


def apply_channel(ch: RandomUnitaryChannel, s: LabeledState) -> LabeledState:
    for lab in ch.target:
        if lab not in s.labels:
            raise ValueError(f"channel register {lab!r} not in state {list(s.labels)}")
        if s.layout.dim_of([lab]) != ch.members[0].layout.dim_of([lab]):
            raise ValueError(f"dimension mismatch on register {lab!r}")
    return conjugate_many(ch.members, s)


def psi_dagger_marginal(U: LabeledOperator, n: int = 1) -> LabeledState:
    """``(Psi(U^dagger)^{(x) n})`` restricted to the copies of ``A, R_A, R_B``."""
    single = partial_trace(make_psi(U, dagger=True), {"A", "R_A", "R_B"})
    if n == 1:
        return single
    copies = [
        relabel(single, {"A": f"A.{i}", "R_A": f"R_A.{i}", "R_B": f"R_B.{i}"})
        for i in range(1, n + 1)
    ]
    return tensor_all(copies)


def decoupling_gap(s: LabeledState, kept, traced) -> float:
    """``|| s - s^{kept} (x) I/dim(traced) ||_1``."""
    prod = tensor(partial_trace(s, kept), maximally_mixed(s.layout.sub(traced)))
    return trace_distance(s, prod)


def _regs(n):
    return copy_labels("A", n), copy_labels("R_A", n), copy_labels("R_B", n)


def decoupling_deviation(U: LabeledOperator, ch: RandomUnitaryChannel, n: int | None = None) -> DecouplingReport:
    n = ch.n if n is None else n
    if n != ch.n:
        raise ValueError(f"channel acts on {ch.n} copies, asked for n={n}")
    a, ra, rb = _regs(n)
    out = apply_channel(ch, psi_dagger_marginal(U, n))
    dev = decoupling_gap(out, a + ra, rb)
    return DecouplingReport(
        deviation=dev,
        rate=ch.rate,
        ensemble_size=ch.K,
        n=n,
        exact=dev <= EXACT_TOL,
        member_labels=ch.member_labels,
    )


def reference_deviation(U: LabeledOperator, reference_labels, n: int = 1) -> float:
    """Deviation when the Pauli ensemble acts on the reference copies ``R_B`` instead."""
    d = U.layout.dims[0]
    a, ra, rb = _regs(n)
    ref = RandomUnitaryChannel.from_paulis(reference_labels, d, n, base="R_B")
    out = apply_channel(ref, psi_dagger_marginal(U, n))
    return decoupling_gap(out, a + ra, rb)


def _normalize_labels(reference_labels):
    return [(lab,) if isinstance(lab, PauliLabel) else tuple(lab) for lab in reference_labels]


def clifford_ensemble(U: LabeledOperator, table: CliffordTable, reference_labels) -> RandomUnitaryChannel:
    """Translate a reference-side Pauli ensemble into an A-side one.

    Each entry of ``reference_labels`` is a :class:`PauliLabel` (one copy) or
    a tuple of labels (one per copy). Every reference Pauli is replaced by its
    A-side equivalent for ``Psi(U^dagger)``, so both ensembles give the same
    ``A R_A R_B`` output.
    """
    if table is None:
        raise ValueError("U is not Clifford")
    norm = _normalize_labels(reference_labels)
    if not norm:
        raise ValueError("empty reference ensemble")
    n = len(norm[0])
    translated = [tuple(translate_reference_pauli(table, lab.p, lab.q) for lab in entry) for entry in norm]
    ch = RandomUnitaryChannel.from_paulis(translated, table.d, n)
    return ch


def clifford_reference_labels(table: CliffordTable, n: int = 1) -> list[tuple[PauliLabel, ...]]:
    """One reference Pauli per distinct A-side image, lexicographically first.

    Reference Paulis whose A-side image is the identity leave the marginal
    untouched, so the full reference twirl reduces to one representative per
    image. The full twirl decouples, hence so does this set.
    """
    reps = {}
    for lab in all_labels(table.d):
        img = translate_reference_pauli(table, lab.p, lab.q)
        reps.setdefault((img.p, img.q), lab)
    single = sorted(reps.values())
    return [tuple(combo) for combo in product(single, repeat=n)]


def search_min_pauli_ensemble(U: LabeledOperator, n: int = 1, eps: float = 1e-9, batch: int = 2048):
    """Smallest subset of n-fold Paulis on ``A`` whose channel decouples within ``eps``.

    Subsets are scanned by size, then lexicographically; the first hit wins.
    Returns ``(report, members)``. The rate is an upper bound on the partial
    decoupling cost at this block length only.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    d = U.layout.dims[0]
    cands = list(product(all_labels(d), repeat=n))
    if len(cands) > 16:
        raise ValueError(f"search space of {len(cands)} Paulis is too large (d^(2n) <= 16 required)")
    a, ra, rb = _regs(n)
    base = psi_dagger_marginal(U, n)
    # sorted layout puts the R_B copies last
    assert list(base.labels[-n:]) == rb
    outs = np.stack([
        conjugate_many([pauli_string(c, a)], base).matrix for c in cands
    ])
    # rho -> rho - rho^{A R_A} (x) I/d^n is linear, so a subset's gap is the mean of member gaps
    y = d**n
    x = base.dim // y
    t = outs.reshape(-1, x, y, x, y)
    marg = np.einsum("bxyzy->bxz", t)
    gaps = outs - np.einsum("bxz,yw->bxyzw", marg, np.eye(y) / y).reshape(outs.shape)
    flat = gaps.reshape(len(cands), -1)
    gram = np.real(flat.conj() @ flat.T)
    # the quadratic form loses ~1e-16 relative accuracy; keep the filter conservative
    slack = 1e-12 * max(float(np.abs(gram).max()), 1.0)
    dim = base.dim
    for size in range(1, len(cands) + 1):
        combos = combinations(range(len(cands)), size)
        while True:
            chunk = [c for _, c in zip(range(batch), combos)]
            if not chunk:
                break
            sel = np.zeros((len(chunk), len(cands)))
            for row, c in enumerate(chunk):
                sel[row, list(c)] = 1.0 / size
            # ||.||_1 >= ||.||_F: subsets failing the Frobenius test cannot pass
            frob2 = np.einsum("bi,ij,bj->b", sel, gram, sel)
            devs = np.full(len(chunk), np.inf)
            live = np.flatnonzero(frob2 <= eps**2 + slack)
            if live.size:
                diff = (sel[live] @ flat).reshape(-1, dim, dim)
                herm = (diff + diff.conj().transpose(0, 2, 1)) / 2
                devs[live] = np.abs(np.linalg.eigvalsh(herm)).sum(axis=1)
            hits = np.flatnonzero(devs <= eps)
            if hits.size:
                pick = chunk[int(hits[0])]
                members = [cands[i] for i in pick]
                report = DecouplingReport(
                    deviation=float(devs[hits[0]]),
                    rate=float(np.log2(size) / n),
                    ensemble_size=size,
                    n=n,
                    exact=bool(devs[hits[0]] <= EXACT_TOL),
                    member_labels=tuple(members),
                )
                return report, members
    raise AssertionError("full Pauli ensemble failed to decouple")  # unreachable: full twirl is exact
