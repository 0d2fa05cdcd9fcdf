"""Operator Schmidt decomposition, Schmidt strength and the canonical states.

``Psi(U) = U^{AB} |Phi_d>^{A R_A} |Phi_d>^{B R_B}``. Its entanglement entropy
across ``A R_A | B R_B`` is the Schmidt strength ``K(U)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    LabeledOperator,
    LabeledState,
    SubsystemLayout,
    apply_operator,
    entropy_of_spectrum,
    maximally_entangled,
    partial_trace,
    tensor,
    von_neumann_entropy,
)

RANK_CUTOFF = 1e-9


@dataclass(frozen=True)
class SchmidtDecomposition:
    d: int
    coeffs: np.ndarray
    ops_A: tuple[np.ndarray, ...] = field(repr=False)
    ops_B: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def S(self) -> int:
        return len(self.coeffs)

    def reconstruct(self) -> np.ndarray:
        return sum(c * np.kron(e, f) for c, e, f in zip(self.coeffs, self.ops_A, self.ops_B))


@dataclass(frozen=True)
class UnitaryProfile:
    d: int
    K: float
    S: int
    is_clifford: bool | None = None


def _split_dims(U: LabeledOperator) -> int:
    if len(U.layout) != 2:
        raise ValueError(f"expected a bipartite operator, got registers {list(U.labels)}")
    da, db = U.layout.dims
    if da != db:
        raise ValueError(f"subsystem dimensions differ: {da} vs {db}")
    return da


def _require_unitary(U: LabeledOperator) -> None:
    m = U.matrix
    eye = np.eye(m.shape[0])
    dev = max(np.abs(m.conj().T @ m - eye).max(), np.abs(m @ m.conj().T - eye).max())
    if dev > 1e-10:
        raise ValueError(f"operator is not unitary (max deviation {dev:.3g})")


def reshuffle(mat: np.ndarray, d: int) -> np.ndarray:
    """``R[(a,a'),(b,b')] = U[(a,b),(a',b')]``: product operators become rank one."""
    return mat.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def schmidt_decompose(U: LabeledOperator) -> SchmidtDecomposition:
    """Operator Schmidt decomposition ``U = sum_s c_s E_s (x) F_s``.

    Local operators are normalized so that ``Tr[E_s^dagger E_t] / d = delta_st``,
    which makes ``sum_s c_s^2 = 1`` for unitary ``U``.
    """
    d = _split_dims(U)
    _require_unitary(U)
    u, s, vh = np.linalg.svd(reshuffle(U.matrix, d))
    keep = s > RANK_CUTOFF * d
    coeffs = s[keep] / d
    ops_a = tuple(np.sqrt(d) * u[:, i].reshape(d, d) for i in np.flatnonzero(keep))
    ops_b = tuple(np.sqrt(d) * vh[i, :].reshape(d, d) for i in np.flatnonzero(keep))
    return SchmidtDecomposition(d=d, coeffs=coeffs, ops_A=ops_a, ops_B=ops_b)


def schmidt_strength(dec: SchmidtDecomposition | LabeledOperator) -> float:
    """``K(U) = -sum_s c_s^2 log2 c_s^2`` in bits."""
    if isinstance(dec, LabeledOperator):
        dec = schmidt_decompose(dec)
    return entropy_of_spectrum(np.asarray(dec.coeffs) ** 2)


def profile(U: LabeledOperator, with_clifford: bool = True) -> UnitaryProfile:
    dec = schmidt_decompose(U)
    cliff = None
    if with_clifford:
        from .pauli import is_clifford

        cliff = is_clifford(U)[0]
    return UnitaryProfile(d=dec.d, K=schmidt_strength(dec), S=dec.S, is_clifford=cliff)


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_gate(d: int, rng) -> LabeledOperator:
    return LabeledOperator(SubsystemLayout.of(("A", d), ("B", d)), haar_unitary(d * d, rng), kind="unitary", check=False)


def make_psi(U: LabeledOperator, dagger: bool = False) -> LabeledState:
    """Pure state ``Psi(U)`` (or ``Psi(U^dagger)``) on registers ``A, B, R_A, R_B``."""
    d = _split_dims(U)
    if set(U.labels) != {"A", "B"}:
        raise ValueError(f"gate must act on registers A and B, got {list(U.labels)}")
    phi = tensor(maximally_entangled(d, "A", "R_A"), maximally_entangled(d, "B", "R_B"))
    gate = U.dagger() if dagger else U
    gate = LabeledOperator(gate.layout, gate.matrix, kind="unitary", check=False)
    return apply_operator(gate, phi)


def schmidt_entropy_of_psi(U: LabeledOperator) -> float:
    """Entanglement entropy of ``Psi(U)`` across ``A R_A | B R_B``."""
    psi = make_psi(U)
    return von_neumann_entropy(partial_trace(psi, {"A", "R_A"}))


def holevo_lower_bound_protocol(U: LabeledOperator) -> tuple[float, list[float]]:
    """Holevo information of the dense-coding style message ensemble.

    Alice and Bob share ``Phi^{A B2} Phi^{B B1}``; message ``i`` is encoded by a
    generalized Pauli on ``A`` followed by ``U`` on ``AB``. Returns
    ``(chi, [S(B B1 B2) for each message])`` with ``chi`` in bits.
    """
    from .pauli import pauli_matrix

    d = _split_dims(U)
    if d > 4:
        raise ValueError("holevo_lower_bound_protocol is limited to d <= 4")
    gate = LabeledOperator(U.layout, U.matrix, kind="unitary", check=False)
    base = tensor(maximally_entangled(d, "A", "B2"), maximally_entangled(d, "B", "B1"))
    bob = {"B", "B1", "B2"}
    avg = None
    entropies = []
    for p in range(d):
        for q in range(d):
            sig = LabeledOperator(SubsystemLayout.of(("A", d)), pauli_matrix(p, q, d), kind="unitary", check=False)
            psi_i = apply_operator(gate, apply_operator(sig, base))
            # pure global state: S(B B1 B2) = S(A)
            entropies.append(von_neumann_entropy(partial_trace(psi_i, {"A"})))
            rho = partial_trace(psi_i, bob).matrix
            avg = rho if avg is None else avg + rho
    avg = avg / d**2
    chi = entropy_of_spectrum(np.linalg.eigvalsh(avg)) - float(np.mean(entropies))
    return chi, entropies
