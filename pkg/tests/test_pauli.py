import json
from pathlib import Path

import numpy as np
import pytest

from unicomp.decoupling import RandomUnitaryChannel, apply_channel, psi_dagger_marginal
from unicomp.gates import named_gate
from unicomp.linalg import LabeledOperator, SubsystemLayout, trace_distance
from unicomp.pauli import (
    PauliLabel,
    all_labels,
    clock_matrix,
    conjugation_error,
    is_clifford,
    match_product_pauli,
    multiply_labels,
    pauli,
    pauli_matrix,
    pauli_transpose_phase,
    shift_matrix,
    translate_reference_pauli,
)
from unicomp.unitary import random_gate

FIXTURE = Path(__file__).parent / "fixtures" / "pauli_matrices.json"


def _load(d, name):
    doc = json.loads(FIXTURE.read_text())[str(d)][name]
    return np.array(doc["re"]) + 1j * np.array(doc["im"])


@pytest.mark.parametrize("d", [2, 3])
def test_frozen_matrices(d):
    assert np.abs(shift_matrix(d) - _load(d, "X")).max() < 1e-12
    assert np.abs(clock_matrix(d) - _load(d, "Z")).max() < 1e-12


def test_pauli_examples():
    assert np.abs(pauli(0, 1, 2).matrix - np.diag([-1, 1])).max() < 1e-15
    for d in (2, 3, 5):
        assert np.abs(pauli_matrix(0, 0, d) - np.eye(d)).max() == 0
    with pytest.raises(ValueError):
        pauli(2, 0, 2)
    with pytest.raises(ValueError):
        PauliLabel(0, 3, 3)


def test_weyl_commutation_d3():
    x, z = shift_matrix(3), clock_matrix(3)
    w = np.exp(2j * np.pi / 3)
    # X|j> = |j-1>, Z = diag(w^1..w^d): XZ = w ZX
    assert np.abs(x @ z - w * z @ x).max() < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_product_rule(d):
    for a in all_labels(d):
        for b in all_labels(d):
            phase, c = multiply_labels((a.p, a.q), (b.p, b.q), d)
            assert np.abs(a.matrix() @ b.matrix() - phase * pauli_matrix(*c, d)).max() < 1e-12


@pytest.mark.parametrize("d", [2, 3, 5])
def test_orthogonality(d):
    mats = [lab.matrix() for lab in all_labels(d)]
    gram = np.array([[np.trace(a.conj().T @ b) / d for b in mats] for a in mats])
    assert np.abs(gram - np.eye(d * d)).max() < 1e-12


def test_twirl_is_completely_depolarizing(rng):
    for d in (2, 3):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ g.conj().T
        rho /= np.trace(rho)
        out = sum(m @ rho @ m.conj().T for m in (lab.matrix() for lab in all_labels(d))) / d**2
        assert np.abs(out - np.eye(d) / d).max() < 1e-10


def test_transpose_phase_examples():
    for q in range(3):
        p2, q2, ph = pauli_transpose_phase(0, q, 3)
        assert (p2, q2) == (0, q) and abs(ph - 1) < 1e-12
    p2, q2, ph = pauli_transpose_phase(1, 0, 2)
    assert (p2, q2) == (1, 0) and abs(ph - 1) < 1e-12
    p2, q2, ph = pauli_transpose_phase(1, 1, 2)
    assert (p2, q2) == (1, 1) and abs(ph + 1) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_transpose_phase_closed_form(d):
    # sigma_pq^T = w^{pq} sigma_{-p, q}
    w = np.exp(2j * np.pi / d)
    for lab in all_labels(d):
        p2, q2, ph = pauli_transpose_phase(lab.p, lab.q, d)
        assert (p2, q2) == ((-lab.p) % d, lab.q)
        assert abs(ph - w ** (lab.p * lab.q)) < 1e-10


def test_clifford_examples():
    for name in ("CZ", "CNOT", "SWAP", "I"):
        ok, table = is_clifford(named_gate(name))
        assert ok and table.is_bijection()
        assert conjugation_error(named_gate(name), table) < 1e-8
        assert all(abs(abs(v[4]) - 1) < 1e-10 for v in table.entries.values())
    for name in ("CT", "CPHASE(pi/3)"):
        ok, table = is_clifford(named_gate(name))
        assert not ok and table is None


def test_clifford_qudits():
    for d in (3, 4, 5):
        for name in ("CZ", "CNOT", "SWAP"):
            U = named_gate(name, d)
            ok, table = is_clifford(U)
            assert ok and table.is_bijection()
            assert conjugation_error(U, table) < 1e-8


def test_controlled_t_fails_on_x():
    u = named_gate("CT").matrix
    g = np.kron(pauli_matrix(1, 0, 2), np.eye(2))
    _, _, score = match_product_pauli(u @ g @ u.conj().T, 2)
    assert score < 1 - 1e-3


def test_clifford_invariant_under_pauli_multiplication(rng):
    for name in ("CZ", "SWAP", "CT"):
        U = named_gate(name)
        base = is_clifford(U)[0]
        for _ in range(5):
            i, j = rng.integers(0, 16, size=2)
            left = np.kron(pauli_matrix(i // 8, (i // 4) % 2, 2), pauli_matrix((i // 2) % 2, i % 2, 2))
            right = np.kron(pauli_matrix(j // 8, (j // 4) % 2, 2), pauli_matrix((j // 2) % 2, j % 2, 2))
            V = LabeledOperator(U.layout, left @ U.matrix @ right, kind="unitary")
            assert is_clifford(V)[0] == base


def test_random_unitary_is_not_clifford(rng):
    assert not is_clifford(random_gate(2, rng))[0]


def test_is_clifford_limits():
    with pytest.raises(ValueError):
        is_clifford(LabeledOperator(SubsystemLayout.of(("A", 6), ("B", 6)), np.eye(36), kind="unitary"))


def _reference_vs_a_side(U, table, lab):
    base = psi_dagger_marginal(U)
    img = translate_reference_pauli(table, lab.p, lab.q)
    a_side = apply_channel(RandomUnitaryChannel.from_paulis([img], table.d), base)
    r_side = apply_channel(RandomUnitaryChannel.from_paulis([lab], table.d, base="R_B"), base)
    return img, trace_distance(a_side, r_side)


def test_translate_identity_label():
    U = named_gate("I")
    _, table = is_clifford(U)
    img, dist = _reference_vs_a_side(U, table, PauliLabel(0, 0))
    assert img == PauliLabel(0, 0) and dist < 1e-12


def test_translate_cz_examples():
    U = named_gate("CZ")
    _, table = is_clifford(U)
    # Z on R_B leaves the marginal alone; X on R_B acts like Z on A
    img, dist = _reference_vs_a_side(U, table, PauliLabel(0, 1))
    assert img == PauliLabel(0, 0) and dist < 1e-10
    img, dist = _reference_vs_a_side(U, table, PauliLabel(1, 0))
    assert img == PauliLabel(0, 1) and dist < 1e-10


def test_translate_random_entries(rng):
    for name, d in (("CZ", 2), ("SWAP", 2), ("CZ", 3), ("SWAP", 3), ("CNOT", 3)):
        U = named_gate(name, d)
        _, table = is_clifford(U)
        labels = all_labels(d)
        for idx in rng.choice(len(labels), size=min(20, len(labels)), replace=False):
            _, dist = _reference_vs_a_side(U, table, labels[idx])
            assert dist < 1e-8
