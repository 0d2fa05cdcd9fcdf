import numpy as np
import pytest

from conftest import rand_density
from unicomp.decoupling import (
    RandomUnitaryChannel,
    apply_channel,
    clifford_ensemble,
    clifford_reference_labels,
    copy_labels,
    decoupling_deviation,
    psi_dagger_marginal,
    reference_deviation,
    search_min_pauli_ensemble,
)
from unicomp.gates import named_gate
from unicomp.linalg import SubsystemLayout, maximally_entangled, partial_trace, trace_distance
from unicomp.pauli import PauliLabel, is_clifford
from unicomp.unitary import random_gate, schmidt_strength

DEPH = [PauliLabel(0, 0), PauliLabel(0, 1)]
CORPUS = ("I", "CZ", "CNOT", "SWAP", "CT", "CPHASE(pi/3)")


def test_copy_labels():
    assert copy_labels("A", 1) == ["A"]
    assert copy_labels("R_B", 3) == ["R_B.1", "R_B.2", "R_B.3"]
    with pytest.raises(ValueError):
        copy_labels("A", 0)


def test_channel_validation():
    with pytest.raises(ValueError):
        RandomUnitaryChannel(target=("A",), members=())
    ch = RandomUnitaryChannel.from_paulis(DEPH, 2)
    assert ch.K == 2 and ch.rate == 1.0
    with pytest.raises(ValueError):
        apply_channel(ch, maximally_entangled(3, "A", "B"))
    with pytest.raises(ValueError):
        apply_channel(ch, maximally_entangled(2, "B", "C"))


def test_apply_channel_examples(rng):
    rho = rand_density([("A", 2), ("B", 2)], rng)
    same = apply_channel(RandomUnitaryChannel.from_paulis([PauliLabel(0, 0)], 2), rho)
    assert np.abs(same.matrix - rho.matrix).max() < 1e-15
    for d in (2, 3):
        sigma = rand_density([("A", d)], rng)
        out = apply_channel(RandomUnitaryChannel.full_pauli(d), sigma)
        assert np.abs(out.matrix - np.eye(d) / d).max() < 1e-12
    out = apply_channel(RandomUnitaryChannel.from_paulis(DEPH, 2), maximally_entangled(2, "A", "R_A"))
    assert np.abs(out.matrix - np.diag([0.5, 0, 0, 0.5])).max() < 1e-12


def test_apply_channel_preserves_trace(rng):
    rho = rand_density([("A", 3), ("R", 2)], rng)
    out = apply_channel(RandomUnitaryChannel.from_paulis([PauliLabel(1, 2, 3), PauliLabel(2, 0, 3)], 3), rho)
    assert abs(np.trace(out.matrix) - 1) < 1e-12


def test_deviation_examples(rng):
    cz = named_gate("CZ")
    rep = decoupling_deviation(cz, RandomUnitaryChannel.from_paulis(DEPH, 2))
    assert rep.deviation < 1e-12 and rep.exact and rep.rate == 1.0
    rep = decoupling_deviation(cz, RandomUnitaryChannel.from_paulis([PauliLabel(0, 0)], 2))
    assert abs(rep.deviation - 1.0) < 1e-10 and not rep.exact
    for _ in range(10):
        U = random_gate(2, rng)
        assert decoupling_deviation(U, RandomUnitaryChannel.full_pauli(2)).deviation < 1e-10
    assert decoupling_deviation(random_gate(3, rng), RandomUnitaryChannel.full_pauli(3)).deviation < 1e-10


def test_deviation_of_identity_channel_is_raw_correlation(rng):
    U = random_gate(2, rng)
    s = psi_dagger_marginal(U)
    prod = partial_trace(s, {"A", "R_A"})
    from unicomp.linalg import maximally_mixed, tensor

    raw = trace_distance(s, tensor(prod, maximally_mixed(SubsystemLayout.of(("R_B", 2)))))
    rep = decoupling_deviation(U, RandomUnitaryChannel.from_paulis([PauliLabel(0, 0)], 2))
    assert abs(rep.deviation - raw) < 1e-12
    assert 0 <= rep.deviation <= 2


def test_deviation_block_mismatch():
    ch = RandomUnitaryChannel.from_paulis(DEPH, 2)
    with pytest.raises(ValueError):
        decoupling_deviation(named_gate("CZ"), ch, n=2)


def test_full_pauli_rate():
    for d, n in ((2, 1), (2, 2), (3, 1)):
        ch = RandomUnitaryChannel.full_pauli(d, n)
        assert abs(ch.rate - 2 * np.log2(d)) < 1e-12
        assert decoupling_deviation(named_gate("SWAP", d), ch).deviation < 1e-10


def test_clifford_ensemble_examples():
    U = named_gate("CZ")
    _, table = is_clifford(U)
    refs = clifford_reference_labels(table)
    assert refs == [(PauliLabel(0, 0),), (PauliLabel(1, 0),)]
    ch = clifford_ensemble(U, table, refs)
    assert ch.K == 2
    assert [tuple(str(x) for x in m) for m in ch.member_labels] == [("s00",), ("s01",)]
    assert decoupling_deviation(U, ch).deviation < 1e-12
    only_id = clifford_ensemble(U, table, [PauliLabel(0, 0)])
    assert abs(decoupling_deviation(U, only_id).deviation - 1.0) < 1e-10
    U = named_gate("SWAP")
    _, table = is_clifford(U)
    ch = clifford_ensemble(U, table, [PauliLabel(p, q) for p in range(2) for q in range(2)])
    rep = decoupling_deviation(U, ch)
    assert rep.deviation < 1e-10 and rep.rate == 2.0


def test_clifford_ensemble_rejects_non_clifford():
    with pytest.raises(ValueError):
        clifford_ensemble(named_gate("CT"), None, DEPH)


@pytest.mark.parametrize("name,d,n", [("CZ", 2, 1), ("CZ", 2, 2), ("SWAP", 2, 1), ("SWAP", 2, 2),
                                      ("CNOT", 2, 2), ("CZ", 3, 1), ("SWAP", 3, 1)])
def test_clifford_ensemble_is_exact_at_rate_k(name, d, n):
    U = named_gate(name, d)
    _, table = is_clifford(U)
    refs = clifford_reference_labels(table, n)
    ch = clifford_ensemble(U, table, refs)
    rep = decoupling_deviation(U, ch)
    assert rep.exact
    assert abs(rep.rate - schmidt_strength(U)) < 1e-9


@pytest.mark.parametrize("name", ["CZ", "SWAP", "CNOT"])
def test_clifford_matches_reference_side(name, rng):
    U = named_gate(name)
    _, table = is_clifford(U)
    labels = [PauliLabel(p, q) for p in range(2) for q in range(2)]
    for _ in range(5):
        pick = sorted(rng.choice(4, size=int(rng.integers(1, 4)), replace=False))
        refs = [labels[i] for i in pick]
        a_side = decoupling_deviation(U, clifford_ensemble(U, table, refs)).deviation
        assert abs(a_side - reference_deviation(U, refs)) < 1e-9


def test_search_examples():
    rep, members = search_min_pauli_ensemble(named_gate("CZ"), n=1, eps=1e-9)
    assert rep.ensemble_size == 2 and rep.rate == 1.0
    assert [tuple(str(x) for x in m) for m in members] == [("s00",), ("s01",)]
    rep, _ = search_min_pauli_ensemble(named_gate("I"), n=1, eps=1e-9)
    assert rep.ensemble_size == 1 and rep.rate == 0.0
    rep, _ = search_min_pauli_ensemble(named_gate("SWAP"), n=1, eps=1e-9)
    assert rep.ensemble_size == 4 and rep.rate == 2.0
    assert rep.label == "numerical upper bound at block length n"


def test_search_agrees_with_clifford_construction():
    for name in ("CZ", "CNOT", "SWAP"):
        U = named_gate(name)
        _, table = is_clifford(U)
        for n in (1, 2):
            found, _ = search_min_pauli_ensemble(U, n=n, eps=1e-9)
            built = clifford_ensemble(U, table, clifford_reference_labels(table, n))
            assert found.ensemble_size == built.K


def test_search_rate_at_least_k():
    for name in CORPUS:
        U = named_gate(name)
        rep, _ = search_min_pauli_ensemble(U, n=1, eps=1e-9)
        assert rep.rate >= schmidt_strength(U) - 1e-6


def test_search_loose_eps_accepts_fewer():
    rep, _ = search_min_pauli_ensemble(named_gate("CT"), n=1, eps=0.5)
    exact, _ = search_min_pauli_ensemble(named_gate("CT"), n=1, eps=1e-9)
    assert rep.ensemble_size <= exact.ensemble_size
    assert rep.deviation <= 0.5


def test_search_errors():
    with pytest.raises(ValueError):
        search_min_pauli_ensemble(named_gate("CZ"), eps=-1)
    with pytest.raises(ValueError):
        search_min_pauli_ensemble(named_gate("CZ", 3), n=2)


def test_subgroup_twirl_monotone(rng):
    # twirling further over a Pauli subgroup never increases the deviation
    U = random_gate(2, rng)
    small = RandomUnitaryChannel.from_paulis([PauliLabel(0, 0), PauliLabel(0, 1)], 2)
    big = RandomUnitaryChannel.full_pauli(2)
    assert decoupling_deviation(U, big).deviation <= decoupling_deviation(U, small).deviation + 1e-12
    none = RandomUnitaryChannel.from_paulis([PauliLabel(0, 0)], 2)
    assert decoupling_deviation(U, small).deviation <= decoupling_deviation(U, none).deviation + 1e-12


def test_report_to_dict():
    rep = decoupling_deviation(named_gate("CZ"), RandomUnitaryChannel.from_paulis(DEPH, 2))
    doc = rep.to_dict()
    assert doc["members"] == [["s00"], ["s01"]]
    assert doc["ensemble_size"] == 2
