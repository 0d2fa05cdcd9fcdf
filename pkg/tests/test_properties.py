import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_density
from unicomp.gates import named_gate
from unicomp.linalg import (
    LabeledOperator,
    apply_operator,
    fidelity,
    mutual_information,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from unicomp.pauli import PauliLabel, multiply_labels, pauli_matrix, pauli_transpose_phase
from unicomp.protocol import lemma1_deviation, perturbed_cphase_measurement, run_cz_protocol
from unicomp.linalg import maximally_entangled
from unicomp.rates import distcomp_necessary
from unicomp.unitary import haar_unitary, holevo_lower_bound_protocol, random_gate, schmidt_strength

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=3)
fast = settings(max_examples=25, deadline=None)


@fast
@given(seeds, dims, dims)
def test_tensor_partial_trace_round_trip(seed, da, db):
    rng = np.random.default_rng(seed)
    rho = rand_density([("A", da)], rng)
    sigma = rand_density([("B", db)], rng)
    back = partial_trace(tensor(rho, sigma), {"A"})
    assert np.abs(back.matrix - rho.matrix).max() < 1e-12


@fast
@given(seeds, st.integers(min_value=1, max_value=4))
def test_fuchs_van_de_graaf(seed, rank):
    rng = np.random.default_rng(seed)
    rho = rand_density([("A", 4)], rng)
    sigma = rand_density([("A", 4)], rng, rank=rank)
    f = fidelity(rho, sigma)
    t = trace_distance(rho, sigma) / 2
    assert 1 - np.sqrt(f) <= t + 1e-9
    assert t <= np.sqrt(1 - f) + 1e-9
    assert abs(trace_distance(rho, sigma) - trace_distance(sigma, rho)) < 1e-12
    assert abs(fidelity(rho, sigma) - fidelity(sigma, rho)) < 1e-8


@fast
@given(seeds, dims)
def test_entropy_unitary_invariance(seed, d):
    rng = np.random.default_rng(seed)
    rho = rand_density([("A", d), ("B", 2)], rng)
    u = haar_unitary(2 * d, rng)
    op = LabeledOperator(rho.layout, u, kind="unitary")
    assert abs(von_neumann_entropy(apply_operator(op, rho)) - von_neumann_entropy(rho)) < 1e-9


@fast
@given(seeds)
def test_mutual_information_nonnegative_and_symmetric(seed):
    rng = np.random.default_rng(seed)
    s = rand_density([("A", 2), ("B", 2), ("C", 2)], rng, rank=int(rng.integers(1, 9)))
    ab = mutual_information(s, {"A"}, {"B", "C"})
    ba = mutual_information(s, {"B", "C"}, {"A"})
    assert ab >= -1e-10
    assert abs(ab - ba) < 1e-10


@fast
@given(seeds, dims)
def test_schmidt_strength_local_invariance_and_range(seed, d):
    rng = np.random.default_rng(seed)
    U = random_gate(d, rng)
    loc = np.kron(haar_unitary(d, rng), haar_unitary(d, rng))
    V = LabeledOperator(U.layout, loc @ U.matrix, kind="unitary")
    k = schmidt_strength(U)
    assert abs(schmidt_strength(V) - k) < 1e-8
    assert -1e-12 <= k <= 2 * np.log2(d) + 1e-12


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_holevo_identity(seed):
    U = random_gate(2, np.random.default_rng(seed))
    assert abs(holevo_lower_bound_protocol(U)[0] - schmidt_strength(U)) < 1e-7


@fast
@given(st.integers(min_value=2, max_value=5), st.data())
def test_pauli_product_rule(d, data):
    a = PauliLabel(data.draw(st.integers(0, d - 1)), data.draw(st.integers(0, d - 1)), d)
    b = PauliLabel(data.draw(st.integers(0, d - 1)), data.draw(st.integers(0, d - 1)), d)
    phase, c = multiply_labels((a.p, a.q), (b.p, b.q), d)
    assert np.abs(a.matrix() @ b.matrix() - phase * pauli_matrix(*c, d)).max() < 1e-12
    p2, q2, ph = pauli_transpose_phase(a.p, a.q, d)
    assert np.abs(a.matrix().T - ph * pauli_matrix(p2, q2, d)).max() < 1e-12


@fast
@given(st.floats(min_value=0.0, max_value=2 * np.pi, allow_nan=False), seeds)
def test_cz_protocol_exact_for_any_phase(phi, seed):
    tr = run_cz_protocol(phi, seed=seed % 1000)
    assert abs(tr.fidelity_to_target - 1) < 1e-10
    assert 0 <= tr.fidelity_to_target <= 1 + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1.0), seeds)
def test_necessity_inequality(strength, seed):
    rng = np.random.default_rng(seed)
    r = lemma1_deviation(perturbed_cphase_measurement(strength, rng), maximally_entangled(2, "A0", "B0"), named_gate("CZ"))
    assert r.averaged_deviation <= 4 * np.sqrt(r.eps) + 1e-8


@fast
@given(st.floats(min_value=0, max_value=3), st.floats(min_value=0, max_value=3))
def test_necessary_verdict_monotone(qa1, qa2):
    lo, hi = sorted((qa1, qa2))
    cz = named_gate("CZ")
    if not distcomp_necessary(cz, lo).forbidden:
        assert not distcomp_necessary(cz, hi).forbidden
