"""The twelve acceptance checks, each timed against its runtime limit.

``run_all()`` returns one :class:`CriterionResult` per check; the CLI ``verify``
subcommand and the test suite both print them as pass/fail lines.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .decoupling import (
    RandomUnitaryChannel,
    apply_channel,
    clifford_ensemble,
    clifford_reference_labels,
    decoupling_deviation,
    psi_dagger_marginal,
    search_min_pauli_ensemble,
)
from .gates import named_gate
from .linalg import LabeledOperator, maximally_entangled, trace_distance
from .pauli import PauliLabel, conjugation_error, is_clifford, translate_reference_pauli
from .protocol import (
    average_fidelity_mc,
    cz_protocol_kraus,
    depolarized_kraus,
    cphase_measurement,
    forward_process,
    lemma1_deviation,
    perturbed_cphase_measurement,
    run_cz_protocol,
)
from .rates import distcomp_achievable, implement_bounds
from .unitary import (
    haar_unitary,
    holevo_lower_bound_protocol,
    random_gate,
    schmidt_entropy_of_psi,
    schmidt_strength,
)

CORPUS_D2 = ("I", "CZ", "CNOT", "SWAP", "CT", "CPHASE(pi/3)")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        slow = "" if self.seconds < self.limit else " (over time limit)"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail}; {self.seconds:.2f}s < {self.limit:g}s{slow}"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
        }


def c1_schmidt_corpus():
    got = {g: schmidt_strength(named_gate(g)) for g in ("I", "CZ", "SWAP")}
    want = {"I": 0.0, "CZ": 1.0, "SWAP": 2.0}
    err = max(abs(got[g] - want[g]) for g in want)
    return err <= 1e-9, f"max |K - expected| = {err:.2e}"


def c2_entropy_identity(seed: int = 0):
    rng = np.random.default_rng(seed)
    err = 0.0
    for d, count in ((2, 50), (3, 20)):
        for _ in range(count):
            U = random_gate(d, rng)
            err = max(err, abs(schmidt_entropy_of_psi(U) - schmidt_strength(U)))
    return err <= 1e-8, f"max |S(A R_A) - K| over 70 Haar gates = {err:.2e}"


def c3_holevo_identity(seed: int = 0):
    rng = np.random.default_rng(seed)
    gates = [named_gate(g) for g in CORPUS_D2] + [random_gate(2, rng) for _ in range(20)]
    err = max(abs(holevo_lower_bound_protocol(U)[0] - schmidt_strength(U)) for U in gates)
    return err <= 1e-7, f"max |chi - K| over {len(gates)} gates = {err:.2e}"


def c4_clifford_classification():
    ok = True
    notes = []
    for g in ("CZ", "CNOT", "SWAP"):
        U = named_gate(g)
        verdict, table = is_clifford(U)
        good = verdict and table.is_bijection() and conjugation_error(U, table) <= 1e-8
        ok &= good
        notes.append(f"{g}={'Clifford' if good else 'FAILED'}")
    for g in ("CT", "CPHASE(pi/3)"):
        verdict, _ = is_clifford(named_gate(g))
        ok &= not verdict
        notes.append(f"{g}={'not Clifford' if not verdict else 'WRONGLY Clifford'}")
    return ok, ", ".join(notes)


def c5_exact_decoupling(seed: int = 0):
    cz = named_gate("CZ")
    deph = RandomUnitaryChannel.from_paulis([PauliLabel(0, 0), PauliLabel(0, 1)], 2)
    dev_deph = decoupling_deviation(cz, deph).deviation
    rng = np.random.default_rng(seed)
    full = RandomUnitaryChannel.full_pauli(2)
    dev_full = max(decoupling_deviation(random_gate(2, rng), full).deviation for _ in range(10))
    return dev_deph <= 1e-12 and dev_full <= 1e-10, f"dephasing on CZ {dev_deph:.2e}, full twirl max {dev_full:.2e}"


def c6_clifford_construction():
    ok = True
    notes = []
    for g in ("CZ", "SWAP"):
        U = named_gate(g)
        _, table = is_clifford(U)
        K = schmidt_strength(U)
        for n in (1, 2):
            refs = clifford_reference_labels(table, n)
            ch = clifford_ensemble(U, table, refs)
            dev = decoupling_deviation(U, ch).deviation
            size_ok = ch.K == round(2 ** (n * K))
            # the A-side and the reference-side ensembles produce the same state
            ref_ch = RandomUnitaryChannel.from_paulis(refs, table.d, n, base="R_B")
            base = psi_dagger_marginal(U, n)
            same = trace_distance(apply_channel(ch, base), apply_channel(ref_ch, base))
            ok &= size_ok and dev <= 1e-10 and same <= 1e-8
            notes.append(f"{g} n={n}: K_n={ch.K} dev={dev:.1e} identity={same:.1e}")
        # per-label identity at n=1 over the whole table
        base = psi_dagger_marginal(U, 1)
        for lab in [PauliLabel(p, q, table.d) for p in range(table.d) for q in range(table.d)]:
            img = translate_reference_pauli(table, lab.p, lab.q)
            a_side = apply_channel(RandomUnitaryChannel.from_paulis([img], table.d), base)
            r_side = apply_channel(RandomUnitaryChannel.from_paulis([lab], table.d, base="R_B"), base)
            ok &= trace_distance(a_side, r_side) <= 1e-8
    return ok, "; ".join(notes)


def c7_search_consistency():
    worst = np.inf
    notes = []
    for g in CORPUS_D2:
        U = named_gate(g)
        report, _ = search_min_pauli_ensemble(U, n=1, eps=1e-9)
        slack = np.log2(report.ensemble_size) - schmidt_strength(U)
        worst = min(worst, slack)
        notes.append(f"{g}:{report.ensemble_size}")
    return worst >= -1e-6, f"sizes {' '.join(notes)}; min(log2 K - K(U)) = {worst:.3f}"


def _random_unitary_ensemble(K: int, d: int, rng) -> RandomUnitaryChannel:
    from .linalg import SubsystemLayout

    members = tuple(LabeledOperator(SubsystemLayout.of(("A", d)), haar_unitary(d, rng), kind="unitary")
                    for _ in range(K))
    return RandomUnitaryChannel(target=("A",), members=members, n=1)


def c8_forward_process(seed: int = 0):
    rng = np.random.default_rng(seed)
    cases = []
    for g, n in (("CZ", 1), ("CZ", 2), ("SWAP", 1)):
        U = named_gate(g)
        _, table = is_clifford(U)
        cases.append((f"{g} n={n}", U, clifford_ensemble(U, table, clifford_reference_labels(table, n)), True))
    for K in (2, 4):
        cases.append((f"random K={K}", random_gate(2, rng), _random_unitary_ensemble(K, 2, rng), False))
    ok = True
    worst_branch = worst_cu = worst_ent = 0.0
    for name, U, ch, exact in cases:
        _, tr = forward_process(U, ch, seed=seed)
        logk = np.log2(ch.K)
        worst_branch = max(worst_branch, tr.checks["branch_max_distance"])
        worst_cu = max(worst_cu, tr.checks["controlled_unitary_distance"])
        ok &= abs(tr.ebits_consumed - logk) <= 1e-12 and abs(tr.cbits_forward - logk) <= 1e-12
        if exact:
            err = max(abs(tr.checks["merging_entanglement_cost"]),
                      abs(tr.checks["merging_classical_cost"] - logk))
            worst_ent = max(worst_ent, err)
    ok &= worst_branch <= 1e-12 and worst_cu <= 1e-10 and worst_ent <= 1e-8
    return ok, (f"{len(cases)} cases: branch {worst_branch:.1e}, controlled-unitary {worst_cu:.1e}, "
                f"entropy identities {worst_ent:.1e}")


def c9_cz_protocol():
    worst = 0.0
    costs_ok = True
    for phi in np.linspace(0.0, 2 * np.pi, 32, endpoint=False):
        tr = run_cz_protocol(phi)
        worst = max(worst, 1 - tr.fidelity_to_target, 1 - tr.checks["min_branch_fidelity"])
        costs_ok &= (tr.ebits_consumed, tr.cbits_forward, tr.cbits_backward) == (1.0, 1.0, 1.0)
    return worst <= 1e-10 and costs_ok, f"32 phases, max 1-F = {worst:.1e}, costs (1,1,1) {'ok' if costs_ok else 'WRONG'}"


def c10_necessity(seed: int = 0):
    U = named_gate("CZ")
    res = maximally_entangled(2, "A0", "B0")
    base = lemma1_deviation(cphase_measurement(), res, U)
    ok = base.averaged_deviation <= 1e-10 and base.eps <= 1e-10
    rng = np.random.default_rng(seed)
    worst_slack = np.inf
    for i in range(50):
        strength = 0.01 + 0.3 * i / 49
        r = lemma1_deviation(perturbed_cphase_measurement(strength, rng), res, U)
        worst_slack = min(worst_slack, r.bound + 1e-8 - r.averaged_deviation)
    ok &= worst_slack >= 0
    return ok, f"exact measurement eps={base.eps:.1e} deviation={base.averaged_deviation:.1e}; min slack over 50 perturbed = {worst_slack:.3f}"


def c11_average_fidelity(seed: int = 0, samples: int = 1000):
    U = named_gate("CZ").matrix
    channels = {
        "perfect": [U],
        "depolarized": depolarized_kraus(U, 0.1),
        "protocol": cz_protocol_kraus(np.pi),
    }
    ok = True
    notes = []
    for name, kraus in channels.items():
        fbar, se, fe = average_fidelity_mc(kraus, U, samples, seed)
        ok &= fbar >= fe - 3 * se
        notes.append(f"{name} Fbar={fbar:.4f} Fe={fe:.4f}")
    return ok, "; ".join(notes)


def c12_rate_reports():
    U = named_gate("CZ")
    b = implement_bounds(U)
    coincide = b.upper_clifford is not None and b.lower.as_list() == b.upper_clifford.as_list() == [1.0, 1.0, 1.0]
    trip = distcomp_achievable(U, 1.5).triplet
    exact = trip is not None and trip.as_list() == [0.5, 2.5, 0.0]
    return coincide and exact, f"bounds {b.lower.as_list()} / {None if b.upper_clifford is None else b.upper_clifford.as_list()}, distcomp {None if trip is None else trip.as_list()}"


CRITERIA = (
    (1, "Schmidt strength corpus", c1_schmidt_corpus, 1.0),
    (2, "entropy identity", c2_entropy_identity, 30.0),
    (3, "Holevo identity", c3_holevo_identity, 60.0),
    (4, "Clifford classification", c4_clifford_classification, 5.0),
    (5, "exact decoupling", c5_exact_decoupling, 5.0),
    (6, "Clifford Pauli-translation construction", c6_clifford_construction, 60.0),
    (7, "minimal-ensemble search consistency", c7_search_consistency, 120.0),
    (8, "forward-process contract", c8_forward_process, 60.0),
    (9, "controlled-phase protocol", c9_cz_protocol, 10.0),
    (10, "necessity bound", c10_necessity, 120.0),
    (11, "average vs entanglement fidelity", c11_average_fidelity, 120.0),
    (12, "rate reports", c12_rate_reports, 1.0),
)


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn, limit in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(num, name, bool(passed), detail, time.perf_counter() - t0, limit)
    raise ValueError(f"no criterion {number}")


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, *_ in CRITERIA]
