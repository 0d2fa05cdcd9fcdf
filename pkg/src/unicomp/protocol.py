"""Three-turn entanglement-assisted LOCC protocols, simulated on state vectors.

Registers: ``A, B`` (inputs), ``R_A, R_B`` (references), ``A0, B0`` (the shared
resource). Block protocols use ``A.1 .. A.n`` etc. as in
:mod:`unicomp.decoupling`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decoupling import RandomUnitaryChannel, copy_labels, decoupling_gap
from .linalg import (
    LabeledOperator,
    LabeledState,
    SubsystemLayout,
    _apply_to_ket,
    _permute_vector,
    apply_operator,
    conditional_entropy,
    fidelity,
    ket,
    maximally_entangled,
    mutual_information,
    partial_trace,
    relabel,
    tensor,
    tensor_all,
    trace_distance,
)
from .pauli import pauli_matrix
from .unitary import make_psi

BRANCH_TOL = 1e-10


@dataclass
class ProtocolTranscript:
    steps: list = field(default_factory=list)
    outcome_k: int | None = None
    cbits_forward: float = 0.0
    cbits_backward: float = 0.0
    ebits_consumed: float = 0.0
    ebits_returned: float = 0.0
    final_state: LabeledState | None = field(default=None, repr=False)
    fidelity_to_target: float | None = None
    checks: dict = field(default_factory=dict)

    def record(self, actor: str, action: str, payload: str) -> None:
        self.steps.append({"actor": actor, "action": action, "payload": payload})

    def to_dict(self) -> dict:
        return {
            "steps": list(self.steps),
            "outcome_k": self.outcome_k,
            "cbits_forward": self.cbits_forward,
            "cbits_backward": self.cbits_backward,
            "ebits_consumed": self.ebits_consumed,
            "ebits_returned": self.ebits_returned,
            "final_state_labels": None if self.final_state is None else [
                [lab, dim] for lab, dim in self.final_state.layout.systems
            ],
            "fidelity_to_target": self.fidelity_to_target,
            "checks": {k: self.checks[k] for k in sorted(self.checks)},
        }


# -- helpers -----------------------------------------------------------------------

def _op(systems, matrix, kind="unitary", out=None) -> LabeledOperator:
    return LabeledOperator(SubsystemLayout(tuple(systems)), matrix, kind=kind,
                           out_layout=None if out is None else SubsystemLayout(tuple(out)), check=False)


def _apply(op: LabeledOperator, s: LabeledState) -> LabeledState:
    vec, layout = _apply_to_ket(s.vector, s.layout, op)
    return LabeledState(layout, vector=vec, check=False)


def _project(s: LabeledState, label: str, outcome: int):
    """Unnormalized branch of a computational-basis measurement on ``label``."""
    dim = s.layout.dim_of([label])
    bra = np.zeros((1, dim), dtype=complex)
    bra[0, outcome] = 1.0
    op = LabeledOperator(SubsystemLayout.of((label, dim)), bra, kind="measurement-element",
                         out_layout=SubsystemLayout(()), check=False)
    vec, layout = _apply_to_ket(s.vector, s.layout, op)
    p = float(np.vdot(vec, vec).real)
    return vec, layout, p


def _normalized(vec, layout, p) -> LabeledState:
    return LabeledState(layout, vector=vec / np.sqrt(p), check=False)


def vector_distance(a: LabeledState, b: LabeledState) -> float:
    """Euclidean distance between kets (sensitive to global phase)."""
    if a.layout != b.layout:
        raise ValueError("layout mismatch")
    return float(np.linalg.norm(a.vector - b.vector))


def fourier(K: int) -> np.ndarray:
    """``K^{-1/2} sum_{k,k'} exp(2 pi i k k'/K) |k><k'|`` with ``k, k' = 1..K``."""
    k = np.arange(1, K + 1)
    return np.exp(2j * np.pi * np.outer(k, k) / K) / np.sqrt(K)


def register_phase(K: int) -> np.ndarray:
    """Bob's correction ``Z = sum_k' exp(-2 pi i k'/K) |k'><k'|``."""
    k = np.arange(1, K + 1)
    return np.diag(np.exp(-2j * np.pi * k / K))


def controlled_ensemble(control: str, ch: RandomUnitaryChannel) -> LabeledOperator:
    """``sum_k |k><k|^{control} (x) V_k`` on the channel's target registers."""
    K = ch.K
    target = ch.members[0].layout
    dv = target.dim
    mat = np.zeros((K * dv, K * dv), dtype=complex)
    for k, v in enumerate(ch.members):
        mat[k * dv:(k + 1) * dv, k * dv:(k + 1) * dv] = v.matrix
    layout = SubsystemLayout.of((control, K)) + target
    return LabeledOperator(layout, mat, kind="unitary", check=False)


def psi_dagger_block(U: LabeledOperator, n: int) -> LabeledState:
    """Pure ``Psi(U^dagger)^{(x) n}``."""
    single = make_psi(U, dagger=True)
    if n == 1:
        return single
    return tensor_all(
        relabel(single, {lab: f"{lab}.{i}" for lab in ("A", "B", "R_A", "R_B")}) for i in range(1, n + 1)
    )


def psi5(U: LabeledOperator, ch: RandomUnitaryChannel) -> LabeledState:
    """``K^{-1/2} sum_k' |k'>^{B0} (x) V_k' Psi(U^dagger)^{(x) n}``, assembled term by term."""
    base = psi_dagger_block(U, ch.n)
    K = ch.K
    terms = []
    for k, v in enumerate(ch.members):
        branch = apply_operator(v, base)
        terms.append(tensor(ket(SubsystemLayout.of(("B0", K)), k), branch).vector)
    layout = tensor(ket(SubsystemLayout.of(("B0", K)), 0), base).layout
    return LabeledState(layout, vector=sum(terms) / np.sqrt(K))


# -- Uhlmann ------------------------------------------------------------------------

def uhlmann_unitary(source: LabeledState, target: LabeledState, bob_labels):
    """Unitary on ``bob_labels`` taking ``source`` as close as possible to ``target``.

    Both states must be pure with the same layout. Returns ``(W, overlap)``
    where ``overlap = |<target| W |source>|`` equals the square root of the
    fidelity between the two marginals on the remaining registers.
    """
    if not (source.is_pure and target.is_pure):
        raise ValueError("uhlmann_unitary needs pure states")
    if source.layout != target.layout:
        raise ValueError("source and target layouts differ")
    bob = [lab for lab in source.labels if lab in set(bob_labels)]
    if len(bob) != len(set(bob_labels)):
        raise ValueError(f"unknown Bob registers in {list(bob_labels)}")
    kept = [lab for lab in source.labels if lab not in set(bob)]
    db = source.layout.dim_of(bob)
    ms = _permute_vector(source.vector, source.layout, kept + bob).reshape(-1, db)
    mt = _permute_vector(target.vector, target.layout, kept + bob).reshape(-1, db)
    u, s, vh = np.linalg.svd(mt.conj().T @ ms)
    # (I (x) W)|source> has coefficient matrix ms @ W^T; Tr[mt^dag ms W^T] is maximal at W^T = vh^dag u^dag
    w = (vh.conj().T @ u.conj().T).T
    layout = source.layout.sub(bob)
    layout = SubsystemLayout(tuple((lab, source.layout.dim_of([lab])) for lab in bob))
    return LabeledOperator(layout, w, kind="unitary", check=False), float(s.sum())


def purification_target(state: LabeledState, system_labels, bob_register: str, pair_labels):
    """Target ``|psi^p>^{system, Bob register} (x) Phi^{pairs}`` for Bob's Uhlmann step.

    ``state`` is the pure post-measurement state; ``system_labels`` is the side
    to purify (e.g. ``A, R_A``); ``pair_labels`` lists ``(b, r)`` register pairs
    that should end maximally entangled. If the marginal rank exceeds the
    Bob register, an ancilla ``<register>x`` in ``|0>`` is appended to both
    source and target. Returns ``(source, target, padding_dim)``.
    """
    rho = partial_trace(state, system_labels)
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    w, v = np.clip(w[order], 0.0, None), v[:, order]
    rank = int((w > 1e-12).sum())
    reg_dim = state.layout.dim_of([bob_register])
    pad = int(np.ceil(rank / reg_dim)) if rank > reg_dim else 1
    source = state
    if pad > 1:
        source = tensor(state, ket(SubsystemLayout.of((f"{bob_register}x", pad)), 0))
    host = reg_dim * pad
    amp = np.zeros((rho.dim, host), dtype=complex)
    for i in range(min(rank, host)):
        amp[:, i] = np.sqrt(w[i]) * v[:, i]
    amp /= np.linalg.norm(amp)
    host_systems = [(bob_register, reg_dim)] + ([(f"{bob_register}x", pad)] if pad > 1 else [])
    purified = LabeledState(SubsystemLayout(rho.layout.systems + tuple(host_systems)), vector=amp.reshape(-1), check=False)
    d_pairs = [maximally_entangled(state.layout.dim_of([b]), b, r) for b, r in pair_labels]
    target = tensor_all([purified] + d_pairs)
    return source, target, pad


# -- forward process ------------------------------------------------------------------

def forward_process(U: LabeledOperator, ensemble: RandomUnitaryChannel, n: int | None = None, seed: int = 0):
    """Steps 1 to 6 of the forward process on ``Psi(U^dagger)^{(x) n} (x) Phi_K^{A0 B0}``.

    Every measurement branch is simulated; the post-step-5 state of each is
    compared with the closed form and with one controlled unitary from ``B0``
    in ``|+_K>``. Returns ``(psi5_state, transcript)``.
    """
    n = ensemble.n if n is None else n
    if n != ensemble.n:
        raise ValueError(f"ensemble acts on {ensemble.n} copies, asked for n={n}")
    a_regs = copy_labels("A", n)
    if set(ensemble.target) != set(a_regs):
        raise ValueError(f"ensemble must act on {a_regs}, got {list(ensemble.target)}")
    for m in ensemble.members:
        mm = m.matrix
        if np.abs(mm.conj().T @ mm - np.eye(mm.shape[0])).max() > 1e-10:
            raise ValueError("ensemble member is not unitary")
    K = ensemble.K
    tr = ProtocolTranscript()
    rng = np.random.default_rng(seed)

    start = tensor(psi_dagger_block(U, n), maximally_entangled(K, "A0", "B0"))
    s1 = _apply(controlled_ensemble("A0", ensemble), start)
    tr.record("Alice", "unitary", f"controlled ensemble |k><k|^A0 (x) V_k on {a_regs} (K={K})")
    s2 = _apply(_op([("A0", K)], fourier(K)), s1)
    tr.record("Alice", "unitary", "Fourier transform on A0")

    closed_form = psi5(U, ensemble)
    plus = LabeledState(SubsystemLayout.of(("B0", K)), vector=np.ones(K) / np.sqrt(K))
    via_cu = _apply(controlled_ensemble("B0", ensemble), tensor(plus, psi_dagger_block(U, n)))

    branches = []
    for k in range(K):
        vec, layout, p = _project(s2, "A0", k)
        post = _normalized(vec, layout, p)
        phase = LabeledOperator(SubsystemLayout.of(("B0", K)),
                                np.linalg.matrix_power(register_phase(K), k + 1), kind="unitary", check=False)
        branches.append((p, _apply(phase, post)))
    probs = np.array([p for p, _ in branches])
    k_drawn = int(rng.choice(K, p=probs / probs.sum()))
    tr.record("Alice", "measurement", f"A0 in the computational basis, outcome k={k_drawn + 1} of {K}")
    tr.record("Alice", "classical-send", f"k to Bob ({np.log2(K):g} bit{'' if K == 2 else 's'})")
    tr.record("Bob", "unitary", f"phase gate Z^{k_drawn + 1} on B0")
    state5 = branches[k_drawn][1]

    tr.outcome_k = k_drawn + 1
    tr.cbits_forward = float(np.log2(K))
    tr.ebits_consumed = float(np.log2(K))
    tr.checks["branch_max_distance"] = max(vector_distance(b, closed_form) for _, b in branches)
    tr.checks["controlled_unitary_distance"] = max(vector_distance(b, via_cu) for _, b in branches)
    tr.checks["outcome_probabilities"] = probs.tolist()

    # step 6: Bob's Uhlmann unitary
    ra, rb, b_regs = copy_labels("R_A", n), copy_labels("R_B", n), copy_labels("B", n)
    marg = partial_trace(state5, a_regs + ra + rb)
    deviation = decoupling_gap(marg, a_regs + ra, rb)
    source, target, pad = purification_target(state5, a_regs + ra, "B0", list(zip(b_regs, rb)))
    bob = b_regs + ["B0"] + (["B0x"] if pad > 1 else [])
    w, overlap = uhlmann_unitary(source, target, bob)
    after = _apply(w, source)
    tr.record("Bob", "unitary", f"Uhlmann unitary W on {bob}" + (f" with ancilla B0x (dim {pad})" if pad > 1 else ""))

    host = ["B0"] + (["B0x"] if pad > 1 else [])
    psi_p = partial_trace(target, a_regs + ra + host)
    psi_p = LabeledState(psi_p.layout, matrix=psi_p.matrix, check=False)
    tr.checks["decoupling_deviation"] = deviation
    tr.checks["uhlmann_overlap"] = overlap
    tr.checks["post_W_distance"] = trace_distance(after, target)
    tr.checks["padding_dim"] = pad
    tr.checks["merging_entanglement_cost"] = conditional_entropy(psi_p, host, a_regs)
    tr.checks["merging_classical_cost"] = mutual_information(psi_p, host, ra)
    tr.cbits_backward = tr.checks["merging_classical_cost"]
    tr.final_state = after
    tr.fidelity_to_target = overlap**2
    return state5, tr


def forward_psi_p(U: LabeledOperator, ensemble: RandomUnitaryChannel) -> LabeledState:
    """Purified ``A R_A`` marginal handed to the backward process (``Psi^p``)."""
    n = ensemble.n
    state5 = psi5(U, ensemble)
    a, ra, rb, b = (copy_labels(x, n) for x in ("A", "R_A", "R_B", "B"))
    _, target, pad = purification_target(state5, a + ra, "B0", list(zip(b, rb)))
    host = ["B0"] + (["B0x"] if pad > 1 else [])
    return partial_trace(target, a + ra + host)


# -- necessity bound -------------------------------------------------------------------

def cphase_measurement(d: int = 2) -> list[LabeledOperator]:
    """``M_k = (<0|^{A0} (x) I +/- <1|^{A0} (x) Z^A) / sqrt(2)`` from ``A A0`` to ``A``."""
    if d != 2:
        raise ValueError("the controlled-phase measurement is defined for qubits")
    z = pauli_matrix(0, 1, 2)
    bra0, bra1 = np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]])
    ops = []
    for sign in (1.0, -1.0):
        m = (np.kron(np.eye(2), bra0) + sign * np.kron(z, bra1)) / np.sqrt(2)
        ops.append(LabeledOperator(SubsystemLayout.of(("A", 2), ("A0", 2)), m, kind="measurement-element",
                                   out_layout=SubsystemLayout.of(("A", 2)), check=False))
    return ops


def completeness_error(ops) -> float:
    total = sum(op.matrix.conj().T @ op.matrix for op in ops)
    return float(np.abs(total - np.eye(total.shape[0])).max())


def repair_completeness(mats) -> list[np.ndarray]:
    """Rescale ``M_k -> M_k S^{-1/2}`` with ``S = sum M^dagger M`` so they sum to identity."""
    total = sum(m.conj().T @ m for m in mats)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return [m @ inv_sqrt for m in mats]


def perturbed_cphase_measurement(strength: float, rng) -> list[LabeledOperator]:
    base = cphase_measurement()
    mats = [op.matrix + strength * (rng.standard_normal(op.matrix.shape) + 1j * rng.standard_normal(op.matrix.shape))
            for op in base]
    return [LabeledOperator(op.layout, m, kind="measurement-element", out_layout=op.out_layout, check=False)
            for op, m in zip(base, repair_completeness(mats))]


@dataclass
class NecessityResult:
    eps: float
    averaged_deviation: float
    probabilities: list
    deviations: list
    fidelities: list

    @property
    def bound(self) -> float:
        return 4 * np.sqrt(max(self.eps, 0.0))

    @property
    def holds(self) -> bool:
        return self.averaged_deviation <= self.bound + 1e-8


def lemma1_deviation(measurement, resource: LabeledState, U: LabeledOperator) -> NecessityResult:
    """Outcome-averaged decoupling deviation after Alice's first measurement, with its error.

    ``measurement`` maps ``A A0 -> A``. For each outcome ``k`` the error is
    taken from Bob's best (Uhlmann) completion toward
    ``Psi^p_k (x) Phi^{B R_B}``; ``eps = 1 - sum_k p_k F_k``. A decoupling-based implementation needs
    ``averaged_deviation <= 4 sqrt(eps)``.
    """
    err = completeness_error(measurement)
    if err > 1e-9:
        raise ValueError(f"measurement is incomplete (max deviation {err:.3g})")
    if set(resource.labels) != {"A0", "B0"} or not resource.is_pure:
        raise ValueError("resource must be a pure state on A0, B0")
    start = tensor(make_psi(U, dagger=True), resource)
    probs, devs, fids = [], [], []
    for m in measurement:
        vec, layout = _apply_to_ket(start.vector, start.layout, m)
        p = float(np.vdot(vec, vec).real)
        probs.append(p)
        if p < 1e-14:
            devs.append(0.0)
            fids.append(1.0)
            continue
        post = LabeledState(layout, vector=vec / np.sqrt(p), check=False)
        marg = partial_trace(post, {"A", "R_A", "R_B"})
        devs.append(decoupling_gap(marg, ["A", "R_A"], ["R_B"]))
        source, target, pad = purification_target(post, ["A", "R_A"], "B0", [("B", "R_B")])
        bob = ["B", "B0"] + (["B0x"] if pad > 1 else [])
        _, overlap = uhlmann_unitary(source, target, bob)
        fids.append(min(overlap**2, 1.0))
    probs_a = np.array(probs)
    eps = float(max(1.0 - probs_a @ np.array(fids), 0.0))
    avg = float(probs_a @ np.array(devs))
    return NecessityResult(eps=eps, averaged_deviation=avg, probabilities=probs, deviations=devs, fidelities=fids)


# -- the controlled-phase protocol -----------------------------------------------------

def cphase_gate(phi: float) -> LabeledOperator:
    return LabeledOperator(SubsystemLayout.of(("A", 2), ("B", 2)),
                           np.diag([1, 1, 1, np.exp(1j * phi)]), kind="unitary", check=False)


_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_Z = np.diag([1.0, -1.0])


def _cz_protocol_branches(phi: float, start: LabeledState):
    """All ``(k, l)`` branches of the three-turn protocol applied to ``start``.

    ``start`` holds ``A, B`` (plus anything untouched) and the resource on
    ``A0, B0``. Returns ``[(k, l, unnormalized ket without A0/B0)]``.
    """
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    cp = np.diag([1, 1, 1, np.exp(1j * phi)])
    s = _apply(_op([("A0", 2), ("A", 2)], cz), start)
    s = _apply(_op([("A0", 2)], _H), s)
    out = []
    for k in (0, 1):
        vec_k, lay_k, p_k = _project(s, "A0", k)
        if p_k < 1e-15:
            continue
        sk = LabeledState(lay_k, vector=vec_k, check=False)
        sk = _apply(_op([("B0", 2)], np.linalg.matrix_power(_Z, k)), sk)
        sk = _apply(_op([("B0", 2)], _H), sk)
        sk = _apply(_op([("B0", 2), ("B", 2)], cp), sk)
        sk = _apply(_op([("B0", 2)], _H), sk)
        for l in (0, 1):
            vec_l, lay_l, p_l = _project(sk, "B0", l)
            if p_l < 1e-15:
                continue
            sl = LabeledState(lay_l, vector=vec_l, check=False)
            sl = _apply(_op([("A", 2)], np.linalg.matrix_power(_Z, l)), sl)
            out.append((k, l, sl))
    return out


def run_cz_protocol(phi: float = np.pi, seed: int = 0) -> ProtocolTranscript:
    """Deterministic exact protocol for ``|0><0| (x) I + |1><1| (x) diag(1, e^{i phi})``.

    Alice couples ``A`` to her half of one ebit, measures and sends one bit;
    Bob corrects, applies the controlled phase from ``B0`` onto ``B``, measures
    ``B0`` in the X basis and sends one bit; Alice applies ``Z^l``. Every
    branch is simulated and compared with ``Psi(U)``.
    """
    U = cphase_gate(phi)
    start = tensor_all([maximally_entangled(2, "A", "R_A"), maximally_entangled(2, "B", "R_B"),
                        maximally_entangled(2, "A0", "B0")])
    target = make_psi(U)
    branches = _cz_protocol_branches(phi, start)
    rng = np.random.default_rng(seed)
    probs = np.array([float(np.vdot(b.vector, b.vector).real) for _, _, b in branches])
    fids = []
    states = []
    for (k, l, b), p in zip(branches, probs):
        st = LabeledState(b.layout, vector=b.vector / np.sqrt(p), check=False)
        states.append(st)
        fids.append(fidelity(st, target))
    pick = int(rng.choice(len(branches), p=probs / probs.sum()))
    k, l, _ = branches[pick]

    tr = ProtocolTranscript()
    tr.record("Alice", "unitary", "controlled-Z from A0 onto A, then Hadamard on A0")
    tr.record("Alice", "measurement", f"A0 in the computational basis, outcome k={k}")
    tr.record("Alice", "classical-send", "k to Bob (1 bit)")
    tr.record("Bob", "unitary", f"Z^{k} on B0, Hadamard on B0, controlled-phase({phi:.6g}) from B0 onto B, Hadamard on B0")
    tr.record("Bob", "measurement", f"B0 in the X basis, outcome l={l}")
    tr.record("Bob", "classical-send", "l to Alice (1 bit)")
    tr.record("Alice", "unitary", f"Z^{l} on A")
    tr.outcome_k = k + 1
    tr.cbits_forward = 1.0
    tr.cbits_backward = 1.0
    tr.ebits_consumed = 1.0
    tr.ebits_returned = 0.0
    tr.final_state = states[pick]
    tr.fidelity_to_target = float(probs @ np.array(fids))
    tr.checks["phi"] = float(phi)
    tr.checks["branch_probabilities"] = probs.tolist()
    tr.checks["min_branch_fidelity"] = float(min(fids))
    return tr


def cz_protocol_kraus(phi: float) -> list[np.ndarray]:
    """Kraus operators on ``A B`` of the protocol channel, one per ``(k, l)`` branch.

    The resource is fixed to one ebit; each Kraus operator carries the
    branch amplitude, so ``sum_j K_j^dagger K_j = I``.
    """
    layout_in = SubsystemLayout.of(("A", 2), ("B", 2))
    cols = {}
    for idx in range(4):
        start = tensor(ket(layout_in, idx), maximally_entangled(2, "A0", "B0"))
        for k, l, b in _cz_protocol_branches(phi, start):
            assert b.labels == ("A", "B")
            cols.setdefault((k, l), [np.zeros(4, dtype=complex) for _ in range(4)])[idx] = b.vector
    return [np.stack(cols[key], axis=1) for key in sorted(cols)]


# -- average vs entanglement fidelity ---------------------------------------------------

def apply_kraus(kraus, rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def entanglement_fidelity(kraus, U: np.ndarray) -> float:
    """``F_e`` of ``E(rho) = U^dagger M(rho) U`` on the maximally entangled input."""
    dim = U.shape[0]
    return float(sum(abs(np.trace(U.conj().T @ k)) ** 2 for k in kraus) / dim**2)


def haar_kets(dim: int, samples: int, rng) -> np.ndarray:
    z = rng.standard_normal((samples, dim)) + 1j * rng.standard_normal((samples, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def average_fidelity_mc(kraus, U, samples: int = 1000, seed: int = 0):
    """Monte-Carlo average fidelity against ``U|phi>`` over Haar-random ``phi``.

    Returns ``(Fbar, stderr, F_e)``; ``F_e`` is exact.
    """
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    u = U.matrix if isinstance(U, LabeledOperator) else np.asarray(U)
    kraus = [np.asarray(k) for k in kraus]
    rng = np.random.default_rng(seed)
    phis = haar_kets(u.shape[0], samples, rng)
    targets = phis @ u.T
    vals = np.zeros(samples)
    for k in kraus:
        vals += np.abs(np.einsum("si,ij,sj->s", targets.conj(), k, phis)) ** 2
    fbar = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(samples))
    return fbar, stderr, entanglement_fidelity(kraus, u)


def depolarized_kraus(U, strength: float) -> list[np.ndarray]:
    """Kraus operators of ``rho -> U((1-p) rho + p I/D) U^dagger`` on ``D = d^2``."""
    u = U.matrix if isinstance(U, LabeledOperator) else np.asarray(U)
    d = int(round(np.sqrt(u.shape[0])))
    paulis = [np.kron(pauli_matrix(p, q, d), pauli_matrix(r, s, d))
              for p in range(d) for q in range(d) for r in range(d) for s in range(d)]
    dim = d * d
    ops = [np.sqrt(1 - strength) * u]
    ops += [np.sqrt(strength) / dim * u @ p for p in paulis]
    return ops
