# Simulating the protocols that implement a gate nonlocally.
#
# Part 1: the controlled-phase protocol. One ebit and one bit each way
# implement |0><0| (x) I + |1><1| (x) diag(1, e^{i phi}) exactly for every phi.
# Part 2: the forward process. Alice encodes her share with a controlled
# random unitary, Fourier-transforms and measures; after Bob's phase fix the
# state no longer depends on her outcome, and Bob can rotate his side into a
# clean maximally entangled pair with R_B.
import numpy as np

from unicomp.decoupling import clifford_ensemble, clifford_reference_labels
from unicomp.gates import named_gate
from unicomp.linalg import maximally_entangled
from unicomp.pauli import is_clifford
from unicomp.protocol import (
    average_fidelity_mc,
    cz_protocol_kraus,
    cphase_measurement,
    forward_process,
    lemma1_deviation,
    perturbed_cphase_measurement,
    run_cz_protocol,
)

tr = run_cz_protocol(np.pi / 3, seed=1)
for step in tr.steps:
    print(f"  {step['actor']:5s} {step['action']:15s} {step['payload']}")
print("fidelity", tr.fidelity_to_target, " costs", (tr.ebits_consumed, tr.cbits_forward, tr.cbits_backward))

U = named_gate("CZ").matrix
print("Monte-Carlo (Fbar, stderr, F_e):", average_fidelity_mc(cz_protocol_kraus(np.pi), U, 500, seed=0))

# Alice's first measurement must decouple on average
res = maximally_entangled(2, "A0", "B0")
exact = lemma1_deviation(cphase_measurement(), res, named_gate("CZ"))
noisy = lemma1_deviation(perturbed_cphase_measurement(0.1, np.random.default_rng(0)), res, named_gate("CZ"))
print(f"\nexact measurement: eps={exact.eps:.1e} deviation={exact.averaged_deviation:.1e}")
print(f"noisy measurement: eps={noisy.eps:.3f} deviation={noisy.averaged_deviation:.3f} <= {noisy.bound:.3f}")

G = named_gate("SWAP")
_, table = is_clifford(G)
ch = clifford_ensemble(G, table, clifford_reference_labels(table))
_, tr = forward_process(G, ch, seed=0)
print(f"\nforward process for SWAP with K={ch.K}: outcome k={tr.outcome_k}")
for key in ("branch_max_distance", "controlled_unitary_distance", "post_W_distance",
            "merging_entanglement_cost", "merging_classical_cost"):
    print(f"  {key:28s} {tr.checks[key]:.3g}")
