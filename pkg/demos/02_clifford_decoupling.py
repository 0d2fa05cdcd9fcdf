# Partial decoupling: which random Paulis on A make A R_A independent of R_B?
#
# For a Clifford gate the answer comes from the conjugation table: a Pauli on
# the reference R_B can be pushed through Psi(U^dagger) onto A. Twirling R_B
# fully decouples, so keeping one representative per distinct A-side image
# gives an A-side ensemble of size 2^K that decouples exactly.
from unicomp.decoupling import (
    RandomUnitaryChannel,
    clifford_ensemble,
    clifford_reference_labels,
    decoupling_deviation,
    search_min_pauli_ensemble,
)
from unicomp.gates import named_gate
from unicomp.pauli import PauliLabel, is_clifford, translate_reference_pauli
from unicomp.unitary import schmidt_strength

U = named_gate("CZ")
ok, table = is_clifford(U)
print("CZ is Clifford:", ok)
for lab in [PauliLabel(p, q) for p in range(2) for q in range(2)]:
    print(f"  {lab} on R_B  ->  {translate_reference_pauli(table, lab.p, lab.q)} on A")

# no randomness at all leaves one bit of correlation
none = RandomUnitaryChannel.from_paulis([PauliLabel(0, 0)], 2)
print("\nno twirl:      deviation", round(decoupling_deviation(U, none).deviation, 6))
deph = clifford_ensemble(U, table, clifford_reference_labels(table))
print("dephasing:     deviation", decoupling_deviation(U, deph).deviation, " rate", deph.rate)

# the brute-force search agrees, and never beats K(U)
for name in ["CZ", "SWAP", "CT"]:
    G = named_gate(name)
    for n in (1, 2):
        rep, _ = search_min_pauli_ensemble(G, n=n)
        print(f"{name:5s} n={n}: smallest exact Pauli set has {rep.ensemble_size:2d} members, "
              f"rate {rep.rate:.3f} >= K = {schmidt_strength(G):.3f}")
