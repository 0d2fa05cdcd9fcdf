# Schmidt strength of a few two-qubit gates, and the two ways to see it.
#
# K(U) is the entropy of the squared operator-Schmidt coefficients. It also
# equals the entanglement that U builds across A R_A | B R_B when it acts on
# two maximally entangled pairs, and the Holevo information Alice can send
# to Bob with one use of U.
import numpy as np

from unicomp.gates import named_gate
from unicomp.unitary import (
    holevo_lower_bound_protocol,
    random_gate,
    schmidt_decompose,
    schmidt_entropy_of_psi,
    schmidt_strength,
)

for name in ["I", "CZ", "CNOT", "SWAP", "CT", "CPHASE(pi/3)"]:
    U = named_gate(name)
    dec = schmidt_decompose(U)
    K = schmidt_strength(dec)
    chi, _ = holevo_lower_bound_protocol(U)
    print(f"{name:13s} S={dec.S}  c={np.round(dec.coeffs, 4)}  K={K:.4f}  "
          f"S(AR_A)={schmidt_entropy_of_psi(U):.4f}  chi={chi:.4f}")

# a random gate is generically full Schmidt rank
rng = np.random.default_rng(0)
U = random_gate(3, rng)
dec = schmidt_decompose(U)
print("\nrandom d=3 gate: S =", dec.S, " K =", round(float(schmidt_entropy_of_psi(U)), 4),
      " max K =", round(2 * np.log2(3), 4))
print("reconstruction error:", np.abs(dec.reconstruct() - U.matrix).max())
