# Rate bounds. For Clifford gates the Schmidt-strength lower bound and the
# decoupling upper bound meet; for other gates only an interval is known.
from unicomp.gates import named_gate
from unicomp.rates import distcomp_achievable, distcomp_necessary, implement_bounds, resource_inequality_report

for name in ["CZ", "SWAP", "CT"]:
    U = named_gate(name)
    b = implement_bounds(U)
    lo, hi = b.D_interval
    print(f"{name:5s} K={b.K:.4f} clifford={b.clifford}  decoupling cost in [{lo:.4f}, {hi:.4f}]")
    print("      ", resource_inequality_report(U, name, b)["achievable"])

cz = named_gate("CZ")
print("\ndistributed compression, CZ, r = 1.5:", distcomp_achievable(cz, 1.5).triplet.as_list())
print("CZ with r = 1:", distcomp_achievable(cz, 1.0).binding)
for qa in (0.4, 0.5):
    v = distcomp_necessary(cz, qa)
    print(f"Q_A = {qa}: needs R = {v.R}, {'forbidden' if v.forbidden else 'allowed'}")
