"""Closed-form bounds on the coupling g for product and cat probes."""
import math

import numpy as np

from qubit_metrology import bounds, probes, qcore
from qubit_metrology.bounds import BoundQuery
from qubit_metrology.channel import ChannelParams
from qubit_metrology.probes import ProbeSpec

N = 120  # qubits in total
T = 1.0
print("gamma2 T   product   cat(n=4)   cat(n=12)")
for x in (0.0, 0.02, 0.1, 0.3, 1.0):
    p = ChannelParams(gamma2=x / T)
    row = [bounds.bound(BoundQuery("product", "strong", 1, N, T, p)).delta_g]
    for n in (4, 12):
        row.append(bounds.bound(BoundQuery("cat", "strong", n, N // n, T, p)).delta_g)
    print(f"{x:7.2f}  " + "  ".join(f"{v:9.5f}" for v in row))
# entanglement wins only while n gamma2 T stays small

# with longitudinal decay the weak (variance) bound is looser than the strong one
p = ChannelParams(gamma1=1.0, gamma2=0.8, mu=0.6)
for form in bounds.FORMS:
    print(f"{form:>6}: {bounds.bound(BoundQuery('cat', form, 3, 40, 0.5, p)).delta_g:.5f}")

# the strong bound is the quantum Cramer-Rao bound of the decohered probe
spec = ProbeSpec("cat", 3, 0.5, g=0.2)
rho = probes.evolve(spec, p)
q = qcore.qfi(rho, qcore.phase_derivative(rho, qcore.collective_h(3), spec.T))
print("1/sqrt(nu F_Q) =", 1 / math.sqrt(40 * q))

# the chain sqrt(1 - d1^2) >= exp(-gamma1 T/2) >= exp(-gamma2 T) on a time grid
for t in np.linspace(0.25, 2, 4):
    c = bounds.weak_vs_strong_chain(t, p)
    print(f"T = {t:.2f}: {c.variance_factor:.4f} >= {c.longitudinal:.4f} >= {c.transverse:.4f}")
