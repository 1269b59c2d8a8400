"""The phase-covariant qubit channel: Bloch-vector flow and complete positivity."""
import math

import numpy as np

from qubit_metrology import channel
from qubit_metrology.channel import ChannelParams

np.set_printoptions(precision=4, suppress=True)

# relaxation toward (0, 0, mu) with T1 = 1/gamma1 and T2 = 1/gamma2
params = ChannelParams(gamma1=0.75, gamma2=1.0, mu=0.75, omega=2.0)
print("Bloch trajectory starting from (1, 0, 0):")
for t in np.linspace(0, 4, 9):
    v = channel.apply_bloch(params, t, (1, 0, 0))
    print(f"  t = {t:.1f}  ({v.x:+.4f}, {v.y:+.4f}, {v.z:+.4f})  |v| = {v.norm():.4f}")

# the Pauli transfer matrix composes as a semigroup
a = channel.transfer_matrix(params, 0.7)
b = channel.transfer_matrix(params, 1.1)
print("semigroup defect:", np.abs(channel.transfer_matrix(params, 1.8) - a @ b).max())

# the same map on a two-qubit Bell state, qubit by qubit
bell = np.zeros((4, 4))
bell[np.ix_([0, 3], [0, 3])] = 0.5
out = channel.apply_nqubit(ChannelParams(gamma2=0.5), 1.0, bell)
print("Bell-state coherence after gamma2 t = 0.5:", out[0, 3].real, "=", 0.5 * math.exp(-1.0))

# complete positivity holds exactly when gamma2 >= gamma1 / 2
for g2 in (0.3, 0.45, 0.5, 0.7):
    p = ChannelParams.unchecked(gamma1=1.0, gamma2=g2, mu=1.0)
    worst = min(channel.choi_psd_check(p, t).min_eigenvalue for t in np.geomspace(1e-3, 10, 200))
    print(f"gamma2/gamma1 = {g2:.2f}: min Choi eigenvalue {worst:+.2e}")
