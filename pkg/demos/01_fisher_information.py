"""Quantum Fisher information of a few simple states.

Run with ``python3 demos/01_fisher_information.py``.
"""
import numpy as np

from qubit_metrology import qcore
from qubit_metrology.oracles import qfi_sylvester

np.set_printoptions(precision=4, suppress=True)

# A qubit on the equator of the Bloch sphere, rotated about z by h = sigma_z / 2
plus = 0.5 * (qcore.I2 + qcore.SIGMA_X)
h = qcore.SIGMA_Z / 2
drho = qcore.phase_derivative(plus, h, T=1.0)
print("pure equatorial qubit, QFI =", qcore.qfi(plus, drho))  # 4 (Delta h)^2 = 1

# shrink the Bloch vector: the QFI falls with its squared length
for r in (1.0, 0.8, 0.5, 0.1):
    rho = 0.5 * (qcore.I2 + r * qcore.SIGMA_X)
    print(f"  |r| = {r:.1f}  QFI = {qcore.qfi(rho, qcore.phase_derivative(rho, h)):.4f}")

# the symmetric logarithmic derivative for a diagonal state
rho = np.diag([0.75, 0.25]).astype(complex)
L = qcore.sld(rho, 0.3 * qcore.SIGMA_X)
print("SLD of diag(0.75, 0.25) with drho = 0.3 sigma_x:\n", L.real)

# n-qubit product and cat states: linear versus quadratic growth
for n in range(1, 6):
    hn = qcore.collective_h(n)
    prod = qcore.kron_all([plus] * n)
    ghz = np.zeros(2**n)
    ghz[[0, -1]] = 2**-0.5
    cat = np.outer(ghz, ghz)
    q_prod = qcore.qfi(prod, qcore.phase_derivative(prod, hn))
    q_cat = qcore.qfi(cat, qcore.phase_derivative(cat, hn))
    print(f"n = {n}: product QFI = {q_prod:5.2f}   cat QFI = {q_cat:5.2f}")

# a full-rank random state, cross-checked against a direct Sylvester solve
rng = np.random.default_rng(0)
a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
rho = a @ a.conj().T
rho /= np.trace(rho).real
drho = qcore.phase_derivative(rho, qcore.collective_h(2))
print("random 2-qubit state: eigenbasis", qcore.qfi(rho, drho), " Sylvester", qfi_sylvester(rho, drho))
