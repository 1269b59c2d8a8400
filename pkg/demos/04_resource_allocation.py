"""Spending a qubit supply R over a window tau: how big should the probes be?"""
import math

from qubit_metrology import allocator
from qubit_metrology.allocator import Resources

R, gamma2 = 1e6, 1.0
print("gamma2 tau  regime       n    nu       T        dimensionless bound (cat / product)")
for x in (2e-4, 1e-3, 5e-3, 0.05, 0.3, 0.9, 3.0, 30.0):
    res = Resources(R=R, tau=x / gamma2, gamma2=gamma2)
    cat = allocator.optimize_cat(res)
    prod = allocator.optimize_product(res)
    print(
        f"{x:9.4f}  {cat.regime:<10} {cat.n:4d} {cat.nu:6d}  {cat.T:.3e}  "
        f"{cat.dimensionless:10.4f} / {prod.dimensionless:10.4f}"
    )

# at the end of the transition region both families meet at 2 sqrt(2e)
print("2 sqrt(2e) =", 2 * math.sqrt(2 * math.e))

# the optimal single-qubit time moves from 2 tau/3 toward T2
for row in allocator.figure_curves("fig2", allocator.log_grid(1e-2, 1e2, 5)):
    print(f"gamma2 tau = {row.gamma2_tau:8.3f}   gamma2 Tp = {row.gamma2_Tp:.4f}")

# the transition optimum is a genuine minimum of the budgeted bound in (n, T)
res = Resources(R=1e4, tau=0.5, gamma2=1.0)
print(allocator.hessian_check(2.0, 0.25, res))
