"""
Optimal convergence rate versus purity
======================================

The nonzero decay rates always average to 8/3 (units of the measurement
strength), so no protocol relaxes faster than that. Three regimes:

* low purity, P <= 7/8: the rate keeps growing with the field;
* medium purity: the bound 8/3 is reached, with all three real parts equal;
* high purity, P > 127/128: the optimum is an exceptional point.
"""

import numpy as np

import qsteer
from qsteer.optimizer import numeric_optimum

print(f"{'P':>9} {'regime':>7} {'Omega_opt':>10} {'Gamma':>9} {'EP':>3} {'osc':>5}")
for P in [0.55, 0.7, 0.8, 0.875, 0.9, 0.95, 0.99, 127 / 128, 0.995, 0.999, 1.0]:
    o = qsteer.optimize(P, omega_max=100.0)
    print(f"{P:9.6f} {o.regime.value:>7} {o.omega_opt:10.5f} {o.gamma_opt:9.6f} "
          f"{o.ep_order:3d} {str(o.oscillatory):>5}")

# in the low regime the cap decides; the supremum is 4 / (1 + sqrt(2(1-P)))
P = 0.7
for w in (10, 100, 1000):
    print(f"P = {P}, Omega_max = {w:5d}: Gamma = {qsteer.optimize(P, w).gamma_opt:.8f}")
print("supremum", qsteer.optimize(P).gamma_sup, 4 / (1 + np.sqrt(2 * (1 - P))))

# brute force agrees with the closed forms
for P in (0.9, 0.96, 0.999):
    o = qsteer.optimize(P)
    w, g = numeric_optimum(P, qsteer.omega_min(P), 100.0)
    print(f"P = {P}: closed form ({o.omega_opt:.8f}, {o.gamma_opt:.8f}), brute force ({w:.8f}, {g:.8f})")

# CSV for plotting elsewhere
rows = qsteer.rate_curve(np.linspace(0.51, 1.0, 50))
with open("rate_curve.csv", "w") as fh:
    fh.write("purity,gamma_opt,omega_opt\n")
    for r in rows:
        fh.write(f"{r['purity']:.12g},{r['gamma_opt']:.12g},{r['omega_opt']:.12g}\n")
print("wrote rate_curve.csv")
