"""
Eigenvalue branches and exceptional points
==========================================

Follow the three nonzero eigenvalues as the Zeeman ratio grows, at fixed
target purity. At P = 127/128 all three meet at -8/3 (third order); above
that purity two real eigenvalues merge at the optimum (second order).
"""

import numpy as np

import qsteer
from qsteer.optimizer import high_regime_solution, medium_regime_solution
from qsteer.spectral import discriminant
from qsteer.liouvillian import cubic_from_purity

for P in (0.95, 127 / 128, 0.999):
    grid = np.linspace(qsteer.omega_min(P), 2.5, 12)
    scan = qsteer.branch_scan(P, grid)
    print(f"\nP = {P:.6f}")
    for w, lam in zip(scan.omega, scan.eigenvalues):
        cols = "  ".join(f"{z.real:+.4f}{z.imag:+.4f}i" for z in lam)
        print(f"  Omega {w:6.4f}: {cols}")

# the third-order point
_, b, w3 = medium_regime_solution(127 / 128)
rep = qsteer.purity_spectrum(127 / 128, w3)
print(f"\nOmega = {w3:.12f} (1/sqrt3 = {1 / np.sqrt(3):.12f}): {rep.eigenvalues}, order {rep.ep_order}")

# a small detuning splits a triple root like a cube root
for dw in (1e-2, 1e-4, 1e-6):
    z = qsteer.purity_spectrum(127 / 128, w3 + dw).eigenvalues
    spread = np.abs(z[:, None] - z[None, :]).max()
    print(f"  dOmega = {dw:.0e}: spread {spread:.2e}, spread / dOmega^(1/3) = {spread / dw ** (1 / 3):.3f}")

# second-order points in the high regime
for P in (0.995, 0.999, 1.0):
    a, simple, w = high_regime_solution(P)
    d = discriminant(cubic_from_purity(P, w))
    print(f"P = {P}: double root {a:.10f}, simple root {simple:.10f}, Omega {w:.10f}, discriminant {d:.1e}")
