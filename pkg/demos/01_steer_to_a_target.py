"""
Steering a qubit to a chosen state
==================================

Pick a target anywhere in the Bloch ball, find a detector direction whose
steady-state ellipsoid contains it, solve for the field, and check that the
master equation really relaxes there.
"""

import numpy as np

import qsteer
from qsteer.steering import ellipsoid_residual

target = np.array([0.3, -0.4, 0.5])
spec = qsteer.TargetSpec(target)
print(f"target {target}, purity {spec.purity:.4f}")

# the detector direction sits on a cone around the target; take the
# canonical one in the plane of the target and z
m_hat = qsteer.decide_m_hat(target)
print("detector direction", np.round(m_hat, 6), "ellipsoid residual", ellipsoid_residual(target, m_hat))

# below this Zeeman ratio no field angle reaches the target
w_min = qsteer.omega_min(spec.purity)
print(f"Omega_min = {w_min:.6f}")
try:
    qsteer.solve_parameters(spec, 0.9 * w_min, m_hat=m_hat)
except qsteer.InfeasibleTargetError as exc:
    print("0.9 Omega_min:", exc)

# any larger field works; the rate depends on which one
for omega in (w_min * 1.001, w_min * 1.5, w_min * 3):
    sol = qsteer.solve_parameters(spec, omega, m_hat=m_hat)
    p = sol.params
    rep = qsteer.spectrum(p)
    print(f"Omega {omega:7.4f}: theta {p.theta:.4f}, phi {p.phi:.4f}, "
          f"residual {sol.residual:.1e}, gap {rep.gap:.4f}")

# relax from the maximally mixed state
p = qsteer.solve_parameters(spec, 1.5 * w_min, m_hat=m_hat).params
traj = qsteer.evolve_continuous(p, 0.5 * np.eye(2), t_final=8.0, n_steps=8000, record_every=1000)
for t, d in zip(traj.times, traj.distances):
    print(f"t = {t:4.1f}  distance to target {d:.3e}")
print("fitted rate", qsteer.fit_rate(traj), "gap", qsteer.spectrum(p).gap)
