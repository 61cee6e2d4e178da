"""
From repeated blind measurements to the master equation
=======================================================

Each step couples the qubit to a fresh detector for a time dt and throws the
detector away. With J^2 dt = alpha fixed the sequence of steps approaches the
Lindblad evolution at first order in dt.
"""

import warnings

import numpy as np

import qsteer
from qsteer import core
from qsteer.liouvillian import average_rate

p = qsteer.ProtocolParams(omega=1.5, theta=0.8, phi=0.3, m_hat=(0.0, 0.6, 0.8))
rho0 = core.bloch_to_density((0.0, 0.0, -1.0))
T = 2.0

exact = qsteer.evolve_continuous(p, rho0, T, 4000, record_every=4000)
print("continuous state at t = 2:", exact.states[-1])

prev = None
for dt in (0.02, 0.01, 0.005, 0.0025):
    cfg = qsteer.DiscreteStepConfig.from_alpha(dt, p.alpha, p.m_hat)
    n = int(round(T / dt))
    traj = qsteer.evolve_discrete(cfg, p, rho0, n, record_every=n)
    err = np.linalg.norm(traj.states[-1] - exact.states[-1])
    ratio = "" if prev is None else f"  ratio {prev / err:.3f}"
    print(f"dt = {dt:<7} J = {cfg.coupling:7.3f}  error {err:.3e}{ratio}")
    prev = err

# the discrete map has its own fixed point, O(dt) away from the target
cfg = qsteer.DiscreteStepConfig.from_alpha(1e-3, p.alpha, p.m_hat)
traj = qsteer.evolve_discrete(cfg, p, rho0, 20000, record_every=20000)
print("distance of the discrete long-time state from the target:", traj.distances[-1])

# strong coupling per step is no longer a weak measurement
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    qsteer.DiscreteStepConfig.from_alpha(0.5, 1.0)
print("warning:", caught[0].message)

# the trace of the generator does not depend on the Hamiltonian
lind = qsteer.protocol_lindblad(p)
print("Tr L =", qsteer.super_trace(lind), " average rate =", average_rate(lind))
