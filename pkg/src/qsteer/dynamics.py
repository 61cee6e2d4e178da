"""Time evolution towards the steady state.

Two routes are provided:

* :func:`evolve_continuous` integrates the master equation with a fixed-step
  fourth-order Runge-Kutta scheme;
* :func:`evolve_discrete` repeats the microscopic blind-measurement step: the
  system is coupled to a freshly prepared detector qubit for a time ``dt``,
  evolved with the exact joint unitary and the detector is traced out.

With ``J^2 dt = alpha`` held fixed the discrete map converges to the
continuous one at first order in ``dt``.

Distances are trace distances to the closed-form steady state, which for a
qubit equal ``|s - s_T| / 2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import NumericalError
from .liouvillian import ProtocolParams, build_matrix, steady_state, system_hamiltonian

TRACE_DRIFT_TOL = 1e-6
WEAK_COUPLING_LIMIT = 0.1


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 3) Bloch vectors
    distances: np.ndarray
    target: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


def rk4_step(f, y, h):
    """One classical Runge-Kutta step for ``y' = f(y)``."""
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _bloch_from_vec(v: np.ndarray) -> np.ndarray:
    # rows of vec(rho) = (rho00, rho01, rho10, rho11)
    return np.stack([2 * v[..., 1].real, -2 * v[..., 1].imag, (v[..., 0] - v[..., 3]).real], axis=-1)


def _remove_trace(v: np.ndarray) -> float:
    # the deviation is exactly traceless; a rounding-level trace would sit on
    # the zero mode and never decay
    t = 0.5 * (v[0] + v[3])
    v[0] -= t
    v[3] -= t
    return abs(t)


def evolve_continuous(
    params: ProtocolParams, initial, t_final: float, n_steps: int, record_every: int = 1
) -> Trajectory:
    """Integrate ``d rho / dt = L[rho]`` from ``initial`` up to ``t_final``.

    The integration runs on the deviation ``rho - rho_T`` from the
    closed-form steady state. Since ``L[rho_T] = 0`` this is the same
    Runge-Kutta recursion, but distances to the target keep full relative
    precision long after they drop below rounding level in ``rho``.

    Raises
    ------
    NumericalError
        If the step size is outside the stability region of the scheme, or
        the accumulated trace drift exceeds ``1e-6``.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    rho0 = core.check_density(initial, tol=core.EVOLVED_STATE_TOL)
    M = build_matrix(params)
    h = t_final / n_steps
    # one RK4 step of the linear system, as a matrix
    step = rk4_step(lambda y: M @ y, np.eye(4, dtype=complex), h)
    amplification = np.sort(np.abs(np.linalg.eigvals(step)))[-2]
    if amplification >= 1.0:
        raise NumericalError(
            f"step size {h:.3g} is outside the Runge-Kutta stability region "
            f"(amplification {amplification:.6g})"
        )

    s_target = steady_state(params)
    rho_t = core.vec(0.5 * (core.IDENTITY + core.pauli_dot(s_target)))
    delta = core.vec(rho0) - rho_t
    _remove_trace(delta)
    drift = 0.0

    n_rec = n_steps // record_every + 1
    deltas = np.empty((n_rec, 4), dtype=complex)
    times = np.empty(n_rec)
    deltas[0], times[0] = delta, 0.0
    k = 1
    for n in range(1, n_steps + 1):
        delta = step @ delta
        drift += _remove_trace(delta)
        if n % record_every == 0:
            deltas[k], times[k] = delta, n * h
            k += 1
    deltas, times = deltas[:k], times[:k]

    if drift > TRACE_DRIFT_TOL or not np.all(np.isfinite(deltas)):
        raise NumericalError(f"trace drift {drift:.3g}: step size {h:.3g} too large")
    d_bloch = _bloch_from_vec(deltas)
    return Trajectory(
        times=times,
        states=s_target + d_bloch,
        distances=0.5 * np.linalg.norm(d_bloch, axis=1),
        target=s_target,
    )


@dataclass(frozen=True)
class DiscreteStepConfig:
    """Microscopic measurement step: duration ``dt``, coupling ``J`` and the
    detector initialization direction.

    Warns when ``(J dt)^2 >= 0.1``, i.e. outside the weak-measurement regime.
    """

    dt: float
    coupling: float
    detector_init: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        m = core.unit_vector(self.detector_init, tol=1e-9)
        object.__setattr__(self, "detector_init", tuple(float(c) for c in m))
        if (self.coupling * self.dt) ** 2 >= WEAK_COUPLING_LIMIT:
            warnings.warn(
                f"(J dt)^2 = {(self.coupling * self.dt) ** 2:.3g} is not small; "
                "the measurement is not weak",
                RuntimeWarning,
                stacklevel=3,
            )

    @classmethod
    def from_alpha(cls, dt: float, alpha: float = 1.0, detector_init=(0.0, 0.0, 1.0)):
        """Configuration with ``J = sqrt(alpha / dt)``."""
        return cls(dt, float(np.sqrt(alpha / dt)), detector_init)

    @property
    def alpha(self) -> float:
        return self.coupling**2 * self.dt


def interaction_hamiltonian(coupling: float, m_hat) -> np.ndarray:
    """``J [sigma^s · sigma^d - (m·sigma^s)(m·sigma^d)]``."""
    m_sigma = core.pauli_dot(m_hat)
    iso = sum(core.tensor(p, p) for p in core.PAULI)
    return coupling * (iso - core.tensor(m_sigma, m_sigma))


def step_unitary(config: DiscreteStepConfig, params: ProtocolParams, check_alpha: bool = True) -> np.ndarray:
    """Exact ``exp(-i H dt)`` of the joint Hamiltonian via its eigendecomposition.

    The Zeeman energy is ``params.omega * params.alpha``. With ``check_alpha``
    the coupling must satisfy ``J^2 dt = alpha``; switch it off to study
    other couplings, e.g. ``J = 0`` for the bare precession.
    """
    if check_alpha and abs(config.alpha - params.alpha) > 1e-12 * params.alpha:
        raise ValueError(
            f"J^2 dt = {config.alpha:.15g} does not match the measurement strength {params.alpha:.15g}"
        )
    H = core.tensor(system_hamiltonian(params), core.IDENTITY) + interaction_hamiltonian(
        config.coupling, config.detector_init
    )
    energies, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(-1j * energies * config.dt)) @ vecs.conj().T


def _apply_step(U: np.ndarray, rho: np.ndarray, detector: np.ndarray) -> np.ndarray:
    joint = U @ core.tensor(rho, detector) @ U.conj().T
    out = core.partial_trace_detector(joint)
    return 0.5 * (out + out.conj().T)


def detector_state(m_hat) -> np.ndarray:
    return 0.5 * (core.IDENTITY + core.pauli_dot(m_hat))


def discrete_step(
    config: DiscreteStepConfig, params: ProtocolParams, rho, check_alpha: bool = True
) -> np.ndarray:
    """One blind measurement step; the detector readout is discarded."""
    rho = core.check_density(rho, tol=core.EVOLVED_STATE_TOL)
    U = step_unitary(config, params, check_alpha)
    return _apply_step(U, rho, detector_state(config.detector_init))


def evolve_discrete(
    config: DiscreteStepConfig,
    params: ProtocolParams,
    initial,
    n_steps: int,
    record_every: int = 1,
    check_alpha: bool = True,
) -> Trajectory:
    """Iterate :func:`discrete_step` ``n_steps`` times.

    Distances refer to the steady state of ``params``, which is the long-time
    limit only when ``J^2 dt = alpha``.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    rho = core.check_density(initial, tol=core.EVOLVED_STATE_TOL)
    U = step_unitary(config, params, check_alpha)
    detector = detector_state(config.detector_init)
    s_target = steady_state(params)
    states, times = [core.density_to_bloch(rho)], [0.0]
    for n in range(1, n_steps + 1):
        rho = _apply_step(U, rho, detector)
        if n % record_every == 0:
            states.append(core.density_to_bloch(rho))
            times.append(n * config.dt)
    states = np.array(states)
    return Trajectory(
        times=np.array(times),
        states=states,
        distances=0.5 * np.linalg.norm(states - s_target, axis=1),
        target=s_target,
    )


def fit_rate(traj: Trajectory, window: float = 0.5, floor: float = 1e-12, min_samples: int = 5) -> float:
    """Decay rate from a least-squares fit of ``log(distance)`` against time.

    Uses the last ``window`` fraction of the samples, keeping only those with
    distance above ``floor``.

    Raises
    ------
    NumericalError
        If fewer than ``min_samples`` points remain.
    """
    t = np.asarray(traj.times)
    d = np.asarray(traj.distances)
    start = int(np.floor((1.0 - window) * len(t)))
    t, d = t[start:], d[start:]
    keep = d > floor
    if keep.sum() < min_samples:
        raise NumericalError(
            f"only {int(keep.sum())} samples above {floor:g} in the fit window; "
            "distances underflowed or the window is too short"
        )
    slope = np.polyfit(t[keep], np.log(d[keep]), 1)[0]
    return float(-slope)
