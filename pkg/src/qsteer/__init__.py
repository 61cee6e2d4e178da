"""Steering a qubit to arbitrary targets by blind weak measurements.

The package models a qubit with a Zeeman Hamiltonian coupled to repeatedly
reset detector qubits. Tracing out the detectors gives a Lindblad master
equation whose steady state can be placed anywhere in the Bloch ball and
whose spectral gap sets the convergence rate.

Modules
-------
core          Pauli algebra, Bloch/density conversions, state validation
liouvillian   protocol parameters, superoperator matrix, steady state
spectral      closed-form spectrum, gap and exceptional points
steering      steady-state ellipsoid and inverse targeting
optimizer     optimal Zeeman ratio versus target purity
dynamics      continuous and discrete time evolution
cli           command-line front end
"""

from .core import bloch_to_density, density_to_bloch, purity, trace_distance
from .errors import (
    DegenerateSteadyStateError,
    InfeasibleTargetError,
    InvalidStateError,
    NumericalError,
    SteeringError,
    UnstableSpectrumError,
)
from .liouvillian import (
    GeneralLindblad,
    ProtocolParams,
    build_matrix,
    characteristic_cubic,
    nullspace_steady_state,
    protocol_lindblad,
    steady_state,
    super_trace,
)
from .spectral import SpectrumReport, detect_ep, purity_spectrum, solve_cubic, spectrum
from .steering import TargetSpec, decide_m_hat, omega_min, solve_parameters
from .optimizer import OptimalSteering, PurityRegime, branch_scan, classify_regime, optimize, rate_curve
from .dynamics import DiscreteStepConfig, Trajectory, evolve_continuous, evolve_discrete, fit_rate

__version__ = "0.1.0"

__all__ = [
    "bloch_to_density", "density_to_bloch", "purity", "trace_distance",
    "SteeringError", "InvalidStateError", "InfeasibleTargetError", "NumericalError",
    "DegenerateSteadyStateError", "UnstableSpectrumError",
    "ProtocolParams", "GeneralLindblad", "build_matrix", "characteristic_cubic",
    "steady_state", "nullspace_steady_state", "protocol_lindblad", "super_trace",
    "SpectrumReport", "solve_cubic", "detect_ep", "spectrum", "purity_spectrum",
    "TargetSpec", "decide_m_hat", "omega_min", "solve_parameters",
    "PurityRegime", "OptimalSteering", "classify_regime", "optimize", "rate_curve", "branch_scan",
    "Trajectory", "DiscreteStepConfig", "evolve_continuous", "evolve_discrete", "fit_rate",
]
