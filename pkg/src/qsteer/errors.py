"""Exception hierarchy shared by all modules."""


class SteeringError(Exception):
    """Base class for errors raised by qsteer."""


class InvalidStateError(SteeringError, ValueError):
    """A density matrix or Bloch vector violates a physical invariant."""


class InfeasibleTargetError(SteeringError, ValueError):
    """The requested target cannot be reached with the given parameters,
    e.g. a Zeeman ratio below the admissible lower bound."""


class NumericalError(SteeringError, RuntimeError):
    """A numerical procedure failed or produced an untrustworthy result."""


class DegenerateSteadyStateError(NumericalError):
    """The Liouvillian has more than one zero mode."""


class UnstableSpectrumError(NumericalError):
    """A generator has eigenvalues with positive real part."""
