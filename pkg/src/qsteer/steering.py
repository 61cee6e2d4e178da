"""Steady-state ellipsoid geometry and inverse targeting.

For a detector direction ``m_hat`` the reachable steady states fill the
ellipsoid ``2 s_perp^2 + 4 (s_par - 1/2)^2 = 1`` with ``s_par = s·m_hat``.
Its minor axis runs from the centre of the Bloch ball to the pure state
``m_hat``. On the ellipsoid the purity only depends on the axial component,
``P = 1 - (1 - s_par)^2 / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import InfeasibleTargetError, NumericalError
from .liouvillian import ProtocolParams, steady_state

ACCEPT_RESIDUAL = 1e-8
ELLIPSOID_TOL = 1e-9
PURITY_SLACK = 1e-12
# rounding allowance in the feasibility test s_par (2 + Omega^2) >= 2
FEASIBILITY_SLACK = 16 * np.finfo(float).eps


def check_purity(purity: float) -> float:
    """Validate a purity, clipping rounding-level excursions past 1/2 or 1."""
    purity = float(purity)
    if not 0.5 - PURITY_SLACK <= purity <= 1.0 + PURITY_SLACK:
        raise ValueError(f"purity must lie in [1/2, 1], got {purity!r}")
    return min(max(purity, 0.5), 1.0)


def ellipsoid_residual(s, m_hat=(0.0, 0.0, 1.0)) -> float:
    """Distance from the ellipsoid equation, ``|2 s_perp^2 + 4 (s_par - 1/2)^2 - 1|``."""
    s = np.asarray(s, dtype=float)
    m = core.unit_vector(m_hat, tol=1e-9)
    s_par = float(s @ m)
    s_perp2 = max(float(s @ s) - s_par**2, 0.0)
    return abs(2.0 * s_perp2 + 4.0 * (s_par - 0.5) ** 2 - 1.0)


def axial_component(purity: float) -> float:
    """Component ``s·m_hat`` of an on-ellipsoid state of the given purity."""
    return 1.0 - np.sqrt(2.0 * (1.0 - check_purity(purity)))


def omega_min(purity: float) -> float:
    """Smallest admissible Zeeman ratio for a target of the given purity.

    Returns ``inf`` at ``P = 1/2``: the maximally mixed state is only
    approached as the field grows without bound.
    """
    x = np.sqrt(2.0 * (1.0 - check_purity(purity)))
    if x >= 1.0:
        return np.inf
    return float(np.sqrt(2.0 * x / (1.0 - x)))


def omega_min_axial(s_par: float) -> float:
    """Lower bound written in terms of the axial component, ``sqrt(2(1 - s_z)/s_z)``."""
    if s_par <= 0.0:
        return np.inf
    return float(np.sqrt(max(2.0 * (1.0 - s_par) / s_par, 0.0)))


def to_detector_frame(s, m_hat) -> np.ndarray:
    R, _ = core.rotation_to(m_hat)
    return R.T @ np.asarray(s, dtype=float)


def phi_critical(target, m_hat=(0.0, 0.0, 1.0)) -> float:
    """Field azimuth that reaches ``target`` with the smallest Zeeman ratio.

    At the bound the field lies in the detector's transverse plane
    (``theta = pi/2``) and the azimuth is that of the transverse part of
    the target advanced by a quarter turn. The result is in ``[0, 2 pi)``.

    Raises
    ------
    ValueError
        For targets on the detector axis, where the azimuth is irrelevant.
    """
    s = to_detector_frame(target, m_hat)
    if np.hypot(s[0], s[1]) < 1e-14:
        raise ValueError("target lies on the detector axis; phi is undetermined")
    return float(np.mod(np.arctan2(s[1], s[0]) + np.pi / 2, 2 * np.pi))


def omega_squared_at_phi(target, phi: float, m_hat=(0.0, 0.0, 1.0)) -> float:
    """Squared Zeeman ratio needed to reach ``target`` at field azimuth ``phi``,
    with the polar angle eliminated."""
    sx, sy, sz = to_detector_frame(target, m_hat)
    t = np.tan(phi)
    sec2 = 1.0 + t * t
    num = (sx + sy * t) ** 2 - (sx**2 + sy**2) + 2 * (1 - sz) * (sz + 2 * (1 - sz) * sec2)
    return float(num / (sx * t - sy) ** 2)


def cos2_theta(s_par: float, omega: float) -> float:
    """``cos^2 theta`` that places the steady state at axial component ``s_par``."""
    return (s_par * (2.0 + omega**2) - 2.0) / (omega**2 * (2.0 - s_par))


def field_angle(purity: float, omega: float, negative_cos: bool = False) -> float:
    """Polar field angle reaching a target of given purity at Zeeman ratio ``omega``.

    Raises
    ------
    InfeasibleTargetError
        If ``omega`` is below :func:`omega_min`.
    """
    s_par = axial_component(purity)
    return _theta_from_axial(s_par, omega, negative_cos)


def _theta_from_axial(s_par: float, omega: float, negative_cos: bool) -> float:
    bound = omega_min_axial(s_par)
    if omega < bound and s_par * (2.0 + omega**2) - 2.0 < -FEASIBILITY_SLACK:
        raise InfeasibleTargetError(
            f"Omega = {omega:.12g} is below the lower bound "
            f"Omega_min = sqrt(2 sqrt(2(1-P)) / (1 - sqrt(2(1-P)))) = {bound:.12g}"
        )
    if omega == 0.0:
        return np.pi if negative_cos else 0.0
    c = np.sqrt(np.clip(cos2_theta(s_par, omega), 0.0, 1.0))
    return float(np.arccos(-c if negative_cos else c))


@dataclass(frozen=True)
class TargetSpec:
    """Requested target state with its purity."""

    target: np.ndarray
    purity: float = field(init=False)

    def __post_init__(self):
        s = core.check_bloch(self.target)
        object.__setattr__(self, "target", s)
        object.__setattr__(self, "purity", core.purity(s))


@dataclass(frozen=True)
class ParameterSolution:
    params: ProtocolParams
    residual: float


def decide_m_hat(target, angle: float = 0.0) -> np.ndarray:
    """A detector direction whose ellipsoid contains ``target``.

    On its ellipsoid a state of length ``r`` has axial component
    ``1 - sqrt(1 - r^2)``, which fixes the angle between ``m_hat`` and the
    target. The valid directions form a cone around the target; ``angle``
    selects one, with ``angle = 0`` the direction in the plane of the target
    and z on the z side of the target.
    """
    s = core.check_bloch(target)
    r = float(np.linalg.norm(s))
    if r < 1e-15:
        return np.array([0.0, 0.0, 1.0])
    r = min(r, 1.0)
    s_par = r * r / (1.0 + np.sqrt(1.0 - r * r))
    cos_b = min(s_par / r, 1.0)
    sin_b = np.sqrt(max(1.0 - cos_b**2, 0.0))
    u = s / np.linalg.norm(s)
    ref = np.array([0.0, 0.0, 1.0])
    perp = ref - (ref @ u) * u
    if np.linalg.norm(perp) < 1e-8:
        ref = np.array([1.0, 0.0, 0.0])
        perp = ref - (ref @ u) * u
    perp /= np.linalg.norm(perp)
    other = np.cross(u, perp)
    m = cos_b * u + sin_b * (np.cos(angle) * perp + np.sin(angle) * other)
    return m / np.linalg.norm(m)


def solve_parameters(
    spec: TargetSpec,
    omega: float,
    m_hat=None,
    negative_cos: bool = False,
    alpha: float = 1.0,
) -> ParameterSolution:
    """Protocol parameters steering to ``spec.target`` at Zeeman ratio ``omega``.

    Parameters
    ----------
    spec : TargetSpec
    omega : float
        Requested Zeeman ratio; must not be below the bound of :func:`omega_min`.
    m_hat : array_like, optional
        Detector direction. Defaults to :func:`decide_m_hat` of the target.
    negative_cos : bool
        Select the ``cos theta < 0`` branch. Both branches reach the target
        and have identical spectra.

    Raises
    ------
    InfeasibleTargetError
        If the target is not on the ``m_hat`` ellipsoid or ``omega`` is too small.
    """
    s = spec.target
    m = decide_m_hat(s) if m_hat is None else core.unit_vector(m_hat, tol=1e-9)
    res = ellipsoid_residual(s, m)
    if res > ELLIPSOID_TOL:
        raise InfeasibleTargetError(
            f"target is off the steady-state ellipsoid of m_hat (residual {res:.3g})"
        )
    sx, sy, sz = to_detector_frame(s, m)
    theta = _theta_from_axial(sz, omega, negative_cos)
    if np.hypot(sx, sy) < 1e-15 or omega == 0.0:
        phi = 0.0
    else:
        # s_x + i s_y is proportional to exp(i phi) (Omega cos theta - i)
        phi = np.angle(complex(sx, sy)) - np.angle(complex(omega * np.cos(theta), -1.0))
        phi = float(np.mod(phi, 2 * np.pi))
    params = ProtocolParams(omega=float(omega), theta=theta, phi=phi, m_hat=tuple(m), alpha=alpha)
    residual = float(np.linalg.norm(steady_state(params) - s))
    if residual > ACCEPT_RESIDUAL:
        raise NumericalError(f"inverse targeting missed the target by {residual:.3g}")
    return ParameterSolution(params, residual)
