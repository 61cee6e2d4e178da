"""Steering Liouvillian of a driven, blindly measured qubit.

The generator is

    L[rho] = i [rho, H_s] - 2 alpha (L^† L rho + rho L^† L - 2 L rho L^†),

with ``H_s = omega n·sigma``, ``omega = Omega * alpha`` and the jump operator
``L = |m+><m-|`` built from the eigenstates of ``m·sigma``. It is available
both as an action on 2x2 matrices (:func:`lindblad_action`) and as a 4x4
matrix on row-major vectorized density matrices (:func:`build_matrix`); the
two are built independently and cross-checked in the tests.

Field angles ``(theta, phi)`` are measured in the detector frame: for a
detector direction ``m_hat`` other than z, the whole protocol (Hamiltonian
and jump operator) is rotated by the canonical rotation of
:func:`qsteer.core.rotation_to`. Spectra therefore do not depend on
``m_hat``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import core
from .errors import DegenerateSteadyStateError, UnstableSpectrumError

Z_HAT = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ProtocolParams:
    """Protocol parameters.

    Attributes
    ----------
    omega : float
        Zeeman ratio ``Omega = omega / alpha`` (dimensionless, >= 0).
    theta, phi : float
        Polar and azimuthal angle of the field direction in the detector frame.
    m_hat : tuple of float
        Detector initialization direction (unit vector).
    alpha : float
        Measurement strength (inverse time, > 0).
    """

    omega: float
    theta: float = 0.0
    phi: float = 0.0
    m_hat: tuple = Z_HAT
    alpha: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"measurement strength alpha must be > 0, got {self.alpha}")
        if not self.omega >= 0:
            raise ValueError(f"Zeeman ratio must be >= 0, got {self.omega}")
        m = core.unit_vector(self.m_hat, tol=1e-9)
        object.__setattr__(self, "m_hat", tuple(float(c) for c in m / np.linalg.norm(m)))

    @property
    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        return core.rotation_to(self.m_hat)


class CubicCoefficients(NamedTuple):
    """Monic cubic ``x^3 + c2 x^2 + c1 x + c0`` in rescaled units ``x = lambda / alpha``."""

    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        return ((x + self.c2) * x + self.c1) * x + self.c0


def field_direction(params: ProtocolParams) -> np.ndarray:
    """Lab-frame field direction ``n_hat``."""
    R, _ = params.frame
    return R @ core.spherical_unit(params.theta, params.phi)


def system_hamiltonian(params: ProtocolParams) -> np.ndarray:
    return params.omega * params.alpha * core.pauli_dot(field_direction(params))


def jump_operator(m_hat) -> np.ndarray:
    """``|m+><m-|`` from the eigenvectors of ``m·sigma``."""
    _, vecs = np.linalg.eigh(core.pauli_dot(core.unit_vector(m_hat, tol=1e-9)))
    minus, plus = vecs[:, 0], vecs[:, 1]
    return np.outer(plus, minus.conj())


def lindblad_action(params: ProtocolParams, rho) -> np.ndarray:
    """Time derivative ``d rho / dt`` of the system density matrix."""
    rho = np.asarray(rho, dtype=complex)
    H = system_hamiltonian(params)
    L = jump_operator(params.m_hat)
    LdL = L.conj().T @ L
    return 1j * (rho @ H - H @ rho) - 2 * params.alpha * (
        LdL @ rho + rho @ LdL - 2 * L @ rho @ L.conj().T
    )


def zframe_matrix(params: ProtocolParams) -> np.ndarray:
    """Liouvillian matrix for a detector along z, in units of 1 (times alpha)."""
    om, th, ph = params.omega, params.theta, params.phi
    eta = 1j * np.exp(1j * ph) * om * np.sin(th)
    eta_c = np.conj(eta)
    ic = 1j * om * np.cos(th)
    return params.alpha * np.array(
        [
            [0, eta, eta_c, 4],
            [-eta_c, -2 * (ic + 1), 0, eta_c],
            [-eta, 0, 2 * (ic - 1), eta],
            [0, -eta, -eta_c, -4],
        ],
        dtype=complex,
    )


def build_matrix(params: ProtocolParams) -> np.ndarray:
    """4x4 Liouvillian acting on ``vec(rho) = (rho00, rho01, rho10, rho11)``.

    For a detector direction other than z the z-frame matrix is conjugated by
    the superoperator ``rho -> U rho U^†`` of the frame rotation.
    """
    M = zframe_matrix(params)
    if params.m_hat == Z_HAT:
        return M
    _, U = params.frame
    S = np.kron(U, U.conj())
    return S @ M @ S.conj().T


def characteristic_cubic(params: ProtocolParams) -> CubicCoefficients:
    """Cubic whose roots are the nonzero eigenvalues divided by alpha."""
    om2 = params.omega**2
    return CubicCoefficients(
        8.0, 4.0 * (5.0 + om2), 8.0 * (2.0 + om2 * (1.0 + np.cos(params.theta) ** 2))
    )


def cubic_from_purity(purity: float, omega: float) -> CubicCoefficients:
    """Characteristic cubic with ``cos^2 theta`` eliminated in favour of the
    target purity (the field angle is whatever steers to that purity)."""
    x = np.sqrt(2.0 * (1.0 - purity))
    om2 = omega**2
    return CubicCoefficients(8.0, 4.0 * (5.0 + om2), 16.0 * (1.0 + om2) / (1.0 + x))


def steady_state_zframe(omega: float, theta: float, phi: float) -> np.ndarray:
    """Closed-form steady Bloch vector for a z-directed detector."""
    c, s = np.cos(theta), np.sin(theta)
    denom = 2.0 + omega**2 * (c**2 + 1.0)
    return np.array(
        [
            2 * omega * s * (omega * c * np.cos(phi) + np.sin(phi)) / denom,
            2 * omega * s * (omega * c * np.sin(phi) - np.cos(phi)) / denom,
            2 * (1 + omega**2 * c**2) / denom,
        ]
    )


def steady_state(params: ProtocolParams) -> np.ndarray:
    """Closed-form steady Bloch vector, rotated into the lab frame."""
    R, _ = params.frame
    return R @ steady_state_zframe(params.omega, params.theta, params.phi)


def nullspace_steady_state(params: ProtocolParams, tol: float = 1e-10) -> np.ndarray:
    """Steady state from a linear solve of ``M vec(rho) = 0``, ``tr rho = 1``.

    The first row of ``M`` is linearly dependent on the last (trace
    preservation) and is replaced by the trace constraint.

    Raises
    ------
    DegenerateSteadyStateError
        If the zero eigenspace of ``M`` is not one-dimensional.
    """
    M = build_matrix(params)
    sv = np.linalg.svd(M, compute_uv=False)
    n_zero = int(np.sum(sv < tol * max(sv[0], 1.0)))
    if n_zero != 1:
        raise DegenerateSteadyStateError(f"Liouvillian has {n_zero} zero modes, expected 1")
    A = M.copy()
    A[0] = [1, 0, 0, 1]
    b = np.array([1, 0, 0, 0], dtype=complex)
    rho = core.unvec(np.linalg.solve(A, b))
    return core.density_to_bloch(0.5 * (rho + rho.conj().T))


# --- general N-level Lindblad generators ---------------------------------


@dataclass(frozen=True)
class GeneralLindblad:
    """``L[rho] = i[rho, H] - sum_j g_j (L_j^† L_j rho + rho L_j^† L_j - 2 L_j rho L_j^†)``.

    ``rates`` holds the nonnegative prefactors ``g_j`` (default 1). Keeping
    them apart from the operators avoids rounding in ``sqrt(g)^2``.
    """

    hamiltonian: np.ndarray
    jump_ops: Sequence[np.ndarray] = field(default_factory=tuple)
    rates: Sequence[float] | None = None

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 2:
            raise ValueError(f"Hamiltonian must be square with N >= 2, got {H.shape}")
        if np.max(np.abs(H - H.conj().T)) > 1e-12 * max(1.0, np.abs(H).max()):
            raise ValueError("Hamiltonian is not Hermitian")
        ops = tuple(np.asarray(L, dtype=complex) for L in self.jump_ops)
        for L in ops:
            if L.shape != H.shape:
                raise ValueError(f"jump operator shape {L.shape} does not match {H.shape}")
        rates = (1.0,) * len(ops) if self.rates is None else tuple(float(g) for g in self.rates)
        if len(rates) != len(ops):
            raise ValueError(f"{len(rates)} rates for {len(ops)} jump operators")
        if any(not g >= 0 for g in rates):
            raise ValueError("rates must be nonnegative")
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(self, "jump_ops", ops)
        object.__setattr__(self, "rates", rates)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        H = self.hamiltonian
        out = 1j * (rho @ H - H @ rho)
        for g, L in zip(self.rates, self.jump_ops):
            LdL = L.conj().T @ L
            out = out - g * (LdL @ rho + rho @ LdL - 2 * L @ rho @ L.conj().T)
        return out

    def matrix(self) -> np.ndarray:
        """Dense ``N^2 x N^2`` matrix on row-major vectorized operators."""
        n = self.dim
        cols = []
        for k in range(n * n):
            e = np.zeros(n * n, dtype=complex)
            e[k] = 1.0
            cols.append(self(e.reshape(n, n)).reshape(-1))
        return np.array(cols).T


def protocol_lindblad(params: ProtocolParams) -> GeneralLindblad:
    """The steering protocol written as a :class:`GeneralLindblad`."""
    return GeneralLindblad(system_hamiltonian(params), (jump_operator(params.m_hat),), (2 * params.alpha,))


def super_trace(lindblad: GeneralLindblad) -> complex:
    """Superoperator trace ``sum_ij tr(e_ij^† L[e_ij])``."""
    n = lindblad.dim
    total = 0j
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            total += lindblad(e)[i, j]
    return total


def average_rate(lindblad: GeneralLindblad, tol: float = 1e-9) -> float:
    """Mean decay rate ``-Re(Tr L) / (N^2 - 1)`` of the nonzero modes.

    Raises
    ------
    UnstableSpectrumError
        If the generator has an eigenvalue with positive real part, in which
        case the trace no longer measures an average decay rate.
    """
    eig = np.linalg.eigvals(lindblad.matrix())
    scale = max(1.0, float(np.abs(eig).max()))
    if eig.real.max() > tol * scale:
        raise UnstableSpectrumError(
            f"eigenvalue with positive real part {eig.real.max():.3g}"
        )
    n = lindblad.dim
    return -super_trace(lindblad).real / (n * n - 1)
