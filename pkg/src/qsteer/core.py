"""Two-level linear-algebra substrate: Pauli algebra, Bloch vectors, tensor
products and the partial trace over the detector.

Conventions used throughout the package:

* Pauli matrices follow the physics convention, ``sigma_y = [[0, -i], [i, 0]]``.
* Joint system-detector operators are built with the system index slow and
  the detector index fast, i.e. ``(a ⊗ b)[2i + k, 2j + l] = a[i, j] b[k, l]``.
* Density matrices are vectorized row-major, ``(rho00, rho01, rho10, rho11)``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidStateError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

STATE_TOL = 1e-12
EVOLVED_STATE_TOL = 1e-10
# accepted slack on |s| <= 1 for user-supplied Bloch vectors
BLOCH_NORM_SLACK = 1e-9


def pauli_dot(v) -> np.ndarray:
    """Return ``v · sigma`` for a real 3-vector ``v``."""
    v = np.asarray(v, dtype=float)
    return v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z


def unit_vector(v, tol: float = 1e-12) -> np.ndarray:
    """Validate a unit 3-vector and return it as a float array."""
    v = np.asarray(v, dtype=float).reshape(3)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"expected a unit vector, got norm {np.linalg.norm(v)!r}")
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def check_bloch(s, slack: float = BLOCH_NORM_SLACK) -> np.ndarray:
    """Return ``s`` as a float 3-vector, rejecting ``|s| > 1 + slack``."""
    s = np.asarray(s, dtype=float).reshape(3)
    if not np.all(np.isfinite(s)):
        raise InvalidStateError("Bloch vector has non-finite entries")
    norm = np.linalg.norm(s)
    if norm > 1.0 + slack:
        raise InvalidStateError(f"|s| = {norm:.12g} exceeds 1: unphysical state")
    return s


def check_density(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a 2x2 density matrix (Hermitian, unit trace, PSD)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidStateError(f"expected a 2x2 matrix, got shape {rho.shape}")
    _check_state(rho, tol)
    return rho


def check_joint_state(rho, tol: float = EVOLVED_STATE_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    _check_state(rho, tol)
    return rho


def _check_state(rho: np.ndarray, tol: float) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidStateError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidStateError(f"trace is {np.trace(rho)!r}, expected 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise InvalidStateError("matrix is not positive semidefinite")


def bloch_to_density(s) -> np.ndarray:
    """Density matrix ``(I + s·sigma) / 2`` of the Bloch vector ``s``.

    Raises
    ------
    InvalidStateError
        If ``|s|`` exceeds one by more than ``1e-9``.
    """
    s = check_bloch(s)
    return 0.5 * (IDENTITY + pauli_dot(s))


def density_to_bloch(rho) -> np.ndarray:
    """Bloch vector with components ``tr(rho sigma_k)``."""
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ p).real for p in PAULI])


def purity(s) -> float:
    """Purity ``(1 + s·s) / 2`` of a qubit state with Bloch vector ``s``."""
    s = check_bloch(s)
    return 0.5 * (1.0 + float(s @ s))


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first factor's index slow."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace_detector(rho) -> np.ndarray:
    """Trace out the (fast-index) detector from a 4x4 joint state."""
    rho = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    return np.einsum("ikjk->ij", rho)


def vec(rho) -> np.ndarray:
    """Row-major vectorization ``(rho00, rho01, rho10, rho11)``."""
    return np.asarray(rho, dtype=complex).reshape(-1)


def unvec(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    n = int(round(np.sqrt(v.size)))
    return v.reshape(n, n)


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``."""
    d = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    d = 0.5 * (d + d.conj().T)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(d)).sum())


def rotation_to(m_hat) -> tuple[np.ndarray, np.ndarray]:
    """Canonical frame rotation carrying the z axis onto ``m_hat``.

    The rotation is the shortest one about ``z × m_hat``; for ``m_hat = -z``
    it is a half turn about x.

    Returns
    -------
    R : ndarray, shape (3, 3)
        Orthogonal matrix with ``R @ [0, 0, 1] == m_hat``.
    U : ndarray, shape (2, 2)
        SU(2) element with ``U (v·sigma) U^† = (R v)·sigma``.
    """
    m = unit_vector(m_hat)
    axis = np.cross([0.0, 0.0, 1.0], m)
    sin_b = np.linalg.norm(axis)
    angle = float(np.arctan2(sin_b, m[2]))
    if sin_b < 1e-15:
        axis = np.array([1.0, 0.0, 0.0])
    else:
        axis = axis / sin_b
    U = np.cos(angle / 2) * IDENTITY - 1j * np.sin(angle / 2) * pauli_dot(axis)
    R = np.array(
        [[0.5 * np.trace(pi @ U @ pj @ U.conj().T).real for pj in PAULI] for pi in PAULI]
    )
    return R, U


def spherical_unit(theta: float, phi: float) -> np.ndarray:
    """Unit vector ``(cos φ sin θ, sin φ sin θ, cos θ)``."""
    return np.array(
        [np.cos(phi) * np.sin(theta), np.sin(phi) * np.sin(theta), np.cos(theta)]
    )
