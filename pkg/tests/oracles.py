"""Reference implementations that do not share code with the package.

Everything here is written from the definitions: Kronecker-product
vectorization of the master equation, companion-matrix and multiprecision
polynomial roots, the exact solution without drive, and a few values worked
out once at 50 digits (see ``FROZEN``).
"""

from __future__ import annotations

import itertools

import mpmath as mp
import numpy as np
from scipy import linalg

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def kron_by_index(a, b):
    a, b = np.asarray(a), np.asarray(b)
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n * m, n * m), dtype=complex)
    for i, j, k, l in itertools.product(range(n), range(n), range(m), range(m)):
        out[m * i + k, m * j + l] = a[i, j] * b[k, l]
    return out


def dense_lindblad(H, jumps):
    """Matrix of ``i[rho, H] - sum (L^†L rho + rho L^†L - 2 L rho L^†)`` on
    row-major ``vec``, using ``vec(A X B) = (A kron B^T) vec(X)``."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    eye = np.eye(n)
    M = 1j * (np.kron(eye, H.T) - np.kron(H, eye))
    for L in jumps:
        LdL = L.conj().T @ L
        M -= np.kron(LdL, eye) + np.kron(eye, LdL.T) - 2 * np.kron(L, L.conj())
    return M


def protocol_dense(omega, theta, phi, m_hat, alpha=1.0):
    """The steering generator built from scratch in the lab frame."""
    m = np.asarray(m_hat, dtype=float)
    m = m / np.linalg.norm(m)
    # field direction: angles are measured in a frame whose z axis is m
    z = np.array([0.0, 0.0, 1.0])
    n_det = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    R = rotation_matrix(z, m)
    n = R @ n_det
    H = omega * alpha * (n[0] * SX + n[1] * SY + n[2] * SZ)
    ms = m[0] * SX + m[1] * SY + m[2] * SZ
    w, v = np.linalg.eigh(ms)
    L = np.outer(v[:, 1], v[:, 0].conj())
    return dense_lindblad(H, [np.sqrt(2 * alpha) * L]), H, L


def rotation_matrix(a, b):
    """Proper rotation taking unit vector ``a`` to ``b`` along the shortest arc
    (half turn about x for antiparallel vectors)."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    v = np.cross(a, b)
    c = float(a @ b)
    if np.linalg.norm(v) < 1e-15:
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + K + K @ K / (1 + c)


def bloch_of(rho):
    return np.real([np.trace(rho @ s) for s in (SX, SY, SZ)])


def nullspace_bloch(M):
    ns = linalg.null_space(M, rcond=1e-10)
    assert ns.shape[1] == 1
    rho = ns[:, 0].reshape(2, 2)
    rho = rho / np.trace(rho)
    return bloch_of(rho)


def companion_roots(c2, c1, c0):
    C = np.array([[-c2, -c1, -c0], [1, 0, 0], [0, 1, 0]], dtype=float)
    return np.linalg.eigvals(C)


def mp_roots(c2, c1, c0, dps=50):
    with mp.workdps(dps):
        r = mp.polyroots([1, c2, c1, c0], maxsteps=400, extraprec=400)
        return [complex(z) for z in r]


def mp_residual(c2, c1, c0, z, dps=60):
    with mp.workdps(dps):
        x = mp.mpc(z.real, z.imag)
        return float(abs(((x + c2) * x + c1) * x + c0))


def ld_residual(c2, c1, c0, z):
    """``|C(z)|`` evaluated in extended precision (vectorized); the evaluation
    error is ~1e-19 times the size of the terms, far below float64 rounding."""
    x = np.asarray(np.real(z), dtype=np.clongdouble)
    x = x + np.clongdouble(1j) * np.asarray(np.imag(z), dtype=np.longdouble)
    c2, c1, c0 = (np.asarray(c, dtype=np.longdouble) for c in (c2, c1, c0))
    return np.abs(((x + c2) * x + c1) * x + c0)


def nonzero_eigs(M, tol=1e-9):
    """Eigenvalues of a 4x4 generator with the zero mode removed by magnitude
    (only for test comparisons)."""
    ev = np.linalg.eigvals(M)
    k = int(np.argmin(np.abs(ev)))
    assert abs(ev[k]) < tol * max(1.0, np.abs(ev).max())
    return np.delete(ev, k)


def multiset_distance(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    return min(
        float(np.max(np.abs(a - b[list(p)]))) for p in itertools.permutations(range(len(b)))
    )


def undriven_solution(rho0, t, alpha=1.0):
    """Exact solution with Omega = 0 and a z detector: populations relax at
    ``4 alpha`` into |0>, coherences at ``2 alpha``."""
    rho0 = np.asarray(rho0, dtype=complex)
    e4, e2 = np.exp(-4 * alpha * t), np.exp(-2 * alpha * t)
    return np.array(
        [[1 - rho0[1, 1] * e4, rho0[0, 1] * e2], [rho0[1, 0] * e2, rho0[1, 1] * e4]]
    )


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_ball(rng):
    return random_unit(rng) * rng.uniform() ** (1 / 3)


def random_density(rng, n=2):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


# Values computed once with mpmath at 50 digits from the characteristic
# polynomial alone (cubic roots, or the double-root system C = C' = 0);
# they do not rely on any closed-form regime formula.
FROZEN = {
    # gap at Omega = 100 and Omega = 10, and 4 / (1 + sqrt(2(1-P)))
    "low": {
        0.6: (2.1112679102081326, 2.0926116405759024, 2.1114561800016824),
        0.7: (2.2538615241926757, 2.2368208565292463, 2.2540333075851662),
        0.8: (2.4501493340815230, 2.4355413475493706, 2.4502964531088276),
    },
    # Omega and imaginary part b where all real parts equal -8/3
    "medium": {
        0.9: (3.3444087911350881, 6.5883948967524186),
        0.95: (1.4775772452330168, 2.7202214485567586),
    },
    # double root and Omega of the optimal second-order exceptional point
    "high": {
        0.995: (-2.3207149131818564, 0.49352950421319508),
        0.999: (-2.1044922540128225, 0.31032769881419277),
    },
}
