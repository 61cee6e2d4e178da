"""Closed-form spectrum of the steering Liouvillian.

The three nonzero eigenvalues are the roots of a real monic cubic (see
:func:`qsteer.liouvillian.characteristic_cubic`). Roots are obtained with
the trigonometric method when all three are real and with Cardano's
formula otherwise, so complex pairs are exact conjugates.

Coalescing roots are ill-conditioned: a rounding error ``eps`` in the
coefficients splits a double root by ``O(eps^(1/2))`` and a triple root by
``O(eps^(1/3))``. :func:`solve_cubic` therefore treats a depressed-cubic
discriminant (or, for the triple root, the depressed coefficients) that is
indistinguishable from rounding noise as exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouvillian import CubicCoefficients, ProtocolParams, characteristic_cubic, cubic_from_purity

EP_TOL = 1e-7
# multiple of machine epsilon below which a cancellation result is noise
DEGENERACY_TOL = 64 * np.finfo(float).eps

THREE_REAL = "three-real"
CONJUGATE_PAIR = "one-real-plus-conjugate-pair"


@dataclass(frozen=True)
class SpectrumReport:
    """Nonzero eigenvalues (units of alpha) and derived quantities.

    ``gap`` is the smallest magnitude of the real parts, which sets the
    slowest convergence rate towards the steady state.
    """

    eigenvalues: np.ndarray
    gap: float
    structure: str
    ep_order: int

    @property
    def oscillatory(self) -> bool:
        return self.structure == CONJUGATE_PAIR

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "gap": self.gap,
            "structure": self.structure,
            "ep_order": self.ep_order,
        }


def _as_coeffs(coeffs) -> CubicCoefficients:
    return coeffs if isinstance(coeffs, CubicCoefficients) else CubicCoefficients(*coeffs)


def discriminant(coeffs) -> float:
    """Discriminant of ``x^3 + c2 x^2 + c1 x + c0``.

    Positive for three distinct real roots, negative when a complex pair is
    present and zero for a repeated root.
    """
    b, c, d = _as_coeffs(coeffs)
    return 18 * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * c**3 - 27 * d**2


def depressed(coeffs) -> tuple[float, float, float]:
    """Return ``(shift, p, q)`` with ``x = t - shift`` and ``t^3 + p t + q = 0``."""
    b, c, d = _as_coeffs(coeffs)
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    return shift, p, q


def solve_cubic(coeffs, degeneracy_tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Roots of a real monic cubic in closed form.

    Parameters
    ----------
    coeffs : CubicCoefficients or sequence of three floats
        ``(c2, c1, c0)`` of ``x^3 + c2 x^2 + c1 x + c0``.
    degeneracy_tol : float
        Relative coefficient uncertainty. Depressed coefficients or a
        discriminant smaller than the effect of perturbing the coefficients
        by this amount are treated as exact zeros, so the returned repeated
        roots are exact roots of a cubic within that perturbation. Set to 0
        to disable snapping.

    Returns
    -------
    ndarray of complex, shape (3,)
        Three real roots in decreasing order, or the real root followed by
        the complex pair (positive imaginary part first).
    """
    b, c, d = _as_coeffs(coeffs)
    shift, p, q = depressed((b, c, d))
    p_noise = degeneracy_tol * (abs(c) + b * b / 3.0)
    q_noise = degeneracy_tol * (abs(2.0 * b**3 / 27.0) + abs(b * c / 3.0) + abs(d))

    if abs(p) <= p_noise and abs(q) <= q_noise:
        t = np.zeros(3, dtype=complex)
        return t - shift

    h = (q / 2.0) ** 2 + (p / 3.0) ** 3
    # first-order propagation of the coefficient rounding into h
    h_noise = abs(q) / 2.0 * q_noise + (p / 3.0) ** 2 * p_noise
    if abs(h) <= h_noise:
        # double root; p != 0 here. It is also a root of the derivative,
        # which gives it without the cancellation in q / p.
        guess = -1.5 * q / p - shift
        sq = np.sqrt(max(b * b - 3.0 * c, 0.0))
        double = min(((-b + sq) / 3.0, (-b - sq) / 3.0), key=lambda a: abs(a - guess))
        single = -b - 2.0 * double
        roots = np.array([single, double, double], dtype=complex)
        order = np.argsort(-roots.real, kind="stable")
        return roots[order]

    if h < 0:
        r = 2.0 * np.sqrt(-p / 3.0)
        arg = np.clip(3.0 * q / (p * r), -1.0, 1.0)
        base = np.arccos(arg) / 3.0
        t = r * np.cos(base - 2.0 * np.pi * np.arange(3) / 3.0)
        roots = np.sort(_polish_real(t - shift, (b, c, d)))[::-1]
        return roots.astype(complex)

    sq = np.sqrt(h)
    # pick the sign that avoids cancellation
    w = np.cbrt(-q / 2.0 - np.copysign(sq, q))
    v = -p / (3.0 * w) if w != 0.0 else 0.0
    real_root = _polish_real(np.array([w + v - shift]), (b, c, d))[0]
    pair = complex(-(w + v) / 2.0 - shift, np.sqrt(3.0) / 2.0 * abs(w - v))
    pair = _polish_complex(pair, (b, c, d))
    if pair.imag < 0:
        pair = pair.conjugate()
    return np.array([real_root, pair, pair.conjugate()], dtype=complex)


def _newton_step(x, b, c, d):
    f = ((x + b) * x + c) * x + d
    fp = (3 * x + 2 * b) * x + c
    return f, fp


def _polish(x, bcd, dtype):
    # Newton in extended precision: the rounded result is then close to the
    # correctly rounded root
    b, c, d = (np.longdouble(v) for v in bcd)
    x = dtype(x)
    f, fp = _newton_step(x, b, c, d)
    for _ in range(3):
        if fp == 0:
            break
        trial = x - f / fp
        f_trial, fp_trial = _newton_step(trial, b, c, d)
        if abs(f_trial) >= abs(f):
            break
        x, f, fp = trial, f_trial, fp_trial
    return x


def _polish_real(x: np.ndarray, bcd) -> np.ndarray:
    return np.array([float(_polish(xk, bcd, np.longdouble)) for xk in x])


def _polish_complex(z: complex, bcd) -> complex:
    return complex(_polish(z, bcd, np.clongdouble))


def detect_ep(eigenvalues, tol: float = EP_TOL) -> int:
    """Coalescence order of three eigenvalues.

    Returns 3 if all pairwise distances are below ``tol``, 2 if at least one
    pair is, and 0 otherwise. Equal real parts alone do not count.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.asarray(eigenvalues, dtype=complex).reshape(3)
    close = [abs(z[i] - z[j]) < tol for i, j in ((0, 1), (0, 2), (1, 2))]
    if all(close):
        return 3
    if any(close):
        return 2
    return 0


def report_from_cubic(coeffs, ep_tol: float = EP_TOL) -> SpectrumReport:
    roots = solve_cubic(coeffs)
    structure = CONJUGATE_PAIR if np.any(roots.imag != 0.0) else THREE_REAL
    return SpectrumReport(
        eigenvalues=roots,
        gap=float(np.min(np.abs(roots.real))),
        structure=structure,
        ep_order=detect_ep(roots, ep_tol),
    )


def spectrum(params: ProtocolParams, ep_tol: float = EP_TOL) -> SpectrumReport:
    """Spectrum report for explicit protocol parameters."""
    return report_from_cubic(characteristic_cubic(params), ep_tol)


def purity_spectrum(purity: float, omega: float, ep_tol: float = EP_TOL) -> SpectrumReport:
    """Spectrum report for a target of given purity steered at Zeeman ratio ``omega``."""
    return report_from_cubic(cubic_from_purity(purity, omega), ep_tol)
