"""Optimal Zeeman ratio and convergence rate as functions of target purity.

The nonzero decay rates always average to 8/3 (units of alpha), so the gap
can never exceed 8/3. Three purity regimes arise:

* low, ``1/2 <= P <= 7/8``: the gap grows monotonically with Omega, so the
  optimum sits at the largest field the caller allows;
* medium, ``7/8 < P <= 127/128``: at a critical Omega all three real parts
  equal -8/3 and the gap reaches its upper bound;
* high, ``127/128 < P <= 1``: the optimum is a second-order exceptional
  point where two real eigenvalues coalesce.

At ``P = 127/128`` the medium-regime optimum becomes a triple root at -8/3.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InfeasibleTargetError, SteeringError
from .liouvillian import ProtocolParams, characteristic_cubic
from .spectral import EP_TOL, SpectrumReport, purity_spectrum, report_from_cubic
from .steering import check_purity, field_angle, omega_min

AVERAGE_RATE = 8.0 / 3.0
LOW_UPPER = Fraction(7, 8)
MEDIUM_UPPER = Fraction(127, 128)
DEFAULT_OMEGA_MAX = 100.0
DEFAULT_PROBE = 1e6


class PurityRegime(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def bounds(self) -> tuple[Fraction, Fraction]:
        """Closed-open description: low is ``[1/2, 7/8]``, medium ``(7/8, 127/128]``,
        high ``(127/128, 1]``."""
        return {
            PurityRegime.LOW: (Fraction(1, 2), LOW_UPPER),
            PurityRegime.MEDIUM: (LOW_UPPER, MEDIUM_UPPER),
            PurityRegime.HIGH: (MEDIUM_UPPER, Fraction(1)),
        }[self]


def classify_regime(purity: float) -> PurityRegime:
    # exact rational comparison: 7/8 and 127/128 are floats exactly
    p = Fraction(check_purity(purity))
    if p <= LOW_UPPER:
        return PurityRegime.LOW
    if p <= MEDIUM_UPPER:
        return PurityRegime.MEDIUM
    return PurityRegime.HIGH


def _root_distance(purity: float) -> float:
    return math.sqrt(2.0 * (1.0 - purity))


def medium_regime_solution(purity: float) -> tuple[float, float, float]:
    """Common real part ``a``, imaginary part ``b`` and Zeeman ratio at which
    all three eigenvalues share the real part -8/3 (positive branches).

    Raises
    ------
    ValueError
        Outside ``(7/8, 127/128]``, where ``b`` or Omega would be imaginary.
    """
    if classify_regime(purity) is not PurityRegime.MEDIUM:
        raise ValueError(f"P = {purity!r} is outside the medium regime (7/8, 127/128]")
    x = _root_distance(purity)
    b = 4.0 / 3.0 * math.sqrt(max(8.0 * x - 1.0, 0.0) / (1.0 - 2.0 * x))
    omega = math.sqrt((26.0 * x - 1.0) / (9.0 * (1.0 - 2.0 * x)))
    return -8.0 / 3.0, b, omega


def high_regime_branches(purity: float) -> dict[str, tuple[float, float, float]]:
    """Both double-root solutions ``(double root, simple root, Omega)``.

    Keys are ``"+"`` and ``"-"``. Omega is NaN where the branch has no real
    Zeeman ratio.
    """
    p = check_purity(purity)
    if Fraction(p) < MEDIUM_UPPER:
        raise ValueError(f"P = {purity!r} is below 127/128; no real double root")
    x = _root_distance(p)
    root = math.sqrt(max(1.0 - 8.0 * x, 0.0))
    out = {}
    for sign, label in ((1.0, "+"), (-1.0, "-")):
        a = (-3.0 + sign * root) / (1.0 + x)
        b = 2.0 * (-1.0 - 4.0 * x - sign * root) / (1.0 + x)
        num = 16.0 * x + 20.0 * p - 21.0 + sign * root**3
        if num < 0.0 and num > -1e-12:
            num = 0.0
        omega = math.sqrt(num / (2.0 * (1.0 + x) ** 2)) if num >= 0.0 else math.nan
        out[label] = (a, b, omega)
    return out


def high_regime_solution(purity: float) -> tuple[float, float, float]:
    """``(a_plus, b_minus, Omega_plus)``: the double root, the simple root and
    the Zeeman ratio of the optimal second-order exceptional point.

    Accepts ``127/128 <= P <= 1``; at the lower end the solution meets the
    triple root of the medium regime.
    """
    return high_regime_branches(purity)["+"]


@dataclass(frozen=True)
class OptimalSteering:
    """Result of :func:`optimize`.

    ``capped`` is true when the optimum sits at the caller's ``omega_max``
    (always in the low regime); ``gamma_sup`` is then the rate approached as
    Omega grows without bound, otherwise it equals ``gamma_opt``.

    In the medium and high regimes ``gamma_opt`` is the closed-form rate
    (8/3 and ``|a_plus|``); ``spectrum`` holds the numerically solved
    eigenvalues at ``omega_opt``, whose gap agrees up to the conditioning of
    the nearly degenerate roots.
    """

    purity: float
    regime: PurityRegime
    omega_opt: float
    gamma_opt: float
    ep_order: int
    oscillatory: bool
    capped: bool
    gamma_sup: float
    omega_min: float
    spectrum: SpectrumReport

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        d["spectrum"] = self.spectrum.to_dict()
        return d


def gap(purity: float, omega: float) -> float:
    return purity_spectrum(purity, omega).gap


def numeric_optimum(
    purity: float, omega_lo: float, omega_hi: float, n_grid: int = 801, xatol: float = 1e-12
) -> tuple[float, float]:
    """Brute-force maximization of the gap over ``[omega_lo, omega_hi]``.

    A grid search (uniform plus geometric spacing, so that optima close to
    the lower end are resolved) is refined by a bounded scalar search in the
    bracketing cells. Returns ``(omega, gap)``.
    """
    if omega_hi <= omega_lo:
        return omega_lo, gap(purity, omega_lo)
    span = omega_hi - omega_lo
    grid = np.unique(
        np.concatenate(
            [
                np.linspace(omega_lo, omega_hi, n_grid),
                omega_lo + np.geomspace(1e-9 * span, span, n_grid),
            ]
        )
    )
    grid = grid[(grid >= omega_lo) & (grid <= omega_hi)]
    values = np.array([gap(purity, w) for w in grid])
    k = int(np.argmax(values))
    best_w, best_g = float(grid[k]), float(values[k])
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if hi > lo:
        res = minimize_scalar(
            lambda w: -gap(purity, w), bounds=(lo, hi), method="bounded",
            options={"xatol": xatol, "maxiter": 500},
        )
        if -res.fun > best_g:
            best_w, best_g = float(res.x), float(-res.fun)
    return best_w, best_g


def optimize(
    purity: float,
    omega_max: float = DEFAULT_OMEGA_MAX,
    probe: float = DEFAULT_PROBE,
    ep_tol: float = EP_TOL,
) -> OptimalSteering:
    """Optimal Zeeman ratio and convergence rate for a target of given purity.

    Parameters
    ----------
    purity : float
        Target purity in ``[1/2, 1]``.
    omega_max : float
        Largest Zeeman ratio available. Caps the low-regime optimum.
    probe : float
        Large Zeeman ratio used to report the low-regime supremum.

    Raises
    ------
    InfeasibleTargetError
        If ``omega_max`` is below the admissible bound (always at ``P = 1/2``).
    """
    regime = classify_regime(purity)
    om_min = omega_min(purity)
    if not omega_max >= om_min:
        raise InfeasibleTargetError(
            f"omega_max = {omega_max:.12g} is below the lower bound "
            f"Omega_min(P) = sqrt(2 sqrt(2(1-P)) / (1 - sqrt(2(1-P)))) = {om_min:.12g}"
        )

    capped = False
    gamma_exact = math.nan
    if regime is PurityRegime.LOW:
        omega_opt, capped = float(omega_max), True
    elif regime is PurityRegime.MEDIUM:
        omega_opt = medium_regime_solution(purity)[2]
        gamma_exact = AVERAGE_RATE
    else:
        # compare both exceptional points by their actual gap
        candidates = [
            (w, abs(a)) for a, _, w in high_regime_branches(purity).values()
            if not math.isnan(w) and om_min <= w <= omega_max
        ]
        if candidates:
            omega_opt, gamma_exact = max(candidates, key=lambda c: gap(purity, c[0]))
        else:
            omega_opt = math.nan

    if math.isnan(omega_opt) or omega_opt > omega_max:
        omega_opt, _ = numeric_optimum(purity, om_min, omega_max)
        capped, gamma_exact = True, math.nan

    rep = purity_spectrum(purity, omega_opt, ep_tol)
    # near the third-order point the roots of the rounded cubic carry errors
    # far above 1e-9, so the closed-form rate is reported where one exists
    gamma = rep.gap if math.isnan(gamma_exact) else float(gamma_exact)
    gamma_sup = purity_spectrum(purity, max(probe, omega_max)).gap if regime is PurityRegime.LOW else gamma
    return OptimalSteering(
        purity=float(purity),
        regime=regime,
        omega_opt=float(omega_opt),
        gamma_opt=gamma,
        ep_order=rep.ep_order,
        oscillatory=rep.oscillatory,
        capped=capped,
        gamma_sup=float(gamma_sup),
        omega_min=float(om_min),
        spectrum=rep,
    )


def rate_curve(purities, omega_max: float = DEFAULT_OMEGA_MAX, ep_tol: float = EP_TOL) -> list[dict]:
    """One row per purity: ``purity, gamma_opt, omega_opt, ep_order, regime``.

    Rows that fail carry NaN values and an ``error`` message instead of
    aborting the whole table.
    """
    purities = np.asarray(purities, dtype=float)
    if purities.ndim != 1:
        raise ValueError("purities must be a one-dimensional sequence")
    rows = []
    for p in purities:
        try:
            opt = optimize(float(p), omega_max, ep_tol=ep_tol)
        except (SteeringError, ValueError) as exc:
            rows.append(
                {"purity": float(p), "gamma_opt": math.nan, "omega_opt": math.nan,
                 "ep_order": None, "regime": None, "error": str(exc)}
            )
            continue
        rows.append(
            {"purity": float(p), "gamma_opt": opt.gamma_opt, "omega_opt": opt.omega_opt,
             "ep_order": opt.ep_order, "regime": opt.regime.value}
        )
    return rows


@dataclass(frozen=True)
class BranchScan:
    """Eigenvalue branches versus Zeeman ratio; ``eigenvalues[k, j]`` is branch
    ``j`` at ``omega[k]``."""

    purity: float
    omega: np.ndarray
    eigenvalues: np.ndarray


def _match(prev: np.ndarray, current: np.ndarray) -> np.ndarray:
    best, best_cost = None, math.inf
    for perm in itertools.permutations(range(3)):
        cand = current[list(perm)]
        cost = float(np.abs(cand - prev).sum())
        # tolerance keeps exact ties on the real-part ordering
        if cost < best_cost - 1e-14:
            best, best_cost = cand, cost
    return best


def _real_ordered(z: np.ndarray) -> np.ndarray:
    return z[np.lexsort((-z.imag, -z.real))]


def branch_scan(purity: float, omega_grid, ep_tol: float = EP_TOL) -> BranchScan:
    """Nonzero eigenvalues along a grid of Zeeman ratios for a fixed purity.

    The field angle at each grid point is recovered from the purity, the
    spectrum computed from the explicit-angle cubic, and consecutive points
    are matched by nearest-neighbour assignment so branches stay continuous.

    Raises
    ------
    InfeasibleTargetError
        If a grid point lies below the admissible bound.
    """
    check_purity(purity)
    omega = np.asarray(omega_grid, dtype=float)
    rows = []
    for w in omega:
        theta = field_angle(purity, float(w))
        roots = report_from_cubic(characteristic_cubic(ProtocolParams(float(w), theta)), ep_tol).eigenvalues
        rows.append(_real_ordered(roots) if not rows else _match(rows[-1], roots))
    return BranchScan(float(purity), omega, np.array(rows).reshape(len(omega), 3))
