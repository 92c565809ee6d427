"""Closed-form large-deviation functions of the mean radial displacement.

Everything here is a pure function of the tilt ``s`` (or of the displacement
``x``). The confining potential is fixed to ``V_s(r) = r**2/2 + s*r`` with unit
length and charge.

Conventions
-----------
``J(s)``
    scaled cumulant generating function, ``-(1/(beta N^2)) log <exp(-beta s N^2 Delta_N)>``
    in the limit of large ``N``; independent of ``beta``.
``x(s)``
    mean displacement of the tilted equilibrium measure, ``x(s) = J'(s)``.
``Psi(x)``
    rate function, ``Psi(x) = J(s) - s x`` at ``x = x(s)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize

from ._quad import quad_checked
from .errors import ConvergenceError

__all__ = [
    "EquilibriumMeasure",
    "CumulantLeading",
    "LdpCurve",
    "TailAsymptote",
    "support_radii",
    "radial_density",
    "planar_density",
    "potential",
    "mean_displacement",
    "cumulant_gf",
    "cumulant_gf_derivative",
    "minimal_energy",
    "tilt_inverse",
    "rate_function",
    "tail_exponent",
    "leading_cumulants",
    "tabulate_cgf",
    "tabulate_rate",
    "GROUND_STATE_ENERGY",
    "TYPICAL_DISPLACEMENT",
]

#: mean-field energy of the untilted plasma (circular law)
GROUND_STATE_ENERGY = 3.0 / 8.0
#: x(0), the typical value of the mean radial displacement
TYPICAL_DISPLACEMENT = 2.0 / 3.0

ENERGY_TOL = 1e-10
RATE_TOL = 1e-9
INVERSE_RTOL = 1e-12


def _finite(value, name):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _outer_radius(s):
    # root of R**2 + s R - 1 = 0; the two forms avoid cancellation on either side
    if s > 0:
        return 2.0 / (math.sqrt(s * s + 4.0) + s)
    return 0.5 * (math.sqrt(s * s + 4.0) - s)


@dataclass(frozen=True)
class EquilibriumMeasure:
    """Minimiser of the mean-field energy for the potential ``V_s``.

    A rotation-invariant measure with radial marginal ``2r + s`` on
    ``[r0, R0]``: a disk for ``s >= 0`` and an annulus for ``s < 0``.
    """

    s: float
    r0: float
    R0: float

    @property
    def topology(self) -> str:
        return "disk" if self.r0 == 0.0 else "annulus"

    def marginal(self, r):
        return radial_density(self, r)

    def planar(self, r):
        return planar_density(self, r)

    def mean(self) -> float:
        return mean_displacement(self.s)


def support_radii(s: float) -> EquilibriumMeasure:
    """Inner and outer radius of the support of the tilted equilibrium measure.

    Parameters
    ----------
    s : float
        Tilt. Any finite real value.

    Returns
    -------
    EquilibriumMeasure
        With ``r0 = max(0, -s)`` and ``R0 = (sqrt(s**2 + 4) - s)/2``.
    """
    s = _finite(s, "s")
    return EquilibriumMeasure(s=s, r0=max(0.0, -s), R0=_outer_radius(s))


def radial_density(measure: EquilibriumMeasure, r):
    """Radial marginal ``2r + s`` restricted to ``[r0, R0]``; accepts arrays."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    inside = (r >= measure.r0) & (r <= measure.R0)
    out = np.where(inside, 2.0 * r + measure.s, 0.0)
    return out if out.ndim else float(out)


def planar_density(measure: EquilibriumMeasure, r):
    """Two-dimensional density, the radial marginal divided by ``2 pi r``.

    At the origin the value is the limit ``r -> 0``: ``1/pi`` for ``s = 0``
    and ``inf`` for ``s > 0`` (integrable ``s/(2 pi r)`` cusp); ``0`` for an
    annulus.
    """
    r = np.asarray(r, dtype=float)
    marg = np.asarray(radial_density(measure, r))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = marg / (2.0 * np.pi * r)
    at_origin = r == 0.0
    if np.any(at_origin):
        if measure.r0 > 0.0:
            origin = 0.0
        else:
            origin = 1.0 / np.pi if measure.s == 0.0 else np.inf
        out = np.where(at_origin, origin, out)
    return out if out.ndim else float(out)


def potential(r, s):
    """Tilted confining potential ``V_s(r) = r**2/2 + s r``."""
    return 0.5 * r * r + s * r


def _x_scalar(s):
    if s > 0:
        # the closed form cancels catastrophically for large positive s;
        # use the first moment of the marginal on the disk instead
        R = _outer_radius(s)
        return 2.0 * R ** 3 / 3.0 + 0.5 * s * R * R
    q = s * s + 4.0
    # (s^2+4)^{3/2} - |s|^3 rationalised
    d = (12.0 * s ** 4 + 48.0 * s * s + 64.0) / (q ** 1.5 + abs(s) ** 3)
    return (d - 6.0 * s) / 12.0


def mean_displacement(s):
    """``x(s) = [(s^2+4)^{3/2} - 6 s - |s|^3] / 12``, strictly decreasing in ``s``.

    Evaluated in a cancellation-free form; accepts scalars or arrays.
    """
    if np.ndim(s) == 0:
        return _x_scalar(_finite(s, "s"))
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("s must be finite")
    return np.array([_x_scalar(v) for v in s.ravel()]).reshape(s.shape)


def _cgf_scalar(s):
    if abs(s) <= 1.0:
        q = math.sqrt(s * s + 4.0)
        return 0.5 * math.asinh(0.5 * s) - 0.25 * s * s + s / 48.0 * ((s * s + 10.0) * q - abs(s) ** 3)
    # With R = R0(s) one has s = 1/R - R and sqrt(s^2+4) = R + 1/R, which turns
    # the polynomial part into a cancellation-free expression in R.
    R = _outer_radius(s)
    R2 = R * R
    if s >= 0:
        poly = (9.0 - 8.0 * R2 - R2 * R2) / 24.0
    else:
        a2 = 1.0 / R2
        poly = (15.0 - 12.0 * R2 - 4.0 * a2 + a2 * a2) / 24.0
    return 0.5 * math.asinh(0.5 * s) + poly


def cumulant_gf(s):
    """Scaled cumulant generating function ``J(s)``.

    ``J(s) = asinh(s/2)/2 - s^2/4 + (s/48) [(s^2+10) sqrt(s^2+4) - |s|^3]``

    ``J(0) = 0`` and ``J`` is strictly concave. The polynomial part is
    evaluated through the outer radius ``R0(s)`` for ``|s| > 1``, which keeps
    full relative accuracy at large ``|s|`` where the written form cancels.
    """
    if np.ndim(s) == 0:
        return _cgf_scalar(_finite(s, "s"))
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("s must be finite")
    return np.array([_cgf_scalar(v) for v in s.ravel()]).reshape(s.shape)


def _side_sign(s, order, side):
    if side not in ("auto", "left", "right"):
        raise ValueError(f"side must be 'auto', 'left' or 'right', got {side!r}")
    if s > 0:
        return 1.0
    if s < 0:
        return -1.0
    if side == "auto":
        if order == 4:
            raise ValueError("the fourth derivative of J jumps at s=0; pass side='left' or side='right'")
        return 1.0  # orders 1-3 are continuous at the origin
    return 1.0 if side == "right" else -1.0


def cumulant_gf_derivative(s: float, order: int, side: str = "auto") -> float:
    """Derivative ``d^n J / ds^n`` for ``n = 1..4``.

    Obtained by differentiating ``x(s)`` with ``sign(s)`` frozen on each side
    of the origin. ``side`` only matters at ``s == 0``, where it is mandatory
    for ``order=4``: ``J''''(0-) = 1/2`` and ``J''''(0+) = -1/2``.
    """
    s = _finite(s, "s")
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1, 2, 3 or 4, got {order!r}")
    sig = _side_sign(s, order, side)
    if order == 1:
        return _x_scalar(s)
    q = s * s + 4.0
    if order == 2:
        return (3.0 * s * math.sqrt(q) - 6.0 - 3.0 * sig * s * s) / 12.0
    if order == 3:
        return (3.0 * (2.0 * s * s + 4.0) / math.sqrt(q) - 6.0 * sig * s) / 12.0
    return ((6.0 * s ** 3 + 36.0 * s) / q ** 1.5 - 6.0 * sig) / 12.0


def minimal_energy(s: float, tol: float = ENERGY_TOL) -> float:
    """Mean-field energy of the tilted equilibrium measure.

    ``H_s = [ int V_s dmu + V_s(R0) - log R0 ] / 2``, with the first term
    integrated by adaptive quadrature over the radial marginal. Raises
    :class:`ConvergenceError` if the quadrature error exceeds ``tol``.
    """
    m = support_radii(s)
    val, _ = quad_checked(lambda r: (2.0 * r + m.s) * potential(r, m.s), m.r0, m.R0,
                          epsabs=tol, epsrel=0.0, what="potential energy")
    return 0.5 * (val + potential(m.R0, m.s) - math.log(m.R0))


def _tilt_inverse_scalar(x):
    x = _finite(x, "x")
    if x <= 0.0:
        raise ValueError(f"x must be positive, got {x!r}")
    if x == TYPICAL_DISPLACEMENT:
        return 0.0

    def f(s):
        return _x_scalar(s) - x

    # x(s) > -s on the annulus side and x(s) <= R0(s) <= 1/s on the disk side
    if x > TYPICAL_DISPLACEMENT:
        lo, hi = -x, 0.0
    else:
        lo, hi = 0.0, 1.0 / x
    s = optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    # safeguarded Newton polish inside the bracket
    for _ in range(3):
        slope = cumulant_gf_derivative(s, 2)
        step = f(s) / slope
        cand = s - step
        if not lo <= cand <= hi or abs(f(cand)) > abs(f(s)):
            break
        s = cand
    resid = abs(f(s))
    target = INVERSE_RTOL * max(1.0, x)
    if resid > target:
        raise ConvergenceError(f"tilt_inverse({x}) failed", resid, target)
    return s


def tilt_inverse(x):
    """Unique ``s`` with ``mean_displacement(s) == x``; strictly decreasing in ``x``.

    Defined for ``x > 0`` only. Solved by bracketing plus Brent's method with
    a Newton polish; residual ``<= 1e-12 * max(1, x)``.
    """
    if np.ndim(x) == 0:
        return _tilt_inverse_scalar(x)
    x = np.asarray(x, dtype=float)
    return np.array([_tilt_inverse_scalar(v) for v in x.ravel()]).reshape(x.shape)


def _rate_scalar(x, tol):
    x = _finite(x, "x")
    if x <= 0.0:
        raise ValueError(f"rate function is defined for x > 0 only, got {x!r}")
    if x == TYPICAL_DISPLACEMENT:
        return 0.0
    val, _ = quad_checked(_tilt_inverse_scalar, TYPICAL_DISPLACEMENT, x, epsabs=tol, epsrel=0.0,
                          limit=500, what="rate function")
    return -val


def rate_function(x, tol: float = RATE_TOL):
    """Rate function ``Psi(x) = -int_{2/3}^x s(x') dx'``.

    ``s(x')`` is :func:`tilt_inverse`, integrated by adaptive quadrature to
    absolute error ``tol``. ``Psi >= 0``, convex, zero at ``x = 2/3``.
    """
    if np.ndim(x) == 0:
        return _rate_scalar(x, tol)
    x = np.asarray(x, dtype=float)
    return np.array([_rate_scalar(v, tol) for v in x.ravel()]).reshape(x.shape)


@dataclass(frozen=True)
class TailAsymptote:
    """Asymptotic form of ``-(1/(beta N^2)) log P(x)`` in one regime.

    For ``small`` and ``large``: ``value = log_prefactor_coeff * (-log(2x/3))
    + gaussian_coeff * (x^2 - 4/9)``. For ``central``: ``value =
    gaussian_coeff * (x - 2/3)^2``.
    """

    regime: str
    x: float
    log_prefactor_coeff: float
    gaussian_coeff: float
    value: float


_TAIL_COEFFS = {"small": (0.5, 2.0 / 3.0), "central": (0.0, 1.0), "large": (0.5, 0.5)}


def tail_exponent(x: float, regime: str) -> TailAsymptote:
    """Leading asymptotic form of the rate function in the given regime."""
    x = _finite(x, "x")
    if x <= 0.0:
        raise ValueError("x must be positive")
    try:
        a, b = _TAIL_COEFFS[regime]
    except KeyError:
        raise ValueError(f"regime must be one of {sorted(_TAIL_COEFFS)}, got {regime!r}") from None
    if regime == "central":
        value = b * (x - TYPICAL_DISPLACEMENT) ** 2
    else:
        value = -a * math.log(2.0 * x / 3.0) + b * (x * x - 4.0 / 9.0)
    return TailAsymptote(regime, x, a, b, value)


@dataclass(frozen=True)
class CumulantLeading:
    beta: float
    N: int
    kappa1: float
    kappa2: float
    kappa3: float


def leading_cumulants(beta: float, N: int) -> CumulantLeading:
    """Leading-order cumulants of ``Delta_N``: ``2/3``, ``1/(2 beta N^2)``, ``1/(2 beta^2 N^4)``."""
    beta = _finite(beta, "beta")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    N = int(N)
    return CumulantLeading(beta, N, TYPICAL_DISPLACEMENT,
                           1.0 / (2.0 * beta * N ** 2), 1.0 / (2.0 * beta ** 2 * N ** 4))


@dataclass
class LdpCurve:
    """Tabulated large-deviation function on a strictly increasing grid.

    ``variable`` is ``"s"`` for cumulant-GF tables and ``"x"`` for rate
    function tables; ``columns`` maps column names to arrays aligned with
    ``grid``.
    """

    variable: str
    grid: np.ndarray
    columns: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid.ndim != 1 or self.grid.size == 0:
            raise ValueError("grid must be a non-empty 1-d sequence")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        self.columns = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        for k, v in self.columns.items():
            if v.shape != self.grid.shape:
                raise ValueError(f"column {k!r} has shape {v.shape}, expected {self.grid.shape}")

    def is_concave(self, column: str = "J", atol: float = 1e-12) -> bool:
        y = self.columns[column]
        if y.size < 3:
            return True
        h = np.diff(self.grid)
        slopes = np.diff(y) / h
        return bool(np.all(np.diff(slopes) <= atol))


def tabulate_cgf(s_grid) -> LdpCurve:
    """Tabulate ``J``, its four derivatives (both sides for the fourth) and ``x``."""
    s_grid = np.asarray(s_grid, dtype=float)
    cols = {
        "J": cumulant_gf(s_grid),
        "J1": [cumulant_gf_derivative(s, 1) for s in s_grid],
        "J2": [cumulant_gf_derivative(s, 2) for s in s_grid],
        "J3": [cumulant_gf_derivative(s, 3) for s in s_grid],
        "J4_left": [cumulant_gf_derivative(s, 4, "left") for s in s_grid],
        "J4_right": [cumulant_gf_derivative(s, 4, "right") for s in s_grid],
        "x": mean_displacement(s_grid),
    }
    return LdpCurve("s", s_grid, cols, meta={"closed_form": True})


def tabulate_rate(x_grid, tol: float = RATE_TOL) -> LdpCurve:
    """Tabulate ``Psi(x)`` and the conjugate tilt ``s(x)``."""
    x_grid = np.asarray(x_grid, dtype=float)
    cols = {"Psi": rate_function(x_grid, tol), "s": tilt_inverse(x_grid)}
    return LdpCurve("x", x_grid, cols, meta={"quad_abs_tol": tol})
