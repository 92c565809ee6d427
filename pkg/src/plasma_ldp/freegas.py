"""Reference results for the gas without logarithmic interaction.

Each particle has energy ``r^2/2`` at inverse temperature ``beta``, so the
radii are i.i.d. Rayleigh with scale ``1/sqrt(beta)``. The Laplace transform
``<exp(-beta s N Delta_N)>`` factorises into single-particle integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from ._quad import quad_checked

__all__ = [
    "FreeGasReference",
    "freegas_reference",
    "single_particle_laplace",
    "freegas_laplace",
    "freegas_scaled_log_laplace",
    "sample_freegas_delta",
    "LAPLACE_METHODS",
]

LAPLACE_METHODS = ("quadrature", "closed_form", "printed")


@dataclass(frozen=True)
class FreeGasReference:
    N: int
    beta: float
    mean: float
    variance: float


def _check(N, beta):
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be positive")
    return int(N), float(beta)


def freegas_reference(N: int, beta: float) -> FreeGasReference:
    """Closed-form mean ``sqrt(pi/(2 beta))`` and variance ``(4-pi)/(2 beta N)`` of ``Delta_N``."""
    N, beta = _check(N, beta)
    return FreeGasReference(N, beta, math.sqrt(math.pi / (2.0 * beta)), (4.0 - math.pi) / (2.0 * beta * N))


def _single_quadrature(s, beta, tol):
    # integrand beta r exp(-beta r^2/2 - beta s r), peaked where beta r^2 + beta s r = 1
    peak = 0.5 * (-s + math.sqrt(s * s + 4.0 / beta))
    shift = -beta * (0.5 * peak * peak + s * peak)

    def f(r):
        return beta * r * math.exp(-beta * (0.5 * r * r + s * r) - shift)

    width = 1.0 / math.sqrt(beta)
    upper = peak + 40.0 * width
    val, _ = quad_checked(f, 0.0, upper, epsabs=0.0, epsrel=tol, limit=200, points=[peak],
                          what="free-gas Laplace integral")
    return val * math.exp(shift)


def single_particle_laplace(s: float, beta: float, method: str = "quadrature", tol: float = 1e-13) -> float:
    """``<exp(-beta s r)>`` for one particle.

    Methods
    -------
    ``"quadrature"``
        Direct numerical integration; the reference value.
    ``"closed_form"``
        ``1 - sqrt(2 pi beta) s exp(beta s^2/2) Phi(-sqrt(beta) s)``, the
        Rayleigh moment generating function.
    ``"printed"``
        ``1 - sqrt(2 pi beta) s exp(-beta s^2/2) Phi(-beta s)``, the form
        commonly quoted for this model. It agrees with the other two only to
        first order in ``s``.
    """
    s = float(s)
    _check(1, beta)
    if method == "quadrature":
        return _single_quadrature(s, beta, tol)
    if method == "closed_form":
        y = math.sqrt(beta) * s
        # exp(y^2/2) Phi(-y) = erfcx(y/sqrt 2)/2
        return 1.0 - math.sqrt(2.0 * math.pi * beta) * s * 0.5 * float(special.erfcx(y / math.sqrt(2.0)))
    if method == "printed":
        return 1.0 - math.sqrt(2.0 * math.pi * beta) * s * math.exp(-0.5 * beta * s * s) * float(special.ndtr(-beta * s))
    raise ValueError(f"method must be one of {LAPLACE_METHODS}, got {method!r}")


def freegas_laplace(s: float, N: int, beta: float, method: str = "quadrature") -> float:
    """``<exp(-beta s N Delta_N)>`` for ``N`` free particles."""
    N, beta = _check(N, beta)
    return single_particle_laplace(s, beta, method) ** N


def freegas_scaled_log_laplace(s: float, N: int, beta: float, method: str = "quadrature") -> float:
    """``-(1/(beta N)) log <exp(-beta s N Delta_N)>``; analytic in ``s`` and independent of ``N``."""
    N, beta = _check(N, beta)
    return -math.log(single_particle_laplace(s, beta, method)) / beta


def sample_freegas_delta(N: int, beta: float, n_draws: int, rng) -> np.ndarray:
    """Independent draws of ``Delta_N`` for the free gas."""
    N, beta = _check(N, beta)
    r = rng.rayleigh(scale=1.0 / math.sqrt(beta), size=(int(n_draws), N))
    return r.mean(axis=1)
