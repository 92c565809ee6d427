"""Error bars and goodness-of-fit helpers for Monte Carlo output."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats as _st

__all__ = ["autocorrelation", "integrated_autocorr_time", "geweke_z", "chi2_radial_test"]


def autocorrelation(x) -> np.ndarray:
    """Normalised autocorrelation function of a 1-d series (FFT based)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    f = np.fft.rfft(x - x.mean(), n=2 * n)
    acf = np.fft.irfft(f * np.conjugate(f))[:n]
    if acf[0] == 0:
        # constant series: no correlation information, treat as independent
        out = np.zeros(n)
        out[0] = 1.0
        return out
    return acf / acf[0]


def integrated_autocorr_time(x, c: float = 5.0) -> float:
    """Integrated autocorrelation time with Sokal's automatic window.

    ``tau = 1 + 2 sum_{t=1}^{W} rho(t)`` with the smallest ``W`` such that
    ``W >= c * tau(W)``. Never returns less than 1.
    """
    rho = autocorrelation(x)
    taus = 2.0 * np.cumsum(rho) - 1.0
    window = np.arange(len(taus)) >= c * taus
    w = int(np.argmax(window)) if np.any(window) else len(taus) - 1
    return max(1.0, float(taus[w]))


def geweke_z(x, first: float = 0.5, last: float = 0.5) -> float:
    """Difference of first/last segment means in units of its standard error.

    Segment errors use :func:`integrated_autocorr_time`.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    a = x[: int(first * n)]
    b = x[n - int(last * n):]

    def var_of_mean(y):
        return y.var(ddof=1) * integrated_autocorr_time(y) / len(y)

    return float((a.mean() - b.mean()) / math.sqrt(var_of_mean(a) + var_of_mean(b)))


def chi2_radial_test(counts, edges, cdf, effective_n=None):
    """Pearson chi-square test of binned radii against a radial law.

    Parameters
    ----------
    counts : array
        Counts per bin; every sample must be in some bin (pass an overflow
        bin explicitly if needed).
    edges : array
        ``len(counts) + 1`` bin edges; the last may be ``inf``.
    cdf : callable
        Cumulative distribution function of the radius.
    effective_n : float, optional
        For correlated samples, the statistic is rescaled by
        ``effective_n / counts.sum()``.

    Returns
    -------
    (statistic, p_value, dof)
    """
    counts = np.asarray(counts, dtype=float)
    edges = np.asarray(edges, dtype=float)
    n = counts.sum()
    probs = np.diff(cdf(edges))
    expected = n * probs
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (counts - expected) ** 2 / expected,
                         np.where(counts > 0, np.inf, 0.0))
    stat = float(terms.sum())
    if effective_n is not None:
        stat *= effective_n / n
    dof = int(np.count_nonzero(expected > 0)) - 1
    p = float(_st.chi2.sf(stat, dof)) if math.isfinite(stat) else 0.0
    return stat, p, dof
