"""Metropolis Monte Carlo for the tilted two-dimensional one-component plasma.

The chain targets ``exp(-beta H)`` with

    H = -1/2 sum_{i != j} log|r_i - r_j| + N sum_k V_s(|r_k|),
    V_s(r) = r^2/2 + s r,

using single-particle isotropic Gaussian proposals swept in index order.
The proposal width is tuned during burn-in only and frozen afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numba
import numpy as np

from . import analytic
from .errors import ChainDivergenceError, InvariantError
from .exact_beta2 import make_rng
from .stats import geweke_z, integrated_autocorr_time

__all__ = [
    "PlasmaParams",
    "GasConfiguration",
    "Schedule",
    "ChainStats",
    "TheoryComparison",
    "energy",
    "delta_energy",
    "acceptance_probability",
    "initial_configuration",
    "run_chain",
    "tilted_mean_vs_theory",
]

TARGET_ACCEPTANCE = 0.35
BLOCK = 100  # sweeps between energy-cache checks and step-size updates
CACHE_RTOL = 1e-9


@dataclass(frozen=True)
class PlasmaParams:
    N: int
    beta: float
    s: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not math.isfinite(self.s):
            raise ValueError(f"s must be finite, got {self.s!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "s", float(self.s))


def _pair_sum(pos):
    d = pos[:, None, :] - pos[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    iu = np.triu_indices(len(pos), 1)
    r2 = r2[iu]
    if np.any(r2 == 0.0):
        raise ValueError("coincident particles: energy is infinite")
    return -0.5 * np.log(r2).sum()


def _energy(pos, s):
    r = np.hypot(pos[:, 0], pos[:, 1])
    return _pair_sum(pos) + len(pos) * analytic.potential(r, s).sum()


@dataclass
class GasConfiguration:
    """``N`` planar positions with their cached energy."""

    positions: np.ndarray
    params: PlasmaParams
    cached_energy: float = field(default=float("nan"))

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        if self.positions.shape != (self.params.N, 2):
            raise ValueError(f"positions must have shape ({self.params.N}, 2)")
        if math.isnan(self.cached_energy):
            self.cached_energy = _energy(self.positions, self.params.s)

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.positions[:, 0], self.positions[:, 1])

    @property
    def delta(self) -> float:
        """Mean radial displacement ``Delta_N``."""
        return float(self.radii.mean())


def energy(config: GasConfiguration) -> float:
    """Full O(N^2) evaluation of the tilted Hamiltonian."""
    return _energy(config.positions, config.params.s)


def delta_energy(config: GasConfiguration, index: int, point) -> float:
    """Energy change from moving particle ``index`` to ``point``.

    Returns ``inf`` (a move that is always rejected) if ``point`` coincides
    with another particle.
    """
    pos = config.positions
    new = np.asarray(point, dtype=float)
    old = pos[index]
    others = np.delete(pos, index, axis=0)
    d2_new = ((others - new) ** 2).sum(axis=1)
    if np.any(d2_new == 0.0):
        return math.inf
    d2_old = ((others - old) ** 2).sum(axis=1)
    s = config.params.s
    dpot = analytic.potential(math.hypot(*new), s) - analytic.potential(math.hypot(*old), s)
    return 0.5 * float(np.log(d2_old / d2_new).sum()) + config.params.N * dpot


def acceptance_probability(beta: float, d_energy: float) -> float:
    """Metropolis acceptance ``min(1, exp(-beta dE))``."""
    if d_energy <= 0:
        return 1.0
    return math.exp(-beta * d_energy)


@numba.njit(cache=True)
def _sweep_block(pos, e, beta, s, sigma, noise, logu, record, deltas, hist, bin_width):
    n_sweeps = noise.shape[0]
    N = pos.shape[0]
    n_bins = hist.shape[0] - 1  # last slot counts overflow
    accepted = 0
    for t in range(n_sweeps):
        for i in range(N):
            xo = pos[i, 0]
            yo = pos[i, 1]
            xn = xo + sigma * noise[t, i, 0]
            yn = yo + sigma * noise[t, i, 1]
            dpair = 0.0
            clash = False
            for j in range(N):
                if j == i:
                    continue
                ax = xn - pos[j, 0]
                ay = yn - pos[j, 1]
                d2n = ax * ax + ay * ay
                if d2n == 0.0:
                    clash = True
                    break
                bx = xo - pos[j, 0]
                by = yo - pos[j, 1]
                dpair += math.log((bx * bx + by * by) / d2n)
            if clash:
                continue
            rn = math.sqrt(xn * xn + yn * yn)
            ro = math.sqrt(xo * xo + yo * yo)
            de = 0.5 * dpair + N * (0.5 * (rn * rn - ro * ro) + s * (rn - ro))
            if logu[t, i] < -beta * de:
                pos[i, 0] = xn
                pos[i, 1] = yn
                e += de
                accepted += 1
        if record:
            tot = 0.0
            for i in range(N):
                r = math.sqrt(pos[i, 0] ** 2 + pos[i, 1] ** 2)
                tot += r
                b = int(r / bin_width)
                if b >= n_bins:
                    b = n_bins
                hist[b] += 1
            deltas[t] = tot / N
    return e, accepted


@dataclass(frozen=True)
class Schedule:
    """Sweep schedule.

    ``burn_in=None`` means 20% of ``sweeps``. ``step_size=None`` starts the
    proposal width at ``0.5/sqrt(N)``; with ``adapt=True`` it is tuned
    towards ``target_acceptance`` during burn-in and then frozen.
    """

    sweeps: int
    burn_in: int | None = None
    step_size: float | None = None
    adapt: bool = True
    target_acceptance: float = TARGET_ACCEPTANCE
    bin_width: float = 0.01

    def resolved_burn_in(self) -> int:
        return int(0.2 * self.sweeps) if self.burn_in is None else int(self.burn_in)

    def __post_init__(self):
        if int(self.sweeps) != self.sweeps or self.sweeps < 1:
            raise ValueError("sweeps must be a positive integer")
        b = self.resolved_burn_in()
        if not 0 <= b < self.sweeps:
            raise ValueError("burn_in must satisfy 0 <= burn_in < sweeps")
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not 0 < self.target_acceptance < 1:
            raise ValueError("target_acceptance must lie in (0, 1)")
        if not self.bin_width > 0:
            raise ValueError("bin_width must be positive")


@dataclass
class ChainStats:
    """Output of :func:`run_chain`; all statistics exclude burn-in sweeps."""

    params: PlasmaParams
    n_sweeps: int
    burn_in: int
    acceptance_rate: float
    delta_samples: np.ndarray
    radial_counts: np.ndarray
    bin_width: float
    overflow: int
    step_size: float
    seed: int | None
    max_energy_drift: float
    final_positions: np.ndarray

    @property
    def bin_edges(self) -> np.ndarray:
        return self.bin_width * np.arange(len(self.radial_counts) + 1)

    @property
    def n_positions(self) -> int:
        return int(self.radial_counts.sum() + self.overflow)

    @property
    def mean(self) -> float:
        return float(self.delta_samples.mean())

    @property
    def tau_int(self) -> float:
        return integrated_autocorr_time(self.delta_samples)

    @property
    def std_error(self) -> float:
        """Standard error of the mean of ``Delta_N``, inflated by ``tau_int``."""
        x = self.delta_samples
        return float(math.sqrt(x.var(ddof=1) * self.tau_int / len(x)))

    @property
    def geweke_z(self) -> float:
        return geweke_z(self.delta_samples)

    def fraction_below(self, r: float) -> float:
        """Fraction of recorded positions with radius below ``r`` (a bin edge)."""
        nb = r / self.bin_width
        k = int(round(nb))
        if abs(nb - k) > 1e-9 or k < 0:
            raise ValueError(f"r={r} is not a histogram bin edge (width {self.bin_width})")
        return float(self.radial_counts[:k].sum() / self.n_positions)


def initial_configuration(params: PlasmaParams, rng) -> GasConfiguration:
    """Particles i.i.d. uniform on the disk of radius ``R0(s)``."""
    R0 = analytic.support_radii(params.s).R0
    r = R0 * np.sqrt(rng.random(params.N))
    phi = 2.0 * np.pi * rng.random(params.N)
    return GasConfiguration(np.column_stack([r * np.cos(phi), r * np.sin(phi)]), params)


def run_chain(params: PlasmaParams, schedule: Schedule, rng, config: GasConfiguration | None = None) -> ChainStats:
    """Run a Metropolis chain and collect ``Delta_N`` and radial statistics.

    Parameters
    ----------
    params : PlasmaParams
    schedule : Schedule
    rng : int or numpy.random.Generator
        An integer is used as the seed of a Philox generator and recorded.
    config : GasConfiguration, optional
        Starting state; by default uniform on the disk of radius ``R0(s)``.

    Raises
    ------
    ChainDivergenceError
        If the energy becomes non-finite.
    InvariantError
        If the incrementally updated energy drifts from a full recomputation
        by more than ``CACHE_RTOL`` (checked every ``BLOCK`` sweeps).
    """
    if isinstance(rng, np.random.Generator):
        seed = None
    else:
        seed = int(rng)
        rng = make_rng(seed)
    if config is None:
        config = initial_configuration(params, rng)
    pos = config.positions.copy()
    e = config.cached_energy
    N, beta, s = params.N, params.beta, params.s

    burn = schedule.resolved_burn_in()
    n_keep = schedule.sweeps - burn
    sigma = schedule.step_size if schedule.step_size is not None else 0.5 / math.sqrt(N)
    R0 = analytic.support_radii(s).R0
    n_bins = int(math.ceil((R0 + 1.0) / schedule.bin_width))
    hist = np.zeros(n_bins + 1, dtype=np.int64)
    deltas = np.empty(n_keep)
    scratch = np.empty(BLOCK)

    accepted = 0
    drift = 0.0
    done = 0
    while done < schedule.sweeps:
        in_burn = done < burn
        n = min(BLOCK, (burn if in_burn else schedule.sweeps) - done)
        noise = rng.standard_normal((n, N, 2))
        logu = np.log(rng.random((n, N)))
        if in_burn:
            e, acc = _sweep_block(pos, e, beta, s, sigma, noise, logu, False, scratch, hist,
                                  schedule.bin_width)
            if schedule.adapt:
                rate = acc / (n * N)
                sigma *= math.exp(2.0 * (rate - schedule.target_acceptance))
        else:
            k = done - burn
            e, acc = _sweep_block(pos, e, beta, s, sigma, noise, logu, True, deltas[k:k + n], hist,
                                  schedule.bin_width)
            accepted += acc
        done += n
        if not math.isfinite(e):
            raise ChainDivergenceError(f"non-finite energy after {done} sweeps (N={N}, beta={beta}, s={s})")
        exact = _energy(pos, s)
        rel = abs(e - exact) / (1.0 + abs(exact))
        if rel > CACHE_RTOL:
            raise InvariantError(f"energy cache drifted by {rel:.3e} (relative) after {done} sweeps")
        drift = max(drift, rel)
        e = exact

    return ChainStats(
        params=params,
        n_sweeps=schedule.sweeps,
        burn_in=burn,
        acceptance_rate=accepted / (n_keep * N),
        delta_samples=deltas,
        radial_counts=hist[:-1].copy(),
        bin_width=schedule.bin_width,
        overflow=int(hist[-1]),
        step_size=sigma,
        seed=seed,
        max_energy_drift=drift,
        final_positions=pos,
    )


@dataclass(frozen=True)
class TheoryComparison:
    empirical_mean: float
    std_error: float
    theory_x_of_s: float
    z_score: float
    stats: ChainStats


def tilted_mean_vs_theory(params: PlasmaParams, schedule: Schedule, rng) -> TheoryComparison:
    """Compare the chain mean of ``Delta_N`` with the large-N value ``x(s)``."""
    stats = run_chain(params, schedule, rng)
    theory = analytic.mean_displacement(params.s)
    z = (stats.mean - theory) / stats.std_error
    return TheoryComparison(stats.mean, stats.std_error, theory, z, stats)
