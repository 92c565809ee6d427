"""Named invariant checks, grouped in suites, with machine-readable results."""
from __future__ import annotations

import math

import numpy as np

from . import analytic as an
from . import exact_beta2 as eb
from . import freegas as fg
from ._quad import quad_checked

SUITES = ("duality", "jump", "oracle", "beta2", "freegas")


def _check(name, value, tolerance, passed, **extra):
    out = {"name": name, "value": value, "tolerance": tolerance, "passed": bool(passed)}
    out.update(extra)
    return out


def suite_jump():
    left = an.cumulant_gf_derivative(0.0, 4, "left")
    right = an.cumulant_gf_derivative(0.0, 4, "right")
    checks = [
        _check("J4_left_at_0", left, None, True),
        _check("J4_right_at_0", right, None, True),
        _check("J4_jump", left - right, 1e-12, abs(left - right - 1.0) <= 1e-12, expected=1.0),
    ]
    for order in (1, 2, 3):
        d = abs(an.cumulant_gf_derivative(0.0, order, "left") - an.cumulant_gf_derivative(0.0, order, "right"))
        checks.append(_check(f"J{order}_continuity_at_0", d, 1e-12, d <= 1e-12))
    return checks


def suite_duality(tol=1e-8):
    s_grid = np.linspace(-3.0, 3.0, 61)
    res = [abs(an.cumulant_gf(s) - an.rate_function(an.mean_displacement(s)) - s * an.mean_displacement(s))
           for s in s_grid]
    worst = max(res)
    return [_check("legendre_duality_max_residual", worst, tol, worst <= tol,
                   at_s=float(s_grid[int(np.argmax(res))]))]


def suite_oracle(tol=1e-9):
    s_grid = np.linspace(-3.0, 3.0, 61)
    diff = [abs(an.cumulant_gf(s) - (an.minimal_energy(s) - an.GROUND_STATE_ENERGY)) for s in s_grid]
    rng = np.random.default_rng(0)
    gauss = 0.0
    for s in rng.uniform(-3, 3, 100):
        m = an.support_radii(s)
        r = rng.uniform(m.r0, m.R0)
        lhs = (r + s) * r
        rhs = (r * r + s * r) - (m.r0 ** 2 + s * m.r0)
        gauss = max(gauss, abs(lhs - rhs))
    norm = 0.0
    for s in np.linspace(-5, 5, 101):
        m = an.support_radii(s)
        norm = max(norm, abs((m.R0 ** 2 - m.r0 ** 2) + s * (m.R0 - m.r0) - 1.0))
    return [
        _check("excess_energy_max_residual", max(diff), tol, max(diff) <= tol),
        _check("ground_state_energy", an.minimal_energy(0.0), 1e-12,
               abs(an.minimal_energy(0.0) - 0.375) <= 1e-12, expected=0.375),
        _check("gauss_law_max_residual", gauss, 1e-12, gauss <= 1e-12),
        _check("normalization_max_residual", norm, 1e-12, norm <= 1e-12),
    ]


def suite_beta2():
    s_grid = np.linspace(-2.0, 2.0, 41)
    err16 = max(abs(eb.scaled_log_laplace(16, s) - an.cumulant_gf(s)) for s in s_grid)
    err64 = max(abs(eb.scaled_log_laplace(64, s) - an.cumulant_gf(s)) for s in s_grid)
    checks = [
        _check("finite_n_max_error_N16", err16, 3e-2, err16 <= 3e-2),
        _check("finite_n_error_decreases_N64", err64, err16, err64 < err16),
    ]
    h = 1e-4
    for N in (8, 32):
        d = (eb.scaled_log_laplace(N, h) - eb.scaled_log_laplace(N, -h)) / (2 * h)
        k1 = eb.delta_cumulant_table(N).kappa[0]
        checks.append(_check(f"laplace_slope_equals_kappa1_N{N}", abs(d - k1), 1e-6, abs(d - k1) <= 1e-6))
    t = eb.delta_cumulant_table(2000)
    targets = ((0, 2.0 / 3.0, 0.01), (1, 0.25, 0.01), (2, 0.125, 0.02))
    for m, ref, rel in targets:
        v = t.rescaled[m]
        checks.append(_check(f"rescaled_kappa{m + 1}_N2000", v, rel, abs(v - ref) <= rel * abs(ref), expected=ref))
    k4 = [eb.delta_cumulant_table(N).rescaled[3] for N in (100, 200, 400, 800)]
    spread = (max(k4) - min(k4)) / abs(np.mean(k4))
    checks.append(_check("N6_kappa4_spread_N100_800", spread, 0.10, spread > 0.10,
                         values=k4, note="passes iff the spread exceeds the tolerance"))
    return checks


def suite_freegas(beta=2.0, N=10):
    ref = fg.freegas_reference(N, beta)

    def dens(r):
        return beta * r * math.exp(-0.5 * beta * r * r)

    m1, _ = quad_checked(lambda r: r * dens(r), 0, 60 / math.sqrt(beta), 1e-13, 1e-13)
    m2, _ = quad_checked(lambda r: r * r * dens(r), 0, 60 / math.sqrt(beta), 1e-13, 1e-13)
    var = (m2 - m1 * m1) / N
    h = 1e-3
    L = [fg.freegas_laplace(k * h, 1, beta) for k in (-2, -1, 1, 2)]
    slope = (L[0] - 8 * L[1] + 8 * L[2] - L[3]) / (12 * h)
    s_grid = np.linspace(-1.0, 1.0, 21)
    disc = max(abs(fg.single_particle_laplace(s, beta, "printed") - fg.single_particle_laplace(s, beta))
               for s in s_grid)
    closed = max(abs(fg.single_particle_laplace(s, beta, "closed_form") - fg.single_particle_laplace(s, beta))
                 for s in s_grid)
    fourth = []
    for n in (10, 100, 1000):
        v = [-math.log(fg.freegas_laplace(k * 0.05, n, beta)) / (beta * n) for k in (-2, -1, 0, 1, 2)]
        fourth.append((v[0] - 4 * v[1] + 6 * v[2] - 4 * v[3] + v[4]) / 0.05 ** 4)
    spread4 = max(fourth) - min(fourth)
    return [
        _check("mean_closed_vs_quadrature", abs(ref.mean - m1), 1e-8, abs(ref.mean - m1) <= 1e-8),
        _check("variance_closed_vs_quadrature", abs(ref.variance - var), 1e-8, abs(ref.variance - var) <= 1e-8),
        _check("laplace_slope_at_0", slope, 1e-8,
               abs(slope + beta * ref.mean) <= 1e-8 * beta * ref.mean, expected=-beta * ref.mean),
        _check("closed_form_vs_quadrature_max", closed, 1e-10, closed <= 1e-10),
        _check("printed_form_vs_quadrature_max", disc, None, True,
               discrepancy_flagged=bool(disc > 1e-6),
               note="the printed form differs from direct integration beyond first order in s"),
        _check("fourth_difference_N_independent", spread4, 1e-6, spread4 <= 1e-6, values=fourth),
    ]


_RUNNERS = {
    "duality": suite_duality,
    "jump": suite_jump,
    "oracle": suite_oracle,
    "beta2": suite_beta2,
    "freegas": suite_freegas,
}


def run_suite(name: str) -> dict:
    """Run one suite (or ``"all"``) and return ``{"suites": {...}, "passed": bool}``."""
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in _RUNNERS:
            raise ValueError(f"unknown suite {n!r}; choose from {SUITES + ('all',)}")
    suites = {}
    for n in names:
        checks = _RUNNERS[n]()
        suites[n] = {"passed": all(c["passed"] for c in checks), "checks": checks}
    return {"suites": suites, "passed": all(v["passed"] for v in suites.values())}
