"""Acceptance criteria, each run at its stated tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line (collected again in the
pytest terminal summary) and then asserts the verdict.
"""
import math

import numpy as np
from scipy import stats as st

from plasma_ldp import analytic as an
from plasma_ldp import exact_beta2 as eb
from plasma_ldp import freegas as fg
from plasma_ldp import sampler as smp
from plasma_ldp.stats import chi2_radial_test

S61 = np.linspace(-3.0, 3.0, 61)


def test_criterion_01_closed_form_matches_energy_oracle(report):
    worst = max(abs(an.cumulant_gf(s) - (an.minimal_energy(s) - 3.0 / 8.0)) for s in S61)
    ok = report(1, "J(s) = E_min(s) - 3/8", worst <= 1e-9, f"max residual {worst:.3e} (tol 1e-9)")
    assert ok


def test_criterion_02_fourth_order_jump(report):
    jump = an.cumulant_gf_derivative(0.0, 4, "left") - an.cumulant_gf_derivative(0.0, 4, "right")
    cont = max(abs(an.cumulant_gf_derivative(0.0, k, "left") - an.cumulant_gf_derivative(0.0, k, "right"))
               for k in (1, 2, 3))
    ok = abs(jump - 1.0) <= 1e-12 and cont <= 1e-12
    ok = report(2, "J'''' jump at 0", ok, f"jump {jump!r}, max lower-order mismatch {cont:.1e}")
    assert ok


def test_criterion_03_legendre_duality(report):
    worst = max(abs(an.cumulant_gf(s) - an.rate_function(an.mean_displacement(s)) - s * an.mean_displacement(s))
                for s in S61)
    ok = report(3, "Legendre duality", worst <= 1e-8, f"max residual {worst:.3e} (tol 1e-8)")
    assert ok


def test_criterion_04_finite_n_agreement(report):
    grid = np.linspace(-2.0, 2.0, 81)
    J = an.cumulant_gf(grid)
    e16 = max(abs(eb.scaled_log_laplace(16, s) - j) for s, j in zip(grid, J))
    e64 = max(abs(eb.scaled_log_laplace(64, s) - j) for s, j in zip(grid, J))
    ok = e16 <= 3e-2 and e64 < e16
    ok = report(4, "beta=2 finite-N vs J", ok, f"N=16 max err {e16:.5f} (tol 0.03), N=64 max err {e64:.5f}")
    assert ok


def test_criterion_05_cumulant_limits(report):
    t = eb.delta_cumulant_table(2000)
    k1, k2, k3 = t.rescaled[:3]
    limits_ok = abs(k1 - 2 / 3) <= 0.01 * 2 / 3 and abs(k2 - 0.25) <= 0.01 * 0.25 and abs(k3 - 0.125) <= 0.02 * 0.125
    k4 = [eb.delta_cumulant_table(N).rescaled[3] for N in (100, 200, 400, 800)]
    spread = (max(k4) - min(k4)) / abs(np.mean(k4))
    ok = limits_ok and spread > 0.10
    ok = report(5, "cumulant limits at beta=2", ok,
                f"k1={k1:.5f} N2k2={k2:.5f} N4k3={k3:.5f}; N6k4 spread {spread:.4f} over N=100..800 "
                f"(criterion asks > 0.10)")
    assert ok


def test_criterion_06_tail_asymptotics(report):
    rel = {}
    for x, regime in ((10.0, "large"), (0.01, "small")):
        exact = an.rate_function(x)
        form = an.tail_exponent(x, regime).value
        rel[regime] = abs(exact - form) / abs(exact)
    ok = all(v <= 0.02 for v in rel.values())
    ok = report(6, "tail asymptotics", ok,
                f"rel. err large x=10: {rel['large']:.4f}, small x=0.01: {rel['small']:.4f} (tol 0.02)")
    assert ok


def test_criterion_07_monte_carlo_typicality(report):
    params = smp.PlasmaParams(64, 2.0, 0.0)
    stats = smp.run_chain(params, smp.Schedule(20000), 7)
    exact = eb.tilted_mean_exact(64, 0.0)
    z = (stats.mean - exact) / stats.std_error
    counts = np.append(stats.radial_counts, stats.overflow)
    edges = np.append(stats.bin_edges, np.inf)
    n_eff = stats.n_positions / stats.tau_int
    chi2, p, dof = chi2_radial_test(counts, edges, lambda r: np.clip(r, 0.0, 1.0) ** 2, effective_n=n_eff)
    ok = abs(z) <= 4 and p >= 0.01
    ok = report(7, "MC typicality at beta=2", ok,
                f"mean z vs exact finite-N {z:+.2f}; chi2 vs 2r on [0,1] = {chi2:.3g}, p={p:.3g}, "
                f"mass beyond r=1: {1.0 - stats.fraction_below(1.0):.4f}")
    assert ok


def test_criterion_08_topology_change(report):
    annulus = smp.run_chain(smp.PlasmaParams(64, 2.0, -0.5), smp.Schedule(20000), 8)
    disk = smp.run_chain(smp.PlasmaParams(64, 2.0, 0.0), smp.Schedule(20000), 9)
    f_ann = annulus.fraction_below(0.45)
    f_disk = disk.fraction_below(0.45)
    ok = f_ann < 0.01 and f_disk > 0.1
    ok = report(8, "annulus at s=-0.5", ok,
                f"fraction r<0.45: s=-0.5 {f_ann:.4f} (need < 0.01), s=0 {f_disk:.4f} (circular law 0.2025)")
    assert ok


def test_criterion_09_beta_universality(report):
    zs = {}
    for seed, (beta, s) in enumerate(((1.0, -1.0), (4.0, 1.0)), start=10):
        cmp = smp.tilted_mean_vs_theory(smp.PlasmaParams(64, beta, s), smp.Schedule(20000), seed)
        zs[(beta, s)] = cmp.z_score
    ok = all(abs(z) <= 4 for z in zs.values())
    detail = ", ".join(f"(beta={b:g}, s={s:g}) z={z:+.2f}" for (b, s), z in zs.items())
    ok = report(9, "beta-independence of x(s)", ok, detail)
    assert ok


def test_criterion_10_free_gas(report):
    N, beta, n = 10, 2.0, 40000
    ref = fg.freegas_reference(N, beta)
    d = fg.sample_freegas_delta(N, beta, n, eb.make_rng(11))
    z_mean = (d.mean() - ref.mean) / (d.std(ddof=1) / math.sqrt(n))
    r_max = 40.0 / math.sqrt(beta)
    m1 = st.rayleigh(scale=1 / math.sqrt(beta)).expect(lambda r: r, lb=0, ub=r_max, epsabs=1e-14, epsrel=1e-14)
    m2 = st.rayleigh(scale=1 / math.sqrt(beta)).expect(lambda r: r * r, lb=0, ub=r_max, epsabs=1e-14, epsrel=1e-14)
    var_err = abs((m2 - m1 * m1) / N - ref.variance)
    fourth = []
    for size in (10, 100, 1000):
        v = [-math.log(fg.freegas_laplace(k * 0.05, size, beta)) / (beta * size) for k in (-2, -1, 0, 1, 2)]
        fourth.append((v[0] - 4 * v[1] + 6 * v[2] - 4 * v[3] + v[4]) / 0.05 ** 4)
    spread = max(fourth) - min(fourth)
    ok = abs(z_mean) <= 4 and var_err <= 1e-8 and spread <= 1e-6
    ok = report(10, "free gas", ok,
                f"mean z {z_mean:+.2f}, variance err {var_err:.1e}, fourth-difference spread {spread:.1e}")
    assert ok
