import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst
from scipy import integrate

from plasma_ldp import exact_beta2 as eb
from plasma_ldp import freegas as fg


def test_reference_values():
    ref = fg.freegas_reference(10, 2.0)
    assert ref.mean == pytest.approx(math.sqrt(math.pi / 4), rel=1e-15)
    assert ref.variance == pytest.approx((4 - math.pi) / 40, rel=1e-15)
    with pytest.raises(ValueError):
        fg.freegas_reference(0, 1.0)
    with pytest.raises(ValueError):
        fg.freegas_reference(3, -1.0)


@settings(max_examples=30)
@given(hst.floats(-2.0, 3.0), hst.floats(0.2, 5.0))
def test_quadrature_matches_rayleigh_mgf(s, beta):
    q = fg.single_particle_laplace(s, beta)
    c = fg.single_particle_laplace(s, beta, "closed_form")
    assert q == pytest.approx(c, rel=1e-11)


def test_quadrature_against_independent_integration():
    beta, s = 1.3, -0.7
    ref, _ = integrate.quad(lambda r: beta * r * math.exp(-beta * r * r / 2 - beta * s * r), 0, np.inf,
                            epsabs=0, epsrel=1e-13)
    assert fg.single_particle_laplace(s, beta) == pytest.approx(ref, rel=1e-12)


def test_laplace_slope_gives_mean():
    beta, N, h = 2.0, 10, 1e-3
    L = [fg.freegas_laplace(k * h, N, beta) for k in (-2, -1, 1, 2)]
    slope = (L[0] - 8 * L[1] + 8 * L[2] - L[3]) / (12 * h)
    assert slope == pytest.approx(-beta * N * math.sqrt(math.pi / (2 * beta)), rel=1e-8)


def test_printed_form_agrees_only_to_first_order():
    beta = 2.0
    for s in (1e-4, -1e-4):
        q = fg.single_particle_laplace(s, beta)
        assert fg.single_particle_laplace(s, beta, "printed") == pytest.approx(q, abs=1e-6)
    gap = abs(fg.single_particle_laplace(0.5, beta, "printed") - fg.single_particle_laplace(0.5, beta))
    assert gap > 1e-2
    with pytest.raises(ValueError):
        fg.single_particle_laplace(0.1, 1.0, "guess")


def test_scaled_log_laplace_independent_of_n():
    for s in (-0.5, 0.2, 1.0):
        vals = [-math.log(fg.freegas_laplace(s, N, 2.0)) / (2.0 * N) for N in (1, 10, 100)]
        assert max(vals) - min(vals) < 1e-13
        assert fg.freegas_scaled_log_laplace(s, 50, 2.0) == pytest.approx(vals[0], rel=1e-14)


def test_sampled_mean_and_variance():
    N, beta, n = 10, 2.0, 50_000
    d = fg.sample_freegas_delta(N, beta, n, eb.make_rng(21))
    ref = fg.freegas_reference(N, beta)
    assert abs(d.mean() - ref.mean) < 4 * d.std(ddof=1) / math.sqrt(n)
    assert d.var(ddof=1) == pytest.approx(ref.variance, rel=4 * math.sqrt(2 / n) * 1.5)
