import math

import numpy as np
import pytest
import scipy.special as sps
from scipy import integrate

from coalsim import IncrementLaw, compute_renewal_weights, solve_self_convolution
from coalsim.renewal import recursion_residual


def quad_tail_oracle(table, gap, x0):
    """Independent adaptive-quadrature version of the analytic tail."""
    a = table.law.alpha

    def f(x):
        return (x ** (a - 1.0) * (x + gap) ** (a - 1.0)
                / (table.law.slow_part(x) * table.law.slow_part(x + gap)))

    val, _ = integrate.quad(f, x0, np.inf, epsabs=0.0, epsrel=1e-11, limit=800)
    return table.c_srt ** 2 * val


def test_fast_matches_naive(mid_table, lp_law):
    tn = compute_renewal_weights(mid_table.law, 4096, mode="naive")
    assert np.max(np.abs(mid_table.q - tn.q)) < 1e-12
    tf = compute_renewal_weights(lp_law, 2048, mode="fast")
    tn = compute_renewal_weights(lp_law, 2048, mode="naive")
    assert np.max(np.abs(tf.q - tn.q)) < 1e-12


def test_solver_on_synthetic_system(rng_np):
    # x[n] = s[n] + sum kernel[k] x[n-k] with a sign-mixed kernel
    n = 777
    source = rng_np.normal(size=n)
    kernel = rng_np.normal(size=n) * 0.3 / np.arange(1, n + 1)
    kernel[0] = 0.0
    fast = solve_self_convolution(source, kernel, mode="fast")
    naive = solve_self_convolution(source, kernel, mode="naive")
    assert np.max(np.abs(fast - naive)) < 1e-10 * np.max(np.abs(naive))


def test_recursion_residual(mid_table):
    assert recursion_residual(mid_table) < 1e-14


def test_weights_are_probabilities(mid_table, lp_table):
    for t in (mid_table, lp_table):
        assert t.q[0] == 1.0
        assert np.all(t.q > 0)
        assert np.all(t.q[1:] < 1.0)


def test_srt_ratio_tends_to_one(big_table, lp_table):
    devs = [abs(big_table.srt_ratio(1 << k) - 1.0) for k in (10, 13, 16, 18)]
    assert devs == sorted(devs, reverse=True)
    assert devs[-1] < 2e-3
    # the log perturbation slows convergence to 1/log n speed
    lp_devs = [abs(lp_table.srt_ratio(1 << k) - 1.0) for k in (10, 11, 12, 13)]
    assert lp_devs == sorted(lp_devs, reverse=True)
    assert lp_devs[-1] < 0.2


def test_overlap_grid_against_quad_oracle(mid_table, lp_table):
    for t in (mid_table, lp_table):
        n = t.n_max
        for d in (0, 1, 7, 100, n // 2):
            table_part = t.overlap_mean_truncated(d, n - d)
            tail = quad_tail_oracle(t, d, n - d + 1.5)
            assert t.overlap_mean(d) == pytest.approx(
                table_part + tail, rel=1e-8)


def test_tail_integral_matches_quad(mid_table, lp_table):
    for t in (mid_table, lp_table):
        for gap, x0 in [(0, 5000.5), (3, 4999.5), (1000, 3000.5)]:
            got = t._tail_product_integral(gap, x0)
            want = quad_tail_oracle(t, gap, x0)
            assert got == pytest.approx(want, rel=1e-8)


def test_product_sum_tail_consistency(mid_table):
    # splitting the sum at any point must not change it
    t = mid_table
    total = t.product_sum_tail(5, 0)
    head = float(np.dot(t.q[1:1001], t.q[6:1006]))
    assert total == pytest.approx(head + t.product_sum_tail(5, 1000), rel=1e-12)


def test_pair_grid_matches_scalar(mid_table):
    grid = mid_table.pair_grid(64)
    assert grid[0] == 1.0
    for d in (1, 2, 17, 64):
        assert grid[d] == pytest.approx(mid_table.pair_coalescence(d), rel=0.0)
    assert np.all(np.diff(grid) < 0)


def test_pair_details_consistent(mid_table):
    pd = mid_table.pair_details(100)
    assert pd.value == pytest.approx(pd.numerator / pd.denominator, rel=1e-15)
    assert pd.value == pytest.approx(mid_table.pair_coalescence(100), rel=0.0)
    assert 0 < pd.numerator_tail < pd.numerator
    assert pd.tail_correction_ratio < 0.5


def test_pair_probability_bounds(mid_table):
    # sharing the first jump already coalesces the pair
    for d in (1, 5, 40):
        p = mid_table.pair_coalescence(d)
        assert float(mid_table.q[d]) / mid_table.sum_q_sq() < p < 1.0


def test_pair_sum_brute_force(mid_table):
    n = 257
    grid = mid_table.pair_grid(n - 1)
    brute = 0.0
    for i in range(n):
        for j in range(n):
            brute += grid[abs(i - j)]
    assert mid_table.pair_sum(n) == pytest.approx(brute, rel=1e-12)


def test_rect_pair_sum_brute_force(mid_table):
    a, b = 37, 120
    grid = mid_table.pair_grid(b - 1)
    brute = 0.0
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            brute += grid[abs(i - j)]
    assert mid_table.rect_pair_sum(a, b) == pytest.approx(brute, rel=1e-12)
    assert mid_table.rect_pair_sum(b, a) == pytest.approx(brute, rel=1e-12)
    assert mid_table.rect_pair_sum(a, a) == pytest.approx(
        mid_table.pair_sum(a), rel=1e-12)


def test_constants_against_scipy(big_table):
    a = big_table.law.alpha
    c = big_table.constants()
    assert c.c_srt == pytest.approx(math.sin(math.pi * a) / math.pi, rel=1e-12)
    want_beta = float(sps.gamma(a) * sps.gamma(1 - 2 * a) / sps.gamma(1 - a))
    assert c.beta_integral == pytest.approx(want_beta, rel=1e-12)
    assert c.c_alpha == pytest.approx(
        c.c_srt ** 2 * c.beta_integral / c.sum_q_sq, rel=1e-14)
    assert c.variance_constant == pytest.approx(
        c.c_alpha / (a * (2 * a + 1)), rel=1e-14)


def test_constants_frozen_values(big_table):
    # frozen from an independent run of the naive solver plus quadrature
    c = big_table.constants()
    assert c.sum_q_sq == pytest.approx(1.3933676, rel=2e-6)
    assert c.c_alpha == pytest.approx(0.4147067, rel=2e-6)
    assert c.variance_constant == pytest.approx(0.5973880, rel=2e-6)


def test_pair_asymptote(big_table):
    # P(0 ~ d) * d^(1-2a) approaches c_alpha
    c = big_table.constants()
    a = big_table.law.alpha
    for d, tol in ((1000, 5e-3), (10000, 2e-3)):
        scaled = big_table.pair_coalescence(d) * d ** (1.0 - 2.0 * a)
        assert scaled == pytest.approx(c.c_alpha, rel=tol)


def test_pair_sum_scaling(big_table):
    c = big_table.constants()
    a = big_table.law.alpha
    ratio = big_table.pair_sum(4096) / (c.variance_constant * 4096 ** (2 * a + 1))
    assert ratio == pytest.approx(1.0, abs=0.01)


def test_mrca_pmf_forward_identity(mid_table):
    # f solves q_K q_{K+gap} = sum_k f[k] q^2_{K-k}; check it forwards
    gap, k_max = 37, 1800
    f = mid_table.mrca_depth_pmf(gap, k_max)
    assert np.all(f >= -1e-15)
    q = mid_table.q
    for big_k in (0, 1, 5, 600, k_max):
        lhs = float(np.dot(f[:big_k + 1], (q[:big_k + 1] ** 2)[::-1]))
        rhs = float(q[big_k] * q[big_k + gap])
        assert lhs == pytest.approx(rhs, rel=1e-11)


def test_mrca_mass_and_bias_bound(big_table):
    gap, k_max = 1000, 100_000
    f = big_table.mrca_depth_pmf(gap, k_max)
    p_coal = big_table.pair_coalescence(gap)
    mass = float(f.sum()) * big_table.sum_q_sq() / big_table.sum_q_sq()
    total = float(f.sum())
    # truncated mass must stay below the full coalescence probability
    assert total < p_coal
    deficit = p_coal - total
    bound = big_table.pair_bias_bound(gap, k_max)
    assert deficit <= bound
    assert bound < 2.0 * deficit  # the bound is tight at these depths
    assert mass <= total + 1e-15


def test_bias_bound_decreasing(big_table):
    bounds = [big_table.pair_bias_bound(50, m) for m in (10, 100, 1000, 10000)]
    assert bounds == sorted(bounds, reverse=True)


def test_gap_range_enforced(mid_table):
    with pytest.raises(ValueError):
        mid_table.pair_coalescence(mid_table.n_max // 2 + 1)
    with pytest.raises(ValueError):
        mid_table.pair_sum(mid_table.n_max)
    with pytest.raises(ValueError):
        mid_table.pair_details(0)


def test_memory_guard():
    law = IncrementLaw.pure_power(0.39)
    with pytest.raises(MemoryError):
        compute_renewal_weights(law, 1 << 26)


def test_unknown_mode_rejected():
    law = IncrementLaw.pure_power(0.39)
    with pytest.raises(ValueError):
        compute_renewal_weights(law, 64, mode="middling")
