import math

import numpy as np
import pytest
from scipy import integrate

from coalsim.lineages import ComponentPartition, components_on_window
from coalsim.paths import (
    EMPIRICAL_SIGMA,
    EXACT_SIGMA,
    ColouringLaw,
    colour_and_sum,
    coloured_sum_batch,
    combination_sigma,
    empirical_covariance,
    exact_sigma,
    asymptotic_sigma,
    fbm_covariance,
    finite_window_covariance,
    hurst_estimate,
    make_ensemble,
    PathEnsemble,
)


def brute_moments(law: ColouringLaw, rng, draws=200_000):
    """Monte Carlo moments through the kernel draw path."""
    from coalsim._kernels import _colour_value

    code, c1, c2, c3 = law.kernel_codes()
    u = rng.random(draws)
    y = np.array([_colour_value(x, code, c1, c2, c3) for x in u])
    return y.mean(), (y ** 2).mean(), np.abs(y ** 3).mean(), (y ** 4).mean()


@pytest.mark.parametrize("law", [
    ColouringLaw.rademacher(0.5),
    ColouringLaw.rademacher(0.7),
    ColouringLaw.centered_uniform(1.0),
    ColouringLaw.centered_uniform(2.5),
    ColouringLaw.two_point(-3.0, 1.0, 0.25),
])
def test_colour_moment_formulas(law, rng_np):
    m1, m2, m3, m4 = brute_moments(law, rng_np)
    scale = max(1.0, law.fourth_moment())
    assert abs(m1) < 0.02 * scale
    assert abs(m2 - law.second_moment()) < 0.02 * scale
    assert abs(m3 - law.abs_third_moment()) < 0.03 * scale
    assert abs(m4 - law.fourth_moment()) < 0.05 * scale


def test_colouring_guards():
    with pytest.raises(ValueError):
        ColouringLaw.rademacher(0.0)
    with pytest.raises(ValueError):
        ColouringLaw.centered_uniform(0.0)
    with pytest.raises(ValueError):
        ColouringLaw.two_point(1.0, 2.0, 0.5)  # cannot be centered
    with pytest.raises(ValueError):
        ColouringLaw.two_point(0.0, 0.0, 0.5)  # degenerate at zero


def test_colour_and_sum_single_component():
    labels = np.zeros(12, dtype=np.int64)
    part = ComponentPartition(labels=labels, n_components=1, steps=0, n=12,
                              n_islands=1, window_islands=1, cutoff=10)
    s = colour_and_sum(part, ColouringLaw.centered_uniform(1.0), seed=5)
    assert s[0] == 0.0
    y = s[1]
    assert np.allclose(s, y * np.arange(13))


def test_colour_and_sum_parity_on_singletons():
    n = 31
    labels = np.arange(n, dtype=np.int64)
    part = ComponentPartition(labels=labels, n_components=n, steps=0, n=n,
                              n_islands=1, window_islands=1, cutoff=10)
    s = colour_and_sum(part, ColouringLaw.rademacher(0.5), seed=17)
    assert set(np.unique(np.diff(s))) <= {-1.0, 1.0}
    assert int(s[n]) % 2 == n % 2


def test_colour_and_sum_matches_batch(pp_law):
    n, seed = 200, 4004
    sites = np.array([1, 57, 128, 200])
    colour = ColouringLaw.rademacher(0.7)
    sums, ncomp, _ = coloured_sum_batch(pp_law, colour, n, 3, cutoff=20_000,
                                        seed=seed, sites=sites)
    for r in range(3):
        part = components_on_window(pp_law, n, cutoff=20_000, seed=seed,
                                    replica=r)
        s = colour_and_sum(part, colour, seed, replica=r)
        assert np.array_equal(sums[r], s[sites])
        assert ncomp[r] == part.n_components


def test_colour_seed_separate_from_lineage_stream(pp_law):
    part = components_on_window(pp_law, 64, cutoff=5_000, seed=9)
    colour = ColouringLaw.rademacher(0.5)
    a = colour_and_sum(part, colour, seed=1)
    b = colour_and_sum(part, colour, seed=2)
    assert not np.array_equal(a, b)
    # partition is untouched by colour seeds by construction; the sums
    # still walk the same component structure
    assert a.shape == b.shape == (65,)


def test_exact_sigma_matches_mc_variance(pp_law, mid_table):
    n, reps, cutoff = 256, 30_000, 10**8
    colour = ColouringLaw.rademacher(0.5)
    sums, _, _ = coloured_sum_batch(pp_law, colour, n, reps, cutoff=cutoff,
                                    seed=777, sites=[n])
    var = sums[:, 0].var(ddof=1)
    target = exact_sigma(mid_table, colour, n) ** 2
    se = var * math.sqrt(2.0 / (reps - 1))
    bias = target * mid_table.window_bias_bound(n, cutoff)
    assert target - bias - 3 * se < var < target + 3 * se


def test_combination_sigma_block_identity(mid_table):
    colour = ColouringLaw.centered_uniform(1.0)
    # S_n - S_{n/2} spans a length-n/2 block; discrete stationarity makes
    # its variance the n/2 window variance
    direct = combination_sigma(mid_table, colour, (1024, 2048), (-1.0, 1.0))
    assert direct == pytest.approx(exact_sigma(mid_table, colour, 1024),
                                   rel=1e-12)
    with pytest.raises(ValueError):
        combination_sigma(mid_table, colour, (1024,), (0.0,))


def test_asymptotic_sigma_tracks_exact(big_table):
    colour = ColouringLaw.rademacher(0.5)
    for n in (1 << 14, 1 << 16):
        ratio = asymptotic_sigma(big_table, colour, n) / exact_sigma(
            big_table, colour, n)
        assert abs(ratio - 1.0) < 5e-3


def make_test_ensemble(pp_law, table, **kw):
    args = dict(law=pp_law, colouring=ColouringLaw.rademacher(0.5), n=512,
                grid=(0.25, 0.5, 0.75, 1.0), reps=4_000,
                cutoff_mult=4096.0, normalization=EXACT_SIGMA, seed=321,
                table=table)
    args.update(kw)
    return make_ensemble(**args)


def test_ensemble_basics(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table, grid=(0.0, 0.5, 1.0))
    assert ens.values.shape == (4_000, 3)
    assert np.all(ens.column(0.0) == 0.0)
    # centering within 4 SE at every grid time
    for t in (0.5, 1.0):
        col = ens.column(t)
        se = col.std(ddof=1) / math.sqrt(ens.reps)
        assert abs(col.mean()) < 4 * se


def test_ensemble_interpolation_between_sites(pp_law, mid_table):
    n = 512
    tq = (128.5) / n  # halfway between sites 128 and 129
    ens = make_test_ensemble(pp_law, mid_table, grid=(128 / n, tq, 129 / n),
                             reps=5)
    mid = 0.5 * (ens.column(128 / n) + ens.column(129 / n))
    assert np.allclose(ens.column(tq), mid, rtol=0.0, atol=1e-12)


def test_ensemble_variance_normalizations(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table)
    v1 = ens.column(1.0).var(ddof=1)
    se = v1 * math.sqrt(2.0 / (ens.reps - 1))
    bias = mid_table.window_bias_bound(512, 512 * 4096)
    assert 1.0 - bias - 3 * se < v1 < 1.0 + 3 * se
    emp = make_test_ensemble(pp_law, mid_table,
                             normalization=EMPIRICAL_SIGMA)
    assert emp.column(1.0).var(ddof=1) == pytest.approx(1.0, rel=1e-12)
    # same paths, different scale factor only (S_n = 0 rows excluded)
    live = emp.column(1.0) != 0.0
    ratio = ens.column(1.0)[live] / emp.column(1.0)[live]
    assert np.allclose(ratio, ratio[0])


def test_ensemble_stationary_increments(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table)
    a = ens.column(0.5) - ens.column(0.25)
    b = ens.column(0.75) - ens.column(0.5)
    va, vb = a.var(ddof=1), b.var(ddof=1)
    se = (va + vb) * math.sqrt(2.0 / (ens.reps - 1))
    assert abs(va - vb) < 4 * se


def test_ensemble_input_guards(pp_law, mid_table):
    with pytest.raises(ValueError):
        make_test_ensemble(pp_law, mid_table, grid=(0.5, 0.5))
    with pytest.raises(ValueError):
        make_test_ensemble(pp_law, mid_table, grid=(0.5, 0.25))
    with pytest.raises(ValueError):
        make_test_ensemble(pp_law, mid_table, grid=(-0.5, 1.0))
    with pytest.raises(ValueError):
        make_test_ensemble(pp_law, mid_table, normalization="bogus")
    lp_table_mismatch = pytest.importorskip("coalsim.renewal")
    with pytest.raises(ValueError):
        # table built for a different law
        from coalsim.increments import IncrementLaw
        from coalsim.renewal import compute_renewal_weights
        other = compute_renewal_weights(IncrementLaw(alpha=0.25), 2048)
        make_test_ensemble(pp_law, other)


def test_empirical_covariance_against_matrix(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table, reps=500)
    c = empirical_covariance(ens, 0.5, 1.0)
    manual = np.cov(ens.column(0.5), ens.column(1.0), ddof=1)[0, 1]
    assert c == pytest.approx(manual, rel=1e-12)


def test_fbm_covariance_values():
    grid = np.array([0.25, 0.5, 1.0])
    cov = fbm_covariance(grid, 0.89)
    assert cov[2, 2] == pytest.approx(1.0)
    assert np.allclose(np.diag(cov), grid ** 1.78)
    # s = t - s cancellation: cov(0.5, 1.0) = 0.5
    assert cov[1, 2] == pytest.approx(0.5)
    assert np.allclose(cov, cov.T)


def test_finite_window_covariance_matches_fbm(pp_law, big_table):
    grid = np.array([0.25, 0.5, 0.75, 1.0])
    fin = finite_window_covariance(big_table, 4096, grid)
    fbm = fbm_covariance(grid, 0.5 + pp_law.alpha)
    assert np.max(np.abs(fin - fbm)) < 5e-3
    assert fin[3, 3] == pytest.approx(1.0, rel=1e-12)


def test_hurst_estimate_exact_on_synthetic():
    reps, hurst = 400, 0.83
    grid = np.array([0.125, 0.25, 0.5, 1.0])
    signs = np.tile([1.0, -1.0], reps // 2)[:, None]
    values = signs * (grid ** hurst)[None, :]
    ens = PathEnsemble(values=values, grid=grid, n=1024, sigma=1.0,
                       normalization=EXACT_SIGMA,
                       colouring=ColouringLaw.rademacher(0.5),
                       law=None, cutoff=0,
                       n_components=np.zeros(reps, dtype=np.int64))
    assert hurst_estimate(ens) == pytest.approx(hurst, abs=1e-12)


def test_hurst_estimate_needs_three_points(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table, grid=(0.5, 1.0), reps=10)
    with pytest.raises(ValueError):
        hurst_estimate(ens)


def test_hurst_estimate_on_simulation(pp_law, mid_table):
    ens = make_test_ensemble(pp_law, mid_table, reps=6_000)
    h = hurst_estimate(ens)
    assert abs(h - (0.5 + pp_law.alpha)) < 0.04
