import numpy as np
import pytest

from coalsim.lineages import (
    ComponentPartition,
    components_on_window,
    component_moment_batch,
    decoupled_overlap_batch,
    mrca_pair_batch,
    window_jumps,
)


def test_partition_shape_and_labels(pp_law):
    part = components_on_window(pp_law, 200, cutoff=50_000, seed=5)
    assert part.labels.shape == (200,)
    assert part.n_components == np.unique(part.labels).size
    # labels point at the smallest member of each component
    for v, lab in enumerate(part.labels):
        assert lab <= v
        assert part.labels[lab] == lab
    assert part.component_sizes().sum() == part.n_sites == 200


def test_partition_determinism(pp_law):
    a = components_on_window(pp_law, 128, cutoff=10_000, seed=77)
    b = components_on_window(pp_law, 128, cutoff=10_000, seed=77)
    c = components_on_window(pp_law, 128, cutoff=10_000, seed=78)
    assert np.array_equal(a.labels, b.labels)
    assert not np.array_equal(a.labels, c.labels)
    d = components_on_window(pp_law, 128, cutoff=10_000, seed=77, replica=1)
    assert not np.array_equal(a.labels, d.labels)


def test_deeper_cutoff_only_merges(pp_law):
    # same site randomness, deeper tracing: components can only coarsen
    shallow = components_on_window(pp_law, 96, cutoff=2_000, seed=3)
    deep = components_on_window(pp_law, 96, cutoff=200_000, seed=3)
    assert deep.n_components <= shallow.n_components
    for lab in np.unique(shallow.labels):
        members = np.nonzero(shallow.labels == lab)[0]
        assert np.unique(deep.labels[members]).size == 1


def test_moment_batch_matches_single_runs(pp_law):
    batch = component_moment_batch(pp_law, 64, 6, cutoff=5_000, seed=41)
    for r in range(6):
        part = components_on_window(pp_law, 64, cutoff=5_000, seed=41,
                                    replica=r)
        assert batch.s2[r] == part.size_power_sum(2)
        assert batch.s3[r] == part.size_power_sum(3)
        assert batch.s4[r] == part.size_power_sum(4)
        assert batch.n_components[r] == part.n_components


def test_s2_mean_tracks_pair_sum(pp_law, mid_table):
    n, reps = 256, 4_000
    batch = component_moment_batch(pp_law, n, reps, cutoff=10**8, seed=60)
    mean = batch.s2.mean()
    se = batch.s2.std(ddof=1) / np.sqrt(reps)
    oracle = mid_table.pair_sum(n)
    bias = oracle * mid_table.window_bias_bound(n, 10**8)
    assert oracle - bias - 3 * se < mean < oracle + 3 * se


def test_pair_batch_against_oracle(pp_law, mid_table):
    gap, reps, cutoff = 5, 40_000, 10**5
    batch = mrca_pair_batch(pp_law, gap, reps, cutoff=cutoff, seed=9)
    p = mid_table.pair_coalescence(gap)
    se = np.sqrt(p * (1 - p) / reps)
    bias = mid_table.pair_bias_bound(gap, cutoff)
    assert p - bias - 3 * se < batch.met_fraction < p + 3 * se
    assert batch.met_se == pytest.approx(
        np.sqrt(batch.met_fraction * (1 - batch.met_fraction) / reps))
    # unmet replicas carry the sentinel depth
    assert np.all(batch.depth[batch.met == 0] == -1)
    assert np.all(batch.depth[batch.met == 1] >= 0)


def test_pair_batch_rejects_coincident_sites(pp_law):
    with pytest.raises(ValueError):
        mrca_pair_batch(pp_law, 0, 10, cutoff=100, seed=1)
    # distinct islands at gap 0 are a valid pair
    batch = mrca_pair_batch(pp_law, 0, 200, cutoff=10_000, seed=1,
                            n_islands=3, island_a=0, island_b=2)
    assert 0 < batch.met_fraction < 1


def test_decoupled_overlap_truncated_identity(pp_law, mid_table):
    # depth within the table so the truncated oracle is exact
    for gap in (0, 10):
        counts = decoupled_overlap_batch(pp_law, gap, 30_000, depth=2_000,
                                         seed=21)
        target = mid_table.overlap_mean_truncated(gap, 2_000)
        se = counts.std(ddof=1) / np.sqrt(counts.size)
        assert abs(counts.mean() - target) < 3 * se
    # both walks start at their own site: gap 0 counts the shared origin
    assert counts.min() >= 0


def test_decoupled_overlap_island_factor(pp_law, mid_table):
    # with N islands every shared time after the origin survives w.p. 1/N
    n_isl = 4
    counts = decoupled_overlap_batch(pp_law, 10, 60_000, depth=2_000,
                                     seed=22, n_islands=n_isl)
    target = mid_table.overlap_mean_truncated(10, 2_000) / n_isl
    se = counts.std(ddof=1) / np.sqrt(counts.size)
    assert abs(counts.mean() - target) < 3 * se


def test_geometry_guards(pp_law):
    with pytest.raises(ValueError):
        components_on_window(pp_law, 0, cutoff=100, seed=1)
    with pytest.raises(ValueError):
        components_on_window(pp_law, 10, cutoff=0, seed=1)
    with pytest.raises(ValueError):
        mrca_pair_batch(pp_law, 4, 10, cutoff=1000, seed=1, n_islands=2,
                        island_a=2, island_b=0)
    with pytest.raises(ValueError):
        components_on_window(pp_law, 10, cutoff=100, seed=1, n_islands=2,
                             window_islands=3)
    with pytest.raises(ValueError):
        components_on_window(pp_law, 10, cutoff=1 << 62, seed=1)


def test_single_island_window_reduction(pp_law):
    # explicit window_islands=1 is the same trace as the base call
    a = components_on_window(pp_law, 80, cutoff=5_000, seed=14)
    b = components_on_window(pp_law, 80, cutoff=5_000, seed=14,
                             n_islands=1, window_islands=1)
    assert np.array_equal(a.labels, b.labels)
    assert a.steps == b.steps


def test_multi_island_window_shape(pp_law):
    part = components_on_window(pp_law, 40, cutoff=20_000, seed=15,
                                n_islands=3, window_islands=3)
    assert part.n_sites == 120
    assert part.labels.shape == (120,)
    assert part.component_sizes().sum() == 120
    # islands dilute coalescence relative to the single-island window
    base = components_on_window(pp_law, 120, cutoff=20_000, seed=15)
    assert part.n_components > base.n_components


def test_window_jumps_deterministic(pp_law):
    jumps, islands = window_jumps(pp_law, 1, 50, seed=8)
    again, _ = window_jumps(pp_law, 1, 50, seed=8)
    assert np.array_equal(jumps, again)
    assert np.all(jumps >= 1)
    assert np.all(islands == 0)
    # the same keyed draws drive the partition tracer: parents agree
    part = components_on_window(pp_law, 49, cutoff=10**6, seed=8)
    for t in range(1, 50):
        parent = t - jumps[t - 1]
        if 1 <= parent <= 49:
            assert part.labels[t - 1] == part.labels[parent - 1]


def test_partition_power_sums_small():
    part = ComponentPartition(
        labels=np.array([0, 0, 2, 2, 2, 5], dtype=np.int64),
        n_components=3, steps=0, n=6, n_islands=1, window_islands=1,
        cutoff=10)
    assert part.size_power_sum(1) == 6
    assert part.size_power_sum(2) == 4 + 9 + 1
    assert part.size_power_sum(3) == 8 + 27 + 1
    assert np.array_equal(part.component_sizes(), [3, 2, 1])
