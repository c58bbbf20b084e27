import numpy as np
from hypothesis import given, settings, strategies as st

from coalsim import rng


def _mix_reference(z: int) -> int:
    """Independent pure-Python splitmix64 finalizer."""
    mask = (1 << 64) - 1
    z = z & mask
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & mask
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & mask
    return (z ^ (z >> 31)) & mask


def _stream_reference(key: int, ctr: int) -> int:
    mask = (1 << 64) - 1
    return _mix_reference((key + ctr * 0x9E3779B97F4A7C15) & mask)


@given(st.integers(min_value=0, max_value=(1 << 64) - 1))
@settings(max_examples=200)
def test_mix_matches_reference(z):
    assert int(np.uint64(rng.mix64(np.uint64(z)))) == _mix_reference(z)


@given(st.integers(min_value=0, max_value=(1 << 64) - 1),
       st.integers(min_value=0, max_value=(1 << 40)))
@settings(max_examples=200)
def test_stream_matches_reference(key, ctr):
    got = int(np.uint64(rng.stream64(np.uint64(key), np.uint64(ctr))))
    assert got == _stream_reference(key, ctr)


def test_unit_draws_open_interval():
    key = np.uint64(987654321)
    us = np.array([rng.unit_draw(key, np.uint64(i)) for i in range(4096)])
    assert np.all(us > 0.0)
    assert np.all(us < 1.0)


def test_unit_draws_uniform_moments():
    key = rng.derive_key(np.uint64(7), rng.KIND_COLOUR, np.uint64(0))
    n = 200_000
    us = np.array([rng.unit_draw(key, np.uint64(i)) for i in range(n)])
    se = 1.0 / np.sqrt(12.0 * n)
    assert abs(us.mean() - 0.5) < 5 * se
    assert abs(us.var() - 1.0 / 12.0) < 5 * np.sqrt(1.0 / 180.0 / n)


def test_derived_keys_distinct():
    master = np.uint64(20260816)
    keys = set()
    for kind in (rng.KIND_LINEAGE, rng.KIND_COLOUR, rng.KIND_ISLAND,
                 rng.KIND_PAIR, rng.KIND_OVERLAP):
        for idx in range(64):
            keys.add(int(rng.derive_key(master, kind, np.uint64(idx))))
    assert len(keys) == 5 * 64


def test_site_uniform_reproducible():
    key = np.uint64(42)
    a = [rng.site_uniform(key, s, 0) for s in (-5, 0, 3, 1 << 40)]
    b = [rng.site_uniform(key, s, 0) for s in (-5, 0, 3, 1 << 40)]
    assert a == b
    c = [rng.site_uniform(key, s, 1) for s in (-5, 0, 3, 1 << 40)]
    assert all(x != y for x, y in zip(a, c))


def test_streams_decorrelated():
    k1 = rng.derive_key(np.uint64(1), rng.KIND_LINEAGE, np.uint64(0))
    k2 = rng.derive_key(np.uint64(1), rng.KIND_LINEAGE, np.uint64(1))
    n = 100_000
    u1 = np.array([rng.unit_draw(k1, np.uint64(i)) for i in range(n)])
    u2 = np.array([rng.unit_draw(k2, np.uint64(i)) for i in range(n)])
    corr = np.corrcoef(u1, u2)[0, 1]
    assert abs(corr) < 5.0 / np.sqrt(n)
