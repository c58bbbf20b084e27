"""Keyed counter-based random streams.

Every random quantity in this package is a pure function of a 64-bit key and a
64-bit counter, built from the splitmix64 output function.  Keys are derived
hierarchically (master seed -> stream kind -> replica -> draw counter), so

* replicas are independent of thread scheduling and can be reduced in index
  order, and
* site-indexed draws can be replayed: rerunning with a deeper cutoff reuses
  the identical increment at every previously visited site.

Stream kinds partition the key space; lineage increments and component
colours never share a key.
"""

import numpy as np
from numba import njit, uint64, float64

GOLDEN = np.uint64(0x9E3779B97F4A7C15)

# stream kinds (keyspace partition)
KIND_LINEAGE = 1
KIND_COLOUR = 2
KIND_ISLAND = 3
KIND_PAIR = 4
KIND_OVERLAP = 5
KIND_CHUNK = 6


@njit(uint64(uint64), inline="always", cache=True)
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(uint64(uint64, uint64), inline="always", cache=True)
def stream64(key, counter):
    """counter-th output of the splitmix64 stream seeded with key."""
    return mix64(key + counter * GOLDEN)


@njit(float64(uint64), inline="always", cache=True)
def to_unit(h):
    """Map a 64-bit word to the open interval (0, 1)."""
    return (float64(h >> np.uint64(11)) + 0.5) * (2.0 ** -53)


@njit(uint64(uint64, uint64, uint64), inline="always", cache=True)
def derive_key(master, kind, index):
    """Subkey for (stream kind, replica index) under a master seed."""
    return stream64(stream64(uint64(master), uint64(kind)), uint64(index))


@njit(float64(uint64, uint64), inline="always", cache=True)
def unit_draw(key, counter):
    return to_unit(stream64(key, counter))


def as_seed(seed: int) -> np.uint64:
    """Canonical unsigned 64-bit master seed for kernel calls."""
    return np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)


def replica_keys(master: int, kind: int, reps: int) -> np.ndarray:
    """Vector of per-replica subkeys, reduced in replica-index order."""
    master_u = np.uint64(master & 0xFFFFFFFFFFFFFFFF)
    out = np.empty(reps, dtype=np.uint64)
    for r in range(reps):
        out[r] = derive_key(master_u, np.uint64(kind), np.uint64(r))
    return out


def site_uniform(key: int, site: int, subdraw: int = 0) -> float:
    """Uniform draw attached to a lattice site (negative sites allowed)."""
    code = np.uint64((((int(site) << 1) + subdraw) & 0xFFFFFFFFFFFFFFFF))
    return float(unit_draw(np.uint64(key), code))
