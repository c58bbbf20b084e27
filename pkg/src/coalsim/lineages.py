"""Ancestral components, pairwise meetings and decoupled overlaps.

Python-facing wrappers over the compiled tracers.  Every function takes an
explicit integer seed; replicas are keyed, not sequential, so results do not
depend on batch sizes or call order.  The cutoff argument bounds how deep
below the window lineages are followed: components that would merge below it
stay distinct, which biases statistics by at most the renewal tail bound
reported by RenewalTable.pair_bias_bound.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .increments import IncrementLaw, LOG_PERTURBED
from .rng import KIND_LINEAGE, as_seed, derive_key

MAX_CODE = 2 ** 61


def law_codes(law: IncrementLaw):
    """Flat numeric law representation for the compiled kernels."""
    code = _kernels.LAW_LOG_PERTURBED if law.variant == LOG_PERTURBED \
        else _kernels.LAW_PURE
    return code, 1.0 / law.alpha, law.alpha, law.beta


def _check_geometry(n: int, n_islands: int, cutoff: int,
                    window_islands: int = 1):
    if n < 1:
        raise ValueError("window length must be >= 1")
    if n_islands < 1:
        raise ValueError("n_islands must be >= 1")
    if not 1 <= window_islands <= n_islands:
        raise ValueError("window_islands must lie in [1, n_islands]")
    if n * window_islands >= 2 ** 31:
        raise ValueError("window site count must fit in int32")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if n_islands * (2 * cutoff + n + 2) >= MAX_CODE:
        raise ValueError("cutoff * n_islands too large for site codes")


@dataclass(frozen=True)
class ComponentPartition:
    """Partition of window sites into ancestral components.

    The window holds sites (t, k) for t = 1..n and k < window_islands, in
    order v = (t-1) * window_islands + k; with one window island this is just
    sites 1..n.  labels[v] is the smallest window index in the component of
    site v.  Components whose lineages all left the explored depth without
    merging are still open below the cutoff.
    """

    labels: np.ndarray
    n_components: int
    steps: int
    n: int
    n_islands: int
    window_islands: int
    cutoff: int

    @property
    def n_sites(self) -> int:
        return self.n * self.window_islands

    def component_sizes(self) -> np.ndarray:
        sizes = np.bincount(self.labels, minlength=self.n_sites)
        return np.sort(sizes[sizes > 0])[::-1]

    def size_power_sum(self, power: int) -> float:
        sizes = self.component_sizes().astype(np.float64)
        return float(np.sum(sizes ** power))


@dataclass(frozen=True)
class PairMeetBatch:
    """First-meeting outcomes for a batch of replica pairs."""

    met: np.ndarray
    depth: np.ndarray
    steps: int
    gap: int
    cutoff: int

    @property
    def met_fraction(self) -> float:
        return float(self.met.mean())

    @property
    def met_se(self) -> float:
        p = self.met_fraction
        return float(np.sqrt(p * (1.0 - p) / self.met.size))

    @property
    def met_depths(self) -> np.ndarray:
        return self.depth[self.met == 1]


def components_on_window(law: IncrementLaw, n: int, *, cutoff: int, seed: int,
                         replica: int = 0, n_islands: int = 1,
                         window_islands: int = 1) -> ComponentPartition:
    """Trace one replica of the ancestral partition of the site window."""
    _check_geometry(n, n_islands, cutoff, window_islands)
    code, inv_alpha, alpha, beta = law_codes(law)
    key = np.uint64(derive_key(np.uint64(seed), np.uint64(KIND_LINEAGE),
                               np.uint64(replica)))
    labels, n_components, steps = _kernels.trace_window(
        key, n, n_islands, window_islands, code, inv_alpha, alpha, beta,
        cutoff)
    return ComponentPartition(labels=labels, n_components=int(n_components),
                              steps=int(steps), n=n, n_islands=n_islands,
                              window_islands=window_islands, cutoff=cutoff)


@dataclass(frozen=True)
class MomentBatch:
    """Per-replica component size power sums over one window."""

    s2: np.ndarray
    s3: np.ndarray
    s4: np.ndarray
    n_components: np.ndarray
    steps: int


def component_moment_batch(law: IncrementLaw, n: int, reps: int, *,
                           cutoff: int, seed: int, n_islands: int = 1,
                           window_islands: int = 1) -> MomentBatch:
    """Per-replica component size sums S2, S3, S4 plus component counts."""
    _check_geometry(n, n_islands, cutoff, window_islands)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    code, inv_alpha, alpha, beta = law_codes(law)
    s2, s3, s4, ncomp, steps = _kernels.batch_component_stats(
        as_seed(seed), reps, n, n_islands, window_islands, code, inv_alpha, alpha,
        beta, cutoff)
    return MomentBatch(s2=s2, s3=s3, s4=s4, n_components=ncomp,
                       steps=int(steps))


def mrca_pair_batch(law: IncrementLaw, gap: int, reps: int, *, cutoff: int,
                    seed: int, n_islands: int = 1, island_a: int = 0,
                    island_b: int = 0) -> PairMeetBatch:
    """First common ancestral site of (0, island_a) and (gap, island_b)."""
    if gap < 0:
        raise ValueError("gap must be >= 0")
    if gap == 0 and island_a == island_b:
        raise ValueError("the two sites coincide")
    if not (0 <= island_a < n_islands and 0 <= island_b < n_islands):
        raise ValueError("islands must lie in [0, n_islands)")
    _check_geometry(max(gap, 1), n_islands, cutoff)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    code, inv_alpha, alpha, beta = law_codes(law)
    met, depth, steps = _kernels.pair_first_meet(
        as_seed(seed), reps, gap, n_islands, island_a, island_b, code, inv_alpha,
        alpha, beta, cutoff)
    return PairMeetBatch(met=met, depth=depth, steps=int(steps), gap=gap,
                         cutoff=cutoff)


def decoupled_overlap_batch(law: IncrementLaw, gap: int, reps: int, *,
                            depth: int, seed: int, n_islands: int = 1,
                            island_a: int = 0,
                            island_b: int = 0) -> np.ndarray:
    """Common-site counts of two independent walks from 0 and gap.

    Counts sites with time in [-depth, 0] only, so with one island the mean
    is exactly sum_{m=0..depth} q_m q_{m+gap} with no cutoff bias; with N
    islands every term after the fixed starting sites carries a 1/N factor.
    """
    if gap < 0:
        raise ValueError("gap must be >= 0")
    if not (0 <= island_a < n_islands and 0 <= island_b < n_islands):
        raise ValueError("islands must lie in [0, n_islands)")
    _check_geometry(max(gap, 1), n_islands, depth)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    code, inv_alpha, alpha, beta = law_codes(law)
    return _kernels.decoupled_overlap_counts(
        as_seed(seed), reps, gap, n_islands, island_a, island_b, code, inv_alpha,
        alpha, beta, depth)


def window_jumps(law: IncrementLaw, t_lo: int, t_hi: int, *, seed: int,
                 replica: int = 0, island: int = 0, n_islands: int = 1):
    """Replay the keyed jump (and island) draw at each site in [t_lo, t_hi)."""
    if t_hi <= t_lo:
        raise ValueError("need t_hi > t_lo")
    if not 0 <= island < n_islands:
        raise ValueError("island must lie in [0, n_islands)")
    if n_islands * (2 * max(abs(t_lo), abs(t_hi)) + 2) >= MAX_CODE:
        raise ValueError("site range too large for site codes")
    code, inv_alpha, alpha, beta = law_codes(law)
    key = np.uint64(derive_key(np.uint64(seed), np.uint64(KIND_LINEAGE),
                               np.uint64(replica)))
    return _kernels.window_jump_fields(
        key, t_lo, t_hi, island, n_islands, code, inv_alpha, alpha, beta)
