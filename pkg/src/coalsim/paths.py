"""Coloured component sums and their fractional-Brownian scaling limit.

Components of the ancestral graph receive iid centered colours; S_t is the
colour sum over window sites 1..t and S_0 = 0.  The rescaled path
t -> S^(n)(t) = S_{nt} / sigma_n (linearly interpolated between integer
site counts) converges to fractional Brownian motion with Hurst index
alpha + 1/2.  This module draws ensembles of such paths, computes the exact
finite-n covariance from a renewal table, and evaluates the limiting
covariance for comparison.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .increments import IncrementLaw
from .lineages import ComponentPartition, _check_geometry, law_codes
from .renewal import RenewalTable
from .rng import KIND_COLOUR, as_seed, derive_key, stream64, to_unit

RADEMACHER = "rademacher"
CENTERED_UNIFORM = "centered-uniform"
CENTERED_TWO_POINT = "centered-two-point"

EXACT_SIGMA = "exact"
EMPIRICAL_SIGMA = "empirical"


@dataclass(frozen=True)
class ColouringLaw:
    """Centered colour distribution attached to components.

    rademacher(p): 2(1-p) with probability p, else -2p (plain signs at 1/2);
    centered_uniform(h): uniform on [-h, h];
    two_point(a, b, w): a with probability w, else b, with wa + (1-w)b = 0.
    """

    kind: str
    p1: float = 0.0
    p2: float = 0.0
    p3: float = 0.0

    def __post_init__(self):
        if self.kind == RADEMACHER:
            if not 0.0 < self.p1 < 1.0:
                raise ValueError("rademacher weight must lie in (0, 1)")
        elif self.kind == CENTERED_UNIFORM:
            if self.p1 <= 0.0:
                raise ValueError("uniform half-width must be positive")
        elif self.kind == CENTERED_TWO_POINT:
            a, b, w = self.p1, self.p2, self.p3
            if not 0.0 < w < 1.0:
                raise ValueError("two-point weight must lie in (0, 1)")
            if a == 0.0 or b == 0.0:
                raise ValueError("two-point values must be nonzero")
            if abs(w * a + (1.0 - w) * b) > 1e-12 * (abs(a) + abs(b)):
                raise ValueError("two-point law must be centered")
        else:
            raise ValueError(f"unknown colour kind {self.kind!r}")

    @classmethod
    def rademacher(cls, p: float = 0.5) -> "ColouringLaw":
        return cls(kind=RADEMACHER, p1=p)

    @classmethod
    def centered_uniform(cls, half_width: float = 1.0) -> "ColouringLaw":
        return cls(kind=CENTERED_UNIFORM, p1=half_width)

    @classmethod
    def two_point(cls, a: float, b: float, w: float) -> "ColouringLaw":
        return cls(kind=CENTERED_TWO_POINT, p1=a, p2=b, p3=w)

    def kernel_codes(self):
        code = {RADEMACHER: _kernels.COLOUR_RADEMACHER,
                CENTERED_UNIFORM: _kernels.COLOUR_UNIFORM,
                CENTERED_TWO_POINT: _kernels.COLOUR_TWO_POINT}[self.kind]
        return code, self.p1, self.p2, self.p3

    def second_moment(self) -> float:
        if self.kind == RADEMACHER:
            p = self.p1
            return 4.0 * p * (1.0 - p)
        if self.kind == CENTERED_UNIFORM:
            return self.p1 ** 2 / 3.0
        a, b, w = self.p1, self.p2, self.p3
        return w * a * a + (1.0 - w) * b * b

    def abs_third_moment(self) -> float:
        if self.kind == RADEMACHER:
            p = self.p1
            return 8.0 * p * (1.0 - p) * ((1.0 - p) ** 2 + p ** 2)
        if self.kind == CENTERED_UNIFORM:
            return self.p1 ** 3 / 4.0
        a, b, w = self.p1, self.p2, self.p3
        return w * abs(a) ** 3 + (1.0 - w) * abs(b) ** 3

    def fourth_moment(self) -> float:
        if self.kind == RADEMACHER:
            p = self.p1
            return 16.0 * p * (1.0 - p) * ((1.0 - p) ** 3 + p ** 3)
        if self.kind == CENTERED_UNIFORM:
            return self.p1 ** 4 / 5.0
        a, b, w = self.p1, self.p2, self.p3
        return w * a ** 4 + (1.0 - w) * b ** 4


def colour_and_sum(partition: ComponentPartition, colouring: ColouringLaw,
                   seed: int, replica: int = 0) -> np.ndarray:
    """Prefix colour sums S_0..S_n for one realized partition.

    Each component gets one colour, keyed by its label, from the colour
    stream of (seed, replica); unresolved components count as independent.
    Matches the batched kernels draw for draw on the same keys.
    """
    ckey = np.uint64(derive_key(np.uint64(seed), np.uint64(KIND_COLOUR),
                                np.uint64(replica)))
    code, c1, c2, c3 = colouring.kernel_codes()
    labels = partition.labels
    values = np.empty(len(labels), dtype=np.float64)
    cache = {}
    for v, root in enumerate(labels):
        root = int(root)
        if root not in cache:
            u = to_unit(stream64(ckey, np.uint64(root)))
            cache[root] = float(_kernels._colour_value(u, code, c1, c2, c3))
        values[v] = cache[root]
    out = np.zeros(len(labels) + 1, dtype=np.float64)
    np.cumsum(values, out=out[1:])
    return out


def coloured_sum_batch(law: IncrementLaw, colour: ColouringLaw, n: int,
                       reps: int, *, cutoff: int, seed: int, sites,
                       n_islands: int = 1):
    """Colour sums S_t at the given site counts, one row per replica."""
    _check_geometry(n, n_islands, cutoff)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    sites = np.asarray(sites, dtype=np.int64)
    if np.any(sites < 1) or np.any(sites > n) or np.any(np.diff(sites) < 0):
        raise ValueError("sites must be nondecreasing in [1, n]")
    lcode, inv_alpha, alpha, beta = law_codes(law)
    ccode, c1, c2, c3 = colour.kernel_codes()
    sums, ncomp, steps = _kernels.batch_colour_sums(
        as_seed(seed), reps, n, n_islands, lcode, inv_alpha, alpha, beta, cutoff,
        ccode, c1, c2, c3, sites)
    return sums, ncomp, int(steps)


def exact_sigma(table: RenewalTable, colour: ColouringLaw, n: int) -> float:
    """Exact standard deviation of S_n from the pair-coalescence grid."""
    return math.sqrt(colour.second_moment() * table.pair_sum(n))


def asymptotic_sigma(table: RenewalTable, colour: ColouringLaw,
                     n: int) -> float:
    """Limiting-form standard deviation sqrt(EY^2 C n^(2 alpha + 1))."""
    c = table.constants()
    a = table.law.alpha
    return math.sqrt(colour.second_moment() * c.variance_constant
                     * float(n) ** (2.0 * a + 1.0))


def combination_sigma(table: RenewalTable, colour: ColouringLaw,
                      sites, coeffs) -> float:
    """Exact standard deviation of sum_a coeffs[a] * S_{sites[a]}."""
    sites = np.asarray(sites, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if sites.shape != coeffs.shape or sites.ndim != 1:
        raise ValueError("sites and coeffs must be matching 1-d sequences")
    if np.any(sites < 1):
        raise ValueError("sites must be >= 1")
    var = 0.0
    for a in range(len(sites)):
        for b in range(len(sites)):
            var += (coeffs[a] * coeffs[b]
                    * table.rect_pair_sum(int(sites[a]), int(sites[b])))
    var *= colour.second_moment()
    if var <= 0.0:
        raise ValueError("combination has nonpositive variance")
    return math.sqrt(var)


@dataclass(frozen=True)
class PathEnsemble:
    """Replica batch of rescaled interpolated path values on a time grid."""

    values: np.ndarray
    grid: np.ndarray
    n: int
    sigma: float
    normalization: str
    colouring: ColouringLaw
    law: IncrementLaw
    cutoff: int
    n_components: np.ndarray

    @property
    def reps(self) -> int:
        return self.values.shape[0]

    def column(self, t: float) -> np.ndarray:
        hits = np.nonzero(np.isclose(self.grid, t, rtol=0.0,
                                     atol=1e-12))[0]
        if len(hits) != 1:
            raise ValueError(f"time {t!r} is not a grid point")
        return self.values[:, hits[0]]


def make_ensemble(law: IncrementLaw, colouring: ColouringLaw, n: int, grid,
                  reps: int, *, cutoff_mult: float,
                  normalization: str = EXACT_SIGMA, seed: int,
                  table: RenewalTable = None,
                  n_islands: int = 1) -> PathEnsemble:
    """Draw replica paths S^(n)(t) = S_{nt} / sigma_n on a time grid.

    Non-integer nt interpolates linearly between S_floor(nt) and the next
    site.  cutoff_mult sets the tracing depth as a multiple of n; components
    merging deeper stay split, which biases covariances downward by at most
    the renewal tail bound.  Exact normalization takes sigma_n from the
    table; empirical normalization uses the replica deviation of S_n itself.
    """
    fracs = np.asarray(grid, dtype=np.float64)
    if fracs.ndim != 1 or len(fracs) == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(fracs < 0.0):
        raise ValueError("grid times must be >= 0")
    if np.any(np.diff(fracs) <= 0.0):
        raise ValueError("grid times must be strictly increasing")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    pos = fracs * n
    base = np.floor(pos + 1e-9).astype(np.int64)
    part = pos - base
    part[part < 1e-9] = 0.0

    window = int(max(np.max(base + (part > 0)), n))
    cutoff = int(cutoff_mult * n)
    site_set = set()
    for m, f in zip(base, part):
        if m >= 1:
            site_set.add(int(m))
        if f > 0:
            site_set.add(int(m) + 1)
    site_set.add(n)
    sites = np.array(sorted(site_set), dtype=np.int64)

    if normalization == EXACT_SIGMA:
        if table is None:
            raise ValueError("exact normalization needs a renewal table")
        if table.law != law:
            raise ValueError("table was built for a different increment law")
        sigma = exact_sigma(table, colouring, n)
    elif normalization != EMPIRICAL_SIGMA:
        raise ValueError(f"unknown normalization {normalization!r}")

    sums, ncomp, _steps = coloured_sum_batch(
        law, colouring, window, reps, cutoff=cutoff, seed=seed, sites=sites,
        n_islands=n_islands)
    if normalization == EMPIRICAL_SIGMA:
        sigma = float(np.std(sums[:, int(np.searchsorted(sites, n))],
                             ddof=1))
        if sigma == 0.0:
            raise ValueError("degenerate ensemble: S_n is constant")

    col_of = {int(s): j for j, s in enumerate(sites)}
    values = np.zeros((reps, len(fracs)), dtype=np.float64)
    for j, (m, f) in enumerate(zip(base, part)):
        lo = sums[:, col_of[int(m)]] if m >= 1 else 0.0
        if f > 0:
            hi = sums[:, col_of[int(m) + 1]]
            values[:, j] = (lo + f * (hi - lo)) / sigma
        else:
            values[:, j] = lo / sigma

    return PathEnsemble(values=values, grid=fracs, n=n, sigma=float(sigma),
                        normalization=normalization, colouring=colouring,
                        law=law, cutoff=cutoff, n_components=ncomp)


def empirical_covariance(ensemble: PathEnsemble, s: float, t: float) -> float:
    """Unbiased sample covariance of S^(n)(s) and S^(n)(t) over replicas."""
    xs = ensemble.column(s)
    xt = ensemble.column(t)
    if len(xs) < 2:
        raise ValueError("need at least two replicas")
    return float(np.dot(xs - xs.mean(), xt - xt.mean()) / (len(xs) - 1))


def covariance_matrix(values: np.ndarray) -> np.ndarray:
    """Centered second-moment matrix of path samples (rows are replicas)."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need a (reps, grid) array with reps >= 2")
    centered = x - x.mean(axis=0, keepdims=True)
    return centered.T @ centered / (x.shape[0] - 1)


def hurst_estimate(ensemble: PathEnsemble) -> float:
    """Half the log-log slope of Var[S^(n)(t)] against t."""
    keep = ensemble.grid > 0.0
    if np.count_nonzero(keep) < 3:
        raise ValueError("need at least three positive grid times")
    logs = np.log(ensemble.grid[keep])
    logv = np.log(np.var(ensemble.values[:, keep], axis=0, ddof=1))
    slope = np.polyfit(logs, logv, 1)[0]
    return float(slope / 2.0)


def fbm_covariance(grid, hurst: float) -> np.ndarray:
    """Fractional-Brownian covariance (s^2H + t^2H - |t-s|^2H) / 2."""
    t = np.asarray(grid, dtype=np.float64)
    if not 0.0 < hurst <= 1.0:
        raise ValueError("hurst index must lie in (0, 1]")
    s = t[:, None]
    u = t[None, :]
    h2 = 2.0 * hurst
    return 0.5 * (s ** h2 + u ** h2 - np.abs(s - u) ** h2)


def finite_window_covariance(table: RenewalTable, n: int,
                             grid=(0.25, 0.5, 0.75, 1.0)) -> np.ndarray:
    """Exact covariance of the rescaled path at finite n.

    Entry (a, b) is Cov(S_{floor(n t_a)}, S_{floor(n t_b)}) / Var(S_n) from
    the pair-coalescence grid; the colour second moment cancels.  Grid times
    are snapped to integer site counts (no interpolation).
    """
    fracs = np.asarray(grid, dtype=np.float64)
    sites = np.floor(fracs * n + 1e-9).astype(np.int64)
    denom = table.pair_sum(n)
    k = len(sites)
    out = np.zeros((k, k), dtype=np.float64)
    for a in range(k):
        for b in range(a, k):
            if sites[a] >= 1 and sites[b] >= 1:
                v = table.rect_pair_sum(int(sites[a]), int(sites[b])) / denom
            else:
                v = 0.0
            out[a, b] = v
            out[b, a] = v
    return out


def weighted_stat_batch(law: IncrementLaw, colour: ColouringLaw, n: int,
                        reps: int, *, cutoff: int, seed: int, weights,
                        n_islands: int = 1):
    """Component-weighted smooth-test statistics, one row per replica.

    weights: (n, w) array of window weight columns; returns (t1, t2, sw,
    n_components) as documented on the kernel.
    """
    _check_geometry(n, n_islands, cutoff)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if weights.ndim == 1:
        weights = weights[:, None]
    if weights.shape[0] != n:
        raise ValueError("weights must have one row per window site")
    lcode, inv_alpha, alpha, beta = law_codes(law)
    ccode, c1, c2, c3 = colour.kernel_codes()
    t1, t2, sw, ncomp = _kernels.batch_weighted_stats(
        as_seed(seed), reps, n, n_islands, lcode, inv_alpha, alpha, beta, cutoff,
        ccode, c1, c2, c3, weights)
    return t1, t2, sw, ncomp


def quadruple_product_batch(law: IncrementLaw, colour: ColouringLaw, n: int,
                            reps: int, *, cutoff: int, seed: int, quads,
                            n_islands: int = 1):
    """Colour products, pair indicators and all-four-coalesced flags.

    quads: (Q, 4) window sites (i, j, k, l) in 1..n.  Returns per replica
    and quadruple: Y_i Y_j, Y_k Y_l, the indicators of i ~ j and k ~ l, and
    the indicator of all four sharing a component.
    """
    _check_geometry(n, n_islands, cutoff)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    quads = np.ascontiguousarray(quads, dtype=np.int64)
    if quads.ndim != 2 or quads.shape[1] != 4:
        raise ValueError("quads must have shape (Q, 4)")
    if np.any(quads < 1) or np.any(quads > n):
        raise ValueError("quad sites must lie in [1, n]")
    quads = quads - 1
    lcode, inv_alpha, alpha, beta = law_codes(law)
    ccode, c1, c2, c3 = colour.kernel_codes()
    return _kernels.batch_quadruple_products(
        as_seed(seed), reps, n, n_islands, lcode, inv_alpha, alpha, beta, cutoff,
        ccode, c1, c2, c3, quads)
