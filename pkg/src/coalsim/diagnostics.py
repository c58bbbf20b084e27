"""Statistical verification layer.

Exact targets (the pair-depth limit law, window covariance oracles, block
coefficient variances) are computed here or pulled from a renewal table;
Monte Carlo summaries come from the compiled tracers via lineages and
paths.  Everything returns plain numbers or frozen report objects so
acceptance checks can compare one side against the other.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .increments import IncrementLaw
from .lineages import ComponentPartition, component_moment_batch
from .paths import (
    ColouringLaw,
    PathEnsemble,
    combination_sigma,
    quadruple_product_batch,
    weighted_stat_batch,
)
from .renewal import RenewalTable
from .special import beta_value


@dataclass(frozen=True)
class BetaPrimeLaw:
    """Continuous law on (0, inf) with density x^(a-1)(1+x)^(a-1)/B(a, 1-2a).

    The rescaled pair meeting depth D_i / i converges to this law; it is the
    distribution of B / (1 - B) with B ~ Beta(a, 1 - 2a).
    """

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")

    @property
    def normalizer(self) -> float:
        return beta_value(self.alpha, 1.0 - 2.0 * self.alpha)

    def density(self, x: float) -> float:
        if x < 0.0:
            raise ValueError("x must be >= 0")
        if x == 0.0:
            return math.inf
        return x ** (self.alpha - 1.0) * (1.0 + x) ** (self.alpha - 1.0) \
            / self.normalizer

    def cdf(self, x: float) -> float:
        """Adaptive quadrature of the density, absolute error below 1e-8.

        The integrable singularity at 0 is removed by substituting y = t^a
        below 1; above 1 the slowly decaying tail is compactified by
        t -> u^(-1/(1-2a)), leaving bounded smooth integrands either way.
        """
        if x < 0.0:
            raise ValueError("x must be >= 0")
        if x == 0.0:
            return 0.0
        a = self.alpha
        y_hi = min(x, 1.0) ** a
        low, _ = quad(lambda y: (1.0 + y ** (1.0 / a)) ** (a - 1.0),
                      0.0, y_hi, epsabs=1e-10, limit=200)
        total = low / a
        if x > 1.0:
            lam = 1.0 - 2.0 * a
            u_lo = 0.0 if math.isinf(x) else x ** (-lam)
            high, _ = quad(lambda u: (1.0 + u ** (1.0 / lam)) ** (a - 1.0),
                           u_lo, 1.0, epsabs=1e-10, limit=200)
            total += high / lam
        return min(total / self.normalizer, 1.0)

    def cdf_array(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        uniq, inverse = np.unique(xs, return_inverse=True)
        vals = np.array([self.cdf(float(u)) for u in uniq])
        return vals[inverse].reshape(xs.shape)

    def upper_tail_bound(self, x: float) -> float:
        """Analytic bound on 1 - cdf(x): integrate t^(2a-2), which dominates
        the density above x."""
        if x <= 0.0:
            raise ValueError("x must be positive")
        lam = 1.0 - 2.0 * self.alpha
        return x ** -lam / (lam * self.normalizer)

    def truncated_cdf(self, x: float, upper: float) -> float:
        """CDF of the law conditioned on values at most upper."""
        if upper <= 0.0:
            raise ValueError("upper must be positive")
        if x >= upper:
            return 1.0
        return self.cdf(x) / self.cdf(upper)

    def truncated_cdf_array(self, xs, upper: float) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        out = self.cdf_array(np.minimum(xs, upper)) / self.cdf(upper)
        return np.minimum(out, 1.0)

    def sample(self, size: int, seed: int) -> np.ndarray:
        """Independent draws via B / (1 - B), B ~ Beta(a, 1 - 2a)."""
        rng = np.random.default_rng(seed)
        b = rng.beta(self.alpha, 1.0 - 2.0 * self.alpha, size=size)
        # the heavy upper tail can round B to 1.0; redraw those
        bad = b >= 1.0
        while bad.any():
            b[bad] = rng.beta(self.alpha, 1.0 - 2.0 * self.alpha,
                              size=int(bad.sum()))
            bad = b >= 1.0
        return b / (1.0 - b)


def ks_distance(sample, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a CDF callable."""
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    m = len(xs)
    if m == 0:
        raise ValueError("sample must be nonempty")
    if np.isnan(xs[-1]):
        raise ValueError("sample contains NaN values")
    try:
        f = np.asarray(cdf(xs), dtype=np.float64)
        if f.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([float(cdf(float(x))) for x in xs])
    hi = np.max(np.arange(1, m + 1) / m - f)
    lo = np.max(f - np.arange(0, m) / m)
    return float(max(hi, lo))


def fit_loglog_slope(xs, ys):
    """Least-squares slope of log y against log x, with its standard error."""
    lx = np.log(np.asarray(xs, dtype=np.float64))
    ly = np.log(np.asarray(ys, dtype=np.float64))
    if len(lx) < 3:
        raise ValueError("need at least three points")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    dx2 = np.sum((lx - lx.mean()) ** 2)
    se = math.sqrt(np.sum(resid ** 2) / (len(lx) - 2) / dx2)
    return float(slope), float(intercept), se


def triplet_probability(partition: ComponentPartition) -> float:
    """P(three uniform window picks share a component) = S3 / n^3."""
    return partition.size_power_sum(3) / partition.n_sites ** 3


def quadruplet_probability(partition: ComponentPartition) -> float:
    """P(four uniform window picks share a component) = S4 / n^4."""
    return partition.size_power_sum(4) / partition.n_sites ** 4


def match_probability_enumerated(partition: ComponentPartition,
                                 tuple_size: int) -> float:
    """Same probability by brute enumeration of all index tuples.

    Walks the full n_sites^tuple_size grid, so keep the window small; the
    point is an exact cross-check of the power-sum shortcut on one
    realized partition.
    """
    if tuple_size < 2:
        raise ValueError("tuple_size must be >= 2")
    labels = partition.labels
    if labels.size ** tuple_size > 10 ** 8:
        raise ValueError("window too large to enumerate")
    match = np.ones((labels.size,) * tuple_size, dtype=bool)
    for axis in range(1, tuple_size):
        shape = [1] * tuple_size
        shape[axis] = labels.size
        match &= labels.reshape(shape) == labels.reshape([-1] + [1] * (
            tuple_size - 1))
    return float(match.sum()) / labels.size ** tuple_size


@dataclass(frozen=True)
class MomentScalingReport:
    """Component size power sums across a window ladder, with fitted slopes.

    S_k(n) = sum over components of |component|^k.  E[S2(n)] equals
    pair_sum(n) exactly, up to the cutoff deficit bounded by
    bias_bound_s2.  Slopes are least-squares fits of log mean against
    log n; standard errors combine per-point Monte Carlo noise with the
    fit residuals.
    """

    n_grid: np.ndarray
    reps: int
    cutoff_mult: float
    mean_s2: np.ndarray
    se_s2: np.ndarray
    mean_s3: np.ndarray
    se_s3: np.ndarray
    mean_s4: np.ndarray
    se_s4: np.ndarray
    ncomp_mean: np.ndarray
    slope_s2: float
    slope_se_s2: float
    slope_s3: float
    slope_se_s3: float
    slope_s4: float
    slope_se_s4: float
    oracle_s2: np.ndarray
    bias_bound_s2: np.ndarray

    def bias_flags(self, threshold: float = 0.02) -> np.ndarray:
        if self.bias_bound_s2 is None:
            raise ValueError("no renewal table was supplied")
        return self.bias_bound_s2 > threshold


def moment_scaling(law: IncrementLaw, n_grid, reps: int, *,
                   cutoff_mult: float, seed: int,
                   table: RenewalTable = None, n_islands: int = 1,
                   window_islands: int = 1) -> MomentScalingReport:
    """Estimate E[S2], E[S3], E[S4] over a window ladder and fit slopes.

    The cutoff scales with the window (cutoff_mult * n), which keeps the
    relative truncation deficit constant across the ladder, so fitted
    slopes are undistorted; the per-n deficit bound is reported when a
    table is available.
    """
    n_grid = np.asarray(n_grid, dtype=np.int64)
    if len(n_grid) < 4 or np.any(np.diff(n_grid) <= 0):
        raise ValueError("n_grid must be ascending with at least 4 points")
    if cutoff_mult < 1:
        raise ValueError("cutoff_mult must be >= 1")
    k = len(n_grid)
    mean = np.zeros((3, k))
    se = np.zeros((3, k))
    ncomp_mean = np.zeros(k)
    for j, n in enumerate(n_grid):
        cutoff = int(cutoff_mult * int(n))
        batch = component_moment_batch(
            law, int(n), reps, cutoff=cutoff, seed=seed,
            n_islands=n_islands, window_islands=window_islands)
        ns = int(n) * window_islands
        assert np.all(batch.s2 <= float(ns) ** 2)
        assert np.all(batch.s3 <= ns * batch.s2)
        assert np.all(batch.s4 <= ns * batch.s3)
        for row, s in enumerate((batch.s2, batch.s3, batch.s4)):
            mean[row, j] = s.mean()
            se[row, j] = s.std(ddof=1) / math.sqrt(reps)
        ncomp_mean[j] = batch.n_components.mean()
    slopes = [fit_loglog_slope(n_grid, mean[row]) for row in range(3)]
    if table is not None:
        if table.law != law:
            raise ValueError("table was built for a different increment law")
        oracle = np.array([table.pair_sum(int(n)) * window_islands
                           for n in n_grid])
        bias = np.array([table.window_bias_bound(int(n),
                                                 int(cutoff_mult * int(n)))
                         for n in n_grid])
    else:
        oracle = None
        bias = None
    return MomentScalingReport(
        n_grid=n_grid, reps=reps, cutoff_mult=cutoff_mult,
        mean_s2=mean[0], se_s2=se[0], mean_s3=mean[1], se_s3=se[1],
        mean_s4=mean[2], se_s4=se[2], ncomp_mean=ncomp_mean,
        slope_s2=slopes[0][0], slope_se_s2=slopes[0][2],
        slope_s3=slopes[1][0], slope_se_s3=slopes[1][2],
        slope_s4=slopes[2][0], slope_se_s4=slopes[2][2],
        oracle_s2=oracle, bias_bound_s2=bias)


def stein_coefficients(m: int, rho_grid, weights) -> np.ndarray:
    """Blockwise window coefficients a_1..a_m from a rho ladder.

    rho_grid must increase to 1; site i (1-based) gets weights[g] for the
    first g with i <= rho_grid[g] * m.
    """
    rho = np.asarray(rho_grid, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if rho.shape != w.shape or rho.ndim != 1 or len(rho) == 0:
        raise ValueError("rho_grid and weights must be matching sequences")
    if np.any(np.diff(rho) <= 0.0) or rho[-1] != 1.0 or rho[0] <= 0.0:
        raise ValueError("rho_grid must increase to exactly 1")
    if np.all(w == 0.0):
        raise ValueError("all-zero coefficients")
    if m < len(rho):
        raise ValueError("window shorter than the coefficient ladder")
    edges = np.floor(rho * m + 1e-9).astype(np.int64)
    a = np.empty(m, dtype=np.float64)
    prev = 0
    for g in range(len(rho)):
        a[prev:edges[g]] = w[g]
        prev = edges[g]
    return a


def _block_quadratic(table: RenewalTable, m: int, rho_grid, weights) -> float:
    """sum_{i,j} a_i a_j P(i ~ j) for blockwise coefficients, from the table."""
    rho = np.asarray(rho_grid, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    edges = np.floor(rho * m + 1e-9).astype(np.int64)
    if np.any(np.diff(edges) <= 0) and len(edges) > 1:
        raise ValueError("rho ladder collapses for this window length")

    def rect(a, b):
        if a == 0 or b == 0:
            return 0.0
        return table.rect_pair_sum(int(a), int(b))

    total = 0.0
    lo_g = 0
    for g in range(len(edges)):
        lo_h = 0
        for h in range(len(edges)):
            cross = (rect(edges[g], edges[h]) - rect(lo_g, edges[h])
                     - rect(edges[g], lo_h) + rect(lo_g, lo_h))
            total += w[g] * w[h] * cross
            lo_h = edges[h]
        lo_g = edges[g]
    return total


def sigma_bar(table: RenewalTable, colour: ColouringLaw, m: int, rho_grid,
              weights) -> float:
    """Exact deviation of the coefficient-weighted window sum.

    sigma_bar^2 = EY^2 sum_{i,j} a_i a_j P(i ~ j), evaluated from the
    pair-coalescence grid blockwise.
    """
    quad_form = _block_quadratic(table, m, rho_grid, weights)
    var = colour.second_moment() * quad_form
    if var <= 0.0:
        raise ValueError("coefficients give a nonpositive variance")
    return math.sqrt(var)


def c_tilde(table: RenewalTable, m: int, rho_grid, weights) -> float:
    """Coefficient positivity ratio sum a_i a_j P(i~j) / sum P(i~j)."""
    return _block_quadratic(table, m, rho_grid, weights) / table.pair_sum(m)


@dataclass(frozen=True)
class SteinFactors:
    """The h-free multipliers of the smooth-test normal-distance bound.

    factor1 = sqrt(Var[sum_c Y_c^2 A_c^2]) / sigma_bar^2 and
    factor2 = E[sum_c |Y_c|^3 Abs_c A_c^2] / sigma_bar^3, with A_c the
    coefficient total of component c and Abs_c its absolute total.  Both
    vanish along n when the window obeys the pair and triple moment
    bounds, which is the testable content of the bound.
    """

    n: int
    reps: int
    cutoff: int
    rho_grid: tuple
    weights: tuple
    sigma_bar: float
    factor1: float
    se_factor1: float
    factor2: float
    se_factor2: float
    c_tilde: float


def stein_factors(table: RenewalTable, colour: ColouringLaw, n: int,
                  reps: int, *, cutoff: int, seed: int, rho_grid=(1.0,),
                  weights=(1.0,)) -> SteinFactors:
    """Estimate both smooth-test factors for one window and coefficient spec."""
    a = stein_coefficients(n, rho_grid, weights)
    sbar = sigma_bar(table, colour, n, rho_grid, weights)
    t1, t2, _sw, _ncomp = weighted_stat_batch(
        table.law, colour, n, reps, cutoff=cutoff, seed=seed,
        weights=a[:, None])
    t1 = t1[:, 0]
    t2 = t2[:, 0]
    r = len(t1)
    if r < 4:
        raise ValueError("need at least 4 replicas")
    v1 = float(np.var(t1, ddof=1))
    c4 = float(np.mean((t1 - t1.mean()) ** 4))
    var_of_v1 = max(c4 - v1 * v1 * (r - 3) / (r - 1), 0.0) / r
    factor1 = math.sqrt(v1) / sbar ** 2
    se_factor1 = math.sqrt(var_of_v1) / (2.0 * math.sqrt(v1)) / sbar ** 2 \
        if v1 > 0 else 0.0
    factor2 = float(t2.mean()) / sbar ** 3
    se_factor2 = float(t2.std(ddof=1)) / math.sqrt(r) / sbar ** 3
    return SteinFactors(
        n=n, reps=reps, cutoff=cutoff, rho_grid=tuple(float(x) for x in
                                                      rho_grid),
        weights=tuple(float(x) for x in weights), sigma_bar=sbar,
        factor1=factor1, se_factor1=se_factor1, factor2=factor2,
        se_factor2=se_factor2, c_tilde=c_tilde(table, n, rho_grid, weights))


@dataclass(frozen=True)
class CovarianceCheck:
    """One indicator-covariance comparison Cov[I_ij, I_kl] vs P(all four)."""

    quad: tuple
    lhs: float
    rhs: float
    se_diff: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def covariance_condition_check(law: IncrementLaw, n: int, reps: int, quads,
                               *, cutoff: int, seed: int):
    """Empirical Cov[I_{i~j}, I_{k~l}] against P(i~j~k~l), per quadruple.

    The exact law satisfies lhs <= rhs; the returned standard error is the
    first-order deviation of lhs - rhs for the acceptance margin.
    """
    quads = np.ascontiguousarray(quads, dtype=np.int64)
    colour = ColouringLaw.rademacher(0.5)
    _x, _y, ind_x, ind_y, all4 = quadruple_product_batch(
        law, colour, n, reps, cutoff=cutoff, seed=seed, quads=quads)
    out = []
    r = ind_x.shape[0]
    for qi in range(quads.shape[0]):
        x = ind_x[:, qi].astype(np.float64)
        y = ind_y[:, qi].astype(np.float64)
        a4 = all4[:, qi].astype(np.float64)
        xc = x - x.mean()
        yc = y - y.mean()
        lhs = float(np.dot(xc, yc) / (r - 1))
        rhs = float(a4.mean())
        dev = xc * yc - a4
        se = float(np.std(dev, ddof=1) / math.sqrt(r))
        out.append(CovarianceCheck(quad=tuple(int(v) for v in quads[qi]),
                                   lhs=lhs, rhs=rhs, se_diff=se))
    return out


def cramer_wold_samples(ensemble: PathEnsemble, table: RenewalTable,
                        coeffs) -> np.ndarray:
    """Coefficient combination of grid values, standardized exactly.

    Combines the ensemble's rescaled values with the given coefficients and
    restandardizes by the exact deviation of the corresponding combination
    of raw sums, so the limit is standard normal.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != ensemble.grid.shape:
        raise ValueError("need one coefficient per grid time")
    sites = np.floor(ensemble.grid * ensemble.n + 1e-9).astype(np.int64)
    if np.any(np.abs(sites - ensemble.grid * ensemble.n) > 1e-6):
        raise ValueError("grid times must land on integer site counts")
    sd = combination_sigma(table, ensemble.colouring, sites, coeffs)
    raw_combo = ensemble.values @ coeffs * ensemble.sigma
    return raw_combo / sd
