"""Renewal weights and exact coalescence oracles.

The weight q_n is the probability that the descending walk started at 0 with
jumps from an :class:`~coalsim.increments.IncrementLaw` ever visits -n; it
solves the self-referencing convolution

    q_0 = 1,   q_n = sum_{k=1..n} pmf(k) q_{n-k}.

Everything downstream is built from the table (q_0, ..., q_N):

* pair coalescence probabilities  P(0 ~ i) = sum_m q_m q_{m+i} / sum_m q_m^2,
* their window sums (the exact variance of coloured component sums),
* the strong-renewal ratio q_n * Gamma(a) Gamma(1-a) * n^(1-a) * L(n) -> 1,
* the asymptotic constants of the fractional-Brownian limit,
* the exact law of the pairwise most-recent-common-ancestor depth.

Truncated sums carry analytic tail corrections obtained from the renewal
asymptote; every corrected value reports its correction so callers can assert
correction/value ratios.
"""

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .increments import IncrementLaw, PURE_POWER
from .special import beta_value, gamma_value

# table size guard; override through the environment for bigger machines
MAX_TABLE_ENTRIES = int(os.environ.get("COALSIM_MAX_TABLE", str(1 << 25)))
_BYTES_PER_ENTRY = 120  # q + pmf + solver accumulators + fft scratch


@dataclass(frozen=True)
class AsymptoticConstants:
    """Constants of the scaling limit attached to one renewal table."""

    c_srt: float              # 1 / (Gamma(a) Gamma(1-a)), strong-renewal front factor
    beta_integral: float      # B(a, 1-2a) = integral of x^(a-1) (1+x)^(a-1)
    sum_q_sq: float           # sum_m q_m^2, tail-corrected
    c_alpha: float            # pair-coalescence front factor
    variance_constant: float  # c_alpha / (alpha (2 alpha + 1))


@dataclass(frozen=True)
class PairDetail:
    """Pair-coalescence value with its truncation bookkeeping."""

    gap: int
    value: float
    numerator: float
    numerator_tail: float
    denominator: float
    denominator_tail: float

    @property
    def tail_correction_ratio(self) -> float:
        return self.numerator_tail / self.numerator


def solve_self_convolution(source: np.ndarray, kernel: np.ndarray,
                           mode: str = "fast", base: int = 64) -> np.ndarray:
    """Solve x[n] = source[n] + sum_{k=1..n} kernel[k] x[n-k].

    mode "naive" runs the direct O(N^2) recursion with extended-precision
    accumulation; mode "fast" pushes completed half-blocks forward through
    real-FFT products, O(N log^2 N).  Both take source and kernel indexed
    from 0 (kernel[0] is ignored).
    """
    if len(kernel) != len(source):
        raise ValueError("source and kernel must have equal length")
    n = len(source)
    if mode == "naive":
        src = source.astype(np.longdouble)
        ker = kernel.astype(np.longdouble)
        x = np.zeros(n, dtype=np.longdouble)
        x[0] = src[0]
        for m in range(1, n):
            x[m] = src[m] + np.dot(ker[1:m + 1], x[m - 1::-1])
        return x.astype(np.float64)
    if mode != "fast":
        raise ValueError(f"unknown mode {mode!r}")

    x = source.astype(np.float64).copy()
    ker = kernel.astype(np.float64)

    def recurse(lo: int, hi: int):
        if hi - lo <= base:
            for m in range(max(lo, 1), hi):
                width = min(m - lo, m)
                if width > 0:
                    stop = m - 1 - width
                    x[m] += np.dot(ker[1:width + 1],
                                   x[m - 1:None if stop < 0 else stop:-1])
            return
        mid = (lo + hi) // 2
        recurse(lo, mid)
        left = x[lo:mid]
        band = ker[1:hi - lo]
        size = 1 << ((len(left) + len(band) - 1).bit_length())
        prod = np.fft.irfft(np.fft.rfft(left, size) * np.fft.rfft(band, size),
                            size)
        x[mid:hi] += prod[mid - lo - 1:hi - lo - 1]
        recurse(mid, hi)

    recurse(0, n)
    return x


def compute_renewal_weights(law: IncrementLaw, n_max: int,
                            mode: str = "fast") -> "RenewalTable":
    """Renewal-weight table (q_0, ..., q_{n_max}) for the given law."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max + 1 > MAX_TABLE_ENTRIES:
        required = (n_max + 1) * _BYTES_PER_ENTRY
        raise MemoryError(
            f"renewal table with n_max={n_max} requires about {required} bytes; "
            f"limit is {MAX_TABLE_ENTRIES * _BYTES_PER_ENTRY} "
            f"(raise COALSIM_MAX_TABLE to override)")
    pmf = law.pmf_array(n_max)
    source = np.zeros(n_max + 1, dtype=np.float64)
    source[0] = 1.0
    q = solve_self_convolution(source, pmf, mode=mode)
    return RenewalTable(law, q, mode)


def recursion_residual(table: "RenewalTable") -> float:
    """max_n |q[n] - sum_k pmf(k) q[n-k]|, recomputed directly."""
    q = table.q
    pmf = table.law.pmf_array(table.n_max)
    worst = 0.0
    for n in range(1, table.n_max + 1):
        direct = float(np.dot(pmf[1:n + 1], q[n - 1::-1][:n]))
        worst = max(worst, abs(float(q[n]) - direct))
    return worst


class RenewalTable:
    """Finite renewal-weight table with tail-corrected summation helpers."""

    def __init__(self, law: IncrementLaw, q: np.ndarray, mode: str = "fast"):
        self.law = law
        self.q = q
        self.mode = mode
        self._overlap = None

    @property
    def n_max(self) -> int:
        return len(self.q) - 1

    # -- asymptote helpers ----------------------------------------------------

    @property
    def c_srt(self) -> float:
        a = self.law.alpha
        return 1.0 / (gamma_value(a) * gamma_value(1.0 - a))

    def srt_ratio(self, n: int) -> float:
        """q_n over its strong-renewal asymptote; tends to 1."""
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n must lie in [1, {self.n_max}]")
        a = self.law.alpha
        return float(self.q[n]) * n ** (1.0 - a) * self.law.slow_part(n) / self.c_srt

    def _laguerre_tail(self, gap, x0) -> np.ndarray:
        """integral_{x0}^inf x^(a-1) (x+gap)^(a-1) / (L(x) L(x+gap)) dx.

        Substituting x = x0 e^s turns the integrand into a slowly varying
        factor times e^(-(1-2a)s), which a fixed Gauss-Laguerre rule handles
        for every gap at once.  Assembled in log space: the nodes reach x
        beyond the float range.
        """
        a = self.law.alpha
        lam = 1.0 - 2.0 * a
        nodes, weights = np.polynomial.laguerre.laggauss(48)
        s = nodes / lam
        gap = np.asarray(gap, dtype=np.float64)[..., None]
        x0 = np.asarray(x0, dtype=np.float64)[..., None]
        log_x = np.log(x0) + s
        slow = np.zeros_like(log_x)
        if self.law.variant != PURE_POWER:
            beta = self.law.beta
            log_e1 = math.log(math.log(math.e + 1.0))
            slow = beta * (np.log(np.logaddexp(1.0, log_x)) - log_e1)
            slow += beta * (np.log(np.logaddexp(1.0, log_x + np.log1p(
                gap * np.exp(-s) / x0))) - log_e1)
        log_w = ((2.0 * a - 1.0) * np.log(x0)
                 + (a - 1.0) * np.log1p(gap * np.exp(-s) / x0)
                 + slow)
        out = np.dot(np.exp(log_w), weights) / lam
        return out

    def _tail_product_integral(self, gap: int, x0: float) -> float:
        """Asymptote-based estimate of sum_{m >= ceil(x0)} q_m q_{m+gap}.

        Midpoint continuous sum of c^2 x^(a-1) (x+gap)^(a-1) / (L(x) L(x+gap));
        closed form through the regularized incomplete beta for pure-power
        laws, Gauss-Laguerre quadrature otherwise.
        """
        a = self.law.alpha
        c2 = self.c_srt ** 2
        if x0 <= 0:
            raise ValueError("tail integral needs a positive lower limit")
        if self.law.variant == PURE_POWER:
            if gap == 0:
                return c2 * x0 ** (2.0 * a - 1.0) / (1.0 - 2.0 * a)
            reg = betainc(1.0 - 2.0 * a, a, gap / (gap + x0))
            return c2 * gap ** (2.0 * a - 1.0) * beta_value(a, 1.0 - 2.0 * a) * float(reg)
        return c2 * float(self._laguerre_tail(float(gap), x0))

    def product_sum_tail(self, gap: int, m_from: int) -> float:
        """sum_{K > m_from} q_K q_{K+gap}: table part plus analytic remainder."""
        if gap < 0 or m_from < 0:
            raise ValueError("gap and m_from must be nonnegative")
        top = self.n_max - gap
        total = 0.0
        if m_from < top:
            total += float(np.dot(self.q[m_from + 1:top + 1],
                                  self.q[m_from + 1 + gap:self.n_max + 1]))
            total += self._tail_product_integral(gap, top + 0.5)
        else:
            total += self._tail_product_integral(gap, m_from + 0.5)
        return total

    # -- overlap grid ---------------------------------------------------------

    def _overlap_grid(self) -> np.ndarray:
        """ov[d] = sum_m q_m q_{m+d} for d = 0..n_max, tail-corrected."""
        if self._overlap is None:
            n = self.n_max + 1
            size = 1 << (2 * n - 1).bit_length()
            spec = np.fft.rfft(self.q, size)
            ov = np.fft.irfft(spec * np.conj(spec), size)[:n].copy()
            a = self.law.alpha
            d = np.arange(1, n, dtype=np.float64)
            x0 = self.n_max - d + 1.5  # first missing index minus a half
            if self.law.variant == PURE_POWER:
                reg = betainc(1.0 - 2.0 * a, a, d / (d + x0))
                corr = (self.c_srt ** 2 * d ** (2.0 * a - 1.0)
                        * beta_value(a, 1.0 - 2.0 * a) * reg)
            else:
                corr = np.empty(n - 1, dtype=np.float64)
                step = 1 << 15
                for lo in range(0, n - 1, step):
                    hi = min(lo + step, n - 1)
                    corr[lo:hi] = self._laguerre_tail(d[lo:hi], x0[lo:hi])
                corr *= self.c_srt ** 2
            ov[1:] += corr
            ov[0] += self._tail_product_integral(0, self.n_max + 1.5)
            self._overlap = ov
        return self._overlap

    def sum_q_sq(self) -> float:
        """sum_{m >= 0} q_m^2 with analytic tail."""
        return float(self._overlap_grid()[0])

    def constants(self) -> AsymptoticConstants:
        a = self.law.alpha
        c_srt = self.c_srt
        beta_integral = gamma_value(a) * gamma_value(1.0 - 2.0 * a) / gamma_value(1.0 - a)
        ssq = self.sum_q_sq()
        c_alpha = c_srt ** 2 * beta_integral / ssq
        return AsymptoticConstants(
            c_srt=c_srt,
            beta_integral=beta_integral,
            sum_q_sq=ssq,
            c_alpha=c_alpha,
            variance_constant=c_alpha / (a * (2.0 * a + 1.0)),
        )

    # -- pair coalescence -----------------------------------------------------

    def _check_gap(self, gap: int):
        if not 0 <= gap <= self.n_max // 2:
            raise ValueError(
                f"gap {gap} exceeds the reliable range [0, {self.n_max // 2}] "
                f"of this table; build a larger table")

    def overlap_mean(self, gap: int) -> float:
        """Expected shared-site count of two decoupled lineages at the gap."""
        self._check_gap(gap)
        return float(self._overlap_grid()[gap])

    def overlap_mean_truncated(self, gap: int, depth: int) -> float:
        """sum_{m=0..depth} q_m q_{m+gap}: no correction, exact table sum."""
        if depth + gap > self.n_max:
            raise ValueError("depth + gap exceeds the table")
        return float(np.dot(self.q[:depth + 1], self.q[gap:depth + 1 + gap]))

    def pair_details(self, gap: int) -> PairDetail:
        self._check_gap(gap)
        if gap == 0:
            raise ValueError("pair coalescence needs gap >= 1")
        ov = self._overlap_grid()
        num_tail = self._tail_product_integral(gap, self.n_max - gap + 1.5)
        den_tail = self._tail_product_integral(0, self.n_max + 1.5)
        return PairDetail(
            gap=gap,
            value=float(ov[gap] / ov[0]),
            numerator=float(ov[gap]),
            numerator_tail=num_tail,
            denominator=float(ov[0]),
            denominator_tail=den_tail,
        )

    def pair_coalescence(self, gap: int) -> float:
        """P(0 ~ gap): probability the two sites share a component."""
        self._check_gap(gap)
        if gap == 0:
            return 1.0
        ov = self._overlap_grid()
        return float(ov[gap] / ov[0])

    def pair_grid(self, k_max: int) -> np.ndarray:
        """P(0 ~ d) for d = 0..k_max as one array (entry 0 is 1)."""
        self._check_gap(k_max)
        ov = self._overlap_grid()
        out = ov[:k_max + 1] / ov[0]
        out = out.copy()
        out[0] = 1.0
        return out

    def pair_sum(self, n: int) -> float:
        """sum_{i,j in window of n} P(i ~ j); the exact component-sum variance
        divided by the colour second moment."""
        self._check_gap(max(0, n - 1))
        if n < 1:
            raise ValueError("n must be >= 1")
        grid = self.pair_grid(n - 1)
        d = np.arange(1, n, dtype=np.float64)
        return float(n + 2.0 * np.dot(n - d, grid[1:]))

    def rect_pair_sum(self, a: int, b: int) -> float:
        """sum_{i=1..a, j=1..b} P(|i - j|) for the covariance oracle."""
        if a < 1 or b < 1:
            raise ValueError("window ends must be >= 1")
        lo, hi = (a, b) if a <= b else (b, a)
        self._check_gap(hi - 1)
        grid = self.pair_grid(hi - 1)
        d = np.arange(1, hi, dtype=np.float64)
        count = np.minimum(lo, hi - d) + np.maximum(0.0, lo - d)
        return float(lo + np.dot(count, grid[1:]))

    def pair_bias_bound(self, gap: int, cutoff: int) -> float:
        """Upper bound for P(coalescence deeper than the cutoff) at this gap.

        sum_{K > cutoff} q_K q_{K+gap} / sum q^2 dominates the probability of
        a first meeting below the cutoff, by the first-meet decomposition of
        the decoupled overlap.
        """
        return self.product_sum_tail(gap, cutoff) / self.sum_q_sq()

    def window_bias_bound(self, n: int, cutoff: int) -> float:
        """Relative deficit bound for window pair statistics at a cutoff.

        Summing the per-gap bias bound over all site pairs of a length-n
        window and dividing by pair_sum(n) bounds the relative shortfall of
        simulated E[S2] (equally, of any window covariance entry) caused by
        retiring lineages at the cutoff.  The deficit decays like
        (n / cutoff)^(1 - 2 alpha), so it shrinks slowly: budget cutoffs
        accordingly.
        """
        self._check_gap(max(0, n - 1))
        tails = np.array([self.product_sum_tail(d, cutoff)
                          for d in range(n)])
        count = 2.0 * (n - np.arange(n, dtype=np.float64))
        count[0] = n
        return float(np.dot(count, tails)
                     / (self.sum_q_sq() * self.pair_sum(n)))

    # -- exact pairwise MRCA depth law ---------------------------------------

    def mrca_depth_pmf(self, gap: int, k_max: int) -> np.ndarray:
        """f[k] = P(the pair at this gap first meets at depth k), k = 0..k_max.

        Solves the deconvolution q_K q_{K+gap} = sum_k f[k] q^2_{K-k}, the
        exact decomposition of the decoupled overlap at the first meeting.
        """
        if gap < 1:
            raise ValueError("gap must be >= 1")
        if k_max + gap > self.n_max:
            raise ValueError("k_max + gap exceeds the table")
        source = self.q[:k_max + 1] * self.q[gap:gap + k_max + 1]
        kernel = np.zeros(k_max + 1, dtype=np.float64)
        kernel[1:] = -(self.q[1:k_max + 1] ** 2)
        return solve_self_convolution(source, kernel, mode="fast")
