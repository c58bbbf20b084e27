"""Heavy-tailed increment laws on the positive integers.

A law here is a probability distribution for the downward jump R attached to
a lattice site, specified through its survival function ``tail(n) = P(R >= n)``
with ``tail(1) = 1`` and ``tail(n) = n^(-alpha) * slow_part(n)`` for an
exponent ``alpha`` in (0, 1/2) and a slowly varying factor.  Two variants:

* pure-power: ``tail(n) = n^(-alpha)`` exactly;
* log-perturbed: ``tail(n) proportional to n^(-alpha) * ln(e + n)^(-beta)``,
  renormalized so that ``tail(1) = 1``.

Sampling is by tail inversion and is exact: ``P(sample(law, u) >= n)`` equals
``tail(n)`` for uniform u.  RNG state lives outside this module; every sampler
takes explicit uniforms.
"""

import math
from dataclasses import dataclass

import numpy as np

PURE_POWER = "pure-power"
LOG_PERTURBED = "log-perturbed"

# vectorized samples above this are reported as the clamp itself so that
# positions stay inside int64: tracers retire lineages below their depth
# cutoff, so a position is at worst one jump below it and 2^61 leaves room.
SAMPLE_CLAMP = np.int64(2) ** 61

# float64 resolves integer boundaries only below this; larger samples skip
# the off-by-one adjustment of the inversion
_EXACT_LIMIT = 1 << 52

# scalar samples cap here, safely inside the float range
_SCALAR_CAP = 1 << 512


@dataclass(frozen=True)
class IncrementLaw:
    """Jump law with polynomial survival function of index alpha in (0, 1/2)."""

    alpha: float
    variant: str = PURE_POWER
    beta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if self.variant not in (PURE_POWER, LOG_PERTURBED):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.variant == PURE_POWER and self.beta != 0.0:
            raise ValueError("pure-power law takes no beta")

    @classmethod
    def pure_power(cls, alpha: float) -> "IncrementLaw":
        return cls(alpha=alpha)

    @classmethod
    def log_perturbed(cls, alpha: float, beta: float) -> "IncrementLaw":
        return cls(alpha=alpha, variant=LOG_PERTURBED, beta=beta)

    # -- survival function and pmf ------------------------------------------

    def tail(self, n):
        """P(R >= n) for integer n >= 1 (scalar or array)."""
        n_arr = np.asarray(n, dtype=np.float64)
        if np.any(n_arr < 1):
            raise ValueError("tail is defined for n >= 1")
        out = n_arr ** (-self.alpha)
        if self.variant == LOG_PERTURBED:
            out = out * self._log_factor(n_arr)
        if np.isscalar(n) or n_arr.ndim == 0:
            return float(out)
        return out

    def slow_part(self, x):
        """Slowly varying factor L with tail(x) = x^(-alpha) * L(x)."""
        x_arr = np.asarray(x, dtype=np.float64)
        if self.variant == PURE_POWER:
            out = np.ones_like(x_arr)
        else:
            out = self._log_factor(x_arr)
        if np.isscalar(x) or x_arr.ndim == 0:
            return float(out)
        return out

    def _log_factor(self, x):
        return (np.log(math.e + x) / math.log(math.e + 1.0)) ** (-self.beta)

    def pmf(self, n):
        """P(R = n) = tail(n) - tail(n + 1); positive for every n >= 1."""
        n_arr = np.asarray(n, dtype=np.float64)
        if np.any(n_arr < 1):
            raise ValueError("pmf is defined for n >= 1")
        out = np.asarray(self.tail(n_arr)) - np.asarray(self.tail(n_arr + 1.0))
        if np.isscalar(n) or n_arr.ndim == 0:
            return float(out)
        return out

    def pmf_array(self, n_max: int) -> np.ndarray:
        """pmf on 1..n_max as an array indexed 0..n_max (entry 0 is zero).

        Consecutive survival values are within a factor two of each other, so
        each difference is exact in double precision and the array telescopes
        to 1 - tail(n_max + 1) at machine precision.
        """
        n = np.arange(1, n_max + 2, dtype=np.float64)
        t = np.asarray(self.tail(n))
        out = np.zeros(n_max + 1, dtype=np.float64)
        out[1:] = t[:-1] - t[1:]
        return out

    # -- sampling -------------------------------------------------------------

    def sample(self, u: float) -> int:
        """Tail inversion of a uniform u in (0, 1).

        Returns the n >= 1 with tail(n) >= u > tail(n + 1); for the
        pure-power law this is floor(u^(-1/alpha)).  The inversion is exact
        whenever the result is below 2^52; beyond that doubles cannot
        separate consecutive integers, so the nearest representable value is
        returned, capped at 2^512 where doubles would overflow.
        """
        if not 0.0 < u < 1.0:
            raise ValueError(f"u must lie strictly in (0, 1), got {u}")
        if self.variant == PURE_POWER:
            if -math.log(u) / self.alpha >= 512.0 * math.log(2.0):
                return _SCALAR_CAP
            x = u ** (-1.0 / self.alpha)
            r = int(x)
            if r >= _EXACT_LIMIT:
                return r
            if r < 1:
                r = 1
            # float pow can misplace the integer boundary by one ulp
            while self.tail(r + 1) >= u:
                r += 1
            while r > 1 and self.tail(r) < u:
                r -= 1
            return r
        return self._sample_by_bisection(u)

    def _sample_by_bisection(self, u: float) -> int:
        if self.tail(2) < u:
            return 1
        hi = 2
        while self.tail(hi + 1) >= u:
            if hi >= _SCALAR_CAP:
                return _SCALAR_CAP
            hi *= 2
        lo = hi // 2
        # invariant: tail(lo + 1) >= u > tail(hi + 1)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.tail(mid + 1) >= u:
                lo = mid
            else:
                hi = mid
        return hi

    def sample_many(self, u: np.ndarray) -> np.ndarray:
        """Vectorized tail inversion, clamped at SAMPLE_CLAMP.

        Matches sample() exactly below 2^52; the astronomically rare draws
        above that land within float resolution and cap at the clamp so the
        int64 result cannot overflow.
        """
        u = np.asarray(u, dtype=np.float64)
        if np.any((u <= 0.0) | (u >= 1.0)):
            raise ValueError("uniforms must lie strictly in (0, 1)")
        if self.variant == PURE_POWER:
            with np.errstate(over="ignore"):
                x = u ** (-1.0 / self.alpha)
            r = np.minimum(x, float(SAMPLE_CLAMP)).astype(np.int64)
            small = r < _EXACT_LIMIT
            rs = np.maximum(r[small], 1).astype(np.float64)
            bump = np.asarray(self.tail(rs + 1.0)) >= u[small]
            rs = rs + bump
            drop = (rs > 1) & (np.asarray(self.tail(rs)) < u[small])
            r[small] = (rs - drop).astype(np.int64)
            return r
        vals = [min(self._sample_by_bisection(float(v)), int(SAMPLE_CLAMP))
                for v in u]
        return np.array(vals, dtype=np.int64)

    # -- diagnostics ----------------------------------------------------------

    def doney_ratio_max(self, n_max: int) -> float:
        """max over n <= n_max of n * pmf(n) / tail(n + 1).

        Finite and stabilizing near alpha; boundedness of the full supremum
        is the aperiodic strong-renewal criterion this package relies on.
        """
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        best = 0.0
        start = 1
        chunk = 1 << 20
        while start <= n_max:
            stop = min(n_max, start + chunk - 1)
            n = np.arange(start, stop + 1, dtype=np.float64)
            t = np.asarray(self.tail(n))
            t1 = np.asarray(self.tail(n + 1.0))
            best = max(best, float(np.max(n * (t - t1) / t1)))
            start = stop + 1
        return best
