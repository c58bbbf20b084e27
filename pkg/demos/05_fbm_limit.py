"""The fractional Brownian limit of windowed colour sums.

Colour each component iid, sum the colours over the first rho*n sites,
and standardize: as n grows the path converges to fractional Brownian
motion with Hurst index alpha + 1/2.  This demo measures the covariance
on a small grid, the Hurst exponent, and the Gaussianity of the
endpoint, at desk scale.
"""
import numpy as np

from coalsim import (ColouringLaw, IncrementLaw, compute_renewal_weights,
                     empirical_covariance, fbm_covariance, hurst_estimate,
                     ks_distance, make_ensemble)
from coalsim.paths import EXACT_SIGMA
from coalsim.special import normal_cdf

law = IncrementLaw.pure_power(0.39)
table = compute_renewal_weights(law, 1 << 15)
grid = (0.25, 0.5, 0.75, 1.0)

ens = make_ensemble(law, ColouringLaw.rademacher(0.5), 2_048, grid, 4_000,
                    cutoff_mult=10**4, normalization=EXACT_SIGMA,
                    seed=505, table=table)

target = fbm_covariance(grid, 0.5 + 0.39)
print("covariance, empirical vs limit (hurst 0.89):")
worst = 0.0
for a, s in enumerate(grid):
    for b, t in enumerate(grid):
        if a <= b:
            emp = empirical_covariance(ens, s, t)
            worst = max(worst, abs(emp - target[a, b]))
            print(f"  ({s:.2f},{t:.2f})  {emp:+.4f} vs {target[a, b]:+.4f}")
print(f"worst entry deviation {worst:.4f}")
print(f"variance lost to the trace cutoff, rigorous bound: "
      f"{table.window_bias_bound(2_048, 2_048 * 10**4):.4f}")
print("(a deeper cutoff buys the rest; the acceptance suite runs one)")

h = hurst_estimate(ens)
print(f"\nfitted hurst exponent  {h:.4f}  (target 0.8900)")

ks = ks_distance(ens.column(1.0), normal_cdf)
print(f"endpoint KS vs standard normal  {ks:.4f}")
