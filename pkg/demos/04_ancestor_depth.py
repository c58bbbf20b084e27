"""Ancestor depth: the rescaled meeting depth has a heavy-tailed limit.

Conditioned on coalescing, the depth of the most recent common ancestor
of two sites at gap i, divided by i, converges to a Beta-prime law.
This demo simulates the conditional depths, compares them to the limit
CDF renormalized to the observable range, and writes a histogram table.
"""
import csv
from pathlib import Path

import numpy as np

from coalsim import BetaPrimeLaw, IncrementLaw, ks_distance, mrca_pair_batch

law = IncrementLaw.pure_power(0.39)
gap, reps, mult = 500, 40_000, 200

batch = mrca_pair_batch(law, gap, reps, cutoff=mult * gap, seed=404)
sample = batch.met_depths / gap
print(f"gap {gap}, {reps} pairs, cutoff {mult}*gap: "
      f"{sample.size} coalesced ({batch.met_fraction:.3f})")

bp = BetaPrimeLaw(0.39)
# the cutoff censors the upper tail, so compare against the law
# renormalized to [0, mult]; the uncensored tail mass is quantified
ks = ks_distance(sample, lambda x: bp.truncated_cdf_array(x, float(mult)))
print(f"KS vs truncated limit law  {ks:.4f}")
print(f"mass above the cutoff in the limit law  {1 - bp.cdf(float(mult)):.4f}")
print(f"depth-zero atom (ancestor at the younger site)  "
      f"{np.mean(sample == 0):.4f} (vanishes like gap^-alpha)")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
edges = np.linspace(0.0, 20.0, 81)
hist, _ = np.histogram(sample, bins=edges, density=True)
mids = 0.5 * (edges[:-1] + edges[1:])
with open(out / "ancestor_depth_hist.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["x", "empirical_density", "limit_density"])
    for x, h in zip(mids, hist):
        w.writerow([f"{x:.3f}", f"{h:.6f}", f"{bp.density(x):.6f}"])
print(f"wrote {out / 'ancestor_depth_hist.csv'}")
