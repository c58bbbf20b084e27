"""Islands: the same graph with sites split across N populations.

Sites carry an island mark; a lineage jumps back in time exactly as
before but lands on a uniformly random island, so pairs on different
islands still coalesce.  One island reduces to the base model exactly;
N islands divide every pair-coalescence rate by the same constant.
"""
import numpy as np

from coalsim import (IncrementLaw, SeedbankModel, c_alpha_n,
                     compute_renewal_weights, mrca_pair_batch,
                     seedbank_pair_batch, seedbank_pair_coalescence)
from coalsim.seedbank import seedbank_pair_bias_bound

law = IncrementLaw.pure_power(0.39)
table = compute_renewal_weights(law, 1 << 15)

one = SeedbankModel(law, 1)
five = SeedbankModel(law, 5)

p1 = seedbank_pair_coalescence(one, table, 50)
assert p1 == table.pair_coalescence(50)
print(f"N=1 reduces to the base model exactly: p(50) = {p1:.5f}")

ssq = table.sum_q_sq()
ratio = seedbank_pair_coalescence(five, table, 50) / p1
print(f"N=5 divides every rate by the island factor: "
      f"{ratio:.6f} = ssq/(4+ssq) = {ssq / (4 + ssq):.6f}")

print(f"asymptotic front factor rescales the same way: "
      f"{c_alpha_n(five, table):.5f} vs {c_alpha_n(one, table):.5f}")

# simulate a cross-island pair and check the exact formula; as always
# the finite trace cutoff under-counts deep coalescences by a bounded
# amount, so the certificate is 3 SE plus the bias bound
gap, reps = 20, 40_000
batch = seedbank_pair_batch(five, gap, reps, cutoff=10**5, seed=707,
                            island_a=0, island_b=3)
p = seedbank_pair_coalescence(five, table, gap)
bias = seedbank_pair_bias_bound(five, table, gap, 10**5)
print(f"\ncross-island pair at gap {gap}: mc {batch.met_fraction:.5f} "
      f"vs exact {p:.5f}, dev {batch.met_fraction - p:+.5f} "
      f"(3 SE + bias = {3 * batch.met_se + bias:.5f})")
assert abs(batch.met_fraction - p) <= 3 * batch.met_se + bias

# same-seed batches on one island reproduce the base simulator bitwise
base = mrca_pair_batch(law, gap, 2_000, cutoff=10**4, seed=707)
red = seedbank_pair_batch(one, gap, 2_000, cutoff=10**4, seed=707)
assert np.array_equal(base.met, red.met) and np.array_equal(base.depth,
                                                            red.depth)
print("single-island batch is bitwise identical to the base simulator")
