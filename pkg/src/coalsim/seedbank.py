"""N-island extension: dormant lineages hop islands while they jump back.

Sites live on Z x {0..N-1}; every site draws one heavy-tailed time jump and
an independent uniform island, so a pair of lineages can only merge when
both land on the same (time, island).  Island uniformity multiplies each
shared-site term after the start by 1/N, which turns the pair-coalescence
denominator into N + sum_{m>=1} q_m^2; island count 1 recovers the base
model exactly, draw for draw.
"""

from dataclasses import dataclass

import numpy as np

from .increments import IncrementLaw
from .lineages import (
    ComponentPartition,
    PairMeetBatch,
    components_on_window,
    decoupled_overlap_batch,
    mrca_pair_batch,
)
from .renewal import RenewalTable
from .special import gamma_value


@dataclass(frozen=True)
class SeedbankModel:
    """Increment law plus island count."""

    law: IncrementLaw
    n_islands: int

    def __post_init__(self):
        if self.n_islands < 1:
            raise ValueError("n_islands must be >= 1")


def _check_table(model: SeedbankModel, table: RenewalTable):
    if table.law != model.law:
        raise ValueError("table was built for a different increment law")


def pair_denominator(model: SeedbankModel, table: RenewalTable) -> float:
    """N + sum_{m>=1} q_m^2; equals sum_{m>=0} q_m^2 when N = 1."""
    _check_table(model, table)
    return model.n_islands - 1.0 + table.sum_q_sq()


def c_alpha_n(model: SeedbankModel, table: RenewalTable) -> float:
    """Front factor of the pair-coalescence asymptote at N islands."""
    _check_table(model, table)
    a = model.law.alpha
    return gamma_value(1.0 - 2.0 * a) / (
        pair_denominator(model, table)
        * gamma_value(a) * gamma_value(1.0 - a) ** 3)


def seedbank_pair_coalescence(model: SeedbankModel, table: RenewalTable,
                              gap: int) -> float:
    """P((0, k) ~ (gap, l)) for any islands k, l, from the renewal overlap."""
    if gap < 1:
        raise ValueError("gap must be >= 1")
    return table.overlap_mean(gap) / pair_denominator(model, table)


def seedbank_pair_bias_bound(model: SeedbankModel, table: RenewalTable,
                             gap: int, cutoff: int) -> float:
    """Cutoff-truncation bound on the pair probability, as in the base model."""
    if gap < 1:
        raise ValueError("gap must be >= 1")
    return table.product_sum_tail(gap, cutoff) / pair_denominator(model,
                                                                  table)


def seedbank_components(model: SeedbankModel, n: int, *, cutoff: int,
                        seed: int, replica: int = 0) -> ComponentPartition:
    """Ancestral partition of the full window [1..n] x islands."""
    return components_on_window(
        model.law, n, cutoff=cutoff, seed=seed, replica=replica,
        n_islands=model.n_islands, window_islands=model.n_islands)


def seedbank_pair_batch(model: SeedbankModel, gap: int, reps: int, *,
                        cutoff: int, seed: int, island_a: int = 0,
                        island_b: int = 0) -> PairMeetBatch:
    """First-meeting batch for sites (0, island_a) and (gap, island_b)."""
    return mrca_pair_batch(
        model.law, gap, reps, cutoff=cutoff, seed=seed,
        n_islands=model.n_islands, island_a=island_a, island_b=island_b)


def seedbank_moment_scaling(model: SeedbankModel, n_grid, reps: int, *,
                            cutoff_mult: float, seed: int, table=None):
    """Component-moment report over the full [1..n] x islands window.

    Each extra lineage in a merged k-tuple pays an island match, so the
    triple and quadruple probabilities pick up 1/N^2 and 1/N^3 prefactors.
    Compare reports at two island counts to test those ratios.
    """
    from .diagnostics import moment_scaling

    return moment_scaling(
        model.law, n_grid, reps, cutoff_mult=cutoff_mult, seed=seed,
        table=table, n_islands=model.n_islands,
        window_islands=model.n_islands)


def seedbank_overlap_batch(model: SeedbankModel, gap: int, reps: int, *,
                           depth: int, seed: int, island_a: int = 0,
                           island_b: int = 0) -> np.ndarray:
    """Decoupled shared-site counts; mean (1/N) sum q_m q_{m+gap} truncated.

    The m = 0 term is exceptional when gap = 0: the fixed starting islands
    either coincide or cannot meet, so use gap >= 1 for clean comparisons.
    """
    return decoupled_overlap_batch(
        model.law, gap, reps, depth=depth, seed=seed,
        n_islands=model.n_islands, island_a=island_a, island_b=island_b)
