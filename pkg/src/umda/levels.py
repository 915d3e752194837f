"""Ranking of a sampled population by all bits except one focal position.

An individual's *level* is its fitness counted over the other n - 1 bits, so
sampling the focal bit can lift it by at most one level.  The cut level is
the topmost level such that strictly more than mu individuals lie in the
level below it or above; individuals strictly above the cut are selected no
matter what their focal bit is (1st class), while members of the level just
below the cut (the 2nd-class candidates) compete for the remaining slots and
are therefore biased toward a 1 at the focal position.

The decomposition is a pure observer: it recomputes the ranking from the raw
population and never influences the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitmodel import FrequencyVector, Population, sample_population
from .core import select_mu_best
from .rng import Pcg32


@dataclass(frozen=True)
class LevelDecomposition:
    """Level counts and selection-bias bookkeeping for one population."""

    focal_bit: int
    level_counts: np.ndarray        # C_i for level i in [0, n-1]
    counts_at_or_above: np.ndarray  # sum of level_counts from level i up
    cut_level: int                  # topmost level with > mu strictly below-or-at-cut mass
    count_at_or_above_cut: int
    #: Selection slots left for the candidate level once every individual
    #: above the cut is taken; clamped at 0 in the degenerate top-level case.
    open_slots: int
    candidate_count: int            # individuals exactly one level below the cut
    #: counts_at_or_above[cut_level - 1] - mu; always >= 1 by definition of
    #: the cut, and equals candidate_count - open_slots outside degeneracy.
    surplus_candidates: int
    first_class_ids: np.ndarray     # row indices with level > cut_level
    candidate_ids: np.ndarray       # row indices at level cut_level - 1
    #: True when more than mu individuals sit at the top level (only then can
    #: the guarantee count_at_or_above_cut <= mu fail).
    degenerate: bool


def decompose(
    pop: Population,
    mu: int,
    focal_bit: int,
    target: np.ndarray | None = None,
) -> LevelDecomposition:
    """Rank ``pop`` by fitness-without-the-focal-bit and locate the cut."""
    lam, n = pop.bits.shape
    if lam <= mu:
        raise ValueError(f"need lambda > mu, got lambda={lam} mu={mu}")
    if n < 2:
        raise ValueError("decomposition needs n >= 2")
    if target is None:
        focal_match = pop.bits[:, focal_bit]
    else:
        focal_match = pop.bits[:, focal_bit] == bool(target[focal_bit])
    levels = pop.fitness - focal_match
    level_counts = np.bincount(levels, minlength=n)
    at_or_above = np.cumsum(level_counts[::-1])[::-1]
    # cut = max{i : at_or_above[i-1] > mu}, capped at the top level n-1
    above_mu = np.nonzero(at_or_above > mu)[0]
    cut = min(int(above_mu[-1]) + 1, n - 1)
    count_above_cut = int(at_or_above[cut])
    return LevelDecomposition(
        focal_bit=focal_bit,
        level_counts=level_counts,
        counts_at_or_above=at_or_above,
        cut_level=cut,
        count_at_or_above_cut=count_above_cut,
        open_slots=max(0, mu - count_above_cut),
        candidate_count=int(level_counts[cut - 1]),
        surplus_candidates=int(at_or_above[cut - 1]) - mu,
        first_class_ids=np.nonzero(levels > cut)[0],
        candidate_ids=np.nonzero(levels == cut - 1)[0],
        degenerate=count_above_cut > mu,
    )


def second_class_count_distribution(
    p: FrequencyVector,
    mu: int,
    lam: int,
    focal_bit: int,
    trials: int,
    rng: Pcg32,
    target: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo sample of (open_slots, surplus_candidates) pairs.

    Repeatedly samples a fresh population from ``p`` and decomposes it;
    the open-slot mean scales like mu over the sampling standard deviation.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    open_slots = np.empty(trials, dtype=np.int64)
    surplus = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        pop = sample_population(p, lam, rng, target)
        dec = decompose(pop, mu, focal_bit, target)
        open_slots[i] = dec.open_slots
        surplus[i] = dec.surplus_candidates
    return open_slots, surplus


def focal_one_counts(
    p: FrequencyVector,
    mu: int,
    lam: int,
    focal_bit: int,
    trials: int,
    rng: Pcg32,
    target: np.ndarray | None = None,
) -> np.ndarray:
    """Ones at the focal position among the mu selected, per single step.

    Each trial runs one independent sample-and-select generation from the
    same frequency vector; the result is the next-generation one-count
    X_{t+1} whose distribution the dominance and drift checks examine.
    """
    out = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        pop = sample_population(p, lam, rng, target)
        selected = select_mu_best(pop, mu, rng)
        out[i] = int(selected.bits[:, focal_bit].sum())
    return out
