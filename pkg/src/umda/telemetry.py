"""Per-generation measurement of the model's analytical quantities.

Two scalars drive the runtime analysis: the sampling variance
sum_i p_i (1 - p_i) of an offspring's fitness, and the potential
n - 1 - sum_i p_i, the total distance of the frequencies from the upper
border.  Border hits count raw updates that fell strictly outside
[1/n, 1 - 1/n] before capping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitmodel import FrequencyVector, Population


def sampling_variance(p: FrequencyVector) -> float:
    """sum_i p_i (1 - p_i): variance of one offspring's fitness."""
    v = p.values
    return float(np.sum(v * (1.0 - v)))


def potential(p: FrequencyVector) -> float:
    """n - 1 - sum_i p_i: zero when every frequency sits at 1 - 1/n."""
    return float(p.n - 1 - np.sum(p.values))


@dataclass(frozen=True)
class GenerationStats:
    """Telemetry record for one generation (after the frequency update)."""

    t: int
    sampling_variance: float
    potential: float
    lower_border_hits: int
    upper_border_hits: int
    min_frequency: float
    max_frequency: float
    at_lower_border: int
    at_upper_border: int
    best_fitness: int


@dataclass
class RunTelemetry:
    """Accumulated per-run telemetry; totals always match the record sums."""

    per_generation: list[GenerationStats] = field(default_factory=list)
    total_lower_border_hits: int = 0
    total_upper_border_hits: int = 0
    #: Optional subsampled snapshots of the full frequency vector, as
    #: (generation, values) pairs; populated when trajectory capture is on.
    trajectory: list[tuple[int, np.ndarray]] = field(default_factory=list)


def record_generation(
    p_next: FrequencyVector,
    lower_hits: np.ndarray,
    upper_hits: np.ndarray,
    pop: Population,
    t: int = 0,
) -> GenerationStats:
    """Assemble the telemetry record for generation ``t``; O(n)."""
    v = p_next.values
    return GenerationStats(
        t=t,
        sampling_variance=sampling_variance(p_next),
        potential=potential(p_next),
        lower_border_hits=int(np.count_nonzero(lower_hits)),
        upper_border_hits=int(np.count_nonzero(upper_hits)),
        min_frequency=float(v.min()),
        max_frequency=float(v.max()),
        at_lower_border=int(np.count_nonzero(v == p_next.lower_limit)),
        at_upper_border=int(np.count_nonzero(v == p_next.upper_limit)),
        best_fitness=int(pop.fitness.max()),
    )


def export_trajectory(telemetry: RunTelemetry, path: str) -> None:
    """Write captured frequency snapshots as semicolon-separated rows.

    Each row is the generation index followed by the n frequencies, printed
    with 6 significant digits.
    """
    from .experiments import format_decimal

    with open(path, "w", newline="\n") as fh:
        for t, values in telemetry.trajectory:
            cells = [str(t)] + [format_decimal(x) for x in values]
            fh.write(";".join(cells) + "\n")
