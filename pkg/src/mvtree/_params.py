"""Growth hyperparameters shared by the splitter and the tree grower."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GrowParams:
    """Stopping rules and split-search configuration.

    ``alpha`` is the significance level of the histogram routing test.
    ``max_references`` caps the number of reference objects tried per
    histogram column per node (seeded uniform subsample); None tries all.
    ``weighted_ranks`` makes histogram rank samples carry bin frequencies
    as weights instead of one unit observation per bin.
    """

    alpha: float = 0.05
    max_depth: int = 10
    min_node_size: int = 5
    min_delta: float = 0.0
    min_child_size: int = 1
    max_references: int | None = None
    seed: int = 0
    weighted_ranks: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.min_node_size < 1:
            raise ValueError("min_node_size must be at least 1")
        if self.min_delta < 0:
            raise ValueError("min_delta must be non-negative")
        if self.min_child_size < 1:
            raise ValueError("min_child_size must be at least 1")
        if self.max_references is not None and self.max_references < 1:
            raise ValueError("max_references must be at least 1 when set")
