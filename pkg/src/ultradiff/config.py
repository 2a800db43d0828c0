"""Run configuration shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class RunConfig:
    """Knobs controlling truncations, trend thresholds, and report output.

    Every verdict embeds the config it was produced under, so thresholds
    are always auditable from the report itself.
    """

    truncation: int = 4096
    dp_cap: int = 512
    checkpoint_start: int = 8
    checkpoint_ratio: int = 2
    # a sup-statistic this large that keeps growing counts as refuting
    refute_threshold: float = 10.0
    # ... provided it also grew by at least this factor since the first checkpoint
    growth_factor: float = 2.0
    # tail within this factor of the midpoint counts as flat/bounded
    flat_factor: float = 1.05
    # a to-zero statistic must fall below this to count as vanishing
    eps: float = 0.1
    mode: str = "float"  # "float" | "exact"
    # the Beurling root-comparison condition as printed repeats the same
    # row index on both sides; the default reading varies the left index,
    # which is the only shape consistent with the two-row counterexamples
    literal_rai_beurling: bool = False
    output_format: str = "json"  # "json" | "csv"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.truncation < 2 or self.dp_cap < 2:
            raise ValueError("truncation and dp_cap must be >= 2")
        if self.checkpoint_start < 2 or self.checkpoint_ratio < 2:
            raise ValueError("checkpoint grid must be geometric with ratio >= 2")
        if min(self.refute_threshold, self.growth_factor, self.flat_factor, self.eps) <= 0:
            raise ValueError("thresholds must be positive")

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = RunConfig()


def checkpoints(K: int, cfg: RunConfig = DEFAULT_CONFIG) -> list[int]:
    """Geometric checkpoint indices <= K, always ending at K."""
    pts = []
    c = cfg.checkpoint_start
    while c < K:
        pts.append(c)
        c *= cfg.checkpoint_ratio
    pts.append(K)
    return pts
