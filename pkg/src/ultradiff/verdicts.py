"""Three-valued verdicts for conditions quantified over all orders.

A condition of the shape "there is a constant C such that ... for all k"
cannot be decided from a finite prefix.  The computable surrogate used
throughout: evaluate the relevant statistic on a geometric checkpoint
grid and classify the trend.  REFUTED always carries a witness; a single
large value never refutes on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import RunConfig, DEFAULT_CONFIG


class Status(str, Enum):
    HOLDS_UP_TO = "HOLDS_UP_TO"
    REFUTED = "REFUTED"
    ESTIMATE = "ESTIMATE"


Checkpoint = tuple[object, float]  # (index, statistic); index may exceed int64


@dataclass(frozen=True)
class Verdict:
    status: Status
    truncation: int
    checkpoints: tuple[Checkpoint, ...]
    constant_estimate: float
    witness: Optional[tuple] = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.status is Status.REFUTED and self.witness is None:
            raise ValueError("a refutation must carry a witness")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS_UP_TO

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "truncation": self.truncation,
            "checkpoints": [[str(k) if isinstance(k, int) and k.bit_length() > 62 else k, s]
                            for k, s in self.checkpoints],
            "constant_estimate": self.constant_estimate,
            "witness": list(self.witness) if self.witness is not None else None,
            "note": self.note,
        }


def _first_mid_last(stats: list[float]) -> tuple[float, float, float]:
    return stats[0], stats[len(stats) // 2], stats[-1]


def bounded_verdict(
    points: list[Checkpoint],
    K: int,
    cfg: RunConfig = DEFAULT_CONFIG,
    witness: Optional[tuple] = None,
    witness_threshold: float = 1.0,
    note: str = "",
) -> Verdict:
    """Verdict for "the statistic admits a finite sup".

    `points` are running-sup values at checkpoints.  An explicitly supplied
    witness (e.g. from sparse evaluation at far-out indices) refutes when
    its value exceeds `witness_threshold`.
    """
    stats = [s for _, s in points]
    const = max(stats)
    if witness is not None and witness[-1] > witness_threshold:
        return Verdict(Status.REFUTED, K, tuple(points), max(const, witness[-1]),
                       witness=witness, note=note or "sparse witness")
    first, mid, last = _first_mid_last(stats)
    if (last >= cfg.refute_threshold and last >= cfg.growth_factor * first
            and last > 1.02 * mid):
        w = max(points, key=lambda p: p[1])
        return Verdict(Status.REFUTED, K, tuple(points), const,
                       witness=(w[0], w[1]), note=note or "growing sup trend")
    if last <= cfg.flat_factor * mid:
        return Verdict(Status.HOLDS_UP_TO, K, tuple(points), const, note=note)
    return Verdict(Status.ESTIMATE, K, tuple(points), const, note=note)


def to_zero_verdict(points: list[Checkpoint], K: int,
                    cfg: RunConfig = DEFAULT_CONFIG, note: str = "") -> Verdict:
    """Verdict for "the statistic tends to 0" (the strict inclusion shape)."""
    stats = [s for _, s in points]
    const = max(stats)
    first, mid, last = _first_mid_last(stats)
    if last < cfg.eps and last <= first:
        return Verdict(Status.HOLDS_UP_TO, K, tuple(points), const, note=note)
    if last >= cfg.eps and last >= 0.95 * mid:
        w = points[-1]
        return Verdict(Status.REFUTED, K, tuple(points), const,
                       witness=(w[0], w[1]), note=note or "statistic not vanishing")
    return Verdict(Status.ESTIMATE, K, tuple(points), const, note=note)


def to_infinity_verdict(points: list[Checkpoint], K: int,
                        cfg: RunConfig = DEFAULT_CONFIG, note: str = "") -> Verdict:
    """Verdict for "the statistic tends to infinity"."""
    stats = [s for _, s in points]
    const = max(stats)
    first, mid, last = _first_mid_last(stats)
    if last >= cfg.growth_factor * first and last > 1.02 * mid:
        return Verdict(Status.HOLDS_UP_TO, K, tuple(points), const, note=note)
    if last <= cfg.flat_factor * first:
        w = points[-1]
        return Verdict(Status.REFUTED, K, tuple(points), const,
                       witness=(w[0], w[1]), note=note or "flat trend")
    return Verdict(Status.ESTIMATE, K, tuple(points), const, note=note)


def positive_liminf_verdict(points: list[Checkpoint], K: int,
                            cfg: RunConfig = DEFAULT_CONFIG, note: str = "") -> Verdict:
    """Verdict for "the running infimum stays bounded away from 0"."""
    stats = [s for _, s in points]
    const = max(stats)
    first, mid, last = _first_mid_last(stats)
    if last >= 0.5 * first and min(stats) > 0.0:
        return Verdict(Status.HOLDS_UP_TO, K, tuple(points), const, note=note)
    if last <= 0.1 * first and last <= 0.9 * mid:
        w = points[-1]
        return Verdict(Status.REFUTED, K, tuple(points), const,
                       witness=(w[0], w[1]), note=note or "infimum decaying")
    return Verdict(Status.ESTIMATE, K, tuple(points), const, note=note)


def definite(status: Status, K: int, points: list[Checkpoint],
             witness: Optional[tuple] = None, note: str = "") -> Verdict:
    """Verdict forced by closed-form family knowledge, keeping the stats."""
    stats = [s for _, s in points] or [math.nan]
    return Verdict(status, K, tuple(points), max(stats), witness=witness, note=note)
