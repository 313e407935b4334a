"""Canonical screen regions and normalized touch points.

Eleven named regions cover the grip: four fingertip rows plus one row above
and one below them on the holding edge, the thumb with its two neighbours on
the opposite edge, and two free slots in the middle of the screen. The tuple
order below is the canonical order used everywhere a tie has to be broken;
synthetic anchors declared by a layout sort after all canonical regions, in
declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass

CANONICAL_REGIONS: tuple[str, ...] = (
    "AboveIndex",
    "Index",
    "Middle",
    "Ring",
    "Little",
    "BelowLittle",
    "Center",
    "Thumb",
    "AboveThumb",
    "BelowThumb",
    "BottomCenter",
)

_CANONICAL_RANK = {name: i for i, name in enumerate(CANONICAL_REGIONS)}


def is_canonical(region: str) -> bool:
    return region in _CANONICAL_RANK


def canonical_rank(region: str) -> int:
    """Position of a canonical region in the tie-break order."""
    return _CANONICAL_RANK[region]


@dataclass(frozen=True, slots=True)
class Point:
    """Normalized screen coordinate: origin top-left, x rightward, y down."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.x <= 1.0) or not (0.0 <= self.y <= 1.0):
            raise ValueError(f"point ({self.x}, {self.y}) outside the unit square")
