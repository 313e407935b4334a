"""Anchor derivation from a calibrated grip and nearest-anchor resolution.

Five fingertip taps (index, middle, ring, little along one edge, thumb on the
other) fix the grip. Each finger row gets an anchor nudged inward from its
fingertip; rows above and below the finger columns are extrapolated using the
mean fingertip spacing; two fixed anchors sit mid-screen and bottom-center.
A raw touch resolves to the nearest anchor within the activation radius, so
buttons are Voronoi cells capped by a circle rather than rectangles with
invented dimensions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .layout import Layout, SyntheticAnchor
from .regions import CANONICAL_REGIONS, Point

DEFAULT_EDGE_OFFSET = 0.05
DEFAULT_RADIUS = 0.18

_FINGER_REGIONS = ("Index", "Middle", "Ring", "Little")


class CalibrationError(ValueError):
    """Fingertip geometry that cannot produce a usable profile."""


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, v))


@dataclass(frozen=True)
class CalibrationProfile:
    """Derived anchors for one grip; immutable and safe to share."""

    fingertips: tuple[Point, ...]
    edge_offset: float
    activation_radius: float
    anchors: tuple[tuple[str, Point], ...]
    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _ys: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.activation_radius <= 0:
            raise CalibrationError("activation radius must be positive")
        seen: dict[tuple[float, float], str] = {}
        for name, p in self.anchors:
            key = (p.x, p.y)
            if key in seen:
                raise CalibrationError(f"anchors {seen[key]} and {name} coincide at {key}")
            seen[key] = name
        object.__setattr__(self, "_xs", np.array([p.x for _, p in self.anchors]))
        object.__setattr__(self, "_ys", np.array([p.y for _, p in self.anchors]))

    def anchor(self, region: str) -> Point:
        for name, p in self.anchors:
            if name == region:
                return p
        raise KeyError(region)

    def region_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.anchors)


def derive_anchors(
    fingertips,
    edge_offset: float = DEFAULT_EDGE_OFFSET,
    radius: float = DEFAULT_RADIUS,
    synthetic: tuple[SyntheticAnchor, ...] = (),
) -> CalibrationProfile:
    """Build a profile from five fingertip points (index, middle, ring, little, thumb).

    Finger anchors shift inward (+x) by edge_offset, the thumb shifts -x; the
    above/below rows use s = mean adjacent fingertip spacing in y; everything
    clamps into the unit square. Synthetic anchors from a layout apply last.
    """
    pts = [p if isinstance(p, Point) else Point(*p) for p in fingertips]
    if len(pts) != 5:
        raise CalibrationError(f"expected 5 fingertips, got {len(pts)}")
    if edge_offset < 0:
        raise CalibrationError("edge offset must be non-negative")
    index, middle, ring, little, thumb = pts

    ys = [index.y, middle.y, ring.y, little.y]
    for a, b in zip(ys, ys[1:]):
        if b < a:
            raise CalibrationError("non-monotone fingertips: index..little must increase in y")
    spacing = (little.y - index.y) / 3.0
    if spacing == 0:
        raise CalibrationError("coincident fingertips: zero spacing between finger rows")

    anchors: dict[str, Point] = {}
    for name, tip in zip(_FINGER_REGIONS, (index, middle, ring, little)):
        anchors[name] = Point(_clamp(tip.x + edge_offset), _clamp(tip.y))
    anchors["AboveIndex"] = Point(anchors["Index"].x, _clamp(anchors["Index"].y - spacing))
    anchors["BelowLittle"] = Point(anchors["Little"].x, _clamp(anchors["Little"].y + spacing))
    anchors["Thumb"] = Point(_clamp(thumb.x - edge_offset), _clamp(thumb.y))
    anchors["AboveThumb"] = Point(anchors["Thumb"].x, _clamp(anchors["Thumb"].y - spacing))
    anchors["BelowThumb"] = Point(anchors["Thumb"].x, _clamp(anchors["Thumb"].y + spacing))
    anchors["Center"] = Point(0.5, 0.5)
    anchors["BottomCenter"] = Point(0.5, 0.95)

    ordered = [(name, anchors[name]) for name in CANONICAL_REGIONS]
    for s in synthetic:
        base = anchors.get(s.relative_to)
        if base is None:
            raise CalibrationError(f"synthetic anchor {s.name} relative to unknown region {s.relative_to}")
        ordered.append((s.name, Point(_clamp(base.x + s.dx), _clamp(base.y + s.dy))))

    return CalibrationProfile(
        fingertips=tuple(pts),
        edge_offset=edge_offset,
        activation_radius=radius,
        anchors=tuple(ordered),
    )


def profile_with_layout(profile: CalibrationProfile, layout: Layout) -> CalibrationProfile:
    """Profile extended with the layout's synthetic anchors (if any)."""
    if not layout.synthetic_anchors:
        return profile
    return derive_anchors(
        profile.fingertips,
        edge_offset=profile.edge_offset,
        radius=profile.activation_radius,
        synthetic=layout.synthetic_anchors,
    )


def resolve_region(p: Point, profile: CalibrationProfile) -> str | None:
    """Nearest anchor within the activation radius, or None.

    Exact distance ties go to the earlier anchor in canonical-then-synthetic
    order, which argmin's first-minimum rule implements directly.
    """
    d2 = (profile._xs - p.x) ** 2 + (profile._ys - p.y) ** 2
    i = int(np.argmin(d2))
    if d2[i] <= profile.activation_radius**2:
        return profile.anchors[i][0]
    return None


# --- calibration files ------------------------------------------------------


def load_calibration(text: str) -> CalibrationProfile:
    """Read a calibration file: {"fingertips":[{x,y}*5], "edge_offset", "radius"}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CalibrationError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "fingertips" not in doc:
        raise CalibrationError("calibration document needs a 'fingertips' array")
    try:
        tips = [Point(float(t["x"]), float(t["y"])) for t in doc["fingertips"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CalibrationError(f"malformed fingertip entry: {exc}") from exc
    return derive_anchors(
        tips,
        edge_offset=float(doc.get("edge_offset", DEFAULT_EDGE_OFFSET)),
        radius=float(doc.get("radius", DEFAULT_RADIUS)),
    )


def serialize_profile(profile: CalibrationProfile) -> str:
    """Calibration inputs plus the derived anchors, for inspection and reload."""
    doc = {
        "fingertips": [{"x": p.x, "y": p.y} for p in profile.fingertips],
        "edge_offset": profile.edge_offset,
        "radius": profile.activation_radius,
        "anchors": [{"region": name, "x": p.x, "y": p.y} for name, p in profile.anchors],
    }
    return json.dumps(doc, indent=2) + "\n"


def default_calibration() -> CalibrationProfile:
    """The packaged reference grip (left-edge fingers, right-edge thumb)."""
    from importlib import resources

    text = resources.files("fingertap").joinpath("data", "default_calibration.json").read_text("utf-8")
    return load_calibration(text)
