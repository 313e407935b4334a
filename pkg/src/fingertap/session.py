"""Gesture sessions: synthesize, serialize, parse, and replay.

A session log is the bridge between raw touches and the engine: a header
describing method/layout/calibration followed by a time-ordered event stream,
one JSON object per line. Events carry either a raw touch point (resolved
against the calibration at replay time) or a region name (fed to the engine
directly); one log never mixes the two.

The synthesizer is a deterministic typist: given a phrase it plans the
minimal press sequence that commits exactly that phrase, appends the
terminating press, and spaces the presses with a seeded latency model, which
makes whole evaluation datasets reproducible from a single seed.
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass, field
from typing import Optional, Union

from . import engine
from .geometry import (
    CalibrationProfile,
    default_calibration,
    derive_anchors,
    profile_with_layout,
    resolve_region,
)
from .layout import (
    METHOD_FTI,
    METHOD_SINGLE_DIGIT,
    METHODS,
    Call,
    CaseToggle,
    DigitPair,
    EmitDigit,
    Enter,
    Layout,
    LetterGroup,
    NumberGroup,
    Send,
    SpecialGroup,
)
from .metrics import TrialRecord
from .regions import Point


class SessionLogError(ValueError):
    """Malformed or inconsistent session log document."""


class SynthesisError(ValueError):
    """The phrase cannot be typed under the given layout."""


class ReplayError(ValueError):
    """The log cannot be replayed against the given layout/profile."""


@dataclass(frozen=True, slots=True)
class RegionEvent:
    t_ms: int
    region: str


@dataclass(frozen=True, slots=True)
class TouchEvent:
    t_ms: int
    x: float
    y: float


SessionEvent = Union[RegionEvent, TouchEvent]


@dataclass(frozen=True, slots=True)
class SessionHeader:
    method: str
    layout_id: str
    calibration: Optional[dict | str] = None
    participant_id: Optional[str] = None
    prescribed: Optional[str] = None


@dataclass(frozen=True)
class SessionLog:
    header: SessionHeader
    events: tuple[SessionEvent, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        last = -1
        kinds = set()
        for i, ev in enumerate(self.events):
            if ev.t_ms < 0:
                raise SessionLogError(f"event #{i}: negative timestamp")
            if ev.t_ms < last:
                raise SessionLogError(f"event #{i}: timestamp decreases ({ev.t_ms} < {last})")
            last = ev.t_ms
            kinds.add(type(ev))
        if len(kinds) > 1:
            raise SessionLogError("touch and region payloads mixed in one log")


@dataclass(frozen=True, slots=True)
class LatencyModel:
    """Per-press interval source; always reproducible from the seed."""

    kind: str  # "fixed" | "uniform"
    lo_ms: int
    hi_ms: int
    seed: int = 0

    @classmethod
    def fixed(cls, ms: int, seed: int = 0) -> "LatencyModel":
        return cls("fixed", ms, ms, seed)

    @classmethod
    def uniform(cls, lo_ms: int, hi_ms: int, seed: int = 0) -> "LatencyModel":
        return cls("uniform", lo_ms, hi_ms, seed)

    def __post_init__(self) -> None:
        if self.kind not in ("fixed", "uniform"):
            raise ValueError(f"unknown latency kind {self.kind!r}")
        if self.lo_ms <= 0 or self.hi_ms < self.lo_ms:
            raise ValueError("latency intervals must be positive and ordered")

    def intervals(self):
        rng = random.Random(self.seed)
        while True:
            if self.kind == "fixed":
                yield self.lo_ms
            else:
                yield max(1, round(rng.uniform(self.lo_ms, self.hi_ms)))


# --- press planning ---------------------------------------------------------


def _find_region(layout: Layout, predicate) -> Optional[str]:
    for region in layout.region_names():
        action = layout.bindings.get(region)
        if action is not None and predicate(action):
            return region
    return None


def plan_presses(phrase: str, layout: Layout) -> list[str]:
    """Minimal region press sequence committing exactly `phrase` (no terminal)."""
    presses: list[str] = []
    if layout.method == METHOD_SINGLE_DIGIT:
        for ch in phrase:
            region = _find_region(layout, lambda a: isinstance(a, EmitDigit) and str(a.digit) == ch)
            if region is None:
                raise SynthesisError(f"symbol {ch!r} is not producible under layout {layout.layout_id!r}")
            presses.append(region)
        return presses

    if layout.method == METHOD_FTI:
        enter = _find_region(layout, lambda a: isinstance(a, Enter))
        if enter is None:
            raise SynthesisError(f"no enter key bound in layout {layout.layout_id!r}")
        toggle = _find_region(layout, lambda a: isinstance(a, CaseToggle))
        case = engine.CASE_UPPER
        for ch in phrase:
            key = ch.upper() if ch.isalpha() else ch
            found = None
            for region in layout.region_names():
                action = layout.bindings.get(region)
                if isinstance(action, (LetterGroup, NumberGroup, SpecialGroup)):
                    symbols = (
                        action.letters
                        if isinstance(action, LetterGroup)
                        else action.digits if isinstance(action, NumberGroup) else action.symbols
                    )
                    if key in symbols:
                        found = (region, symbols.index(key) + 1)
                        break
            if found is None:
                raise SynthesisError(f"symbol {ch!r} is not producible under layout {layout.layout_id!r}")
            if ch.isalpha():
                want = engine.CASE_UPPER if ch.isupper() else engine.CASE_LOWER
                if want != case:
                    if toggle is None:
                        raise SynthesisError(f"case of {ch!r} unreachable: no case toggle bound")
                    presses.append(toggle)
                    case = want
            region, taps = found
            presses.extend([region] * taps)
            presses.append(enter)
        return presses

    # double-digit: cycle to the right pair element, then confirm
    enter = _find_region(layout, lambda a: isinstance(a, Enter))
    if enter is None:
        raise SynthesisError(f"no enter key bound in layout {layout.layout_id!r}")
    for ch in phrase:
        found = None
        for region in layout.region_names():
            action = layout.bindings.get(region)
            if isinstance(action, EmitDigit) and str(action.digit) == ch:
                found = (region, 1)
                break
            if isinstance(action, DigitPair):
                pair = f"{action.first}{action.second}"
                if ch in pair:
                    found = (region, pair.index(ch) + 1)
                    break
        if found is None:
            raise SynthesisError(f"symbol {ch!r} is not producible under layout {layout.layout_id!r}")
        region, taps = found
        presses.extend([region] * taps)
        presses.append(enter)
    return presses


def _terminal_region(layout: Layout) -> str:
    want = Send if layout.method == METHOD_FTI else Call
    region = _find_region(layout, lambda a: isinstance(a, want))
    if region is None:
        raise SynthesisError(f"no terminal key bound in layout {layout.layout_id!r}")
    return region


def synthesize_session(
    phrase: str,
    layout: Layout,
    latency: LatencyModel,
    profile: Optional[CalibrationProfile] = None,
    participant_id: Optional[str] = None,
    touch_payload: bool = False,
) -> SessionLog:
    """Deterministic typist: phrase presses, then the terminal press.

    With touch_payload the events carry the anchor coordinates instead of
    region names, which requires a calibration profile.
    """
    presses = plan_presses(phrase, layout)
    presses.append(_terminal_region(layout))

    events: list[SessionEvent] = []
    calibration = None
    t = 0
    ticks = latency.intervals()
    if touch_payload:
        if profile is None:
            raise SynthesisError("touch payloads need a calibration profile")
        full = profile_with_layout(profile, layout)
        # embed the grip so the log replays without a side-channel profile
        calibration = {
            "fingertips": [{"x": p.x, "y": p.y} for p in profile.fingertips],
            "edge_offset": profile.edge_offset,
            "radius": profile.activation_radius,
        }
        for region in presses:
            t += next(ticks)
            p = full.anchor(region)
            events.append(TouchEvent(t_ms=t, x=p.x, y=p.y))
    else:
        for region in presses:
            t += next(ticks)
            events.append(RegionEvent(t_ms=t, region=region))

    header = SessionHeader(
        method=layout.method,
        layout_id=layout.layout_id,
        calibration=calibration,
        participant_id=participant_id,
        prescribed=phrase,
    )
    return SessionLog(header=header, events=tuple(events))


# --- replay -----------------------------------------------------------------


@dataclass(frozen=True)
class ReplayResult:
    transcript: str
    record: TrialRecord
    feedback: tuple[engine.FeedbackEvent, ...]
    skipped: tuple[int, ...]


def _profile_from_header(header: SessionHeader) -> Optional[CalibrationProfile]:
    cal = header.calibration
    if isinstance(cal, dict):
        if cal.get("builtin") == "default":
            return default_calibration()
        if "fingertips" in cal:
            tips = [Point(float(t["x"]), float(t["y"])) for t in cal["fingertips"]]
            return derive_anchors(
                tips,
                edge_offset=float(cal.get("edge_offset", 0.05)),
                radius=float(cal.get("radius", 0.18)),
            )
    return None


def replay_session(
    log: SessionLog,
    layout: Layout,
    profile: Optional[CalibrationProfile] = None,
) -> ReplayResult:
    """Run a log through the engine and measure the trial.

    Touches that resolve to no region are skipped and noted, matching how a
    real device would drop an off-target tap. An explicit profile wins over
    the calibration embedded in the log header.
    """
    if log.header.method != layout.method:
        raise ReplayError(f"log method {log.header.method!r} does not match layout method {layout.method!r}")
    if not log.events:
        raise ReplayError("empty session log")

    needs_touch = any(isinstance(ev, TouchEvent) for ev in log.events)
    full_profile = None
    if needs_touch:
        if profile is None:
            profile = _profile_from_header(log.header)
        if profile is None:
            raise ReplayError("log has touch payloads but no calibration profile was given")
        full_profile = profile_with_layout(profile, layout)

    state = engine.new_session(layout)
    feedback: list[engine.FeedbackEvent] = []
    skipped: list[int] = []
    for i, ev in enumerate(log.events):
        if isinstance(ev, TouchEvent):
            region = resolve_region(Point(ev.x, ev.y), full_profile)
            if region is None:
                skipped.append(i)
                continue
        else:
            region = ev.region
        state, events = engine.press(state, region)
        feedback.extend(events)

    text = engine.transcript(state)
    prescribed = log.header.prescribed if log.header.prescribed is not None else text
    record = TrialRecord(
        prescribed=prescribed,
        transcribed=text,
        start_ms=log.events[0].t_ms,
        end_ms=log.events[-1].t_ms,
        press_total=state.press_total,
        correction_total=state.correction_total,
    )
    return ReplayResult(
        transcript=text,
        record=record,
        feedback=tuple(feedback),
        skipped=tuple(skipped),
    )


# --- serialization ----------------------------------------------------------


def serialize_session_log(log: SessionLog) -> str:
    """JSON Lines: header object first, then one event object per line (LF)."""
    header: dict = {"method": log.header.method, "layout_id": log.header.layout_id}
    if log.header.calibration is not None:
        header["calibration"] = log.header.calibration
    if log.header.participant_id is not None:
        header["participant_id"] = log.header.participant_id
    if log.header.prescribed is not None:
        header["prescribed"] = log.header.prescribed
    lines = [json.dumps(header, separators=(",", ":"))]
    for ev in log.events:
        if isinstance(ev, RegionEvent):
            lines.append(json.dumps({"t": ev.t_ms, "region": ev.region}, separators=(",", ":")))
        else:
            lines.append(json.dumps({"t": ev.t_ms, "x": ev.x, "y": ev.y}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def parse_session_log(text: str) -> SessionLog:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise SessionLogError("empty document")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SessionLogError(f"header line is not valid JSON: {exc}") from exc
    if not isinstance(head, dict):
        raise SessionLogError("header line must be a JSON object")
    method = head.get("method")
    if method not in METHODS:
        raise SessionLogError(f"header: unknown method {method!r}")
    layout_id = head.get("layout_id")
    if not isinstance(layout_id, str) or not layout_id:
        raise SessionLogError("header: 'layout_id' must be a non-empty string")
    header = SessionHeader(
        method=method,
        layout_id=layout_id,
        calibration=head.get("calibration"),
        participant_id=head.get("participant_id"),
        prescribed=head.get("prescribed"),
    )

    events: list[SessionEvent] = []
    for i, line in enumerate(lines[1:]):
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SessionLogError(f"event #{i}: not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "t" not in doc:
            raise SessionLogError(f"event #{i}: missing timestamp")
        t = doc["t"]
        if not isinstance(t, int) or isinstance(t, bool):
            raise SessionLogError(f"event #{i}: timestamp must be an integer")
        if "region" in doc:
            events.append(RegionEvent(t_ms=t, region=str(doc["region"])))
        elif "x" in doc and "y" in doc:
            events.append(TouchEvent(t_ms=t, x=float(doc["x"]), y=float(doc["y"])))
        else:
            raise SessionLogError(f"event #{i}: unknown payload kind")
    return SessionLog(header=header, events=tuple(events))


# --- phrase sets ------------------------------------------------------------

FTI_ALPHABET = string.ascii_uppercase + string.ascii_lowercase + string.digits + ".,?!'-@"


def digit_phrases(count: int, seed: int, length: int = 10) -> list[str]:
    """Deterministic batch of fixed-length digit strings (dialled numbers)."""
    rng = random.Random(seed)
    return ["".join(rng.choice(string.digits) for _ in range(length)) for _ in range(count)]


def text_phrases(
    count: int,
    seed: int,
    min_len: int = 9,
    max_len: int = 20,
    alphabet: str = FTI_ALPHABET,
) -> list[str]:
    """Deterministic batch of mixed-case text phrases for the text method."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(min_len, max_len)
        out.append("".join(rng.choice(alphabet) for _ in range(n)))
    return out
