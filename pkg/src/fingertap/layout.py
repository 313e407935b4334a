"""Key layouts: per-region key actions for the three entry methods.

A layout is a total map from region name to key action, plus optional
synthetic anchors that add extra pressable slots beyond the eleven canonical
regions. The shipped defaults live in packaged JSON files (``layouts/``) so
every binding is plain configuration; ``builtin_layout`` loads and validates
them like any user-supplied file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Union

from .regions import CANONICAL_REGIONS, is_canonical

METHOD_SINGLE_DIGIT = "single_digit_fdi"
METHOD_DOUBLE_DIGIT = "double_digit_fdi"
METHOD_FTI = "fti"
METHODS = (METHOD_SINGLE_DIGIT, METHOD_DOUBLE_DIGIT, METHOD_FTI)

LAYOUT_FORMAT_VERSION = 1

_BUILTIN_FILES = {
    METHOD_SINGLE_DIGIT: "single_digit_fdi.json",
    METHOD_DOUBLE_DIGIT: "double_digit_fdi.json",
    METHOD_FTI: "fti.json",
}


class LayoutError(ValueError):
    """Base for layout file problems."""


class LayoutParseError(LayoutError):
    """The document is not a well-formed layout file."""


class LayoutValidationError(LayoutError):
    """The document parsed but violates a layout invariant."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        lines = "; ".join(str(v) for v in violations)
        super().__init__(f"invalid layout: {lines}")


# --- key actions -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class EmitDigit:
    digit: int
    kind = "emit_digit"


@dataclass(frozen=True, slots=True)
class DigitPair:
    first: int
    second: int
    kind = "digit_pair"


@dataclass(frozen=True, slots=True)
class LetterGroup:
    letters: str
    kind = "letter_group"


@dataclass(frozen=True, slots=True)
class NumberGroup:
    digits: str
    kind = "number_group"


@dataclass(frozen=True, slots=True)
class SpecialGroup:
    symbols: str
    kind = "special_group"


@dataclass(frozen=True, slots=True)
class Backspace:
    kind = "backspace"


@dataclass(frozen=True, slots=True)
class Enter:
    kind = "enter"


@dataclass(frozen=True, slots=True)
class Call:
    kind = "call"


@dataclass(frozen=True, slots=True)
class Send:
    kind = "send"


@dataclass(frozen=True, slots=True)
class CaseToggle:
    kind = "case_toggle"


@dataclass(frozen=True, slots=True)
class Unassigned:
    kind = "unassigned"


KeyAction = Union[
    EmitDigit,
    DigitPair,
    LetterGroup,
    NumberGroup,
    SpecialGroup,
    Backspace,
    Enter,
    Call,
    Send,
    CaseToggle,
    Unassigned,
]

_SIMPLE_ACTIONS = {
    "backspace": Backspace,
    "enter": Enter,
    "call": Call,
    "send": Send,
    "case_toggle": CaseToggle,
    "unassigned": Unassigned,
}


def action_symbols(action: KeyAction) -> str:
    """Ordered symbols a press on this action cycles through ('' if none)."""
    if isinstance(action, EmitDigit):
        return str(action.digit)
    if isinstance(action, DigitPair):
        return f"{action.first}{action.second}"
    if isinstance(action, LetterGroup):
        return action.letters
    if isinstance(action, NumberGroup):
        return action.digits
    if isinstance(action, SpecialGroup):
        return action.symbols
    return ""


@dataclass(frozen=True, slots=True)
class SyntheticAnchor:
    """Extra pressable slot placed relative to a canonical region's anchor."""

    name: str
    dx: float
    dy: float
    relative_to: str


@dataclass(frozen=True)
class Layout:
    method: str
    layout_id: str
    bindings: dict[str, KeyAction]
    synthetic_anchors: tuple[SyntheticAnchor, ...] = field(default_factory=tuple)

    def region_names(self) -> tuple[str, ...]:
        """All bound region names: canonical order, then synthetics in file order."""
        return CANONICAL_REGIONS + tuple(s.name for s in self.synthetic_anchors)

    def action(self, region: str) -> KeyAction:
        return self.bindings[region]


# --- validation ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Violation:
    region: str | None
    rule: str
    message: str

    def __str__(self) -> str:
        where = self.region if self.region is not None else "<layout>"
        return f"{where}: {self.message}"


def validate_layout(layout: Layout) -> list[Violation]:
    """Check every layout invariant; an empty list means the layout is valid."""
    out: list[Violation] = []
    synth_names = [s.name for s in layout.synthetic_anchors]

    if layout.method not in METHODS:
        out.append(Violation(None, "method", f"unknown method {layout.method!r}"))
        return out

    seen = set()
    for s in layout.synthetic_anchors:
        if is_canonical(s.name) or s.name in seen:
            out.append(
                Violation(s.name, "synthetic", f"synthetic anchor {s.name!r} collides with an existing region")
            )
        seen.add(s.name)
        if not is_canonical(s.relative_to):
            out.append(
                Violation(s.name, "synthetic", f"synthetic anchor {s.name!r} relative to unknown region {s.relative_to!r}")
            )

    known = set(CANONICAL_REGIONS) | set(synth_names)
    for region in CANONICAL_REGIONS:
        if region not in layout.bindings:
            out.append(Violation(region, "coverage", f"region {region} has no binding"))
    for name in synth_names:
        if name not in layout.bindings:
            out.append(Violation(name, "coverage", f"synthetic anchor {name} has no binding"))
    for region in layout.bindings:
        if region not in known:
            out.append(Violation(region, "coverage", f"binding references undeclared region {region!r}"))

    for region, action in layout.bindings.items():
        if isinstance(action, EmitDigit) and not 0 <= action.digit <= 9:
            out.append(Violation(region, "action", f"digit {action.digit} out of range"))
        elif isinstance(action, DigitPair):
            if not (0 <= action.first <= 9 and 0 <= action.second <= 9):
                out.append(Violation(region, "action", "pair digits out of range"))
            if action.first == action.second:
                out.append(Violation(region, "action", f"pair digits must differ, got {action.first} twice"))
        elif isinstance(action, LetterGroup):
            letters = action.letters
            if not 1 <= len(letters) <= 7:
                out.append(Violation(region, "action", f"letter group size {len(letters)} outside 1..7"))
            if not all("A" <= c <= "Z" for c in letters):
                out.append(Violation(region, "action", f"letter group {letters!r} must be uppercase A-Z"))
            if len(set(letters)) != len(letters):
                out.append(Violation(region, "action", f"letter group {letters!r} repeats a letter"))
        elif isinstance(action, NumberGroup):
            if not action.digits or not all(c.isdigit() for c in action.digits):
                out.append(Violation(region, "action", f"number group {action.digits!r} must be digits"))

    out.extend(_method_violations(layout))
    return out


def _method_violations(layout: Layout) -> list[Violation]:
    out: list[Violation] = []
    actions = list(layout.bindings.items())

    def count_kind(cls) -> int:
        return sum(1 for _, a in actions if isinstance(a, cls))

    def require_one(cls, label: str) -> None:
        got = count_kind(cls)
        if got != 1:
            out.append(Violation(label, "method", f"{label} must be bound exactly once, found {got}"))

    if layout.method == METHOD_SINGLE_DIGIT:
        counts = {d: 0 for d in range(10)}
        for _, a in actions:
            if isinstance(a, EmitDigit) and 0 <= a.digit <= 9:
                counts[a.digit] += 1
        for d, got in counts.items():
            if got != 1:
                out.append(Violation(None, "digits", f"digit {d} bound {got} times, expected exactly once"))
        require_one(Backspace, "Backspace")
        require_one(Call, "Call")
    elif layout.method == METHOD_DOUBLE_DIGIT:
        counts = {d: 0 for d in range(10)}
        for _, a in actions:
            if isinstance(a, EmitDigit) and 0 <= a.digit <= 9:
                counts[a.digit] += 1
            elif isinstance(a, DigitPair):
                for d in (a.first, a.second):
                    if 0 <= d <= 9:
                        counts[d] += 1
        for d, got in counts.items():
            if got != 1:
                out.append(Violation(None, "digits", f"digit {d} covered {got} times, expected exactly once"))
        require_one(Enter, "Enter")
        require_one(Backspace, "Backspace")
        require_one(Call, "Call")
    elif layout.method == METHOD_FTI:
        counts = {c: 0 for c in "ABCDEFGHIJKLMNOPQRSTUVWXYZ"}
        for _, a in actions:
            if isinstance(a, LetterGroup):
                for c in a.letters:
                    if c in counts:
                        counts[c] += 1
        for c, got in counts.items():
            if got != 1:
                out.append(Violation(None, "letters", f"letter {c} assigned {got} times, expected exactly once"))
        require_one(Enter, "Enter")
        require_one(Backspace, "Backspace")
        require_one(CaseToggle, "CaseToggle")
    return out


# --- parsing and serialization ---------------------------------------------


def _action_from_doc(doc, region: str) -> KeyAction:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise LayoutParseError(f"region {region}: action must be an object with a 'kind'")
    kind = doc["kind"]
    try:
        if kind == "emit_digit":
            return EmitDigit(digit=int(doc["digit"]))
        if kind == "digit_pair":
            return DigitPair(first=int(doc["first"]), second=int(doc["second"]))
        if kind == "letter_group":
            return LetterGroup(letters=str(doc["letters"]))
        if kind == "number_group":
            return NumberGroup(digits=str(doc["digits"]))
        if kind == "special_group":
            return SpecialGroup(symbols=str(doc["symbols"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise LayoutParseError(f"region {region}: malformed {kind} action: {exc}") from exc
    if kind in _SIMPLE_ACTIONS:
        return _SIMPLE_ACTIONS[kind]()
    raise LayoutParseError(f"region {region}: unknown action kind {kind!r}")


def _action_to_doc(action: KeyAction) -> dict:
    if isinstance(action, EmitDigit):
        return {"kind": action.kind, "digit": action.digit}
    if isinstance(action, DigitPair):
        return {"kind": action.kind, "first": action.first, "second": action.second}
    if isinstance(action, LetterGroup):
        return {"kind": action.kind, "letters": action.letters}
    if isinstance(action, NumberGroup):
        return {"kind": action.kind, "digits": action.digits}
    if isinstance(action, SpecialGroup):
        return {"kind": action.kind, "symbols": action.symbols}
    return {"kind": action.kind}


def load_layout(document: str) -> Layout:
    """Parse and validate a layout config document (UTF-8 JSON text)."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise LayoutParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise LayoutParseError("layout document must be a JSON object")

    version = doc.get("version")
    if version != LAYOUT_FORMAT_VERSION:
        raise LayoutParseError(f"unsupported layout format version {version!r}")
    method = doc.get("method")
    if method not in METHODS:
        raise LayoutParseError(f"unknown method {method!r}")
    layout_id = doc.get("id")
    if not isinstance(layout_id, str) or not layout_id:
        raise LayoutParseError("layout 'id' must be a non-empty string")

    synthetics = []
    for i, entry in enumerate(doc.get("synthetic_anchors", [])):
        try:
            synthetics.append(
                SyntheticAnchor(
                    name=str(entry["name"]),
                    dx=float(entry["dx"]),
                    dy=float(entry["dy"]),
                    relative_to=str(entry["relative_to"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutParseError(f"synthetic anchor #{i}: {exc}") from exc

    bindings: dict[str, KeyAction] = {}
    rows = doc.get("bindings")
    if not isinstance(rows, list):
        raise LayoutParseError("layout 'bindings' must be an array")
    for i, row in enumerate(rows):
        if not isinstance(row, dict) or "region" not in row or "action" not in row:
            raise LayoutParseError(f"binding #{i}: each row needs 'region' and 'action'")
        region = str(row["region"])
        if region in bindings:
            raise LayoutParseError(f"binding #{i}: region {region} bound twice")
        bindings[region] = _action_from_doc(row["action"], region)

    layout = Layout(
        method=method,
        layout_id=layout_id,
        bindings=bindings,
        synthetic_anchors=tuple(synthetics),
    )
    violations = validate_layout(layout)
    if violations:
        raise LayoutValidationError(violations)
    return layout


def serialize_layout(layout: Layout) -> str:
    """Inverse of load_layout; regions emitted in canonical-then-synthetic order."""
    rows = []
    for region in layout.region_names():
        if region in layout.bindings:
            rows.append({"region": region, "action": _action_to_doc(layout.bindings[region])})
    doc = {
        "version": LAYOUT_FORMAT_VERSION,
        "method": layout.method,
        "id": layout.layout_id,
        "bindings": rows,
        "synthetic_anchors": [
            {"name": s.name, "dx": s.dx, "dy": s.dy, "relative_to": s.relative_to}
            for s in layout.synthetic_anchors
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def builtin_layout(method: str) -> Layout:
    """The shipped default layout for a method, loaded from package data."""
    if method not in METHODS:
        raise LayoutError(f"unknown method {method!r}")
    text = resources.files("fingertap").joinpath("layouts", _BUILTIN_FILES[method]).read_text("utf-8")
    return load_layout(text)


def builtin_layouts() -> list[Layout]:
    return [builtin_layout(m) for m in METHODS]
