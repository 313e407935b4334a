"""Entry state machines: single-digit, double-digit, and text methods.

States are immutable values; ``press`` returns a new state plus the spoken
feedback events for that press. Replaying the same region sequence on a
fresh session therefore always yields the identical trace.

Single-digit: a press on a digit region commits immediately. Double-digit:
presses cycle a two-digit candidate (1 -> 2 -> 1 -> ...) and only Enter
commits. Text entry: presses cycle through a region's symbol group and Enter
commits the announced symbol, case-folded by the current mode.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from .layout import (
    METHOD_DOUBLE_DIGIT,
    METHOD_SINGLE_DIGIT,
    Backspace,
    Call,
    CaseToggle,
    DigitPair,
    EmitDigit,
    Enter,
    Layout,
    LayoutValidationError,
    LetterGroup,
    NumberGroup,
    Send,
    SpecialGroup,
    action_symbols,
    validate_layout,
)

ANNOUNCE = "announce"
COMMIT_ECHO = "commit_echo"
ERROR_BEEP = "error_beep"
MODE_CHANGE = "mode_change"
TERMINAL = "terminal"

CASE_UPPER = "upper"
CASE_LOWER = "lower"

_DIGIT_WORDS = {
    "0": "zero",
    "1": "one",
    "2": "two",
    "3": "three",
    "4": "four",
    "5": "five",
    "6": "six",
    "7": "seven",
    "8": "eight",
    "9": "nine",
}

_SYMBOL_WORDS = {
    ".": "dot",
    ",": "comma",
    "?": "question mark",
    "!": "exclamation",
    "'": "apostrophe",
    "-": "hyphen",
    "@": "at",
    " ": "space",
}


class TerminatedSessionError(RuntimeError):
    """A press arrived after Call/Send closed the session."""


class UnknownRegionError(ValueError):
    """The pressed region has no binding in the active layout."""


@dataclass(frozen=True, slots=True)
class FeedbackEvent:
    kind: str
    utterance: str

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "utterance": self.utterance}


@dataclass(frozen=True, slots=True)
class DigitCandidate:
    region: str
    press_count: int


@dataclass(frozen=True, slots=True)
class LetterCandidate:
    region: str
    tap_index: int


Pending = Union[DigitCandidate, LetterCandidate, None]


@dataclass(frozen=True, slots=True)
class EngineState:
    layout: Layout
    buffer: str = ""
    pending: Pending = None
    case_mode: str = CASE_UPPER
    press_total: int = 0
    correction_total: int = 0
    terminated: bool = False


def symbol_name(symbol: str) -> str:
    """Spoken name for a committed or announced symbol."""
    if symbol in _DIGIT_WORDS:
        return _DIGIT_WORDS[symbol]
    if symbol in _SYMBOL_WORDS:
        return _SYMBOL_WORDS[symbol]
    return symbol


def new_session(layout: Layout) -> EngineState:
    violations = validate_layout(layout)
    if violations:
        raise LayoutValidationError(violations)
    return EngineState(layout=layout)


def transcript(state: EngineState) -> str:
    """Committed text only; a pending candidate is never part of it."""
    return state.buffer


def press(state: EngineState, region: str) -> tuple[EngineState, tuple[FeedbackEvent, ...]]:
    if state.layout.method == METHOD_SINGLE_DIGIT:
        return press_single_digit(state, region)
    if state.layout.method == METHOD_DOUBLE_DIGIT:
        return press_double_digit(state, region)
    return press_fti(state, region)


def _check_press(state: EngineState, region: str) -> None:
    if state.terminated:
        raise TerminatedSessionError("session is terminated; no further presses accepted")
    if region not in state.layout.bindings:
        raise UnknownRegionError(f"region {region!r} is not bound in layout {state.layout.layout_id!r}")


def _beep(state: EngineState) -> tuple[EngineState, tuple[FeedbackEvent, ...]]:
    return state, (FeedbackEvent(ERROR_BEEP, "beep"),)


def _delete_last(state: EngineState) -> tuple[EngineState, tuple[FeedbackEvent, ...]]:
    if not state.buffer:
        return _beep(state)
    removed = state.buffer[-1]
    nxt = replace(
        state,
        buffer=state.buffer[:-1],
        correction_total=state.correction_total + 1,
    )
    return nxt, (FeedbackEvent(ANNOUNCE, f"deleted {symbol_name(removed)}"),)


def press_single_digit(state: EngineState, region: str):
    _check_press(state, region)
    state = replace(state, press_total=state.press_total + 1)
    action = state.layout.bindings[region]
    if isinstance(action, EmitDigit):
        digit = str(action.digit)
        nxt = replace(state, buffer=state.buffer + digit)
        return nxt, (FeedbackEvent(ANNOUNCE, symbol_name(digit)),)
    if isinstance(action, Backspace):
        return _delete_last(state)
    if isinstance(action, Call):
        return replace(state, terminated=True), (FeedbackEvent(TERMINAL, "call"),)
    return _beep(state)


def press_double_digit(state: EngineState, region: str):
    _check_press(state, region)
    state = replace(state, press_total=state.press_total + 1)
    action = state.layout.bindings[region]

    if isinstance(action, (DigitPair, EmitDigit)):
        group = action_symbols(action)
        if isinstance(state.pending, DigitCandidate) and state.pending.region == region:
            count = state.pending.press_count % len(group) + 1
        else:
            count = 1
        digit = group[count - 1]
        nxt = replace(state, pending=DigitCandidate(region, count))
        return nxt, (FeedbackEvent(ANNOUNCE, symbol_name(digit)),)

    if isinstance(action, Enter):
        if not isinstance(state.pending, DigitCandidate):
            return _beep(state)
        group = action_symbols(state.layout.bindings[state.pending.region])
        digit = group[state.pending.press_count - 1]
        nxt = replace(state, buffer=state.buffer + digit, pending=None)
        return nxt, (FeedbackEvent(COMMIT_ECHO, f"committed {symbol_name(digit)}"),)

    if isinstance(action, Backspace):
        if state.pending is not None:
            return replace(state, pending=None), (FeedbackEvent(ANNOUNCE, "cleared"),)
        return _delete_last(state)

    if isinstance(action, Call):
        if state.pending is not None:
            return _beep(state)
        return replace(state, terminated=True), (FeedbackEvent(TERMINAL, "call"),)

    return _beep(state)


def _fold(symbol: str, case_mode: str) -> str:
    if symbol.isalpha():
        return symbol.upper() if case_mode == CASE_UPPER else symbol.lower()
    return symbol


def press_fti(state: EngineState, region: str):
    _check_press(state, region)
    state = replace(state, press_total=state.press_total + 1)
    action = state.layout.bindings[region]

    if isinstance(action, (LetterGroup, NumberGroup, SpecialGroup)):
        group = action_symbols(action)
        if isinstance(state.pending, LetterCandidate) and state.pending.region == region:
            tap = state.pending.tap_index % len(group) + 1
        else:
            tap = 1
        symbol = _fold(group[tap - 1], state.case_mode)
        nxt = replace(state, pending=LetterCandidate(region, tap))
        return nxt, (FeedbackEvent(ANNOUNCE, symbol_name(symbol)),)

    if isinstance(action, Enter):
        if not isinstance(state.pending, LetterCandidate):
            return _beep(state)
        group = action_symbols(state.layout.bindings[state.pending.region])
        symbol = _fold(group[state.pending.tap_index - 1], state.case_mode)
        nxt = replace(state, buffer=state.buffer + symbol, pending=None)
        return nxt, (FeedbackEvent(COMMIT_ECHO, f"committed {symbol_name(symbol)}"),)

    if isinstance(action, Backspace):
        if state.pending is not None:
            return replace(state, pending=None), (FeedbackEvent(ANNOUNCE, "cleared"),)
        return _delete_last(state)

    if isinstance(action, CaseToggle):
        mode = CASE_LOWER if state.case_mode == CASE_UPPER else CASE_UPPER
        nxt = replace(state, case_mode=mode, pending=None)
        return nxt, (FeedbackEvent(MODE_CHANGE, "lowercase" if mode == CASE_LOWER else "uppercase"),)

    if isinstance(action, Send):
        if state.pending is not None:
            return _beep(state)
        return replace(state, terminated=True), (FeedbackEvent(TERMINAL, "send"),)

    return _beep(state)
