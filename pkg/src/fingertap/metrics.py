"""Text-entry performance measures for one trial.

Speed is words per minute with the five-characters-per-word convention and
the conventional |T|-1 numerator; accuracy splits into uncorrected errors
(edit distance between prescribed and transcribed text) and corrections
actually performed (backspace deletions). Keystrokes per character is
reported as well since it mechanically explains most speed differences
between methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import levenshtein_codes


@dataclass(frozen=True, slots=True)
class TrialRecord:
    """Raw per-trial observations, independent of any entry method."""

    prescribed: str
    transcribed: str
    start_ms: int
    end_ms: int
    press_total: int
    correction_total: int

    def __post_init__(self) -> None:
        if self.end_ms < self.start_ms:
            raise ValueError("trial ends before it starts")
        if self.correction_total < 0 or self.press_total < self.correction_total:
            raise ValueError("press total must cover corrections")


@dataclass(frozen=True, slots=True)
class MetricsReport:
    wpm: float
    duration_s: float
    msd: int
    uncorrected_error_rate: float
    corrections: int
    kspc: float

    def to_json_dict(self) -> dict:
        return {
            "wpm": self.wpm,
            "duration_s": self.duration_s,
            "msd": self.msd,
            "uncorrected_error_rate": self.uncorrected_error_rate,
            "corrections": self.corrections,
            "kspc": self.kspc,
        }


def words_per_minute(t_len: int, seconds: float) -> float:
    """((|T| - 1) / S) * 60 * (1/5)."""
    if t_len < 1:
        raise ValueError("transcribed text must have at least one character")
    if seconds <= 0:
        raise ValueError("duration must be positive")
    return (t_len - 1) / seconds * 60.0 / 5.0


def min_string_distance(p: str, t: str) -> int:
    """Unit-cost Levenshtein distance between prescribed and transcribed text."""
    if p == t:
        return 0
    a = np.array([ord(c) for c in p], dtype=np.int32)
    b = np.array([ord(c) for c in t], dtype=np.int32)
    return int(levenshtein_codes(a, b))


def trial_metrics(rec: TrialRecord) -> MetricsReport:
    t_len = len(rec.transcribed)
    if t_len == 0:
        raise ValueError("empty transcription")
    duration_s = (rec.end_ms - rec.start_ms) / 1000.0
    if duration_s <= 0:
        raise ValueError("zero-duration trial")
    msd = min_string_distance(rec.prescribed, rec.transcribed)
    return MetricsReport(
        wpm=words_per_minute(t_len, duration_s),
        duration_s=duration_s,
        msd=msd,
        uncorrected_error_rate=msd / max(len(rec.prescribed), t_len),
        corrections=rec.correction_total,
        kspc=rec.press_total / t_len,
    )
