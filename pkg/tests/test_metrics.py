import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fingertap.metrics import (
    MetricsReport,
    TrialRecord,
    min_string_distance,
    trial_metrics,
    words_per_minute,
)

from oracles import edit_distance_oracle


def test_wpm_reference_values():
    assert words_per_minute(10, 35.0) == pytest.approx(108 / 35, abs=1e-12)
    assert words_per_minute(11, 60.0) == pytest.approx(2.0, abs=1e-12)
    assert words_per_minute(1, 20.0) == 0.0


def test_wpm_rejects_degenerate_input():
    with pytest.raises(ValueError):
        words_per_minute(0, 10.0)
    with pytest.raises(ValueError):
        words_per_minute(10, 0.0)
    with pytest.raises(ValueError):
        words_per_minute(10, -1.0)


@given(t_len=st.integers(2, 200), s1=st.floats(0.5, 500), s2=st.floats(0.5, 500))
def test_wpm_monotone_in_duration(t_len, s1, s2):
    if s1 == s2:
        return
    lo, hi = sorted((s1, s2))
    assert words_per_minute(t_len, lo) > words_per_minute(t_len, hi)


@given(seconds=st.floats(0.5, 500), a=st.integers(1, 200), b=st.integers(1, 200))
def test_wpm_monotone_in_length(seconds, a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert words_per_minute(lo, seconds) < words_per_minute(hi, seconds)


def test_msd_reference_values():
    assert min_string_distance("12345", "12345") == 0
    assert min_string_distance("12345", "12395") == 1
    assert min_string_distance("0123456789", "013456789") == 1
    assert min_string_distance("", "abc") == 3
    assert min_string_distance("kitten", "sitting") == 3


@given(st.text(alphabet="abc", max_size=8), st.text(alphabet="abc", max_size=8))
@settings(max_examples=300)
def test_msd_matches_recursive_oracle(a, b):
    assert min_string_distance(a, b) == edit_distance_oracle(a, b)


@given(st.text(alphabet="abc", max_size=6), st.text(alphabet="abc", max_size=6), st.text(alphabet="abc", max_size=6))
@settings(max_examples=200)
def test_msd_metric_axioms(a, b, c):
    assert min_string_distance(a, b) == min_string_distance(b, a)
    assert (min_string_distance(a, b) == 0) == (a == b)
    assert min_string_distance(a, c) <= min_string_distance(a, b) + min_string_distance(b, c)


def test_trial_metrics_clean_trial():
    rec = TrialRecord(
        prescribed="0123456789",
        transcribed="0123456789",
        start_ms=0,
        end_ms=35_000,
        press_total=10,
        correction_total=0,
    )
    m = trial_metrics(rec)
    assert m.wpm == pytest.approx(108 / 35)
    assert m.duration_s == 35.0
    assert m.msd == 0
    assert m.uncorrected_error_rate == 0.0
    assert m.kspc == 1.0


def test_trial_metrics_double_digit_press_cost():
    rec = TrialRecord("0123456789", "0123456789", 0, 60_000, 25, 0)
    assert trial_metrics(rec).kspc == 2.5


def test_trial_metrics_error_rate():
    rec = TrialRecord("12", "13", 1000, 3000, 2, 0)
    m = trial_metrics(rec)
    assert m.msd == 1
    assert m.uncorrected_error_rate == 0.5


def test_trial_metrics_rejects_empty_transcription():
    rec = TrialRecord("12", "", 0, 1000, 1, 0)
    with pytest.raises(ValueError, match="empty"):
        trial_metrics(rec)


def test_trial_metrics_rejects_zero_duration():
    rec = TrialRecord("1", "1", 500, 500, 1, 0)
    with pytest.raises(ValueError, match="duration"):
        trial_metrics(rec)


def test_trial_record_invariants():
    with pytest.raises(ValueError):
        TrialRecord("1", "1", 10, 5, 1, 0)
    with pytest.raises(ValueError):
        TrialRecord("1", "1", 0, 5, 1, 2)


def test_report_serialization_round_trip():
    m = MetricsReport(wpm=3.0, duration_s=35.0, msd=1, uncorrected_error_rate=0.1, corrections=2, kspc=1.1)
    d = m.to_json_dict()
    assert d["wpm"] == 3.0 and d["kspc"] == 1.1 and d["msd"] == 1
