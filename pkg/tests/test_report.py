import pytest

from fingertap.metrics import MetricsReport
from fingertap.report import comparison_report


def _reports(wpms, duration=30.0, msd=0):
    return [
        MetricsReport(
            wpm=w,
            duration_s=duration,
            msd=msd,
            uncorrected_error_rate=0.0,
            corrections=0,
            kspc=1.0,
        )
        for w in wpms
    ]


def test_gate_picks_anova_when_both_groups_look_normal():
    groups = {
        "a": _reports([3.0, 3.2, 3.4, 3.6, 3.8, 4.0]),
        "b": _reports([2.0, 2.2, 2.4, 2.6, 2.8, 3.0]),
    }
    report = comparison_report(groups)
    wpm = report["stats"]["wpm"]
    assert wpm["selected"] == "anova"
    assert wpm["result"]["statistic"] == "F"
    assert all(entry["result"]["value"] >= 0.9 for entry in wpm["shapiro"].values())


def test_gate_falls_back_to_mann_whitney_for_non_normal_two_groups():
    # two-cluster sample scores W ~ 0.66, well under the 0.90 gate
    groups = {
        "a": _reports([1.0, 1.0, 1.01, 1.02, 8.5, 9.0]),
        "b": _reports([2.0, 2.1, 2.2, 2.3, 2.35, 2.4]),
    }
    report = comparison_report(groups)
    wpm = report["stats"]["wpm"]
    assert wpm["shapiro"]["a"]["result"]["value"] < 0.9
    assert wpm["selected"] == "mann_whitney"
    assert wpm["result"]["statistic"] == "U"
    assert wpm["result"]["method"] == "exact"


def test_gate_threshold_is_configurable_and_echoed():
    groups = {
        "a": _reports([3.0, 3.2, 3.4, 3.6, 3.8, 4.0]),
        "b": _reports([2.0, 2.2, 2.4, 2.6, 2.8, 3.0]),
    }
    strict = comparison_report(groups, w_threshold=0.999)
    assert strict["selection_rule"]["w_threshold"] == 0.999
    assert strict["stats"]["wpm"]["selected"] == "mann_whitney"


def test_small_groups_skip_shapiro_with_note():
    groups = {"a": _reports([3.0, 3.5]), "b": _reports([2.0, 2.5])}
    report = comparison_report(groups)
    wpm = report["stats"]["wpm"]
    assert wpm["shapiro"]["a"]["result"] is None
    assert "3..20" in wpm["shapiro"]["a"]["note"]
    assert wpm["selected"] == "mann_whitney"


def test_three_groups_use_anova_even_when_gate_fails():
    groups = {
        "a": _reports([1.0, 1.0, 1.01, 1.02, 8.5, 9.0]),
        "b": _reports([2.0, 2.2, 2.4, 2.6, 2.8, 3.0]),
        "c": _reports([4.0, 4.2, 4.4, 4.6, 4.8, 5.0]),
    }
    report = comparison_report(groups)
    wpm = report["stats"]["wpm"]
    assert wpm["selected"] == "anova"
    assert "two-sample" in wpm["note"]


def test_aggregates_mean_and_sample_sd():
    groups = {"a": _reports([2.0, 4.0])}
    report = comparison_report(groups)
    agg = report["groups"]["a"]["wpm"]
    assert agg["mean"] == 3.0
    assert agg["sd"] == pytest.approx(2.0**0.5)
    single = comparison_report({"a": _reports([2.0])})
    assert single["groups"]["a"]["wpm"]["sd"] is None
    assert single["stats"] == {}


def test_constant_two_group_measure_degrades_to_trivial_rank_test():
    groups = {"a": _reports([3.0, 3.0, 3.0]), "b": _reports([3.0, 3.0, 3.0])}
    report = comparison_report(groups)
    msd_block = report["stats"]["msd"]
    assert msd_block["selected"] == "mann_whitney"
    assert msd_block["result"]["p_value"] == 1.0


def test_degenerate_three_group_measure_reports_note_instead_of_test():
    groups = {
        "a": _reports([3.0, 3.0, 3.0]),
        "b": _reports([3.0, 3.0, 3.0]),
        "c": _reports([3.0, 3.0, 3.0]),
    }
    report = comparison_report(groups)
    msd_block = report["stats"]["msd"]
    assert msd_block["result"] is None
    assert "note" in msd_block


def test_empty_inputs_rejected():
    with pytest.raises(ValueError):
        comparison_report({})
    with pytest.raises(ValueError):
        comparison_report({"a": []})
