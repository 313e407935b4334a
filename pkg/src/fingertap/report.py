"""Cross-method comparison reports.

Aggregates per-trial metrics by method and runs the comparison battery on
each measure: Shapiro-Wilk per group, then one-way ANOVA when every group
looks normal (W at or above a threshold) and Mann-Whitney otherwise. The
gate, its threshold, and the selected test are always echoed in the output
so a report is self-describing.
"""

from __future__ import annotations

import numpy as np

from .metrics import MetricsReport
from .stats import anova_oneway, mann_whitney, shapiro_wilk

DEFAULT_W_THRESHOLD = 0.90

_MEASURES = ("wpm", "duration_s", "msd")


def _aggregate(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=float)
    agg = {"mean": float(arr.mean()), "sd": None}
    if arr.size >= 2:
        agg["sd"] = float(arr.std(ddof=1))
    return agg


def _shapiro_or_note(values: list[float]):
    if not 3 <= len(values) <= 20:
        return None, f"n={len(values)} outside tabulated range 3..20"
    try:
        return shapiro_wilk(values), None
    except ValueError as exc:
        return None, str(exc)


def _gated_test(samples: dict[str, list[float]], threshold: float) -> dict:
    """Pick and run the cross-group test for one measure."""
    shapiro_block = {}
    all_normal = True
    for name, values in samples.items():
        result, note = _shapiro_or_note(values)
        entry = {"result": result.to_json_dict() if result else None}
        if note:
            entry["note"] = note
        shapiro_block[name] = entry
        if result is None or result.value < threshold:
            all_normal = False

    groups = list(samples.values())
    block: dict = {"shapiro": shapiro_block}
    try:
        if all_normal or len(groups) != 2:
            selected = "anova"
            result = anova_oneway(groups)
        else:
            selected = "mann_whitney"
            result = mann_whitney(groups[0], groups[1])
        block["selected"] = selected
        block["result"] = result.to_json_dict()
        if not all_normal and len(groups) != 2:
            block["note"] = "normality gate failed but Mann-Whitney is two-sample; ANOVA reported"
    except ValueError as exc:
        block["selected"] = None
        block["result"] = None
        block["note"] = str(exc)
    return block


def comparison_report(
    by_group: dict[str, list[MetricsReport]],
    w_threshold: float = DEFAULT_W_THRESHOLD,
) -> dict:
    """JSON-ready comparison of per-method trial metrics."""
    if not by_group:
        raise ValueError("no groups to compare")
    groups_block = {}
    for name, reports in sorted(by_group.items()):
        if not reports:
            raise ValueError(f"group {name!r} has no trials")
        groups_block[name] = {
            "n": len(reports),
            "wpm": _aggregate([r.wpm for r in reports]),
            "duration_s": _aggregate([r.duration_s for r in reports]),
            "msd": _aggregate([float(r.msd) for r in reports]),
            "uncorrected_error_rate": _aggregate([r.uncorrected_error_rate for r in reports]),
            "corrections": _aggregate([float(r.corrections) for r in reports]),
            "kspc": _aggregate([r.kspc for r in reports]),
        }

    stats_block = {}
    if len(by_group) >= 2:
        for measure in _MEASURES:
            samples = {
                name: [float(getattr(r, measure)) for r in reports]
                for name, reports in sorted(by_group.items())
            }
            stats_block[measure] = _gated_test(samples, w_threshold)

    return {
        "groups": groups_block,
        "stats": stats_block,
        "selection_rule": {
            "description": "anova when every group's shapiro-wilk W >= threshold, else mann-whitney",
            "w_threshold": w_threshold,
        },
    }
