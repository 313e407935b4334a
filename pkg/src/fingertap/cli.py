"""Command-line driver.

Subcommands: layout validate, calibrate, simulate, replay, compare, serve.
Machine output is JSON on stdout; --pretty switches to human-readable tables.
Diagnostics go to stderr. Exit codes: 0 success, 1 usage, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import service
from .geometry import (
    CalibrationError,
    CalibrationProfile,
    default_calibration,
    load_calibration,
    profile_with_layout,
    serialize_profile,
)
from .layout import (
    METHODS,
    Layout,
    LayoutError,
    LayoutValidationError,
    builtin_layout,
    builtin_layouts,
    load_layout,
)
from .metrics import trial_metrics
from .report import DEFAULT_W_THRESHOLD, comparison_report
from .session import (
    LatencyModel,
    ReplayError,
    SessionLogError,
    SynthesisError,
    digit_phrases,
    parse_session_log,
    replay_session,
    serialize_session_log,
    synthesize_session,
    text_phrases,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj, pretty: bool) -> None:
    print(json.dumps(obj, indent=2 if pretty else None))


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for r, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _parse_latency(spec: str, seed: int) -> LatencyModel:
    kind, _, rest = spec.partition(":")
    try:
        if kind == "fixed":
            return LatencyModel.fixed(int(rest), seed=seed)
        if kind == "uniform":
            lo, hi = rest.split(",")
            return LatencyModel.uniform(int(lo), int(hi), seed=seed)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad latency spec {spec!r}: {exc}") from exc
    raise UsageError(f"bad latency spec {spec!r}; expected fixed:MS or uniform:LO,HI")


def _load_layout_arg(value: str) -> Layout:
    """A layout argument is a file path, a builtin id, or a method name."""
    path = Path(value)
    if path.exists():
        return load_layout(path.read_text("utf-8"))
    for layout in builtin_layouts():
        if value in (layout.layout_id, layout.method):
            return layout
    raise LayoutError(f"no layout file, builtin id, or method named {value!r}")


def _load_profile_arg(value: str | None) -> CalibrationProfile:
    if value is None:
        return default_calibration()
    return load_calibration(Path(value).read_text("utf-8"))


def _resolve_log_layout(header, extra_by_id: dict[str, Layout]) -> Layout:
    if header.layout_id in extra_by_id:
        return extra_by_id[header.layout_id]
    builtin = builtin_layout(header.method)
    if builtin.layout_id == header.layout_id:
        return builtin
    raise LayoutError(
        f"log references layout {header.layout_id!r}; pass its file with --layout"
    )


# --- subcommands ------------------------------------------------------------


def _cmd_layout(args) -> int:
    if args.layout_cmd == "validate":
        text = Path(args.file).read_text("utf-8")
        try:
            layout = load_layout(text)
        except LayoutValidationError as exc:
            if args.pretty:
                print("invalid layout:")
                for v in exc.violations:
                    print(f"  {v}")
            else:
                _dump(
                    {
                        "ok": False,
                        "violations": [
                            {"region": v.region, "rule": v.rule, "message": v.message}
                            for v in exc.violations
                        ],
                    },
                    False,
                )
            return 2
        except LayoutError as exc:
            if args.pretty:
                print(f"invalid layout: {exc}")
            else:
                _dump({"ok": False, "error": str(exc)}, False)
            return 2
        if args.pretty:
            print(f"ok: {layout.layout_id} ({layout.method})")
        else:
            _dump({"ok": True, "id": layout.layout_id, "method": layout.method}, False)
        return 0
    raise UsageError("unknown layout subcommand")


def _cmd_calibrate(args) -> int:
    profile = load_calibration(Path(args.fingertips).read_text("utf-8"))
    if args.layout:
        profile = profile_with_layout(profile, _load_layout_arg(args.layout))
    text = serialize_profile(profile)
    if args.output:
        Path(args.output).write_text(text, "utf-8")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    layout = _load_layout_arg(args.layout) if args.layout else builtin_layout(args.method)
    if layout.method != args.method:
        raise UsageError(f"layout method {layout.method!r} does not match --method {args.method!r}")
    if args.phrases:
        phrases = [ln for ln in Path(args.phrases).read_text("utf-8").splitlines() if ln]
    else:
        if args.method == "fti":
            phrases = text_phrases(args.count, args.seed)
        else:
            phrases = digit_phrases(args.count, args.seed)
    latency = _parse_latency(args.latency, args.seed)
    profile = _load_profile_arg(args.profile) if (args.profile or args.touch) else None

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, phrase in enumerate(phrases):
        log = synthesize_session(
            phrase,
            layout,
            latency=LatencyModel(latency.kind, latency.lo_ms, latency.hi_ms, seed=latency.seed + i),
            profile=profile,
            touch_payload=args.touch,
        )
        path = out_dir / f"{args.method}_{i:04d}.jsonl"
        path.write_text(serialize_session_log(log), "utf-8")
        written.append(str(path))
    if args.pretty:
        print(f"wrote {len(written)} {args.method} logs to {out_dir}")
    else:
        _dump({"written": written, "method": args.method, "count": len(written)}, False)
    return 0


def _cmd_replay(args) -> int:
    log = parse_session_log(Path(args.log).read_text("utf-8"))
    extra = {}
    if args.layout:
        layout = _load_layout_arg(args.layout)
        extra[layout.layout_id] = layout
    layout = _resolve_log_layout(log.header, extra)
    profile = _load_profile_arg(args.profile) if args.profile else None
    result = replay_session(log, layout, profile=profile)
    metrics = trial_metrics(result.record)
    if args.pretty:
        print(f"transcript: {result.transcript}")
        if result.skipped:
            print(f"skipped events: {', '.join(map(str, result.skipped))}")
        print(_table(["metric", "value"], [[k, v] for k, v in metrics.to_json_dict().items()]))
        return 0
    _dump(
        {
            "transcript": result.transcript,
            "metrics": metrics.to_json_dict(),
            "skipped_events": list(result.skipped),
            "feedback": [e.to_json_dict() for e in result.feedback],
        },
        False,
    )
    return 0


def _cmd_compare(args) -> int:
    extra: dict[str, Layout] = {}
    for value in args.layout or []:
        layout = _load_layout_arg(value)
        extra[layout.layout_id] = layout
    profile = _load_profile_arg(args.profile) if args.profile else None

    by_group: dict[str, list] = {}
    for path in args.logs:
        log = parse_session_log(Path(path).read_text("utf-8"))
        layout = _resolve_log_layout(log.header, extra)
        result = replay_session(log, layout, profile=profile)
        key = log.header.method if args.group_by == "method" else log.header.layout_id
        by_group.setdefault(key, []).append(trial_metrics(result.record))

    report = comparison_report(by_group, w_threshold=args.w_threshold)
    if args.pretty:
        _print_comparison_tables(report)
        return 0
    _dump(report, False)
    return 0


def _print_comparison_tables(report: dict) -> None:
    rows = []
    for name, agg in report["groups"].items():
        rows.append(
            [
                name,
                agg["n"],
                f"{_fmt(agg['wpm']['mean'])} ± {_fmt(agg['wpm']['sd'])}",
                f"{_fmt(agg['duration_s']['mean'])} ± {_fmt(agg['duration_s']['sd'])}",
                f"{_fmt(agg['msd']['mean'])}",
                f"{_fmt(agg['kspc']['mean'])}",
            ]
        )
    print(_table(["group", "n", "wpm", "duration_s", "msd", "kspc"], rows))
    rule = report["selection_rule"]
    print(f"\nselection rule: {rule['description']} (threshold {rule['w_threshold']})")
    for measure, block in report["stats"].items():
        result = block.get("result")
        if result is None:
            print(f"{measure}: no test ({block.get('note', 'unavailable')})")
            continue
        df = f" df={tuple(result['df'])}" if result.get("df") else ""
        p = f" p={_fmt(result['p_value'])}" if result.get("p_value") is not None else ""
        note = f"  [{block['note']}]" if "note" in block else ""
        print(f"{measure}: {block['selected']} {result['statistic']}={_fmt(result['value'])}{df}{p} ({result['method']}){note}")


def _cmd_serve(args) -> int:
    service.serve(host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="fingertap", description=__doc__)
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_layout = sub.add_parser("layout", help="layout file tools")
    layout_sub = p_layout.add_subparsers(dest="layout_cmd", required=True)
    p_validate = layout_sub.add_parser("validate", help="validate a layout config file")
    p_validate.add_argument("file")

    p_cal = sub.add_parser("calibrate", help="derive anchors from a fingertips file")
    p_cal.add_argument("fingertips")
    p_cal.add_argument("-o", "--output", help="write the profile here instead of stdout")
    p_cal.add_argument("--layout", help="include this layout's synthetic anchors")

    p_sim = sub.add_parser("simulate", help="synthesize session logs for a phrase set")
    p_sim.add_argument("--method", required=True, choices=METHODS)
    p_sim.add_argument("--phrases", help="file with one phrase per line")
    p_sim.add_argument("--count", type=int, default=8, help="generate this many phrases instead")
    p_sim.add_argument("--latency", default="fixed:1000", help="fixed:MS or uniform:LO,HI")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--touch", action="store_true", help="emit touch coordinates instead of region names")
    p_sim.add_argument("--profile", help="calibration file (needed with --touch)")
    p_sim.add_argument("--layout", help="layout file or builtin id (default: builtin for method)")
    p_sim.add_argument("-o", "--output", required=True, help="directory for the .jsonl logs")

    p_rep = sub.add_parser("replay", help="replay a session log and print metrics")
    p_rep.add_argument("log")
    p_rep.add_argument("--layout", help="layout file or builtin id")
    p_rep.add_argument("--profile", help="calibration file (needed for touch logs)")

    p_cmp = sub.add_parser("compare", help="replay many logs and compare groups")
    p_cmp.add_argument("logs", nargs="+")
    p_cmp.add_argument("--group-by", choices=("method", "layout"), default="method")
    p_cmp.add_argument("--w-threshold", type=float, default=DEFAULT_W_THRESHOLD)
    p_cmp.add_argument("--layout", action="append", help="extra layout file (repeatable)")
    p_cmp.add_argument("--profile", help="calibration file for touch logs")

    p_srv = sub.add_parser("serve", help="run the HTTP session service")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")

    return parser


_COMMANDS = {
    "layout": _cmd_layout,
    "calibrate": _cmd_calibrate,
    "simulate": _cmd_simulate,
    "replay": _cmd_replay,
    "compare": _cmd_compare,
    "serve": _cmd_serve,
}


def execute(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except (
        LayoutError,
        CalibrationError,
        SessionLogError,
        SynthesisError,
        ReplayError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
