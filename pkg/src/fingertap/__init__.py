"""Finger-anchored eyes-free touchscreen text entry.

Virtual keys anchor to the positions of the gripping hand's fingertips, so a
non-sighted user can find them without exploring the screen. The package
provides the key layouts, the calibration geometry that turns five fingertip
taps into pressable anchors, deterministic entry state machines with spoken
feedback events, a session log format with a synthesizer and replayer,
per-trial performance metrics, and the statistics used to compare entry
methods. ``fingertap serve`` exposes the engine over HTTP for interactive
front ends.
"""

from .engine import (
    EngineState,
    FeedbackEvent,
    new_session,
    press,
    transcript,
)
from .geometry import (
    CalibrationProfile,
    default_calibration,
    derive_anchors,
    load_calibration,
    resolve_region,
)
from .layout import (
    Layout,
    builtin_layout,
    builtin_layouts,
    load_layout,
    serialize_layout,
    validate_layout,
)
from .metrics import (
    MetricsReport,
    TrialRecord,
    min_string_distance,
    trial_metrics,
    words_per_minute,
)
from .regions import CANONICAL_REGIONS, Point
from .report import comparison_report
from .session import (
    LatencyModel,
    SessionLog,
    digit_phrases,
    parse_session_log,
    replay_session,
    serialize_session_log,
    synthesize_session,
    text_phrases,
)
from .stats import (
    TestResult,
    anova_oneway,
    mann_whitney,
    regularized_incomplete_beta,
    shapiro_wilk,
)

__version__ = "0.1.0"
