"""In-memory HTTP session service backing the web demo.

Endpoints (all JSON bodies):

    POST   /v1/session                {method, layout_id?, profile?} -> {session_id}
    POST   /v1/session/{id}/press     {region} | {x, y} [, t]        -> {events, transcript, region}
    GET    /v1/session/{id}/log       session log as JSON Lines
    GET    /v1/layouts                builtin layout list
    DELETE /v1/session/{id}

Sessions live in memory only; presses on one session are serialized by a
per-session lock while distinct sessions run concurrently.
"""

from __future__ import annotations

import json
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import engine
from .geometry import (
    CalibrationProfile,
    default_calibration,
    derive_anchors,
    profile_with_layout,
    resolve_region,
)
from .layout import METHODS, Layout, builtin_layout, builtin_layouts
from .regions import Point
from .session import (
    RegionEvent,
    SessionHeader,
    SessionLog,
    TouchEvent,
    serialize_session_log,
)


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class _Session:
    layout: Layout
    profile: CalibrationProfile
    calibration_doc: dict
    state: engine.EngineState
    events: list = field(default_factory=list)
    started: float = field(default_factory=time.monotonic)
    last_t: int = 0
    payload_kind: str | None = None  # "region" | "touch", fixed by first press
    lock: threading.Lock = field(default_factory=threading.Lock)


def _key_label(action) -> str:
    """Short display label for a bound action (rendering hint for clients)."""
    from .layout import Backspace, Call, CaseToggle, Enter, Send, Unassigned, action_symbols

    if isinstance(action, Backspace):
        return "DEL"
    if isinstance(action, Enter):
        return "ENTER"
    if isinstance(action, Call):
        return "CALL"
    if isinstance(action, Send):
        return "SEND"
    if isinstance(action, CaseToggle):
        return "Aa"
    if isinstance(action, Unassigned):
        return ""
    return action_symbols(action)


class SessionService:
    """Transport-independent core; the HTTP handler is a thin shim over it."""

    def __init__(self):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def layouts(self) -> dict:
        out = []
        for layout in builtin_layouts():
            out.append(
                {
                    "id": layout.layout_id,
                    "method": layout.method,
                    "bindings": [
                        {"region": region, "label": _key_label(layout.bindings[region])}
                        for region in layout.region_names()
                    ],
                    "synthetic_anchors": [
                        {"name": s.name, "dx": s.dx, "dy": s.dy, "relative_to": s.relative_to}
                        for s in layout.synthetic_anchors
                    ],
                }
            )
        return {"layouts": out}

    def create_session(self, body: dict) -> dict:
        method = body.get("method")
        if method not in METHODS:
            raise ServiceError(400, f"unknown method {method!r}")
        layout = builtin_layout(method)
        layout_id = body.get("layout_id")
        if layout_id is not None and layout_id != layout.layout_id:
            raise ServiceError(400, f"unknown layout id {layout_id!r}")

        profile_doc = body.get("profile")
        if profile_doc is None:
            profile = default_calibration()
            calibration_doc = {"builtin": "default"}
        else:
            try:
                tips = [Point(float(t["x"]), float(t["y"])) for t in profile_doc["fingertips"]]
                profile = derive_anchors(
                    tips,
                    edge_offset=float(profile_doc.get("edge_offset", 0.05)),
                    radius=float(profile_doc.get("radius", 0.18)),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ServiceError(400, f"bad calibration profile: {exc}") from exc
            calibration_doc = {
                "fingertips": [{"x": p.x, "y": p.y} for p in profile.fingertips],
                "edge_offset": profile.edge_offset,
                "radius": profile.activation_radius,
            }

        session = _Session(
            layout=layout,
            profile=profile_with_layout(profile, layout),
            calibration_doc=calibration_doc,
            state=engine.new_session(layout),
        )
        sid = uuid.uuid4().hex
        with self._lock:
            self._sessions[sid] = session
        return {"session_id": sid}

    def _get(self, sid: str) -> _Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ServiceError(404, f"no session {sid!r}")
        return session

    def press(self, sid: str, body: dict) -> dict:
        session = self._get(sid)
        with session.lock:
            has_region = "region" in body
            has_touch = "x" in body and "y" in body
            if has_region == has_touch:
                raise ServiceError(400, "press needs either 'region' or 'x'/'y'")
            kind = "region" if has_region else "touch"
            if session.payload_kind is None:
                session.payload_kind = kind
            elif session.payload_kind != kind:
                raise ServiceError(400, "cannot mix region and touch payloads in one session")

            t = body.get("t")
            if t is None:
                t = int((time.monotonic() - session.started) * 1000)
                t = max(t, session.last_t)
            else:
                if not isinstance(t, int) or t < 0:
                    raise ServiceError(400, "timestamp 't' must be a non-negative integer")
                if t < session.last_t:
                    raise ServiceError(400, f"timestamp decreases ({t} < {session.last_t})")

            if has_region:
                region = str(body["region"])
                event = RegionEvent(t_ms=t, region=region)
            else:
                try:
                    p = Point(float(body["x"]), float(body["y"]))
                except (TypeError, ValueError) as exc:
                    raise ServiceError(400, f"bad coordinates: {exc}") from exc
                region = resolve_region(p, session.profile)
                event = TouchEvent(t_ms=t, x=p.x, y=p.y)

            if region is None:
                session.events.append(event)
                session.last_t = t
                return {
                    "events": [],
                    "transcript": engine.transcript(session.state),
                    "region": None,
                }

            try:
                state, events = engine.press(session.state, region)
            except engine.TerminatedSessionError as exc:
                raise ServiceError(409, str(exc)) from exc
            except engine.UnknownRegionError as exc:
                raise ServiceError(400, str(exc)) from exc

            session.state = state
            session.events.append(event)
            session.last_t = t
            return {
                "events": [e.to_json_dict() for e in events],
                "transcript": engine.transcript(session.state),
                "region": region,
            }

    def log_text(self, sid: str) -> str:
        session = self._get(sid)
        with session.lock:
            log = SessionLog(
                header=SessionHeader(
                    method=session.layout.method,
                    layout_id=session.layout.layout_id,
                    calibration=session.calibration_doc,
                ),
                events=tuple(session.events),
            )
            return serialize_session_log(log)

    def delete(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise ServiceError(404, f"no session {sid!r}")
            del self._sessions[sid]


_SESSION_PATH = re.compile(r"^/v1/session/([0-9a-f]+)(/(press|log))?$")


class _Handler(BaseHTTPRequestHandler):
    service: SessionService  # set by make_server

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_text(self, status: int, text: str, content_type: str) -> None:
        body = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            doc = json.loads(raw.decode("utf-8") or "{}")
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ServiceError(400, f"request body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ServiceError(400, "request body must be a JSON object")
        return doc

    def _dispatch(self, verb: str) -> None:
        try:
            if verb == "POST" and self.path == "/v1/session":
                self._send_json(200, self.service.create_session(self._read_body()))
                return
            if verb == "GET" and self.path == "/v1/layouts":
                self._send_json(200, self.service.layouts())
                return
            m = _SESSION_PATH.match(self.path)
            if m:
                sid, tail = m.group(1), m.group(3)
                if verb == "POST" and tail == "press":
                    self._send_json(200, self.service.press(sid, self._read_body()))
                    return
                if verb == "GET" and tail == "log":
                    self._send_text(200, self.service.log_text(sid), "application/x-ndjson")
                    return
                if verb == "DELETE" and tail is None:
                    self.service.delete(sid)
                    self.send_response(204)
                    self.send_header("Access-Control-Allow-Origin", "*")
                    self.end_headers()
                    return
            raise ServiceError(404, f"no route for {verb} {self.path}")
        except ServiceError as exc:
            self._send_json(exc.status, {"error": exc.message})

    def do_POST(self):
        self._dispatch("POST")

    def do_GET(self):
        self._dispatch("GET")

    def do_DELETE(self):
        self._dispatch("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()


def make_server(host: str = "127.0.0.1", port: int = 8000) -> ThreadingHTTPServer:
    service = SessionService()
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(host: str = "127.0.0.1", port: int = 8000) -> None:
    server = make_server(host, port)
    print(f"session service listening on http://{host}:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
