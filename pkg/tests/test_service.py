import json
import threading
import urllib.error
import urllib.request

import pytest

from fingertap.layout import builtin_layout
from fingertap.service import make_server
from fingertap.session import parse_session_log, replay_session

CAL = {
    "fingertips": [
        {"x": 0.07, "y": 0.2},
        {"x": 0.07, "y": 0.35},
        {"x": 0.07, "y": 0.5},
        {"x": 0.07, "y": 0.65},
        {"x": 0.93, "y": 0.45},
    ],
    "edge_offset": 0.05,
    "radius": 0.18,
}


@pytest.fixture(scope="module")
def server():
    srv = make_server(port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


def call(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method)
    if data:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req) as resp:
            raw = resp.read()
            return resp.status, json.loads(raw) if raw and resp.headers.get("Content-Type", "").startswith("application/json") else raw.decode()
    except urllib.error.HTTPError as err:
        raw = err.read()
        return err.code, json.loads(raw) if raw else {}


def test_layout_listing(server):
    status, body = call(server, "GET", "/v1/layouts")
    assert status == 200
    ids = {l["id"] for l in body["layouts"]}
    assert ids == {"single-digit-default", "double-digit-default", "fti-default"}
    single = next(l for l in body["layouts"] if l["method"] == "single_digit_fdi")
    labels = {b["region"]: b["label"] for b in single["bindings"]}
    assert labels["Index"] == "4" and labels["AboveIndex"] == "DEL" and labels["BottomCenter2"] == "CALL"
    assert single["synthetic_anchors"] == [
        {"name": "BottomCenter2", "dx": 0.1, "dy": 0.0, "relative_to": "BottomCenter"}
    ]


def test_session_lifecycle_with_region_presses(server):
    status, body = call(server, "POST", "/v1/session", {"method": "double_digit_fdi"})
    assert status == 200
    sid = body["session_id"]

    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "t": 100})
    assert status == 200
    assert body["events"] == [{"kind": "announce", "utterance": "one"}]
    assert body["transcript"] == ""

    call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "t": 200})
    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Thumb", "t": 300})
    assert body["transcript"] == "2"

    status, text = call(server, "GET", f"/v1/session/{sid}/log")
    assert status == 200
    log = parse_session_log(text)
    assert [e.region for e in log.events] == ["Index", "Index", "Thumb"]
    result = replay_session(log, builtin_layout("double_digit_fdi"))
    assert result.transcript == "2"

    status, _ = call(server, "DELETE", f"/v1/session/{sid}")
    assert status == 204
    status, _ = call(server, "GET", f"/v1/session/{sid}/log")
    assert status == 404


def test_touch_press_resolution_and_fidelity(server):
    status, body = call(server, "POST", "/v1/session", {"method": "single_digit_fdi", "profile": CAL})
    sid = body["session_id"]

    # Index anchor: commits "4"
    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"x": 0.12, "y": 0.2, "t": 50})
    assert body["region"] == "Index"
    assert body["transcript"] == "4"
    assert body["events"][0]["utterance"] == "four"

    # dead zone: no region, no events, but the touch is still logged
    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"x": 0.31, "y": 0.95, "t": 90})
    assert body["region"] is None
    assert body["events"] == []
    assert body["transcript"] == "4"

    status, text = call(server, "GET", f"/v1/session/{sid}/log")
    log = parse_session_log(text)
    assert len(log.events) == 2
    result = replay_session(log, builtin_layout("single_digit_fdi"))
    assert result.transcript == "4"
    assert result.skipped == (1,)


def test_unknown_session_is_404(server):
    status, _ = call(server, "POST", "/v1/session/deadbeef/press", {"region": "Index"})
    assert status == 404
    status, _ = call(server, "DELETE", "/v1/session/deadbeef")
    assert status == 404


def test_bad_requests_are_400(server):
    status, _ = call(server, "POST", "/v1/session", {"method": "morse"})
    assert status == 400
    _, body = call(server, "POST", "/v1/session", {"method": "fti"})
    sid = body["session_id"]
    status, _ = call(server, "POST", f"/v1/session/{sid}/press", {})
    assert status == 400
    status, _ = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "x": 0.5, "y": 0.5})
    assert status == 400
    status, _ = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Nowhere"})
    assert status == 400


def test_mixed_payload_kinds_rejected(server):
    _, body = call(server, "POST", "/v1/session", {"method": "fti"})
    sid = body["session_id"]
    call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index"})
    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"x": 0.5, "y": 0.5})
    assert status == 400
    assert "mix" in body["error"]


def test_decreasing_timestamp_rejected(server):
    _, body = call(server, "POST", "/v1/session", {"method": "fti"})
    sid = body["session_id"]
    call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "t": 500})
    status, body = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "t": 400})
    assert status == 400
    assert "timestamp" in body["error"]


def test_press_after_termination_conflicts(server):
    _, body = call(server, "POST", "/v1/session", {"method": "single_digit_fdi"})
    sid = body["session_id"]
    call(server, "POST", f"/v1/session/{sid}/press", {"region": "BottomCenter2", "t": 10})
    status, _ = call(server, "POST", f"/v1/session/{sid}/press", {"region": "Index", "t": 20})
    assert status == 409


def test_concurrent_sessions_do_not_interfere(server):
    sids = []
    for method in ("single_digit_fdi", "double_digit_fdi"):
        _, body = call(server, "POST", "/v1/session", {"method": method})
        sids.append(body["session_id"])

    results = {}

    def hammer(sid, region, n):
        for i in range(n):
            _, body = call(server, "POST", f"/v1/session/{sid}/press", {"region": region})
        results[sid] = body["transcript"]

    threads = [
        threading.Thread(target=hammer, args=(sids[0], "Index", 5)),
        threading.Thread(target=hammer, args=(sids[1], "Index", 4)),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results[sids[0]] == "44444"  # single digit: five commits
    assert results[sids[1]] == ""  # double digit: candidate only, never committed
