import json
import threading
import urllib.error
import urllib.request

import pytest

from fourfx.service import make_server


@pytest.fixture(scope="module")
def server_port():
    server = make_server(0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield port
    server.shutdown()
    server.server_close()


def call(port, method, path, body=None, sid="s"):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        f"http://127.0.0.1:{port}{path}",
        data=data,
        headers={"X-Session": sid, "Content-Type": "application/json"},
        method=method,
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def call_raw(port, method, path, body=None, sid="s"):
    try:
        return 200, call(port, method, path, body, sid)
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def test_state_schema(server_port):
    doc = call(server_port, "GET", "/api/state", sid="schema")
    assert len(doc["log_rates"]) == 6
    assert len(doc["discrepancies"]) == 3
    assert len(doc["active"]) == 24 and all(isinstance(x, bool) for x in doc["active"])
    assert doc["balanced"] is False
    assert doc["history_len"] == 0
    assert doc["vertex"] == 10


def test_apply_and_undo_round_trip(server_port):
    sid = "roundtrip"
    before = call(server_port, "GET", "/api/state", sid=sid)
    applied = call(server_port, "POST", "/api/apply", {"arbitrage": 15}, sid=sid)
    assert applied["applied"] is True
    assert applied["discrepancies"][0] == pytest.approx(0.0)
    assert applied["vertex"] == 11
    undone = call(server_port, "POST", "/api/undo", sid=sid)
    assert undone["undone"] is True
    # bit-identical after undo (serialized text comparison)
    assert json.dumps(undone["log_rates"]) == json.dumps(before["log_rates"])
    assert json.dumps(undone["ensemble"]) == json.dumps(before["ensemble"])
    # replay determinism: re-applying reproduces the identical state
    replay = call(server_port, "POST", "/api/apply", {"arbitrage": 15}, sid=sid)
    assert json.dumps(replay["ensemble"]) == json.dumps(applied["ensemble"])
    call(server_port, "POST", "/api/undo", sid=sid)


def test_inactive_apply_is_noop(server_port):
    sid = "noop"
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid=sid)
    state = call(server_port, "GET", "/api/state", sid=sid)
    inactive = next(k for k in range(1, 25) if not state["active"][k - 1])
    doc = call(server_port, "POST", "/api/apply", {"arbitrage": inactive}, sid=sid)
    assert doc["applied"] is False
    assert doc["history_len"] == 0
    assert doc["log_rates"] == state["log_rates"]


def test_active_flags_match_server_truth(server_port):
    sid = "flags"
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid=sid)
    from fourfx.market import GeneratorBasis, active_flags, apply_arbitrage, make_perturbed

    mirror = make_perturbed(GeneratorBasis.single(2.0), 1)
    for k in (15, 10, 3, 21, 12, 8):
        doc = call(server_port, "POST", "/api/apply", {"arbitrage": k}, sid=sid)
        mirror = apply_arbitrage(mirror, k)
        assert doc["active"] == list(active_flags(mirror))


def test_reset_variants_and_errors(server_port):
    sid = "reset"
    doc = call(server_port, "POST", "/api/reset", {"log_rates": [0.1] * 6}, sid=sid)
    assert doc["mode"] == "numeric" and doc["vertex"] is None
    doc = call(server_port, "POST", "/api/reset", {"alpha": 3.0, "perturb": 4}, sid=sid)
    assert doc["mode"] == "lattice" and doc["vertex"] == 9
    status, err = call_raw(server_port, "POST", "/api/reset", {"alpha": 1.0}, sid=sid)
    assert status == 400 and "error" in err
    status, err = call_raw(server_port, "POST", "/api/apply", {"arbitrage": 99}, sid=sid)
    assert status == 400


def test_synthesize_and_playback(server_port):
    sid = "synth"
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid=sid)
    syn = call(
        server_port, "POST", "/api/synthesize",
        {"n1": 1, "n2": 0, "n3": 0, "method": "bfs"}, sid=sid,
    )
    assert syn == {"chain": [15, 21], "length": 2, "bound": 3,
                   "method": "bfs", "deviation": False}
    start = call(server_port, "GET", "/api/state", sid=sid)
    end = call(server_port, "POST", "/api/playback", {"chain": syn["chain"], "cursor": 2}, sid=sid)
    assert end["balanced"] is True and end["cursor"] == 2
    re_wound = call(server_port, "POST", "/api/playback", {"cursor": 0}, sid=sid)
    assert json.dumps(re_wound["log_rates"]) == json.dumps(start["log_rates"])


def test_synthesize_printed_method(server_port):
    sid = "printed"
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid=sid)
    syn = call(
        server_port, "POST", "/api/synthesize",
        {"n1": 1, "n2": 0, "n3": 1, "method": "printed"}, sid=sid,
    )
    assert syn["method"] == "formula" and syn["deviation"] is False
    status, err = call_raw(
        server_port, "POST", "/api/synthesize",
        {"n1": 0, "n2": 0, "n3": 0, "method": "nope"}, sid=sid,
    )
    assert status == 400


def test_graph_endpoint(server_port):
    doc = call(server_port, "GET", "/api/graph?a=0.6931&b=0")
    assert doc["family"] == "single"
    assert len(doc["vertices"]) == 12
    names = {v["name"] for v in doc["vertices"]}
    assert names == {f"D{i}" for i in range(1, 13)}
    assert all(e["arbitrage"] is None or 1 <= e["arbitrage"] <= 24 for e in doc["edges"])
    doc24 = call(server_port, "GET", "/api/graph?a=1.0&b=0.37")
    assert len(doc24["vertices"]) == 24


def test_session_isolation(server_port):
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid="iso-a")
    call(server_port, "POST", "/api/apply", {"arbitrage": 15}, sid="iso-a")
    other = call(server_port, "GET", "/api/state", sid="iso-b")
    assert other["history_len"] == 0
    assert other["vertex"] == 10


def test_playback_a_star_closes_loop(server_port):
    from fourfx.synthesis import star_chain

    sid = "star"
    call(server_port, "POST", "/api/reset", {"alpha": 2.0, "perturb": 1}, sid=sid)
    start = call(server_port, "GET", "/api/state", sid=sid)
    chain = list(star_chain().items)
    end = call(server_port, "POST", "/api/playback", {"chain": chain, "cursor": 24}, sid=sid)
    assert end["cursor"] == 24
    assert json.dumps(end["log_rates"]) == json.dumps(start["log_rates"])
    assert end["vertex"] == start["vertex"] == 10
