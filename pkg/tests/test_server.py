import json
import threading
import urllib.error
import urllib.request
from pathlib import Path

import pytest

from pbisim.server import ModelRegistry, start_background

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="module")
def server():
    registry = ModelRegistry()
    registry.load(MODELS / "fourstate.plts")
    registry.load(MODELS / "mixed.ppda")
    httpd, port, _thread = start_background(registry)
    yield f"http://127.0.0.1:{port}"
    httpd.shutdown()


def get(base, path):
    try:
        with urllib.request.urlopen(base + path) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def post(base, path, body):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_models_endpoint(server):
    status, body = get(server, "/models")
    assert status == 200
    names = {m["name"] for m in body["models"]}
    assert names == {"fourstate", "mixed"}


def test_session_lifecycle(server):
    status, body = post(
        server,
        "/session",
        {"model": "fourstate", "s1": "s", "s2": "u", "human_side": "defender", "horizon": 2},
    )
    assert status == 201
    sid = body["id"]
    assert body["status"] == "active"
    assert body["position"]["kind"] == "def_trans"
    assert body["history"][0]["by"] == "engine"
    assert body["lifted_rounds"] == 0

    status, body = get(server, f"/session/{sid}")
    assert status == 200
    assert len(body["legal_moves"]) == 1

    status, body = post(server, f"/session/{sid}/move", body["legal_moves"][0])
    assert status == 200
    assert body["position"]["kind"] == "def_subset"
    assert body["lifted_rounds"] == 1
    # the engine attacker has committed to a subset whose mass bounds the reply
    assert body["position"]["rho"]["den"] >= 1


def test_illegal_move_rejected(server):
    _, body = post(
        server,
        "/session",
        {"model": "fourstate", "s1": "s", "s2": "u", "human_side": "defender", "horizon": 2},
    )
    sid = body["id"]
    status, err = post(
        server,
        f"/session/{sid}/move",
        {"actor": "defender", "kind": "transition", "side": 2, "action": "a", "dist": []},
    )
    assert status == 400
    assert "illegal move" in err["error"]


def test_unknown_session_and_model(server):
    status, err = get(server, "/session/999999")
    assert status == 404
    status, err = post(server, "/session", {"model": "nope", "s1": "s", "s2": "u"})
    assert status == 400


def test_ppda_backed_session(server):
    status, body = post(
        server,
        "/session",
        {"model": "mixed", "s1": "pXZ", "s2": "rX", "human_side": "attacker", "horizon": 2},
    )
    assert status == 201
    assert body["position"]["kind"] == "pair"
    assert body["position"]["s1"] == "pXZ"
    # attacker to move first; engine defender should then survive any play
    sid = body["id"]
    while body["status"] == "active":
        status, body = post(server, f"/session/{sid}/move", body["legal_moves"][0])
        assert status == 200
    # pXZ and rX are bisimilar, so any play is some flavour of Defender win
    assert body["status"] in ("defender_survived", "defender_won_dead")


def test_concurrent_sessions(server):
    results = []

    def run():
        _, body = post(
            server,
            "/session",
            {"model": "fourstate", "s1": "t1", "s2": "t2", "human_side": "attacker", "horizon": 2},
        )
        sid = body["id"]
        while body["status"] == "active":
            _, body2 = post(server, f"/session/{sid}/move", body["legal_moves"][0])
            body = body2
        results.append(body["status"])

    threads = [threading.Thread(target=run) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == ["defender_survived"] * 6
