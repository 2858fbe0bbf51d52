import os
import pathlib

import pytest

import ami

SOURCE = pathlib.Path(os.environ.get("AMI_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def make_backend(tmp_path):
    hash_a = ami.hash_password("alice-pass", 1000)
    text = f"""
bind_address = "127.0.0.1:0"
data_dir = "{tmp_path}"
planner_mode = "scripted"
scripted_rules_path = "{SOURCE / 'config' / 'rules.txt'}"

[users.alice]
password_hash = "{hash_a}"
display_name = "Alice"
"""
    return ami.Backend.from_config_text(text, str(tmp_path))


def reading(**over):
    body = {
        "device_id": "dev-1",
        "captured_at": "2025-01-01T10:00:00Z",
        "temperature": 21.5,
        "humidity": 40.0,
        "co2": 420.0,
        "pm1_0": 3.0,
        "pm2_5": 5.0,
        "pm10": 8.0,
    }
    body.update(over)
    return body


def test_password_round_trip():
    enc = ami.hash_password("s3cret", 1000)
    assert ami.verify_password("s3cret", enc)
    assert not ami.verify_password("other", enc)


def test_validation_reports_field():
    assert ami.validate_sensor_payload(reading())["ok"]
    bad = ami.validate_sensor_payload(reading(humidity=140))
    assert bad == {"ok": False, "field": "humidity", "message": bad["message"]}
    assert ami.validate_sensor_payload("{nope")["field"] == "body"


def test_kappa_and_icc():
    assert ami.weighted_kappa([[1, 2, 3], [1, 2, 3]]) == pytest.approx(1.0)
    assert ami.weighted_kappa([[1, 2, 3], [1, 2, 2]], "linear") == pytest.approx(4 / 7)
    assert ami.weighted_kappa([[1, 2, 3], [1, 2, 2]], "quadratic") == pytest.approx(2 / 3)
    assert ami.mean_absolute_difference([[1, 2, 3], [1, 2, 2]]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        ami.weighted_kappa([[1, 2], [1, 2]], "cubic")


def test_sample_csv_averages():
    csv_text = (SOURCE / "data" / "irr_sample.csv").read_text()
    reports = ami.evaluate_irr_csv(csv_text)
    assert reports
    assert "Weighted" in ami.irr_table(csv_text) or "kappa" in ami.irr_table(csv_text).lower()
    with pytest.raises(ami.AmiError):
        ami.evaluate_irr_csv("criterion,rater,item,score\nc,r,i,9\n")


def test_rest_ingest_and_chat(tmp_path):
    backend = make_backend(tmp_path)
    status, body = backend.request("POST", "/sensor_data/", reading())
    assert status == 201, body
    status, body = backend.request("POST", "/sensor_data/", reading(pm2_5=-1))
    assert status == 400 and body["field"] == "pm2_5"
    assert backend.reading_count() == 1

    assert backend.request("POST", "/api/login", {"username": "alice", "password": "nope"})[0] == 401
    token = backend.login("alice", "alice-pass")
    status, body = backend.request("POST", "/api/chat", {"message": "the sensor is stuck"}, token=token)
    assert status == 200, body
    assert "issue #1" in body["reply"]
    call = body["tool_calls"][0]
    assert call["name"] == "report_issue"
    assert call["args"]["user_id"] == "alice"

    status, issues = backend.request("GET", "/api/issues", token=token)
    assert status == 200
    assert issues[0]["reporter_user_id"] == "alice"


def test_mcp_in_process(tmp_path):
    backend = make_backend(tmp_path)
    assert backend.mcp({"jsonrpc": "2.0", "id": 1, "method": "ping"}, "alice") == {"jsonrpc": "2.0", "id": 1, "result": {}}
    assert backend.mcp({"jsonrpc": "2.0", "method": "ping"}, "alice") is None
    listed = backend.mcp({"jsonrpc": "2.0", "id": 2, "method": "tools/list"}, "alice")
    names = {t["name"] for t in listed["result"]["tools"]}
    assert {"get_recent_sensor_data", "report_issue"} <= names
    with pytest.raises(ami.AmiError):
        backend.mcp({"jsonrpc": "2.0", "id": 3, "method": "ping"}, "mallory")


def test_openapi_hides_identity(tmp_path):
    doc = make_backend(tmp_path).openapi()
    assert doc["openapi"].startswith("3.")
    for path, item in doc["paths"].items():
        schema = item["post"]["requestBody"]["content"]["application/json"]["schema"]
        assert "user_id" not in schema.get("properties", {}), path
        assert "user_id" not in schema.get("required", []), path
