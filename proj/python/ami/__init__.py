"""Python access to the AMI air-quality assistant core."""

import json as _json

from . import _core
from ._core import AmiError, hash_password, icc_3_1, irr_table, mean_absolute_difference, verify_password, weighted_kappa

__all__ = [
    "AmiError",
    "Backend",
    "evaluate_irr_csv",
    "hash_password",
    "icc_3_1",
    "irr_table",
    "mean_absolute_difference",
    "validate_sensor_payload",
    "verify_password",
    "weighted_kappa",
]


def evaluate_irr_csv(csv_text, scheme="quadratic", scale_max=5):
    return _json.loads(_core.evaluate_irr_csv(csv_text, scheme, scale_max))


def validate_sensor_payload(payload):
    body = payload if isinstance(payload, str) else _json.dumps(payload)
    return _json.loads(_core.validate_sensor_payload(body))


class Backend:
    """In-process backend: REST and MCP without a socket."""

    def __init__(self, core):
        self._core = core

    @classmethod
    def from_config_file(cls, path):
        return cls(_core.Backend.from_config_file(str(path)))

    @classmethod
    def from_config_text(cls, text, base_dir=""):
        return cls(_core.Backend.from_config_text(text, str(base_dir)))

    def request(self, method, path, body=None, token=None, headers=None, query=None):
        hdrs = dict(headers or {})
        if body is not None and not isinstance(body, (str, bytes)):
            body = _json.dumps(body)
            hdrs.setdefault("Content-Type", "application/json")
        if isinstance(body, bytes):
            body = body.decode("utf-8")
        if token:
            hdrs["Authorization"] = "Bearer " + token
        status, content_type, raw = self._core.request(method, path, body or "", hdrs, dict(query or {}))
        payload = _json.loads(raw) if raw and content_type.startswith("application/json") else raw
        return status, payload

    def login(self, user, password):
        status, payload = self.request("POST", "/api/login", {"username": user, "password": password})
        if status != 200:
            raise AmiError(f"login failed ({status}): {payload}")
        return payload["token"]

    def mcp(self, message, user):
        wire = message if isinstance(message, str) else _json.dumps(message)
        out = self._core.mcp(wire, user)
        return None if out is None else _json.loads(out)

    def open_session(self, user):
        return self._core.open_session(user)

    def openapi(self):
        return _json.loads(self._core.openapi())

    def reading_count(self):
        return self._core.reading_count()

    def flush(self):
        self._core.flush()
