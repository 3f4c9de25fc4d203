"""Client for an optional external translation backend.

Wire contract: POST ``{"source", "graph", "dialect"}`` as JSON to
``$MFMOD_BACKEND_URL``; the reply is ``{"mir_text": ...}``.  A reply is only
accepted if it parses as MIR, is well-formed, and agrees with the original
program on every generated test (accuracy index 100).
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass

from mfmod.depgraph import build_graph
from mfmod.frontend.nodes import Program
from mfmod.frontend.unparse import unparse
from mfmod.transform.ir import IRError, ensure_well_formed
from mfmod.transform.lower import EXTERNAL_BACKEND, TransformCandidate
from mfmod.transform.mir import MirSyntaxError, parse_mir
from mfmod.verify.check import verify
from mfmod.verify.testgen import generate_tests

DIALECT = "cobol-subset-1"
URL_ENV = "MFMOD_BACKEND_URL"
TIMEOUT_ENV = "MFMOD_BACKEND_TIMEOUT_SECS"
DEFAULT_TIMEOUT = 30.0

BACKEND_UNAVAILABLE = "backend-unavailable"
BACKEND_PARSE = "backend-parse"
BACKEND_GATE = "backend-gate"


class BackendError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class BackendEndpoint:
    url: str
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_env(cls, environ=None) -> "BackendEndpoint":
        env = os.environ if environ is None else environ
        url = env.get(URL_ENV)
        if not url:
            raise BackendError(BACKEND_UNAVAILABLE, f"{URL_ENV} is not set")
        raw = env.get(TIMEOUT_ENV)
        try:
            timeout = float(raw) if raw else DEFAULT_TIMEOUT
        except ValueError:
            raise BackendError(BACKEND_UNAVAILABLE, f"{TIMEOUT_ENV}={raw!r} is not a number") from None
        return cls(url, timeout)


def request_body(program: Program) -> dict:
    return {"source": unparse(program), "graph": build_graph(program).to_json(), "dialect": DIALECT}


def _post(endpoint: BackendEndpoint, body: dict) -> str:
    data = json.dumps(body).encode("utf-8")
    req = urllib.request.Request(
        endpoint.url, data=data, method="POST", headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req, timeout=endpoint.timeout) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise BackendError(BACKEND_UNAVAILABLE, str(exc)) from exc
    try:
        reply = json.loads(payload)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise BackendError(BACKEND_PARSE, f"reply is not JSON: {exc}") from exc
    if not isinstance(reply, dict) or not isinstance(reply.get("mir_text"), str):
        raise BackendError(BACKEND_PARSE, "reply has no string field mir_text")
    return reply["mir_text"]


def translate_external(
    program: Program, endpoint: BackendEndpoint, tests: int = 100, seed: int = 42
) -> TransformCandidate:
    text = _post(endpoint, request_body(program))
    try:
        ir = ensure_well_formed(parse_mir(text))
    except (MirSyntaxError, IRError) as exc:
        raise BackendError(BACKEND_PARSE, str(exc)) from exc
    candidate = TransformCandidate(ir, EXTERNAL_BACKEND, (), "external")
    report = verify(program, candidate, generate_tests(program, tests, seed))
    if report.accuracy_index < 100:
        raise BackendError(
            BACKEND_GATE, f"accuracy index {float(report.accuracy_index):.1f} is below 100 on the rule-engine suite"
        )
    return candidate
