import json
import socket
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from mfmod.pipeline import EXTERNAL, PipelineError, transform_program
from mfmod.transform.backend import (
    BACKEND_GATE,
    BACKEND_PARSE,
    BACKEND_UNAVAILABLE,
    DIALECT,
    URL_ENV,
    BackendEndpoint,
    BackendError,
    translate_external,
)
from mfmod.transform.lower import EXTERNAL_BACKEND, lower_baseline
from mfmod.transform.mir import render
from mfmod.transform.scoring import TransformWeights
from mfmod.verify import generate_tests


class Stub:
    """Tiny backend whose reply is computed from the request body by ``reply``."""

    def __init__(self, reply):
        self.requests = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
                stub.requests.append(body)
                out = reply(body)
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.end_headers()
                self.wfile.write(out)

            def log_message(self, *args):
                pass

        self.server = HTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self):
        return f"http://127.0.0.1:{self.server.server_port}/translate"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()


def mir_reply(text):
    return lambda body: json.dumps({"mir_text": text}).encode()


@pytest.fixture
def payroll(corpus):
    return dict(corpus)["payroll.cbl"]


def dead_url():
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return f"http://127.0.0.1:{port}/"


def test_echo_backend_accepted(payroll):
    text = render(lower_baseline(payroll).ir)
    with Stub(mir_reply(text)) as stub:
        cand = translate_external(payroll, BackendEndpoint(stub.url, 5), tests=20)
    assert cand.provenance == EXTERNAL_BACKEND
    assert cand.ir == lower_baseline(payroll).ir
    body = stub.requests[0]
    assert set(body) == {"source", "graph", "dialect"} and body["dialect"] == DIALECT
    assert "PROCEDURE DIVISION" in body["source"]


@pytest.mark.parametrize("raw", [b"not json", b'{"text": "x"}', json.dumps({"mir_text": "unit;"}).encode()])
def test_garbage_is_backend_parse(payroll, raw):
    with Stub(lambda body: raw) as stub:
        with pytest.raises(BackendError) as err:
            translate_external(payroll, BackendEndpoint(stub.url, 5), tests=5)
    assert err.value.code == BACKEND_PARSE


def test_wrong_program_fails_gate(payroll):
    text = "\n".join(l for l in render(lower_baseline(payroll).ir).splitlines() if "print(" not in l) + "\n"
    with Stub(mir_reply(text)) as stub:
        with pytest.raises(BackendError) as err:
            translate_external(payroll, BackendEndpoint(stub.url, 5), tests=20)
    assert err.value.code == BACKEND_GATE


def test_unreachable_is_backend_unavailable(payroll):
    with pytest.raises(BackendError) as err:
        translate_external(payroll, BackendEndpoint(dead_url(), 2), tests=5)
    assert err.value.code == BACKEND_UNAVAILABLE


def test_endpoint_from_env():
    with pytest.raises(BackendError):
        BackendEndpoint.from_env({})
    ep = BackendEndpoint.from_env({URL_ENV: "http://x/", "MFMOD_BACKEND_TIMEOUT_SECS": "2.5"})
    assert ep == BackendEndpoint("http://x/", 2.5)


def test_pipeline_falls_back_when_unreachable(payroll, monkeypatch):
    monkeypatch.setenv(URL_ENV, dead_url())
    tests = generate_tests(payroll, 10, 42)
    out = transform_program(payroll, TransformWeights(), tests, None, EXTERNAL)
    assert all(c.provenance != EXTERNAL_BACKEND for c in out.candidates)
    assert out.notes and BACKEND_UNAVAILABLE in out.notes[0]


def test_pipeline_uses_external_candidate(payroll, monkeypatch):
    with Stub(mir_reply(render(lower_baseline(payroll).ir))) as stub:
        monkeypatch.setenv(URL_ENV, stub.url)
        tests = generate_tests(payroll, 10, 42)
        out = transform_program(payroll, TransformWeights(), tests, None, EXTERNAL)
    assert out.candidates[0].provenance == EXTERNAL_BACKEND
    # Ties go to the lowest index, so the identical external candidate wins.
    assert out.chosen.provenance == EXTERNAL_BACKEND


def test_pipeline_parse_error_exit_code(payroll, monkeypatch):
    with Stub(lambda body: b"junk") as stub:
        monkeypatch.setenv(URL_ENV, stub.url)
        with pytest.raises(PipelineError) as err:
            transform_program(payroll, TransformWeights(), generate_tests(payroll, 5, 42), None, EXTERNAL)
    assert err.value.exit_code == 3
