"""Deterministic local chat-completion endpoint for tests and offline runs.

Serves the OpenAI-style ``/v1/chat/completions`` protocol from a fixture map
keyed by prompt digest (or echoes the prompt back in echo mode).  A debug
path exposes request and concurrency counters, plus a fault-injection hook
that fails the next N requests with a chosen status code.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .gateway import prompt_digest

COMPLETIONS_PATH = "/v1/chat/completions"


class StubServer:
    """In-process HTTP stub.  Use as a context manager.

    modes:
      fixture — answer from ``responses`` (prompt digest -> text); unknown
                digests get ``default_response`` or HTTP 400
      echo    — answer with the prompt itself
    """

    def __init__(
        self,
        responses: dict[str, str] | None = None,
        mode: str = "fixture",
        default_response: str | None = None,
        delay: float = 0.0,
        host: str = "127.0.0.1",
    ):
        self.responses = dict(responses or {})
        self.mode = mode
        self.default_response = default_response
        self.delay = delay
        self._lock = threading.Lock()
        self.request_count = 0
        self.in_flight = 0
        self.in_flight_max = 0
        self._fail_times = 0
        self._fail_status = 500
        self._fail_body: str | None = None

        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt, *args):  # keep test output quiet
                pass

            def _send_json(self, status: int, payload: dict) -> None:
                body = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                if self.path == "/debug/counters":
                    with stub._lock:
                        payload = {
                            "requests": stub.request_count,
                            "in_flight_max": stub.in_flight_max,
                        }
                    self._send_json(200, payload)
                else:
                    self._send_json(404, {"error": "not found"})

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length) if length else b"{}"
                if self.path == "/debug/reset":
                    with stub._lock:
                        stub.request_count = 0
                        stub.in_flight_max = 0
                    self._send_json(200, {"ok": True})
                    return
                if self.path == "/debug/fail":
                    spec = json.loads(raw)
                    with stub._lock:
                        stub._fail_times = int(spec.get("times", 1))
                        stub._fail_status = int(spec.get("status", 500))
                        stub._fail_body = spec.get("body")
                    self._send_json(200, {"ok": True})
                    return
                if self.path != COMPLETIONS_PATH:
                    self._send_json(404, {"error": "not found"})
                    return
                with stub._lock:
                    stub.request_count += 1
                    stub.in_flight += 1
                    stub.in_flight_max = max(stub.in_flight_max, stub.in_flight)
                    inject = None
                    inject_body = None
                    if stub._fail_times > 0:
                        stub._fail_times -= 1
                        inject = stub._fail_status
                        inject_body = stub._fail_body
                try:
                    if stub.delay:
                        time.sleep(stub.delay)
                    if inject is not None:
                        if inject_body is not None:
                            body = inject_body.encode("utf-8")
                            self.send_response(inject)
                            self.send_header("Content-Type", "application/json")
                            self.send_header("Content-Length", str(len(body)))
                            self.end_headers()
                            self.wfile.write(body)
                        else:
                            self._send_json(inject, {"error": "injected failure"})
                        return
                    try:
                        request = json.loads(raw)
                        prompt = request["messages"][-1]["content"]
                    except (ValueError, KeyError, IndexError, TypeError):
                        self._send_json(400, {"error": "bad request"})
                        return
                    content = stub._answer(prompt)
                    if content is None:
                        self._send_json(400, {"error": "no fixture for prompt"})
                        return
                    self._send_json(
                        200,
                        {
                            "object": "chat.completion",
                            "model": request.get("model", "stub"),
                            "choices": [
                                {
                                    "index": 0,
                                    "message": {"role": "assistant", "content": content},
                                    "finish_reason": "stop",
                                }
                            ],
                        },
                    )
                finally:
                    with stub._lock:
                        stub.in_flight -= 1

        self._server = ThreadingHTTPServer((host, 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    def _answer(self, prompt: str) -> str | None:
        if self.mode == "echo":
            return prompt
        return self.responses.get(prompt_digest(prompt), self.default_response)

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def endpoint(self) -> str:
        return f"http://127.0.0.1:{self.port}{COMPLETIONS_PATH}"

    def counters(self) -> dict:
        with self._lock:
            return {"requests": self.request_count, "in_flight_max": self.in_flight_max}

    def fail_next(self, times: int, status: int = 500, body: str | None = None) -> None:
        with self._lock:
            self._fail_times = times
            self._fail_status = status
            self._fail_body = body

    def start(self) -> "StubServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "StubServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def load_fixture_responses(path: str | Path) -> dict[str, str]:
    """Read a fixture map (prompt digest -> response text) from JSON."""
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
