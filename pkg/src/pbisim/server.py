"""JSON-over-HTTP session endpoints for the browser explorer.

    GET  /models                     -> available models and their states
    POST /session                    -> create a session, returns full state
    GET  /session/{id}               -> current position, legal moves, history
    POST /session/{id}/move          -> play a human move, engine replies

Served with the standard library's threading HTTP server; each session
serializes its own moves, the store handles concurrent handlers.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import formats
from .core import Plts
from .errors import InvalidInputError, ParseError, PbisimError
from .machines import config_str
from .oracle import ExplicitSystem, PpdaSystem
from .session import Session, SessionStore


class ModelRegistry:
    """Loaded models by name; explicit systems expose their state names,
    machine-backed sessions name states by configuration strings."""

    def __init__(self):
        self.models = {}

    def load(self, path):
        path = Path(path)
        kind, model = formats.load_model(path)
        name = path.stem
        self.models[name] = (kind, model)
        return name

    def add(self, name, kind, model):
        self.models[name] = (kind, model)

    def session_parts(self, name, s1_text, s2_text):
        if name not in self.models:
            raise InvalidInputError(f"unknown model {name!r}")
        kind, model = self.models[name]
        if kind == "plts":
            system = ExplicitSystem(model)
            s1 = model.state_id(s1_text)
            s2 = model.state_id(s2_text)
            name_of = lambda s: model.state_names[s]
        else:
            system = PpdaSystem(model)
            s1 = formats.parse_config(s1_text, model)
            s2 = formats.parse_config(s2_text, model)
            name_of = config_str
        return system, s1, s2, name_of

    def describe(self):
        out = []
        for name, (kind, model) in sorted(self.models.items()):
            entry = {"name": name, "kind": kind}
            if kind == "plts":
                entry["states"] = list(model.state_names)
                entry["actions"] = list(model.actions)
            else:
                entry["controls"] = list(model.controls)
                entry["stack"] = list(model.stack_alphabet)
                entry["actions"] = list(model.actions)
            out.append(entry)
        return out


def make_handler(registry, store, static_dir=None):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            pass

        def _send(self, code, payload):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _send_file(self, path, content_type):
            body = path.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _body(self):
            length = int(self.headers.get("Content-Length", "0"))
            if length == 0:
                return {}
            return json.loads(self.rfile.read(length).decode("utf-8"))

        def do_OPTIONS(self):
            self._send(200, {})

        def do_GET(self):
            try:
                if self.path == "/models":
                    self._send(200, {"models": registry.describe()})
                    return
                if self.path.startswith("/session/"):
                    session_id = self.path.split("/")[2]
                    session = store.get(session_id)
                    self._send(200, session.describe())
                    return
                if static_dir is not None:
                    rel = "index.html" if self.path in ("/", "") else self.path.lstrip("/")
                    target = (static_dir / rel).resolve()
                    if target.is_file() and static_dir.resolve() in target.parents:
                        types = {".html": "text/html", ".js": "text/javascript", ".css": "text/css"}
                        self._send_file(target, types.get(target.suffix, "application/octet-stream"))
                        return
                self._send(404, {"error": "not found"})
            except KeyError:
                self._send(404, {"error": "unknown session"})
            except PbisimError as exc:
                self._send(400, {"error": str(exc)})

        def do_POST(self):
            try:
                if self.path == "/session":
                    body = self._body()
                    system, s1, s2, name_of = registry.session_parts(
                        body["model"], body["s1"], body["s2"]
                    )
                    session = Session(
                        model_name=body["model"],
                        system=system,
                        s1=s1,
                        s2=s2,
                        human_side=body.get("human_side", "defender"),
                        horizon=int(body.get("horizon", 3)),
                        name_of=name_of,
                    )
                    store.add(session)
                    self._send(201, session.describe())
                    return
                if self.path.startswith("/session/") and self.path.endswith("/move"):
                    session_id = self.path.split("/")[2]
                    session = store.get(session_id)
                    session.play(self._body())
                    self._send(200, session.describe())
                    return
                self._send(404, {"error": "not found"})
            except KeyError as exc:
                self._send(
                    404 if self.path.startswith("/session/") else 400,
                    {"error": f"missing or unknown: {exc}"},
                )
            except (InvalidInputError, ParseError) as exc:
                self._send(400, {"error": str(exc)})
            except PbisimError as exc:
                self._send(400, {"error": str(exc)})

    return Handler


def _banner(message):
    print(message, flush=True)


def serve(registry, port, host="127.0.0.1", static_dir=None, banner=_banner):
    store = SessionStore()
    handler = make_handler(registry, store, static_dir=static_dir)
    httpd = ThreadingHTTPServer((host, port), handler)
    actual_port = httpd.server_address[1]
    banner(f"serving on http://{host}:{actual_port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()


def start_background(registry, host="127.0.0.1", port=0, static_dir=None):
    """Start a server on an ephemeral port for tests; returns (httpd, port, thread)."""
    store = SessionStore()
    handler = make_handler(registry, store, static_dir=static_dir)
    httpd = ThreadingHTTPServer((host, port), handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    return httpd, httpd.server_address[1], thread
