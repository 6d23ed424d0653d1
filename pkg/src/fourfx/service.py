"""Loopback JSON service backing the interactive Arbiter console.

All arithmetic happens here; the client renders server truth.  Sessions are
keyed by an ``X-Session`` header (or ``session`` query parameter) and every
mutation on a session is serialized under its lock.  Undo restores exact
prior snapshots, so replaying history is bit-identical.
"""

from __future__ import annotations

import json
import logging
import math
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import semigroup, synthesis
from .market import (
    Chain,
    GeneratorBasis,
    RateEnsemble,
    active_flags,
    apply_arbitrage,
    discrepancies,
    ensemble_to_dict,
    is_balanced,
    make_perturbed,
)

log = logging.getLogger("fourfx.service")

HISTORY_CAP = 10**5


class ApiError(Exception):
    def __init__(self, message: str, status: int = 400):
        super().__init__(message)
        self.status = status


@dataclass
class Playback:
    chain: tuple[int, ...]
    cursor: int = 0


@dataclass
class Session:
    ensemble: RateEnsemble
    history: list[tuple[int, RateEnsemble]] = field(default_factory=list)
    target: tuple[int, int, int] | None = None
    playback: Playback | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


def default_ensemble() -> RateEnsemble:
    return make_perturbed(GeneratorBasis.single(2.0), 1)


class ConsoleService:
    """Session store plus the endpoint logic, transport-agnostic."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    def session(self, sid: str) -> Session:
        with self._registry_lock:
            if sid not in self._sessions:
                self._sessions[sid] = Session(ensemble=default_ensemble())
            return self._sessions[sid]

    # -- payload helpers ----------------------------------------------------

    def state_payload(self, s: Session) -> dict:
        r = s.ensemble
        d = discrepancies(r)
        vertex = None
        if r.mode == "lattice" and len(r.basis.values) == 1:
            vertex = semigroup.vertex_label_single(tuple(row[0] for row in d.coeffs))
        doc = {
            "log_rates": list(r.log_rates),
            "discrepancies": list(d.values),
            "active": list(active_flags(r)),
            "balanced": is_balanced(r),
            "history_len": len(s.history),
            "rates": list(r.rates),
            "mode": r.mode,
            "vertex": vertex,
            "exponents": [list(row) for row in r.coeffs] if r.coeffs else None,
            "ensemble": ensemble_to_dict(r),
            "target": list(s.target) if s.target else None,
            "playback": (
                {"length": len(s.playback.chain), "cursor": s.playback.cursor,
                 "chain": list(s.playback.chain)}
                if s.playback else None
            ),
        }
        return doc

    # -- endpoints ------------------------------------------------------------

    def get_state(self, s: Session) -> dict:
        with s.lock:
            return self.state_payload(s)

    def reset(self, s: Session, body: dict) -> dict:
        with s.lock:
            if "log_rates" in body:
                rates = body["log_rates"]
                if not isinstance(rates, list) or len(rates) != 6:
                    raise ApiError("log_rates must hold six numbers")
                s.ensemble = RateEnsemble.from_log_rates([float(x) for x in rates])
            else:
                base = tuple(float(x) for x in body.get("base", (0.0, 0.0, 0.0)))
                alpha = float(body.get("alpha", 2.0))
                perturb = int(body.get("perturb", 1))
                if len(base) != 3:
                    raise ApiError("base must hold three numbers")
                try:
                    basis = GeneratorBasis.single(alpha, base=base)
                    s.ensemble = make_perturbed(basis, perturb)
                except ValueError as exc:
                    raise ApiError(str(exc)) from exc
            s.history.clear()
            s.playback = None
            s.target = None
            return self.state_payload(s)

    def apply(self, s: Session, body: dict) -> dict:
        try:
            k = int(body["arbitrage"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError("body needs an integer 'arbitrage'") from exc
        if not 1 <= k <= 24:
            raise ApiError("arbitrage index outside 1..24")
        with s.lock:
            prior = s.ensemble
            after = apply_arbitrage(prior, k)
            applied = after != prior
            if applied:
                if len(s.history) >= HISTORY_CAP:
                    raise ApiError("history limit reached", status=409)
                s.history.append((k, prior))
                s.ensemble = after
            doc = self.state_payload(s)
            doc["applied"] = applied
            doc["arbitrage"] = k
            return doc

    def undo(self, s: Session) -> dict:
        with s.lock:
            undone = False
            if s.history:
                _, prior = s.history.pop()
                s.ensemble = prior
                undone = True
                if s.playback and s.playback.cursor > 0:
                    s.playback.cursor -= 1
            doc = self.state_payload(s)
            doc["undone"] = undone
            return doc

    def synthesize(self, s: Session, body: dict) -> dict:
        try:
            n = (int(body["n1"]), int(body["n2"]), int(body["n3"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError("body needs integers n1, n2, n3") from exc
        method = body.get("method", "bfs")
        if method not in ("printed", "bfs"):
            raise ApiError("method must be 'printed' or 'bfs'")
        with s.lock:
            r = s.ensemble
            if r.mode != "lattice" or len(r.basis.values) != 1:
                raise ApiError("synthesis needs a one-step lattice session state")
            s.target = n
            start = None
            unit_rows = [tuple(row) for row in r.coeffs]
            for which in range(1, 7):
                probe = [(0,)] * 6
                probe[which - 1] = (1,)
                if unit_rows == probe:
                    start = which
            try:
                if method == "printed":
                    if start is None:
                        raise ApiError(
                            "closed-form synthesis is defined for the six canonical starts"
                        )
                    result = (
                        synthesis.basic_chain(n, r.basis) if start == 1
                        else synthesis.variant_chain(start, n, r.basis)
                    )
                    chain, deviation = result.chain, result.deviation
                    bound = result.bound
                    used = result.method
                else:
                    bound = synthesis.length_bound(start, n) if start else 3 * sum(map(abs, n)) + 24
                    chain = synthesis.bfs_chain(r, n, max_len=bound + 8)
                    deviation = False
                    used = "bfs"
            except (synthesis.NotFound, synthesis.WrongCaseError) as exc:
                raise ApiError(str(exc), status=422) from exc
            return {
                "chain": list(chain.items),
                "length": len(chain.items),
                "bound": bound,
                "method": used,
                "deviation": deviation,
            }

    def graph(self, s: Session, query: dict) -> dict:
        with s.lock:
            r = s.ensemble
            default_a = (
                r.basis.values[0]
                if r.mode == "lattice" else math.log(2.0)
            )
        a = float(query.get("a", [default_a])[0])
        b = float(query.get("b", [0.0])[0])
        try:
            orbit = (
                semigroup.single_step_orbit(a) if b == 0.0
                else semigroup.orbit_polyhedron(a, b)
            )
        except ValueError as exc:
            raise ApiError(str(exc)) from exc
        return orbit_payload(orbit)

    def playback(self, s: Session, body: dict) -> dict:
        with s.lock:
            if "chain" in body:
                items = body["chain"]
                if not isinstance(items, list) or any(
                    not isinstance(k, int) or not 1 <= k <= 24 for k in items
                ):
                    raise ApiError("chain must be a list of arbitrage indices 1..24")
                s.playback = Playback(chain=tuple(items), cursor=0)
            if s.playback is None:
                raise ApiError("no chain loaded")
            cursor = body.get("cursor", s.playback.cursor)
            if not isinstance(cursor, int) or not 0 <= cursor <= len(s.playback.chain):
                raise ApiError("cursor outside the loaded chain")
            while s.playback.cursor < cursor:
                k = s.playback.chain[s.playback.cursor]
                prior = s.ensemble
                s.ensemble = apply_arbitrage(prior, k)
                s.history.append((k, prior))
                s.playback.cursor += 1
            while s.playback.cursor > cursor:
                if not s.history:
                    raise ApiError("history exhausted during rewind", status=409)
                _, prior = s.history.pop()
                s.ensemble = prior
                s.playback.cursor -= 1
            doc = self.state_payload(s)
            doc["cursor"] = s.playback.cursor
            return doc


def orbit_payload(orbit: semigroup.DiscrepancyOrbit) -> dict:
    return {
        "a": orbit.a,
        "b": orbit.b,
        "family": orbit.family,
        "vertices": [
            {
                "id": v.vid,
                "name": v.name,
                "values": list(v.values),
                "pairs": [list(p) for p in v.pairs],
                "aliases": list(v.aliases),
            }
            for v in orbit.vertices
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "strong": e.strong,
                "arbitrage": e.arbitrage,
            }
            for e in orbit.edges
        ],
    }


class _Handler(BaseHTTPRequestHandler):
    service: ConsoleService
    static_root: Path | None = None

    def log_message(self, fmt: str, *args) -> None:
        log.debug("%s " + fmt, self.address_string(), *args)

    # -- plumbing -------------------------------------------------------------

    def _session_id(self, query: dict) -> str:
        return self.headers.get("X-Session") or query.get("session", ["default"])[0]

    def _send_json(self, doc: dict, status: int = 200) -> None:
        payload = json.dumps(doc).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type, X-Session")
        self.end_headers()
        self.wfile.write(payload)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            doc = json.loads(self.rfile.read(length))
        except json.JSONDecodeError as exc:
            raise ApiError(f"invalid JSON body: {exc}") from exc
        if not isinstance(doc, dict):
            raise ApiError("body must be a JSON object")
        return doc

    def _dispatch(self, method: str) -> None:
        url = urlparse(self.path)
        query = parse_qs(url.query)
        try:
            if not url.path.startswith("/api/"):
                if method == "GET" and self._serve_static(url.path):
                    return
                raise ApiError("not found", status=404)
            session = self.service.session(self._session_id(query))
            route = (method, url.path)
            if route == ("GET", "/api/state"):
                self._send_json(self.service.get_state(session))
            elif route == ("GET", "/api/graph"):
                self._send_json(self.service.graph(session, query))
            elif route == ("POST", "/api/reset"):
                self._send_json(self.service.reset(session, self._read_body()))
            elif route == ("POST", "/api/apply"):
                self._send_json(self.service.apply(session, self._read_body()))
            elif route == ("POST", "/api/undo"):
                self._send_json(self.service.undo(session))
            elif route == ("POST", "/api/synthesize"):
                self._send_json(self.service.synthesize(session, self._read_body()))
            elif route == ("POST", "/api/playback"):
                self._send_json(self.service.playback(session, self._read_body()))
            else:
                raise ApiError("not found", status=404)
        except ApiError as exc:
            self._send_json({"error": str(exc)}, status=exc.status)
        except Exception as exc:  # pragma: no cover - defensive
            log.exception("internal error")
            self._send_json({"error": f"internal: {exc}"}, status=500)

    def _serve_static(self, path: str) -> bool:
        if self.static_root is None:
            return False
        rel = path.lstrip("/") or "index.html"
        target = (self.static_root / rel).resolve()
        if not str(target).startswith(str(self.static_root.resolve())) or not target.is_file():
            return False
        ctype = {
            ".html": "text/html", ".js": "text/javascript", ".mjs": "text/javascript",
            ".css": "text/css", ".json": "application/json", ".svg": "image/svg+xml",
        }.get(target.suffix, "application/octet-stream")
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)
        return True

    def do_GET(self) -> None:  # noqa: N802
        self._dispatch("GET")

    def do_POST(self) -> None:  # noqa: N802
        self._dispatch("POST")

    def do_OPTIONS(self) -> None:  # noqa: N802
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type, X-Session")
        self.end_headers()


def make_server(port: int, static_root: str | None = None) -> ThreadingHTTPServer:
    """Bind the console service to loopback; raises OSError if the port is busy."""
    service = ConsoleService()
    handler = type(
        "BoundHandler",
        (_Handler,),
        {
            "service": service,
            "static_root": Path(static_root) if static_root else None,
        },
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_forever(port: int, static_root: str | None = None) -> None:
    server = make_server(port, static_root)
    log.info("serving on http://127.0.0.1:%d", server.server_address[1])
    try:
        server.serve_forever()
    finally:
        server.server_close()
