"""The ``GET /restpark`` endpoint.

:func:`handle_request` is a pure function from (store, request) to a
response; :class:`RestparkServer` wraps it in a threaded stdlib HTTP server.
Values are plain percent-decoded (RFC 3986), so ``+`` is a literal plus sign
and a ``#`` inside an IRI has to be sent as ``%23``.
"""

from __future__ import annotations

import contextlib
import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import quote, unquote

from .jsonld import MEDIA_TYPE, encode_graph
from .model import IRI, LITERAL, Term, TermError, TriplePattern, blank, format_term, iri, parse_term
from .store import DEFAULT_PAGE_SIZE, MAX_PAGE_SIZE, PageRequest, TripleStore

log = logging.getLogger(__name__)

PATH = "/restpark"
POSITIONS = ("subject", "predicate", "object")
PARAMS = POSITIONS + ("page", "page_size")


class QueryError(ValueError):
    """A rejected query string; ``param`` names the offending parameter."""

    def __init__(self, param: str | None, reason: str):
        super().__init__(f"{param}: {reason}" if param else reason)
        self.param = param
        self.reason = reason


@dataclass(frozen=True)
class ParsedQuery:
    pattern: TriplePattern
    page: PageRequest


@dataclass
class HttpResponseSpec:
    status: int
    headers: dict[str, str] = field(default_factory=dict)
    body: bytes = b""


def parse_position(name: str, value: str) -> Term:
    """Interpret a decoded parameter value for ``subject``, ``predicate`` or ``object``.

    ``"..."`` (objects only) is an N-Triples literal, ``_:x`` a blank node,
    anything else an IRI written without angle brackets.
    """
    try:
        if name == "object" and value.startswith('"'):
            return parse_term(value, {LITERAL})
        if name != "predicate" and value.startswith("_:"):
            return blank(value[2:])
        return iri(value)
    except TermError as exc:
        raise QueryError(name, str(exc)) from None


def render_position(term: Term) -> str:
    """Inverse of :func:`parse_position`: the unencoded parameter text for a term."""
    if term.kind == IRI:
        return term.value
    return format_term(term)


def _parse_int(name: str, value: str, upper: int | None = None) -> int:
    if not value.isascii() or not value.isdigit():
        raise QueryError(name, f"not a positive integer: {value!r}")
    n = int(value)
    if n < 1 or (upper is not None and n > upper):
        bound = f"1..{upper}" if upper else ">= 1"
        raise QueryError(name, f"out of range ({bound}): {n}")
    return n


def parse_query_params(raw_query: str) -> ParsedQuery:
    seen: dict[str, str] = {}
    for piece in raw_query.split("&") if raw_query else ():
        if not piece:
            continue
        raw_name, _, raw_value = piece.partition("=")
        try:
            name = unquote(raw_name, errors="strict")
            value = unquote(raw_value, errors="strict")
        except UnicodeDecodeError:
            raise QueryError(raw_name, "percent-encoding is not valid UTF-8") from None
        if name not in PARAMS:
            raise QueryError(name, "unknown parameter")
        if name in seen:
            raise QueryError(name, "repeated parameter")
        seen[name] = value

    terms = {name: parse_position(name, seen[name]) for name in POSITIONS if name in seen}
    page = _parse_int("page", seen["page"]) if "page" in seen else 1
    size = _parse_int("page_size", seen["page_size"], MAX_PAGE_SIZE) if "page_size" in seen else DEFAULT_PAGE_SIZE
    return ParsedQuery(TriplePattern(**terms), PageRequest(page, size))


def build_query(pattern: TriplePattern, page: PageRequest = PageRequest()) -> str:
    """Canonical query string: positions in s/p/o order, page parameters only when non-default."""
    parts = []
    for name in POSITIONS:
        term = getattr(pattern, name)
        if term is not None:
            parts.append(f"{name}={quote(render_position(term), safe='')}")
    if page.page != 1:
        parts.append(f"page={page.page}")
    if page.page_size != DEFAULT_PAGE_SIZE:
        parts.append(f"page_size={page.page_size}")
    return "&".join(parts)


def _text(status: int, reason: str, **extra: str) -> HttpResponseSpec:
    headers = {"Content-Type": "text/plain; charset=utf-8", **extra}
    return HttpResponseSpec(status, headers, (reason + "\n").encode("utf-8"))


def handle_request(
    store: TripleStore, method: str, path: str, raw_query: str, mount_prefix: str = ""
) -> HttpResponseSpec:
    endpoint = mount_prefix + PATH
    if path != endpoint:
        return _text(404, f"not found: {path}")
    if method != "GET":
        return _text(405, f"method {method} not allowed", Allow="GET")
    try:
        query = parse_query_params(raw_query)
    except QueryError as exc:
        return _text(400, str(exc))

    result = store.page(query.pattern, query.page)
    headers = {
        "Content-Type": MEDIA_TYPE,
        "X-Total-Count": str(result.total_count),
        "Access-Control-Allow-Origin": "*",
    }
    links = []
    if result.has_next:
        nxt = PageRequest(result.page + 1, result.page_size)
        links.append(f'<{_href(endpoint, query.pattern, nxt)}>; rel="next"')
    if result.page > 1:
        prev = PageRequest(result.page - 1, result.page_size)
        links.append(f'<{_href(endpoint, query.pattern, prev)}>; rel="prev"')
    if links:
        headers["Link"] = ", ".join(links)
    return HttpResponseSpec(200, headers, encode_graph(result.triples).encode("utf-8"))


def _href(endpoint: str, pattern: TriplePattern, page: PageRequest) -> str:
    qs = build_query(pattern, page)
    return f"{endpoint}?{qs}" if qs else endpoint


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: "RestparkServer"

    def _dispatch(self) -> None:
        path, _, raw_query = self.path.partition("?")
        raw_query = raw_query.partition("#")[0]
        resp = handle_request(self.server.store, self.command, path, raw_query, self.server.mount_prefix)
        # Drain any request body so keep-alive framing stays intact.
        length = self.headers.get("Content-Length")
        if length and length.isdigit():
            self.rfile.read(int(length))
        self.send_response(resp.status)
        for name, value in resp.headers.items():
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(resp.body)))
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(resp.body)

    def __getattr__(self, name: str):
        # any do_<METHOD> lookup lands here so unsupported methods get 405, not 501
        if name.startswith("do_"):
            return self._dispatch
        raise AttributeError(name)

    def log_message(self, format: str, *args) -> None:
        log.debug("%s - %s", self.address_string(), format % args)


class RestparkServer(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128

    def __init__(self, store: TripleStore, address: tuple[str, int] = ("127.0.0.1", 8080), mount_prefix: str = ""):
        self.store = store
        self.mount_prefix = normalize_mount(mount_prefix)
        super().__init__(address, _Handler)

    @property
    def base_url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}{self.mount_prefix}"


def normalize_mount(prefix: str) -> str:
    prefix = prefix.strip("/")
    return f"/{prefix}" if prefix else ""


@contextlib.contextmanager
def serve_in_background(store: TripleStore, host: str = "127.0.0.1", port: int = 0, mount_prefix: str = ""):
    """Run a server on a daemon thread for the duration of the block; yields the server."""
    server = RestparkServer(store, (host, port), mount_prefix)
    thread = threading.Thread(target=server.serve_forever, args=(0.05,), name="restpark-server", daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        server.server_close()
        thread.join()
