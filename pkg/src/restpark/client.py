"""Client for Restpark endpoints."""

from __future__ import annotations

import re
import socket
import urllib.error
import urllib.request
from dataclasses import dataclass
from urllib.parse import urljoin, urlsplit

from .jsonld import MEDIA_TYPE, JsonLdError, decode_graph
from .model import Triple, TriplePattern
from .service import PATH, build_query
from .store import PageRequest, PageResult

DEFAULT_TIMEOUT = 30.0
DEFAULT_MAX_PAGES = 10000

_LINK = re.compile(r'<([^>]*)>\s*((?:;\s*[^;,]+)*)')
_REL = re.compile(r'rel\s*=\s*(?:"([^"]*)"|([^\s;,]+))')


class ClientError(Exception):
    pass


class TransportError(ClientError):
    pass


class HttpStatusError(ClientError):
    def __init__(self, status: int, reason: str, url: str = ""):
        super().__init__(f"HTTP {status} from {url}: {reason}".strip())
        self.status = status
        self.reason = reason
        self.url = url


class ProtocolError(ClientError):
    """The endpoint answered 200 but the response could not be understood."""


class MaxPagesExceeded(ClientError):
    pass


@dataclass(frozen=True)
class Endpoint:
    base_url: str

    def __post_init__(self):
        parts = urlsplit(self.base_url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ValueError(f"endpoint needs an http(s) URL with a host: {self.base_url!r}")
        if parts.query or parts.fragment or "?" in self.base_url:
            raise ValueError(f"endpoint base URL must not have a query: {self.base_url!r}")
        if self.base_url.endswith("/"):
            raise ValueError(f"endpoint base URL must not end with '/': {self.base_url!r}")

    @property
    def url(self) -> str:
        return self.base_url + PATH


def build_url(endpoint: Endpoint, pattern: TriplePattern, page: PageRequest = PageRequest()) -> str:
    qs = build_query(pattern, page)
    return f"{endpoint.url}?{qs}" if qs else endpoint.url


def parse_link_header(value: str | None) -> dict[str, str]:
    """Map each ``rel`` value of an RFC 8288 Link header to its target."""
    links: dict[str, str] = {}
    for m in _LINK.finditer(value or ""):
        for rel in _REL.finditer(m.group(2)):
            for name in (rel.group(1) or rel.group(2)).split():
                links.setdefault(name.lower(), m.group(1))
    return links


class RestparkClient:
    """Stateless apart from configuration; safe to share between threads."""

    def __init__(self, timeout: float = DEFAULT_TIMEOUT, max_pages: int = DEFAULT_MAX_PAGES):
        self.timeout = timeout
        self.max_pages = max_pages

    def fetch(self, url: str) -> tuple[int, dict[str, str], bytes]:
        req = urllib.request.Request(url, headers={"Accept": MEDIA_TYPE}, method="GET")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.status, dict(resp.headers.items()), resp.read()
        except urllib.error.HTTPError as exc:
            body = exc.read().decode("utf-8", "replace").strip()
            raise HttpStatusError(exc.code, body or exc.reason, url) from None
        except (urllib.error.URLError, OSError, socket.timeout) as exc:
            reason = getattr(exc, "reason", exc)
            raise TransportError(f"{url}: {reason}") from exc

    def _page_at(self, url: str, req: PageRequest) -> tuple[PageResult, str | None]:
        status, headers, body = self.fetch(url)
        if status != 200:
            raise HttpStatusError(status, body.decode("utf-8", "replace"), url)
        try:
            triples = decode_graph(body)
        except JsonLdError as exc:
            raise ProtocolError(f"{url}: {exc}") from None
        headers = {k.lower(): v for k, v in headers.items()}
        total_text = headers.get("x-total-count")
        try:
            total = int(total_text) if total_text is not None else None
        except ValueError:
            raise ProtocolError(f"{url}: bad X-Total-Count {total_text!r}") from None
        links = parse_link_header(headers.get("link"))
        next_url = urljoin(url, links["next"]) if "next" in links else None
        if "link" in headers:
            has_next = next_url is not None
        elif total is not None:
            has_next = req.page * req.page_size < total
        else:
            has_next = False
        if total is None:
            total = req.offset + len(triples)
        result = PageResult(tuple(triples), total, req.page, req.page_size, has_next)
        return result, next_url

    def query_page(self, endpoint: Endpoint, pattern: TriplePattern, page: PageRequest = PageRequest()) -> PageResult:
        return self._page_at(build_url(endpoint, pattern, page), page)[0]

    def query_all(
        self, endpoint: Endpoint, pattern: TriplePattern, page_size: int | None = None
    ) -> list[Triple]:
        req = PageRequest(1, page_size) if page_size else PageRequest()
        url = build_url(endpoint, pattern, req)
        triples: list[Triple] = []
        for _ in range(self.max_pages):
            result, next_url = self._page_at(url, req)
            triples.extend(result.triples)
            if not result.has_next:
                return triples
            req = PageRequest(req.page + 1, req.page_size)
            url = next_url or build_url(endpoint, pattern, req)
        raise MaxPagesExceeded(f"gave up after {self.max_pages} pages from {endpoint.url}")


_default = RestparkClient()


def query_page(endpoint: Endpoint, pattern: TriplePattern, page: PageRequest = PageRequest()) -> PageResult:
    return _default.query_page(endpoint, pattern, page)


def query_all(endpoint: Endpoint, pattern: TriplePattern) -> list[Triple]:
    return _default.query_all(endpoint, pattern)
