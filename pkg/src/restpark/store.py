"""Immutable triple store with SPO, POS and OSP sorted indexes."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator

from .model import Triple, TriplePattern, term_key, triple_key

DEFAULT_PAGE_SIZE = 100
MAX_PAGE_SIZE = 10000

# Greater than every term key (kind ranks are 0..2).
_TOP = (3,)


@dataclass(frozen=True)
class PageRequest:
    page: int = 1
    page_size: int = DEFAULT_PAGE_SIZE

    def __post_init__(self):
        if isinstance(self.page, bool) or not isinstance(self.page, int) or self.page < 1:
            raise ValueError(f"page must be a positive integer, got {self.page!r}")
        if (
            isinstance(self.page_size, bool)
            or not isinstance(self.page_size, int)
            or not 1 <= self.page_size <= MAX_PAGE_SIZE
        ):
            raise ValueError(f"page_size must be in 1..{MAX_PAGE_SIZE}, got {self.page_size!r}")

    @property
    def offset(self) -> int:
        return (self.page - 1) * self.page_size


@dataclass(frozen=True)
class PageResult:
    triples: tuple[Triple, ...]
    total_count: int
    page: int
    page_size: int
    has_next: bool


class _Index:
    """One sorted permutation of the triple set; ``order`` maps key slots to s/p/o."""

    __slots__ = ("order", "keys", "triples")

    def __init__(self, order: tuple[int, int, int], rows: list[tuple[tuple, Triple]]):
        self.order = order
        rows = sorted(rows, key=lambda r: tuple(r[0][i] for i in order))
        self.keys = [tuple(k[i] for i in order) for k, _ in rows]
        self.triples = [t for _, t in rows]

    def span(self, prefix: tuple) -> tuple[int, int]:
        if not prefix:
            return 0, len(self.keys)
        lo = bisect_left(self.keys, prefix)
        hi = bisect_right(self.keys, prefix + (_TOP,), lo)
        return lo, hi


class TripleStore:
    """A deduplicated, read-only set of triples.

    Every pattern shape resolves to one contiguous range of one index:

    ===========  =====  ==========
    bound        index  prefix
    ===========  =====  ==========
    s, s+p, spo  SPO    s[, p[, o]]
    p, p+o       POS    p[, o]
    o            OSP    o
    s+o          OSP    o, s
    none         SPO    (all)
    ===========  =====  ==========
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        rows = {}
        for t in triples:
            if t not in rows:
                rows[t] = triple_key(t)
        pairs = [(k, t) for t, k in rows.items()]
        self.spo = _Index((0, 1, 2), pairs)
        self.pos = _Index((1, 2, 0), pairs)
        self.osp = _Index((2, 0, 1), pairs)

    def __len__(self) -> int:
        return len(self.spo.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.spo.triples)

    def __contains__(self, triple: Triple) -> bool:
        return self.count(TriplePattern(*triple)) == 1

    def __eq__(self, other):
        if not isinstance(other, TripleStore):
            return NotImplemented
        return self.spo.triples == other.spo.triples

    def __repr__(self) -> str:
        return f"TripleStore({len(self)} triples)"

    def _locate(self, pattern: TriplePattern) -> tuple[_Index, int, int, bool]:
        """Return (index, lo, hi, needs_resort) for the range holding the matches."""
        s, p, o = (None if t is None else term_key(t) for t in (pattern.subject, pattern.predicate, pattern.object))
        if s is not None:
            if p is not None:
                prefix = (s, p) if o is None else (s, p, o)
                return (self.spo, *self.spo.span(prefix), False)
            if o is not None:
                return (self.osp, *self.osp.span((o, s)), False)
            return (self.spo, *self.spo.span((s,)), False)
        if p is not None:
            prefix = (p,) if o is None else (p, o)
            return (self.pos, *self.pos.span(prefix), True)
        if o is not None:
            return (self.osp, *self.osp.span((o,)), False)
        return (self.spo, 0, len(self), False)

    def match(self, pattern: TriplePattern) -> list[Triple]:
        index, lo, hi, resort = self._locate(pattern)
        found = index.triples[lo:hi]
        if resort:
            # POS ranges are ordered by (o, s); results are always reported in SPO order
            found.sort(key=triple_key)
        return found

    def count(self, pattern: TriplePattern) -> int:
        _, lo, hi, _ = self._locate(pattern)
        return hi - lo

    def page(self, pattern: TriplePattern, req: PageRequest = PageRequest()) -> PageResult:
        index, lo, hi, resort = self._locate(pattern)
        total = hi - lo
        start, stop = req.offset, req.offset + req.page_size
        if resort:
            chunk = self.match(pattern)[start:stop]
        else:
            chunk = index.triples[lo + min(start, total):lo + min(stop, total)]
        return PageResult(
            triples=tuple(chunk),
            total_count=total,
            page=req.page,
            page_size=req.page_size,
            has_next=req.page * req.page_size < total,
        )

    def index_triples(self, name: str) -> list[Triple]:
        """Enumerate one index ("spo", "pos" or "osp") in its own key order."""
        return list(getattr(self, name).triples)


def build_store(triples: Iterable[Triple]) -> TripleStore:
    return TripleStore(triples)


def match_pattern(store: TripleStore, pattern: TriplePattern) -> list[Triple]:
    return store.match(pattern)


def match_page(store: TripleStore, pattern: TriplePattern, req: PageRequest) -> PageResult:
    return store.page(pattern, req)


def count_pattern(store: TripleStore, pattern: TriplePattern) -> int:
    return store.count(pattern)
