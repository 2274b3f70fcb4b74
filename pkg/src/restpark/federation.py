"""Multi-endpoint query plans built from fetch, extend and filter_host steps.

Plan documents are JSON::

    {
      "endpoints": {"dbpedia": "http://127.0.0.1:8082"},
      "steps": [
        {"kind": "fetch", "endpoint": "dbpedia",
         "pattern": {"predicate": "<http://purl.org/dc/terms/subject>", "object": "<...>", "subject": "?fellow"}},
        {"kind": "extend", "endpoint": "dbpedia",
         "pattern": {"subject": "?fellow", "predicate": "<http://www.w3.org/2002/07/owl#sameAs>", "object": "?ext"}},
        {"kind": "filter_host", "variable": "ext", "authority": "www4.wiwiss.fu-berlin.de"}
      ],
      "output": ["fellow", "ext"]
    }

Pattern positions hold an N-Triples term, a ``?variable``, or are omitted
(wildcard, result not kept). ``endpoint`` is a key of ``endpoints`` or a
literal base URL.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union
from urllib.parse import urlsplit

from .client import ClientError, Endpoint, RestparkClient
from .model import IRI, Term, TermError, Triple, TriplePattern, parse_term, term_key

FETCH = "fetch"
EXTEND = "extend"
FILTER_HOST = "filter_host"
STEP_KINDS = (FETCH, EXTEND, FILTER_HOST)
POSITIONS = ("subject", "predicate", "object")

Slot = Union[Term, str, None]  # bound term, variable name, or wildcard


class PlanError(Exception):
    """Invalid plan or failed execution; ``step`` is the 0-based step index when known."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(f"step {step}: {message}" if step is not None else message)
        self.step = step


@dataclass(frozen=True)
class PatternTemplate:
    subject: Slot = None
    predicate: Slot = None
    object: Slot = None

    def slots(self) -> tuple[Slot, Slot, Slot]:
        return (self.subject, self.predicate, self.object)

    def variables(self) -> list[str]:
        return [s for s in self.slots() if isinstance(s, str)]

    def instantiate(self, row: Mapping[str, Term]) -> TriplePattern:
        """Substitute bound variables; unbound variables become wildcards."""
        terms = []
        for slot in self.slots():
            if isinstance(slot, str):
                slot = row.get(slot)
            terms.append(slot)
        return TriplePattern(*terms)

    def bind(self, triple: Triple, row: Mapping[str, Term]) -> Optional[dict[str, Term]]:
        """Extend ``row`` with this template's variables read off ``triple``; None on conflict."""
        out = dict(row)
        for slot, term in zip(self.slots(), triple):
            if isinstance(slot, str):
                if out.setdefault(slot, term) != term:
                    return None
        return out


@dataclass(frozen=True)
class PlanStep:
    kind: str
    endpoint: Optional[Endpoint] = None
    pattern: Optional[PatternTemplate] = None
    variable: Optional[str] = None
    authority: Optional[str] = None


@dataclass(frozen=True)
class QueryPlan:
    steps: tuple[PlanStep, ...]
    output: tuple[str, ...]

    def validate(self) -> None:
        bound: set[str] = set()
        if not self.steps:
            raise PlanError("plan has no steps")
        for i, step in enumerate(self.steps):
            if step.kind in (FETCH, EXTEND):
                if step.endpoint is None or step.pattern is None:
                    raise PlanError(f"{step.kind} needs an endpoint and a pattern", i)
                bound.update(step.pattern.variables())
            elif step.kind == FILTER_HOST:
                if not step.variable or not step.authority:
                    raise PlanError("filter_host needs a variable and an authority", i)
                if step.variable not in bound:
                    raise PlanError(f"variable ?{step.variable} is not bound by an earlier step", i)
            else:
                raise PlanError(f"unknown step kind {step.kind!r}", i)
        missing = [v for v in self.output if v not in bound]
        if missing:
            raise PlanError(f"output variables never bound: {', '.join(missing)}")


@dataclass
class BindingTable:
    columns: list[str]
    rows: list[dict[str, Term]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def tuples(self) -> list[tuple[Term, ...]]:
        return [tuple(row[c] for c in self.columns) for row in self.rows]


def _row_key(row: Mapping[str, Term], columns: Sequence[str]) -> tuple:
    return tuple(term_key(row[c]) for c in columns)


def project_terms(table: BindingTable, variable: str) -> list[Term]:
    if variable not in table.columns:
        raise KeyError(f"unknown variable {variable!r}")
    return sorted({row[variable] for row in table.rows}, key=term_key)


def _authority_matches(term: Term, authority: str) -> bool:
    if term.kind != IRI:
        return False
    netloc = urlsplit(term.value).netloc.rpartition("@")[2]
    host, _, port = netloc.partition(":") if not netloc.startswith("[") else (netloc, "", "")
    want_host, _, want_port = authority.partition(":") if not authority.startswith("[") else (authority, "", "")
    return host.lower() == want_host.lower() and port == want_port


def filter_host(terms: Iterable[Term], authority: str) -> list[Term]:
    return [t for t in terms if _authority_matches(t, authority)]


def run_plan(plan: QueryPlan, client: Optional[RestparkClient] = None, parallelism: int = 4) -> BindingTable:
    plan.validate()
    client = client or RestparkClient()
    columns: list[str] = []
    rows: list[dict[str, Term]] = [{}]

    for i, step in enumerate(plan.steps):
        try:
            if step.kind == FILTER_HOST:
                rows = [r for r in rows if _authority_matches(r[step.variable], step.authority)]
                continue
            for v in step.pattern.variables():
                if v not in columns:
                    columns.append(v)
            if step.kind == FETCH:
                matches = client.query_all(step.endpoint, step.pattern.instantiate({}))
                rows = [
                    joined
                    for row in rows
                    for t in matches
                    if (joined := step.pattern.bind(t, row)) is not None
                ]
            else:
                def expand(row, step=step):
                    found = client.query_all(step.endpoint, step.pattern.instantiate(row))
                    return [j for t in found if (j := step.pattern.bind(t, row)) is not None]

                with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
                    rows = [j for chunk in pool.map(expand, rows) for j in chunk]
        except ClientError as exc:
            raise PlanError(str(exc), i) from exc

    out = list(plan.output)
    unique = {_row_key(r, out): {c: r[c] for c in out} for r in rows}
    return BindingTable(out, [unique[k] for k in sorted(unique)])


# -- plan documents ---------------------------------------------------------


def _parse_slot(text, where: str) -> Slot:
    if text is None:
        return None
    if not isinstance(text, str) or not text:
        raise PlanError(f"{where}: expected a term or ?variable, got {text!r}")
    if text.startswith("?"):
        name = text[1:]
        if not name.isidentifier():
            raise PlanError(f"{where}: bad variable name {text!r}")
        return name
    try:
        return parse_term(text)
    except TermError as exc:
        raise PlanError(f"{where}: {exc}") from None


def plan_from_dict(doc: Mapping, endpoint_overrides: Optional[Mapping[str, str]] = None) -> QueryPlan:
    if not isinstance(doc, Mapping):
        raise PlanError("plan document must be a JSON object")
    unknown = set(doc) - {"endpoints", "steps", "output", "description"}
    if unknown:
        raise PlanError(f"unknown plan keys: {sorted(unknown)}")
    endpoints = dict(doc.get("endpoints") or {})
    endpoints.update(endpoint_overrides or {})

    steps = []
    for i, raw in enumerate(doc.get("steps") or ()):
        if not isinstance(raw, Mapping):
            raise PlanError("step must be an object", i)
        kind = raw.get("kind")
        if kind == FILTER_HOST:
            steps.append(PlanStep(kind, variable=str(raw.get("variable", "")).lstrip("?"), authority=raw.get("authority")))
            continue
        if kind not in (FETCH, EXTEND):
            raise PlanError(f"unknown step kind {kind!r}", i)
        name = raw.get("endpoint")
        url = endpoints.get(name, name)
        try:
            endpoint = Endpoint(url)
        except (TypeError, ValueError) as exc:
            raise PlanError(f"endpoint {name!r}: {exc}", i) from None
        pattern = raw.get("pattern") or {}
        extra = set(pattern) - set(POSITIONS)
        if extra:
            raise PlanError(f"unknown pattern positions {sorted(extra)}", i)
        template = PatternTemplate(*(_parse_slot(pattern.get(p), f"step {i} {p}") for p in POSITIONS))
        steps.append(PlanStep(kind, endpoint=endpoint, pattern=template))

    output = doc.get("output")
    if not isinstance(output, list) or not all(isinstance(v, str) for v in output):
        raise PlanError("output must be a list of variable names")
    plan = QueryPlan(tuple(steps), tuple(v.lstrip("?") for v in output))
    plan.validate()
    return plan


def load_plan(path, endpoint_overrides: Optional[Mapping[str, str]] = None) -> QueryPlan:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise PlanError(f"{path}: invalid JSON: {exc}") from None
    return plan_from_dict(doc, endpoint_overrides)
