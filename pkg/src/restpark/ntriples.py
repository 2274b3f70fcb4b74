"""Line-oriented N-Triples reading and writing."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .model import TERM_SYNTAX, TermError, Triple, format_term, term_from_match


def _named(prefix: str) -> str:
    return re.sub(r"\(\?P<(\w+)>", lambda m: f"(?P<{prefix}{m.group(1)}>", TERM_SYNTAX)


_WS = r"[ \t]*"
_LINE = re.compile(
    _WS
    + "(?:" + _named("s_") + ")" + _WS
    + "(?:" + _named("p_") + ")" + _WS
    + "(?:" + _named("o_") + ")" + _WS
    + r"\." + _WS + r"(?:#.*)?",
    re.DOTALL,
)
_SKIP = re.compile(_WS + r"(?:#.*)?")


class NTriplesError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass
class ParseReport:
    triples: list[Triple] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)


def parse_line(line: str) -> Triple | None:
    """Parse one line; ``None`` for blank and comment lines."""
    if _SKIP.fullmatch(line):
        return None
    m = _LINE.fullmatch(line)
    if m is None:
        raise TermError("not a well-formed triple")
    return Triple(term_from_match(m, "s_"), term_from_match(m, "p_"), term_from_match(m, "o_"))


def parse_document(text: str, strict: bool = False) -> ParseReport:
    report = ParseReport()
    # split on \n only: str.splitlines() would also break on U+2028 etc. inside literals
    for lineno, line in enumerate(text.split("\n"), 1):
        if line.endswith("\r"):
            line = line[:-1]
        try:
            triple = parse_line(line)
        except TermError as exc:
            if strict:
                raise NTriplesError(lineno, str(exc)) from None
            report.errors.append((lineno, str(exc)))
            continue
        if triple is not None:
            report.triples.append(triple)
    return report


def serialize_document(triples: Iterable[Triple]) -> str:
    return "".join(
        f"{format_term(t.subject)} {format_term(t.predicate)} {format_term(t.object)} .\n"
        for t in triples
    )


def read_file(path, strict: bool = False) -> ParseReport:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), strict=strict)
