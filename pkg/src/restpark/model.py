"""RDF terms, triples and triple patterns.

Terms are immutable values. Plain literals are folded into ``xsd:string`` at
construction so that ``"x"`` and ``"x"^^<xsd:string>`` are the same term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"
ALL_KINDS = frozenset({IRI, BLANK, LITERAL})

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"

_KIND_RANK = {IRI: 0, BLANK: 1, LITERAL: 2}

# Characters that may not appear raw inside an N-Triples IRIREF.
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_BLANK_LABEL = re.compile(r"[A-Za-z0-9][A-Za-z0-9._\-]*")
_LANG_TAG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")

_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
IRI_BODY = r"(?:[^\x00-\x20<>\"{}|^`\\]|" + _UCHAR + r")*"
TERM_SYNTAX = (
    r"<(?P<iri>" + IRI_BODY + r")>"
    r"|_:(?P<blank>[A-Za-z0-9][A-Za-z0-9._\-]*)"
    r"|\"(?P<lex>(?:[^\"\\\n\r]|\\.)*)\""
    r"(?:@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^<(?P<dt>" + IRI_BODY + r")>)?"
)
_TERM_RE = re.compile(TERM_SYNTAX, re.DOTALL)

_ESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", re.DOTALL)
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class TermError(ValueError):
    """Raised for malformed term syntax or a term violating its kind's rules."""


def _check_text(text: str, what: str) -> None:
    try:
        text.encode("utf-8")
    except UnicodeEncodeError:
        raise TermError(f"{what} is not encodable as UTF-8") from None


def _check_iri(value: str, what: str = "IRI") -> None:
    if not value:
        raise TermError(f"{what} is empty")
    m = _IRI_FORBIDDEN.search(value)
    if m:
        raise TermError(f"{what} contains forbidden character {m.group()!r}")
    if not _SCHEME.match(value):
        raise TermError(f"{what} {value!r} has no scheme")
    _check_text(value, what)


@dataclass(frozen=True, slots=True)
class Term:
    kind: str
    value: str
    language: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind == IRI:
            if self.language is not None or self.datatype is not None:
                raise TermError("IRIs carry no language or datatype")
            _check_iri(self.value)
        elif self.kind == BLANK:
            if self.language is not None or self.datatype is not None:
                raise TermError("blank nodes carry no language or datatype")
            if not _BLANK_LABEL.fullmatch(self.value):
                raise TermError(f"invalid blank node label {self.value!r}")
        elif self.kind == LITERAL:
            _check_text(self.value, "literal")
            if self.language is not None:
                if self.datatype is not None:
                    raise TermError("literal has both a language tag and a datatype")
                if not _LANG_TAG.fullmatch(self.language):
                    raise TermError(f"invalid language tag {self.language!r}")
                object.__setattr__(self, "language", self.language.lower())
            elif self.datatype is None:
                object.__setattr__(self, "datatype", XSD_STRING)
            else:
                _check_iri(self.datatype, "datatype IRI")
        else:
            raise TermError(f"unknown term kind {self.kind!r}")

    def __str__(self) -> str:
        return format_term(self)

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI


def iri(value: str) -> Term:
    return Term(IRI, value)


def blank(label: str) -> Term:
    return Term(BLANK, label)


def literal(lexical: str, language: Optional[str] = None, datatype: Optional[str] = None) -> Term:
    return Term(LITERAL, lexical, language, datatype)


def _unescape(text: str) -> str:
    def sub(m: re.Match) -> str:
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            cp = int(code[1:], 16)
            if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
                raise TermError(f"escape \\{code} is not a Unicode scalar value")
            return chr(cp)
        try:
            return _ECHAR[code]
        except KeyError:
            raise TermError(f"invalid escape sequence \\{code}") from None

    return _ESCAPE.sub(sub, text)


def term_from_match(m: re.Match, prefix: str = "") -> Term:
    """Build a Term from a match of :data:`TERM_SYNTAX` (optionally with prefixed group names)."""
    g = m.group
    if g(prefix + "iri") is not None:
        return iri(_unescape(g(prefix + "iri")))
    if g(prefix + "blank") is not None:
        return blank(g(prefix + "blank"))
    dt = g(prefix + "dt")
    return literal(
        _unescape(g(prefix + "lex")),
        language=g(prefix + "lang"),
        datatype=_unescape(dt) if dt is not None else None,
    )


def parse_term(text: str, allowed_kinds: Iterable[str] = ALL_KINDS) -> Term:
    """Parse a single N-Triples term such as ``<http://x>``, ``_:b0`` or ``"a"@en``."""
    m = _TERM_RE.fullmatch(text)
    if m is None:
        raise TermError(f"malformed term {text!r}")
    term = term_from_match(m)
    if term.kind not in allowed_kinds:
        raise TermError(f"{term.kind} not allowed here: {text!r}")
    return term


def _escape_literal(lexical: str) -> str:
    return (
        lexical.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def format_term(term: Term) -> str:
    if term.kind == IRI:
        return f"<{term.value}>"
    if term.kind == BLANK:
        return f"_:{term.value}"
    text = f'"{_escape_literal(term.value)}"'
    if term.language is not None:
        return f"{text}@{term.language}"
    if term.datatype != XSD_STRING:
        return f"{text}^^<{term.datatype}>"
    return text


def term_key(term: Term) -> tuple:
    """Sort key realising the canonical term order: kind, value, language, datatype."""
    return (_KIND_RANK[term.kind], term.value, term.language or "", term.datatype or "")


def compare_terms(a: Term, b: Term) -> int:
    ka, kb = term_key(a), term_key(b)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if self.subject.kind == LITERAL:
            raise TermError("literal in subject position")
        if self.predicate.kind != IRI:
            raise TermError("predicate must be an IRI")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def __str__(self) -> str:
        return f"{format_term(self.subject)} {format_term(self.predicate)} {format_term(self.object)} ."


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """A triple with optional positions; ``None`` is a wildcard.

    Literals (and blanks in predicate position) are accepted in any slot and
    simply never match, so building a pattern from user input cannot fail on
    kind grounds.
    """

    subject: Optional[Term] = None
    predicate: Optional[Term] = None
    object: Optional[Term] = None

    @property
    def shape(self) -> str:
        return "".join(
            c if t is not None else "?"
            for c, t in zip("spo", (self.subject, self.predicate, self.object))
        )

    @property
    def satisfiable(self) -> bool:
        s, p = self.subject, self.predicate
        return (s is None or s.kind != LITERAL) and (p is None or p.kind == IRI)


def pattern_matches(pattern: TriplePattern, triple: Triple) -> bool:
    return (
        (pattern.subject is None or pattern.subject == triple.subject)
        and (pattern.predicate is None or pattern.predicate == triple.predicate)
        and (pattern.object is None or pattern.object == triple.object)
    )
