"""RDF terms, triples, and a line-based N-Triples parser.

The parser accepts the W3C N-Triples grammar (IRIs, typed/tagged literals,
blank nodes, ``#`` comments) and reports syntax errors with 1-based line
numbers. Duplicates are preserved in document order; deduplication happens
when a store is built.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}
_UNESCAPES = {v: "\\" + k for k, v in _ESCAPES.items() if k not in ("'",)}


class TermKind(enum.Enum):
    IRI = "iri"
    LITERAL = "literal"
    BLANK = "blank"


@dataclass(frozen=True, slots=True)
class Term:
    """A ground RDF term: IRI, literal, or blank node.

    ``lexical`` holds the IRI string, the literal value, or the blank-node
    label. A literal carries at most one of ``datatype``/``langtag``.
    """

    kind: TermKind
    lexical: str
    datatype: Optional[str] = None
    langtag: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind is TermKind.IRI and not self.lexical:
            raise ValueError("IRI term with empty lexical form")
        if self.kind is not TermKind.LITERAL and (self.datatype or self.langtag):
            raise ValueError("datatype/langtag only allowed on literals")
        if self.datatype and self.langtag:
            raise ValueError("literal cannot carry both datatype and langtag")

    def is_iri(self) -> bool:
        return self.kind is TermKind.IRI


def iri(value: str) -> Term:
    return Term(TermKind.IRI, value)


def literal(value: str, datatype: Optional[str] = None, langtag: Optional[str] = None) -> Term:
    return Term(TermKind.LITERAL, value, datatype=datatype, langtag=langtag)


def blank(label: str) -> Term:
    return Term(TermKind.BLANK, label)


@dataclass(frozen=True, slots=True)
class Triple:
    """A ground RDF triple. Subject is never a literal; predicate is an IRI."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if self.subject.kind is TermKind.LITERAL:
            raise ValueError("literal subject is not valid RDF")
        if self.predicate.kind is not TermKind.IRI:
            raise ValueError("predicate must be an IRI")


class NTriplesParseError(ValueError):
    """Syntax or structural error, carrying the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


def _unescape(raw: str, line: int) -> str:
    if "\\" not in raw:
        return raw
    out = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= n:
            raise NTriplesParseError(line, "dangling escape at end of string")
        esc = raw[i + 1]
        if esc in _ESCAPES:
            out.append(_ESCAPES[esc])
            i += 2
        elif esc == "u" or esc == "U":
            width = 4 if esc == "u" else 8
            hexpart = raw[i + 2 : i + 2 + width]
            if len(hexpart) != width:
                raise NTriplesParseError(line, f"truncated \\{esc} escape")
            try:
                out.append(chr(int(hexpart, 16)))
            except ValueError:
                raise NTriplesParseError(line, f"bad \\{esc} escape '{hexpart}'") from None
            i += 2 + width
        else:
            raise NTriplesParseError(line, f"unknown escape '\\{esc}'")
    return "".join(out)


def _escape(value: str) -> str:
    out = []
    for ch in value:
        if ch in _UNESCAPES:
            out.append(_UNESCAPES[ch])
        else:
            out.append(ch)
    return "".join(out)


class _LineScanner:
    """Tokenizer for one N-Triples statement line."""

    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def rest(self) -> str:
        return self.text[self.pos :]

    def error(self, message: str) -> NTriplesParseError:
        return NTriplesParseError(self.line, message)

    def expect_dot(self) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ".":
            raise self.error("expected '.' terminating statement")
        self.pos += 1

    def term(self, role: str) -> Term:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.error(f"expected {role} term")
        ch = self.text[self.pos]
        if ch == "<":
            return self._iri()
        if ch == "_":
            return self._blank()
        if ch == '"':
            return self._literal()
        raise self.error(f"unexpected token {self.rest().split()[0]!r} for {role}")

    def _iri(self) -> Term:
        end = self.text.find(">", self.pos + 1)
        if end < 0:
            raise self.error("unterminated IRI")
        raw = self.text[self.pos + 1 : end]
        self.pos = end + 1
        value = _unescape(raw, self.line)
        if not value:
            raise self.error("empty IRI")
        return iri(value)

    def _blank(self) -> Term:
        if not self.text.startswith("_:", self.pos):
            raise self.error("malformed blank node label")
        i = self.pos + 2
        start = i
        while i < len(self.text) and (self.text[i].isalnum() or self.text[i] in "-_."):
            i += 1
        label = self.text[start:i].rstrip(".")
        i = start + len(label)
        if not label:
            raise self.error("empty blank node label")
        self.pos = i
        return blank(label)

    def _literal(self) -> Term:
        i = self.pos + 1
        chunks = []
        while True:
            if i >= len(self.text):
                raise self.error("unterminated literal")
            ch = self.text[i]
            if ch == "\\":
                if i + 1 >= len(self.text):
                    raise self.error("dangling escape in literal")
                chunks.append(self.text[i : i + 2])
                i += 2
                continue
            if ch == '"':
                break
            chunks.append(ch)
            i += 1
        value = _unescape("".join(chunks), self.line)
        self.pos = i + 1
        if self.text.startswith("^^<", self.pos):
            self.pos += 2
            dtype = self._iri()
            return literal(value, datatype=dtype.lexical)
        if self.text.startswith("@", self.pos):
            i = self.pos + 1
            start = i
            while i < len(self.text) and (self.text[i].isalnum() or self.text[i] == "-"):
                i += 1
            tag = self.text[start:i]
            if not tag:
                raise self.error("empty language tag")
            self.pos = i
            return literal(value, langtag=tag)
        return literal(value)


def iter_ntriples(text: str) -> Iterator[Triple]:
    """Yield triples from N-Triples text in document order.

    Raises NTriplesParseError with a 1-based line number on bad input.
    A literal in subject position is reported as a structural error.
    """
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        scanner = _LineScanner(line, lineno)
        subject = scanner.term("subject")
        if subject.kind is TermKind.LITERAL:
            raise NTriplesParseError(lineno, "literal not allowed as subject")
        if scanner.at_end():
            raise NTriplesParseError(lineno, "expected predicate term")
        predicate = scanner.term("predicate")
        if predicate.kind is not TermKind.IRI:
            raise NTriplesParseError(lineno, "predicate must be an IRI")
        if scanner.at_end():
            raise NTriplesParseError(lineno, "expected object term")
        obj = scanner.term("object")
        scanner.expect_dot()
        if not scanner.at_end():
            raise NTriplesParseError(lineno, f"trailing content {scanner.rest().strip()!r}")
        yield Triple(subject, predicate, obj)


def parse_ntriples(text: str) -> list[Triple]:
    """Parse N-Triples text into a list of triples, duplicates preserved."""
    return list(iter_ntriples(text))


def format_term(term: Term) -> str:
    """Serialize a term back to its N-Triples token."""
    if term.kind is TermKind.IRI:
        return f"<{term.lexical}>"
    if term.kind is TermKind.BLANK:
        return f"_:{term.lexical}"
    body = f'"{_escape(term.lexical)}"'
    if term.datatype:
        return f"{body}^^<{term.datatype}>"
    if term.langtag:
        return f"{body}@{term.langtag}"
    return body


def format_triple(triple: Triple) -> str:
    return (
        f"{format_term(triple.subject)} {format_term(triple.predicate)} "
        f"{format_term(triple.object)} ."
    )
