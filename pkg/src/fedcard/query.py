"""SPARQL SELECT subset: basic graph patterns and their join structure.

Supported grammar::

    SELECT (* | ?var ...) WHERE { tp ( "." tp )* "."? }

with IRIs in angle brackets, literals quoted (optionally typed or
language-tagged), and variables written ``?name``. OPTIONAL / FILTER /
UNION and friends are rejected with an "unsupported clause" error.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

from .ntriples import Term, TermKind, _unescape, iri, literal

_UNSUPPORTED_CLAUSES = (
    "OPTIONAL",
    "FILTER",
    "UNION",
    "LIMIT",
    "OFFSET",
    "ORDER",
    "GROUP",
    "HAVING",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "BIND",
    "VALUES",
    "DISTINCT",
    "REDUCED",
    "PREFIX",
)


@dataclass(frozen=True, slots=True)
class Var:
    """A query variable; ``name`` excludes the leading ``?``."""

    name: str


Slot = Union[Term, Var]

SUBJECT, PREDICATE, OBJECT = "s", "p", "o"


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """One triple pattern; ``ordinal`` is its 0-based position in the query."""

    subject: Slot
    predicate: Slot
    object: Slot
    ordinal: int = 0

    def slots(self) -> tuple[tuple[str, Slot], ...]:
        return ((SUBJECT, self.subject), (PREDICATE, self.predicate), (OBJECT, self.object))

    def variables(self) -> set[str]:
        return {slot.name for _, slot in self.slots() if isinstance(slot, Var)}

    def var_positions(self, name: str) -> tuple[str, ...]:
        return tuple(pos for pos, slot in self.slots() if isinstance(slot, Var) and slot.name == name)

    def bound_predicate(self) -> str | None:
        """Predicate IRI if ground, else None."""
        if isinstance(self.predicate, Var):
            return None
        return self.predicate.lexical


@dataclass(frozen=True, slots=True)
class BasicGraphPattern:
    patterns: tuple[TriplePattern, ...]
    projection: tuple[str, ...]

    def variables(self) -> set[str]:
        out: set[str] = set()
        for tp in self.patterns:
            out |= tp.variables()
        return out


class JoinKind(enum.Enum):
    SUBJECT_SUBJECT = "ss"
    SUBJECT_OBJECT = "so"
    OBJECT_OBJECT = "oo"
    PREDICATE_INVOLVED = "pred"


@dataclass(frozen=True, slots=True)
class JoinEdge:
    """A shared variable between two patterns.

    ``left``/``right`` are pattern ordinals with left < right;
    ``left_pos``/``right_pos`` record one canonical position the variable
    occupies on each side (s/p/o), used by position-sensitive estimators.
    """

    left: int
    right: int
    variable: str
    kind: JoinKind
    left_pos: str
    right_pos: str


class QueryParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<literal>"(?:[^"\\]|\\.)*"(?:\^\^<[^<>\s]*>|@[A-Za-z0-9-]+)?)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d[\w.]*)
  | (?P<punct>[{}().;,:*])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise QueryParseError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        tok_text = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, tok_text, line, pos - line_start + 1))
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok_text.rindex("\n") + 1
        pos = m.end()
    return tokens


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    def _error(self, message: str) -> QueryParseError:
        if self.index < len(self.tokens):
            tok = self.tokens[self.index]
            return QueryParseError(tok.line, tok.column, message)
        last = self.tokens[-1] if self.tokens else _Token("", "", 1, 1)
        return QueryParseError(last.line, last.column + len(last.text), message)

    def _peek(self) -> _Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _next(self, message: str) -> _Token:
        tok = self._peek()
        if tok is None:
            raise self._error(message)
        self.index += 1
        return tok

    def _check_unsupported(self, tok: _Token) -> None:
        if tok.kind == "word" and tok.text.upper() in _UNSUPPORTED_CLAUSES:
            raise QueryParseError(tok.line, tok.column, f"unsupported clause: {tok.text.upper()}")

    def _keyword(self, word: str) -> None:
        tok = self._next(f"expected {word}")
        if tok.kind != "word" or tok.text.upper() != word:
            self._check_unsupported(tok)
            raise QueryParseError(tok.line, tok.column, f"expected {word}, found {tok.text!r}")

    def parse(self) -> BasicGraphPattern:
        tok = self._peek()
        if tok is not None and tok.kind == "word" and tok.text.upper() != "SELECT":
            self._check_unsupported(tok)
        self._keyword("SELECT")

        projection_vars: list[str] = []
        star = False
        tok = self._peek()
        if tok is not None and tok.text == "*":
            star = True
            self.index += 1
        else:
            while True:
                tok = self._peek()
                if tok is None or tok.kind != "var":
                    break
                projection_vars.append(tok.text[1:])
                self.index += 1
            if not projection_vars:
                tok = self._peek()
                if tok is not None:
                    self._check_unsupported(tok)
                raise self._error("expected '*' or projection variables")

        self._keyword("WHERE")
        tok = self._next("expected '{'")
        if tok.text != "{":
            raise QueryParseError(tok.line, tok.column, f"expected '{{', found {tok.text!r}")

        patterns: list[TriplePattern] = []
        while True:
            tok = self._peek()
            if tok is None:
                raise self._error("expected '}'")
            if tok.text == "}":
                self.index += 1
                break
            self._check_unsupported(tok)
            patterns.append(self._triple_pattern(len(patterns)))
            tok = self._peek()
            if tok is not None and tok.text == ".":
                self.index += 1
        tok = self._peek()
        if tok is not None:
            self._check_unsupported(tok)
            raise QueryParseError(tok.line, tok.column, f"unexpected content after '}}': {tok.text!r}")

        if not patterns:
            raise QueryParseError(1, 1, "query has no triple patterns")
        all_vars: set[str] = set()
        for tp in patterns:
            all_vars |= tp.variables()
        if star:
            projection = tuple(sorted(all_vars))
        else:
            missing = [v for v in projection_vars if v not in all_vars]
            if missing:
                raise QueryParseError(1, 1, f"projection variable ?{missing[0]} not used in any pattern")
            projection = tuple(projection_vars)
        return BasicGraphPattern(tuple(patterns), projection)

    def _triple_pattern(self, ordinal: int) -> TriplePattern:
        subject = self._slot("subject")
        if isinstance(subject, Term) and subject.kind is TermKind.LITERAL:
            tok = self.tokens[self.index - 1]
            raise QueryParseError(tok.line, tok.column, "literal not allowed as subject")
        predicate = self._slot("predicate")
        if isinstance(predicate, Term) and predicate.kind is not TermKind.IRI:
            tok = self.tokens[self.index - 1]
            raise QueryParseError(tok.line, tok.column, "predicate must be an IRI or variable")
        obj = self._slot("object")
        return TriplePattern(subject, predicate, obj, ordinal=ordinal)

    def _slot(self, role: str) -> Slot:
        tok = self._next(f"expected {role} term")
        if tok.kind == "var":
            return Var(tok.text[1:])
        if tok.kind == "iri":
            value = tok.text[1:-1]
            if not value:
                raise QueryParseError(tok.line, tok.column, "empty IRI")
            return iri(value)
        if tok.kind == "literal":
            return _parse_literal_token(tok)
        self._check_unsupported(tok)
        raise QueryParseError(tok.line, tok.column, f"expected {role} term, found {tok.text!r}")


def _parse_literal_token(tok: _Token) -> Term:
    text = tok.text
    end = 1
    while end < len(text):
        if text[end] == "\\":
            end += 2
            continue
        if text[end] == '"':
            break
        end += 1
    body = _unescape(text[1:end], tok.line)
    suffix = text[end + 1 :]
    if suffix.startswith("^^<"):
        return literal(body, datatype=suffix[3:-1])
    if suffix.startswith("@"):
        return literal(body, langtag=suffix[1:])
    return literal(body)


def parse_query(text: str) -> BasicGraphPattern:
    """Parse a SELECT query into a BasicGraphPattern.

    ``*`` projection expands to all variables (sorted); pattern order in
    the text fixes the ordinals.
    """
    return _QueryParser(text).parse()


def _edge_for_pair(left: TriplePattern, right: TriplePattern, variable: str) -> JoinEdge:
    lpos = left.var_positions(variable)
    rpos = right.var_positions(variable)
    if PREDICATE in lpos or PREDICATE in rpos:
        kind = JoinKind.PREDICATE_INVOLVED
        lp = PREDICATE if PREDICATE in lpos else lpos[0]
        rp = PREDICATE if PREDICATE in rpos else rpos[0]
    elif SUBJECT in lpos and SUBJECT in rpos:
        kind, lp, rp = JoinKind.SUBJECT_SUBJECT, SUBJECT, SUBJECT
    elif OBJECT in lpos and OBJECT in rpos:
        kind, lp, rp = JoinKind.OBJECT_OBJECT, OBJECT, OBJECT
    elif SUBJECT in lpos:
        kind, lp, rp = JoinKind.SUBJECT_OBJECT, SUBJECT, OBJECT
    else:
        kind, lp, rp = JoinKind.SUBJECT_OBJECT, OBJECT, SUBJECT
    return JoinEdge(left.ordinal, right.ordinal, variable, kind, lp, rp)


def edges_between(left: TriplePattern, right: TriplePattern) -> list[JoinEdge]:
    """Join edges between one unordered pattern pair, one per shared variable."""
    first, second = (left, right) if left.ordinal < right.ordinal else (right, left)
    shared = sorted(first.variables() & second.variables())
    return [_edge_for_pair(first, second, v) for v in shared]


def join_edges(bgp: BasicGraphPattern) -> list[JoinEdge]:
    """All join edges of a BGP: one per unordered pattern pair per shared variable."""
    out: list[JoinEdge] = []
    patterns = bgp.patterns
    for i in range(len(patterns)):
        for j in range(i + 1, len(patterns)):
            out.extend(edges_between(patterns[i], patterns[j]))
    return out
