"""Boolean query language over the document index.

Grammar (AND binds tighter than OR; keywords case-insensitive)::

    expr    := or
    or      := and (OR and)*
    and     := unary (AND unary)*
    unary   := NOT unary | primary
    primary := '(' expr ')' | '"' phrase '"' | atom
    atom    := field ':' value | term

Fields: ``text`` (bare terms are text atoms), ``geo`` (entry id or unique
canonical name), ``category``, ``group`` (id or unique name), ``topic``
(``model/index``), ``year`` (``2019`` or ``2000-2010``). NOT complements
against the full corpus. Retrieval is exact boolean set algebra; quoted
phrases additionally require the terms to appear consecutively in the title
or abstract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..embed import tokenize
from ..errors import QuerySyntaxError, UnknownField

KNOWN_FIELDS = ("text", "geo", "category", "group", "topic", "year")
_YEAR_RE = re.compile(r"^(\d{1,4})(?:-(\d{1,4}))?$")


@dataclass(frozen=True)
class Atom:
    field: str
    value: str


@dataclass(frozen=True)
class Phrase:
    text: str


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


Query = object  # any of the node types above


# --- tokenizer -------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # LPAREN | RPAREN | QUOTED | TERM
    text: str
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end == -1:
                raise QuerySyntaxError("unterminated phrase", i)
            tokens.append(_Token("QUOTED", text[i + 1 : end], i))
            i = end + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()"':
                j += 1
            tokens.append(_Token("TERM", text[i:j], i))
            i = j
    return tokens


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.i = 0

    def _peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _keyword(self) -> str | None:
        tok = self._peek()
        if tok is not None and tok.kind == "TERM" and tok.text.upper() in ("AND", "OR", "NOT"):
            return tok.text.upper()
        return None

    def parse(self) -> Query:
        if not self.tokens:
            raise QuerySyntaxError("empty query", 0)
        node = self._or()
        tok = self._peek()
        if tok is not None:
            raise QuerySyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return node

    def _or(self) -> Query:
        children = [self._and()]
        while self._keyword() == "OR":
            self.i += 1
            children.append(self._and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def _and(self) -> Query:
        children = [self._unary()]
        while self._keyword() == "AND":
            self.i += 1
            children.append(self._unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def _unary(self) -> Query:
        if self._keyword() == "NOT":
            self.i += 1
            return Not(self._unary())
        return self._primary()

    def _primary(self) -> Query:
        tok = self._peek()
        if tok is None:
            raise QuerySyntaxError("expected a term", len(self.text))
        if tok.kind == "LPAREN":
            self.i += 1
            node = self._or()
            closing = self._peek()
            if closing is None or closing.kind != "RPAREN":
                raise QuerySyntaxError("missing ')'", tok.pos)
            self.i += 1
            return node
        if tok.kind == "QUOTED":
            self.i += 1
            return Phrase(tok.text)
        if tok.kind == "RPAREN":
            raise QuerySyntaxError("unexpected ')'", tok.pos)
        if self._keyword() is not None:
            raise QuerySyntaxError(f"unexpected keyword {tok.text!r}", tok.pos)
        self.i += 1
        if ":" in tok.text:
            field, _, value = tok.text.partition(":")
            field = field.lower()
            if not value:
                raise QuerySyntaxError(f"empty value for field {field!r}", tok.pos)
            if field == "year" and not _YEAR_RE.match(value):
                raise QuerySyntaxError(f"bad year value {value!r}", tok.pos)
            return Atom(field, value)
        return Atom("text", tok.text)


def parse_query(text: str) -> Query:
    """Parse query text; raises QuerySyntaxError with a character position."""
    return _Parser(text).parse()


# --- evaluation -----------------------------------------------------------------


def _phrase_in(tokens: list[str], needle: list[str]) -> bool:
    k = len(needle)
    return any(tokens[i : i + k] == needle for i in range(len(tokens) - k + 1))


def execute(query: Query | str, index, meta=None) -> tuple[list[str], int]:
    """Exact boolean retrieval; returns (sorted doc ids, total count)."""
    if isinstance(query, str):
        query = parse_query(query)
    all_ids = set(index.doc_ids())

    def _eval(node) -> set[str]:
        if isinstance(node, Or):
            out: set[str] = set()
            for child in node.children:
                out |= _eval(child)
            return out
        if isinstance(node, And):
            out = _eval(node.children[0])
            for child in node.children[1:]:
                out &= _eval(child)
            return out
        if isinstance(node, Not):
            return all_ids - _eval(node.child)
        if isinstance(node, Phrase):
            terms = tokenize(node.text)
            if not terms:
                return set()
            hits = set(index.text_postings(terms[0]))
            for t in terms[1:]:
                hits &= set(index.text_postings(t))
            out = set()
            for doc_id in hits:
                payload = index.get_payload(doc_id)
                if _phrase_in(tokenize(payload["title"]), terms) or _phrase_in(
                    tokenize(payload["abstract"]), terms
                ):
                    out.add(doc_id)
            return out
        if isinstance(node, Atom):
            return _eval_atom(node)
        raise TypeError(f"not a query node: {node!r}")

    def _eval_atom(atom: Atom) -> set[str]:
        if atom.field not in KNOWN_FIELDS:
            raise UnknownField(f"unknown query field {atom.field!r}")
        if atom.field == "text":
            terms = tokenize(atom.value)
            if not terms:
                return set()
            out = set(index.text_postings(terms[0]))
            for t in terms[1:]:
                out &= set(index.text_postings(t))
            return out
        if atom.field == "year":
            m = _YEAR_RE.match(atom.value)
            if not m:
                return set()
            lo = int(m.group(1))
            hi = int(m.group(2)) if m.group(2) else lo
            return set(index.year_postings(lo, hi))
        if atom.field == "geo":
            value = atom.value
            hits = index.tag_postings(f"geo:{value}")
            if not hits and meta is not None:
                resolved = meta.geo_name_to_id(value)
                if resolved:
                    hits = index.tag_postings(f"geo:{resolved}")
            return set(hits)
        if atom.field == "group":
            value = atom.value
            hits = index.tag_postings(f"group:{value}")
            if not hits and meta is not None:
                resolved = meta.group_name_to_id(value)
                if resolved:
                    hits = index.tag_postings(f"group:{resolved}")
            return set(hits)
        # category / topic map straight onto tag keys
        return set(index.tag_postings(f"{atom.field}:{atom.value}"))

    result = sorted(_eval(query))
    return result, len(result)
