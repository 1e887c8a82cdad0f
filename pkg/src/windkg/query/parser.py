"""Lexer and recursive-descent parser for the MATCH/WHERE/RETURN subset.

Grammar::

    query     := MATCH path ("," path)* [WHERE pred (AND pred)*] RETURN ("*" | item ("," item)*) [";"]
    path      := node (rel node)*
    node      := "(" [IDENT] [":" IDENT] [propmap] ")"
    rel       := "-[" [":" IDENT] "]->" | "<-[" [":" IDENT] "]-" | "-[" [":" IDENT] "]-"
    propmap   := "{" [IDENT ":" value ("," IDENT ":" value)*] "}"
    pred      := IDENT "." IDENT op value
    op        := "=" | "<>" | "<" | "<=" | ">" | ">="
    item      := IDENT ["." IDENT]
    value     := STRING | ["-"] INTEGER | ["-"] REAL | TRUE | FALSE | "$" IDENT

Keywords are case-insensitive, identifiers are not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import NodePattern, Param, PathPattern, Predicate, Query, RelPattern, ReturnItem
from .errors import QuerySyntaxError, UnboundVariable

KEYWORDS = {"MATCH", "WHERE", "AND", "RETURN", "TRUE", "FALSE"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<param>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><>|<=|>=)
  | (?P<punct>[()\[\]{}:,.\-<>=*;])
  | (?P<string>["'])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'"}


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, real, string, param, op, punct, eof
    text: str
    value: object
    pos: int


def _location(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _error(text: str, pos: int, message: str, expected: str | None = None) -> QuerySyntaxError:
    line, column = _location(text, pos)
    return QuerySyntaxError(message, pos, line, column, expected)


def _read_string(text: str, start: int) -> tuple[str, int]:
    quote = text[start]
    i = start + 1
    chars = []
    while i < len(text):
        ch = text[i]
        if ch == quote:
            return "".join(chars), i + 1
        if ch == "\\":
            if i + 1 >= len(text):
                break
            nxt = text[i + 1]
            if nxt not in _ESCAPES:
                raise _error(text, i, f"unknown escape sequence \\{nxt}")
            chars.append(_ESCAPES[nxt])
            i += 2
            continue
        chars.append(ch)
        i += 1
    raise _error(text, start, "unterminated string literal", f"closing {quote}")


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            pos = m.end()
            continue
        if kind == "string":
            value, end = _read_string(text, pos)
            tokens.append(Token("string", text[pos:end], value, pos))
            pos = end
            continue
        if kind == "real":
            value: object = float(lexeme)
        elif kind == "int":
            value = int(lexeme)
        elif kind == "param":
            value = lexeme[1:]
        else:
            value = lexeme
        tokens.append(Token(kind, lexeme, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise _error(self.text, tok.pos, f"unexpected {found}", expected)

    def at_punct(self, ch: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == ch

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text.upper() == word

    def expect_punct(self, ch: str) -> Token:
        if not self.at_punct(ch):
            self.fail(f"'{ch}'")
        tok = self.tok
        self.i += 1
        return tok

    def expect_keyword(self, word: str) -> None:
        if not self.at_keyword(word):
            self.fail(word)
        self.i += 1

    def expect_ident(self, what: str = "identifier") -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text.upper() in KEYWORDS:
            self.fail(what)
        self.i += 1
        return tok.text

    # -- grammar ----------------------------------------------------------

    def query(self) -> Query:
        self.expect_keyword("MATCH")
        paths = [self.path()]
        while self.at_punct(","):
            self.i += 1
            paths.append(self.path())
        where = []
        if self.at_keyword("WHERE"):
            self.i += 1
            where.append(self.predicate())
            while self.at_keyword("AND"):
                self.i += 1
                where.append(self.predicate())
        self.expect_keyword("RETURN")
        returns: list[ReturnItem] | None
        if self.at_punct("*"):
            self.i += 1
            returns = None
        else:
            returns = [self.return_item()]
            while self.at_punct(","):
                self.i += 1
                returns.append(self.return_item())
        if self.at_punct(";"):
            self.i += 1
        if self.tok.kind != "eof":
            self.fail("end of query")
        return Query(tuple(paths), tuple(where), None if returns is None else tuple(returns))

    def path(self) -> PathPattern:
        nodes = [self.node()]
        rels = []
        while self.at_punct("-") or self.at_punct("<"):
            rels.append(self.rel())
            nodes.append(self.node())
        return PathPattern(tuple(nodes), tuple(rels))

    def node(self) -> NodePattern:
        open_tok = self.expect_punct("(")
        variable = label = None
        props: tuple = ()
        if self.tok.kind == "ident" and self.tok.text.upper() not in KEYWORDS:
            variable = self.expect_ident()
        if self.at_punct(":"):
            self.i += 1
            label = self.expect_ident("label")
        if self.at_punct("{"):
            props = self.propmap()
        if not self.at_punct(")"):
            if props or label:
                expected = "')'"
            elif variable:
                expected = "':', '{' or ')'"
            else:
                expected = "variable, ':', '{' or ')'"
            line, column = _location(self.text, open_tok.pos)
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise _error(
                self.text,
                self.tok.pos,
                f"unclosed '(' opened at line {line}, column {column}: unexpected {found}",
                expected,
            )
        self.i += 1
        return NodePattern(variable, label, props)

    def rel(self) -> RelPattern:
        incoming = False
        if self.at_punct("<"):
            incoming = True
            self.i += 1
        self.expect_punct("-")
        self.expect_punct("[")
        rel_type = None
        if self.at_punct(":"):
            self.i += 1
            rel_type = self.expect_ident("relationship type")
        self.expect_punct("]")
        self.expect_punct("-")
        outgoing = False
        if self.at_punct(">"):
            outgoing = True
            self.i += 1
        if incoming and outgoing:
            raise _error(self.text, self.tokens[self.i - 1].pos, "relationship cannot point both ways")
        direction = "in" if incoming else "out" if outgoing else "undirected"
        return RelPattern(rel_type, direction)

    def propmap(self) -> tuple:
        self.expect_punct("{")
        entries = []
        seen = set()
        if not self.at_punct("}"):
            while True:
                key_tok = self.tok
                key = self.expect_ident("property name")
                if key in seen:
                    raise _error(self.text, key_tok.pos, f"duplicate property {key!r} in map")
                seen.add(key)
                self.expect_punct(":")
                entries.append((key, self.value()))
                if self.at_punct(","):
                    self.i += 1
                    continue
                break
        if not self.at_punct("}"):
            self.fail("',' or '}'" if entries else "'}'", self.tok)
        self.i += 1
        return tuple(entries)

    def value(self):
        tok = self.tok
        if tok.kind == "string":
            self.i += 1
            return tok.value
        if tok.kind in ("int", "real"):
            self.i += 1
            return tok.value
        if tok.kind == "param":
            self.i += 1
            return Param(tok.value)
        if tok.kind == "punct" and tok.text == "-" and self.peek().kind in ("int", "real"):
            self.i += 2
            return -self.tokens[self.i - 1].value
        if self.at_keyword("TRUE"):
            self.i += 1
            return True
        if self.at_keyword("FALSE"):
            self.i += 1
            return False
        self.fail("literal or $parameter")

    def predicate(self) -> Predicate:
        variable = self.expect_ident("variable")
        self.expect_punct(".")
        prop = self.expect_ident("property name")
        tok = self.tok
        if tok.kind == "op" or (tok.kind == "punct" and tok.text in ("=", "<", ">")):
            self.i += 1
            op = tok.text
        else:
            self.fail("comparison operator")
        return Predicate(variable, prop, op, self.value())

    def return_item(self) -> ReturnItem:
        variable = self.expect_ident("variable")
        prop = None
        if self.at_punct("."):
            self.i += 1
            prop = self.expect_ident("property name")
        return ReturnItem(variable, prop)


def parse(text: str) -> Query:
    """Parse query text, checking that WHERE/RETURN only use bound variables."""
    query = _Parser(text).query()
    bound = set(query.variables())
    for pred in query.where:
        if pred.variable not in bound:
            raise UnboundVariable(f"variable {pred.variable!r} in WHERE is not bound by any pattern")
    if query.returns is None:
        if not bound:
            raise UnboundVariable("RETURN * needs at least one named variable")
    else:
        for item in query.returns:
            if item.variable not in bound:
                raise UnboundVariable(f"variable {item.variable!r} in RETURN is not bound by any pattern")
    return query
