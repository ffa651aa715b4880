"""Concrete text syntax: parser and round-tripping printer.

Grammar sketch (weakest binding first)::

    formula     = implication
    implication = disjunction [ "->" implication ]
    disjunction = conjunction { "|" conjunction }
    conjunction = temporal { "&" temporal }
    temporal    = unary [ ("U"|"R"|"S"|"T") bound? temporal ]
    unary       = "!" unary
                | ("X"|"WX"|"Y"|"WY"|"G"|"F"|"P"|"H") bound? unary
                | primary
    primary     = "(" formula ")" | "true" | "false"
                | IDENT "." formula              # freeze, swallows maximally
                | IDENT comparison               # timing constraint
                | IDENT                          # proposition
    bound       = "[" INT "]"
    comparison  = ("<="|"<"|">="|">"|"=") IDENT [("+"|"-") INT]
                | ("<="|"<"|">="|">"|"=") INT                  # absolute
                | "==" IDENT [("+"|"-") INT] "mod" INT         # congruence

``G``/``F``/``P``/``H`` and the comparison operators other than ``<=`` and
``==`` are sugar and are desugared while parsing; the printer re-sugars
``G``/``F``/``P``/``H`` so that ``parse(print(f))`` is structurally ``f``.
``#`` starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .formula import (
    FALSE,
    TRUE,
    Abs,
    And,
    Bound,
    Cong,
    FalseF,
    Formula,
    Freeze,
    Implies,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Rel,
    Release,
    Since,
    Triggered,
    TrueF,
    Until,
    WeakNext,
    WeakPrev,
)

KEYWORDS = {"true", "false", "mod", "X", "WX", "Y", "WY", "U", "R", "S", "T", "G", "F", "P", "H"}

_PUNCT = ["->", "<=", ">=", "==", "<", ">", "=", "(", ")", "[", "]", ".", "!", "&", "|", "+", "-"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Optional[set[str]] = None):
        self.line = line
        self.column = column
        self.expected = expected or set()
        detail = f"{line}:{column}: {message}"
        if self.expected:
            detail += " (expected " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'int', 'punct', 'eof'
    text: str
    line: int
    column: int


@dataclass
class SourceFormula:
    """Parsed formula plus per-node source positions (keyed by object id)."""

    root: Formula
    spans: dict[int, tuple[int, int]] = field(default_factory=dict)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.spans: dict[int, tuple[int, int]] = {}

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, expected: Optional[set[str]] = None) -> ParseError:
        tok = self.peek()
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, got {what}", tok.line, tok.column, expected)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == text or tok.kind == "ident" and tok.text == text:
            return self.next()
        raise self.error(f"expected {text!r}", {text})

    def at_punct(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text in texts

    def at_word(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text in words

    def tag(self, node: Formula, tok: Token) -> Formula:
        self.spans[id(node)] = (tok.line, tok.column)
        return node

    # precedence-climbing levels -------------------------------------

    def formula(self) -> Formula:
        return self.implication()

    def implication(self) -> Formula:
        tok = self.peek()
        left = self.disjunction()
        if self.at_punct("->"):
            self.next()
            right = self.implication()
            return self.tag(Implies(left, right), tok)
        return left

    def disjunction(self) -> Formula:
        tok = self.peek()
        out = self.conjunction()
        while self.at_punct("|"):
            self.next()
            out = self.tag(Or(out, self.conjunction()), tok)
        return out

    def conjunction(self) -> Formula:
        tok = self.peek()
        out = self.temporal()
        while self.at_punct("&"):
            self.next()
            out = self.tag(And(out, self.temporal()), tok)
        return out

    def temporal(self) -> Formula:
        tok = self.peek()
        left = self.unary()
        if self.at_word("U", "R", "S", "T"):
            op = self.next().text
            bound = self.bound()
            right = self.temporal()
            cls = {"U": Until, "R": Release, "S": Since, "T": Triggered}[op]
            return self.tag(cls(bound, left, right), tok)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if self.at_punct("!"):
            self.next()
            return self.tag(Not(self.unary()), tok)
        if self.at_word("X", "WX", "Y", "WY"):
            op = self.next().text
            bound = self.bound()
            sub = self.unary()
            cls = {"X": Next, "WX": WeakNext, "Y": Prev, "WY": WeakPrev}[op]
            return self.tag(cls(bound, sub), tok)
        if self.at_word("G", "F", "P", "H"):
            op = self.next().text
            bound = self.bound()
            sub = self.unary()
            sugar = {
                "G": lambda w, f: Release(w, FALSE, f),
                "F": lambda w, f: Until(w, TRUE, f),
                "P": lambda w, f: Since(w, TRUE, f),
                "H": lambda w, f: Triggered(w, FALSE, f),
            }[op]
            return self.tag(sugar(bound, sub), tok)
        return self.primary()

    def bound(self) -> Bound:
        if not self.at_punct("["):
            return None
        self.next()
        tok = self.peek()
        if tok.kind != "int":
            raise self.error("expected a bound", {"integer"})
        self.next()
        self.expect("]")
        return int(tok.text)

    def primary(self) -> Formula:
        tok = self.peek()
        if self.at_punct("("):
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            if tok.text == "true":
                self.next()
                return self.tag(TrueF(), tok)
            if tok.text == "false":
                self.next()
                return self.tag(FalseF(), tok)
            if tok.text in KEYWORDS:
                raise self.error(f"{tok.text!r} is a reserved word", {"proposition", "("})
            nxt = self.peek(1)
            if nxt.kind == "punct" and nxt.text == ".":
                self.next()
                self.next()
                body = self.formula()
                return self.tag(Freeze(tok.text, body), tok)
            if nxt.kind == "punct" and nxt.text in ("<=", "<", ">=", ">", "=", "=="):
                return self.constraint()
            self.next()
            return self.tag(Prop(tok.text), tok)
        raise self.error("expected a formula", {"proposition", "(", "!", "true", "false"})

    def constraint(self) -> Formula:
        tok = self.next()
        x = tok.text
        op = self.next().text
        if op == "==":
            y, c = self.rhs_var()
            self.expect("mod")
            mtok = self.peek()
            if mtok.kind != "int":
                raise self.error("expected a modulus", {"integer"})
            self.next()
            return self.tag(Cong(x, int(mtok.text), y, c), tok)
        nxt = self.peek()
        if nxt.kind == "int":
            self.next()
            c = int(nxt.text)
            make = lambda k: self.tag(Abs(x, k), tok)
        elif nxt.kind == "ident" and nxt.text not in KEYWORDS:
            y, c = self.rhs_var()
            make = lambda k: self.tag(Rel(x, y, k), tok)
        else:
            raise self.error("expected a variable or constant", {"variable", "integer"})
        if op == "<=":
            return make(c)
        if op == "<":
            return make(c - 1)
        if op == ">=":
            return self.tag(Not(make(c - 1)), tok)
        if op == ">":
            return self.tag(Not(make(c)), tok)
        # '=': equality as a conjunction of the two bounds
        return self.tag(And(make(c), self.tag(Not(make(c - 1)), tok)), tok)

    def rhs_var(self) -> tuple[str, int]:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error("expected a variable", {"variable"})
        self.next()
        c = 0
        if self.at_punct("+", "-"):
            sign = -1 if self.next().text == "-" else 1
            ctok = self.peek()
            if ctok.kind != "int":
                raise self.error("expected a constant", {"integer"})
            self.next()
            c = sign * int(ctok.text)
        return tok.text, c


def parse(text: str) -> SourceFormula:
    """Parses one formula; raises ParseError with line/column on bad input."""
    parser = _Parser(tokenize(text))
    root = parser.formula()
    if parser.peek().kind != "eof":
        raise parser.error("expected end of input")
    return SourceFormula(root, parser.spans)


# ---------------------------------------------------------------------------
# Printing

_PREC_FREEZE = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_TEMPORAL = 4
_PREC_UNARY = 5
_PREC_ATOM = 6


def _bound_str(bound: Bound) -> str:
    return "" if bound is None else f"[{bound}]"


def _const_str(c: int) -> str:
    if c == 0:
        return ""
    return f" + {c}" if c > 0 else f" - {-c}"


def print_formula(f: Formula) -> str:
    """Canonical rendering; parse(print_formula(f)) equals f structurally."""
    return _render(f, _PREC_FREEZE)


def _render(f: Formula, min_prec: int) -> str:
    text, prec = _render_prec(f)
    if prec < min_prec:
        return f"({text})"
    return text


def _render_prec(f: Formula) -> tuple[str, int]:
    if isinstance(f, Prop):
        return f.name, _PREC_ATOM
    if isinstance(f, TrueF):
        return "true", _PREC_ATOM
    if isinstance(f, FalseF):
        return "false", _PREC_ATOM
    if isinstance(f, Rel):
        return f"{f.x} <= {f.y}{_const_str(f.c)}", _PREC_UNARY
    if isinstance(f, Abs):
        return f"{f.x} <= {f.c}", _PREC_UNARY
    if isinstance(f, Cong):
        return f"{f.x} == {f.y}{_const_str(f.c)} mod {f.m}", _PREC_UNARY
    if isinstance(f, Not):
        return "!" + _render(f.sub, _PREC_ATOM), _PREC_UNARY
    if isinstance(f, And):
        return _render(f.left, _PREC_AND) + " & " + _render(f.right, _PREC_AND + 1), _PREC_AND
    if isinstance(f, Or):
        return _render(f.left, _PREC_OR) + " | " + _render(f.right, _PREC_OR + 1), _PREC_OR
    if isinstance(f, Implies):
        return (
            _render(f.left, _PREC_OR) + " -> " + _render(f.right, _PREC_FREEZE),
            _PREC_FREEZE,
        )
    if isinstance(f, Freeze):
        return f"{f.var}. " + _render(f.sub, _PREC_FREEZE), _PREC_FREEZE
    if isinstance(f, (Next, WeakNext, Prev, WeakPrev)):
        op = {Next: "X", WeakNext: "WX", Prev: "Y", WeakPrev: "WY"}[type(f)]
        return f"{op}{_bound_str(f.bound)} " + _render(f.sub, _PREC_UNARY), _PREC_UNARY
    if isinstance(f, (Until, Release, Since, Triggered)):
        sugar = _sugar_unary(f)
        if sugar is not None:
            name, sub = sugar
            return f"{name}{_bound_str(f.bound)} " + _render(sub, _PREC_UNARY), _PREC_UNARY
        op = {Until: "U", Release: "R", Since: "S", Triggered: "T"}[type(f)]
        left = _render(f.left, _PREC_UNARY)
        right = _render(f.right, _PREC_TEMPORAL)
        return f"{left} {op}{_bound_str(f.bound)} {right}", _PREC_TEMPORAL
    raise TypeError(f"cannot print {f!r}")


def _sugar_unary(f: Formula) -> Optional[tuple[str, Formula]]:
    if isinstance(f, Release) and isinstance(f.left, FalseF):
        return "G", f.right
    if isinstance(f, Until) and isinstance(f.left, TrueF):
        return "F", f.right
    if isinstance(f, Since) and isinstance(f.left, TrueF):
        return "P", f.right
    if isinstance(f, Triggered) and isinstance(f.left, FalseF):
        return "H", f.right
    return None
