"""Expression language for the command-line front end.

A small LL grammar with the usual precedence (^ above unary minus above
* and / above + and -), integer literals, identifiers, call syntax
f(a, b), and bracketed coefficient lists [a0, a1, ...] for series
literals.  The tokenizer tracks line and column so every syntax error
points at its position; an unexpected end of input reports the column one
past the final character.

AST nodes compare structurally (positions are ignored), which is what the
render/parse round-trip guarantee is stated against.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Tuple


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"syntax error at line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Num:
    value: int
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    ident: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple[object, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ListLit:
    items: Tuple[object, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Node = object

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),\[\]])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + chunk.rfind("\n") + 1
        else:
            tokens.append(Token(kind, chunk, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "eof":
            raise ExprSyntaxError(f"expected {text!r} but input ended", tok.line, tok.col)
        if tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return self.advance()

    # expr := term (('+'|'-') term)*
    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            node = BinOp(op.text, node, rhs, op.line, op.col)
        return node

    # term := factor (('*'|'/') factor)*
    def term(self) -> Node:
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.advance()
            rhs = self.factor()
            node = BinOp(op.text, node, rhs, op.line, op.col)
        return node

    # factor := '-' factor | power
    def factor(self) -> Node:
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return Neg(self.factor(), tok.line, tok.col)
        return self.power()

    # power := atom ('^' factor)?   (right associative)
    def power(self) -> Node:
        node = self.atom()
        if self.peek().text == "^":
            op = self.advance()
            exponent = self.factor()
            node = BinOp("^", node, exponent, op.line, op.col)
        return node

    def atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "eof":
            raise ExprSyntaxError("unexpected end of input", tok.line, tok.col)
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text), tok.line, tok.col)
        if tok.kind == "ident":
            self.advance()
            if self.peek().text == "(":
                self.advance()
                args: List[Node] = []
                if self.peek().text != ")":
                    args.append(self.expr())
                    while self.peek().text == ",":
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return Call(tok.text, tuple(args), tok.line, tok.col)
            return Name(tok.text, tok.line, tok.col)
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.text == "[":
            self.advance()
            items: List[Node] = []
            if self.peek().text != "]":
                items.append(self.expr())
                while self.peek().text == ",":
                    self.advance()
                    items.append(self.expr())
            self.expect("]")
            return ListLit(tuple(items), tok.line, tok.col)
        raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse_expr(text: str) -> Node:
    """Parse source text to an AST or raise ExprSyntaxError with position."""
    parser = _Parser(tokenize(text))
    node = parser.expr()
    tail = parser.peek()
    if tail.kind != "eof":
        raise ExprSyntaxError(f"unexpected trailing input {tail.text!r}", tail.line, tail.col)
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _wrap(child: Node, parent_prec: int, right_side: bool = False) -> str:
    text = render(child)
    child_prec = _child_prec(child)
    if child_prec < parent_prec or (child_prec == parent_prec and right_side):
        return f"({text})"
    return text


def _child_prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return 10


def render(node: Node) -> str:
    """Canonical source text; parse(render(parse(t))) == parse(t)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Call):
        return f"{node.func}({', '.join(render(a) for a in node.args)})"
    if isinstance(node, ListLit):
        return f"[{', '.join(render(a) for a in node.items)}]"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, _PREC['neg'])}"
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        if node.op == "^":
            # right associative: equal precedence needs parens on the left
            left = _wrap(node.left, prec, right_side=True)
            right = _wrap(node.right, prec, right_side=False)
            return f"{left}^{right}"
        left = _wrap(node.left, prec)
        right = _wrap(node.right, prec, right_side=node.op in ("-", "/"))
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an AST node: {node!r}")
