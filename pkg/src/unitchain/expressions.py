"""Arithmetic expressions for jump probabilities pi(x).

Grammar (recursive descent, one token lookahead):

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | base ("^" integer)?
    base   := number | "x" | "(" expr ")"

Only integer exponents are allowed.  "^" binds tighter than unary minus, so
-x^2 means -(x^2).  Expressions used as jump probabilities are audited on a
10^4-point grid at parse time: values must stay in [0,1] and denominators
must stay away from zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .logprob import LOG_ZERO
from .measure import Point

PI_AUDIT_GRID = 10_000
DENOMINATOR_FLOOR = 1e-12


class PiParseError(ValueError):
    """Syntax error, with the offending position and the expected token set."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{suffix}")


class PiRangeError(ValueError):
    """The expression left [0,1] (or divided by ~0) at an audit point."""

    def __init__(self, message: str, witness: float):
        self.witness = witness
        super().__init__(f"{message} at x={witness!r}")


# ---------------------------------------------------------------------------
# AST


def _format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True)
class Node:
    def evaluate(self, point: Point) -> float:
        raise NotImplementedError

    def log_eval(self, point: Point) -> float | None:
        """Exact log-domain value when the tree structure supports it.

        Defined for positive literals, the variable, products, quotients and
        integer powers; None otherwise.  This is what keeps deep trajectories
        (x0^(2^n) far below the linear floor) exact.
        """
        return None

    def format(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class NumberNode(Node):
    value: float

    def evaluate(self, point: Point) -> float:
        return self.value

    def log_eval(self, point: Point) -> float | None:
        if self.value < 0.0:
            return None
        return LOG_ZERO if self.value == 0.0 else math.log(self.value)

    def format(self) -> str:
        return _format_number(self.value)


@dataclass(frozen=True)
class VarNode(Node):
    def evaluate(self, point: Point) -> float:
        return point.value

    def log_eval(self, point: Point) -> float | None:
        return point.log_value

    def format(self) -> str:
        return "x"


@dataclass(frozen=True)
class NegNode(Node):
    operand: Node

    def evaluate(self, point: Point) -> float:
        return -self.operand.evaluate(point)

    def format(self) -> str:
        inner = self.operand.format()
        if isinstance(self.operand, BinOpNode):
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True)
class BinOpNode(Node):
    op: str  # one of + - * /
    left: Node
    right: Node

    def evaluate(self, point: Point) -> float:
        a = self.left.evaluate(point)
        b = self.right.evaluate(point)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if abs(b) < DENOMINATOR_FLOOR:
            raise PiRangeError(f"denominator {b!r} below {DENOMINATOR_FLOOR}", point.value)
        return a / b

    def log_eval(self, point: Point) -> float | None:
        if self.op not in ("*", "/"):
            return None
        la = self.left.log_eval(point)
        lb = self.right.log_eval(point)
        if la is None or lb is None:
            return None
        if self.op == "*":
            return la + lb
        if lb == LOG_ZERO:
            return None  # division by zero; linear path raises coherently
        return la - lb

    def format(self) -> str:
        left = self.left.format()
        right = self.right.format()
        if isinstance(self.right, BinOpNode):
            right = f"({right})"
        if isinstance(self.left, BinOpNode) and self.op in ("*", "/") and self.left.op in ("+", "-"):
            left = f"({left})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class PowNode(Node):
    base: Node
    exponent: int

    def evaluate(self, point: Point) -> float:
        return self.base.evaluate(point) ** self.exponent

    def log_eval(self, point: Point) -> float | None:
        lb = self.base.log_eval(point)
        if lb is None:
            return None
        return self.exponent * lb

    def format(self) -> str:
        base = self.base.format()
        if not isinstance(self.base, (NumberNode, VarNode)):
            base = f"({base})"
        return f"{base}^{self.exponent}"


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)|(?P<var>x)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | var | op | end
    text: str
    position: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            at = len(source) - len(stripped)
            raise PiParseError(
                f"unrecognized character {stripped[0]!r}", at, ("number", "x", "operator")
            )
        if m.lastgroup == "number":
            tokens.append(_Token("number", m.group("number"), m.start("number")))
        elif m.lastgroup == "var":
            tokens.append(_Token("var", "x", m.start("var")))
        else:
            tokens.append(_Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.current
        self.index += 1
        return tok

    def expect_op(self, text: str) -> None:
        tok = self.current
        if tok.kind != "op" or tok.text != text:
            raise PiParseError(f"unexpected {tok.text or 'end of input'!r}", tok.position, (text,))
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.current
        if tok.kind != "end":
            raise PiParseError(
                f"trailing input {tok.text!r}", tok.position, ("+", "-", "*", "/", "^", "end")
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in ("+", "-"):
            op = self.advance().text
            node = BinOpNode(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            op = self.advance().text
            node = BinOpNode(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.current
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return NegNode(self.factor())
        node = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            etok = self.current
            if etok.kind != "number" or not re.fullmatch(r"\d+", etok.text):
                raise PiParseError(
                    f"exponent must be an integer, got {etok.text or 'end of input'!r}",
                    etok.position,
                    ("integer",),
                )
            self.advance()
            node = PowNode(node, int(etok.text))
        return node

    def base(self) -> Node:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return NumberNode(float(tok.text))
        if tok.kind == "var":
            self.advance()
            return VarNode()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise PiParseError(
            f"unexpected {tok.text or 'end of input'!r}", tok.position, ("number", "x", "(", "-")
        )


@dataclass(frozen=True)
class PiExpression:
    """A parsed jump-probability expression, audited to stay in [0,1]."""

    root: Node
    source: str

    def evaluate(self, point: Point) -> float:
        return self.root.evaluate(point)

    def log_eval(self, point: Point) -> float | None:
        return self.root.log_eval(point)

    def format(self) -> str:
        return self.root.format()


def parse_expression(source: str) -> Node:
    """Parse without the [0,1] range audit (internal and test use)."""
    return _Parser(source).parse()


def audit_probability_range(root: Node, grid_size: int = PI_AUDIT_GRID) -> None:
    for i in range(grid_size + 1):
        p = Point.from_linear(i / grid_size)
        v = root.evaluate(p)  # PiRangeError on near-zero denominators
        if math.isnan(v) or v < 0.0 or v > 1.0:
            raise PiRangeError(f"value {v!r} outside [0,1]", p.value)


def parse_pi(source: str) -> PiExpression:
    """Parse a jump probability and audit pi(x) in [0,1] over the unit grid."""
    root = parse_expression(source)
    audit_probability_range(root)
    return PiExpression(root, source)
