"""Expression parsing and third-order jet evaluation.

Grammar (lowest to highest binding)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          exponent must reduce to an integer literal
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'

Implicit multiplication is not supported.
"""

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple, Union

from gendrv.errors import DomainError, ExponentError, ParseError


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Number:
    value: float
    # set for integer literals, which are the only legal exponents
    integer: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Number, Var, Neg, BinOp, Pow, Call]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str      # 'num', 'int', 'name', 'op', 'end'
    text: str
    offset: int    # UTF-8 byte offset into the source


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    """
    Split expression text into tokens

    Args:
        text: Expression source

    Returns:
        Token list terminated by an 'end' token
    """
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            expected = "number, 'x', function name, operator or parenthesis"
            raise ParseError(_byte_offset(text, pos), expected, text)
        kind = match.lastgroup
        if kind != "ws":
            lexeme = match.group()
            if kind == "num" and lexeme.isdigit():
                kind = "int"
            tokens.append(Token(kind, lexeme, _byte_offset(text, pos)))
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.pos += 1
            return True
        return False

    def _expect(self, op: str):
        if not self._accept(op):
            raise ParseError(self.current.offset, f"'{op}'", self.text)

    def parse(self) -> Expr:
        node = self._expr()
        if self.current.kind != "end":
            raise ParseError(self.current.offset, "operator or end of input", self.text)
        return node

    def _expr(self) -> Expr:
        node = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Expr:
        node = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Expr:
        if self._accept("-"):
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            exponent_offset = self.current.offset
            exponent = self._unary()
            return Pow(base, self._integer_literal(exponent, exponent_offset))
        return base

    def _integer_literal(self, node: Expr, offset: int) -> int:
        sign = 1
        if isinstance(node, Neg):
            sign, node = -1, node.operand
        if isinstance(node, Number) and node.integer:
            return sign * int(node.value)
        raise ExponentError(offset, self.text)

    def _atom(self) -> Expr:
        token = self.current
        if token.kind in ("num", "int"):
            self._advance()
            return Number(float(token.text), integer=token.kind == "int")
        if token.kind == "name":
            self._advance()
            if token.text == "x":
                return Var()
            if token.text in FUNCTIONS:
                self._expect("(")
                arg = self._expr()
                self._expect(")")
                return Call(token.text, arg)
            raise ParseError(token.offset, "'x' or one of " + ", ".join(FUNCTIONS), self.text)
        if self._accept("("):
            node = self._expr()
            self._expect(")")
            return node
        raise ParseError(token.offset, "number, 'x', function or '('", self.text)


def parse(text: str) -> Expr:
    """
    Parse expression text into an immutable AST

    Args:
        text: Expression in x, e.g. "x^4 - 21*x^3 + 149*x^2 - 419*x + 290"

    Returns:
        Root node of the expression tree

    Raises:
        ParseError: malformed input, with byte offset and expectation
        ExponentError: '^' followed by something other than an integer literal
    """
    return _Parser(text).parse()


def format_expr(node: Expr) -> str:
    """Render an AST as fully parenthesised text that parses back to the same tree"""
    if isinstance(node, Number):
        if node.value.is_integer() and abs(node.value) < 1e15:
            return str(int(node.value))
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{format_expr(node.operand)})"
    if isinstance(node, BinOp):
        return f"({format_expr(node.left)} {node.op} {format_expr(node.right)})"
    if isinstance(node, Pow):
        return f"({format_expr(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.func}({format_expr(node.arg)})"
    raise TypeError(f"Unknown expression node: {node!r}")


# ---------------------------------------------------------------------------
# Jet arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives of a function at one point"""
    v: float
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0

    @classmethod
    def variable(cls, x: float) -> "Jet3":
        return cls(float(x), 1.0, 0.0, 0.0)

    @classmethod
    def constant(cls, c: float) -> "Jet3":
        return cls(float(c), 0.0, 0.0, 0.0)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.v, self.d1, self.d2, self.d3)

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in self.as_tuple())

    def __add__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2, self.d3 + other.d3)

    def __sub__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2, self.d3 - other.d3)

    def __neg__(self) -> "Jet3":
        return Jet3(-self.v, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other: "Jet3") -> "Jet3":
        a, b = self, other
        return Jet3(
            a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3,
        )

    def __truediv__(self, other: "Jet3") -> "Jet3":
        a, b = self, other
        if b.v == 0.0:
            raise DomainError("Division by zero")
        # from a = q*b differentiated by the Leibniz rule
        q0 = a.v / b.v
        q1 = (a.d1 - q0 * b.d1) / b.v
        q2 = (a.d2 - 2.0 * q1 * b.d1 - q0 * b.d2) / b.v
        q3 = (a.d3 - 3.0 * q2 * b.d1 - 3.0 * q1 * b.d2 - q0 * b.d3) / b.v
        return Jet3(q0, q1, q2, q3)

    def compose(self, g0: float, g1: float, g2: float, g3: float) -> "Jet3":
        """Chain rule for g(u) where g0..g3 are g and its derivatives at u.v"""
        u1, u2, u3 = self.d1, self.d2, self.d3
        return Jet3(
            g0,
            g1 * u1,
            g2 * u1 * u1 + g1 * u2,
            g3 * u1 ** 3 + 3.0 * g2 * u1 * u2 + g1 * u3,
        )

    def powi(self, n: int) -> "Jet3":
        v = self.v
        if n == 0:
            return Jet3.constant(1.0)
        if v == 0.0 and n < 0:
            raise DomainError(f"Zero raised to negative power {n}")

        def term(coef: int, k: int) -> float:
            return 0.0 if coef == 0 else coef * v ** (n - k)

        return self.compose(
            v ** n,
            term(n, 1),
            term(n * (n - 1), 2),
            term(n * (n - 1) * (n - 2), 3),
        )


def _sin(u: Jet3) -> Jet3:
    s, c = math.sin(u.v), math.cos(u.v)
    return u.compose(s, c, -s, -c)


def _cos(u: Jet3) -> Jet3:
    s, c = math.sin(u.v), math.cos(u.v)
    return u.compose(c, -s, -c, s)


def _exp(u: Jet3) -> Jet3:
    try:
        e = math.exp(u.v)
    except OverflowError as exc:
        raise DomainError(f"exp overflow at {u.v}") from exc
    return u.compose(e, e, e, e)


def _log(u: Jet3) -> Jet3:
    v = u.v
    if v <= 0.0:
        raise DomainError(f"log undefined at {v}")
    return u.compose(math.log(v), 1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3)


def _sqrt(u: Jet3) -> Jet3:
    v = u.v
    if v < 0.0:
        raise DomainError(f"sqrt undefined at {v}")
    if v == 0.0:
        raise DomainError("sqrt derivatives are unbounded at 0")
    r = math.sqrt(v)
    return u.compose(r, 0.5 / r, -0.25 / (v * r), 0.375 / (v * v * r))


_JET_FUNCTIONS: Dict[str, Callable[[Jet3], Jet3]] = {
    "sin": _sin,
    "cos": _cos,
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
}


def _plain_call(func: str, v: float) -> float:
    if func == "log" and v <= 0.0:
        raise DomainError(f"log undefined at {v}")
    if func == "sqrt" and v < 0.0:
        raise DomainError(f"sqrt undefined at {v}")
    try:
        return getattr(math, func)(v)
    except OverflowError as exc:
        raise DomainError(f"{func} overflow at {v}") from exc


def evaluate(node: Expr, x: float) -> float:
    """
    Evaluate an expression at x with plain floats

    The arithmetic path is the value component of eval_jet, so both agree
    bit for bit.
    """
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Var):
        return float(x)
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, BinOp):
        a = evaluate(node.left, x)
        b = evaluate(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("Division by zero")
        return a / b
    if isinstance(node, Pow):
        v = evaluate(node.base, x)
        if node.exponent == 0:
            return 1.0
        if v == 0.0 and node.exponent < 0:
            raise DomainError(f"Zero raised to negative power {node.exponent}")
        try:
            return v ** node.exponent
        except OverflowError as exc:
            raise DomainError(f"Overflow in power at {v}") from exc
    if isinstance(node, Call):
        return _plain_call(node.func, evaluate(node.arg, x))
    raise TypeError(f"Unknown expression node: {node!r}")


def _jet(node: Expr, x: float) -> Jet3:
    if isinstance(node, Number):
        return Jet3.constant(node.value)
    if isinstance(node, Var):
        return Jet3.variable(x)
    if isinstance(node, Neg):
        return -_jet(node.operand, x)
    if isinstance(node, BinOp):
        a = _jet(node.left, x)
        b = _jet(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        try:
            return _jet(node.base, x).powi(node.exponent)
        except OverflowError as exc:
            raise DomainError(f"Overflow in power at {x}") from exc
    if isinstance(node, Call):
        return _JET_FUNCTIONS[node.func](_jet(node.arg, x))
    raise TypeError(f"Unknown expression node: {node!r}")


def eval_jet(node: Expr, x: float) -> Jet3:
    """
    Evaluate an expression and its first three derivatives at x

    Args:
        node: Parsed expression
        x: Evaluation point

    Returns:
        Jet3 with value, first, second and third derivative

    Raises:
        DomainError: log/sqrt outside their domain, division by zero,
            overflow or any non-finite component
    """
    jet = _jet(node, x)
    if not jet.is_finite():
        raise DomainError(f"Non-finite derivative tower at x={x}")
    return jet
