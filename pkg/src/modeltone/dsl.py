"""One-variable expression language for curvature profiles and warping functions.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'pi' | VAR | FUNC '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and is right-associative, so ``-r^2``
is ``-(r^2)`` and ``2^3^2`` is ``2^(3^2)``.  A single free variable is
allowed; any of ``r s t x y z`` may be used.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "sqrt", "abs")
VARIABLES = frozenset("rstxyz")


class ExprError(ValueError):
    pass


class ParseError(ExprError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f", expected one of {sorted(expected)}"
        super().__init__(detail)


class DomainError(ExprError, ArithmeticError):
    """Raised when an expression is evaluated outside its mathematical domain."""

    def __init__(self, message: str, subexpr: "Node"):
        self.subexpr = subexpr
        super().__init__(f"{message} in '{to_string(subexpr)}'")


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float
    name: str | None = None  # 'pi' keeps its symbolic spelling when printed


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class ScalarExpr:
    """Parsed expression together with the name of its free variable."""

    root: Node
    var: str = "r"

    def __call__(self, t):
        if isinstance(t, np.ndarray):
            return evaluate_array(self, t)
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_string(self)


# --- tokenizer and parser ----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.var: str | None = None

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.peek()
        if val != value or kind != "op":
            raise ParseError(f"unexpected {val!r}" if kind != "eof" else "unexpected end of input",
                             pos, frozenset({value}))
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r}", pos, frozenset({"+", "-", "*", "/", "^", "end of input"}))
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(float(val))
        if kind == "ident":
            if val == "pi":
                return Const(math.pi, "pi")
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in VARIABLES:
                if self.var is not None and self.var != val:
                    raise ParseError(f"second free variable {val!r} (already using {self.var!r})", pos)
                self.var = val
                return Var(val)
            raise ParseError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "unexpected end of input" if kind == "eof" else f"unexpected {val!r}"
        raise ParseError(what, pos, frozenset({"number", "identifier", "("}))


def parse(text: str) -> ScalarExpr:
    if not text or not text.strip():
        raise ParseError("empty expression", 0, frozenset({"number", "identifier", "("}))
    p = _Parser(text)
    root = p.parse()
    return ScalarExpr(root, p.var or "r")


def constant(value: float) -> ScalarExpr:
    return ScalarExpr(Const(float(value)))


# --- printing --------------------------------------------------------------

def _fmt_const(c: Const) -> str:
    if c.name:
        return c.name
    s = repr(float(c.value))
    return f"({s})" if c.value < 0 else s


def _print(node: Node) -> str:
    if isinstance(node, Const):
        return _fmt_const(node)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_print(node.arg)})"
    if isinstance(node, BinOp):
        return f"({_print(node.left)} {node.op} {_print(node.right)})"
    return f"{node.func}({_print(node.arg)})"


def to_string(e: ScalarExpr | Node) -> str:
    """Fully parenthesised rendering; ``parse(to_string(e))`` evaluates like ``e``."""
    return _print(e.root if isinstance(e, ScalarExpr) else e)


# --- scalar evaluation -----------------------------------------------------

def _call_scalar(node: Call, x: float) -> float:
    f = node.func
    if f == "log":
        if x <= 0.0:
            raise DomainError(f"log of non-positive value {x!r}", node)
        return math.log(x)
    if f == "sqrt":
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}", node)
        return math.sqrt(x)
    if f == "abs":
        return abs(x)
    try:
        return getattr(math, f)(x)
    except OverflowError:
        return math.inf


def _eval(node: Node, t: float) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return -_eval(node.arg, t)
    if isinstance(node, Call):
        return _call_scalar(node, _eval(node.arg, t))
    a = _eval(node.left, t)
    b = _eval(node.right, t)
    op = node.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise DomainError("division by zero", node)
        return a / b
    if a == 0.0 and b < 0.0:
        raise DomainError("zero raised to a negative power", node)
    if a < 0.0 and not float(b).is_integer():
        raise DomainError("negative base with non-integer exponent", node)
    try:
        return math.pow(a, b)
    except OverflowError:
        return math.inf if a > 0 or float(b) % 2 == 0 else -math.inf


def evaluate(e: ScalarExpr, t: float) -> float:
    return float(_eval(e.root, float(t)))


# --- vectorised evaluation ---------------------------------------------------

_NP_FUNCS = {
    "sin": np.sin, "cos": np.cos, "sinh": np.sinh, "cosh": np.cosh,
    "exp": np.exp, "log": np.log, "sqrt": np.sqrt, "abs": np.abs,
}


def _eval_np(node: Node, t: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full_like(t, node.value)
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return -_eval_np(node.arg, t)
    if isinstance(node, Call):
        x = _eval_np(node.arg, t)
        if node.func == "log" and np.any(x <= 0.0):
            raise DomainError(f"log of non-positive value {x[x <= 0.0][0]!r}", node)
        if node.func == "sqrt" and np.any(x < 0.0):
            raise DomainError(f"sqrt of negative value {x[x < 0.0][0]!r}", node)
        return _NP_FUNCS[node.func](x)
    a = _eval_np(node.left, t)
    b = _eval_np(node.right, t)
    op = node.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if np.any(b == 0.0):
            raise DomainError("division by zero", node)
        return a / b
    if np.any((a == 0.0) & (b < 0.0)):
        raise DomainError("zero raised to a negative power", node)
    if np.any((a < 0.0) & (b != np.floor(b))):
        raise DomainError("negative base with non-integer exponent", node)
    return np.power(a, b)


def evaluate_array(e: ScalarExpr, t) -> np.ndarray:
    """Evaluate ``e`` at every point of ``t``; domain errors are reported like :func:`evaluate`."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval_np(e.root, t)
    return np.broadcast_to(out, t.shape).astype(float, copy=True)


# --- differentiation ---------------------------------------------------------
# Smart constructors fold constants and drop neutral elements; the derivative is
# only required to evaluate correctly, so this is kept deliberately shallow.

ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(n: Node, v: float | None = None) -> bool:
    return isinstance(n, Const) and (v is None or n.value == v)


def _has_var(n: Node) -> bool:
    if isinstance(n, Var):
        return True
    if isinstance(n, Const):
        return False
    if isinstance(n, (Neg, Call)):
        return _has_var(n.arg)
    return _has_var(n.left) or _has_var(n.right)


def _neg(a: Node) -> Node:
    if isinstance(a, Const) and a.name is None:
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _add(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    return BinOp("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and a.name is None and b.name is None:
        return Const(a.value * b.value)
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return BinOp("/", a, b)


def _pow(a: Node, b: Node) -> Node:
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return ONE
    return BinOp("^", a, b)


def _d(n: Node) -> Node:
    if isinstance(n, (Const,)):
        return ZERO
    if isinstance(n, Var):
        return ONE
    if isinstance(n, Neg):
        return _neg(_d(n.arg))
    if isinstance(n, Call):
        u = n.arg
        du = _d(u)
        if _is_const(du, 0.0):
            return ZERO
        f = n.func
        if f == "sin":
            outer = Call("cos", u)
        elif f == "cos":
            outer = _neg(Call("sin", u))
        elif f == "sinh":
            outer = Call("cosh", u)
        elif f == "cosh":
            outer = Call("sinh", u)
        elif f == "exp":
            outer = n
        elif f == "log":
            return _div(du, u)
        elif f == "sqrt":
            return _div(du, _mul(Const(2.0), n))
        else:  # abs: sign(u) = u / abs(u), undefined at u = 0
            outer = _div(u, n)
        return _mul(outer, du)
    a, b = n.left, n.right
    op = n.op
    if op == "+":
        return _add(_d(a), _d(b))
    if op == "-":
        return _sub(_d(a), _d(b))
    if op == "*":
        return _add(_mul(_d(a), b), _mul(a, _d(b)))
    if op == "/":
        return _div(_sub(_mul(_d(a), b), _mul(a, _d(b))), _pow(b, Const(2.0)))
    # power
    if not _has_var(b):
        exponent = Const(b.value - 1.0) if isinstance(b, Const) and b.name is None else _sub(b, ONE)
        return _mul(_mul(b, _pow(a, exponent)), _d(a))
    if not _has_var(a):
        return _mul(_mul(n, Call("log", a)), _d(b))
    return _mul(n, _add(_mul(_d(b), Call("log", a)), _div(_mul(b, _d(a)), a)))


def differentiate(e: ScalarExpr) -> ScalarExpr:
    return ScalarExpr(_d(e.root), e.var)


def is_constant(e: ScalarExpr) -> bool:
    return not _has_var(e.root)
