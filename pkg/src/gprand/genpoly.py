"""Generalized polynomials: expression trees built from constants, ``x``, ``+``,
``*`` and ``floor``, with a small text grammar and certified evaluation.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := number ('/' number)? | 'x' | 'pi' | 'sqrt' '(' uint ')'
            | 'floor' '(' expr ')' | '(' expr ')'

``a - b`` is stored as ``Add(a, Mul(Const(-1), b))`` and ``v^k`` as a
left-nested product of ``k`` copies of ``v``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import GPSyntaxError, NotTheoremShape, PrecisionExhausted, StraddlesInteger
from .exactreal import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    DyadicBall,
    add,
    floor_certified,
    mul,
    pi_ball,
    precision_ladder,
    sqrt_int,
)

MAX_POWER = 64


# tree -------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    floor_depth: int = field(init=False, compare=False, repr=False)
    growth_degree: int = field(init=False, compare=False, repr=False)

    def _meta(self, depth, degree):
        object.__setattr__(self, "floor_depth", depth)
        object.__setattr__(self, "growth_degree", degree)

    @property
    def has_var(self) -> bool:
        return self.growth_degree > 0

    def children(self):
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Node):
    """A symbolic constant: ``kind`` is 'rat' (value: Fraction), 'sqrt' (value: int) or 'pi'."""

    kind: str = "rat"
    value: object = Fraction(0)

    def __post_init__(self):
        if self.kind == "rat":
            object.__setattr__(self, "value", Fraction(self.value))
        self._meta(0, 0)


@dataclass(frozen=True)
class Var(Node):
    def __post_init__(self):
        self._meta(0, 1)


@dataclass(frozen=True)
class Add(Node):
    left: Node = None
    right: Node = None

    def __post_init__(self):
        self._meta(max(self.left.floor_depth, self.right.floor_depth),
                   max(self.left.growth_degree, self.right.growth_degree))

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Mul(Node):
    left: Node = None
    right: Node = None

    def __post_init__(self):
        self._meta(max(self.left.floor_depth, self.right.floor_depth),
                   self.left.growth_degree + self.right.growth_degree)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Floor(Node):
    child: Node = None

    def __post_init__(self):
        self._meta(self.child.floor_depth + 1, self.child.growth_degree)

    def children(self):
        return (self.child,)


def rational(q) -> Const:
    return Const("rat", Fraction(q))


MINUS_ONE = rational(-1)


# parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*^/()]))")
_START = ("number", "'x'", "'pi'", "'sqrt'", "'floor'", "'('")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, offset)
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                rest = text[pos:]
                if rest.strip():
                    bad = pos + len(rest) - len(rest.lstrip())
                    raise GPSyntaxError(f"unexpected character {text[bad]!r}", len(text[:bad].encode()), _START)
                break
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), len(text[:start].encode())))
            pos = m.end()
        self.end = len(text.encode())
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected, tok=None):
        kind, value, off = tok or self.peek()
        what = "end of input" if kind == "eof" else f"token {value!r}"
        raise GPSyntaxError(f"unexpected {what}", off, expected)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.fail((f"'{op}'",))
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs if op == "+" else Mul(MINUS_ONE, rhs))
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = Mul(node, self.factor())
        return node

    def uint(self):
        tok = self.peek()
        if tok[0] != "num" or "." in tok[1]:
            self.fail(("unsigned integer",))
        self.take()
        return int(tok[1]), tok[2]

    def factor(self):
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k, off = self.uint()
            if k > MAX_POWER:
                raise GPSyntaxError(f"exponent {k} exceeds cap {MAX_POWER}", off, ())
            if k == 0:
                return rational(1)
            out = node
            for _ in range(k - 1):
                out = Mul(out, node)
            node = out
        return node

    def base(self):
        tok = self.peek()
        kind, value, _ = tok
        if kind == "num":
            self.take()
            q = Fraction(value)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "num":
                    self.fail(("number",))
                self.take()
                den = Fraction(den_tok[1])
                if den == 0:
                    raise GPSyntaxError("zero denominator", den_tok[2], ())
                q /= den
            return rational(q)
        if kind == "name":
            if value == "x":
                self.take()
                return Var()
            if value == "pi":
                self.take()
                return Const("pi", None)
            if value == "sqrt":
                self.take()
                self.expect_op("(")
                k, _ = self.uint()
                self.expect_op(")")
                return Const("sqrt", k)
            if value == "floor":
                self.take()
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return Floor(inner)
            self.fail(_START)
        if kind == "op" and value == "(":
            self.take()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self.fail(_START)


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "eof":
        p.fail(("'+'", "'-'", "'*'", "'^'", "end of input"))
    return node


# printing ---------------------------------------------------------------


def _const_text(c: Const) -> str:
    if c.kind == "pi":
        return "pi"
    if c.kind == "sqrt":
        return f"sqrt({c.value})"
    q = c.value
    if q < 0:
        body = _const_text(rational(-q))
        return f"(0 - {body})"
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _is_negation(node) -> bool:
    return isinstance(node, Mul) and node.left == MINUS_ONE


def to_text(node: Node) -> str:
    if isinstance(node, Const):
        return _const_text(node)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Floor):
        return f"floor({to_text(node.child)})"
    if isinstance(node, Add):
        if _is_negation(node.right):
            r = node.right.right
            rt = f"({to_text(r)})" if isinstance(r, Add) else to_text(r)
            return f"{to_text(node.left)} - {rt}"
        rt = f"({to_text(node.right)})" if isinstance(node.right, Add) else to_text(node.right)
        return f"{to_text(node.left)} + {rt}"
    if isinstance(node, Mul):
        lt = to_text(node.left)
        if isinstance(node.left, Add) or (isinstance(node.left, Const) and lt.startswith("(")):
            lt = f"({lt})"
        rt = to_text(node.right)
        if isinstance(node.right, (Add, Mul)):
            rt = f"({rt})"
        return f"{lt}*{rt}"
    raise TypeError(node)


# evaluation -------------------------------------------------------------


def const_ball(c: Const, prec: int) -> DyadicBall:
    if c.kind == "rat":
        return DyadicBall.from_fraction(c.value, prec)
    if c.kind == "sqrt":
        return sqrt_int(c.value, prec)
    if c.kind == "pi":
        return pi_ball(prec)
    raise ValueError(c.kind)


class _FloorStraddle(StraddlesInteger):
    def __init__(self, node, exc):
        super().__init__(str(exc))
        self.node = node


def _build(node: Node, prec: int):
    if isinstance(node, Const):
        b = const_ball(node, prec)
        return lambda n: b
    if isinstance(node, Var):
        return DyadicBall
    if isinstance(node, Add):
        f, g = _build(node.left, prec), _build(node.right, prec)
        return lambda n: add(f(n), g(n))
    if isinstance(node, Mul):
        f, g = _build(node.left, prec), _build(node.right, prec)
        return lambda n: mul(f(n), g(n), prec)
    if isinstance(node, Floor):
        f = _build(node.child, prec)

        def floor_fn(n):
            b = f(n)
            try:
                return DyadicBall(floor_certified(b))
            except StraddlesInteger as exc:
                raise _FloorStraddle(node, exc) from None

        return floor_fn
    raise TypeError(node)


@lru_cache(maxsize=256)
def compile_expr(expr: Node, prec: int):
    """Return ``n -> DyadicBall`` at fixed working precision; raises StraddlesInteger on an undecided floor."""
    return _build(expr, prec)


def evaluate(expr: Node, n: int, precision_bits: int = DEFAULT_PRECISION) -> DyadicBall:
    if n < 1:
        raise ValueError("n must be >= 1")
    last = None
    for prec in precision_ladder(precision_bits, MAX_PRECISION):
        try:
            return compile_expr(expr, prec)(n)
        except StraddlesInteger as exc:
            last = exc
    node = getattr(last, "node", None)
    where = to_text(node) if node is not None else "?"
    raise PrecisionExhausted(f"floor({where}) undecided at n={n} with {MAX_PRECISION} bits", node=node, index=n)


def constant_ball(expr: Node, prec: int = DEFAULT_PRECISION) -> DyadicBall:
    """Certified ball for a variable-free expression."""
    if expr.has_var:
        raise ValueError(f"{to_text(expr)} depends on x")
    return evaluate(expr, 1, prec) if expr.floor_depth else compile_expr(expr, prec)(1)


# theorem shape ----------------------------------------------------------


@dataclass(frozen=True)
class TheoremInstance:
    """``f(x) = beta * floor(alpha1 * floor(alpha2 * p(x)))`` with ``p`` monic of degree ``d``."""

    p: tuple  # coefficients low -> high, as text
    alpha1: Node
    alpha2: Node
    beta: Node
    d: int
    poly: Node

    def triple(self):
        """The vector (alpha2, alpha1*alpha2, alpha1*alpha2*beta) whose finite type the theorem assumes."""
        a12 = Mul(self.alpha1, self.alpha2)
        return (self.alpha2, a12, Mul(a12, self.beta))


def _factors(node):
    if isinstance(node, Mul):
        return _factors(node.left) + _factors(node.right)
    return [node]


def _product(nodes):
    if not nodes:
        return rational(1)
    out = nodes[0]
    for n in nodes[1:]:
        out = Mul(out, n)
    return out


def _split(node):
    fs = _factors(node)
    consts = [f for f in fs if not f.has_var and f.floor_depth == 0]
    rest = [f for f in fs if f.has_var or f.floor_depth]
    return _product(consts), rest


def to_sympy(node: Node):
    import sympy

    if isinstance(node, Const):
        if node.kind == "rat":
            return sympy.Rational(node.value.numerator, node.value.denominator)
        if node.kind == "sqrt":
            return sympy.sqrt(node.value)
        return sympy.pi
    if isinstance(node, Var):
        return sympy.Symbol("x")
    if isinstance(node, Add):
        return to_sympy(node.left) + to_sympy(node.right)
    if isinstance(node, Mul):
        return to_sympy(node.left) * to_sympy(node.right)
    return sympy.floor(to_sympy(node.child))


def recognize_theorem_shape(expr: Node) -> TheoremInstance:
    import sympy

    beta, rest = _split(expr)
    if len(rest) != 1 or not isinstance(rest[0], Floor):
        raise NotTheoremShape("wrong nesting: expected const*floor(const*floor(const*p(x)))")
    alpha1, rest = _split(rest[0].child)
    if len(rest) != 1 or not isinstance(rest[0], Floor):
        raise NotTheoremShape("wrong nesting: expected exactly two nested floors")
    alpha2, rest = _split(rest[0].child)
    poly = _product(rest)
    if not rest or poly.floor_depth:
        raise NotTheoremShape("wrong nesting: innermost argument must be const*p(x) without floors")
    x = sympy.Symbol("x")
    P = sympy.Poly(sympy.expand(to_sympy(poly)), x)
    d = P.degree()
    if d < 2:
        raise NotTheoremShape(f"degree {d} < 2")
    if sympy.simplify(P.LC() - 1) != 0:
        raise NotTheoremShape(f"non-monic: leading coefficient {P.LC()}")
    coeffs = tuple(str(c) for c in reversed(P.all_coeffs()))
    return TheoremInstance(coeffs, alpha1, alpha2, beta, d, poly)
