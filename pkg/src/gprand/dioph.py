"""Continued fractions, distance to the nearest integer, and empirical
Diophantine-type diagnostics.

Quadratic surds (p + q*sqrt(d))/r are handled exactly; anything else is
evaluated as a certified dyadic ball.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, PrecisionExhausted, RationalRelation
from .exactreal import DEFAULT_PRECISION, MAX_PRECISION, DyadicBall, mul, precision_ladder, sqrt_int
from .genpoly import Add, Const, Floor, Node, Var, compile_expr, parse


# quadratic surds --------------------------------------------------------


@dataclass(frozen=True)
class QuadraticSurd:
    """(p + q*sqrt(d)) / r with r > 0, d > 1 square-free and q != 0."""

    p: int
    q: int
    d: int
    r: int = 1

    @classmethod
    def make(cls, p, q, d, r=1):
        """Normalised surd, or a Fraction when the irrational part vanishes."""
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        s, d = _square_split(d)
        q *= s
        if q == 0 or d == 1:
            return Fraction(p + q, r) if d == 1 else Fraction(p, r)
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        return cls(p // g, q // g, d, r // g)

    def floor(self) -> int:
        root = math.isqrt(self.q * self.q * self.d)
        fl = root if self.q > 0 else -root - 1
        return (self.p + fl) // self.r

    def ball(self, prec: int = DEFAULT_PRECISION) -> DyadicBall:
        num = DyadicBall(self.p) + mul(DyadicBall(self.q), sqrt_int(self.d, prec + 8))
        return mul(num, DyadicBall.from_fraction(Fraction(1, self.r), prec + 8), prec)

    def __float__(self):
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def sub_int(self, a: int):
        return QuadraticSurd.make(self.p - a * self.r, self.q, self.d, self.r)

    def reciprocal(self):
        P, Q = self.p, self.q
        return QuadraticSurd.make(self.r * P, -self.r * Q, self.d, P * P - Q * Q * self.d)

    def lt(self, c: Fraction) -> bool:
        """Exact test self < c."""
        # (p + q sqrt d)/r < c  <=>  q sqrt d < c r - p
        rhs = Fraction(c) * self.r - self.p
        lhs_sign = 1 if self.q > 0 else -1
        if lhs_sign > 0:
            return rhs > 0 and self.q * self.q * self.d < rhs * rhs
        return rhs >= 0 or self.q * self.q * self.d > rhs * rhs


def _square_split(d: int):
    """d = s^2 * k with k square-free; returns (s, k)."""
    if d < 0:
        raise DomainError("negative radicand")
    if d in (0, 1):
        return (d, 1)
    s, k = 1, d
    f = 2
    while f * f <= k:
        while k % (f * f) == 0:
            k //= f * f
            s *= f
        f += 1
    return s, k


def _surd_add(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x + y
    if isinstance(x, Fraction):
        x, y = y, x
    if isinstance(y, Fraction):
        return QuadraticSurd.make(x.p * y.denominator + y.numerator * x.r, x.q * y.denominator, x.d, x.r * y.denominator)
    if x.d != y.d:
        return None
    return QuadraticSurd.make(x.p * y.r + y.p * x.r, x.q * y.r + y.q * x.r, x.d, x.r * y.r)


def _surd_mul(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x * y
    if isinstance(x, Fraction):
        x, y = y, x
    if isinstance(y, Fraction):
        return QuadraticSurd.make(x.p * y.numerator, x.q * y.numerator, x.d, x.r * y.denominator)
    if x.d != y.d:
        return None
    return QuadraticSurd.make(x.p * y.p + x.q * y.q * x.d, x.p * y.q + x.q * y.p, x.d, x.r * y.r)


def to_surd(node: Node):
    """Exact Fraction or QuadraticSurd for a constant expression, or None if it is neither."""
    if isinstance(node, Const):
        if node.kind == "rat":
            return node.value
        if node.kind == "sqrt":
            return QuadraticSurd.make(0, 1, node.value, 1)
        return None
    if isinstance(node, (Var, Floor)):
        return None
    x, y = to_surd(node.left), to_surd(node.right)
    if x is None or y is None:
        return None
    return _surd_add(x, y) if isinstance(node, Add) else _surd_mul(x, y)


# real inputs ------------------------------------------------------------


class _Real:
    """A real constant that is either an exact Fraction or refinable to any precision."""

    def __init__(self, value):
        self.exact = None
        self.surd = None
        self._ball = None
        self._expr = None
        if isinstance(value, str):
            value = parse(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a real input")
        if isinstance(value, (int, Fraction)):
            self.exact = Fraction(value)
        elif isinstance(value, float):
            self.exact = Fraction(value)
        elif isinstance(value, QuadraticSurd):
            self.surd = value
        elif isinstance(value, DyadicBall):
            self._ball = value
        elif isinstance(value, Node):
            if value.has_var:
                raise DomainError("expected a constant expression")
            s = to_surd(value)
            if isinstance(s, Fraction):
                self.exact = s
            elif s is not None:
                self.surd = s
            else:
                self._expr = value
        else:
            raise TypeError(f"unsupported real input {value!r}")

    def ball(self, prec: int) -> DyadicBall:
        if self.exact is not None:
            return DyadicBall.from_fraction(self.exact, prec)
        if self.surd is not None:
            return self.surd.ball(prec)
        if self._ball is not None:
            return self._ball
        return compile_expr(self._expr, prec)(1)

    @property
    def refinable(self) -> bool:
        return self._ball is None


def nearest_int_dist(x) -> float:
    """||x||: distance from x to the nearest integer."""
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        f = q - math.floor(q)
        return float(min(f, 1 - f))
    x = float(x)
    return abs(x - round(x))


def _multiples(x: _Real, ks, prec: int = DEFAULT_PRECISION):
    """For each integer k: ({k x} as float, ||k x|| as float, certified-zero flag)."""
    ks = [int(k) for k in ks]
    if x.exact is not None:
        fr = [(k * x.exact) % 1 for k in ks]
        fracs = np.array([float(f) for f in fr])
        dists = np.array([float(min(f, 1 - f)) for f in fr])
        return fracs, dists, np.array([f == 0 for f in fr])
    for p in precision_ladder(prec, MAX_PRECISION):
        b = x.ball(p + max(ks, key=abs, default=1).bit_length() + 8)
        one = 1 << b.scale
        fracs, dists, zero = [], [], []
        ok = True
        for k in ks:
            t = (k * b.mantissa) & (one - 1)
            rad = abs(k) * b.radius
            dist = min(t, one - t)
            if dist <= rad:
                if x.refinable:
                    ok = False
                    break
                zero.append(True)
                fracs.append(0.0)
                dists.append(0.0)
                continue
            zero.append(False)
            fracs.append(min(t / one, float(np.nextafter(1.0, 0.0))))
            dists.append(dist / one)
        if ok:
            return np.array(fracs), np.array(dists), np.array(zero, dtype=bool)
    raise PrecisionExhausted("multiples undecided at the precision cap")


# continued fractions ----------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    a0: int
    partial_quotients: tuple
    exact_input: bool

    def terms(self):
        return (self.a0,) + tuple(self.partial_quotients)

    def convergents(self):
        """(p_k, q_k) for k = 0, 1, ..."""
        p0, q0, p1, q1 = 1, 0, self.a0, 1
        out = [(p1, q1)]
        for a in self.partial_quotients:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return out

    def __str__(self):
        return f"[{self.a0}; " + ", ".join(map(str, self.partial_quotients)) + "]"


def _cf_rational(q: Fraction, count: int):
    out = []
    while len(out) < count:
        a = math.floor(q)
        out.append(a)
        q -= a
        if q == 0:
            break
        q = 1 / q
    return out


def _cf_interval(lo: Fraction, hi: Fraction, count: int):
    """Quotients shared by every real in [lo, hi]."""
    out = []
    while len(out) < count:
        a, b = math.floor(lo), math.floor(hi)
        if a != b:
            break
        out.append(a)
        lo, hi = lo - a, hi - a
        if lo == 0 or hi == 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return out


def continued_fraction(x, count: int, precision_bits: int = DEFAULT_PRECISION) -> CFExpansion:
    """First ``count`` terms a0, a1, ... (a0 included) of the expansion of x."""
    if count < 1:
        raise DomainError("count must be >= 1")
    src = _Real(x)
    if src.exact is not None:
        terms = _cf_rational(src.exact, count)
        return CFExpansion(terms[0], tuple(terms[1:]), True)
    if src.surd is not None:
        s = src.surd
        terms = []
        for _ in range(count):
            a = s.floor()
            terms.append(a)
            s = s.sub_int(a).reciprocal()
        return CFExpansion(terms[0], tuple(terms[1:]), True)
    for p in precision_ladder(precision_bits, MAX_PRECISION):
        b = src.ball(p)
        terms = _cf_interval(b.lower(), b.upper(), count)
        if len(terms) >= count:
            return CFExpansion(terms[0], tuple(terms[1:]), False)
        if not src.refinable:
            break
    raise PrecisionExhausted(f"only {len(terms)} of {count} quotients certified")


def convergent_bounds_hold(x, cf: CFExpansion, precision_bits: int = 1024) -> list[bool]:
    """|x - p_k/q_k| < 1/(q_k q_{k+1}) for each consecutive pair of convergents."""
    src = _Real(x)
    conv = cf.convergents()
    out = []
    for (p, q), (_, q1) in zip(conv, conv[1:]):
        c = Fraction(p, q)
        tol = Fraction(1, q * q1)
        if src.exact is not None:
            out.append(abs(src.exact - c) < tol)
        elif src.surd is not None:
            s = src.surd
            out.append(s.lt(c + tol) and not s.lt(c - tol))  # s irrational, never equal
        else:
            b = src.ball(precision_bits)
            out.append(b.lower() > c - tol and b.upper() < c + tol)
    return out


# finite type ------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTypeEstimate:
    """Empirical Diophantine type over the box ||n||_inf <= q.

    ``t_hat`` = log(1/m) / log(q^s), where m is the smallest ||n . gamma|| in the
    box; ``t_sup`` is the largest single-vector ratio log(1/||n . gamma||)/log(prod max(1,|n_j|)).
    Both are lower-bound diagnostics, not proofs.
    """

    t_hat: float
    q: int
    witness: tuple
    c_hat: float
    t_sup: float = float("nan")
    t_sup_witness: tuple = field(default=())
    min_dist: float = float("nan")

    def to_dict(self):
        return {"tHat": self.t_hat, "q": self.q, "witness": list(self.witness), "cHat": self.c_hat,
                "tSup": self.t_sup, "tSupWitness": list(self.t_sup_witness), "minDist": self.min_dist}


def _half_box(s: int, q: int):
    """Nonzero vectors in [-q, q]^s with first nonzero coordinate positive (one per ± pair)."""
    rng = range(-q, q + 1)
    for v in itertools.product(rng, repeat=s):
        for c in v:
            if c:
                if c > 0:
                    yield v
                break


def type_probe(gammas, q: int, precision_bits: int = DEFAULT_PRECISION) -> FiniteTypeEstimate:
    srcs = [_Real(g) for g in gammas]
    s = len(srcs)
    if s < 1 or q < 1:
        raise DomainError("need at least one gamma and q >= 1")
    prec = max(precision_bits, 256) + s * q.bit_length() + 16
    balls = [src.ball(prec) for src in srcs]
    scale = max(b.scale for b in balls)
    mant = [b.mantissa << (scale - b.scale) for b in balls]
    rad = [b.radius << (scale - b.scale) for b in balls]
    one = 1 << scale
    exact = all(src.exact is not None for src in srcs)

    records = []  # (dist_float, prod, vector)
    for v in _half_box(s, q):
        L = sum(n * m for n, m in zip(v, mant))
        R = sum(abs(n) * r for n, r in zip(v, rad))
        t = L & (one - 1)
        dist = min(t, one - t)
        if dist <= R:
            what = "integer relation" if exact or R == 0 else "relation not excluded at working precision"
            raise RationalRelation(what, v)
        prod = math.prod(max(1, abs(n)) for n in v)
        records.append((dist / one, prod, v))

    m, _, wit = min(records, key=lambda rec: (rec[0], rec[1]))
    t_hat = math.log(1.0 / m) / (s * math.log(q)) if q > 1 else float("nan")
    ratios = [(math.log(1.0 / d) / math.log(p), v) for d, p, v in records if p >= 2]
    t_sup, sup_wit = max(ratios, key=lambda rv: rv[0]) if ratios else (float("nan"), ())
    c_hat = min(p ** t_hat * d for d, p, _ in records) if math.isfinite(t_hat) else float("nan")
    return FiniteTypeEstimate(t_hat, q, tuple(wit), c_hat, t_sup, tuple(sup_wit), m)


# n-theta discrepancy and sums of minima --------------------------------


@dataclass(frozen=True)
class RatioReport:
    lhs: float
    rhs: float
    c_ratio: float

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "cRatio": self.c_ratio}


@dataclass(frozen=True)
class NThetaReport:
    rhs: float
    exact_d: float
    c_ratio: float

    def to_dict(self):
        return {"rhs": self.rhs, "exactD": self.exact_d, "cRatio": self.c_ratio}


def ntheta_discrepancy_bound(theta, L: int, J: int, precision_bits: int = DEFAULT_PRECISION) -> NThetaReport:
    """Exact D_L of ({l theta}) against 1/J + (1/L) sum_{j<=J} 1/(j ||j theta||)."""
    from .measures import discrepancy

    if L < 1 or J < 1:
        raise DomainError("L and J must be >= 1")
    src = _Real(theta)
    _, dj, zj = _multiples(src, range(1, J + 1), precision_bits)
    if zj.any():
        j = int(np.argmax(zj)) + 1
        raise RationalRelation("||j theta|| = 0", (j,))
    rhs = 1.0 / J + float(np.sum(1.0 / (np.arange(1, J + 1) * dj))) / L
    fr, _, _ = _multiples(src, range(1, L + 1), precision_bits)
    d = discrepancy(fr).d
    return NThetaReport(rhs, d, d / rhs)


def sum_of_minima(xi, L: int, N: int, precision_bits: int = DEFAULT_PRECISION) -> RatioReport:
    """sum_{l<=L} min(N, 1/||l xi||) against L log N (1 + N D_L(l xi)); ||l xi|| = 0 contributes N."""
    from .measures import discrepancy

    if L < 2 or N < 2:
        raise DomainError("L and N must be >= 2")
    src = _Real(xi)
    fr, dist, zero = _multiples(src, range(1, L + 1), precision_bits)
    if zero.all():
        raise RationalRelation("every multiple of xi is an integer", (1,))
    safe = np.where(zero, 1.0, dist)
    terms = np.where(zero, float(N), np.minimum(float(N), 1.0 / safe))
    lhs = math.fsum(terms)
    d = discrepancy(fr).d
    rhs = L * math.log(N) * (1.0 + N * d)
    return RatioReport(lhs, rhs, lhs / rhs)
