"""Exact exponent calculators, the differencing and linear-sum verifiers, and
the empirical W(E_N) scan.

All exponents are Fractions.  ``nExp`` is the decay exponent of N (a bound
N^(-nExp)); ``aExp`` is the growth exponent of the progression step a.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NotTheoremShape
from .exactreal import DEFAULT_PRECISION
from .genpoly import Node, parse, recognize_theorem_shape


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check(d, t):
    t = _q(t)
    if int(d) != d or d < 2:
        raise DomainError(f"need an integer degree d >= 2, got {d}")
    if t <= 0:
        raise DomainError(f"need t > 0, got {t}")
    return int(d), t


def _gain(d) -> Fraction:
    """2 - 2^(2-d), the power saving carried through every estimate."""
    return 2 - Fraction(2) ** (2 - d)


def fmt_q(x) -> str:
    """Rational as 'p/q' (or 'p' when integral)."""
    x = _q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ExponentSet:
    d: int
    t: Fraction
    a_exp: Fraction
    n_exp: Fraction
    precond_a_exp: Fraction | None = None
    eta_candidate: Fraction | None = None
    threshold_exp: Fraction | None = None

    def bound(self, a, N) -> float:
        """a^aExp * N^(-nExp) as a float (constants and epsilons dropped)."""
        return float(a) ** float(self.a_exp) * float(N) ** (-float(self.n_exp))

    def to_dict(self):
        out = {"d": self.d, "t": fmt_q(self.t), "aExp": fmt_q(self.a_exp), "nExp": fmt_q(self.n_exp)}
        for key, val in (("precondAExp", self.precond_a_exp), ("etaCandidate", self.eta_candidate),
                         ("thresholdExp", self.threshold_exp)):
            if val is not None:
                out[key] = fmt_q(val)
        return out


def key_lemma_exponents(d, t, s=1) -> tuple[Fraction, Fraction]:
    """(exponent of a^{sd}|k_1...k_s|, exponent of N) in the bound for the s-fold sum."""
    d, t = _check(d, t)
    if int(s) != s or s < 1:
        raise DomainError("need s >= 1")
    st1 = s * t + 1
    return t / st1, Fraction(2) ** (d - 1) - _gain(d) / st1


def prop1_exponents(d, t) -> ExponentSet:
    d, t = _check(d, t)
    p = Fraction(2) ** (d - 1)
    return ExponentSet(d, t, d * t / (p * (t + 1) + t), _gain(d) / (p * (2 * t + 1) + t),
                       precond_a_exp=_gain(d) / (d * t))


def prop1_precondition(d, t, a, N) -> bool:
    """True when a <= N^((2 - 2^(2-d))/(d t)); decided exactly via a^(d t q) vs N^(g q)."""
    d, t = _check(d, t)
    e = _gain(d) / (d * t)
    if a < 1 or N < 1:
        raise DomainError("need a, N >= 1")
    # a <= N^(num/den)  <=>  a^den <= N^num
    return int(a) ** e.denominator <= int(N) ** e.numerator


def prop2_exponents(d, t) -> ExponentSet:
    d, t = _check(d, t)
    p = Fraction(2) ** (d - 1)
    return ExponentSet(d, t, 2 * d * t / (p * (2 * t + 1) + 4 * t + 1),
                       _gain(d) / (p * (2 * t + 1) + 7 * t + 2))


def prop3_exponents(d, t) -> ExponentSet:
    d, t = _check(d, t)
    p = Fraction(2) ** (d - 1)
    u = 3 * t + 1
    n_exp = _gain(d) * p * u / ((p * u + 21 * t + 5) * (2 * p * u + 4 * t + 1))
    return ExponentSet(d, t, 3 * d * t / (2 * p * u + 5 * t + 1), n_exp,
                       threshold_exp=threshold_exponent(d, t))


def threshold_exponent(d, t) -> Fraction:
    """Cut-off exponent for the step a: progressions with a > N^c are handled trivially."""
    d, t = _check(d, t)
    return Fraction(1, 1) / (Fraction(2) ** d * (3 * t + 1) + 21 * t + 5) ** 2


def theorem_eta(d, t) -> ExponentSet:
    """Candidate eta with W(E_N) << N^(1 - eta + eps).

    Composition (our own): for a > N^c the run has M <= N^(1-c) terms, so
    |U| <= N^(1-c).  For a <= N^c, |U| <= 2 M D_M with M ~ N/a and
    D_M << a^A M^(-B) (A, B from the third calculator), giving
    N^(1-B) a^(A+B-1) <= N^(1 - B + c max(0, A+B-1)).  Hence
    eta = min(c, B - c max(0, A+B-1)).
    """
    p3 = prop3_exponents(d, t)
    c = p3.threshold_exp
    eta1 = p3.n_exp - c * max(Fraction(0), p3.a_exp + p3.n_exp - 1)
    return ExponentSet(p3.d, p3.t, p3.a_exp, p3.n_exp, eta_candidate=min(c, eta1), threshold_exp=c)


def cap_warning(d, t, a, N) -> bool:
    """Warn (and return True) when a exceeds the first calculator's cap N^((2-2^(2-d))/(dt))."""
    if not prop1_precondition(d, t, a, N):
        warnings.warn(f"a={a} exceeds N^((2-2^(2-d))/(dt)) for N={N}; no explicit cap is stated for "
                      "the second and third bounds", stacklevel=2)
        return True
    return False


def proof_parameters(d, t, N, a=1, h=1, k=1, k1=1, s=1, eps=Fraction(1, 10)) -> dict:
    """Internal parameter choices made in the proofs, evaluated numerically for inspection."""
    d, t = _check(d, t)
    eps = _q(eps)
    g = _gain(d)
    p = Fraction(2) ** (d - 1)
    st1 = s * t + 1
    L = float(N) ** float(g)
    J = float(a) ** float(-d * s * t / st1) * abs(k) ** float(-t / st1) * L ** float(1 / st1)

    H1 = math.ceil(float(N) ** float(g / (p * (2 * t + 1))) * float(a) ** float(d * t / (p * (2 * t + 1) + t)))

    theta = g / (p * (2 * t + 1) + 7 * t + 2)
    sigma2 = 2 * d * t / (p * (2 * t + 1) + 4 * t + 1)
    rho = 1 + eps
    Nf, af = float(N), float(a)

    u = 3 * t + 1
    theta2 = g / (p * u + 4 * t + 1)
    theta1 = prop3_exponents(d, t).n_exp
    sigma3 = 3 * d * t / (2 * p * u + 5 * t + 1)
    hk = abs(h * k1)
    return {
        "keyLemma": {"L": L, "J": J, "s": s},
        "prop1": {"H": H1, "precondition": prop1_precondition(d, t, a, N)},
        "prop2": {"theta": fmt_q(theta), "sigma": fmt_q(sigma2), "rho": fmt_q(rho), "r": math.floor(1 / eps) + 1,
                  "deltaInv": h * Nf ** float(theta), "K": h ** float(rho) * Nf ** float(theta),
                  "H": af ** float(-sigma2) * Nf ** float(theta)},
        "prop3": {"theta1": fmt_q(theta1), "theta2": fmt_q(theta2), "sigma": fmt_q(sigma3),
                  "rho1": fmt_q(rho), "rho2": fmt_q(rho),
                  "delta1Inv": h * Nf ** float(theta1), "K1": h ** float(rho) * Nf ** float(theta1),
                  "delta2Inv": hk * Nf ** float(theta2), "K2": hk ** float(rho) * Nf ** float(theta2),
                  "H": af ** float(-sigma3) * Nf ** float(theta1)},
        "eps": fmt_q(eps),
    }


# verifiers -------------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    lhs: float
    rhs: float
    holds: bool

    def __post_init__(self):
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "holds", bool(self.holds))

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def _diff(lam: np.ndarray, r: int) -> np.ndarray:
    """(Delta_r lam)_m = lam_{m+r} conj(lam_m)."""
    return lam[r:] * np.conj(lam[:-r]) if r < lam.size else lam[:0]


def weyl_check(lambdas, k: int, q: float) -> CheckRecord:
    """|(1/(8N)) sum lam|^(2^k) against the k-fold differenced average, summed literally."""
    lam = np.asarray(lambdas, dtype=np.complex128).ravel()
    N = lam.size
    if k < 1 or N < 1 or not 1 <= q <= N:
        raise DomainError("need k >= 1 and 1 <= Q <= N")
    if np.any(np.abs(lam) > 1 + 1e-12):
        raise DomainError("all |lambda| must be <= 1")
    lhs = abs(lam.sum() / (8 * N)) ** (2 ** k)
    limits = [math.floor(q ** (2.0 ** (1 - j)) + 1e-12) for j in range(1, k + 1)]

    def walk(seq, level):
        total = 0.0
        for r in range(1, limits[level] + 1):
            nxt = _diff(seq, r)
            if nxt.size == 0:
                break
            if level + 1 == k:
                total += abs(nxt.sum()) / N
            else:
                total += walk(nxt, level + 1)
        return total

    rhs = 1.0 / (8 * q) + walk(lam, 0) / (8 * q ** (2 - 2.0 ** (1 - k)))
    return CheckRecord(lhs, rhs, lhs <= rhs + 1e-12)


def linear_sum_check(alpha, n1: int, n2: int) -> CheckRecord:
    """|sum_{n1 < n <= n2} e(alpha n)| against min(n2 - n1, 1/(2 ||alpha||))."""
    if n1 >= n2:
        raise DomainError("need n1 < n2")
    L = n2 - n1
    a = _q(alpha) if isinstance(alpha, (int, Fraction)) else float(alpha)
    dist = float(min(a % 1, 1 - a % 1))
    if dist == 0:
        return CheckRecord(float(L), float(L), True)
    x = float(a % 1)
    lhs = abs(math.sin(math.pi * L * x) / math.sin(math.pi * x))
    if isinstance(a, Fraction) and (L * a).denominator == 1:
        lhs = 0.0  # full periods cancel exactly
    rhs = min(float(L), 1.0 / (2.0 * dist))
    return CheckRecord(lhs, rhs, lhs <= rhs + 1e-12)


# empirical scan --------------------------------------------------------

SCAN_HEADER = ["N", "W", "slopeSoFar", "D", "prop2Bound", "prop3Bound"]


@dataclass(frozen=True)
class ScanRow:
    n: int
    w: int
    slope_so_far: float
    d: float
    prop2_bound: float
    prop3_bound: float

    def cells(self):
        return [self.n, self.w, f"{self.slope_so_far:.6f}", f"{self.d:.9g}", f"{self.prop2_bound:.9g}",
                f"{self.prop3_bound:.9g}"]


def loglog_slope(ns, ws) -> float:
    """Least-squares slope of log W against log N."""
    if len(ns) < 2:
        return float("nan")
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(ws, float)), 1)[0])


def bound_scan(expr: Node | str, n_list, a_max: int | None = None, t_assumed=1, d: int | None = None,
               precision_bits: int = DEFAULT_PRECISION, threads: int | None = None) -> list[ScanRow]:
    """W(E_N), D_N and the predicted a=1 bound curves for each N in ``n_list``.

    ``d`` defaults to the degree found by the theorem-shape recognizer; pass it
    explicitly to scan an expression that does not have that shape.
    """
    from .measures import discrepancy, well_distribution
    from .sequence import fractional_parts, generate

    if isinstance(expr, str):
        expr = parse(expr)
    ns = [int(n) for n in n_list]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        raise DomainError("nList must be non-empty, positive and strictly increasing")
    if d is None:
        d = recognize_theorem_shape(expr).d
    p2, p3 = prop2_exponents(d, t_assumed), prop3_exponents(d, t_assumed)
    seq = generate(expr, ns[-1], precision_bits).values()
    fracs = fractional_parts(expr, range(1, ns[-1] + 1), precision_bits)
    rows, ws = [], []
    for N in ns:
        w = well_distribution(seq[:N], a_max, threads).w
        ws.append(w)
        rows.append(ScanRow(N, w, loglog_slope(ns[:len(ws)], ws), discrepancy(fracs[:N]).d,
                            p2.bound(1, N), p3.bound(1, N)))
    return rows


def scan_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in rows:
        w.writerow(r.cells())
    return buf.getvalue()


__all__ = [
    "ExponentSet", "key_lemma_exponents", "prop1_exponents", "prop1_precondition", "prop2_exponents",
    "prop3_exponents", "threshold_exponent", "theorem_eta", "cap_warning", "proof_parameters", "weyl_check",
    "linear_sum_check", "bound_scan", "scan_csv", "loglog_slope", "fmt_q", "NotTheoremShape",
]
