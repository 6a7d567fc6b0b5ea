"""Exponential sums, the Erdős–Turán bound and the smoothed sawtooth G_r.

G_r(x, tau, delta) is the average of F(x - y, tau) = e(tau {x - y}) over y
distributed as a sum of r independent uniforms on [-delta, delta].  Its
Fourier coefficients, with G_r(x) = sum_k Ghat(k) e(-k x), are

    Ghat(k) = (e(tau) - 1) / (2 pi i (tau + k)) * sinc(2 pi k delta)^r

(Ghat = sinc^r when tau + k = 0).  ``g_coeff_quadrature`` recomputes them from
the convolution by panelled Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, InsufficientPrecision, PrecisionExhausted, PreconditionViolated, StraddlesInteger
from .exactreal import DEFAULT_PRECISION, MAX_PRECISION, DyadicBall, frac_certified, precision_ladder, to_float64
from .genpoly import Node, compile_expr, parse

TWO_PI = 2.0 * math.pi


def e(x):
    """e(x) = exp(2 pi i x), elementwise."""
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class SmoothingParams:
    r: int
    delta: float
    tau: float
    k_cut: int = 1000

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("r must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise DomainError("delta must lie in (0, 1)")
        if self.k_cut < 1:
            raise DomainError("K must be >= 1")

    @property
    def pnorm_ok(self) -> bool:
        """0 < delta < min(1/(2|tau|), 1)."""
        return self.tau == 0 or self.delta < 1.0 / (2.0 * abs(self.tau))

    @property
    def tail_ok(self) -> bool:
        """|tau + k| >= |k|/2 for every |k| > K."""
        return abs(self.tau) <= (self.k_cut + 1) / 2.0


# exponential sums -------------------------------------------------------


def _phase(f, expr, h, n, prec):
    """Float in [0,1) for {h f(n)}, certified before rounding."""
    for p in precision_ladder(prec, MAX_PRECISION):
        try:
            b = f(n) if p == prec else compile_expr(expr, p)(n)
            return to_float64(frac_certified(DyadicBall(b.mantissa * h, b.scale, b.radius * h)))
        except (StraddlesInteger, InsufficientPrecision):
            continue
    raise PrecisionExhausted(f"phase of {h}*f({n}) undecided at {MAX_PRECISION} bits", index=n)


def phases(expr: Node | str, h: int, indices, precision_bits: int = DEFAULT_PRECISION) -> np.ndarray:
    if isinstance(expr, str):
        expr = parse(expr)
    h = abs(int(h))
    f = compile_expr(expr, precision_bits)
    return np.array([_phase(f, expr, h, int(n), precision_bits) for n in indices], dtype=np.float64)


def exp_sum(expr: Node | str, h: int, N: int, a: int = 1, b: int = 0,
            precision_bits: int = DEFAULT_PRECISION) -> complex:
    """sum_{n=1}^{N} e(h f(a n + b)); each phase is reduced mod 1 exactly before going to float."""
    if h == 0:
        raise DomainError("h must be non-zero")
    if a < 1 or a + b < 1 or N < 1:
        raise DomainError("need a >= 1, a + b >= 1, N >= 1")
    ph = phases(expr, h, [a * n + b for n in range(1, N + 1)], precision_bits)
    terms = e(ph)
    re = math.fsum(terms.real)
    im = math.fsum(terms.imag)
    # e(-y) = conj(e(y)) term by term, so the h < 0 sum is the exact conjugate
    return complex(re, im if h > 0 else -im)


def weyl_sums(points, H: int) -> np.ndarray:
    """|(1/N) sum_n e(h u_n)| for h = 1..H."""
    u = np.asarray(points, dtype=np.float64).ravel()
    out = np.empty(H)
    for h in range(1, H + 1):
        t = e(np.mod(h * u, 1.0))
        out[h - 1] = abs(complex(math.fsum(t.real), math.fsum(t.imag))) / u.size
    return out


def erdos_turan_rhs(points, H: int) -> float:
    """2/(H+1) + 2 sum_{h<=H} (1/h) |(1/N) sum_n e(h u_n)|."""
    if H < 1:
        raise DomainError("H must be >= 1")
    s = weyl_sums(points, H)
    return 2.0 / (H + 1) + 2.0 * float(np.sum(s / np.arange(1, H + 1)))


# F and G_r --------------------------------------------------------------


def f_eval(x, tau: float):
    """F(x, tau) = e(tau {x})."""
    x = np.asarray(x, dtype=np.float64)
    return e(tau * (x - np.floor(x)))


def g_fourier_coeff(k, params: SmoothingParams):
    k = np.asarray(k, dtype=np.float64)
    tau, delta, r = params.tau, params.delta, params.r
    denom = tau + k
    resonant = denom == 0
    safe = np.where(resonant, 1.0, denom)
    fhat = np.where(resonant, 1.0 + 0j, (e(tau) - 1.0) / (2j * math.pi * safe))
    z = TWO_PI * k * delta
    sinc = np.where(k == 0, 1.0, np.sin(z) / np.where(k == 0, 1.0, z))
    out = fhat * sinc**r
    return complex(out) if out.ndim == 0 else out


def g_eval(x, params: SmoothingParams):
    """Truncated series sum_{|k| <= K} Ghat(k) e(-k x)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    K = params.k_cut
    chunk = max(1, (1 << 22) // x.size)
    out = np.zeros(x.shape, dtype=np.complex128)
    for lo in range(-K, K + 1, chunk):
        ks = np.arange(lo, min(lo + chunk, K + 1))
        c = g_fourier_coeff(ks, params)
        out += (e(-np.mod(np.outer(x, ks), 1.0)) * c).sum(axis=1)
    return out if out.size > 1 else complex(out[0])


def tail_budget(params: SmoothingParams) -> float:
    return (params.delta * params.k_cut) ** (-params.r)


# quadrature oracle ------------------------------------------------------


def irwin_hall_density(y, r: int, delta: float):
    """Density of a sum of r independent uniforms on [-delta, delta]."""
    s = (np.asarray(y, dtype=np.float64) + r * delta) / (2.0 * delta)
    inside = (s >= 0) & (s <= r)
    if r == 1:
        return np.where(inside, 1.0, 0.0) / (2.0 * delta)
    out = np.zeros_like(s)
    for j in range(r):
        out += (-1) ** j * math.comb(r, j) * np.clip(s - j, 0.0, None) ** (r - 1)
    # the alternating sum cancels to ~1e-14 near the right edge; clip that round-off
    return np.where(inside, np.maximum(out, 0.0) / math.factorial(r - 1), 0.0) / (2.0 * delta)


def _panels(breaks, nodes, max_len):
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    xs, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        m = max(1, int(math.ceil((hi - lo) / max_len)))
        edges = np.linspace(lo, hi, m + 1)
        half = np.diff(edges)[:, None] / 2
        mid = (edges[:-1] + edges[1:])[:, None] / 2
        xs.append((mid + half * gx).ravel())
        ws.append((half * gw).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def g_coeff_quadrature(k: int, params: SmoothingParams, nodes: int = 16) -> complex:
    """Ghat(k) = int_0^1 e(k x) G_r(x) dx as a 2-d integral over (y, x).

    Panels in y break at the spline knots; for each y the x-range splits at
    the sawtooth jump x = {y}.  Panels are at most one wavelength long.
    """
    tau, delta, r = params.tau, params.delta, params.r
    freq = abs(k) + abs(tau) + 1.0
    knots = -r * delta + 2.0 * delta * np.arange(r + 1)
    ys, wy = _panels(knots, nodes, 1.0 / freq)
    wy = wy * irwin_hall_density(ys, r, delta)
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    m = int(math.ceil(freq))
    j = np.arange(m)[:, None]
    unit = ((j + (gx[None, :] + 1) / 2) / m).ravel()  # nodes on [0,1], m panels
    unit_w = np.broadcast_to(gw[None, :] / (2 * m), (m, nodes)).ravel()
    total = 0.0 + 0.0j
    for lo in range(0, ys.size, 512):
        y = ys[lo:lo + 512, None]
        c = y - np.floor(y)
        for start, length in ((0.0, c), (c, 1.0 - c)):
            xs = start + length * unit[None, :]
            t = xs - y
            val = np.exp(1j * TWO_PI * (k * xs + tau * (t - np.floor(t))))
            total += np.sum(wy[lo:lo + 512] * (length[:, 0] * (val @ unit_w)))
    return complex(total)


def g_direct(x: float, params: SmoothingParams, nodes: int = 24) -> complex:
    """G_r(x) straight from the convolution, by quadrature in y."""
    tau, delta, r = params.tau, params.delta, params.r
    knots = list(-r * delta + 2.0 * delta * np.arange(r + 1))
    # jumps of {x - y} inside the support
    lo, hi = knots[0], knots[-1]
    jumps = [x - m for m in range(math.floor(x - hi), math.ceil(x - lo) + 1) if lo < x - m < hi]
    breaks = np.array(sorted(set(knots + jumps)))
    ys, wy = _panels(breaks, nodes, 0.25 / (abs(tau) + 1.0))
    t = x - ys
    fr = t - np.floor(t)
    return complex(np.dot(wy * irwin_hall_density(ys, r, delta), np.exp(1j * TWO_PI * tau * fr)))


# lemma checks -----------------------------------------------------------


@dataclass(frozen=True)
class TailReport:
    tail_sum: float
    bound: float
    c_ratio: float

    def to_dict(self):
        return asdict(self)


def fourier_tail(params: SmoothingParams, span: int = 1 << 10) -> TailReport:
    """sum_{K < |k| <= K * span} |Ghat(k)| against (delta K)^(-r)."""
    if not params.tail_ok:
        raise PreconditionViolated(f"|tau + k| >= |k|/2 fails for some |k| > K={params.k_cut}")
    K = params.k_cut
    total = 0.0
    for lo in range(K + 1, K * span + 1, 1 << 20):
        ks = np.arange(lo, min(lo + (1 << 20), K * span + 1), dtype=np.float64)
        total += float(np.abs(g_fourier_coeff(ks, params)).sum() + np.abs(g_fourier_coeff(-ks, params)).sum())
    bound = tail_budget(params)
    return TailReport(total, bound, total / bound)


@dataclass(frozen=True)
class PNormReport:
    value: float
    increment: float
    k_max: int
    stabilized: bool

    def to_dict(self):
        return asdict(self)


def pnorm_check(params: SmoothingParams, p: float, k_max: int = 10**6, tol: float = 1e-10) -> PNormReport:
    """Partial sum of |Ghat(k)|^p over |k| <= k_max; ``increment`` is the shell k_max/2 < |k| <= k_max."""
    if p <= 1:
        raise DomainError("p must exceed 1")
    if not params.pnorm_ok:
        raise PreconditionViolated("need delta < min(1/(2|tau|), 1)")
    half = k_max // 2
    inner = abs(g_fourier_coeff(0, params)) ** p
    shell = 0.0
    for lo in range(1, k_max + 1, 1 << 20):
        ks = np.arange(lo, min(lo + (1 << 20), k_max + 1), dtype=np.float64)
        v = np.abs(g_fourier_coeff(ks, params)) ** p + np.abs(g_fourier_coeff(-ks, params)) ** p
        inner += float(v[ks <= half].sum())
        shell += float(v[ks > half].sum())
    return PNormReport(inner + shell, shell, k_max, shell < tol)


@dataclass(frozen=True)
class ApproxReport:
    l1err: float
    bound: float
    c_ratio: float
    d: float

    def to_dict(self):
        return asdict(self)


def approximation_error_points(points, params: SmoothingParams) -> ApproxReport:
    """sum_n |F(u_n) - G_r(u_n)| against N r delta + N r^2 delta |tau| + N D_N(u)."""
    from .measures import discrepancy

    u = np.mod(np.asarray(points, dtype=np.float64), 1.0)
    N = u.size
    diff = np.abs(f_eval(u, params.tau) - np.atleast_1d(g_eval(u, params)))
    err = math.fsum(diff)
    D = discrepancy(u).d
    r, d = params.r, params.delta
    bound = N * r * d + N * r * r * d * abs(params.tau) + N * D
    return ApproxReport(err, bound, err / bound, D)


def approximation_error(expr: Node | str, N: int, params: SmoothingParams,
                        precision_bits: int = DEFAULT_PRECISION) -> ApproxReport:
    from .sequence import fractional_parts

    return approximation_error_points(fractional_parts(expr, range(1, N + 1), precision_bits), params)
