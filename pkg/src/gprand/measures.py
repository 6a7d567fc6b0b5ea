"""Well-distribution measure W(E_N) and extreme discrepancy D_N, each with a
brute-force oracle.

For a fixed step ``a`` the admissible progressions are exactly the contiguous
runs inside one residue class, so the best run in a class is (max prefix sum
- min prefix sum).  That makes the full scan O(N * aMax).
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .errors import OutOfDomain, OutOfRange, TooLarge
from .exactreal import DEFAULT_PRECISION
from .genpoly import Node, parse
from .sequence import BinarySequence, chi_at, fractional_parts

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"

NAIVE_W_MAX = 4096
NAIVE_D_MAX = 5000


@dataclass(frozen=True)
class ProgressionWitness:
    a: int
    b: int
    m: int
    u: int


@dataclass(frozen=True)
class WellDistReport:
    w: int
    witness: ProgressionWitness
    a_max: int
    exhaustive: bool

    def to_dict(self):
        return {"w": self.w, "a": self.witness.a, "b": self.witness.b, "m": self.witness.m,
                "u": self.witness.u, "aMax": self.a_max, "exhaustive": self.exhaustive}


@dataclass(frozen=True)
class DiscrepancyReport:
    d: float
    interval: tuple
    n: int

    def to_dict(self):
        return asdict(self)


def _as_values(e) -> np.ndarray:
    if isinstance(e, BinarySequence):
        return e.values()
    v = np.ascontiguousarray(e, dtype=np.int8)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a non-empty ±1 sequence")
    return v


def progression_sum(e, m: int, a: int, b: int) -> int:
    """U(E_N, M, a, b) = sum_{j=1}^{M} e_{a j + b}."""
    v = _as_values(e)
    N = v.size
    if a < 1 or m < 1 or a + b < 1 or a * m + b > N:
        raise OutOfRange(f"progression a={a}, b={b}, M={m} leaves [1, {N}]")
    idx = a * np.arange(1, m + 1) + b - 1
    return int(v[idx].astype(np.int64).sum())


# fast scan --------------------------------------------------------------


@numba.njit(cache=True)
def _scan_step(v, a):
    """Best (W, b, M, U) over all progressions of step ``a``; ties go to the smaller b, then M."""
    N = v.size
    best_w = -1
    best_b = 0
    best_m = 0
    best_u = 0
    for c in range(1, min(a, N) + 1):
        p = 0
        pmax = 0
        pmin = 0
        for n in range(c - 1, N, a):
            p += v[n]
            pmax = max(pmax, p)
            pmin = min(pmin, p)
        w = pmax - pmin
        if w < best_w:
            continue
        # second pass only for candidate classes: first prefix indices of the extremes
        p = 0
        i = 0
        imax = 0 if pmax == 0 else -1
        imin = 0 if pmin == 0 else -1
        for n in range(c - 1, N, a):
            p += v[n]
            i += 1
            if imax < 0 and p == pmax:
                imax = i
            if imin < 0 and p == pmin:
                imin = i
            if imax >= 0 and imin >= 0:
                break
        if imax < imin:
            i0, i1, u = imax, imin, pmin - pmax
        else:
            i0, i1, u = imin, imax, pmax - pmin
        b = c + a * i0 - a
        m = i1 - i0
        if w > best_w or b < best_b or (b == best_b and m < best_m):
            best_w, best_b, best_m, best_u = w, b, m, u
    return best_w, best_b, best_m, best_u


@numba.njit(parallel=True, cache=True)
def _scan_all(v, a_max):
    out = np.empty((a_max, 4), dtype=np.int64)
    for k in numba.prange(a_max):
        w, b, m, u = _scan_step(v, k + 1)
        out[k, 0] = w
        out[k, 1] = b
        out[k, 2] = m
        out[k, 3] = u
    return out


def well_distribution(e, a_max: int | None = None, threads: int | None = None) -> WellDistReport:
    v = _as_values(e)
    N = int(v.size)
    requested = N if a_max is None else int(a_max)
    if requested < 1:
        raise ValueError("aMax must be >= 1")
    cap = min(requested, N)
    if threads:
        numba.set_num_threads(min(int(threads), numba.config.NUMBA_NUM_THREADS))
    table = _scan_all(v, cap)
    # argmax returns the first (smallest a) on ties; within one a the kernel already broke ties on (b, M)
    k = int(np.argmax(table[:, 0]))
    w, b, m, u = (int(x) for x in table[k])
    return WellDistReport(w, ProgressionWitness(k + 1, b, m, u), requested, requested >= N)


# oracle -----------------------------------------------------------------


@numba.njit(cache=True)
def _naive(v):
    N = v.size
    best = -1
    ba = bb = bm = bu = 0
    for a in range(1, N + 1):
        for b in range(1 - a, N - a + 1):
            s = 0
            m = 0
            while a * (m + 1) + b <= N:
                m += 1
                s += v[a * m + b - 1]
                if abs(s) > best:
                    best = abs(s)
                    ba, bb, bm, bu = a, b, m, s
    return best, ba, bb, bm, bu


def well_distribution_naive(e) -> WellDistReport:
    """Literal max over every admissible (a, b, M), scanned in lexicographic order."""
    v = _as_values(e)
    N = int(v.size)
    if N > NAIVE_W_MAX:
        raise TooLarge(f"naive W is capped at N={NAIVE_W_MAX}")
    w, a, b, m, u = (int(x) for x in _naive(v))
    return WellDistReport(w, ProgressionWitness(a, b, m, u), N, True)


# discrepancy ------------------------------------------------------------


def _check_points(points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("need at least one point")
    if not np.all((x >= 0.0) & (x < 1.0)):
        raise OutOfDomain("all points must lie in [0, 1)")
    return x


def discrepancy(points) -> DiscrepancyReport:
    """Extreme discrepancy over half-open intervals [a, b) from the sorted sample."""
    x = np.sort(_check_points(points))
    n = x.size
    i = np.arange(1, n + 1) / n
    over = i - x  # i/n - x_(i)
    under = x - i  # x_(i) - i/n
    ko, ku = int(np.argmax(over)), int(np.argmax(under))
    d = 1.0 / n + over[ko] + under[ku]
    lo, hi = (x[ku], x[ko]) if ku <= ko else (x[ko], x[ku])
    return DiscrepancyReport(float(min(d, 1.0)), (float(lo), float(hi)), n)


def discrepancy_naive(points) -> DiscrepancyReport:
    """Sup of |#{x in [a,b)}/n - (b-a)| over endpoints in {0, x_i, x_i + ulp, 1}."""
    x = np.sort(_check_points(points))
    n = x.size
    if n > NAIVE_D_MAX:
        raise TooLarge(f"naive discrepancy is capped at n={NAIVE_D_MAX}")
    ends = np.unique(np.concatenate(([0.0, 1.0], x, np.nextafter(x, 2.0))))
    ends = ends[ends <= 1.0]
    below = np.searchsorted(x, ends, side="left")  # points < endpoint
    best, arg = -1.0, (0.0, 1.0)
    for start in range(0, ends.size, 256):
        A = ends[start:start + 256, None]
        cA = below[start:start + 256, None]
        val = np.abs((below[None, :] - cA) / n - (ends[None, :] - A))
        val[ends[None, :] <= A] = -1.0
        k = np.unravel_index(int(np.argmax(val)), val.shape)
        if val[k] > best:
            best = float(val[k])
            arg = (float(ends[start + k[0]]), float(ends[k[1]]))
    return DiscrepancyReport(best, arg, n)


# progression / discrepancy chain ---------------------------------------


@dataclass(frozen=True)
class ChainRecord:
    lhs_u: int
    rhs: float
    m: int
    holds: bool


def progression_discrepancy_chain(expr: Node | str, N: int, a: int, b: int,
                                  precision_bits: int = DEFAULT_PRECISION) -> ChainRecord:
    """|U(E_N, M, a, b)| against 2 M D_M of the points {f(a m + b)}, M = floor((N - b)/a)."""
    if isinstance(expr, str):
        expr = parse(expr)
    M = (N - b) // a if a >= 1 else 0
    if a < 1 or a + b < 1 or M < 1:
        raise OutOfRange(f"no admissible progression for a={a}, b={b}, N={N}")
    idx = [a * m + b for m in range(1, M + 1)]
    u = sum(chi_at(expr, n, precision_bits) for n in idx)
    pts = fractional_parts(expr, idx, precision_bits)
    rhs = 2.0 * M * discrepancy(pts).d
    return ChainRecord(abs(u), rhs, M, abs(u) <= rhs + 1e-9)
