"""±1 sequences e_n = chi(f(n)) and the GPSEQ1 file format.

File layout: ``b"GPSEQ1"``, N as 8-byte little-endian unsigned, then
``ceil(N/8)`` bytes; bit (n-1), LSB-first within each byte, is set iff e_n = +1.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientPrecision, PrecisionExhausted, StraddlesInteger
from .exactreal import DEFAULT_PRECISION, MAX_PRECISION, DyadicBall, floor_certified, frac_certified, precision_ladder, to_float64
from .genpoly import Node, compile_expr, parse, to_text

MAGIC = b"GPSEQ1"


@dataclass(frozen=True)
class BinarySequence:
    n: int
    bits: bytes

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sequence length must be >= 1")
        if len(self.bits) != (self.n + 7) // 8:
            raise ValueError("payload length does not match n")

    @classmethod
    def from_values(cls, values) -> "BinarySequence":
        v = np.asarray(values)
        if v.ndim != 1 or v.size == 0 or not np.all((v == 1) | (v == -1)):
            raise ValueError("values must be a non-empty 1-d array of +1/-1")
        return cls(int(v.size), np.packbits(v == 1, bitorder="little").tobytes())

    def values(self) -> np.ndarray:
        """int8 array of ±1 (index 0 holds e_1)."""
        raw = np.frombuffer(self.bits, dtype=np.uint8)
        b = np.unpackbits(raw, count=self.n, bitorder="little").astype(np.int8)
        return 2 * b - 1

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        """1-based access, matching the e_n indexing."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return 1 if self.bits[(i - 1) >> 3] >> ((i - 1) & 7) & 1 else -1

    def prefix(self, m: int) -> "BinarySequence":
        return BinarySequence.from_values(self.values()[:m])

    def to_bytes(self) -> bytes:
        return MAGIC + struct.pack("<Q", self.n) + self.bits

    @classmethod
    def from_bytes(cls, data: bytes) -> "BinarySequence":
        if data[:6] != MAGIC:
            raise ValueError("not a GPSEQ1 file")
        (n,) = struct.unpack_from("<Q", data, 6)
        payload = data[14:]
        if len(payload) != (n + 7) // 8:
            raise ValueError(f"truncated payload: expected {(n + 7) // 8} bytes, got {len(payload)}")
        return cls(n, bytes(payload))


def write_sequence(path, seq: BinarySequence) -> None:
    with open(path, "wb") as fh:
        fh.write(seq.to_bytes())


def read_sequence(path) -> BinarySequence:
    with open(path, "rb") as fh:
        return BinarySequence.from_bytes(fh.read())


def chi(x: DyadicBall) -> int:
    """+1 if {x} < 1/2 else -1, decided as the parity of floor(2x)."""
    if x.scale:
        twice = DyadicBall(x.mantissa, x.scale - 1, x.radius)
    else:
        twice = DyadicBall(2 * x.mantissa, 0, 2 * x.radius)
    return -1 if floor_certified(twice) & 1 else 1


def _resolve(expr: Node, n: int, start: int, decide):
    last = None
    for prec in precision_ladder(start, MAX_PRECISION):
        try:
            return decide(compile_expr(expr, prec)(n))
        except (StraddlesInteger, InsufficientPrecision) as exc:
            last = exc
    raise PrecisionExhausted(f"value undecided at n={n} with {MAX_PRECISION} bits: {last}",
                             node=getattr(last, "node", None), index=n)


def chi_at(expr: Node, n: int, precision_bits: int = DEFAULT_PRECISION) -> int:
    return _resolve(expr, n, precision_bits, chi)


def frac_float(x: DyadicBall) -> float:
    """{x} as a float in [0, 1); raises StraddlesInteger when the floor is undecided."""
    v = to_float64(frac_certified(x))
    return v if v < 1.0 else float(np.nextafter(1.0, 0.0))


def frac_at(expr: Node, n: int, precision_bits: int = DEFAULT_PRECISION) -> float:
    return _resolve(expr, n, precision_bits, frac_float)


def _chi_local(expr, lo, hi, prec):
    f = compile_expr(expr, prec)
    out = np.empty(hi - lo, dtype=np.int8)
    for i, n in enumerate(range(lo, hi)):
        try:
            out[i] = chi(f(n))
        except StraddlesInteger:
            out[i] = chi_at(expr, n, prec * 2)
    return out


def _chi_chunk(args):
    text, lo, hi, prec = args
    return _chi_local(parse(text), lo, hi, prec)


def generate_values(expr: Node, N: int, precision_bits: int = DEFAULT_PRECISION, workers: int = 1) -> np.ndarray:
    """int8 array of e_1..e_N; chunks are assembled positionally, so ``workers`` never changes the result."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if workers <= 1:
        return _chi_local(expr, 1, N + 1, precision_bits)
    step = -(-N // (4 * workers))
    chunks = [(to_text(expr), lo, min(lo + step, N + 1), precision_bits) for lo in range(1, N + 1, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chi_chunk, chunks))
    return np.concatenate(parts)


def generate(expr: Node | str, N: int, precision_bits: int = DEFAULT_PRECISION, workers: int | None = None) -> BinarySequence:
    if isinstance(expr, str):
        expr = parse(expr)
    if workers is None:
        workers = int(os.environ.get("GPRAND_THREADS", "1"))
    return BinarySequence.from_values(generate_values(expr, N, precision_bits, workers))


def fractional_parts(expr: Node | str, indices, precision_bits: int = DEFAULT_PRECISION) -> np.ndarray:
    """Floats {f(n)} for the given indices, each certified before rounding."""
    if isinstance(expr, str):
        expr = parse(expr)
    f = compile_expr(expr, precision_bits)
    out = np.empty(len(indices), dtype=np.float64)
    for i, n in enumerate(indices):
        n = int(n)
        try:
            out[i] = frac_float(f(n))
        except (StraddlesInteger, InsufficientPrecision):
            out[i] = frac_at(expr, n, precision_bits * 2)
    return out
