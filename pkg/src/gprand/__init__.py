"""Pseudorandom ±1 sequences from generalized polynomials, with certified
evaluation and the measures, sums and exponent bounds used to study them."""

from .errors import (DomainError, GPRandError, GPSyntaxError, NotTheoremShape, PrecisionExhausted,
                     RationalRelation)
from .exactreal import DyadicBall
from .genpoly import evaluate, parse, recognize_theorem_shape, to_text
from .measures import discrepancy, well_distribution
from .sequence import BinarySequence, generate, read_sequence, write_sequence

__version__ = "0.1.0"

__all__ = [
    "BinarySequence", "DomainError", "DyadicBall", "GPRandError", "GPSyntaxError", "NotTheoremShape",
    "PrecisionExhausted", "RationalRelation", "discrepancy", "evaluate", "generate", "parse",
    "read_sequence", "recognize_theorem_shape", "to_text", "well_distribution", "write_sequence",
]
