"""Independent sympy evaluation of the exponent formulas.

Each formula is rewritten with a different factoring (everything scaled by
powers of two so no negative powers appear) and simplified symbolically before
substitution, so it shares no arithmetic path with gprand.bounds.
"""

import sympy as sp

d, t = sp.symbols("d t", positive=True)
P = 2 ** d  # 2^d; note 2^(d-1) = P/2 and 2^(2-d) = 4/P
GAIN = (2 * P - 4) / P

FORMULAS = {
    "prop1_a": (2 * d * t) / (P * (t + 1) + 2 * t),
    "prop1_n": (4 * P - 8) / (P * (P * (2 * t + 1) + 2 * t)),
    "prop1_cap": (2 * P - 4) / (P * d * t),
    "prop2_a": (4 * d * t) / (P * (2 * t + 1) + 8 * t + 2),
    "prop2_n": (4 * P - 8) / (P * (P * (2 * t + 1) + 14 * t + 4)),
    "prop3_a": (3 * d * t) / (P * (3 * t + 1) + 5 * t + 1),
    "prop3_n": (2 * P - 4) * (3 * t + 1) / ((P * (3 * t + 1) + 42 * t + 10) * (P * (3 * t + 1) + 4 * t + 1)),
    "threshold": 1 / (P * (3 * t + 1) + 21 * t + 5) ** 2,
}


def evaluate(name, dv, tv):
    value = sp.simplify(FORMULAS[name].subs({d: dv, t: sp.Rational(tv)}))
    assert value.is_Rational
    return value


def key_lemma(dv, tv, s):
    tv = sp.Rational(tv)
    return tv / (s * tv + 1), sp.Integer(2) ** (dv - 1) - (2 - sp.Integer(2) ** (2 - dv)) / (s * tv + 1)
