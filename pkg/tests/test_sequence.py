import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gprand.exactreal import DyadicBall
from gprand.genpoly import parse
from gprand.sequence import (BinarySequence, chi, fractional_parts, generate, generate_values, read_sequence,
                             write_sequence)

THEOREM = "sqrt(5)*floor(sqrt(3)*floor(sqrt(2)*x^2))"


def _mp_theorem(n):
    s2, s3, s5 = mpmath.sqrt(2), mpmath.sqrt(3), mpmath.sqrt(5)
    return s5 * mpmath.floor(s3 * mpmath.floor(s2 * n * n))


@pytest.mark.parametrize("value, sign", [(0.25, 1), (-0.25, -1), (3.5, -1), (0, 1), (0.75, -1)])
def test_chi(value, sign):
    assert chi(DyadicBall.exact(value)) == sign


def test_generate_examples():
    assert list(generate("x*1/2", 4).values()) == [-1, 1, -1, 1]
    assert list(generate(THEOREM, 3).values()) == [1, -1, -1]
    assert list(generate("0", 5).values()) == [1] * 5


def test_against_mpmath_oracle():
    N = 300
    got = generate(THEOREM, N).values()
    with mpmath.workdps(80):
        want = [1 if mpmath.frac(_mp_theorem(n)) < 0.5 else -1 for n in range(1, N + 1)]
        fr = fractional_parts(THEOREM, range(1, 11))
        assert np.allclose(fr, [float(mpmath.frac(_mp_theorem(n))) for n in range(1, 11)], atol=1e-15)
    assert list(got) == want


def test_worker_count_does_not_change_output():
    e = parse(THEOREM)
    assert np.array_equal(generate_values(e, 2000, workers=1), generate_values(e, 2000, workers=2))


def test_file_round_trip(tmp_path):
    seq = generate(THEOREM, 1001)
    path = tmp_path / "e.seq"
    write_sequence(path, seq)
    raw = path.read_bytes()
    assert raw[:6] == b"GPSEQ1" and len(raw) == 6 + 8 + 126
    assert read_sequence(path) == seq


def test_truncated_file_rejected(tmp_path):
    path = tmp_path / "bad.seq"
    path.write_bytes(generate("x", 20).to_bytes()[:-1])
    with pytest.raises(ValueError):
        read_sequence(path)


@given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=300))
def test_bytes_round_trip(vals):
    seq = BinarySequence.from_values(vals)
    again = BinarySequence.from_bytes(seq.to_bytes())
    assert list(again.values()) == vals
    assert [again[i] for i in range(1, len(vals) + 1)] == vals


@given(st.integers(1, 400))
def test_prefix_consistency(n):
    full = generate("sqrt(2)*x^2 + pi*x", 400).values()
    assert np.array_equal(generate("sqrt(2)*x^2 + pi*x", n).values(), full[:n])
