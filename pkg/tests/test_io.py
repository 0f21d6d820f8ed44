from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import as_float, camera_pair, camera_tensor
from trifocal import io
from trifocal.constraints import validity_report
from trifocal.param import random_valid_tensor, tensor_to_params
from trifocal.scalars import Kind
from trifocal.tensor import TrifocalTensor


def test_tensor_roundtrip_rational(counter_T):
    text = io.format_tensor(counter_T)
    assert text.startswith("trifocal-tensor v1 rational\n")
    assert "357500/180469" in text
    back = io.parse_tensor(text)
    assert np.array_equal(back.array, counter_T.array)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=27, max_size=27))
def test_tensor_roundtrip_float_bit_exact(values):
    if not any(values):
        return
    T = TrifocalTensor.from_flat(values)
    back = io.parse_tensor(io.format_tensor(T))
    assert back.kind is Kind.FLOAT
    assert [v.hex() for v in back.flat()] == [float(v).hex() for v in values]


def test_camera_roundtrip():
    P2, _ = camera_pair(0)
    text = io.format_camera(P2)
    assert text.startswith("camera v1 rational\n")
    assert np.array_equal(io.parse_camera(text).matrix, P2.matrix)


def test_params_roundtrip():
    p = tensor_to_params(random_valid_tensor(1))
    text = io.format_params(p)
    assert len(text.strip().splitlines()) == 8
    assert io.parse_params(text) == p


def test_params_float_roundtrip():
    p = tensor_to_params(as_float(camera_tensor(2)))
    assert io.parse_params(io.format_params(p)) == p


def test_comments_and_layout_ignored():
    text = "# leading\ntrifocal-tensor v1 decimal\n" + " ".join(["1.5"] * 27) + "  # trailing\n"
    T = io.parse_tensor(text)
    assert T.kind is Kind.FLOAT and T.flat()[0] == 1.5


def test_decimal_header_exact_values():
    text = "trifocal-tensor v1 rational\n" + " ".join(["0.1"] * 27)
    assert io.parse_tensor(text).flat()[0] == Fraction(1, 10)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("trifocal-tensor v1 rational\n" + " ".join(["1"] * 26) + " 1/x", "'1/x'"),
        ("trifocal-tensor v1 rational\n" + " ".join(["1"] * 26), "expected 27 numbers, got 26"),
        ("trifocal-tensor v2 rational\n" + " ".join(["1"] * 27), "expected header"),
        ("camera v1 rational\n" + " ".join(["1"] * 27), "expected header"),
        ("trifocal-tensor v1 complex\n" + " ".join(["1"] * 27), "complex"),
        ("", "missing header"),
    ],
)
def test_malformed_tensor_messages(text, fragment):
    with pytest.raises(io.FormatError, match=None) as info:
        io.parse_tensor(text, "t.txt")
    assert fragment in str(info.value)
    assert "t.txt" in str(info.value)


def test_malformed_token_line_number():
    text = "trifocal-tensor v1 rational\n1 2 3\n4 5 6\n7 8 oops\n" + " ".join(["1"] * 18)
    with pytest.raises(io.FormatError, match=r"t.txt:4: malformed number 'oops'"):
        io.parse_tensor(text, "t.txt")


def test_params_wrong_count():
    with pytest.raises(io.FormatError, match="expected 22"):
        io.parse_params("trifocal-params v1 rational\n" + " ".join(["1"] * 21))


def test_report_lines(counter_T):
    lines = io.report_lines(validity_report(counter_T))
    assert lines[0] == "kind = rational"
    assert "rank.1 = 0" in lines
    assert "verdict.rank = pass" in lines
    assert "verdict.epipolar = pass" in lines
    assert "verdict.central_circular = fail" in lines
    assert lines[-1] == "verdict.all = fail"
    assert "central_circular.1 = -101022670792200/1834807869906823" in lines


def test_report_lines_filtered(counter_T):
    lines = io.report_lines(validity_report(counter_T), ["rank"])
    assert all(l.startswith(("kind", "rank.", "verdict.rank", "verdict.all")) for l in lines)


def test_report_lines_float_has_tol():
    lines = io.report_lines(validity_report(as_float(camera_tensor(0)), tol=1e-7))
    assert lines[1] == "tol = 1e-07" and lines[-1] == "verdict.all = pass"


def test_report_text(counter_T):
    lines = io.report_text(validity_report(counter_T))
    assert lines[-1].endswith("FAIL")
    assert any(l.startswith("rank") and " pass " in l for l in lines)


def test_write_and_read_file(tmp_path, counter_T):
    path = tmp_path / "t.txt"
    io.write_text(path, io.format_tensor(counter_T))
    assert np.array_equal(io.read_tensor(path).array, counter_T.array)
