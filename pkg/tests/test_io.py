import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from perdist.cones import LatticeCone, standard_pair
from perdist.distributions import CoefficientField, corpus
from perdist.io import (FormatError, dumps, field_dumps, read_cone, read_field, read_generator, write_cone,
                        write_field, write_generator, write_json, write_trace)
from perdist.shiftinv import SampledGenerator, bspline, hat
from perdist.traces import trace_from_sums

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.integers(0, 3 if d < 3 else 1).flatmap(
    lambda n: st.tuples(st.just(d), arrays(np.float64, (2,) + (2 * n + 1,) * d, elements=finite)))))
def test_field_round_trip_is_bit_exact(tmp_path_factory, dn):
    d, arr = dn
    f = CoefficientField(arr[0] + 1j * arr[1])
    path = tmp_path_factory.mktemp("f") / "f.json"
    write_field(f, path)
    g = read_field(path)
    assert g.dim == f.dim and g.radius == f.radius
    assert np.array_equal(g.data, f.data)
    assert np.array_equal(np.signbit(g.data.real), np.signbit(f.data.real))


def test_field_format_layout(tmp_path):
    f = corpus("harmonic", index=(1,), radius=1)
    obj = json.loads(field_dumps(f))
    assert obj == {"dim": 1, "radius": 1, "coeffs": [0, 0, 0, 0, 1, 0]}


def test_tiny_and_huge_values_survive(tmp_path):
    f = CoefficientField(np.array([5e-324, 1.7976931348623157e308 + 0j, -0.1 + 1e-17j]))
    write_field(f, tmp_path / "f.json")
    assert np.array_equal(read_field(tmp_path / "f.json").data, f.data)


@pytest.mark.parametrize("text, key, reason", [
    ('{"dim": 1, "radius": 1, "coeffs": [1, 2', None, "Expecting"),
    ('{"dim": 4, "radius": 1, "coeffs": []}', "dim", "dim must be"),
    ('{"dim": 1, "radius": 1, "coeffs": [1, 2]}', "coeffs", "coeffs must hold 6"),
    ('{"dim": 1, "radius": -1, "coeffs": []}', "radius", "radius must be"),
    ('{"dim": 1, "radius": 0, "coeffs": ["a", 0]}', "coeffs", "numbers"),
    ('[1, 2]', "", "JSON object"),
    ('{"dim": 1, "coeffs": []}', "", "missing key 'radius'"),
])
def test_malformed_field_reports_offset(tmp_path, text, key, reason):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(FormatError) as exc:
        read_field(path)
    assert reason in exc.value.reason
    assert str(path) in str(exc.value)
    if key is None:
        assert exc.value.offset == len(text)
    elif key:
        assert exc.value.offset == text.index(f'"{key}"')
    else:
        assert exc.value.offset == 0


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read_field(tmp_path / "nope.json")


def test_cone_round_trip(tmp_path):
    g1, g2 = standard_pair()
    c3 = LatticeCone.circular((0, 0, 1), 30)
    for c in (g1, g2, c3, g1.translated((2, -1))):
        write_cone(c, tmp_path / "c.json")
        assert read_cone(tmp_path / "c.json") == c


def test_bad_cone(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"dim": 2, "halfspaces": [{"normal": [0, 0]}]}')
    with pytest.raises(FormatError) as exc:
        read_cone(path)
    assert exc.value.offset == path.read_text().index('"halfspaces"')


@pytest.mark.parametrize("gen", [hat(M=16), bspline(3, M=32), SampledGenerator(np.linspace(-1, 1, 40), -7, 20)])
def test_generator_round_trip(tmp_path, gen):
    write_generator(gen, tmp_path / "g.csv")
    back = read_generator(tmp_path / "g.csv")
    assert back.M == gen.M and back.offset == gen.offset
    assert np.array_equal(back.values, gen.values)
    assert (tmp_path / "g.csv").read_text().splitlines()[0] == "t,value"


@pytest.mark.parametrize("text, reason", [
    ("x,y\n0,1\n", "header"),
    ("t,value\n0,1\n", "two samples"),
    ("t,value\n0,1\n0.1,oops\n", "two numbers"),
    ("t,value\n0,1\n0.0625,1\n0.2,1\n", "uniform grid"),
])
def test_malformed_generator(tmp_path, text, reason):
    path = tmp_path / "g.csv"
    path.write_text(text)
    with pytest.raises(FormatError, match=reason):
        read_generator(path)


def test_generator_error_offset_points_at_row(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("t,value\n0,1\n0.1,oops\n")
    with pytest.raises(FormatError) as exc:
        read_generator(path)
    assert exc.value.offset == len("t,value\n0,1\n")


def test_dumps_formats():
    text = dumps({"a": 0.1, "b": [1, 2.5], "c": math.nan, "d": True, "e": "x", "f": []})
    obj = json.loads(text)
    assert obj == {"a": 0.1, "b": [1, 2.5], "c": None, "d": True, "e": "x", "f": []}
    assert "0.10000000000000001" in text
    with pytest.raises(TypeError):
        dumps(object())


def test_write_json_and_trace(tmp_path):
    write_json({"x": np.float64(1.5), "n": np.int64(3)}, tmp_path / "o.json")
    assert json.loads((tmp_path / "o.json").read_text()) == {"x": 1.5, "n": 3}
    write_trace(trace_from_sums([4, 8, 16, 32], [1.0, 1.0, 1.0, 1.0], 1.0), tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().startswith("radius,sum,slope\n4,1,")
