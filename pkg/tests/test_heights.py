import math

import numpy as np
import pytest

from convexspectra import heights
from convexspectra.errors import BodyFileError


def test_polynomial_eval_and_derivative():
    f = heights.polynomial([0.25, 0.0, -1.0])
    assert f(0.0) == 0.25
    assert f(0.5) == pytest.approx(0.0, abs=1e-15)
    xs = np.linspace(-0.45, 0.45, 11)
    h = 1e-6
    fd = (f(xs + h) - f(xs - h)) / (2 * h)
    assert np.max(np.abs(f.derivative(xs) - fd)) < 1e-8


def test_tent_shape():
    f = heights.tent(-0.5, 0.5)
    assert f(-0.5) == 0.0 and f(0.5) == 0.0
    assert f(0.0) == 0.5
    assert f(0.25) == pytest.approx(0.25)
    assert f.breakpoints() == [0.0]
    assert not f.endpoint_singular


def test_semicircle():
    f = heights.semicircle(0.5)
    assert f(0.0) == pytest.approx(0.5)
    assert f(0.3) == pytest.approx(0.4)
    assert f.endpoint_singular
    with pytest.raises(BodyFileError):
        heights.HeightFn("semicircle", -0.5, 0.5, r=-1.0)


def test_piecewise_eval_and_validation():
    f = heights.piecewise([-0.5, 0.0, 0.5], [0.0, 0.3, 0.0])
    assert f(-0.25) == pytest.approx(0.15)
    assert f(0.25) == pytest.approx(0.15)
    assert f.breakpoints() == [0.0]
    with pytest.raises(BodyFileError):
        heights.piecewise([-0.5, 0.5, 0.0], [0.0, 0.1, 0.0])
    with pytest.raises(BodyFileError):
        heights.piecewise([-0.5, 0.5], [0.0])


def test_power_cap():
    f = heights.power(0.75, 1.0, -0.5, 0.5)
    assert f(-0.5) == 0.0
    assert f(0.4) == pytest.approx(0.1 ** 0.75)
    assert f.endpoint_singular  # p < 1 has unbounded slope at the walls


def test_zero_height():
    z = heights.zero()
    assert z.is_zero()
    assert z(0.1) == 0.0
    assert not heights.tent(-0.5, 0.5).is_zero()


def test_max_value():
    assert heights.tent(-0.5, 0.5).max_value() == pytest.approx(0.5)
    assert heights.semicircle(0.3).max_value() == pytest.approx(0.3)
    f = heights.piecewise([-0.5, -0.1, 0.5], [0.0, 0.7, 0.0])
    assert f.max_value() == pytest.approx(0.7)


@pytest.mark.parametrize("f", [
    heights.polynomial([0.25, 0.1, -1.0]),
    heights.tent(-0.5, 0.5),
    heights.semicircle(0.5),
    heights.piecewise([-0.5, 0.1, 0.5], [0.0, 0.4, 0.0]),
    heights.power(0.75, 0.8, -0.5, 0.5),
])
def test_descriptor_round_trip(f):
    d = f.to_descriptor()
    g = heights.from_descriptor(d, f.a, f.b)
    xs = np.linspace(f.a, f.b, 37)
    assert np.allclose(f(xs), g(xs), atol=0)


def test_from_descriptor_errors_carry_path():
    with pytest.raises(BodyFileError, match=r"\$\.f"):
        heights.from_descriptor({"kind": "nope"}, -0.5, 0.5, path="$.f")
    with pytest.raises(BodyFileError, match=r"\$\.g"):
        heights.from_descriptor({"no_kind": 1}, -0.5, 0.5, path="$.g")


def test_domain_validation():
    with pytest.raises(BodyFileError):
        heights.polynomial([1.0], 0.5, -0.5)
    with pytest.raises(BodyFileError):
        heights.semicircle(0.5).__class__("semicircle", -0.4, 0.5, r=0.5)
