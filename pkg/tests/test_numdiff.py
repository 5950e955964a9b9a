import math

import numpy as np
import pytest

from thermogeom.errors import DimensionError, DomainError
from thermogeom.numdiff import (
    Jet3,
    StatePoint,
    default_steps,
    fd_jet3,
    make_analytic_surface,
    make_fd_surface,
    symmetrize_matrix,
    symmetrize_tensor3,
)


def test_statepoint_basics():
    x = StatePoint.from_values(["s", "v"], [0.5, 2.0], "(s,v)")
    assert x.names == ("s", "v")
    assert x["v"] == 2.0
    assert x.dim == 2
    np.testing.assert_array_equal(x.values, [0.5, 2.0])
    y = x.with_values([1.0, 3.0])
    assert y.chart == "(s,v)" and y["s"] == 1.0


def test_statepoint_rejects_duplicates_and_nonfinite():
    with pytest.raises(ValueError, match="duplicate"):
        StatePoint.from_values(["x", "x"], [1.0, 2.0])
    with pytest.raises(DomainError):
        StatePoint.from_values(["x"], [math.nan])


def test_jet_shape_validation():
    with pytest.raises(DimensionError):
        Jet3(0.0, np.zeros(2), np.zeros((3, 3)), np.zeros((2, 2, 2)))
    j = Jet3(1.0, np.zeros(2), np.eye(2), np.zeros((2, 2, 2)))
    assert j.dim == 2
    with pytest.raises(ValueError):
        j.hess[0, 0] = 5.0  # read-only


def test_symmetrize_tensor3_is_exactly_symmetric(rng):
    t = symmetrize_tensor3(rng.normal(size=(3, 3, 3)))
    for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
        assert np.array_equal(t, np.transpose(t, perm))
    m = symmetrize_matrix(rng.normal(size=(3, 3)))
    assert np.array_equal(m, m.T)


def test_default_steps_scale():
    np.testing.assert_allclose(default_steps([0.1, 50.0]), [1e-2, 0.5])
    with pytest.raises(ValueError):
        default_steps([1.0], h=0.0)


def test_fd_jet3_on_cubic_is_exact():
    # f = x^3 + 2 x^2 y - y^3 + 3xy ; exact derivatives through third order
    def f(p):
        x, y = p.values
        return x**3 + 2 * x * x * y - y**3 + 3 * x * y

    x0 = StatePoint.from_values(["x", "y"], [0.7, -1.3])
    j = fd_jet3(f, x0)
    x, y = 0.7, -1.3
    np.testing.assert_allclose(j.grad, [3 * x * x + 4 * x * y + 3 * y, 2 * x * x - 3 * y * y + 3 * x], rtol=1e-10)
    np.testing.assert_allclose(j.hess, [[6 * x + 4 * y, 4 * x + 3], [4 * x + 3, -6 * y]], rtol=1e-9)
    assert j.third[0, 0, 0] == pytest.approx(6.0, rel=1e-7)
    assert j.third[0, 0, 1] == pytest.approx(4.0, rel=1e-7)
    assert j.third[1, 1, 1] == pytest.approx(-6.0, rel=1e-7)
    assert j.third[0, 1, 1] == pytest.approx(0.0, abs=1e-7)


def test_fd_jet3_transcendental(rng):
    def f(p):
        x, y, z = p.values
        return math.exp(x) * math.sin(y) + math.log(z) * x

    v = np.array([0.3, 0.8, 1.7])
    j = fd_jet3(f, StatePoint.from_values(["x", "y", "z"], v))
    x, y, z = v
    assert j.hess[0, 1] == pytest.approx(math.exp(x) * math.cos(y), rel=1e-8)
    assert j.third[0, 0, 1] == pytest.approx(math.exp(x) * math.cos(y), rel=1e-6)
    assert j.third[2, 2, 2] == pytest.approx(2 * x / z**3, rel=1e-6)
    assert j.third[0, 2, 2] == pytest.approx(-1 / z**2, rel=1e-6)


def test_fd_jet3_names_offending_point():
    def f(p):
        x = p.values[0]
        if x < 1.0:
            raise DomainError("below one")
        return x * x

    with pytest.raises(DomainError) as err:
        fd_jet3(f, StatePoint.from_values(["x"], [1.005]))
    assert err.value.point is not None


def test_fd_jet3_nonfinite_value():
    with pytest.raises(DomainError):
        fd_jet3(lambda p: math.inf, StatePoint.from_values(["x"], [1.0]))


def test_surfaces_agree():
    names = ("x", "y")

    def value(x):
        return math.exp(x[0]) + x[0] * x[1] ** 2

    def grad(x):
        return np.array([math.exp(x[0]) + x[1] ** 2, 2 * x[0] * x[1]])

    def hess(x):
        return np.array([[math.exp(x[0]), 2 * x[1]], [2 * x[1], 2 * x[0]]])

    def third(x):
        t = np.zeros((2, 2, 2))
        t[0, 0, 0] = math.exp(x[0])
        for idx in [(0, 1, 1), (1, 0, 1), (1, 1, 0)]:
            t[idx] = 2.0
        return t

    domain = lambda x: x[0] > -5  # noqa: E731
    a = make_analytic_surface(2, "(x,y)", names, value, grad, hess, third, domain)
    f = make_fd_surface(2, "(x,y)", names, value, domain)
    p = a.point(0.4, -0.6)
    ja, jf = a.jet(p), f.jet(p)
    np.testing.assert_allclose(jf.hess, ja.hess, rtol=1e-8)
    np.testing.assert_allclose(jf.third, ja.third, rtol=1e-6, atol=1e-8)
    assert a.value(p) == f.value(p)
    with pytest.raises(DomainError):
        a.jet(a.point(-6.0, 0.0))
