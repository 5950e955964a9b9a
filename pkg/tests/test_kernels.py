import importlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from thermogeom import _pykernels, kernels
from thermogeom.numdiff import symmetrize_tensor3

try:
    _ckernels = importlib.import_module("thermogeom._ckernels")
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _spd(rng, k):
    a = rng.normal(size=(k, k))
    return a @ a.T + k * np.eye(k)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_det_matches_numpy(mod, rng):
    for k in range(1, 7):
        a = rng.normal(size=(k, k))
        assert mod.det(a) == pytest.approx(np.linalg.det(a), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_det_singular_is_zero(mod):
    assert mod.det(np.zeros((3, 3))) == 0.0
    assert mod.det([[1.0, 2.0], [2.0, 4.0]]) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_inv_matches_numpy(mod, rng):
    a = rng.normal(size=(5, 5)) + 3 * np.eye(5)
    np.testing.assert_allclose(mod.inv(a), np.linalg.inv(a), rtol=1e-11, atol=1e-13)
    with pytest.raises(ZeroDivisionError):
        mod.inv(np.zeros((2, 2)))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_jacobi_eigenvalues(mod, rng):
    for k in (1, 2, 3, 6, 10):
        a = rng.normal(size=(k, k))
        a = a + a.T
        np.testing.assert_allclose(mod.jacobi_eigenvalues(a), np.linalg.eigvalsh(a), rtol=1e-10, atol=1e-12)
    assert np.all(mod.jacobi_eigenvalues(np.zeros((3, 3))) == 0)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_hessian_christoffel_is_levi_civita_for_symmetric_dg(mod, rng):
    g = _spd(rng, 3)
    dg = symmetrize_tensor3(rng.normal(size=(3, 3, 3)))
    gi = np.linalg.inv(g)
    np.testing.assert_allclose(mod.hessian_christoffel(gi, dg), mod.levi_civita_christoffel(gi, dg), rtol=1e-12)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)
def test_riemann_symmetries(mod, rng):
    g = _spd(rng, 4)
    gi = np.linalg.inv(g)
    dg = symmetrize_tensor3(rng.normal(size=(4, 4, 4)))
    r = mod.hessian_riemann(gi, dg)
    # antisymmetric in the last pair
    np.testing.assert_allclose(r, -np.swapaxes(r, 2, 3), atol=1e-12)
    # lowered tensor is antisymmetric in the first pair as well
    low = np.einsum("ml,lijk->mijk", g, r)
    np.testing.assert_allclose(low, -np.swapaxes(low, 0, 1), atol=1e-11)
    # first Bianchi identity
    bianchi = r + np.einsum("lijk->ljki", r) + np.einsum("lijk->lkij", r)
    np.testing.assert_allclose(bianchi, 0.0, atol=1e-11)


@needs_c
@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(1, 6),
    seed=st.integers(0, 2**31 - 1),
)
def test_backends_agree(k, seed):
    rng = np.random.default_rng(seed)
    g = _spd(rng, k)
    gi = np.linalg.inv(g)
    dg = symmetrize_tensor3(rng.normal(size=(k, k, k)))
    assert _ckernels.det(g) == pytest.approx(_pykernels.det(g), rel=1e-12)
    np.testing.assert_allclose(_ckernels.inv(g), _pykernels.inv(g), rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(_ckernels.jacobi_eigenvalues(g), _pykernels.jacobi_eigenvalues(g), rtol=1e-10)
    for name in ("hessian_christoffel", "levi_civita_christoffel", "hessian_riemann"):
        a = getattr(_ckernels, name)(gi, dg)
        b = getattr(_pykernels, name)(gi, dg)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12 * max(1.0, np.max(np.abs(b))))
    r = _pykernels.hessian_riemann(gi, dg)
    ric_c, sc_c = _ckernels.ricci_scalar(r, gi)
    ric_p, sc_p = _pykernels.ricci_scalar(r, gi)
    np.testing.assert_allclose(ric_c, ric_p, rtol=1e-10, atol=1e-12)
    assert sc_c == pytest.approx(sc_p, rel=1e-10, abs=1e-12)


@needs_c
def test_read_only_inputs_accepted():
    g = np.eye(2)
    g.setflags(write=False)
    dg = np.zeros((2, 2, 2))
    dg.setflags(write=False)
    _ckernels.hessian_riemann(g, dg)
    _ckernels.det(g)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-10, 10)))
def test_det_property_against_numpy(a):
    with np.errstate(divide="ignore", invalid="ignore"):
        expected = np.linalg.det(a)
    assert kernels.det(a) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_backend_selection_env(monkeypatch):
    monkeypatch.setenv("THERMOGEOM_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("THERMOGEOM_PURE_PYTHON")
        importlib.reload(kernels)
