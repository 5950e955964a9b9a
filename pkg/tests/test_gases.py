import math

import numpy as np
import pytest

from thermogeom import gases
from thermogeom.errors import (
    DivergenceError,
    DomainError,
    MechanicalInstabilityError,
    NoCriticalPointError,
)
from thermogeom.geometry import curvature, det_and_signature
from thermogeom.geometry import hessian_metric
from thermogeom.gases import GasModel

IDEAL = GasModel.ideal()
VDW = GasModel.vdw(1.0, 0.1)
BERT = GasModel.berthelot(1.0, 0.1)


def test_pressures():
    assert gases.pressure(IDEAL, 2.0, 4.0) == pytest.approx(0.5)
    assert gases.pressure(VDW, 1.0, 1.0) == pytest.approx(1 / 0.9 - 1.0, rel=1e-14)
    assert gases.pressure(BERT, 1.0, 1.0) == pytest.approx(1 / 0.9 - 1.0, rel=1e-14)
    assert gases.pressure(BERT, 2.0, 1.0) == pytest.approx(2 / 0.9 - 0.5, rel=1e-14)


def test_eos_derivatives_match_finite_differences():
    h = 1e-6
    for model in (VDW, BERT):
        T, v = 1.3, 0.7
        p, pT, pv, pTT, pTv, pvv = gases.eos_derivatives(model, T, v)
        P = lambda t, w: gases.pressure(model, t, w)
        assert pT == pytest.approx((P(T + h, v) - P(T - h, v)) / (2 * h), rel=1e-8)
        assert pv == pytest.approx((P(T, v + h) - P(T, v - h)) / (2 * h), rel=1e-8)
        d = lambda f, x: (f(x + 1e-4) - f(x - 1e-4)) / 2e-4
        assert pTT == pytest.approx(d(lambda t: gases.eos_derivatives(model, t, v)[1], T), rel=1e-6, abs=1e-9)
        assert pTv == pytest.approx(d(lambda w: gases.eos_derivatives(model, T, w)[1], v), rel=1e-6)
        assert pvv == pytest.approx(d(lambda w: gases.eos_derivatives(model, T, w)[2], v), rel=1e-6)


def test_ideal_metric_is_flat():
    m = gases.weinhold_metric(IDEAL, 2.0, 3.0)
    np.testing.assert_allclose(m.g, [[2 / 1.5, -(2 / 3) / 1.5], [-(2 / 3) / 1.5, 2 / 9 + 2 * (1 / 9) / 1.5]])
    assert curvature(m).scalar == pytest.approx(0.0, abs=1e-12)
    assert gases.curvature_closed_form(IDEAL, 2.0, 3.0) == 0.0


@pytest.mark.parametrize("model", [IDEAL, VDW])
def test_analytic_metric_matches_fd_hessian(model):
    T, v = 1.2, 0.8
    s = gases.entropy(model, T, v)
    surf = gases.internal_energy_surface(model, method="fd")
    fd = hessian_metric(surf, surf.point(s, v))
    m = gases.weinhold_metric(model, T, v)
    np.testing.assert_allclose(fd.g, m.g, rtol=1e-7, atol=1e-9 * np.max(np.abs(m.g)))
    np.testing.assert_allclose(fd.dg, m.dg, rtol=1e-5, atol=1e-6 * np.max(np.abs(m.dg)))


def test_vdw_curvature_closed_form_matches_pipeline():
    for T, v in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.3)]:
        r = curvature(gases.weinhold_metric(VDW, T, v)).scalar
        assert gases.curvature_closed_form(VDW, T, v) == pytest.approx(r, rel=1e-10)


def test_curvature_positive_as_b_vanishes():
    r = curvature(gases.weinhold_metric(GasModel.vdw(1.0, 0.0), 1.0, 1.0)).scalar
    assert r == pytest.approx(1.0 * 1.0 / (1.5 * (0.0 - 1.0) ** 2))
    assert r > 0


def test_response_functions():
    rf = gases.response_functions(IDEAL, 2.0, 4.0)
    assert rf.k_T == pytest.approx(1 / 0.5)
    assert rf.alpha == pytest.approx(1 / 2.0)
    assert rf.c_p - rf.c_v == pytest.approx(1.0)
    with pytest.raises(MechanicalInstabilityError):
        gases.response_functions(GasModel.vdw(27.0, 1.0), 0.5, 3.0)


def test_heat_capacities_agree_with_response_functions():
    for model in (VDW, BERT):
        rf = gases.response_functions(model, 2.0, 2.0)
        c_v, c_p = gases.heat_capacities(model, 2.0, 2.0)
        assert c_v == pytest.approx(rf.c_v, rel=1e-12)
        assert c_p == pytest.approx(rf.c_p, rel=1e-10)


def test_reference_constants_shift_entropy_only():
    alt = GasModel.vdw(1.0, 0.1, T0=2.5, v0=3.0, s0=-4.0)
    d1 = gases.entropy(VDW, 1.0, 1.0) - gases.entropy(alt, 1.0, 1.0)
    d2 = gases.entropy(VDW, 2.0, 5.0) - gases.entropy(alt, 2.0, 5.0)
    assert d1 == pytest.approx(d2, rel=1e-12)
    np.testing.assert_allclose(gases.weinhold_metric(alt, 1.0, 1.0).g, gases.weinhold_metric(VDW, 1.0, 1.0).g)


def test_berthelot_entropy_volume_dependence_up_to_constant():
    # the textbook s(v) at fixed T differs from the model entropy by a constant
    T = 1.4
    reference = lambda v: BERT.R * math.log(v - BERT.b) - BERT.a / (T * T * v)
    diffs = [gases.entropy(BERT, T, v) - reference(v) for v in (0.5, 1.0, 4.0)]
    assert max(diffs) - min(diffs) < 1e-12


@pytest.mark.parametrize("model", [IDEAL, VDW, BERT])
def test_temperature_from_sv_round_trip(model):
    for T, v in [(0.3, 0.5), (1.0, 1.0), (7.0, 20.0)]:
        s = gases.entropy(model, T, v)
        assert gases.temperature_from_sv(model, s, v) == pytest.approx(T, rel=1e-12)


def test_spinodal_vdw():
    model = GasModel.vdw(27.0, 1.0)
    curve = gases.spinodal(model)
    assert curve.pressure(3.0) == pytest.approx(1.0)
    assert curve.temperature(3.0) == pytest.approx(8.0)
    for v in np.linspace(1.5, 10.0, 12):
        m = gases.weinhold_metric(model, curve.temperature(v), v)
        d, sig = det_and_signature(m)
        assert abs(d) / m.scale**2 < 1e-10
        assert gases.eos_derivatives(model, curve.temperature(v), v)[2] == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(DivergenceError):
        gases.curvature_closed_form(model, curve.temperature(2.0), 2.0)


def test_ideal_has_no_spinodal():
    assert gases.spinodal(IDEAL).empty
    with pytest.raises(NoCriticalPointError):
        gases.spinodal(IDEAL).temperature(1.0)
    with pytest.raises(NoCriticalPointError):
        gases.critical_point(IDEAL)


def test_critical_points():
    cp = gases.critical_point(GasModel.vdw(27.0, 1.0, R=8.0))
    assert (cp.p_c, cp.T_c, cp.v_c) == pytest.approx((1.0, 1.0, 3.0))
    bc = gases.critical_point(GasModel.berthelot(1.0, 1.0))
    assert bc.p_c == pytest.approx(math.sqrt(1 / 216))
    assert bc.T_c == pytest.approx(math.sqrt(8 / 27))
    assert bc.v_c == 3.0
    assert bc.negative_branch == pytest.approx((-bc.p_c, -bc.T_c, 3.0))
    np.testing.assert_allclose(bc.numeric, (bc.p_c, bc.T_c, bc.v_c), rtol=1e-6)


def test_berthelot_spinodal_is_degenerate():
    curve = gases.spinodal(BERT)
    for v in (0.2, 0.5, 2.0):
        T = curve.temperature(v)
        assert gases.eos_derivatives(BERT, T, v)[2] == pytest.approx(0.0, abs=1e-9)
        assert curve.pressure(v) == pytest.approx(gases.pressure(BERT, T, v), rel=1e-12)


def test_berthelot_fd_pipeline_is_step_stable():
    s = gases.entropy(BERT, 1.0, 1.0)
    f1 = gases.internal_energy_surface(BERT, h=1e-2)
    f2 = gases.internal_energy_surface(BERT, h=5e-3)
    r1 = curvature(hessian_metric(f1, f1.point(s, 1.0))).scalar
    r2 = curvature(hessian_metric(f2, f2.point(s, 1.0))).scalar
    assert r1 == pytest.approx(r2, rel=1e-4)
    assert math.isfinite(gases.curvature_closed_form(BERT, 1.0, 1.0))


def test_reduced_branches():
    assert gases.reduced_spinodal_branches(1.0) == []
    assert gases.reduced_spinodal_branches(1.5) == []
    phys = gases.reduced_spinodal_branches(0.8)
    assert [b.branch_id for b in phys] == [2, 3]
    assert all(b.physical and b.residual < 1e-12 for b in phys)
    for b in phys:
        T_r, p_r = gases.reduced_spinodal_pT(b.v_r)
        assert (T_r, p_r) == pytest.approx((0.8, b.p_r), rel=1e-10)
    allb = gases.reduced_spinodal_branches(0.8, include_unphysical=True)
    assert allb[0].branch_id == 1 and not allb[0].physical and allb[0].v_r < 1 / 3
    with pytest.raises(DomainError):
        gases.reduced_spinodal_pT(0.3)


def test_domain_and_parameter_errors():
    with pytest.raises(DomainError):
        gases.pressure(VDW, 1.0, 0.05)
    with pytest.raises(DomainError):
        gases.pressure(VDW, -1.0, 1.0)
    with pytest.raises(ValueError):
        GasModel.vdw(-1.0, 0.1)
    with pytest.raises(ValueError):
        GasModel("ideal", gases.GasParams(a=1.0))
    with pytest.raises(ValueError):
        gases.internal_energy_surface(BERT, method="analytic")
