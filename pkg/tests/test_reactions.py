import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from thermogeom import reactions as rx
from thermogeom.errors import DomainError, InfeasibleExtentError
from thermogeom.geometry import det_and_signature
from thermogeom.numdiff import StatePoint, fd_jet3
from thermogeom.potentials import StandardPotential

MU = (StandardPotential(a0=-1000.0, a1=5.0, a2=-20.0), StandardPotential(a0=-3000.0, a1=12.0, a2=-28.0))


def test_builtin_moles_and_interval():
    s = rx.builtin("synthesis")
    assert rx.feasibility_interval(s) == (0.0, 1.0)
    np.testing.assert_allclose(rx.moles_at(s, 0.25), [1.5, 0.75, 0.5])
    np.testing.assert_allclose(rx.moles_at(rx.builtin("dissociation"), 1.0), [0.0, 2.0, 1.0])
    with pytest.raises(InfeasibleExtentError) as err:
        rx.moles_at(s, 1.5)
    assert set(err.value.negative_species) == {"H2", "O2"}
    with pytest.raises(ValueError):
        rx.builtin("combustion")


def test_stoichiometry_validation():
    with pytest.raises(ValueError):
        rx.Stoichiometry(("A", "B"), (1, 1), (1, 0))
    with pytest.raises(ValueError):
        rx.Stoichiometry(("A", "B"), (-1, 1), (1, 0), (1.0, 2.0))
    with pytest.raises(ValueError):
        rx.Stoichiometry(("A", "B"), (-1, 1), (-1, 0))
    for s in rx.BUILTINS.values():
        if s.molar_mass is not None:
            assert abs(sum(v * m for v, m in zip(s.nu, s.molar_mass))) < 1e-9 * sum(s.molar_mass)


def test_reaction_metric_is_hessian_of_gibbs():
    T, p, xi = 350.0, 2.0, 0.3
    _, jet = rx.ideal_mixture_gibbs(T, p, xi, MU)
    inp = rx.ideal_ab_inputs(T, p, xi, MU)
    np.testing.assert_allclose(rx.gibbs_reaction_metric(inp, T).g, jet.hess, rtol=1e-12)

    f = lambda x: rx.ideal_mixture_gibbs(*x.values, MU)[0]
    fd = fd_jet3(f, StatePoint.from_values(("T", "p", "xi"), (T, p, xi)), h=1e-3)
    np.testing.assert_allclose(fd.hess, jet.hess, rtol=1e-6, atol=1e-7 * np.max(np.abs(jet.hess)))
    fd3 = fd_jet3(f, StatePoint.from_values(("T", "p", "xi"), (T, p, xi)))
    np.testing.assert_allclose(fd3.third, jet.third, atol=1e-4 * np.max(np.abs(jet.third)))


def test_expanded_determinants():
    T, p, xi = 350.0, 2.0, 0.3
    inp = rx.ideal_ab_inputs(T, p, xi, MU)
    det = np.linalg.det(rx.gibbs_reaction_metric(inp, T).g)
    assert rx.expanded_determinant(inp, T) == pytest.approx(det, rel=1e-9)
    # with C_v set equal to C_p the expansion is off by T (alpha V)^2 / kTV times the minor
    C_v = inp.C_p
    assert rx.expanded_determinant(inp, T, C_v=C_v) != pytest.approx(det, rel=1e-9)
    assert rx.ideal_ab_reduced_determinant(T, p, xi, MU) == pytest.approx(det, rel=1e-9)


def test_unstable_affinity_slope_rejected():
    with pytest.raises(DomainError):
        rx.ReactionMetricInputs(1.0, 0.0, 1.0, 0.0, 0.0, dA_dxi=0.5)
    inp = rx.ReactionMetricInputs(1.0, 0.0, 1.0, 0.0, 0.0, dA_dxi=0.5, allow_unstable=True)
    assert rx.gibbs_reaction_metric(inp, 300.0).g[2, 2] == -0.5


def test_ideal_isothermal_metric():
    m = rx.ideal_isothermal_metric(300.0, 2.0, 0.25)
    R = rx.R_GAS
    np.testing.assert_allclose(np.diag(m.g), [-R * 300 / 4, R * 300 / (0.25 * 0.75)])
    d, sig = det_and_signature(m)
    assert sig.kind == "indefinite"
    ab = rx.mixture_isothermal_metric(rx.builtin("a-to-b"), 300.0, 2.0, 0.25)
    np.testing.assert_allclose(ab.g, m.g, rtol=1e-12)


@pytest.mark.parametrize(
    "name,W",
    [
        ("synthesis", lambda x: -6 / (x * (1 - x) * (3 - x))),
        ("dissociation", lambda x: -6 / (x * (1 - x) * (2 + x))),
        ("displacement", lambda x: -2 / (x * (1 - x))),
    ],
)
def test_w_closed_forms(name, W):
    s = rx.builtin(name)
    for xi in np.linspace(0.05, 0.95, 19):
        assert rx.w_phase_boundary(s, xi) == pytest.approx(W(xi), rel=1e-12)
        h = 1e-6
        fd = (rx.w_phase_boundary(s, xi + h) - rx.w_phase_boundary(s, xi - h)) / (2 * h)
        assert rx.dw_phase_boundary(s, xi) == pytest.approx(fd, rel=1e-6)


def test_dissociation_mirrors_synthesis():
    syn, dis = rx.builtin("synthesis"), rx.builtin("dissociation")
    for xi in (0.1, 0.37, 0.8):
        assert rx.w_phase_boundary(dis, xi) == pytest.approx(rx.w_phase_boundary(syn, 1 - xi), rel=1e-12)
    assert rx.critical_extent(dis).xi_star == pytest.approx(1 - rx.critical_extent(syn).xi_star, abs=1e-10)


def test_critical_extents():
    syn = rx.critical_extent(rx.builtin("synthesis"))
    # root of the quadratic 3 xi^2 - 8 xi + 3 = 0 in (0, 1)
    assert syn.xi_star == pytest.approx((4 - math.sqrt(7)) / 3, abs=1e-10)
    assert syn.W_star == pytest.approx(-6 / (syn.xi_star * (1 - syn.xi_star) * (3 - syn.xi_star)), rel=1e-10)
    disp = rx.critical_extent(rx.builtin("displacement"))
    assert disp.xi_star == pytest.approx(0.5, abs=1e-10)
    assert disp.W_star == pytest.approx(-8.0, rel=1e-12)
    assert not disp.monotone


def test_classify_convexity():
    s = rx.builtin("a-to-b")
    wb = rx.w_phase_boundary(s, 0.3)
    assert rx.classify_convexity(s, 0.3, 0.0) == "convex"
    assert rx.classify_convexity(s, 0.3, wb - 1.0) == "concave"
    assert rx.classify_convexity(s, 0.3, wb) == "boundary"
    assert rx.d2G_dxi2(s, 0.3, 300.0, lambda x: wb) == pytest.approx(0.0, abs=1e-9)


def test_quotient_of_reaction():
    ab = rx.builtin("a-to-b")
    for xi in (0.2, 0.5, 0.9):
        q = rx.quotient_of_reaction(ab, xi)
        assert q.Q_c == pytest.approx(xi / (1 - xi), rel=1e-12)
        assert q.Q_a == pytest.approx(q.Q_c)
        assert q.dlnQc_dxi == pytest.approx(1 / (xi * (1 - xi)), rel=1e-12)
    q = rx.quotient_of_reaction(rx.builtin("displacement"), 0.5, lambda x: [0.1, 0.2, 0.3, 0.4], 1000.0, 300.0)
    assert q.Q_c == pytest.approx(1.0)
    assert q.Q_a == pytest.approx(math.exp(0.4))
    assert q.K_a == pytest.approx(math.exp(-1000.0 / (rx.R_GAS * 300.0)))


def test_logistic_curve():
    T = 300.0
    d = np.linspace(-5000.0, 5000.0, 41)
    c = rx.logistic_curve(T, 0.3, d)
    assert c.xi[20] == pytest.approx(0.3)
    assert rx.logistic_curve(T, 0.0, d).xi.tolist() == [0.0] * 41
    assert rx.logistic_curve(T, 1.0, d).xi.tolist() == [1.0] * 41
    far = rx.logistic_curve(T, 0.3, [1e6, -1e6]).xi
    assert far[0] == pytest.approx(1.0) and far[1] == pytest.approx(0.0, abs=1e-12)
    rhs = lambda t, y: y * (1 - y) / (rx.R_GAS * T)
    up = solve_ivp(rhs, (0.0, 5000.0), [0.3], t_eval=d[20:], rtol=1e-12, atol=1e-14)
    down = solve_ivp(rhs, (0.0, -5000.0), [0.3], t_eval=d[20::-1], rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(c.xi[20:], up.y[0], rtol=1e-8)
    np.testing.assert_allclose(c.xi[20::-1], down.y[0], rtol=1e-8)


def test_multireaction_reduces_to_single():
    T, p, xi = 350.0, 2.0, 0.3
    inp = rx.ideal_ab_inputs(T, p, xi, MU)
    m = rx.multireaction_metric(inp.C_p, inp.alphaV, inp.kTV, [inp.dS_r], [inp.dV_r], [[inp.dA_dxi]], T)
    np.testing.assert_allclose(m.g, rx.gibbs_reaction_metric(inp, T).g)


def test_multireaction_two_independent_reactions():
    # A -> B and C -> D, one mole in each pair; G is the sum of two mixtures
    T, p, x1, x2 = 320.0, 1.5, 0.3, 0.6
    mu2 = (StandardPotential(a0=500.0, a1=-2.0, a2=-15.0), StandardPotential(a0=-200.0, a1=1.0, a2=-10.0))

    def G(x):
        t, q, a, b = x.values
        return rx.ideal_mixture_gibbs(t, q, a, MU)[0] + rx.ideal_mixture_gibbs(t, q, b, mu2)[0]

    fd = fd_jet3(G, StatePoint.from_values(("T", "p", "xi1", "xi2"), (T, p, x1, x2)), h=1e-3)
    i1 = rx.ideal_ab_inputs(T, p, x1, MU)
    i2 = rx.ideal_ab_inputs(T, p, x2, mu2)
    m = rx.multireaction_metric(
        i1.C_p + i2.C_p,
        i1.alphaV + i2.alphaV,
        i1.kTV + i2.kTV,
        [i1.dS_r, i2.dS_r],
        [i1.dV_r, i2.dV_r],
        np.diag([i1.dA_dxi, i2.dA_dxi]),
        T,
    )
    np.testing.assert_allclose(m.g, fd.hess, rtol=1e-6, atol=1e-7 * np.max(np.abs(m.g)))
    assert m.g[2, 3] == 0.0
    with pytest.raises(ValueError):
        rx.multireaction_metric(1.0, 0.0, 1.0, [0, 0], [0, 0], [[-1.0, 0.5], [0.0, -1.0]], T)


def test_gibbs_scan_derivatives_and_double_well():
    s = rx.builtin("a-to-b")
    T = 300.0
    xs = np.linspace(0.05, 0.95, 19)
    rows = rx.gibbs_scan(s, T, xs)
    assert all(r[3] > 0 for r in rows)
    h = 1e-6
    for xi, G, d1, d2 in rows:
        assert d1 == pytest.approx((rx.mixing_gibbs(s, xi + h, T) - rx.mixing_gibbs(s, xi - h, T)) / (2 * h), rel=1e-6, abs=1e-6)
    ex = rx.RegularExcess(3 * rx.R_GAS * T)
    rows = rx.gibbs_scan(s, T, xs, excess=ex)
    assert rows[9][3] < 0 < rows[0][3]
    slopes = [r[2] for r in rx.gibbs_scan(s, T, np.linspace(0.01, 0.99, 99), excess=ex)]
    minima = [i for i in range(98) if slopes[i] < 0 <= slopes[i + 1]]
    assert len(minima) == 2
    with pytest.raises(DomainError):
        rx.gibbs_scan(s, T, [0.0])
