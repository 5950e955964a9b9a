import numpy as np
import pytest

from thermogeom import solutions as so
from thermogeom.errors import ConsistencyError, DomainError
from thermogeom.numdiff import StatePoint, fd_jet3
from thermogeom.potentials import StandardPotential
from thermogeom.reactions import R_GAS

T, P = 300.0, 1.0
RT = R_GAS * T


def spec(N, activity=None):
    mu = tuple(StandardPotential(a0=-100.0 * i, a1=2.0, a2=-5.0 - i, v0=0.02, kp=1e-4) for i in range(len(N)))
    return so.SolutionSpec(tuple(N), mu, activity)


def test_ideal_binary_examples():
    m = so.partial_molars(spec((1.0, 1.0)), T, P).mu_bar
    np.testing.assert_allclose(m, RT * np.array([[0.5, -0.5], [-0.5, 0.5]]))
    m = so.partial_molars(spec((2.0, 3.0)), T, P).mu_bar
    np.testing.assert_allclose(m, RT * np.array([[0.3, -0.2], [-0.2, 2 / 15]]), rtol=1e-12)
    # Gibbs-Duhem: the moles span the null space
    np.testing.assert_allclose(m @ [2.0, 3.0], 0.0, atol=1e-9 * RT)


def test_single_species_metric_vanishes():
    np.testing.assert_allclose(so.isothermal_isobaric_metric(spec((2.5,)), T, P).g, [[0.0]], atol=1e-12)


def test_explicit_ideal_matches_default():
    a = so.partial_molars(spec((1.0, 2.0, 3.0)), T, P)
    b = so.partial_molars(spec((1.0, 2.0, 3.0), so.IdealActivity()), T, P)
    np.testing.assert_array_equal(a.mu_bar, b.mu_bar)
    np.testing.assert_array_equal(a.mu_bar_deviation, 0.0)


def _fd_hessian(sp, N):
    names = tuple(f"N{i}" for i in range(len(N)))
    return fd_jet3(lambda x: so.total_gibbs(sp, T, P, x.values), StatePoint.from_values(names, N), h=1e-3).hess


@pytest.mark.parametrize("A", [0.0, 3000.0, -2000.0])
def test_margules_metric_is_gibbs_hessian(A):
    sp = spec((1.3, 0.7), so.MargulesBinary(A))
    m = so.isothermal_isobaric_metric(sp, T, P).g
    np.testing.assert_allclose(m, _fd_hessian(sp, (1.3, 0.7)), rtol=1e-7, atol=1e-8 * RT)


def test_open_system_metric_is_full_hessian():
    sp = spec((1.3, 0.7), so.MargulesBinary(2500.0))
    bulk = so.bulk_from_standard_states(sp, T, P)
    g = so.open_system_metric(sp, bulk, T, P).g
    f = lambda x: so.total_gibbs(sp.with_moles(x.values[2:]), x.values[0], x.values[1])
    fd = fd_jet3(f, StatePoint.from_values(("T", "p", "N1", "N2"), (T, P, 1.3, 0.7)), h=1e-3).hess
    np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-7 * np.max(np.abs(g)))


def test_decomposition_sums_to_total():
    sp = spec((1.3, 0.7), so.MargulesBinary(2500.0))
    ideal, dev = so.deviation_decomposition(sp, T, P)
    np.testing.assert_allclose(ideal + dev, so.isothermal_isobaric_metric(sp, T, P).g, rtol=1e-14)
    assert np.any(dev != 0)


def test_finite_difference_activity_wrapper():
    marg = so.MargulesBinary(2500.0)
    wrapped = so.FiniteDifferenceActivity(lambda t, p, N: marg.gamma(t, p, N))
    N = (1.3, 0.7)
    np.testing.assert_allclose(wrapped.dlngamma_dN(T, P, N), marg.dlngamma_dN(T, P, N), rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(wrapped.dlngamma_dT(T, P, N), marg.dlngamma_dT(T, P, N), rtol=1e-9)
    np.testing.assert_allclose(wrapped.dlngamma_dp(T, P, N), 0.0, atol=1e-12)


def test_asymmetric_activity_model_rejected():
    # ln gamma_1 depends on N_2 but ln gamma_2 does not depend on N_1
    bad = so.FiniteDifferenceActivity(lambda t, p, N: [np.exp(0.3 * N[1]), 1.0])
    with pytest.raises(ConsistencyError):
        so.partial_molars(spec((1.0, 1.0), bad), T, P)


def test_nonpositive_moles_rejected():
    with pytest.raises(DomainError):
        spec((1.0, 0.0))
    with pytest.raises(DomainError):
        spec((1.0, -2.0))
    with pytest.raises(DomainError):
        so.partial_molars(spec((1.0, 1.0)), -5.0, P)


def test_partial_molar_entropy_and_volume():
    sp = spec((1.0, 3.0))
    pm = so.partial_molars(sp, T, P)
    G = lambda t, p: so.total_gibbs(sp, t, p)
    h = 1e-2  # G is quadratic in p, so the central difference in p is exact up to rounding
    S = -(G(T + h, P) - G(T - h, P)) / (2 * h)
    V = (G(T, P + h) - G(T, P - h)) / (2 * h)
    assert pm.S_bar @ sp.moles == pytest.approx(S, rel=1e-7)
    assert pm.V_bar @ sp.moles == pytest.approx(V, rel=1e-7)
