"""Open multicomponent solutions: partial molar quantities and Gibbs metrics.

The chemical potential of species ``i`` is

    mu_i = mu*_i(T, p) + R T ln(gamma_i x_i),    x_i = N_i / N

so the Gibbs energy ``G = sum N_i mu_i`` is explicit and every metric below
is a block of its Hessian on the chart ``(T, p, N_1, ..., N_r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConsistencyError, DimensionError, DomainError
from .geometry import MetricValue
from .reactions import R_GAS

__all__ = [
    "ActivityModel",
    "IdealActivity",
    "MargulesBinary",
    "FiniteDifferenceActivity",
    "SolutionSpec",
    "PartialMolarSet",
    "partial_molars",
    "total_gibbs",
    "bulk_from_standard_states",
    "open_system_metric",
    "isothermal_isobaric_metric",
    "deviation_decomposition",
]


class ActivityModel:
    """Activity coefficients and their derivatives.

    Subclasses implement :meth:`ln_gamma`, :meth:`dlngamma_dN`,
    :meth:`dlngamma_dT` and :meth:`dlngamma_dp`.  :meth:`excess_bulk`
    returns the second ``(T, p)`` derivatives of the excess Gibbs energy
    ``R T sum N_i ln gamma_i``; the default is zero.
    """

    def ln_gamma(self, T, p, N) -> np.ndarray:
        raise NotImplementedError

    def gamma(self, T, p, N) -> np.ndarray:
        return np.exp(self.ln_gamma(T, p, N))

    def dlngamma_dN(self, T, p, N) -> np.ndarray:
        raise NotImplementedError

    def dlngamma_dT(self, T, p, N) -> np.ndarray:
        raise NotImplementedError

    def dlngamma_dp(self, T, p, N) -> np.ndarray:
        raise NotImplementedError

    def excess_bulk(self, T, p, N):
        """``(G_ex_TT, G_ex_Tp, G_ex_pp)``."""
        return 0.0, 0.0, 0.0


class IdealActivity(ActivityModel):
    """``gamma_i = 1``."""

    def ln_gamma(self, T, p, N):
        return np.zeros(len(N))

    def dlngamma_dN(self, T, p, N):
        return np.zeros((len(N), len(N)))

    def dlngamma_dT(self, T, p, N):
        return np.zeros(len(N))

    def dlngamma_dp(self, T, p, N):
        return np.zeros(len(N))


@dataclass(frozen=True)
class MargulesBinary(ActivityModel):
    """One-parameter Margules model: ``ln gamma_1 = (A / R T) x_2^2``, ``ln gamma_2 = (A / R T) x_1^2``.

    The excess Gibbs energy ``A N_1 N_2 / N`` depends on neither ``T`` nor ``p``.
    """

    A: float
    R: float = R_GAS

    @staticmethod
    def _x(N):
        N = np.asarray(N, dtype=float)
        if N.shape != (2,):
            raise DimensionError(f"Margules binary model needs two species, got {N.shape}")
        n = N.sum()
        return N, n, N[0] / n, N[1] / n

    def ln_gamma(self, T, p, N):
        _, _, x1, x2 = self._x(N)
        c = self.A / (self.R * T)
        return np.array([c * x2 * x2, c * x1 * x1])

    def dlngamma_dN(self, T, p, N):
        _, n, x1, x2 = self._x(N)
        c = 2 * self.A / (self.R * T * n)
        return c * np.array([[-x2 * x2, x1 * x2], [x1 * x2, -x1 * x1]])

    def dlngamma_dT(self, T, p, N):
        return -self.ln_gamma(T, p, N) / T

    def dlngamma_dp(self, T, p, N):
        return np.zeros(2)


class FiniteDifferenceActivity(ActivityModel):
    """Wraps a model that only supplies ``gamma(T, p, N)``.

    Derivatives of ``ln gamma`` come from fourth-order central differences
    with relative step ``h``.
    """

    def __init__(self, gamma_fn: Callable[[float, float, np.ndarray], Sequence[float]], h: float = 1e-3):
        self._fn = gamma_fn
        self.h = h

    def ln_gamma(self, T, p, N):
        g = np.asarray(self._fn(T, p, np.asarray(N, dtype=float)), dtype=float)
        if np.any(g <= 0):
            raise DomainError("activity coefficients must be positive")
        return np.log(g)

    def _d(self, f, x):
        h = self.h * max(1.0, abs(x))
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)

    def dlngamma_dN(self, T, p, N):
        N = np.asarray(N, dtype=float)
        cols = []
        for k in range(N.size):

            def f(v, k=k):
                M = N.copy()
                M[k] = v
                return self.ln_gamma(T, p, M)

            cols.append(self._d(f, N[k]))
        return np.column_stack(cols)

    def dlngamma_dT(self, T, p, N):
        return self._d(lambda t: self.ln_gamma(t, p, N), T)

    def dlngamma_dp(self, T, p, N):
        return self._d(lambda q: self.ln_gamma(T, q, N), p)


@dataclass(frozen=True)
class SolutionSpec:
    """Mole numbers, standard-state potentials and an optional activity model."""

    N: tuple
    mu_star: tuple
    activity: Optional[ActivityModel] = None
    R: float = R_GAS

    def __post_init__(self):
        N = tuple(float(n) for n in np.atleast_1d(self.N))
        if not N:
            raise DimensionError("at least one species is required")
        if any(not (n > 0 and math.isfinite(n)) for n in N):
            raise DomainError(f"all mole numbers must be positive, got {N}", point=N)
        mu = tuple(self.mu_star)
        if len(mu) != len(N):
            raise DimensionError(f"{len(mu)} standard potentials for {len(N)} species")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "mu_star", mu)

    @property
    def r(self) -> int:
        return len(self.N)

    @property
    def moles(self) -> np.ndarray:
        return np.array(self.N)

    @property
    def model(self) -> ActivityModel:
        return self.activity if self.activity is not None else IdealActivity()

    def with_moles(self, N) -> "SolutionSpec":
        return SolutionSpec(tuple(N), self.mu_star, self.activity, self.R)


@dataclass(frozen=True)
class PartialMolarSet:
    S_bar: np.ndarray
    V_bar: np.ndarray
    mu_bar: np.ndarray
    mu_bar_ideal: np.ndarray
    mu_bar_deviation: np.ndarray


def _check_Tp(T, p):
    if not (T > 0 and math.isfinite(T) and math.isfinite(p)):
        raise DomainError(f"need T > 0 and finite p, got T={T}, p={p}", point=(T, p))


def _symmetric_deviation(D: np.ndarray, rtol: float = 1e-6) -> np.ndarray:
    scale = float(np.max(np.abs(D))) if D.size else 0.0
    if scale and np.max(np.abs(D - D.T)) > rtol * scale:
        raise ConsistencyError("d ln(gamma_i)/dN_k is not symmetric; the activity model has no free energy")
    return 0.5 * (D + D.T)


def partial_molars(spec: SolutionSpec, T: float, p: float) -> PartialMolarSet:
    """Partial molar entropies and volumes and the matrix ``d mu_i / d N_k``.

    ``mu_bar_ik = R T [delta_ik / N_i - 1 / N + d ln(gamma_i) / d N_k]`` split
    into its ideal part and its activity (deviation) part.
    """
    _check_Tp(T, p)
    N = spec.moles
    n = N.sum()
    R = spec.R
    act = spec.model
    ln_g = act.ln_gamma(T, p, N)
    dT = act.dlngamma_dT(T, p, N)
    dp = act.dlngamma_dp(T, p, N)
    mu_T = np.array([m.dT(T) for m in spec.mu_star])
    mu_p = np.array([m.dp(p) for m in spec.mu_star])
    S_bar = -(mu_T + R * (ln_g + np.log(N / n) + T * dT))
    V_bar = mu_p + R * T * dp
    ideal = R * T * (np.diag(1.0 / N) - 1.0 / n)
    dev = R * T * _symmetric_deviation(np.asarray(act.dlngamma_dN(T, p, N), dtype=float))
    return PartialMolarSet(S_bar, V_bar, ideal + dev, ideal, dev)


def total_gibbs(spec: SolutionSpec, T: float, p: float, N=None) -> float:
    """``G = sum N_i (mu*_i(T, p) + R T ln(gamma_i x_i))``."""
    N = spec.moles if N is None else np.asarray(N, dtype=float)
    x = N / N.sum()
    mu = np.array([m(T, p) for m in spec.mu_star])
    ln_g = spec.model.ln_gamma(T, p, N)
    return float(np.sum(N * (mu + spec.R * T * (np.log(x) + ln_g))))


def bulk_from_standard_states(spec: SolutionSpec, T: float, p: float):
    """``(C_p, alpha V, k_T V)`` consistent with :func:`total_gibbs`.

    ``C_p = -T G_TT``, ``alpha V = G_Tp`` and ``k_T V = -G_pp``; the ideal
    mixing term is linear in ``T`` and free of ``p`` so only the standard
    states and the excess term contribute.
    """
    _check_Tp(T, p)
    N = spec.moles
    ex_TT, ex_Tp, ex_pp = spec.model.excess_bulk(T, p, N)
    G_TT = float(np.sum(N * np.array([m.d2T(T) for m in spec.mu_star]))) + ex_TT
    G_pp = float(np.sum(N * np.array([m.d2p() for m in spec.mu_star]))) + ex_pp
    return -T * G_TT, ex_Tp, -G_pp


def open_system_metric(spec: SolutionSpec, bulk, T: float, p: float) -> MetricValue:
    """Bordered ``(r + 2)``-square metric on ``(T, p, N_1, ..., N_r)``.

    ``bulk`` is ``(C_p, alpha V, k_T V)``.
    """
    C_p, alphaV, kTV = bulk
    pm = partial_molars(spec, T, p)
    r = spec.r
    g = np.empty((r + 2, r + 2))
    g[0, 0] = -C_p / T
    g[0, 1] = g[1, 0] = alphaV
    g[1, 1] = -kTV
    g[0, 2:] = g[2:, 0] = -pm.S_bar
    g[1, 2:] = g[2:, 1] = pm.V_bar
    g[2:, 2:] = pm.mu_bar
    return MetricValue(g)


def isothermal_isobaric_metric(spec: SolutionSpec, T: float, p: float) -> MetricValue:
    """The ``r``-square block ``d mu_i / d N_k``."""
    return MetricValue(partial_molars(spec, T, p).mu_bar)


def deviation_decomposition(spec: SolutionSpec, T: float, p: float):
    """``(ideal, deviation)`` parts of the isothermal-isobaric metric; they sum to it."""
    pm = partial_molars(spec, T, p)
    return pm.mu_bar_ideal, pm.mu_bar_deviation
