"""Single and multiple chemical reactions in a closed system.

Mole numbers follow ``N_i = N_i0 + nu_i xi``.  The Gibbs metric of one
reaction lives on the chart ``(T, p, xi)``; the affinity is ``A = -Delta_r G``
throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import expit, logit

from .errors import DomainError, InfeasibleExtentError
from .geometry import MetricValue
from .numdiff import Jet3
from .potentials import StandardPotential
from .scan import ScanResult, scan_1d

__all__ = [
    "R_GAS",
    "Stoichiometry",
    "BUILTINS",
    "builtin",
    "moles_at",
    "feasibility_interval",
    "ReactionMetricInputs",
    "gibbs_reaction_metric",
    "expanded_determinant",
    "ideal_mixture_gibbs",
    "ideal_ab_inputs",
    "ideal_ab_reduced_determinant",
    "isothermal_metric",
    "ideal_isothermal_metric",
    "mixture_isothermal_metric",
    "d2G_dxi2",
    "QuotientOfReaction",
    "quotient_of_reaction",
    "w_phase_boundary",
    "dw_phase_boundary",
    "classify_convexity",
    "CriticalExtent",
    "critical_extent",
    "LogisticCurve",
    "logistic_curve",
    "multireaction_metric",
    "RegularExcess",
    "mixing_gibbs",
    "gibbs_scan",
]

R_GAS = 8.314462618


@dataclass(frozen=True)
class Stoichiometry:
    """Species labels, stoichiometric numbers (negative for reactants) and initial moles."""

    species: tuple
    nu: tuple
    n0: tuple
    molar_mass: Optional[tuple] = None

    def __post_init__(self):
        species = tuple(str(s) for s in self.species)
        nu = tuple(int(v) for v in self.nu)
        n0 = tuple(float(v) for v in self.n0)
        if not (len(species) == len(nu) == len(n0)) or not species:
            raise ValueError("species, nu and n0 must have the same non-zero length")
        if not (any(v < 0 for v in nu) and any(v > 0 for v in nu)):
            raise ValueError("a reaction needs at least one reactant and one product")
        if any(not (v >= 0 and math.isfinite(v)) for v in n0):
            raise ValueError("initial moles must be finite and non-negative")
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "n0", n0)
        if self.molar_mass is not None:
            mm = tuple(float(m) for m in self.molar_mass)
            if len(mm) != len(nu):
                raise ValueError("molar_mass must have one entry per species")
            balance = sum(v * m for v, m in zip(nu, mm))
            if abs(balance) > 1e-9 * sum(abs(v) * m for v, m in zip(nu, mm)):
                raise ValueError(f"stoichiometric equation violated: sum nu_i M_i = {balance:.6g}")
            object.__setattr__(self, "molar_mass", mm)

    @property
    def r(self) -> int:
        return len(self.nu)

    @property
    def nu_array(self) -> np.ndarray:
        return np.array(self.nu, dtype=float)

    @property
    def n0_array(self) -> np.ndarray:
        return np.array(self.n0, dtype=float)


BUILTINS = {
    "synthesis": Stoichiometry(("H2", "O2", "H2O"), (-2, -1, 2), (2, 1, 0), (2.016, 31.998, 18.015)),
    "dissociation": Stoichiometry(("H2O", "H2", "O2"), (-2, 2, 1), (2, 0, 0), (18.015, 2.016, 31.998)),
    "displacement": Stoichiometry(
        ("Zn", "CuSO4", "Cu", "ZnSO4"), (-1, -1, 1, 1), (1, 1, 0, 0), (65.38, 159.602, 63.546, 161.436)
    ),
    "a-to-b": Stoichiometry(("A", "B"), (-1, 1), (1, 0)),
}


def builtin(name: str) -> Stoichiometry:
    try:
        return BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown built-in reaction {name!r}; choose from {sorted(BUILTINS)}") from None


def feasibility_interval(s: Stoichiometry):
    """``(xi_min, xi_max)`` on which every ``N_i(xi) >= 0``."""
    lo = max(-n / v for v, n in zip(s.nu, s.n0) if v > 0)
    hi = min(n / -v for v, n in zip(s.nu, s.n0) if v < 0)
    return lo + 0.0, hi + 0.0  # normalise -0.0


def moles_at(s: Stoichiometry, xi: float) -> np.ndarray:
    N = s.n0_array + s.nu_array * xi
    bad = [sp for sp, n in zip(s.species, N) if n < 0]
    if bad:
        lo, hi = feasibility_interval(s)
        raise InfeasibleExtentError(
            f"extent {xi} outside the feasible interval [{lo}, {hi}]; negative moles of {', '.join(bad)}",
            point=(xi,),
            negative_species=tuple(bad),
        )
    return N


def _interior_moles(s: Stoichiometry, xi: float) -> np.ndarray:
    N = moles_at(s, xi)
    if np.any(N == 0):
        zero = [sp for sp, n in zip(s.species, N) if n == 0]
        raise DomainError(f"extent {xi} is on the boundary: no moles of {', '.join(zero)}", point=(xi,))
    return N


@dataclass(frozen=True)
class ReactionMetricInputs:
    """Bulk response terms and reaction quantities entering the Gibbs reaction metric.

    ``alphaV`` and ``kTV`` are the products ``alpha V`` and ``k_T V``.
    ``dA_dxi`` is ``(dA/dxi)_{T,p}``, which a stable system keeps ``<= 0``;
    set ``allow_unstable`` to evaluate the metric anyway.
    """

    C_p: float
    alphaV: float
    kTV: float
    dS_r: float
    dV_r: float
    dA_dxi: float
    A: float = 0.0
    allow_unstable: bool = False

    def __post_init__(self):
        if self.dA_dxi > 0 and not self.allow_unstable:
            raise DomainError(f"(dA/dxi)_T,p = {self.dA_dxi:.6g} > 0 is locally unstable")


def gibbs_reaction_metric(inp: ReactionMetricInputs, T: float) -> MetricValue:
    """Hessian of ``G`` on ``(T, p, xi)`` assembled from response and reaction terms."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}", point=(T,))
    g = np.array(
        [
            [-inp.C_p / T, inp.alphaV, -inp.dS_r],
            [inp.alphaV, -inp.kTV, inp.dV_r],
            [-inp.dS_r, inp.dV_r, -inp.dA_dxi],
        ]
    )
    return MetricValue(g)


def expanded_determinant(inp: ReactionMetricInputs, T: float, C_v: Optional[float] = None) -> float:
    """Expanded determinant written with ``C_v``, ``k_T V`` and ``alpha / k_T``.

    ``-(C_v kTV / T) A' + (C_v / T) dV_r^2 + kTV (dS_r - (alphaV / kTV) dV_r)^2``

    With ``C_v`` left as ``None`` the value ``C_p - T (alphaV)^2 / kTV`` is
    used, for which the expansion equals the metric determinant exactly.
    """
    if C_v is None:
        C_v = inp.C_p - T * inp.alphaV**2 / inp.kTV
    return (
        -C_v * inp.kTV / T * inp.dA_dxi
        + C_v / T * inp.dV_r**2
        + inp.kTV * (inp.dS_r - inp.alphaV / inp.kTV * inp.dV_r) ** 2
    )


def _mix_terms(xi):
    m = (1 - xi) * math.log(1 - xi) + xi * math.log(xi)
    m1 = math.log(xi / (1 - xi))
    m2 = 1.0 / (xi * (1 - xi))
    m3 = (2 * xi - 1) / (xi * xi * (1 - xi) ** 2)
    return m, m1, m2, m3


def ideal_mixture_gibbs(
    T: float,
    p: float,
    xi: float,
    mu_theta: Sequence[StandardPotential],
    R: float = R_GAS,
    p_ref: float = 1.0,
):
    """Gibbs energy of the ideal ``A -> B`` gas mixture with one mole in total.

    ``G = (1 - xi) mu_A + xi mu_B + R T ln(p / p_ref) + R T [(1 - xi) ln(1 - xi) + xi ln xi]``

    Returns ``(G, jet)`` with the analytic jet over ``(T, p, xi)``.
    """
    if not (T > 0 and p > 0):
        raise DomainError(f"need T > 0 and p > 0, got T={T}, p={p}", point=(T, p, xi))
    if not 0 < xi < 1:
        raise DomainError(f"extent {xi} is not strictly inside (0, 1)", point=(T, p, xi))
    muA, muB = mu_theta
    m, m1, m2, m3 = _mix_terms(xi)
    lp = math.log(p / p_ref)
    G = (1 - xi) * muA(T) + xi * muB(T) + R * T * lp + R * T * m
    grad = [
        (1 - xi) * muA.dT(T) + xi * muB.dT(T) + R * lp + R * m,
        R * T / p,
        muB(T) - muA(T) + R * T * m1,
    ]
    H = np.zeros((3, 3))
    H[0, 0] = (1 - xi) * muA.d2T(T) + xi * muB.d2T(T)
    H[0, 1] = H[1, 0] = R / p
    H[0, 2] = H[2, 0] = muB.dT(T) - muA.dT(T) + R * m1
    H[1, 1] = -R * T / p**2
    H[2, 2] = R * T * m2
    t = {
        (0, 0, 0): (1 - xi) * muA.d3T(T) + xi * muB.d3T(T),
        (0, 0, 2): muB.d2T(T) - muA.d2T(T),
        (0, 1, 1): -R / p**2,
        (0, 2, 2): R * m2,
        (1, 1, 1): 2 * R * T / p**3,
        (2, 2, 2): R * T * m3,
    }
    D3 = np.zeros((3, 3, 3))
    for (i, j, k), val in t.items():
        for a, b, c in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            D3[a, b, c] = val
    return G, Jet3(G, np.array(grad), H, D3)


def ideal_ab_inputs(T, p, xi, mu_theta, R: float = R_GAS) -> ReactionMetricInputs:
    """Reaction-metric inputs of the ideal ``A -> B`` mixture, read from its Gibbs jet."""
    _, jet = ideal_mixture_gibbs(T, p, xi, mu_theta, R)
    H = jet.hess
    return ReactionMetricInputs(
        C_p=-T * H[0, 0], alphaV=H[0, 1], kTV=-H[1, 1], dS_r=-H[0, 2], dV_r=H[1, 2], dA_dxi=-H[2, 2],
        A=-jet.grad[2],
    )


def ideal_ab_reduced_determinant(T, p, xi, mu_theta, R: float = R_GAS) -> float:
    """Reduced determinant of the ideal ``A -> B`` metric.

    ``(R T / p^2) ([d(mu_B - mu_A)/dT + R ln(xi/(1-xi))]^2
    - R T / (xi (1 - xi)) [R / T + (1 - xi) mu_A'' + xi mu_B''])``
    """
    muA, muB = mu_theta
    e = muB.dT(T) - muA.dT(T) + R * math.log(xi / (1 - xi))
    a = R / T + (1 - xi) * muA.d2T(T) + xi * muB.d2T(T)
    return R * T / p**2 * (e * e - R * T / (xi * (1 - xi)) * a)


def isothermal_metric(inp: ReactionMetricInputs) -> MetricValue:
    """Metric on ``(p, xi)`` at fixed temperature."""
    g = np.array([[-inp.kTV, inp.dV_r], [inp.dV_r, -inp.dA_dxi]])
    return MetricValue(g)


def ideal_isothermal_metric(T: float, p: float, xi: float, R: float = R_GAS) -> MetricValue:
    """``diag(-R T / p^2, R T / (xi (1 - xi)))`` on ``(p, xi)`` with its derivatives."""
    if not (T > 0 and p > 0 and 0 < xi < 1):
        raise DomainError(f"need T > 0, p > 0 and 0 < xi < 1, got ({T}, {p}, {xi})", point=(T, p, xi))
    _, _, m2, m3 = _mix_terms(xi)
    g = np.diag([-R * T / p**2, R * T * m2])
    dg = np.zeros((2, 2, 2))
    dg[0, 0, 0] = 2 * R * T / p**3
    dg[1, 1, 1] = R * T * m3
    return MetricValue(g, dg)


def mixture_isothermal_metric(s: Stoichiometry, T: float, p: float, xi: float, R: float = R_GAS) -> MetricValue:
    """Isothermal ``(p, xi)`` metric of an ideal gas mixture of any stoichiometry.

    Hessian of :func:`mixing_gibbs`: ``G_pp = -N R T / p^2``,
    ``G_pxi = R T sum(nu) / p`` and ``G_xixi = R T (sum nu^2 / N_i - (sum nu)^2 / N)``.
    """
    if not (T > 0 and p > 0):
        raise DomainError(f"need T > 0 and p > 0, got T={T}, p={p}", point=(T, p, xi))
    N, nu, snu, sN = _sums(s, xi)
    g = np.array(
        [
            [-sN * R * T / p**2, R * T * snu / p],
            [R * T * snu / p, R * T * (float(np.sum(nu * nu / N)) - snu * snu / sN)],
        ]
    )
    return MetricValue(g)


def _sums(s: Stoichiometry, xi: float):
    N = _interior_moles(s, xi)
    nu = s.nu_array
    return N, nu, float(np.sum(nu)), float(np.sum(N))


def w_phase_boundary(s: Stoichiometry, xi: float) -> float:
    """``W(xi) = (sum nu)^2 / sum N - sum nu^2 / N``, where ``d2G/dxi2`` changes sign."""
    N, nu, snu, sN = _sums(s, xi)
    return snu * snu / sN - float(np.sum(nu * nu / N))


def dw_phase_boundary(s: Stoichiometry, xi: float) -> float:
    """``dW/dxi = -(sum nu)^3 / (sum N)^2 + sum nu^3 / N^2``."""
    N, nu, snu, sN = _sums(s, xi)
    return -(snu**3) / sN**2 + float(np.sum(nu**3 / N**2))


def d2G_dxi2(
    s: Stoichiometry,
    xi: float,
    T: float,
    W_fn: Optional[Callable[[float], float]] = None,
    R: float = R_GAS,
) -> float:
    """``R T [sum nu^2 / N - (sum nu)^2 / sum N + W(xi)]``; ``W = 0`` for an ideal mixture."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}", point=(T,))
    N, nu, snu, sN = _sums(s, xi)
    w = 0.0 if W_fn is None else float(W_fn(xi))
    return R * T * (float(np.sum(nu * nu / N)) - snu * snu / sN + w)


def classify_convexity(s: Stoichiometry, xi: float, W: float, rtol: float = 1e-10) -> str:
    """``"convex"`` when the supplied ``W`` lies above the phase boundary, ``"concave"`` below."""
    wb = w_phase_boundary(s, xi)
    if abs(W - wb) <= rtol * max(abs(W), abs(wb)):
        return "boundary"
    return "convex" if W > wb else "concave"


@dataclass(frozen=True)
class QuotientOfReaction:
    Q_c: float
    Q_a: float
    dlnQc_dxi: float
    K_a: Optional[float] = None


def quotient_of_reaction(
    s: Stoichiometry,
    xi: float,
    ln_gamma: Optional[Callable[[float], Sequence[float]]] = None,
    dG_theta: Optional[float] = None,
    T: Optional[float] = None,
    R: float = R_GAS,
) -> QuotientOfReaction:
    """Concentration and activity quotients ``prod x_i^nu_i`` and ``Q_gamma Q_c``.

    ``ln_gamma(xi)`` returns per-species activity-coefficient logarithms
    (ideal when omitted).  ``K_a = exp(-dG_theta / R T)`` is filled in when
    ``dG_theta`` and ``T`` are given.
    """
    N, nu, snu, sN = _sums(s, xi)
    x = N / sN
    ln_qc = float(np.sum(nu * np.log(x)))
    ln_qg = 0.0 if ln_gamma is None else float(np.dot(nu, np.asarray(ln_gamma(xi), dtype=float)))
    dln = float(np.sum(nu * nu / N)) - snu * snu / sN
    K_a = None
    if dG_theta is not None:
        if T is None or not T > 0:
            raise DomainError("a positive temperature is needed for the equilibrium constant")
        K_a = math.exp(-dG_theta / (R * T))
    return QuotientOfReaction(math.exp(ln_qc), math.exp(ln_qc + ln_qg), dln, K_a)


@dataclass(frozen=True)
class CriticalExtent:
    xi_star: Optional[float]
    W_star: Optional[float]
    monotone: bool
    scan: ScanResult = field(repr=False, default=None)


def critical_extent(s: Stoichiometry, n_samples: int = 1001, margin: float = 1e-4) -> CriticalExtent:
    """Extremum of ``W(xi)`` on the feasible interval shrunk by ``margin * width`` at each end.

    The extremum is bracketed by a uniform scan of the analytic ``dW/dxi``
    and refined by Brent's method.  When no sign change of ``dW/dxi`` is
    found, ``monotone`` is set and ``xi_star`` is ``None``.
    """
    lo, hi = feasibility_interval(s)
    width = hi - lo
    if not width > 0:
        raise DomainError(f"feasible interval [{lo}, {hi}] is degenerate")
    window = (lo + margin * width, hi - margin * width)
    res = scan_1d(
        lambda t: w_phase_boundary(s, t),
        window,
        n_samples,
        derivative=lambda t: dw_phase_boundary(s, t),
    )
    if not res.extrema:
        return CriticalExtent(None, None, True, res)
    best = max(res.extrema, key=lambda e: -abs(e.value))
    return CriticalExtent(best.location, best.value, False, res)


@dataclass(frozen=True)
class LogisticCurve:
    dG: np.ndarray
    xi: np.ndarray
    equilibria: dict


def logistic_curve(T: float, xi0: float, dG_values, R: float = R_GAS) -> LogisticCurve:
    """Integral curve of ``dxi/d(Delta_r G) = xi (1 - xi) / (R T)`` through ``(0, xi0)``."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}", point=(T,))
    if not 0 <= xi0 <= 1:
        raise DomainError(f"initial extent must lie in [0, 1], got {xi0}", point=(xi0,))
    d = np.asarray(dG_values, dtype=float)
    if xi0 in (0.0, 1.0):
        xi = np.full_like(d, float(xi0))
    else:
        xi = expit(d / (R * T) + logit(xi0))
    return LogisticCurve(d, xi, {0.0: "unstable", 1.0: "stable"})


def multireaction_metric(
    C_p: float,
    alphaV: float,
    kTV: float,
    dS_r: Sequence[float],
    dV_r: Sequence[float],
    dA_dxi,
    T: float,
) -> MetricValue:
    """Bordered ``(l + 2)``-square Gibbs metric for ``l`` independent reactions.

    ``dA_dxi[n, m]`` is ``(dA_n / dxi_m)``; it must be symmetric.
    """
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}", point=(T,))
    J = np.atleast_2d(np.asarray(dA_dxi, dtype=float))
    dS = np.asarray(dS_r, dtype=float).ravel()
    dV = np.asarray(dV_r, dtype=float).ravel()
    l = dS.size
    if J.shape != (l, l) or dV.size != l:
        raise ValueError(f"inconsistent shapes: {l} entropies, {dV.size} volumes, Jacobian {J.shape}")
    if np.max(np.abs(J - J.T)) > 1e-10 * max(float(np.max(np.abs(J))), 1e-300):
        raise ValueError("affinity Jacobian must be symmetric")
    g = np.zeros((l + 2, l + 2))
    g[0, 0] = -C_p / T
    g[0, 1] = g[1, 0] = alphaV
    g[1, 1] = -kTV
    g[0, 2:] = g[2:, 0] = -dS
    g[1, 2:] = g[2:, 1] = dV
    g[2:, 2:] = -0.5 * (J + J.T)
    return MetricValue(g)


@dataclass(frozen=True)
class RegularExcess:
    """Excess Gibbs energy ``omega (xi - lo)(hi - xi) / (hi - lo)`` on a feasible interval.

    For ``A -> B`` with one mole this is the regular-solution term
    ``omega x_A x_B``; ``omega > 2 R T`` gives a double-well ``G(xi)``.
    """

    omega: float
    lo: float = 0.0
    hi: float = 1.0

    def __call__(self, xi):
        return self.omega * (xi - self.lo) * (self.hi - xi) / (self.hi - self.lo)

    def d1(self, xi):
        return self.omega * (self.lo + self.hi - 2 * xi) / (self.hi - self.lo)

    def d2(self, xi):
        return -2 * self.omega / (self.hi - self.lo)


def mixing_gibbs(
    s: Stoichiometry,
    xi: float,
    T: float,
    p: float = 1.0,
    mu_theta: Optional[Sequence[StandardPotential]] = None,
    R: float = R_GAS,
    p_ref: float = 1.0,
    excess: Optional[RegularExcess] = None,
) -> float:
    """Explicit ``G = sum N_i (mu_i(T) + R T ln(x_i p / p_ref))`` plus an optional excess term."""
    N = _interior_moles(s, xi)
    mu = np.zeros(s.r) if mu_theta is None else np.array([m(T) for m in mu_theta])
    G = float(np.sum(N * (mu + R * T * (np.log(N / N.sum()) + math.log(p / p_ref)))))
    if excess is not None:
        G += excess(xi)
    return G


def gibbs_scan(
    s: Stoichiometry,
    T: float,
    xi_values,
    p: float = 1.0,
    mu_theta: Optional[Sequence[StandardPotential]] = None,
    R: float = R_GAS,
    p_ref: float = 1.0,
    excess: Optional[RegularExcess] = None,
):
    """Rows ``(xi, G, dG/dxi, d2G/dxi2)`` over interior extents, all analytic."""
    mu = np.zeros(s.r) if mu_theta is None else np.array([m(T) for m in mu_theta])
    nu = s.nu_array
    rows = []
    for xi in xi_values:
        xi = float(xi)
        N = _interior_moles(s, xi)
        x = N / N.sum()
        G = mixing_gibbs(s, xi, T, p, mu_theta, R, p_ref, excess)
        d1 = float(np.sum(nu * (mu + R * T * (np.log(x) + math.log(p / p_ref)))))
        d2 = d2G_dxi2(s, xi, T, None, R)
        if excess is not None:
            d1 += excess.d1(xi)
            d2 += excess.d2(xi)
        rows.append((xi, G, d1, d2))
    return rows
