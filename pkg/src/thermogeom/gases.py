"""Single-component gases: ideal, van der Waals and Berthelot.

States are handled in the ``(T, v)`` chart, where the equations of state
are explicit.  The Weinhold metric is the Hessian of ``u(s, v)``; its
entries are written as functions of ``(T, v)`` and its ``(s, v)``
derivatives follow from the chain rule

    d/ds|_v = (T / c_v) d/dT|_v
    d/dv|_s = d/dv|_T - (T p_T / c_v) d/dT|_v
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    ConsistencyError,
    DivergenceError,
    DomainError,
    MechanicalInstabilityError,
    NoCriticalPointError,
)
from .geometry import MetricValue
from .numdiff import (
    PotentialSurface,
    StatePoint,
    make_analytic_surface,
    make_fd_surface,
    symmetrize_tensor3,
)
from .scan import refine_root, scan_1d

__all__ = [
    "MODELS",
    "GasParams",
    "GasModel",
    "GasState",
    "ResponseFunctions",
    "SpinodalCurve",
    "CriticalPoint",
    "SpinodalBranch",
    "pressure",
    "eos_derivatives",
    "entropy",
    "entropy_derivatives",
    "internal_energy",
    "temperature_from_sv",
    "gas_state",
    "weinhold_metric",
    "internal_energy_surface",
    "response_functions",
    "heat_capacities",
    "spinodal",
    "critical_point",
    "curvature_closed_form",
    "berthelot_L_poly",
    "berthelot_Q_poly",
    "berthelot_W_poly",
    "reduced_spinodal_pT",
    "reduced_spinodal_branches",
]

MODELS = ("ideal", "vdw", "berthelot")


@dataclass(frozen=True)
class GasParams:
    """Model constants.

    ``a`` is the interaction constant, ``b`` the excluded molar volume.
    ``(T0, v0, s0)`` fix the entropy zero: ``s(T0, v0) = s0``.  ``v0``
    defaults to ``b + 1`` so that ``v0 - b = 1``.
    """

    a: float = 0.0
    b: float = 0.0
    R: float = 1.0
    c_v: float = 1.5
    T0: float = 1.0
    v0: Optional[float] = None
    s0: float = 0.0

    def __post_init__(self):
        if not (self.a >= 0 and self.b >= 0):
            raise ValueError(f"interaction constants must be non-negative (a={self.a}, b={self.b})")
        if not (self.R > 0 and self.c_v > 0):
            raise ValueError(f"R and c_v must be positive (R={self.R}, c_v={self.c_v})")
        if not self.T0 > 0:
            raise ValueError("reference temperature must be positive")
        if self.v0 is None:
            object.__setattr__(self, "v0", self.b + 1.0)
        if not self.v0 > self.b:
            raise ValueError("reference volume must exceed b")


@dataclass(frozen=True)
class GasModel:
    kind: str
    params: GasParams = GasParams()

    def __post_init__(self):
        if self.kind not in MODELS:
            raise ValueError(f"unknown gas model {self.kind!r}; expected one of {MODELS}")
        if self.kind == "ideal" and (self.params.a != 0 or self.params.b != 0):
            raise ValueError("the ideal gas takes a = b = 0")

    @classmethod
    def ideal(cls, R=1.0, c_v=1.5, **ref) -> "GasModel":
        return cls("ideal", GasParams(0.0, 0.0, R, c_v, **ref))

    @classmethod
    def vdw(cls, a, b, R=1.0, c_v=1.5, **ref) -> "GasModel":
        return cls("vdw", GasParams(a, b, R, c_v, **ref))

    @classmethod
    def berthelot(cls, a, b, R=1.0, c_v=1.5, **ref) -> "GasModel":
        return cls("berthelot", GasParams(a, b, R, c_v, **ref))

    @property
    def a(self):
        return self.params.a

    @property
    def b(self):
        return self.params.b

    @property
    def R(self):
        return self.params.R

    @property
    def c_v(self):
        return self.params.c_v


@dataclass(frozen=True)
class GasState:
    T: float
    v: float
    p: float
    s: float


@dataclass(frozen=True)
class ResponseFunctions:
    """Molar response functions; ``c_v`` here is ``T (ds/dT)_v`` of the entropy function."""

    c_v: float
    c_p: float
    alpha: float
    k_T: float


def _check(model: GasModel, T, v):
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"temperature must be positive, got {T}", point=(T, v))
    if not (v > model.b and math.isfinite(v)):
        raise DomainError(f"molar volume must exceed b = {model.b}, got {v}", point=(T, v))


def eos_derivatives(model: GasModel, T: float, v: float):
    """``(p, p_T, p_v, p_TT, p_Tv, p_vv)`` in the ``(T, v)`` chart."""
    _check(model, T, v)
    a, b, R = model.a, model.b, model.R
    w = v - b
    if model.kind == "berthelot":
        p = R * T / w - a / (T * v * v)
        pT = R / w + a / (T * T * v * v)
        pv = -R * T / w**2 + 2 * a / (T * v**3)
        pTT = -2 * a / (T**3 * v * v)
        pTv = -R / w**2 - 2 * a / (T * T * v**3)
        pvv = 2 * R * T / w**3 - 6 * a / (T * v**4)
    else:
        p = R * T / w - a / (v * v)
        pT = R / w
        pv = -R * T / w**2 + 2 * a / v**3
        pTT = 0.0
        pTv = -R / w**2
        pvv = 2 * R * T / w**3 - 6 * a / v**4
    return p, pT, pv, pTT, pTv, pvv


def pressure(model: GasModel, T: float, v: float) -> float:
    """Pressure from the model's equation of state."""
    return eos_derivatives(model, T, v)[0]


def entropy(model: GasModel, T: float, v: float) -> float:
    _check(model, T, v)
    P = model.params
    s = P.c_v * math.log(T / P.T0) + P.R * math.log((v - P.b) / (P.v0 - P.b)) + P.s0
    if model.kind == "berthelot":
        s += -P.a / (T * T * v) + P.a / (P.T0 * P.T0 * P.v0)
    return s


def entropy_derivatives(model: GasModel, T: float, v: float):
    """``((ds/dT)_v, (ds/dv)_T)`` differentiated from the entropy function itself."""
    _check(model, T, v)
    P = model.params
    sT = P.c_v / T
    sv = P.R / (v - P.b)
    if model.kind == "berthelot":
        sT += 2 * P.a / (T**3 * v)
        sv += P.a / (T * T * v * v)
    return sT, sv


def internal_energy(model: GasModel, T: float, v: float) -> float:
    _check(model, T, v)
    if model.kind == "berthelot":
        return model.c_v * T - 2 * model.a / (T * v)
    return model.c_v * T - model.a / v


def temperature_from_sv(model: GasModel, s: float, v: float) -> float:
    """Invert ``s(T, v) = s`` for ``T``.

    Closed form for ideal and van der Waals gases.  For Berthelot the
    equation is solved in ``ln T`` by Newton steps kept inside a bracket,
    falling back to bisection, to relative tolerance ``1e-12``.
    """
    P = model.params
    if not (v > P.b and math.isfinite(v) and math.isfinite(s)):
        raise DomainError(f"molar volume must exceed b = {P.b}, got {v}", point=(s, v))
    rhs = (s - P.s0 - P.R * math.log((v - P.b) / (P.v0 - P.b))) / P.c_v
    if model.kind != "berthelot":
        return P.T0 * math.exp(rhs)
    c = P.a / (P.c_v * v)
    shift = rhs - P.a / (P.c_v * P.T0 * P.T0 * P.v0)

    # phi(y) = (y - ln T0) - c exp(-2y) - shift, increasing and concave in y = ln T
    def phi(y):
        return (y - math.log(P.T0)) - c * math.exp(-2 * y) - shift

    y = math.log(P.T0) + shift
    lo, hi = y, y
    while phi(lo) > 0:
        lo -= 1.0
    while phi(hi) < 0:
        hi += 1.0
    for _ in range(100):
        f = phi(y)
        if f == 0.0:
            break
        if f < 0:
            lo = y
        else:
            hi = y
        step = f / (1.0 + 2 * c * math.exp(-2 * y))
        y_new = y - step
        if not lo <= y_new <= hi:
            y_new = 0.5 * (lo + hi)
        if abs(y_new - y) <= 1e-13 * max(1.0, abs(y)):
            y = y_new
            break
        y = y_new
    return math.exp(y)


def gas_state(model: GasModel, T: float, v: float) -> GasState:
    return GasState(T, v, pressure(model, T, v), entropy(model, T, v))


def _metric_parts(model: GasModel, T: float, v: float):
    """Metric entries and their (T, v) partials, entries ordered 11, 12, 22."""
    p, pT, pv, pTT, pTv, pvv = eos_derivatives(model, T, v)
    cv = model.c_v
    g = np.array([T / cv, -T * pT / cv, -pv + T * pT * pT / cv])
    dT = np.array([1.0 / cv, -(pT + T * pTT) / cv, -pTv + (pT * pT + 2 * T * pT * pTT) / cv])
    dv = np.array([0.0, -T * pTv / cv, -pvv + 2 * T * pT * pTv / cv])
    return g, dT, dv, pT


def weinhold_metric(model: GasModel, T: float, v: float, symmetrize: bool = True) -> MetricValue:
    """Weinhold metric in the ``(s, v)`` chart at the state ``(T, v)``.

    The entries are ``T/c_v``, ``-T p_T / c_v`` and ``-p_v + T p_T^2 / c_v``
    with ``c_v`` the model constant.  For ideal and van der Waals gases this
    is exactly the Hessian of ``u(s, v)``.  For the Berthelot gas the
    constant-``c_v`` entries are not the Hessian of any potential, so the
    chain-rule derivatives are only symmetric in the first index pair; with
    ``symmetrize`` they are averaged over index permutations.
    """
    g3, dT, dv, pT = _metric_parts(model, T, v)
    cv = model.c_v
    ds = (T / cv) * dT
    dvs = dv - (T * pT / cv) * dT
    g = np.array([[g3[0], g3[1]], [g3[1], g3[2]]])
    dg = np.empty((2, 2, 2))
    for (i, j), n in (((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 2)):
        dg[i, j, 0] = ds[n]
        dg[i, j, 1] = dvs[n]
    if symmetrize:
        dg = symmetrize_tensor3(dg)
    point = StatePoint((("s", entropy(model, T, v)), ("v", v)), "(s,v)")
    return MetricValue(g, dg, point)


def internal_energy_surface(
    model: GasModel, method: str = "auto", h: Optional[float] = None
) -> PotentialSurface:
    """``u(s, v)`` as a potential surface.

    ``method="analytic"`` (ideal and van der Waals only) gives exact jets;
    ``"fd"`` differentiates the explicit ``u(s, v)``, with ``T(s, v)`` from
    :func:`temperature_from_sv`, by Richardson-extrapolated central
    differences of step ``h``.  ``"auto"`` picks analytic when available.
    """
    if method not in ("auto", "analytic", "fd"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" and model.kind == "berthelot":
        raise ValueError("the Berthelot internal energy has no closed-form jet")

    def domain(x):
        return x[1] > model.b

    def value(x):
        T = temperature_from_sv(model, x[0], x[1])
        return internal_energy(model, T, x[1])

    if method == "fd" or model.kind == "berthelot":
        return make_fd_surface(2, "(s,v)", ("s", "v"), value, domain, h)

    def grad(x):
        T = temperature_from_sv(model, x[0], x[1])
        return np.array([T, -pressure(model, T, x[1])])

    def metric(x):
        T = temperature_from_sv(model, x[0], x[1])
        return weinhold_metric(model, T, x[1], symmetrize=False)

    return make_analytic_surface(
        2,
        "(s,v)",
        ("s", "v"),
        value,
        grad,
        lambda x: metric(x).g,
        lambda x: metric(x).dg,
        domain,
    )


def response_functions(model: GasModel, T: float, v: float) -> ResponseFunctions:
    """``alpha`` and ``k_T`` from the equation of state; ``c_p = c_v + v T alpha^2 / k_T``.

    Raises :class:`MechanicalInstabilityError` unless ``(dp/dv)_T < 0``.
    """
    _, pT, pv, *_ = eos_derivatives(model, T, v)
    if not pv < 0:
        raise MechanicalInstabilityError(
            f"(dp/dv)_T = {pv:.6g} >= 0: isothermal compressibility undefined", point=(T, v)
        )
    k_T = -1.0 / (v * pv)
    alpha = -pT / (v * pv)
    sT, _ = entropy_derivatives(model, T, v)
    c_v = T * sT
    return ResponseFunctions(c_v, c_v + v * T * alpha * alpha / k_T, alpha, k_T)


def heat_capacities(model: GasModel, T: float, v: float):
    """``(c_v, c_p)`` as ``T (ds/dT)`` at constant ``v`` and at constant ``p``.

    Built from the entropy function's own partials and the implicit
    ``(dv/dT)_p = -p_T / p_v``; no Maxwell relation is used.
    """
    _, pT, pv, *_ = eos_derivatives(model, T, v)
    if pv == 0:
        raise MechanicalInstabilityError("(dp/dv)_T = 0", point=(T, v))
    sT, sv = entropy_derivatives(model, T, v)
    return T * sT, T * (sT - sv * pT / pv)


@dataclass(frozen=True)
class SpinodalCurve:
    """Curve of degeneracy ``(dp/dv)_T = 0`` parametrised by ``v``."""

    model: GasModel

    @property
    def empty(self) -> bool:
        return self.model.kind == "ideal" or self.model.a == 0

    def _need(self, v):
        if self.empty:
            raise NoCriticalPointError(f"{self.model.kind} gas has no curve of degeneracy")
        if not v > self.model.b:
            raise DomainError(f"molar volume must exceed b = {self.model.b}, got {v}", point=(v,))

    def temperature(self, v: float) -> float:
        self._need(v)
        a, b, R = self.model.a, self.model.b, self.model.R
        t2 = 2 * a * (v - b) ** 2 / (R * v**3)
        return math.sqrt(t2) if self.model.kind == "berthelot" else t2

    def pressure(self, v: float) -> float:
        self._need(v)
        a, b, R = self.model.a, self.model.b, self.model.R
        if self.model.kind == "berthelot":
            return R * self.temperature(v) * (v - 2 * b) / (2 * (v - b) ** 2)
        return (v - 2 * b) * a / v**3

    def entropy(self, v: float) -> float:
        return entropy(self.model, self.temperature(v), v)

    def sample(self, v_values):
        v = np.asarray(v_values, dtype=float)
        return (
            v,
            np.array([self.pressure(x) for x in v]),
            np.array([self.temperature(x) for x in v]),
        )


def spinodal(model: GasModel) -> SpinodalCurve:
    """Curve of degeneracy of the Weinhold metric; ``.empty`` for the ideal gas."""
    return SpinodalCurve(model)


@dataclass(frozen=True)
class CriticalPoint:
    p_c: float
    T_c: float
    v_c: float
    numeric: tuple
    negative_branch: Optional[tuple] = None


def critical_point(model: GasModel, rtol: float = 1e-6) -> CriticalPoint:
    """Closed-form critical point, cross-checked against a scan of the spinodal.

    The numeric point is the extremum of ``T(v)`` (location ``v_c``, value
    ``T_c``) and of ``p(v)`` (value ``p_c``) along the spinodal.
    """
    curve = spinodal(model)
    if curve.empty:
        raise NoCriticalPointError(f"{model.kind} gas has no critical point")
    a, b, R = model.a, model.b, model.R
    if not b > 0:
        raise NoCriticalPointError("a critical point requires b > 0")
    v_c = 3.0 * b
    neg = None
    if model.kind == "berthelot":
        p_c = math.sqrt(a * R / (216 * b**3))
        T_c = math.sqrt(8 * a / (27 * R * b))
        neg = (-p_c, -T_c, v_c)
    else:
        p_c = a / (27 * b * b)
        T_c = 8 * a / (27 * b * R)
    window = (1.5 * b, 12 * b)
    st = scan_1d(curve.temperature, window, 241)
    sp = scan_1d(curve.pressure, window, 241)
    t_max = [e for e in st.extrema if e.kind == "max"]
    p_max = [e for e in sp.extrema if e.kind == "max"]
    if not t_max or not p_max:
        raise ConsistencyError("no extremum of the spinodal found in the scan window")
    numeric = (p_max[0].value, t_max[0].value, t_max[0].location)
    for got, want, name in zip(numeric, (p_c, T_c, v_c), ("p_c", "T_c", "v_c")):
        if abs(got - want) > rtol * abs(want):
            raise ConsistencyError(f"{name}: scan gives {got!r}, closed form {want!r}")
    return CriticalPoint(p_c, T_c, v_c, numeric, neg)


def berthelot_L_poly(c_v, v, R, b):
    return (2 * c_v - R) * v**2 - 3 * c_v * b * v + c_v * b**2


def berthelot_Q_poly(c_v, v, R, b):
    return (
        -R * v**5
        + 3 * R * b * v**4
        - 3 * R * b**2 * v**3
        + (R * b**3 + c_v + R) * v**2
        - b * (b - 2 * v) * (R + c_v)
    )


def berthelot_W_poly(c_v, v, R, b):
    return (
        -R * v**7
        + 4 * R * b * v**6
        - 6 * R * b**2 * v**5
        + (2 * c_v + R + 4 * R * b**3) * v**4
        - (8 * c_v + 3 * R + R * b**3) * b * v**3
        + (12 * c_v + 3 * R) * b**2 * v**2
        - (8 * c_v + R) * b**3 * v
        + 2 * c_v * b**4
    )


def curvature_closed_form(model: GasModel, T: float, v: float, rtol: float = 1e-12) -> float:
    """Closed-form scalar curvature of the Weinhold metric.

    Ideal: 0.  Van der Waals: ``a R v^3 / (c_v (p v^3 - a v + 2 a b)^2)``.
    Berthelot: the rational expression in ``L``, ``Q`` and ``W``
    evaluated verbatim.  Raises :class:`DivergenceError` when the
    denominator vanishes to relative precision ``rtol`` (state on the
    spinodal).
    """
    _check(model, T, v)
    a, b, R, cv = model.a, model.b, model.R, model.c_v
    if model.kind == "ideal":
        return 0.0
    if model.kind == "vdw":
        p = pressure(model, T, v)
        d = p * v**3 - a * v + 2 * a * b
        if abs(d) <= rtol * (abs(p * v**3) + abs(a * v) + abs(2 * a * b)):
            raise DivergenceError(f"state (T={T}, v={v}) lies on the spinodal", denominator=d)
        return a * R * v**3 / (cv * d * d)
    d = R * T * T * v**3 - 2 * a * (v - b) ** 2
    if abs(d) <= rtol * (abs(R * T * T * v**3) + abs(2 * a * (v - b) ** 2)):
        raise DivergenceError(f"state (T={T}, v={v}) lies on the spinodal", denominator=d)
    num = (
        T**4 * v**4 * R * cv * berthelot_L_poly(cv, v, R, b)
        + T * T * v**3 * R * a * berthelot_Q_poly(cv, v, R, b)
        + a * a * berthelot_W_poly(cv, v, R, b)
    )
    return 2 * a * num / (cv**3 * T**3 * v * d * d)


def reduced_spinodal_pT(v_r: float):
    """``(T_r, p_r)`` on the reduced van der Waals spinodal at reduced volume ``v_r``."""
    if not v_r > 1.0 / 3.0:
        raise DomainError(f"reduced volume must exceed 1/3, got {v_r}", point=(v_r,))
    T_r = (3 * v_r - 1) ** 2 / (4 * v_r**3)
    p_r = (3 * v_r - 2) / v_r**3
    return T_r, p_r


@dataclass(frozen=True)
class SpinodalBranch:
    branch_id: int
    v_r: float
    T_r: float
    p_r: float
    residual: float
    physical: bool


def _reduced_T(v):
    return (3 * v - 1) ** 2 / (4 * v**3)


def reduced_spinodal_branches(T_r: float, include_unphysical: bool = False):
    """All reduced volumes with ``T_r(v_r) = T_r`` and their pressures.

    ``(3 v - 1)^2 = 4 T_r v^3`` has three real roots for ``0 < T_r < 1``:
    one below ``v_r = 1/3`` (excluded volume exceeded, returned only with
    ``include_unphysical``), one in ``(1/3, 1)`` and one above 1.  Returns
    an empty list for ``T_r >= 1``.
    """
    if not T_r > 0:
        raise DomainError(f"reduced temperature must be positive, got {T_r}", point=(T_r,))
    if T_r >= 1.0:
        return []

    def f(v):
        return _reduced_T(v) - T_r

    hi = 2.0
    while f(hi) > 0:
        hi *= 2.0
    lo = 1.0 / 6.0
    while f(lo) < 0:
        lo *= 0.5
    # branch 1 lies below v_r = 1/3; branches 2 and 3 are the physical ones
    brackets = [(lo, 1.0 / 3.0), (1.0 / 3.0, 1.0), (1.0, hi)]
    out = []
    for i, (x0, x1) in enumerate(brackets):
        if i == 0 and not include_unphysical:
            continue
        v = refine_root(f, x0, x1, xtol=1e-15)
        p = (3 * v - 2) / v**3
        out.append(SpinodalBranch(i + 1, v, T_r, p, abs(f(v)), v > 1.0 / 3.0))
    return out
