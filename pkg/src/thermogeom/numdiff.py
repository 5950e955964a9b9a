"""Third-order jets of scalar potentials.

A :class:`Jet3` bundles the value, gradient, Hessian and third-derivative
tensor of a potential at one point.  Jets come either from hand-coded
closed forms (:func:`make_analytic_surface`) or from the central-difference
oracle :func:`fd_jet3`; everything downstream consumes them the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "StatePoint",
    "Jet3",
    "PotentialSurface",
    "symmetrize_matrix",
    "symmetrize_tensor3",
    "fd_jet3",
    "default_steps",
    "make_analytic_surface",
    "make_fd_surface",
]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StatePoint:
    """Coordinates of a state in a named chart, e.g. ``(s, v)`` or ``(T, p, xi)``."""

    coords: tuple
    chart: str = ""

    def __post_init__(self):
        coords = tuple((str(n), float(v)) for n, v in self.coords)
        names = [n for n, _ in coords]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        bad = [n for n, v in coords if not math.isfinite(v)]
        if bad:
            raise DomainError(f"non-finite coordinate(s) {bad}", point=coords)
        object.__setattr__(self, "coords", coords)
        if not self.chart:
            object.__setattr__(self, "chart", "(" + ",".join(names) + ")")

    @classmethod
    def from_values(cls, names: Sequence[str], values, chart: str = "") -> "StatePoint":
        values = np.asarray(values, dtype=float).ravel()
        if len(names) != values.size:
            raise DimensionError(f"{len(names)} names for {values.size} values")
        return cls(tuple(zip(names, values.tolist())), chart)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.coords)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.coords])

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, name: str) -> float:
        for n, v in self.coords:
            if n == name:
                return v
        raise KeyError(name)

    def with_values(self, values) -> "StatePoint":
        return StatePoint.from_values(self.names, values, self.chart)


def symmetrize_matrix(h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    return 0.5 * (h + h.T)


def symmetrize_tensor3(t) -> np.ndarray:
    """Average a rank-3 tensor over the six index permutations.

    Every permutation of an index triple reads the same stored sum, so the
    result is symmetric bitwise, not just to rounding.
    """
    t = np.asarray(t, dtype=float)
    k = t.shape[0]
    acc = (
        t
        + t.transpose(0, 2, 1)
        + t.transpose(1, 0, 2)
        + t.transpose(1, 2, 0)
        + t.transpose(2, 0, 1)
        + t.transpose(2, 1, 0)
    ) / 6.0
    idx = np.sort(np.indices((k, k, k)).reshape(3, -1), axis=0)
    return acc[idx[0], idx[1], idx[2]].reshape(k, k, k)


@dataclass(frozen=True)
class Jet3:
    """Value, gradient, Hessian and third derivatives of a potential at a point."""

    value: float
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.grad, dtype=float))
        k = g.size
        h = np.asarray(self.hess, dtype=float).reshape(k, k) if np.size(self.hess) == k * k else None
        t = np.asarray(self.third, dtype=float).reshape(k, k, k) if np.size(self.third) == k**3 else None
        if h is None or t is None:
            raise DimensionError(
                f"jet shapes disagree: grad {np.shape(self.grad)}, hess {np.shape(self.hess)}, "
                f"third {np.shape(self.third)}"
            )
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "grad", _frozen(g))
        object.__setattr__(self, "hess", _frozen(h))
        object.__setattr__(self, "third", _frozen(t))

    @classmethod
    def symmetric(cls, value, grad, hess, third) -> "Jet3":
        """Build a jet with Hessian and third tensor symmetrized."""
        k = np.atleast_1d(grad).size
        h = np.asarray(hess, dtype=float)
        t = np.asarray(third, dtype=float)
        if h.size != k * k or t.size != k**3:
            raise DimensionError(f"hess/third shapes {h.shape}/{t.shape} do not match dimension {k}")
        return cls(value, grad, symmetrize_matrix(h.reshape(k, k)), symmetrize_tensor3(t.reshape(k, k, k)))

    @property
    def dim(self) -> int:
        return self.grad.size

    def restrict(self, axes: Sequence[int]) -> "Jet3":
        """Sub-jet along a subset of the coordinates (others held fixed)."""
        ax = list(axes)
        return Jet3(
            self.value,
            self.grad[ax],
            self.hess[np.ix_(ax, ax)],
            self.third[np.ix_(ax, ax, ax)],
        )


def default_steps(x, h: Optional[float] = None) -> np.ndarray:
    """Per-axis base step ``h * max(1, |x_i|)``, with ``h = 1e-2`` by default."""
    h = 1e-2 if h is None else float(h)
    if not h > 0:
        raise ValueError("base step must be positive")
    return h * np.maximum(1.0, np.abs(np.asarray(x, dtype=float)))


def _central_jet(fx, x0, steps):
    """Second-order-accurate central differences for grad, hess and third."""
    k = x0.size
    cache = {}

    def f(offsets):
        key = tuple(offsets)
        if key not in cache:
            cache[key] = fx(x0 + np.asarray(offsets, dtype=float) * steps)
        return cache[key]

    def e(*pairs):
        o = [0] * k
        for i, s in pairs:
            o[i] += s
        return o

    f0 = f([0] * k)
    grad = np.empty(k)
    hess = np.empty((k, k))
    third = np.empty((k, k, k))
    for i in range(k):
        hi = steps[i]
        fp, fm = f(e((i, 1))), f(e((i, -1)))
        fpp, fmm = f(e((i, 2))), f(e((i, -2)))
        grad[i] = (fp - fm) / (2 * hi)
        hess[i, i] = (fp - 2 * f0 + fm) / hi**2
        third[i, i, i] = (fpp - 2 * fp + 2 * fm - fmm) / (2 * hi**3)
    for i in range(k):
        for j in range(i + 1, k):
            hi, hj = steps[i], steps[j]
            fpp_ = f(e((i, 1), (j, 1)))
            fpm = f(e((i, 1), (j, -1)))
            fmp = f(e((i, -1), (j, 1)))
            fmm_ = f(e((i, -1), (j, -1)))
            hess[i, j] = hess[j, i] = (fpp_ - fpm - fmp + fmm_) / (4 * hi * hj)
            f0p, f0m = f(e((j, 1))), f(e((j, -1)))
            fp0, fm0 = f(e((i, 1))), f(e((i, -1)))
            # d_j d_i d_i and d_i d_j d_j
            tiij = ((fpp_ - 2 * f0p + fmp) - (fpm - 2 * f0m + fmm_)) / (2 * hj * hi**2)
            tijj = ((fpp_ - 2 * fp0 + fpm) - (fmp - 2 * fm0 + fmm_)) / (2 * hi * hj**2)
            for a, b, c in set(product((i, j), repeat=3)):
                n_i = (a, b, c).count(i)
                if n_i == 2:
                    third[a, b, c] = tiij
                elif n_i == 1:
                    third[a, b, c] = tijj
    for i in range(k):
        for j in range(i + 1, k):
            for m in range(j + 1, k):
                acc = 0.0
                for si, sj, sm in product((1, -1), repeat=3):
                    acc += si * sj * sm * f(e((i, si), (j, sj), (m, sm)))
                val = acc / (8 * steps[i] * steps[j] * steps[m])
                for a, b, c in set(product((i, j, m), repeat=3)):
                    if len({a, b, c}) == 3:
                        third[a, b, c] = val
    return f0, grad, hess, third


def fd_jet3(f: Callable[[StatePoint], float], x: StatePoint, h: Optional[float] = None) -> Jet3:
    """Finite-difference :class:`Jet3` of ``f`` at ``x``.

    Central differences at base steps ``h_i`` and ``h_i / 2`` are combined by
    one Richardson step, ``(4 D(h/2) - D(h)) / 3``, which cancels the leading
    ``O(h^2)`` error of every stencil.  The stencil reaches ``x +- 2 h_i`` per
    axis.

    Parameters
    ----------
    f : callable
        Scalar function of a :class:`StatePoint`.
    x : StatePoint
        Expansion point.
    h : float, optional
        Base relative step; the step on axis ``i`` is ``h * max(1, |x_i|)``.

    Raises
    ------
    DomainError
        If ``f`` is non-finite (or itself raises :class:`DomainError`) at a
        stencil point; the message and ``point`` identify that point.
    """
    x0 = x.values
    steps = default_steps(x0, h)

    def fx(values):
        p = x.with_values(values)
        try:
            out = float(f(p))
        except DomainError as exc:
            raise DomainError(f"stencil point {p.coords} outside domain: {exc}", point=p.coords) from exc
        if not math.isfinite(out):
            raise DomainError(f"non-finite potential {out!r} at stencil point {p.coords}", point=p.coords)
        return out

    v, g1, h1, t1 = _central_jet(fx, x0, steps)
    _, g2, h2, t2 = _central_jet(fx, x0, steps / 2)
    grad = (4 * g2 - g1) / 3
    hess = (4 * h2 - h1) / 3
    third = (4 * t2 - t1) / 3
    return Jet3.symmetric(v, grad, hess, third)


@dataclass(frozen=True)
class PotentialSurface:
    """A constitutive relation ``Phi(x^1..x^k)`` with a jet evaluator.

    ``domain`` is an optional predicate on the coordinate values; evaluating
    outside it raises :class:`DomainError` instead of returning NaN.
    """

    dim: int
    chart: str
    names: tuple
    evaluator: Callable[[StatePoint], Jet3]
    kind: str = "analytic"
    domain: Optional[Callable[[np.ndarray], bool]] = None
    value_fn: Optional[Callable[[StatePoint], float]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("surface dimension must be >= 1")
        if len(self.names) != self.dim:
            raise DimensionError(f"{len(self.names)} coordinate names for dimension {self.dim}")
        if self.kind not in ("analytic", "finite-difference"):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        object.__setattr__(self, "names", tuple(self.names))

    def point(self, *values) -> StatePoint:
        return StatePoint.from_values(self.names, values, self.chart)

    def in_domain(self, x: StatePoint) -> bool:
        return self.domain is None or bool(self.domain(x.values))

    def check(self, x: StatePoint) -> None:
        if x.names != self.names:
            raise DimensionError(f"point coordinates {x.names} do not match surface chart {self.names}")
        if not self.in_domain(x):
            raise DomainError(f"{x.coords} outside the domain of surface {self.chart}", point=x.coords)

    def jet(self, x: StatePoint) -> Jet3:
        self.check(x)
        out = self.evaluator(x)
        if out.dim != self.dim:
            raise DimensionError(f"evaluator returned a {out.dim}-jet for a {self.dim}-surface")
        return out

    __call__ = jet

    def value(self, x: StatePoint) -> float:
        self.check(x)
        if self.value_fn is not None:
            return float(self.value_fn(x))
        return self.evaluator(x).value


def make_analytic_surface(
    dim: int,
    chart: str,
    names: Sequence[str],
    value: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    hess: Callable[[np.ndarray], np.ndarray],
    third: Callable[[np.ndarray], np.ndarray],
    domain: Optional[Callable[[np.ndarray], bool]] = None,
) -> PotentialSurface:
    """Surface whose jets come from closed-form derivative functions.

    Each callable receives the coordinate values as a 1-D array.  Shapes are
    validated against ``dim`` on every evaluation.
    """

    def evaluator(x: StatePoint) -> Jet3:
        v = x.values
        g = np.atleast_1d(np.asarray(grad(v), dtype=float))
        h = np.asarray(hess(v), dtype=float)
        t = np.asarray(third(v), dtype=float)
        if g.shape != (dim,) or h.shape != (dim, dim) or t.shape != (dim, dim, dim):
            raise DimensionError(
                f"closed forms return shapes {g.shape}, {h.shape}, {t.shape} for declared dim {dim}"
            )
        return Jet3.symmetric(value(v), g, h, t)

    return PotentialSurface(
        dim, chart, tuple(names), evaluator, "analytic", domain, value_fn=lambda x: value(x.values)
    )


def make_fd_surface(
    dim: int,
    chart: str,
    names: Sequence[str],
    value: Callable[[np.ndarray], float],
    domain: Optional[Callable[[np.ndarray], bool]] = None,
    h: Optional[float] = None,
) -> PotentialSurface:
    """Surface whose jets come from :func:`fd_jet3` applied to ``value``."""

    def f(p: StatePoint) -> float:
        if domain is not None and not domain(p.values):
            raise DomainError(f"{p.coords} outside domain", point=p.coords)
        return value(p.values)

    return PotentialSurface(
        dim,
        chart,
        tuple(names),
        lambda x: fd_jet3(f, x, h),
        "finite-difference",
        domain,
        value_fn=lambda x: value(x.values),
    )
