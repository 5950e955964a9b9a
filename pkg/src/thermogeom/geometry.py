"""Hessian metrics and their curvature.

For a Hessian metric ``g_ij = d_i d_j Phi`` every curvature quantity is a
contraction of the third-derivative tensor ``g_ij,m`` with the inverse
metric, so a :class:`MetricValue` carries exactly ``g`` and ``dg``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import ConsistencyError, DegeneracyError, DimensionError
from .numdiff import PotentialSurface, StatePoint, _frozen

__all__ = [
    "DEGENERACY_TOL",
    "NEAR_DEGENERACY_TOL",
    "MetricValue",
    "Signature",
    "CurvatureReport",
    "hessian_metric",
    "det_and_signature",
    "christoffel",
    "levi_civita_christoffel",
    "riemann",
    "curvature",
    "ricci_2d",
    "scalar_curvature_2d",
    "gaussian_curvature_2d",
    "textbook_riemann",
]

DEGENERACY_TOL = 1e-10
NEAR_DEGENERACY_TOL = 1e-6
MAX_DIM = 16


@dataclass(frozen=True)
class MetricValue:
    """Symmetric metric ``g`` at a point with its coordinate derivatives.

    ``dg[i, j, m]`` is the derivative of ``g[i, j]`` along coordinate ``m``;
    it may be ``None`` when only the metric itself is known (the curvature
    routines then refuse to run).
    """

    g: np.ndarray
    dg: Optional[np.ndarray] = None
    point: Optional[StatePoint] = None

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.g, dtype=float))
        k = g.shape[0]
        if g.shape != (k, k):
            raise DimensionError(f"metric must be square, got {g.shape}")
        if k > MAX_DIM:
            raise DimensionError(f"metric dimension {k} exceeds {MAX_DIM}")
        scale = float(np.max(np.abs(g))) if g.size else 0.0
        if np.max(np.abs(g - g.T), initial=0.0) > 1e-12 * scale:
            raise ValueError("metric is not symmetric")
        object.__setattr__(self, "g", _frozen(g))
        if self.dg is not None:
            dg = np.asarray(self.dg, dtype=float)
            if dg.shape != (k, k, k):
                raise DimensionError(f"metric derivative shape {dg.shape} does not match dimension {k}")
            object.__setattr__(self, "dg", _frozen(dg))

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def scale(self) -> float:
        """Largest absolute metric entry."""
        return float(np.max(np.abs(self.g)))

    def sub(self, axes) -> "MetricValue":
        """Metric induced on the coordinate sub-chart ``axes`` (others held fixed)."""
        ax = list(axes)
        dg = None if self.dg is None else self.dg[np.ix_(ax, ax, ax)]
        return MetricValue(self.g[np.ix_(ax, ax)], dg, self.point)


@dataclass(frozen=True)
class Signature:
    """Eigenvalue-sign classification of a metric."""

    kind: str
    positive: int = 0
    negative: int = 0

    def __str__(self) -> str:
        if self.kind == "indefinite":
            return f"indefinite({self.positive},{self.negative})"
        return self.kind


@dataclass(frozen=True)
class CurvatureReport:
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    det: float
    signature: Signature
    near_degenerate: bool = False


def hessian_metric(surface: PotentialSurface, x: StatePoint) -> MetricValue:
    """Metric ``g_ij = d_i d_j Phi`` with ``dg`` from the third derivatives."""
    jet = surface.jet(x)
    return MetricValue(jet.hess, jet.third, x)


def _relative_det(m: MetricValue, det: float) -> float:
    scale = m.scale
    if scale == 0.0:
        return 0.0
    return abs(det) / scale**m.dim


def det_and_signature(m: MetricValue, degeneracy_tol: float = DEGENERACY_TOL):
    """Determinant (elimination with partial pivoting) and signature.

    The metric counts as degenerate when ``|det| < degeneracy_tol * scale**k``
    where ``scale`` is the largest ``|g_ij|``.
    """
    d = float(kernels.det(m.g))
    if _relative_det(m, d) < degeneracy_tol:
        return d, Signature("degenerate")
    ev = kernels.jacobi_eigenvalues(m.g)
    tol = 1e-12 * max(float(np.max(np.abs(ev))), np.finfo(float).tiny)
    pos = int(np.sum(ev > tol))
    neg = int(np.sum(ev < -tol))
    if pos + neg < m.dim:
        return d, Signature("degenerate", pos, neg)
    if neg == 0:
        return d, Signature("positive-definite", pos, 0)
    if pos == 0:
        return d, Signature("negative-definite", 0, neg)
    return d, Signature("indefinite", pos, neg)


def _require_dg(m: MetricValue) -> np.ndarray:
    if m.dg is None:
        raise ValueError("metric derivatives are required for connection and curvature")
    return m.dg


def _inverse(m: MetricValue, degeneracy_tol: float = DEGENERACY_TOL):
    d = float(kernels.det(m.g))
    if _relative_det(m, d) < degeneracy_tol:
        raise DegeneracyError(f"metric is degenerate (det = {d:.6g})", det=d)
    return kernels.inv(m.g), d


def christoffel(m: MetricValue) -> np.ndarray:
    """``Gamma[k, i, j] = 1/2 sum_m g_ij,m g^km`` for a Hessian metric."""
    ginv, _ = _inverse(m)
    return kernels.hessian_christoffel(ginv, _require_dg(m))


def levi_civita_christoffel(m: MetricValue) -> np.ndarray:
    """General ``1/2 g^km (d_i g_jm + d_j g_im - d_m g_ij)``; no symmetry assumed for ``dg``."""
    ginv, _ = _inverse(m)
    return kernels.levi_civita_christoffel(ginv, _require_dg(m))


def riemann(m: MetricValue) -> np.ndarray:
    """``R[l, i, j, k]`` from the closed form in third derivatives."""
    ginv, _ = _inverse(m)
    return kernels.hessian_riemann(ginv, _require_dg(m))


def curvature(m: MetricValue) -> CurvatureReport:
    """Christoffel symbols, Riemann and Ricci tensors and scalar curvature.

    Raises :class:`DegeneracyError` below the degeneracy tolerance; reports
    ``near_degenerate`` when ``|det| / scale**k`` is under ``1e-6``.
    """
    dg = _require_dg(m)
    ginv, d = _inverse(m)
    gam = kernels.hessian_christoffel(ginv, dg)
    riem = kernels.hessian_riemann(ginv, dg)
    ric, sc = kernels.ricci_scalar(riem, ginv)
    _, sig = det_and_signature(m)
    return CurvatureReport(
        christoffel=gam,
        riemann=riem,
        ricci=ric,
        scalar=float(sc),
        det=d,
        signature=sig,
        near_degenerate=_relative_det(m, d) < NEAR_DEGENERACY_TOL,
    )


def _check_2d(m: MetricValue):
    if m.dim != 2:
        raise DimensionError(f"two-dimensional metric required, got dimension {m.dim}")
    return _require_dg(m)


def ricci_2d(m: MetricValue):
    """Closed-form Ricci components ``(R11, R12, R22)`` of a 2-D Hessian metric."""
    d = _check_2d(m)
    gi, _ = _inverse(m)

    def e(i, j, k):
        return d[i - 1, j - 1, k - 1]

    u11, u12, u22 = gi[0, 0], gi[0, 1], gi[1, 1]
    r11 = 0.25 * (
        (e(2, 1, 1) ** 2 - e(1, 1, 1) * e(2, 1, 2)) * u11 * u22
        + (e(2, 1, 1) * e(2, 1, 2) - e(1, 1, 1) * e(2, 2, 2)) * u12 * u22
        + (e(2, 1, 2) ** 2 - e(1, 1, 2) * e(2, 2, 2)) * u22**2
    )
    r12 = 0.25 * (
        (e(1, 1, 1) * e(2, 1, 2) - e(2, 1, 1) ** 2) * u11 * u12
        + (e(1, 1, 1) * e(2, 2, 2) - e(2, 1, 2) * e(1, 1, 2)) * u12**2
        + (e(1, 1, 2) * e(2, 2, 2) - e(2, 1, 2) ** 2) * u12 * u22
    )
    r22 = 0.25 * (
        (e(2, 1, 1) ** 2 - e(2, 2, 1) * e(1, 1, 1)) * u11**2
        + (e(2, 1, 2) * e(1, 1, 2) - e(1, 1, 1) * e(2, 2, 2)) * u11 * u12
        + (e(2, 1, 2) ** 2 - e(1, 2, 1) * e(2, 2, 2)) * u11 * u22
    )
    return r11, r12, r22


def _bordered_det(m: MetricValue) -> float:
    g, d = m.g, m.dg
    b = np.array(
        [
            [g[0, 0], d[0, 0, 0], d[0, 0, 1]],
            [g[0, 1], d[0, 1, 0], d[0, 1, 1]],
            [g[1, 1], d[1, 1, 0], d[1, 1, 1]],
        ]
    )
    return float(kernels.det(b))


def gaussian_curvature_2d(m: MetricValue) -> float:
    """Gaussian curvature ``K = -det(B) / (4 det(g)^2)`` of a 2-D Hessian metric.

    ``B`` is the 3x3 matrix with rows ``(g_ij, g_ij,1, g_ij,2)`` for
    ``ij = 11, 12, 22``.  The scalar curvature is ``2 K``.
    """
    _check_2d(m)
    _, d = _inverse(m)
    return -_bordered_det(m) / (4.0 * d * d)


def scalar_curvature_2d(m: MetricValue, rtol: float = 1e-8) -> float:
    """Scalar curvature of a 2-D Hessian metric from the bordered determinant.

    Returns ``-det(B) / (2 det(g)^2)`` and cross-checks it against
    ``2 (R11 g^11 + R12 g^12)`` built from the closed-form Ricci components;
    a disagreement beyond ``rtol`` raises :class:`ConsistencyError`.
    """
    _check_2d(m)
    ginv, d = _inverse(m)
    r_det = -_bordered_det(m) / (2.0 * d * d)
    r11, r12, _ = ricci_2d(m)
    r_ricci = 2.0 * (r11 * ginv[0, 0] + r12 * ginv[0, 1])
    # natural magnitude of each formula's terms; guards flat metrics where both are rounding noise
    floor = 1e-12 * float(np.max(np.abs(m.dg))) ** 2 * float(np.max(np.abs(ginv))) ** 3
    if abs(r_det - r_ricci) > rtol * max(abs(r_det), abs(r_ricci)) + floor:
        raise ConsistencyError(f"2-D curvature formulas disagree: {r_det!r} vs {r_ricci!r}")
    return r_det


def textbook_riemann(
    metric_at: Callable[[np.ndarray], MetricValue], x, h: float = 1e-4
) -> np.ndarray:
    """Riemann tensor from Levi-Civita Christoffel symbols and their derivatives.

    ``R^l_ijk = G^l_ki,j - G^l_ji,k + G^l_jp G^p_ki - G^l_kp G^p_ji`` with the
    Christoffel derivatives taken by fourth-order central differences of
    ``metric_at``.  Independent of the Hessian closed form; used as a check.
    """
    x = np.asarray(x, dtype=float)
    k = x.size
    steps = h * np.maximum(1.0, np.abs(x))

    def gamma(y):
        return levi_civita_christoffel(metric_at(y))

    g0 = gamma(x)
    dgam = np.empty((k, k, k, k))  # dgam[l, a, b, j] = d_j G^l_ab
    for j in range(k):
        e = np.zeros(k)
        e[j] = steps[j]
        dgam[..., j] = (-gamma(x + 2 * e) + 8 * gamma(x + e) - 8 * gamma(x - e) + gamma(x - 2 * e)) / (
            12 * steps[j]
        )
    r = (
        np.einsum("lkij->lijk", dgam)
        - np.einsum("ljik->lijk", dgam)
        + np.einsum("ljp,pki->lijk", g0, g0)
        - np.einsum("lkp,pji->lijk", g0, g0)
    )
    return r
