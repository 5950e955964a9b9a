"""Uniform 1-D scans with bracketed roots and extrema.

Used for degeneracy curves, spinodal extrema and the critical extent of a
reaction.  Root refinement is Brent's method (``scipy.optimize.brentq``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

__all__ = ["Root", "Extremum", "ScanResult", "scan_1d", "refine_root"]

XTOL = 1e-12


@dataclass(frozen=True)
class Root:
    bracket: tuple
    root: float
    residual: float


@dataclass(frozen=True)
class Extremum:
    location: float
    value: float
    kind: str  # "min" or "max"


@dataclass(frozen=True)
class ScanResult:
    samples: list
    roots: list = field(default_factory=list)
    extrema: list = field(default_factory=list)
    skipped: list = field(default_factory=list)


def _safe(f, t):
    try:
        y = float(f(t))
    except (ArithmeticError, ValueError):
        return math.nan
    return y


def refine_root(f: Callable[[float], float], lo: float, hi: float, xtol: float = XTOL) -> float:
    """Brent refinement of a sign change on ``[lo, hi]``."""
    return brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)


def _sign_changes(ts, ys):
    out = []
    for i in range(len(ts) - 1):
        a, b = ys[i], ys[i + 1]
        if not (math.isfinite(a) and math.isfinite(b)):
            continue
        if a == 0.0:
            out.append((ts[i], ts[i]))
        elif a * b < 0.0:
            out.append((ts[i], ts[i + 1]))
    if ys and math.isfinite(ys[-1]) and ys[-1] == 0.0:
        out.append((ts[-1], ts[-1]))
    return out


def scan_1d(
    f: Callable[[float], float],
    interval,
    n_samples: int = 401,
    derivative: Optional[Callable[[float], float]] = None,
    xtol: float = XTOL,
) -> ScanResult:
    """Sample ``f`` uniformly, then bracket and refine its roots and extrema.

    Extrema are the roots of ``derivative`` when given, otherwise of a
    central difference of ``f`` with step ``1e-5 * (hi - lo)``.  Samples
    where ``f`` is non-finite (or raises a domain-type error) are recorded
    in ``skipped`` and never used to form brackets.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    ts = np.linspace(lo, hi, n_samples).tolist()
    ys = [_safe(f, t) for t in ts]
    samples = list(zip(ts, ys))
    skipped = [t for t, y in samples if not math.isfinite(y)]

    roots = []
    for a, b in _sign_changes(ts, ys):
        r = a if a == b else refine_root(f, a, b, xtol)
        roots.append(Root((a, b), r, float(f(r))))

    if derivative is None:
        delta = 1e-5 * (hi - lo)

        def derivative(t):
            return (f(t + delta) - f(t - delta)) / (2 * delta)

        d_ts = ts[1:-1]
    else:
        d_ts = ts
    dys = [_safe(derivative, t) for t in d_ts]
    extrema = []
    for a, b in _sign_changes(d_ts, dys):
        loc = a if a == b else refine_root(derivative, a, b, xtol)
        left = _safe(derivative, a - 1e-9 * (hi - lo)) if a == b else _safe(derivative, a)
        kind = "min" if left < 0 else "max"
        extrema.append(Extremum(loc, float(f(loc)), kind))
    return ScanResult(samples, roots, extrema, skipped)
