"""Tabular data behind each command-line emission.

Every builder returns ``(header, rows)``; rows are ordered by the scan
parameter so the CSV output is deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from . import gases, reactions, solutions
from .errors import DegeneracyError, DivergenceError, DomainError
from .geometry import curvature, det_and_signature

__all__ = [
    "gas_metric_rows",
    "gas_curvature_rows",
    "spinodal_rows",
    "pt_boundary_rows",
    "w_curve_rows",
    "gibbs_scan_rows",
    "reaction_metric_rows",
    "solution_metric_rows",
    "decompose_rows",
]

NAN = float("nan")


def gas_metric_rows(model: gases.GasModel, T: float, v_values):
    header = ("T", "v", "s", "p", "g11", "g12", "g22", "det", "signature")
    rows = []
    for v in v_values:
        m = gases.weinhold_metric(model, T, v)
        d, sig = det_and_signature(m)
        g = m.g
        rows.append((T, v, m.point["s"], gases.pressure(model, T, v), g[0, 0], g[0, 1], g[1, 1], d, str(sig)))
    return header, rows


def gas_curvature_rows(model: gases.GasModel, T: float, v_values):
    """Scalar curvature from the tensor pipeline and from the closed form.

    ``nan`` marks a degenerate metric or a vanishing closed-form denominator.
    """
    header = ("T", "v", "det", "R_pipeline", "R_closed_form")
    rows = []
    for v in v_values:
        m = gases.weinhold_metric(model, T, v)
        d, _ = det_and_signature(m)
        try:
            r = curvature(m).scalar
        except DegeneracyError:
            r = NAN
        try:
            rc = gases.curvature_closed_form(model, T, v)
        except DivergenceError:
            rc = NAN
        rows.append((T, v, d, r, rc))
    return header, rows


def spinodal_rows(model: gases.GasModel, v_values):
    """``(v, p_spin, T_spin, det_residual)``; the residual is ``|det| / scale^2`` on the curve."""
    header = ("v", "p_spin", "T_spin", "det_residual")
    curve = gases.spinodal(model)
    if curve.empty:
        return header, []
    rows = []
    for v in v_values:
        T = curve.temperature(v)
        m = gases.weinhold_metric(model, T, v)
        d, _ = det_and_signature(m)
        rows.append((v, curve.pressure(v), T, abs(d) / m.scale**2))
    return header, rows


def pt_boundary_rows(T_r_values, include_unphysical: bool = False):
    """Reduced spinodal branch points ``(v_r, T_r, p_r, branch_id)``.

    Branch 1 is the root below ``v_r = 1/3`` (omitted unless asked for);
    branches 2 and 3 trace the two arms of the p-T boundary.
    """
    header = ("v_r", "T_r", "p_r", "branch_id")
    rows = []
    for t in sorted(float(x) for x in T_r_values):
        for b in gases.reduced_spinodal_branches(t, include_unphysical):
            rows.append((b.v_r, b.T_r, b.p_r, b.branch_id))
    return header, rows


def w_curve_rows(s: reactions.Stoichiometry, xi_values):
    header = ("xi", "W", "dW_dxi")
    rows = [(x, reactions.w_phase_boundary(s, x), reactions.dw_phase_boundary(s, x)) for x in xi_values]
    return header, rows


def gibbs_scan_rows(s: reactions.Stoichiometry, T: float, xi_values, p: float = 1.0, omega=None, R=reactions.R_GAS):
    header = ("xi", "G", "dG_dxi", "d2G_dxi2")
    excess = None
    if omega is not None:
        lo, hi = reactions.feasibility_interval(s)
        excess = reactions.RegularExcess(omega, lo, hi)
    return header, reactions.gibbs_scan(s, T, xi_values, p, R=R, excess=excess)


def reaction_metric_rows(s: reactions.Stoichiometry, T: float, p: float, xi_values, R=reactions.R_GAS):
    header = ("xi", "g_pp", "g_pxi", "g_xixi", "det", "signature")
    rows = []
    for x in xi_values:
        m = reactions.mixture_isothermal_metric(s, T, p, x, R)
        d, sig = det_and_signature(m)
        rows.append((x, m.g[0, 0], m.g[0, 1], m.g[1, 1], d, str(sig)))
    return header, rows


def _mu_default(r):
    from .potentials import StandardPotential

    return tuple(StandardPotential() for _ in range(r))


def solution_metric_rows(moles_list, T: float, p: float, activity=None, R=reactions.R_GAS):
    """One row per mole vector: moles, upper-triangle metric entries, det and its relative size.

    ``det_rel`` is ``|det| / (R T / min N)^r``.
    """
    moles_list = [np.asarray(N, dtype=float) for N in moles_list]
    r = moles_list[0].size
    if any(N.size != r for N in moles_list):
        raise DomainError("every mole vector must have the same length")
    pairs = [(i, k) for i in range(r) for k in range(i, r)]
    header = (
        ("sample",)
        + tuple(f"N{i + 1}" for i in range(r))
        + tuple(f"eta_{i + 1}{k + 1}" for i, k in pairs)
        + ("det", "det_rel", "signature")
    )
    rows = []
    for n, N in enumerate(moles_list):
        spec = solutions.SolutionSpec(tuple(N), _mu_default(r), activity, R)
        m = solutions.isothermal_isobaric_metric(spec, T, p)
        d, sig = det_and_signature(m)
        scale = (R * T / float(N.min())) ** r
        rows.append((n,) + tuple(N) + tuple(m.g[i, k] for i, k in pairs) + (d, abs(d) / scale, str(sig)))
    return header, rows


def decompose_rows(N, T: float, p: float, activity=None, R=reactions.R_GAS):
    header = ("i", "k", "total", "ideal", "deviation")
    N = tuple(float(x) for x in N)
    spec = solutions.SolutionSpec(N, _mu_default(len(N)), activity, R)
    pm = solutions.partial_molars(spec, T, p)
    rows = []
    for i in range(len(N)):
        for k in range(len(N)):
            rows.append((i + 1, k + 1, pm.mu_bar[i, k], pm.mu_bar_ideal[i, k], pm.mu_bar_deviation[i, k]))
    return header, rows


def linspace(lo: float, hi: float, n: int):
    if n < 2:
        raise ValueError("at least two samples are required")
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"empty range {lo}:{hi}")
    return [float(x) for x in np.linspace(lo, hi, n)]
