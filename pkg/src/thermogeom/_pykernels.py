"""Pure-Python/NumPy implementations of the small dense kernels.

These are the reference versions; ``_ckernels`` mirrors every function
with the same signature.  All inputs are float64 arrays, all outputs are
freshly allocated.
"""

import math

import numpy as np

BACKEND = "python"


def det(a):
    """Determinant by Gaussian elimination with partial pivoting."""
    m = np.array(a, dtype=float)
    n = m.shape[0]
    d = 1.0
    for c in range(n):
        p = c + int(np.argmax(np.abs(m[c:, c])))
        piv = m[p, c]
        if piv == 0.0:
            return 0.0
        if p != c:
            m[[c, p]] = m[[p, c]]
            d = -d
        d *= piv
        for r in range(c + 1, n):
            f = m[r, c] / piv
            if f != 0.0:
                m[r, c:] -= f * m[c, c:]
    return d


def inv(a):
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    Raises ZeroDivisionError on an exactly zero pivot.
    """
    m = np.array(a, dtype=float)
    n = m.shape[0]
    out = np.eye(n)
    for c in range(n):
        p = c + int(np.argmax(np.abs(m[c:, c])))
        piv = m[p, c]
        if piv == 0.0:
            raise ZeroDivisionError("singular matrix")
        if p != c:
            m[[c, p]] = m[[p, c]]
            out[[c, p]] = out[[p, c]]
        m[c] /= piv
        out[c] /= piv
        for r in range(n):
            if r != c:
                f = m[r, c]
                if f != 0.0:
                    m[r] -= f * m[c]
                    out[r] -= f * out[c]
    return out


def jacobi_eigenvalues(a, tol=1e-14, max_sweeps=64):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    m = np.array(a, dtype=float)
    n = m.shape[0]
    scale = float(np.max(np.abs(m))) if n else 0.0
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += m[p, q] * m[p, q]
        if math.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    mkp = m[k, p]
                    mkq = m[k, q]
                    m[k, p] = c * mkp - s * mkq
                    m[k, q] = s * mkp + c * mkq
                for k in range(n):
                    mpk = m[p, k]
                    mqk = m[q, k]
                    m[p, k] = c * mpk - s * mqk
                    m[q, k] = s * mpk + c * mqk
    return np.sort(np.diag(m).copy())


def hessian_christoffel(ginv, dg):
    """``G[k, i, j] = 1/2 sum_m dg[i, j, m] ginv[k, m]``."""
    return 0.5 * np.einsum("ijm,km->kij", dg, ginv)


def levi_civita_christoffel(ginv, dg):
    """Christoffel symbols of the second kind from an arbitrary metric derivative.

    ``dg[i, j, m]`` is the derivative of ``g[i, j]`` along coordinate ``m``.
    """
    # first[m, i, j] = d_i g_jm + d_j g_im - d_m g_ij
    first = np.einsum("jmi->mij", dg) + np.einsum("imj->mij", dg) - np.einsum("ijm->mij", dg)
    return 0.5 * np.einsum("km,mij->kij", ginv, first)


def hessian_riemann(ginv, dg):
    """Riemann tensor ``R[l, i, j, k]`` of a Hessian metric from third derivatives.

    ``R^l_ijk = 1/4 (d_ijm d_snk - d_snj d_kim) g^mn g^ls``
    """
    a = np.einsum("ijm,mn->ijn", dg, ginv)
    b = np.einsum("ls,snk->lnk", ginv, dg)
    t1 = np.einsum("ijn,lnk->lijk", a, b)
    t2 = np.einsum("kin,lnj->lijk", a, b)
    return 0.25 * (t1 - t2)


def ricci_scalar(riem, ginv):
    """Ricci tensor ``R_ik = R^j_ijk`` and scalar ``R_ik g^ik``."""
    ric = np.einsum("jijk->ik", riem)
    return ric, float(np.einsum("ik,ik->", ric, ginv))
