"""Backend selection for the dense tensor kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
NumPy implementation in ``_pykernels`` is used.  Setting the environment
variable ``THERMOGEOM_PURE_PYTHON=1`` forces the fallback.
"""

import os

if os.environ.get("THERMOGEOM_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND

det = _impl.det
inv = _impl.inv
jacobi_eigenvalues = _impl.jacobi_eigenvalues
hessian_christoffel = _impl.hessian_christoffel
levi_civita_christoffel = _impl.levi_civita_christoffel
hessian_riemann = _impl.hessian_riemann
ricci_scalar = _impl.ricci_scalar

__all__ = [
    "BACKEND",
    "det",
    "inv",
    "jacobi_eigenvalues",
    "hessian_christoffel",
    "levi_civita_christoffel",
    "hessian_riemann",
    "ricci_scalar",
]
