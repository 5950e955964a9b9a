"""Hessian-metric geometry of thermodynamic systems.

Single-component gases (ideal, van der Waals, Berthelot), closed systems
with chemical reactions, and open multicomponent solutions, each with its
thermodynamic metric, degeneracy locus and curvature.
"""

from .errors import (
    ConfigError,
    ConsistencyError,
    DegeneracyError,
    DimensionError,
    DivergenceError,
    DomainError,
    InfeasibleExtentError,
    MechanicalInstabilityError,
    NoCriticalPointError,
    ThermoGeomError,
)
from .kernels import BACKEND
from .numdiff import Jet3, PotentialSurface, StatePoint, fd_jet3
from .geometry import (
    CurvatureReport,
    MetricValue,
    Signature,
    curvature,
    det_and_signature,
    hessian_metric,
    scalar_curvature_2d,
)
from .gases import GasModel, GasParams
from .potentials import StandardPotential
from .reactions import R_GAS, Stoichiometry
from .solutions import MargulesBinary, SolutionSpec
from .scan import scan_1d

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConsistencyError",
    "CurvatureReport",
    "DegeneracyError",
    "DimensionError",
    "DivergenceError",
    "DomainError",
    "GasModel",
    "GasParams",
    "InfeasibleExtentError",
    "Jet3",
    "MargulesBinary",
    "MechanicalInstabilityError",
    "MetricValue",
    "NoCriticalPointError",
    "PotentialSurface",
    "R_GAS",
    "Signature",
    "SolutionSpec",
    "StandardPotential",
    "StatePoint",
    "Stoichiometry",
    "ThermoGeomError",
    "curvature",
    "det_and_signature",
    "fd_jet3",
    "hessian_metric",
    "scalar_curvature_2d",
    "scan_1d",
]
