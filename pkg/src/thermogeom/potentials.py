"""Differentiable standard-state chemical potentials.

``mu(T, p) = a0 + a1 T + a2 T ln T + v0 p - kp p^2 / 2``

With ``v0 = kp = 0`` this is a pure temperature function, used for the
standard potentials of reacting gases.  The linear and quadratic pressure
terms give liquid-like standard states a non-trivial partial molar volume
and compressibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["StandardPotential"]


@dataclass(frozen=True)
class StandardPotential:
    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    v0: float = 0.0
    kp: float = 0.0

    def __call__(self, T: float, p: float = 0.0) -> float:
        return self.a0 + self.a1 * T + self.a2 * T * math.log(T) + self.v0 * p - 0.5 * self.kp * p * p

    def dT(self, T: float) -> float:
        return self.a1 + self.a2 * (math.log(T) + 1.0)

    def d2T(self, T: float) -> float:
        return self.a2 / T

    def d3T(self, T: float) -> float:
        return -self.a2 / (T * T)

    def dp(self, p: float = 0.0) -> float:
        return self.v0 - self.kp * p

    def d2p(self) -> float:
        return -self.kp
