"""Geometry of the periodic strip.

The domain is the planar strip ``0 < x2 < d`` (Dirichlet walls), carrying a
perturbation that is periodic in ``x1`` with period ``2T``.  Everything
downstream is controlled by the single dimensionless aspect ratio

    xi = T / d.

Energies are usually handled in rescaled form: the dimensionless spectral
parameter ``ell`` corresponds to the energy ``pi^2 * ell / T^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class StripGeometry:
    """Half-period ``T`` and strip width ``d`` (both in the same length unit)."""

    T: float
    d: float

    def __post_init__(self) -> None:
        if not (self.T > 0.0 and math.isfinite(self.T)):
            raise ValueError(f"half-period T must be positive and finite, got {self.T}")
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise ValueError(f"strip width d must be positive and finite, got {self.d}")

    @property
    def xi(self) -> float:
        """Aspect ratio T/d."""
        return self.T / self.d

    def energy_from_scaled(self, ell: float) -> float:
        """Energy corresponding to the dimensionless parameter ``ell``."""
        return math.pi * math.pi * ell / (self.T * self.T)

    def scaled_from_energy(self, energy: float) -> float:
        """Dimensionless parameter ``ell`` corresponding to an energy."""
        return energy * self.T * self.T / (math.pi * math.pi)


def resolve_geometry(xi: float | None = None,
                     T: float | None = None,
                     d: float | None = None) -> StripGeometry:
    """Build a StripGeometry from any two of (xi, T, d).

    If all three are given they must be consistent to ~1e-9 relative.
    If only ``xi`` is given, ``d`` defaults to 1.
    """
    given = sum(v is not None for v in (xi, T, d))
    if given == 0:
        raise ValueError("need at least one of xi, T, d")
    if xi is not None and xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    if T is None and d is None:
        T, d = xi, 1.0
    elif T is None:
        T = xi * d
    elif d is None:
        if xi is None:
            raise ValueError("need xi or d together with T")
        d = T / xi
    geom = StripGeometry(T=T, d=d)
    if xi is not None and abs(geom.xi - xi) > 1e-9 * max(1.0, abs(xi)):
        raise ValueError(f"inconsistent geometry: T/d = {geom.xi} but xi = {xi}")
    return geom


def validate_tau(tau: float) -> float:
    """Check that a quasimomentum lies in the Brillouin zone (-1/2, 1/2]."""
    if not (-0.5 < tau <= 0.5):
        raise ValueError(f"quasimomentum must lie in (-1/2, 1/2], got {tau}")
    return float(tau)


def validate_ell(ell: float) -> float:
    """Check that a dimensionless spectral parameter is finite and >= 0."""
    if not (ell >= 0.0 and math.isfinite(ell)):
        raise ValueError(f"scaled energy must be finite and >= 0, got {ell}")
    return float(ell)
