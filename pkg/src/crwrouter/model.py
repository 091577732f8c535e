"""Parameter records, dispersion relations and channel classification.

All energies are dimensionless, measured in units of the hopping energy of
waveguide a.  The atom is described in the frame rotating with the drive, so
``omega_s`` is the intermediate level plus the drive frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

EDGE_EPSILON = 1e-9


class RouterError(Exception):
    """Base class for errors raised by this package."""


class BandEdgeIncident(RouterError):
    """Incident energy sits on a band edge, where the group velocity vanishes."""


class NonIdenticalCrws(RouterError):
    """Bright/dark decomposition requested for waveguides that differ."""


class WrongSide(RouterError):
    """Energy lies inside a band or on the side not matching the requested branch."""


@dataclass(frozen=True)
class CrwParams:
    """One coupled-resonator waveguide: on-site frequency and hopping energy."""

    omega: float
    xi: float

    def __post_init__(self):
        if not (self.xi > 0 and math.isfinite(self.xi)):
            raise ValueError(f"hopping energy must be positive, got {self.xi}")
        if not math.isfinite(self.omega):
            raise ValueError(f"on-site frequency must be finite, got {self.omega}")

    @property
    def band(self) -> tuple[float, float]:
        return (self.omega - 2 * self.xi, self.omega + 2 * self.xi)

    def in_band(self, energy: float) -> bool:
        lo, hi = self.band
        return lo < energy < hi


@dataclass(frozen=True)
class AtomParams:
    """Lambda atom in the rotating frame; ``rabi`` is the drive amplitude |Omega|."""

    omega_e: float
    omega_s: float
    rabi: float = 0.0

    def __post_init__(self):
        for name in ("omega_e", "omega_s", "rabi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.rabi < 0:
            raise ValueError(f"rabi must be >= 0, got {self.rabi}")


@dataclass(frozen=True)
class SystemConfig:
    crw_a: CrwParams
    crw_b: CrwParams
    g_a: float
    g_b: float
    atom: AtomParams

    def __post_init__(self):
        if self.g_a < 0 or self.g_b < 0:
            raise ValueError("atom-waveguide couplings must be >= 0")

    @classmethod
    def from_flat(cls, d: dict) -> "SystemConfig":
        """Build from the flat key layout used by config files."""
        return cls(
            crw_a=CrwParams(float(d["omega_a"]), float(d.get("xi_a", 1.0))),
            crw_b=CrwParams(float(d["omega_b"]), float(d.get("xi_b", 1.0))),
            g_a=float(d["g_a"]),
            g_b=float(d["g_b"]),
            atom=AtomParams(float(d["omega_e"]), float(d["omega_s"]), float(d.get("rabi", 0.0))),
        )

    def to_flat(self) -> dict:
        return {
            "xi_a": self.crw_a.xi,
            "xi_b": self.crw_b.xi,
            "omega_a": self.crw_a.omega,
            "omega_b": self.crw_b.omega,
            "omega_e": self.atom.omega_e,
            "omega_s": self.atom.omega_s,
            "rabi": self.atom.rabi,
            "g_a": self.g_a,
            "g_b": self.g_b,
        }

    def identical_crws(self) -> bool:
        return self.crw_a.omega == self.crw_b.omega and self.crw_a.xi == self.crw_b.xi

    def with_(self, **changes) -> "SystemConfig":
        """Copy with flat-key overrides, e.g. ``cfg.with_(rabi=0.3, g_a=0)``."""
        flat = self.to_flat()
        unknown = set(changes) - set(flat)
        if unknown:
            raise KeyError(f"unknown parameters: {sorted(unknown)}")
        flat.update(changes)
        return SystemConfig.from_flat(flat)


# Channel classification -------------------------------------------------------


@dataclass(frozen=True)
class Open:
    k: float

    is_open = True

    def velocity(self, xi: float) -> float:
        return 2 * xi * math.sin(self.k)

    def boundary_factor(self, xi: float) -> complex:
        """``2i xi sin k``: the j=0 matching factor of an outgoing wave."""
        return 2j * xi * math.sin(self.k)


@dataclass(frozen=True)
class ClosedBelow:
    """Evanescent channel below the band, wavenumber 0 + i kappa."""

    kappa: float

    is_open = False
    branch = 0

    def boundary_factor(self, xi: float) -> complex:
        # 2i xi sin(n pi + i kappa) = -(-1)^n 2 xi sinh(kappa)
        return complex(-2 * xi * math.sinh(self.kappa))


@dataclass(frozen=True)
class ClosedAbove:
    """Evanescent channel above the band, wavenumber pi + i kappa."""

    kappa: float

    is_open = False
    branch = 1

    def boundary_factor(self, xi: float) -> complex:
        return complex(2 * xi * math.sinh(self.kappa))


@dataclass(frozen=True)
class BandEdge:
    is_open = False

    def boundary_factor(self, xi: float) -> complex:
        return 0j


ChannelKind = Union[Open, ClosedBelow, ClosedAbove, BandEdge]


def dispersion(crw: CrwParams, k: float) -> float:
    """Band energy ``omega - 2 xi cos k`` of a plane wave with wavenumber ``k``."""
    return crw.omega - 2 * crw.xi * math.cos(k)


def channel_kind(crw: CrwParams, energy: float, edge_epsilon: float = EDGE_EPSILON) -> ChannelKind:
    """Classify ``energy`` relative to the band of ``crw``.

    Open channels get ``k`` in (0, pi) so the group velocity ``2 xi sin k`` is
    positive.  Closed channels get the decay constant ``kappa > 0`` on the
    branch below (wavenumber ``i kappa``) or above (``pi + i kappa``) the band.
    Energies within ``edge_epsilon`` (relative to ``2 xi``) of an edge are
    reported as :class:`BandEdge`.
    """
    if edge_epsilon <= 0:
        raise ValueError("edge_epsilon must be positive")
    c = (crw.omega - energy) / (2 * crw.xi)
    if abs(c) < 1 - edge_epsilon:
        return Open(math.acos(c))
    if c > 1 + edge_epsilon:
        return ClosedBelow(math.acosh(c))
    if c < -(1 + edge_epsilon):
        return ClosedAbove(math.acosh(-c))
    return BandEdge()


def closed_energy(crw: CrwParams, kappa: float, branch: int) -> float:
    """Energy of an evanescent solution: ``omega - (-1)^n 2 xi cosh kappa``."""
    sign = 1 if branch == 0 else -1
    return crw.omega - sign * 2 * crw.xi * math.cosh(kappa)
