"""Closed-form single-photon scattering amplitudes.

A photon enters waveguide a from the left.  Away from the atom site the
amplitudes are plane (or evanescent) waves; matching at the atom site gives
``t_a = 1 + r_a`` and a transfer amplitude ``t_b`` shared by both directions
of waveguide b.

Every amplitude here is a ratio of polynomials in E: the potential
``V = N / P`` is multiplied out so nothing is divided by ``P``, and the
amplitudes stay finite on the dressed-state poles where ``V`` diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .coupling import potential_parts
from .model import (
    EDGE_EPSILON,
    BandEdge,
    BandEdgeIncident,
    ChannelKind,
    NonIdenticalCrws,
    SystemConfig,
    channel_kind,
)

# Transmission amplitude of the atom-decoupled (dark) combination of the two
# identical waveguides.  It never meets the atom, so it is exactly one.
DARK_TRANSMISSION = 1.0 + 0.0j


@dataclass(frozen=True)
class ScatteringResult:
    energy: float
    t_a: complex
    r_a: complex
    t_b: complex
    T_a: float
    R_a: float
    T_b: float
    transfer_total: float
    channel_b: ChannelKind
    flux_residual: float


@dataclass(frozen=True)
class BrightDarkBasis:
    theta: float
    g: float

    @classmethod
    def from_config(cls, config: SystemConfig) -> "BrightDarkBasis":
        return cls(theta=math.atan2(config.g_b, config.g_a), g=math.hypot(config.g_a, config.g_b))


def _open_incident(config: SystemConfig, energy: float, edge_epsilon: float):
    ch = channel_kind(config.crw_a, energy, edge_epsilon)
    if isinstance(ch, BandEdge):
        raise BandEdgeIncident(f"E={energy} is on an edge of band a {config.crw_a.band}")
    if not ch.is_open:
        raise ValueError(f"E={energy} lies outside band a {config.crw_a.band}; no incident wave")
    return ch


def scattering_denominator(config: SystemConfig, energy: float, s_a: complex, s_b: complex) -> complex:
    """Common denominator of the amplitudes, multiplied through by P(E).

    ``s_a`` and ``s_b`` are the boundary factors ``2i xi sin k`` of each
    waveguide (or their evanescent continuations).
    """
    n, p = potential_parts(config.atom, energy)
    return s_a * s_b * p - (s_a * config.g_b**2 + s_b * config.g_a**2) * n


def scatter_from_a(
    config: SystemConfig, energy: float, edge_epsilon: float = EDGE_EPSILON
) -> ScatteringResult:
    """Amplitudes for a photon of energy ``energy`` incident on waveguide a.

    Waveguide b may be open or closed at ``energy``.  When it is closed the
    transfer amplitude is the evanescent amplitude at the atom site, which
    carries no flux, so ``T_b`` and ``transfer_total`` are reported as zero.
    ``T_b`` is ``|t_b|^2`` weighted by the ratio of group velocities
    ``v_b / v_a``, so ``T_a + R_a + 2 T_b = 1`` also holds for waveguides with
    different bands or hoppings.

    Raises
    ------
    BandEdgeIncident
        If ``energy`` is on an edge of band a.
    ValueError
        If ``energy`` is outside band a.
    """
    ch_a = _open_incident(config, energy, edge_epsilon)
    ch_b = channel_kind(config.crw_b, energy, edge_epsilon)
    s_a = ch_a.boundary_factor(config.crw_a.xi)
    s_b = ch_b.boundary_factor(config.crw_b.xi)

    n, p = potential_parts(config.atom, energy)
    num = s_a * (s_b * p - config.g_b**2 * n)
    # same expansion as scattering_denominator, grouped so num == den at N = 0
    den = num - s_b * config.g_a**2 * n
    if config.g_a == 0:
        t_a, t_b = 1 + 0j, 0j
    elif config.g_b == 0:
        # s_b drops out; keeps band-edge b harmless
        t_a = s_a * p / (s_a * p - config.g_a**2 * n)
        t_b = 0j
    elif den == 0:
        # waveguide b on a band edge at two-photon resonance; limit is t_a = 1
        t_a, t_b = 1 + 0j, 0j
    else:
        t_a = num / den
        t_b = config.g_a * config.g_b * n * s_a / den
    r_a = t_a - 1

    T_a = abs(t_a) ** 2
    R_a = abs(r_a) ** 2
    if ch_b.is_open:
        # probability per unit incident flux; the velocity ratio is 1 for identical guides
        T_b = abs(t_b) ** 2 * ch_b.velocity(config.crw_b.xi) / ch_a.velocity(config.crw_a.xi)
        transfer = 2 * T_b
    else:
        T_b = 0.0
        transfer = 0.0
    return ScatteringResult(
        energy=energy,
        t_a=complex(t_a),
        r_a=complex(r_a),
        t_b=complex(t_b),
        T_a=T_a,
        R_a=R_a,
        T_b=T_b,
        transfer_total=transfer,
        channel_b=ch_b,
        flux_residual=abs(T_a + R_a + transfer - 1),
    )


def scatter_from_b(config: SystemConfig, energy: float, edge_epsilon: float = EDGE_EPSILON) -> ScatteringResult:
    """Incidence on waveguide b, by relabelling a <-> b."""
    swapped = SystemConfig(config.crw_b, config.crw_a, config.g_b, config.g_a, config.atom)
    return scatter_from_a(swapped, energy, edge_epsilon)


def scatter_bright(
    config: SystemConfig, energy: float, edge_epsilon: float = EDGE_EPSILON
) -> tuple[complex, complex]:
    """Transmission and reflection amplitudes ``(t_B, r_B)`` of the bright channel.

    The bright mode couples to the atom with ``g = sqrt(g_a**2 + g_b**2)``;
    only defined when both waveguides are identical.
    """
    if not config.identical_crws():
        raise NonIdenticalCrws(
            f"bright/dark modes need identical waveguides, got {config.crw_a} and {config.crw_b}"
        )
    ch = _open_incident(config, energy, edge_epsilon)
    s = ch.boundary_factor(config.crw_a.xi)
    g2 = config.g_a**2 + config.g_b**2
    n, p = potential_parts(config.atom, energy)
    den = s * p - g2 * n
    t = 1 + 0j if den == 0 else s * p / den
    return complex(t), complex(t - 1)


def scatter_dark(config: SystemConfig, energy: float) -> complex:
    """Dark-channel transmission amplitude: always one."""
    if not config.identical_crws():
        raise NonIdenticalCrws("bright/dark modes need identical waveguides")
    return DARK_TRANSMISSION


def sweep(config: SystemConfig, energies: Iterable[float], edge_epsilon: float = EDGE_EPSILON):
    """Scatter at each energy in order; band-edge points come back as ``None``."""
    out = []
    for e in energies:
        try:
            out.append(scatter_from_a(config, float(e), edge_epsilon))
        except BandEdgeIncident:
            out.append(None)
    return out

