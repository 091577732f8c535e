"""Atom-induced potential, effective inter-waveguide coupling and dressed states."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import AtomParams, SystemConfig


@dataclass(frozen=True)
class DressedSpectrum:
    omega_plus: float
    omega_minus: float
    mu: float
    a_plus: float
    a_minus: float
    degenerate: bool = False


def potential_parts(atom: AtomParams, energy: float) -> tuple[float, float]:
    """Numerator and denominator of V(E) with any common factor removed.

    Returns ``(N, P)`` with ``V = N / P``.  For a driven atom
    ``N = E - omega_s`` and ``P = (E - omega_e)(E - omega_s) - rabi**2``.
    Without drive the intermediate level decouples and ``V = 1 / (E - omega_e)``;
    the cancelled factor would otherwise make both parts vanish at ``omega_s``.
    """
    if atom.rabi == 0:
        return 1.0, energy - atom.omega_e
    n = energy - atom.omega_s
    return n, (energy - atom.omega_e) * n - atom.rabi**2


def potential_v(atom: AtomParams, energy: float) -> float:
    """Energy-dependent contact potential seen by a photon at the atom site.

    Returns a signed infinity on the dressed-state poles.  Amplitude formulas
    never divide by this value; they use :func:`potential_parts` instead.
    """
    n, p = potential_parts(atom, energy)
    if p == 0:
        if n == 0:
            return math.nan
        return math.copysign(math.inf, n)
    return n / p


def coupling_g(config: SystemConfig, energy: float) -> float:
    """Effective dispersive coupling between the two atom-site cavities."""
    if config.g_a == 0 or config.g_b == 0:
        return 0.0
    return config.g_a * config.g_b * potential_v(config.atom, energy)


def dressed_spectrum(atom: AtomParams) -> DressedSpectrum:
    """Dressed-state energies, splitting ``mu`` and pole residues ``A+-``."""
    detuning = atom.omega_e - atom.omega_s
    mu = math.hypot(detuning, 2 * atom.rabi)
    if mu == 0:
        return DressedSpectrum(atom.omega_e, atom.omega_e, 0.0, 0.5, 0.5, degenerate=True)
    centre = 0.5 * (atom.omega_s + atom.omega_e)
    return DressedSpectrum(
        omega_plus=centre + 0.5 * mu,
        omega_minus=centre - 0.5 * mu,
        mu=mu,
        a_plus=0.5 * (1 + detuning / mu),
        a_minus=0.5 * (1 - detuning / mu),
    )


def potential_poles(atom: AtomParams) -> list[float]:
    """Real energies where V(E) diverges (sorted, de-duplicated)."""
    if atom.rabi == 0:
        return [atom.omega_e]
    ds = dressed_spectrum(atom)
    return sorted({ds.omega_minus, ds.omega_plus})
