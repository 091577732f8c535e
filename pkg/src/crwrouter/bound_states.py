"""Photonic bound states localized at the atom.

Two families are located:

* single-waveguide states of waveguide b with the atom (waveguide a detached),
  whose energies may sit inside band a where they show up as total
  reflection of photons travelling in a;
* states of the full system, outside both bands.

Both existence conditions have simple poles at the dressed-state energies and
square-root branch points at band edges.  Roots are bracketed by sign changes
on a uniform grid inside windows cut at those points, so every sign change in
a window is a genuine root, then refined by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .coupling import potential_parts, potential_poles
from .model import CrwParams, SystemConfig, WrongSide

GRID_STEP = 1e-3
OUTER_CUTOFF = 20.0
ROOT_XTOL = 1e-13
# keeps grid endpoints off band edges and poles
_WINDOW_PAD = 1e-12


class BoundStateKind(str, Enum):
    SINGLE_CRW_B = "single_crw_b"
    TOTAL_SYSTEM = "total_system"


@dataclass(frozen=True)
class BoundState:
    energy: float
    kappa_b: float
    branch_b: int
    kind: BoundStateKind
    residual: float
    kappa_a: Optional[float] = None
    branch_a: Optional[int] = None
    parity: str = "even"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "energy": self.energy,
            "branch_a": self.branch_a,
            "branch_b": self.branch_b,
            "kappa_a": self.kappa_a,
            "kappa_b": self.kappa_b,
            "parity": self.parity,
            "residual": self.residual,
        }


def _side(crw: CrwParams, energy: float) -> Optional[int]:
    """Branch index of an energy outside the band (0 below, 1 above), else None."""
    lo, hi = crw.band
    if energy < lo:
        return 0
    if energy > hi:
        return 1
    return None


def _check_side(crw: CrwParams, energy: float, branch: int, label: str) -> None:
    if branch not in (0, 1):
        raise ValueError(f"branch must be 0 or 1, got {branch}")
    side = _side(crw, energy)
    if side is None:
        raise WrongSide(f"E={energy} is inside band {label} {crw.band}")
    if side != branch:
        raise WrongSide(f"E={energy} is on branch {side} of band {label}, not {branch}")


def _evanescent_term(crw: CrwParams, energy, branch: int):
    """``(-1)^n 2 xi sinh(kappa)`` written through the energy."""
    root = np.sqrt(np.maximum((energy - crw.omega) ** 2 - 4 * crw.xi**2, 0.0))
    return root if branch == 0 else -root


def _potential(config: SystemConfig, energy):
    n, p = potential_parts(config.atom, energy)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.divide(np.asarray(n, dtype=float), np.asarray(p, dtype=float))


def decay_constant(crw: CrwParams, energy: float) -> float:
    """``kappa > 0`` from ``|E - omega| = 2 xi cosh kappa``."""
    return math.acosh(abs(energy - crw.omega) / (2 * crw.xi))


def _single_residual(config: SystemConfig, energy, branch: int):
    if config.g_b == 0:
        return _evanescent_term(config.crw_b, energy, branch)
    return _evanescent_term(config.crw_b, energy, branch) + config.g_b**2 * _potential(config, energy)


def _total_residual(config: SystemConfig, energy, branch_a: int, branch_b: int):
    # the g_a^2 g_b^2 V^2 terms of the product and of G^2 cancel identically
    sa = _evanescent_term(config.crw_a, energy, branch_a)
    sb = _evanescent_term(config.crw_b, energy, branch_b)
    v = _potential(config, energy)
    return sa * sb + (sa * config.g_b**2 + sb * config.g_a**2) * v


def single_crw_condition(config: SystemConfig, energy: float, branch: int) -> float:
    """Existence condition of a bound state of waveguide b with the atom.

    Returns ``(-1)^n sqrt((E - omega_b)^2 - 4 xi_b^2) + g_b^2 V(E)``; zeros are
    bound-state energies.  Infinite on a dressed-state pole.
    """
    _check_side(config.crw_b, energy, branch, "b")
    return float(_single_residual(config, energy, branch))


def total_system_condition(config: SystemConfig, energy: float, branch_a: int, branch_b: int) -> float:
    """Existence condition of a bound state of the whole system.

    ``prod_d[(-1)^n_d 2 xi_d sinh kappa_d + V_d(E)] - G(E)^2`` with each
    ``kappa_d`` fixed by ``E``.  Evaluated with the ``V^2`` terms cancelled.
    """
    _check_side(config.crw_a, energy, branch_a, "a")
    _check_side(config.crw_b, energy, branch_b, "b")
    return float(_total_residual(config, energy, branch_a, branch_b))


def _split(lo: float, hi: float, cuts: Sequence[float]) -> list[tuple[float, float]]:
    """Open sub-intervals of (lo, hi) between the cut points."""
    pts = [lo] + sorted(c for c in cuts if lo < c < hi) + [hi]
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        a_in, b_in = a + _WINDOW_PAD * max(1.0, abs(a)), b - _WINDOW_PAD * max(1.0, abs(b))
        if b_in > a_in:
            out.append((a_in, b_in))
    return out


def _roots_in(f: Callable, lo: float, hi: float, step: float) -> list[float]:
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, n)
    vals = f(grid)
    roots = []
    for i in range(n - 1):
        fa, fb = vals[i], vals[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if fa == 0:
            roots.append(float(grid[i]))
        elif fa * fb < 0:
            roots.append(bisect(lambda e: float(f(e)), grid[i], grid[i + 1], xtol=ROOT_XTOL))
    if vals[-1] == 0:
        roots.append(float(grid[-1]))
    return roots


def _outer_limits(config: SystemConfig, bands: Sequence[tuple[float, float]], cutoff: float):
    poles = potential_poles(config.atom)
    lo = min([b[0] for b in bands] + poles)
    hi = max([b[1] for b in bands] + poles)
    margin = cutoff * config.crw_a.xi
    return lo - margin, hi + margin


def find_single_crw_bound_states(
    config: SystemConfig,
    search_window: Optional[tuple[float, float]] = None,
    step: float = GRID_STEP,
) -> list[BoundState]:
    """All bound states of waveguide b with the atom inside ``search_window``.

    The default window reaches ``OUTER_CUTOFF`` hopping units beyond the
    outermost band edge or dressed pole.  Returned sorted by energy.
    """
    if config.g_b == 0:
        return []
    band = config.crw_b.band
    if search_window is None:
        search_window = _outer_limits(config, [band], OUTER_CUTOFF)
    w_lo, w_hi = search_window
    poles = potential_poles(config.atom)
    states = []
    for branch, (lo, hi) in ((0, (w_lo, min(w_hi, band[0]))), (1, (max(w_lo, band[1]), w_hi))):
        if hi <= lo:
            continue
        for a, b in _split(lo, hi, poles):
            f = lambda e, n=branch: _single_residual(config, e, n)
            for root in _roots_in(f, a, b, step * config.crw_a.xi):
                states.append(
                    BoundState(
                        energy=root,
                        kappa_b=decay_constant(config.crw_b, root),
                        branch_b=branch,
                        kind=BoundStateKind.SINGLE_CRW_B,
                        residual=float(f(root)),
                    )
                )
    return sorted(states, key=lambda s: s.energy)


def _gaps(bands: Sequence[tuple[float, float]], lo: float, hi: float) -> list[tuple[float, float]]:
    """Parts of (lo, hi) not covered by any band."""
    covered = sorted(bands)
    out, cur = [], lo
    for b_lo, b_hi in covered:
        if b_lo > cur:
            out.append((cur, min(b_lo, hi)))
        cur = max(cur, b_hi)
    if cur < hi:
        out.append((cur, hi))
    return [(a, b) for a, b in out if b > a]


def find_total_system_bound_states(
    config: SystemConfig, cutoff: float = OUTER_CUTOFF, step: float = GRID_STEP
) -> list[BoundState]:
    """Bound states of the full Hamiltonian lying outside both bands."""
    bands = [config.crw_a.band, config.crw_b.band]
    lo, hi = _outer_limits(config, bands, cutoff)
    poles = potential_poles(config.atom)
    states = []
    for g_lo, g_hi in _gaps(bands, lo, hi):
        mid = 0.5 * (g_lo + g_hi)
        n_a, n_b = _side(config.crw_a, mid), _side(config.crw_b, mid)
        f = lambda e, na=n_a, nb=n_b: _total_residual(config, e, na, nb)
        for a, b in _split(g_lo, g_hi, poles):
            for root in _roots_in(f, a, b, step * config.crw_a.xi):
                states.append(
                    BoundState(
                        energy=root,
                        kappa_a=decay_constant(config.crw_a, root),
                        kappa_b=decay_constant(config.crw_b, root),
                        branch_a=n_a,
                        branch_b=n_b,
                        kind=BoundStateKind.TOTAL_SYSTEM,
                        residual=float(f(root)),
                    )
                )
    return sorted(states, key=lambda s: s.energy)


def bound_state_energies(states: Sequence[BoundState], branch_b: Optional[int] = None) -> list[float]:
    return [s.energy for s in states if branch_b is None or s.branch_b == branch_b]
