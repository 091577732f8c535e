"""Brute-force finite-lattice oracle.

Builds the single-excitation Hamiltonian of two truncated chains plus the two
atomic levels and works with it directly: Gaussian wavepackets are evolved in
time to measure transmission and transfer, and the matrix is diagonalized to
find localized eigenstates.  Nothing here uses the closed-form amplitudes or
existence conditions, so it can serve as an independent check on them.

Basis ordering: chain a sites ``j = -M..M``, chain b sites ``j = -M..M``,
then ``|e>`` and ``|s>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .model import RouterError, SystemConfig

MIN_SITES_HALF = 50
LEAK_TOLERANCE = 1e-4
# sites at each open end counted by the leak monitor
LEAK_ZONE = 20
_WEIGHT_FLOOR = 1e-12


class BoundaryLeak(RouterError):
    """Probability reached the open ends of the truncated chains; enlarge M."""


@dataclass
class LatticeState:
    alpha: np.ndarray
    beta: np.ndarray
    u_e: complex
    u_s: complex

    @property
    def half_size(self) -> int:
        return (len(self.alpha) - 1) // 2

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "LatticeState":
        n = (len(psi) - 2) // 2
        return cls(psi[:n].copy(), psi[n : 2 * n].copy(), complex(psi[-2]), complex(psi[-1]))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.beta, [self.u_e, self.u_s]]).astype(complex)

    def norm(self) -> float:
        return float(
            np.sum(np.abs(self.alpha) ** 2) + np.sum(np.abs(self.beta) ** 2) + abs(self.u_e) ** 2 + abs(self.u_s) ** 2
        )


@dataclass(frozen=True)
class WavepacketSpec:
    """Gaussian packet; ``width_sites`` is the standard deviation of |psi|^2."""

    center_j: int
    width_sites: float
    carrier_k: float
    chain: str = "a"

    def __post_init__(self):
        if self.center_j >= 0:
            raise ValueError("packet must start left of the atom (center_j < 0)")
        if self.width_sites <= 0:
            raise ValueError("width_sites must be positive")
        if not 0 < self.carrier_k < math.pi:
            raise ValueError("carrier_k must lie in (0, pi)")
        if self.chain not in ("a", "b"):
            raise ValueError("chain must be 'a' or 'b'")


@dataclass(frozen=True)
class OracleResult:
    T_a: float
    R_a: float
    transfer: float
    norm_drift: float
    energy_drift: float
    boundary_probability: float
    t_final: float


@dataclass(frozen=True)
class LocalizedEigenstate:
    energy: float
    localization_length: float
    decay_a: float
    decay_b: float
    ipr: float
    vector: np.ndarray


def _chain(omega: float, xi: float, n: int) -> sp.csr_matrix:
    off = -xi * np.ones(n - 1)
    return sp.diags([off, omega * np.ones(n), off], [-1, 0, 1], format="csr")


def build_hamiltonian(config: SystemConfig, M: int, shift: float = 0.0) -> sp.csr_matrix:
    """Single-excitation Hamiltonian on ``2(2M+1) + 2`` states, open ends.

    ``shift`` is subtracted from the diagonal; it only changes a global phase
    in time evolution and keeps the operator norm small.
    """
    if M < MIN_SITES_HALF:
        raise ValueError(f"M must be >= {MIN_SITES_HALF}, got {M}")
    n = 2 * M + 1
    dim = 2 * n + 2
    ie, is_ = 2 * n, 2 * n + 1
    a0, b0 = M, n + M
    atom = sp.lil_matrix((dim, dim))
    atom[ie, ie] = config.atom.omega_e
    atom[is_, is_] = config.atom.omega_s
    for i, g in ((a0, config.g_a), (b0, config.g_b), (is_, config.atom.rabi)):
        atom[ie, i] = g
        atom[i, ie] = g
    h = sp.block_diag(
        [_chain(config.crw_a.omega, config.crw_a.xi, n), _chain(config.crw_b.omega, config.crw_b.xi, n), sp.csr_matrix((2, 2))]
    ) + atom.tocsr()
    if shift:
        h = h - shift * sp.identity(dim)
    return sp.csr_matrix(h)


def gaussian_packet(spec: WavepacketSpec, M: int) -> LatticeState:
    j = np.arange(-M, M + 1)
    env = np.exp(-((j - spec.center_j) ** 2) / (4 * spec.width_sites**2))
    amp = env * np.exp(1j * spec.carrier_k * j)
    amp /= np.linalg.norm(amp)
    zero = np.zeros_like(amp)
    if spec.chain == "a":
        return LatticeState(amp, zero, 0j, 0j)
    return LatticeState(zero, amp, 0j, 0j)


def _boundary_probability(state: LatticeState) -> float:
    z = LEAK_ZONE
    return float(
        sum(np.sum(np.abs(x[:z]) ** 2) + np.sum(np.abs(x[-z:]) ** 2) for x in (state.alpha, state.beta))
    )


def plan_run(config: SystemConfig, width_sites: float, carrier_k: float, clearance_sigmas: float = 8.0):
    """Start site and final time so the packet starts and ends well clear of the atom.

    The packet starts ``clearance`` sites left of the atom and is evolved for
    the time its centre needs to travel twice that distance, plus a margin.
    """
    clearance = int(math.ceil(clearance_sigmas * width_sites)) + 30
    v = 2 * config.crw_a.xi * math.sin(carrier_k)
    return -clearance, (2 * clearance + 20) / v


def evolve_wavepacket(
    config: SystemConfig,
    M: int,
    packet: WavepacketSpec,
    t_final: float,
) -> OracleResult:
    """Evolve ``packet`` under the lattice Hamiltonian and read off the outcome.

    Returns the probability found right of the atom in chain a (``T_a``),
    left of it in chain a (``R_a``) and anywhere in chain b (``transfer``).
    Uses an exact exponential of the sparse Hamiltonian.

    Raises
    ------
    BoundaryLeak
        If the initial packet does not fit inside the chain or probability
        reaches the open ends by ``t_final``.
    """
    psi0 = gaussian_packet(packet, M)
    leak0 = _boundary_probability(psi0) + float(
        np.sum(np.abs((psi0.alpha if packet.chain == "a" else psi0.beta)[M:]) ** 2)
    )
    if leak0 > 1e-8:
        raise BoundaryLeak(f"initial packet does not fit in [-{M}, -1] (tail mass {leak0:.2e})")

    shift = 0.5 * (config.crw_a.omega + config.crw_b.omega)
    h = build_hamiltonian(config, M, shift=shift)
    v0 = psi0.to_vector()
    v1 = expm_multiply(-1j * t_final * h, v0)
    final = LatticeState.from_vector(v1)

    leak = _boundary_probability(final)
    if leak > LEAK_TOLERANCE:
        raise BoundaryLeak(f"boundary probability {leak:.2e} exceeds {LEAK_TOLERANCE:.0e}; increase M")

    e0 = np.vdot(v0, h @ v0).real
    e1 = np.vdot(v1, h @ v1).real
    return OracleResult(
        T_a=float(np.sum(np.abs(final.alpha[M + 1 :]) ** 2)),
        R_a=float(np.sum(np.abs(final.alpha[:M]) ** 2)),
        transfer=float(np.sum(np.abs(final.beta) ** 2)),
        norm_drift=abs(final.norm() - 1.0),
        energy_drift=abs(e1 - e0),
        boundary_probability=leak,
        t_final=t_final,
    )


def oracle_coefficients(
    config: SystemConfig, energy: float, width_sites: float = 30.0, M: int = 1500
) -> OracleResult:
    """Wavepacket run with carrier at ``energy`` in band a, start and duration planned."""
    c = (config.crw_a.omega - energy) / (2 * config.crw_a.xi)
    if not -1 < c < 1:
        raise ValueError(f"E={energy} is not inside band a")
    k = math.acos(c)
    start, t_final = plan_run(config, width_sites, k)
    return evolve_wavepacket(config, M, WavepacketSpec(start, width_sites, k), t_final)


def _decay_rate(amps: np.ndarray, M: int, j_min: int = 5, floor: float = 1e-11) -> float:
    """Exponential decay rate of ``|amp(j)|`` away from j = 0, fitted on both sides.

    Uses sites ``j_min <= |j| <= M/2`` whose amplitude stays above ``floor``
    times the peak, so rounding noise in fast-decaying tails is excluded.
    """
    mag = np.abs(amps)
    peak = mag.max()
    if peak == 0:
        return math.nan
    j = np.arange(-M, M + 1)
    dist = np.abs(j)
    mask = (dist >= j_min) & (dist <= M // 2) & (mag > floor * peak)
    if mask.sum() < 4:
        return math.nan
    slope = np.polyfit(dist[mask], np.log(mag[mask]), 1)[0]
    return float(-slope)


def diagonalize_bound_sector(
    config: SystemConfig, M: int = 200, ipr_threshold: float = 0.0
) -> list[LocalizedEigenstate]:
    """Eigenstates of the finite lattice lying outside both bands.

    Full dense diagonalization; each returned state carries its inverse
    participation ratio and the decay rates fitted separately on chain a
    and chain b.  ``localization_length`` is the inverse of the slower rate.
    """
    if M < 200:
        raise ValueError(f"M must be >= 200 for bound-state diagonalization, got {M}")
    h = build_hamiltonian(config, M).toarray()
    w, v = np.linalg.eigh(h)
    n = 2 * M + 1
    out = []
    for energy, vec in zip(w, v.T):
        alpha, beta = vec[:n], vec[n : 2 * n]
        # a chain detached from the atom contributes its own band states; only
        # chains that carry weight decide whether the state is out of band
        inside = False
        for crw, amps in ((config.crw_a, alpha), (config.crw_b, beta)):
            lo, hi = crw.band
            if np.sum(np.abs(amps) ** 2) > _WEIGHT_FLOOR and lo <= energy <= hi:
                inside = True
        if inside:
            continue
        ipr = float(np.sum(np.abs(vec) ** 4))
        if ipr < ipr_threshold:
            continue
        da = _decay_rate(alpha, M)
        db = _decay_rate(beta, M)
        rates = [r for r in (da, db) if np.isfinite(r) and r > 0]
        loc = 1.0 / min(rates) if rates else math.inf
        out.append(LocalizedEigenstate(float(energy), loc, da, db, ipr, vec))
    return out
