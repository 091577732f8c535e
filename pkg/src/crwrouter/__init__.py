"""Single-photon routing between two coupled-resonator waveguides via a driven Lambda atom."""

__version__ = "0.1.0"

from .bound_states import (
    BoundState,
    BoundStateKind,
    find_single_crw_bound_states,
    find_total_system_bound_states,
    single_crw_condition,
    total_system_condition,
)
from .coupling import DressedSpectrum, coupling_g, dressed_spectrum, potential_v
from .model import (
    AtomParams,
    BandEdge,
    BandEdgeIncident,
    ClosedAbove,
    ClosedBelow,
    CrwParams,
    NonIdenticalCrws,
    Open,
    RouterError,
    SystemConfig,
    WrongSide,
    channel_kind,
    dispersion,
)
from .scattering import (
    DARK_TRANSMISSION,
    BrightDarkBasis,
    ScatteringResult,
    scatter_bright,
    scatter_dark,
    scatter_from_a,
    scatter_from_b,
)
