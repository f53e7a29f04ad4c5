"""Birkhoff coordinates for the Benjamin-Ono equation on the torus.

Spectral data of the truncated Lax operator, the coordinate map and its
numerical inverse, evolution by quadrature, and an independent
pseudo-spectral integrator used for cross-validation.
"""

__version__ = "0.1.0"

from .birkhoff import BirkhoffState, birkhoff_coords, birkhoff_vector, phi  # noqa: E402
from .direct import IntegratorConfig, evolve  # noqa: E402
from .flow import Trajectory, evolve_birkhoff, frequencies, solve_bo  # noqa: E402
from .fourier import HardyFunction, RealPotential, SequenceState  # noqa: E402
from .inverse import NewtonConfig, finite_gap, newton_invert, phi_smooth  # noqa: E402
from .lax import LaxSpectrum, compute_spectrum  # noqa: E402

__all__ = [
    "BirkhoffState", "HardyFunction", "IntegratorConfig", "LaxSpectrum", "NewtonConfig",
    "RealPotential", "SequenceState", "Trajectory", "birkhoff_coords", "birkhoff_vector",
    "compute_spectrum", "evolve", "evolve_birkhoff", "finite_gap", "frequencies",
    "newton_invert", "phi", "phi_smooth", "solve_bo",
]
