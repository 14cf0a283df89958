"""2-D periodic pseudo-spectral solver and verification harness for
incompressible flow with odd viscosity."""

__version__ = "0.1.0"

from .grid import Grid
from .state import State, effective_velocity, make_state
from .dynamics import SolverConfig, run

__all__ = ["Grid", "State", "SolverConfig", "effective_velocity", "make_state", "run"]
