"""Steady-state entanglement in cascaded optomechanical chains."""

__version__ = "0.1.0"

from .model import ChainConfig, CavityParams, ConfigError, PumpParams, hz, to_hz, validate_chain
from .network import ModeLayout, build_diffusion, build_drift, stability
from .lyapunov import CovarianceMatrix, NumericalError, UnstableError, lyapunov_solve, solve_steady
from .entanglement import entanglement_report, log_negativity, reduce
from .analysis import steady_state

__all__ = [
    "ChainConfig", "CavityParams", "ConfigError", "PumpParams", "hz", "to_hz", "validate_chain",
    "ModeLayout", "build_diffusion", "build_drift", "stability",
    "CovarianceMatrix", "NumericalError", "UnstableError", "lyapunov_solve", "solve_steady",
    "entanglement_report", "log_negativity", "reduce", "steady_state",
]
