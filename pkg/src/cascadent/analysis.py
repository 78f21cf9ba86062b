"""End-to-end steady-state pipeline: config -> covariance -> entanglement."""

from __future__ import annotations

from dataclasses import dataclass

from .entanglement import EntanglementReport, entanglement_report, reduce
from .lyapunov import CovarianceMatrix, solve_steady
from .model import ChainConfig
from .network import DiffusionMatrix, DriftMatrix, build_diffusion, build_drift, stability


@dataclass(frozen=True, eq=False)
class SteadyResult:
    config: ChainConfig
    drift: DriftMatrix
    diffusion: DiffusionMatrix
    abscissa: float
    covariance: CovarianceMatrix

    @property
    def mechanical(self) -> CovarianceMatrix:
        return reduce(self.covariance, [f"c{j + 1}" for j in range(self.config.n)])

    def report(self) -> EntanglementReport:
        return entanglement_report(self.mechanical)


def steady_state(config: ChainConfig, method="auto") -> SteadyResult:
    """Build the chain matrices and solve for the steady covariance.

    Raises ``UnstableError`` for chains without a steady state.
    """
    drift = build_drift(config)
    diffusion = build_diffusion(config)
    sigma = solve_steady(drift, diffusion, method=method)
    return SteadyResult(config, drift, diffusion, stability(drift), sigma)


def mechanical_covariance(config: ChainConfig) -> CovarianceMatrix:
    return steady_state(config).mechanical
