"""Bad-cavity limit: cavities eliminated, mechanics see a squeezed reservoir.

All functions take rates in one consistent unit (angular or not, only
ratios matter) and assume identical cavities with perfect links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lyapunov import CovarianceMatrix, UnstableError, lyapunov_solve
from .network import stability


@dataclass(frozen=True)
class AdiabaticRates:
    damping: float       # net optomechanical damping (g2^2 - g1^2)/kappa
    occupation: float    # reservoir occupation N = g1^2/(g2^2 - g1^2)
    correlation: float   # reservoir pair correlation M = sqrt(N(N+1))
    squeezing: float     # r = artanh(g1/g2)

    def __post_init__(self):
        if not (self.damping > 0 and self.occupation >= 0):
            raise ValueError("adiabatic model requires g2 > g1 >= 0")


def _check_domain(g1, g2, kappa):
    if not g1 >= 0:
        raise ValueError("g1 must be >= 0")
    if not g2 > g1:
        raise ValueError(f"adiabatic model requires g2 > g1 (got g1={g1}, g2={g2})")
    if not kappa > 0:
        raise ValueError("kappa must be > 0")


def effective_rates(g1, g2, kappa) -> AdiabaticRates:
    _check_domain(g1, g2, kappa)
    diff = g2 * g2 - g1 * g1
    n = g1 * g1 / diff
    return AdiabaticRates(damping=diff / kappa, occupation=n,
                          correlation=math.sqrt(n * (n + 1.0)),
                          squeezing=math.atanh(g1 / g2))


def zeta12_analytic(g1, g2, kappa, gamma_m, n_th) -> tuple[float, float]:
    """Closed-form ``(zeta, E)`` for two mechanical modes."""
    _check_domain(g1, g2, kappa)
    if gamma_m < 0 or n_th < 0:
        raise ValueError("gamma_m and n_th must be >= 0")
    # 1/2 - [g1 (g2 - g1) - kappa gamma n] / (kappa gamma + g2^2 - g1^2), with the
    # numerator regrouped so nothing cancels as g1 -> g2
    diff = g2 - g1
    zeta = 0.5 * (kappa * gamma_m * (2.0 * n_th + 1.0) + diff * diff) / (
        kappa * gamma_m + diff * (g2 + g1))
    return zeta, max(0.0, -math.log(2.0 * zeta))


def thermal_threshold(g1, g2, kappa, gamma_m) -> float:
    """Largest thermal occupation that still allows two-mode entanglement.

    Returns ``inf`` for ``gamma_m == 0``.
    """
    _check_domain(g1, g2, kappa)
    if gamma_m < 0:
        raise ValueError("gamma_m must be >= 0")
    if gamma_m == 0:
        return math.inf
    return g1 * g2 * (1.0 - g1 / g2) / (kappa * gamma_m)


def steady_occupations(g1, g2, kappa, gamma_m, n_th) -> tuple[float, float]:
    """Stationary ``(<c^+ c>, <c1 c2>)`` of the reduced two-mode model."""
    rates = effective_rates(g1, g2, kappa)
    total = gamma_m + rates.damping
    if total == 0:
        raise ValueError("gamma_m and net damping both zero")
    n = (gamma_m * n_th + rates.damping * rates.occupation) / total
    m = rates.damping * rates.correlation / total
    return n, m


def moments_covariance(n, m, labels=("c1", "c2")) -> CovarianceMatrix:
    """Covariance of a symmetric two-mode state from ``<c^+c> = n``, ``<c1 c2> = m`` (real)."""
    cov = np.zeros((4, 4))
    cov[:2, :2] = cov[2:, 2:] = (n + 0.5) * np.eye(2)
    cov[:2, 2:] = cov[2:, :2] = m * np.diag([1.0, -1.0])
    return CovarianceMatrix(cov, labels)


def _reservoir_noise(g1, g2, kappa):
    """Quadrature maps of the two reservoir noises onto the vacuum inputs.

    Rows: (x, y) of the odd-parity noise, then of the even-parity noise.
    Columns: (x, y) of the shared a-input, then of the shared b-input.
    """
    u, v = math.sqrt(2.0 / kappa) * g1, math.sqrt(2.0 / kappa) * g2
    odd = np.array([[0.0, -u, 0.0, v],
                    [-u, 0.0, -v, 0.0]])
    even = np.array([[0.0, -v, 0.0, u],
                     [v, 0.0, u, 0.0]])
    return odd, even


def adiabatic_drift_diffusion(n, g1, g2, kappa, gamma_m, n_th):
    """Reduced ``2N x 2N`` drift and diffusion of the mechanical chain.

    Same-parity oscillators couple through ``-2 * damping`` to every
    earlier oscillator of that parity, and all odd (even) oscillators share
    one odd (even) reservoir noise.
    """
    if n < 1:
        raise ValueError("need at least one oscillator")
    rates = effective_rates(g1, g2, kappa)
    gt = rates.damping
    a = np.zeros((2 * n, 2 * n))
    eye2 = np.eye(2)
    for j in range(n):
        a[2 * j:2 * j + 2, 2 * j:2 * j + 2] = -(gamma_m + gt) * eye2
        for s in range(j % 2, j, 2):
            a[2 * j:2 * j + 2, 2 * s:2 * s + 2] = -2.0 * gt * eye2

    odd, even = _reservoir_noise(g1, g2, kappa)
    m = np.zeros((2 * n, 4))
    for j in range(n):
        m[2 * j:2 * j + 2] = odd if j % 2 == 0 else even
    d = 0.5 * m @ m.T + gamma_m * (2.0 * n_th + 1.0) * np.eye(2 * n)
    return a, 0.5 * (d + d.T)


def adiabatic_chain_covariance(n, g1, g2, kappa, gamma_m, n_th) -> CovarianceMatrix:
    """Steady mechanical covariance of the reduced N-oscillator model."""
    a, d = adiabatic_drift_diffusion(n, g1, g2, kappa, gamma_m, n_th)
    abscissa = stability(a)
    if not abscissa < -1e-9 * np.linalg.norm(a):
        raise UnstableError(abscissa, 1e-9 * np.linalg.norm(a))
    return CovarianceMatrix(lyapunov_solve(a, d), [f"c{j + 1}" for j in range(n)])
