"""Gaussian entanglement measures on quadrature covariance matrices.

Vacuum has variance 1/2, so the separability boundary of the two-mode
quantity ``zeta`` (smallest symplectic eigenvalue of the partially
transposed state) is ``2 zeta = 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .lyapunov import CovarianceMatrix, NumericalError, symplectic_form

RADICAND_TOL = 1e-10
# Pure states put exact zeros in the PT spectrum; rounding must not turn
# them into witnesses. Relative to the spectral norm of sigma.
WITNESS_TOL = 1e-10


def _labels_to_indices(sigma: CovarianceMatrix, modes):
    out = []
    for m in modes:
        if isinstance(m, (int, np.integer)):
            if not 0 <= m < sigma.n_modes:
                raise KeyError(f"mode index {m} out of range")
            out.append(int(m))
        else:
            try:
                out.append(sigma.labels.index(m))
            except ValueError:
                raise KeyError(f"unknown mode {m!r}") from None
    return out


def reduce(sigma: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Principal submatrix over ``modes`` (labels or indices), in layout order."""
    idx = sorted(set(_labels_to_indices(sigma, modes)))
    q = np.ravel([[2 * k, 2 * k + 1] for k in idx]).astype(int)
    return CovarianceMatrix(sigma.matrix[np.ix_(q, q)], [sigma.labels[k] for k in idx])


def _as_matrix(sigma):
    return sigma.matrix if isinstance(sigma, CovarianceMatrix) else np.asarray(sigma, dtype=float)


def log_negativity(sigma2) -> tuple[float, float]:
    """Logarithmic negativity ``(E, zeta)`` of a two-mode covariance.

    ``zeta = sqrt((S - sqrt(S^2 - 4 det sigma)) / 2)`` with
    ``S = det A + det B - 2 det C`` for blocks ``[[A, C], [C^T, B]]``.
    """
    m = _as_matrix(sigma2)
    if m.shape != (4, 4):
        raise ValueError("log_negativity needs a two-mode (4x4) covariance")
    a, b, c = m[:2, :2], m[2:, 2:], m[:2, 2:]
    s = np.linalg.det(a) + np.linalg.det(b) - 2.0 * np.linalg.det(c)
    det = np.linalg.det(m)
    scale = max(s * s, 1e-300)
    inner = s * s - 4.0 * det
    if inner < -RADICAND_TOL * scale:
        raise NumericalError(f"non-physical two-mode covariance (inner radicand {inner:.3e})")
    outer = s - math.sqrt(max(inner, 0.0))
    if outer < -RADICAND_TOL * max(abs(s), 1e-300):
        raise NumericalError(f"non-physical two-mode covariance (outer radicand {outer:.3e})")
    zeta = math.sqrt(max(outer, 0.0) / 2.0)
    if zeta == 0.0:
        raise NumericalError("zero partially-transposed symplectic eigenvalue")
    return max(0.0, -math.log(2.0 * zeta)), zeta


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Sorted symplectic eigenvalues (moduli of the spectrum of ``i Omega sigma``)."""
    m = _as_matrix(sigma)
    n = m.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ m))
    # eigenvalues come in +-nu pairs
    return np.sort(ev)[::2]


def partial_transpose(sigma: CovarianceMatrix, subset) -> CovarianceMatrix:
    """Flip the sign of the momentum quadrature of every mode in ``subset``."""
    idx = _labels_to_indices(sigma, subset)
    p = np.ones(2 * sigma.n_modes)
    for k in set(idx):
        p[2 * k + 1] = -1.0
    return CovarianceMatrix(sigma.matrix * np.outer(p, p), sigma.labels)


def ppt_negativity_eigenvalues(sigma: CovarianceMatrix, mode) -> np.ndarray:
    """Negative eigenvalues of ``PT_l(sigma) + (i/2) Omega`` (ascending).

    Eigenvalues above ``-WITNESS_TOL * ||sigma||_2`` count as zero.
    """
    if sigma.n_modes < 2:
        raise ValueError("need at least two modes")
    spec = partial_transpose(sigma, [mode]).uncertainty_spectrum()
    cut = WITNESS_TOL * max(float(np.linalg.norm(sigma.matrix, 2)), 1.0)
    return spec[spec < -cut]


@dataclass(frozen=True)
class MultipartiteClassification:
    genuine: bool
    witnesses: dict = field(default_factory=dict)


def classify_genuine_multipartite(sigma: CovarianceMatrix) -> MultipartiteClassification:
    """Full inseparability: every single-mode bipartition has a PPT violation."""
    wit = {lab: ppt_negativity_eigenvalues(sigma, lab) for lab in sigma.labels}
    return MultipartiteClassification(all(len(v) > 0 for v in wit.values()), wit)


@dataclass(frozen=True)
class EntanglementReport:
    labels: tuple[str, ...]
    log_negativity: dict
    zeta: dict
    symplectic_eigenvalues: list
    ppt_eigenvalues: dict
    genuine_multipartite: bool

    def pair(self, a: str, b: str) -> float:
        if self.labels.index(a) > self.labels.index(b):
            a, b = b, a
        return self.log_negativity[f"{a}-{b}"]

    def as_dict(self) -> dict:
        return {
            "modes": list(self.labels),
            "log_negativity": dict(self.log_negativity),
            "zeta": dict(self.zeta),
            "symplectic_eigenvalues": [float(v) for v in self.symplectic_eigenvalues],
            "ppt_negativity_eigenvalues": {k: [float(x) for x in v]
                                           for k, v in self.ppt_eigenvalues.items()},
            "genuine_multipartite": bool(self.genuine_multipartite),
        }


def entanglement_report(sigma: CovarianceMatrix) -> EntanglementReport:
    """Pairwise log-negativities and multipartite witnesses over all modes of ``sigma``."""
    e, z = {}, {}
    for i, j in itertools.combinations(range(sigma.n_modes), 2):
        key = f"{sigma.labels[i]}-{sigma.labels[j]}"
        e[key], z[key] = log_negativity(reduce(sigma, [i, j]))
    if sigma.n_modes >= 2:
        cls = classify_genuine_multipartite(sigma)
        genuine, wit = cls.genuine, cls.witnesses
    else:
        genuine, wit = False, {}
    return EntanglementReport(sigma.labels, e, z, list(symplectic_eigenvalues(sigma)),
                              wit, genuine)


def tmsv_covariance(r: float, labels=("c1", "c2")) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with ``<c1 c2> = +sinh(r) cosh(r)``."""
    ch, sh = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    m = np.zeros((4, 4))
    m[:2, :2] = m[2:, 2:] = ch * np.eye(2)
    m[:2, 2:] = m[2:, :2] = sh * np.diag([1.0, -1.0])
    return CovarianceMatrix(m, labels)


def local_rotation(sigma: CovarianceMatrix, angles) -> CovarianceMatrix:
    """Apply independent phase-space rotations, one angle per mode."""
    blocks = [np.array([[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]]) for t in angles]
    r = np.zeros((2 * len(blocks), 2 * len(blocks)))
    for k, blk in enumerate(blocks):
        r[2 * k:2 * k + 2, 2 * k:2 * k + 2] = blk
    return CovarianceMatrix(r @ sigma.matrix @ r.T, sigma.labels)
