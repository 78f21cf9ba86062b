"""Steady-state and transient covariance of linear Langevin dynamics.

Both solvers target ``A sigma + sigma A^T = -D``. ``kron`` vectorizes the
equation into one dense linear system of size ``dim**2``; ``schur`` runs a
Bartels-Stewart sweep on the complex Schur form of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from . import _kernels
from .network import (DiffusionMatrix, DriftMatrix, ModeLayout, stability,
                      stability_margin)

PHYSICAL_TOL = 1e-8
RESIDUAL_FACTOR = 1e-10
KRON_MAX_DIM = 48


class UnstableError(RuntimeError):
    """The drift has eigenvalues with non-negative real part."""

    def __init__(self, abscissa, margin):
        self.abscissa = abscissa
        super().__init__(f"unstable drift: spectral abscissa {abscissa:.6g} >= -{margin:.3g}")


class NumericalError(RuntimeError):
    """A numerical post-condition (residual, physicality, divergence) failed."""


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetrized quadrature covariance over a labelled set of modes."""

    matrix: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != 2 * len(self.labels):
            raise ValueError(f"matrix shape {m.shape} does not match {len(self.labels)} modes")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def uncertainty_spectrum(self) -> np.ndarray:
        """Eigenvalues of the Hermitian matrix ``sigma + (i/2) Omega``."""
        h = self.matrix + 0.5j * symplectic_form(self.n_modes)
        return np.linalg.eigvalsh(h)

    def is_physical(self, tol=PHYSICAL_TOL) -> bool:
        return bool(self.uncertainty_spectrum().min() >= -tol)

    def to_csv(self, path, extra_header=()):
        from .network import write_matrix_csv
        header = [f"modes: {' '.join(self.labels)}",
                  "order: x,y per mode (row-major)"] + list(extra_header)
        write_matrix_csv(Path(path), self.matrix, header)


def lyapunov_residual(a, sigma, d) -> float:
    return float(np.linalg.norm(a @ sigma + sigma @ a.T + d))


def residual_bound(a, sigma, d) -> float:
    return RESIDUAL_FACTOR * (np.linalg.norm(a) * np.linalg.norm(sigma) + np.linalg.norm(d))


def _solve_kron(a, d):
    n = a.shape[0]
    eye = np.eye(n)
    big = np.kron(eye, a) + np.kron(a, eye)
    # column-major vec: vec(A X) = (I kron A) vec X, vec(X A^T) = (A kron I) vec X
    try:
        x = np.linalg.solve(big, -d.reshape(-1, order="F"))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular Lyapunov system: {exc}") from exc
    return x.reshape(n, n, order="F")


def _solve_schur(a, d, backend=None):
    t, q = scipy.linalg.schur(a.astype(complex), output="complex")
    c = q.conj().T @ (-d) @ q
    y = _kernels.tri_sylvester(t, c, backend=backend)
    return (q @ y @ q.conj().T).real


def lyapunov_solve(a, d, method="auto", backend=None) -> np.ndarray:
    """Solve ``A X + X A^T = -D`` on raw arrays (no stability gate)."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    if method == "auto":
        method = "kron" if a.shape[0] <= KRON_MAX_DIM else "schur"
    if method == "kron":
        x = _solve_kron(a, d)
    elif method == "schur":
        x = _solve_schur(a, d, backend)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.all(np.isfinite(x)):
        raise NumericalError("Lyapunov solution has non-finite entries")
    return 0.5 * (x + x.T)


def solve_steady(drift, diffusion, method="auto",
                 backend=None) -> CovarianceMatrix:
    """Steady-state covariance of a stable chain.

    Raises :class:`UnstableError` when the spectral abscissa is not below
    ``-1e-9 ||A||_F`` and :class:`NumericalError` when the residual exceeds
    ``1e-10 (||A|| ||sigma|| + ||D||)``.
    """
    a, d, labels = _unwrap(drift, diffusion)
    abscissa = stability(a)
    margin = stability_margin(a)
    if not abscissa < -margin:
        raise UnstableError(abscissa, margin)
    sigma = lyapunov_solve(a, d, method, backend)
    res = lyapunov_residual(a, sigma, d)
    bound = residual_bound(a, sigma, d)
    if res > bound:
        raise NumericalError(f"Lyapunov residual {res:.3e} exceeds bound {bound:.3e}")
    return CovarianceMatrix(sigma, labels)


def _unwrap(drift, diffusion):
    a = drift.matrix if isinstance(drift, DriftMatrix) else np.asarray(drift, dtype=float)
    d = diffusion.matrix if isinstance(diffusion, DiffusionMatrix) else np.asarray(diffusion, dtype=float)
    if isinstance(drift, DriftMatrix):
        labels = drift.layout.labels
    else:
        labels = tuple(f"m{k + 1}" for k in range(a.shape[0] // 2))
    return a, d, labels


@dataclass(frozen=True, eq=False)
class CovarianceTrajectory:
    times: np.ndarray
    matrices: np.ndarray
    labels: tuple[str, ...]

    @property
    def final(self) -> CovarianceMatrix:
        return CovarianceMatrix(self.matrices[-1], self.labels)


# RK4 is stable for h * |lambda| up to ~2.78 on the negative real axis.
_RK4_LIMIT = 2.5


def evolve_covariance(drift, diffusion, sigma0, t_final, dt, record_every=None):
    """Integrate ``d sigma/dt = A sigma + sigma A^T + D`` with fixed-step RK4.

    The state is symmetrized after each step. ``record_every`` thins the
    stored trajectory (default: at most ~1000 stored points).
    """
    a, d, labels = _unwrap(drift, diffusion)
    if isinstance(sigma0, CovarianceMatrix):
        labels, s = sigma0.labels, np.array(sigma0.matrix)
    else:
        s = np.array(sigma0, dtype=float)
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    # sigma-space generator eigenvalues are pairwise sums of those of A
    rate = 2.0 * float(np.max(np.abs(np.linalg.eigvals(a)))) if a.size else 0.0
    if dt * rate > _RK4_LIMIT:
        raise NumericalError(f"step dt={dt:.3g} rejected: dt*|lambda| = {dt * rate:.3g} "
                             f"exceeds RK4 stability limit {_RK4_LIMIT}")

    def f(x):
        ax = a @ x
        return ax + ax.T + d

    n_steps = int(np.ceil(t_final / dt - 1e-12))
    if record_every is None:
        record_every = max(1, n_steps // 1000)
    times, mats = [0.0], [s.copy()]
    for k in range(1, n_steps + 1):
        h = min(dt, t_final - (k - 1) * dt)
        k1 = f(s)
        k2 = f(s + 0.5 * h * k1)
        k3 = f(s + 0.5 * h * k2)
        k4 = f(s + h * k3)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s = 0.5 * (s + s.T)
        if not np.all(np.isfinite(s)):
            raise NumericalError(f"covariance diverged at step {k}")
        if k % record_every == 0 or k == n_steps:
            times.append(min(k * dt, t_final))
            mats.append(s.copy())
    return CovarianceTrajectory(np.array(times), np.array(mats), tuple(labels))


def vacuum(layout_or_labels) -> CovarianceMatrix:
    labels = layout_or_labels.labels if isinstance(layout_or_labels, ModeLayout) else tuple(layout_or_labels)
    return CovarianceMatrix(0.5 * np.eye(2 * len(labels)), labels)
