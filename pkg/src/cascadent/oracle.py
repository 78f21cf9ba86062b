"""Monte Carlo check of steady covariances via stochastic trajectories.

For linear dynamics the symmetrized quantum moments obey the classical SDE
``d chi = A chi dt + B dW`` with ``B B^T = D``, where
``<f_i f_j + f_j f_i>/2 = D_ij delta(t - t')``. Each trajectory starts at
``chi = 0``, is integrated with Euler-Maruyama, and contributes the time
average of ``chi chi^T`` after burn-in. Trajectories are the independent
replicates behind the standard errors.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .lyapunov import CovarianceMatrix, NumericalError, UnstableError
from .network import DiffusionMatrix, DriftMatrix, stability, stability_margin, write_matrix_csv

log = logging.getLogger(__name__)

MAX_DT_NORM = 0.05
DEFAULT_DT_NORM = 0.01
DEFAULT_BURN_DECAYS = 10.0
DEFAULT_SAMPLE_DECAYS = 10.0
PSD_CLIP = -1e-12
MIN_SAMPLE_SIZE = 100
Z_THRESHOLD = 4.0


@dataclass(frozen=True)
class TrajectoryConfig:
    """Integration and sampling settings.

    ``dt``, ``burn_in`` and ``sample_time`` default (``None``) to
    ``0.01/||A||_2``, 10 and 10 slowest decay times respectively.
    """

    n_trajectories: int = 2000
    seed: int = 0
    dt: float | None = None
    burn_in: float | None = None
    sample_time: float | None = None
    stride: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise ValueError("n_trajectories must be >= 1")
        if self.stride < 1 or self.workers < 1:
            raise ValueError("stride and workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        for name in ("dt", "burn_in", "sample_time"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    sample_size: int
    labels: tuple[str, ...]
    dt: float
    n_steps: int
    samples_per_trajectory: int

    @property
    def covariance(self) -> CovarianceMatrix:
        return CovarianceMatrix(self.mean, self.labels)

    def to_csv(self, path):
        hdr = [f"modes: {' '.join(self.labels)}", f"trajectories: {self.sample_size}",
               f"dt: {self.dt!r}", "block: mean"]
        write_matrix_csv(path, self.mean, hdr)
        stem = Path(path)
        write_matrix_csv(stem.with_name(stem.stem + "_stderr" + stem.suffix), self.stderr,
                         hdr[:-1] + ["block: stderr"])


def noise_factor(d) -> np.ndarray:
    """``B`` with ``B B^T = D`` from the eigendecomposition, zero modes dropped."""
    d = 0.5 * (np.asarray(d, dtype=float) + np.asarray(d, dtype=float).T)
    w, v = np.linalg.eigh(d)
    scale = max(float(np.max(np.abs(w))), 1e-300) if w.size else 1.0
    if w.size and w.min() < PSD_CLIP * scale:
        raise ValueError(f"diffusion matrix is not PSD (eigenvalue {w.min():.3e})")
    keep = w > 1e-14 * scale
    return v[:, keep] * np.sqrt(w[keep])


def resolve_settings(a, tc: TrajectoryConfig):
    """Concrete ``(dt, n_steps, burn_steps)`` for a drift ``a``."""
    norm2 = float(np.linalg.norm(a, 2))
    abscissa = stability(a)
    if not abscissa < -stability_margin(a):
        raise UnstableError(abscissa, stability_margin(a))
    dt = tc.dt if tc.dt is not None else DEFAULT_DT_NORM / norm2
    if dt * norm2 > MAX_DT_NORM + 1e-12:
        raise ValueError(f"dt*||A||_2 = {dt * norm2:.3g} exceeds {MAX_DT_NORM}")
    decay = 1.0 / -abscissa
    burn = tc.burn_in if tc.burn_in is not None else DEFAULT_BURN_DECAYS * decay
    sample = tc.sample_time if tc.sample_time is not None else DEFAULT_SAMPLE_DECAYS * decay
    burn_steps = int(np.ceil(burn / dt))
    sample_steps = max(1, int(np.ceil(sample / dt)))
    return dt, burn_steps + sample_steps, burn_steps


def _streams(seed, indices):
    return [np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(i),)))
            for i in indices]


def simulate_trajectories(drift, diffusion, tc: TrajectoryConfig, backend=None) -> CovarianceEstimate:
    """Estimate the stationary covariance with standard errors.

    Trajectory ``i`` draws from its own stream seeded by ``(seed, i)``, and
    per-trajectory moments are reduced in index order, so results do not
    depend on ``tc.workers``.
    """
    a = drift.matrix if isinstance(drift, DriftMatrix) else np.asarray(drift, dtype=float)
    d = diffusion.matrix if isinstance(diffusion, DiffusionMatrix) else np.asarray(diffusion, dtype=float)
    labels = drift.layout.labels if isinstance(drift, DriftMatrix) else \
        tuple(f"m{k + 1}" for k in range(a.shape[0] // 2))
    b = noise_factor(d)
    dt, n_steps, burn_steps = resolve_settings(a, tc)
    dim = a.shape[0]
    n = tc.n_trajectories
    per_traj = np.zeros((n, dim, dim))

    if b.shape[1] == 0:
        # no noise and chi(0) = 0: trajectories stay at the origin
        counts = np.full(n, len(range(burn_steps, n_steps, tc.stride)))
    else:
        batches = [range(s, min(s + _kernels.TRAJ_BATCH, n)) for s in range(0, n, _kernels.TRAJ_BATCH)]

        def run(idx):
            return _kernels.em_batch(a, b, _streams(tc.seed, idx), n_steps, dt,
                                     burn_steps, tc.stride, backend=backend)

        counts = np.zeros(n, dtype=np.int64)
        if tc.workers == 1:
            results = map(run, batches)
        else:
            pool = ThreadPoolExecutor(max_workers=tc.workers)
            results = pool.map(run, batches)
        for idx, (mom, cnt) in zip(batches, results):
            per_traj[idx.start:idx.stop] = mom
            counts[idx.start:idx.stop] = cnt
        if tc.workers != 1:
            pool.shutdown()
        if not np.all(np.isfinite(per_traj)):
            raise NumericalError("trajectory diverged; reduce dt")

    if np.any(counts == 0):
        raise ValueError("no samples recorded after burn-in; increase sample_time")
    per_traj /= counts[:, None, None]
    per_traj = 0.5 * (per_traj + per_traj.transpose(0, 2, 1))
    mean = per_traj.mean(axis=0)
    if n > 1:
        se = per_traj.std(axis=0, ddof=1) / np.sqrt(n)
    else:
        se = np.full_like(mean, np.inf)
    if n < MIN_SAMPLE_SIZE:
        log.warning("only %d independent trajectories; standard errors are unreliable", n)
    return CovarianceEstimate(mean, se, n, tuple(labels), dt, n_steps, int(counts[0]))


@dataclass(frozen=True, eq=False)
class Comparison:
    z: np.ndarray
    max_abs_z: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_abs_z <= self.threshold

    def as_dict(self):
        i, j = np.unravel_index(int(np.argmax(np.abs(self.z))), self.z.shape)
        return {"max_abs_z": self.max_abs_z, "threshold": self.threshold,
                "passed": self.passed, "worst_entry": [int(i), int(j)]}


def compare(est: CovarianceEstimate, sigma, threshold=Z_THRESHOLD) -> Comparison:
    """Per-entry z-scores ``(estimate - sigma) / stderr``."""
    ref = sigma.matrix if isinstance(sigma, CovarianceMatrix) else np.asarray(sigma, dtype=float)
    if ref.shape != est.mean.shape:
        raise ValueError(f"layout mismatch: {ref.shape} vs {est.mean.shape}")
    if isinstance(sigma, CovarianceMatrix) and tuple(sigma.labels) != tuple(est.labels):
        raise ValueError("mode labels differ between estimate and reference")
    if np.any(est.stderr <= 0):
        raise ValueError("zero standard error entries; cannot form z-scores")
    z = (est.mean - ref) / est.stderr
    return Comparison(z, float(np.max(np.abs(z))), threshold)
