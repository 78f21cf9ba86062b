"""Hot numeric loops, compiled with numba when available.

Two implementations of every kernel live here: a loop form compiled with
``numba.njit`` and a vectorized numpy form. ``CASCADENT_DISABLE_NUMBA=1``
(or a missing numba install) selects numpy. Both backends consume random
numbers in the same order, so Monte Carlo results agree up to rounding.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("CASCADENT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
NUMBA_AVAILABLE = numba is not None
BACKEND = "numba" if NUMBA_AVAILABLE and not _DISABLED else "numpy"

# Trajectories handled per numpy batch; fixed so results never depend on
# how batches are spread over workers.
TRAJ_BATCH = 256
NOISE_CHUNK = 2048


# ---------------------------------------------------------------------------
# Triangular Sylvester sweep: T Y + Y T^H = C, T upper triangular (complex)
# ---------------------------------------------------------------------------

def _tri_sylvester_loops(t, c):
    n = t.shape[0]
    y = np.zeros((n, n), dtype=np.complex128)
    rhs = np.empty(n, dtype=np.complex128)
    # Column j of Y T^H only involves columns k >= j of Y.
    for j in range(n - 1, -1, -1):
        for i in range(n):
            s = c[i, j]
            for k in range(j + 1, n):
                s -= y[i, k] * np.conj(t[j, k])
            rhs[i] = s
        shift = np.conj(t[j, j])
        for i in range(n - 1, -1, -1):
            s = rhs[i]
            for k in range(i + 1, n):
                s -= t[i, k] * y[k, j]
            y[i, j] = s / (t[i, i] + shift)
    return y


def _tri_sylvester_numpy(t, c):
    n = t.shape[0]
    y = np.zeros((n, n), dtype=np.complex128)
    tc = t.conj()
    for j in range(n - 1, -1, -1):
        rhs = c[:, j] - y[:, j + 1:] @ tc[j, j + 1:]
        m = t + tc[j, j] * np.eye(n)
        # back substitution on the shifted upper-triangular system
        col = np.empty(n, dtype=np.complex128)
        for i in range(n - 1, -1, -1):
            col[i] = (rhs[i] - m[i, i + 1:] @ col[i + 1:]) / m[i, i]
        y[:, j] = col
    return y


# ---------------------------------------------------------------------------
# Euler-Maruyama trajectory with running second moments
# ---------------------------------------------------------------------------

def _em_trajectory_loops(a, b, rng, x, n_steps, h, burn_steps, stride):
    d = a.shape[0]
    r = b.shape[1]
    sqh = np.sqrt(h)
    acc = np.zeros((d, d))
    xi = np.empty(r)
    dx = np.empty(d)
    count = 0
    for step in range(n_steps):
        for k in range(r):
            xi[k] = rng.standard_normal()
        for i in range(d):
            s = 0.0
            for j in range(d):
                s += a[i, j] * x[j]
            w = 0.0
            for k in range(r):
                w += b[i, k] * xi[k]
            dx[i] = h * s + sqh * w
        for i in range(d):
            x[i] += dx[i]
        if step >= burn_steps and (step - burn_steps) % stride == 0:
            for i in range(d):
                for j in range(d):
                    acc[i, j] += x[i] * x[j]
            count += 1
    return acc, count


if BACKEND == "numba":
    _tri_sylvester_jit = numba.njit(cache=True, nogil=True)(_tri_sylvester_loops)
    _em_trajectory_jit = numba.njit(cache=True, nogil=True)(_em_trajectory_loops)
else:
    _tri_sylvester_jit = None
    _em_trajectory_jit = None


def _resolve(backend):
    backend = backend or BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and _em_trajectory_jit is None:
        if not NUMBA_AVAILABLE:
            raise RuntimeError("numba backend requested but numba is not installed")
        raise RuntimeError("numba backend disabled by CASCADENT_DISABLE_NUMBA")
    return backend


def tri_sylvester(t, c, backend=None):
    """Solve ``T Y + Y T^H = C`` for upper-triangular complex ``T``."""
    t = np.ascontiguousarray(t, dtype=np.complex128)
    c = np.ascontiguousarray(c, dtype=np.complex128)
    if _resolve(backend) == "numba":
        return _tri_sylvester_jit(t, c)
    return _tri_sylvester_numpy(t, c)


def em_batch(a, b, rngs, n_steps, h, burn_steps, stride, backend=None):
    """Integrate one trajectory per generator from ``chi = 0``.

    Returns ``(moments, counts)``: per-trajectory sums of ``chi chi^T``
    over the recorded steps (shape ``(n, d, d)``) and how many steps were
    recorded. Step ``k`` is recorded when ``k >= burn_steps`` and
    ``(k - burn_steps) % stride == 0``.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    d, r = b.shape
    n = len(rngs)
    if _resolve(backend) == "numba":
        moments = np.empty((n, d, d))
        counts = np.empty(n, dtype=np.int64)
        for i, rng in enumerate(rngs):
            acc, cnt = _em_trajectory_jit(a, b, rng, np.zeros(d), n_steps, h,
                                          burn_steps, stride)
            moments[i] = acc
            counts[i] = cnt
        return moments, counts
    return _em_batch_numpy(a, b, rngs, n_steps, h, burn_steps, stride)


def _em_batch_numpy(a, b, rngs, n_steps, h, burn_steps, stride):
    d, r = b.shape
    n = len(rngs)
    sqh = np.sqrt(h)
    at, bt = a.T.copy(), b.T.copy()
    x = np.zeros((n, d))
    moments = np.zeros((n, d, d))
    count = 0
    for start in range(0, n_steps, NOISE_CHUNK):
        m = min(NOISE_CHUNK, n_steps - start)
        noise = np.stack([rng.standard_normal((m, r)) for rng in rngs], axis=1)
        for k in range(m):
            step = start + k
            x = x + (h * (x @ at) + sqh * (noise[k] @ bt))
            if step >= burn_steps and (step - burn_steps) % stride == 0:
                moments += x[:, :, None] * x[:, None, :]
                count += 1
    return moments, np.full(n, count, dtype=np.int64)
