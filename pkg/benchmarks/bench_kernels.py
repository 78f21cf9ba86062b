"""Time the numba and numpy forms of the hot kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np
import scipy.linalg

from cascadent import _kernels
from cascadent.analysis import steady_state
from cascadent.model import ChainConfig, hz
from cascadent.oracle import noise_factor


def best_of(fn, repeat):
    fn()  # warm-up (includes JIT compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])

    rng = np.random.default_rng(0)
    cases = []
    for n in (8, 24, 48):
        a = rng.normal(size=(n, n)) - 3 * np.eye(n)
        t, _ = scipy.linalg.schur(a.astype(complex), output="complex")
        c = rng.normal(size=(n, n)) + 0j
        cases.append((f"tri_sylvester n={n}",
                      lambda be, t=t, c=c: _kernels.tri_sylvester(t, c, backend=be)))

    g1 = hz(1e4)
    res = steady_state(ChainConfig.matched(3, g1, 1.5 * g1, hz(5e4), gamma_m=hz(2e3),
                                           n_th=0.5, eta=0.95))
    a, b = res.drift.matrix, noise_factor(res.diffusion.matrix)
    h = 0.01 / np.linalg.norm(a, 2)
    cases.append(("em_batch N=3, 64 traj x 20000 steps",
                  lambda be: _kernels.em_batch(a, b, [np.random.default_rng(k) for k in range(64)],
                                               20000, h, 2000, 5, backend=be)))

    print(f"{'kernel':<40}" + "".join(f"{be:>12}" for be in backends) + "     speedup")
    for name, fn in cases:
        secs = [best_of(lambda: fn(be), args.repeat) for be in backends]
        speed = f"{secs[0] / secs[-1]:10.1f}x" if len(secs) > 1 else ""
        print(f"{name:<40}" + "".join(f"{s * 1e3:10.2f}ms" for s in secs) + speed)


if __name__ == "__main__":
    main()
