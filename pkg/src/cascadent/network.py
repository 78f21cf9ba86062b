"""Quadrature-space drift and diffusion matrices of a cascaded chain.

Mode order is ``a1, b1, a2, b2, ..., aN, bN, c1, ..., cN`` with each mode
occupying a consecutive ``(x, y)`` pair, ``x = (o + o^+)/sqrt2`` and
``y = -i (o - o^+)/sqrt2``. Mechanical modes are the trailing ``2N`` rows.

The rotating frames absorb the pump-frequency phase factors of the
cascaded inputs, so no explicit time dependence appears.

Complex linear terms map onto 2x2 real blocks: a term ``alpha * o`` in the
equation for ``do/dt`` contributes ``[[Re a, -Im a], [Im a, Re a]]`` and a
term ``beta * o^+`` contributes ``[[Re b, Im b], [Im b, -Re b]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import ChainConfig, is_odd

# -i g o  and  -i g o^+  as 2x2 quadrature blocks (per unit g).
_BS_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])
_PA_BLOCK = np.array([[0.0, -1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class ModeLayout:
    n_cavities: int

    @property
    def labels(self) -> tuple[str, ...]:
        n = self.n_cavities
        opt = [f"{z}{j}" for j in range(1, n + 1) for z in ("a", "b")]
        return tuple(opt + [f"c{j}" for j in range(1, n + 1)])

    @property
    def n_modes(self) -> int:
        return 3 * self.n_cavities

    @property
    def dim(self) -> int:
        return 6 * self.n_cavities

    def mode_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown mode {label!r}") from None

    def optical(self, j: int, z: str) -> int:
        """Mode index of optical mode ``z`` in 0-based cavity ``j``."""
        return 2 * j + (0 if z == "a" else 1)

    def mechanical(self, j: int) -> int:
        return 2 * self.n_cavities + j

    def quadratures(self, mode: int) -> slice:
        return slice(2 * mode, 2 * mode + 2)

    def cavity_of(self, mode: int) -> int:
        if mode < 2 * self.n_cavities:
            return mode // 2
        return mode - 2 * self.n_cavities

    def mechanical_modes(self) -> list[int]:
        return [self.mechanical(j) for j in range(self.n_cavities)]

    def per_cavity_order(self) -> np.ndarray:
        """Quadrature indices regrouped cavity by cavity as ``(a_j, b_j, c_j)``.

        For two cavities the optical-first ordering used here already equals
        the conventional ``(a1, b1, a2, b2, c1, c2)`` vector, so no
        permutation is needed there; this map serves per-cavity views.
        """
        perm = []
        for j in range(self.n_cavities):
            for m in (self.optical(j, "a"), self.optical(j, "b"), self.mechanical(j)):
                perm += [2 * m, 2 * m + 1]
        return np.array(perm)

    def manifest(self) -> dict:
        return {"n_cavities": self.n_cavities,
                "modes": [{"label": lab, "x": 2 * k, "y": 2 * k + 1}
                          for k, lab in enumerate(self.labels)]}


@dataclass(frozen=True, eq=False)
class DriftMatrix:
    matrix: np.ndarray
    layout: ModeLayout


@dataclass(frozen=True, eq=False)
class DiffusionMatrix:
    matrix: np.ndarray
    layout: ModeLayout


def _frozen(a):
    a.setflags(write=False)
    return a


def _link_products(config: ChainConfig, z: str) -> np.ndarray:
    """``T[j, s] = prod_{k=s+1..j} sqrt(eta_k)`` for s <= j (1 on the diagonal)."""
    n = config.n
    roots = np.sqrt([getattr(c, f"eta_{z}") for c in config.cavities])
    t = np.zeros((n, n))
    for j in range(n):
        t[j, j] = 1.0
        for s in range(j - 1, -1, -1):
            t[j, s] = t[j, s + 1] * roots[s + 1]
    return t


def build_drift(config: ChainConfig) -> DriftMatrix:
    """Real drift matrix ``A`` of ``d chi/dt = A chi + f``."""
    lay = ModeLayout(config.n)
    a = np.zeros((lay.dim, lay.dim))
    eye2 = np.eye(2)

    def put(row_mode, col_mode, block):
        a[lay.quadratures(row_mode), lay.quadratures(col_mode)] += block

    for z in ("a", "b"):
        t = _link_products(config, z)
        for j, cav in enumerate(config.cavities):
            kj = getattr(cav, f"kappa_{z}")
            zj = lay.optical(j, z)
            put(zj, zj, -kj * eye2)
            for s in range(j):
                ks = getattr(config.cavities[s], f"kappa_{z}")
                put(zj, lay.optical(s, z), -2.0 * np.sqrt(kj * ks) * t[j, s] * eye2)

    for j, cav in enumerate(config.cavities):
        cj = lay.mechanical(j)
        aj, bj = lay.optical(j, "a"), lay.optical(j, "b")
        put(cj, cj, -cav.gamma_m * eye2)
        # odd: a couples parametrically, b as a beam splitter; even: reversed
        a_block = _PA_BLOCK if is_odd(j) else _BS_BLOCK
        b_block = _BS_BLOCK if is_odd(j) else _PA_BLOCK
        put(aj, cj, cav.g_a * a_block)
        put(cj, aj, cav.g_a * a_block)
        put(bj, cj, cav.g_b * b_block)
        put(cj, bj, cav.g_b * b_block)
    return DriftMatrix(_frozen(a), lay)


def noise_coupling(config: ChainConfig) -> np.ndarray:
    """Matrix ``M`` mapping independent unit inputs to the quadrature noise.

    Columns index the independent input fields in the order: for each
    optical family z in (a, b) and cavity s, the input ``z_s`` (the shared
    input for s = 0, the local loss input otherwise), then the mechanical
    baths. Each input contributes an ``(x, y)`` column pair. Optical inputs
    are vacuum (symmetrized variance 1/2), mechanical baths thermal.
    """
    n = config.n
    lay = ModeLayout(n)
    n_inputs = 3 * n
    m = np.zeros((lay.dim, 2 * n_inputs))
    eye2 = np.eye(2)
    col = 0
    for z in ("a", "b"):
        t = _link_products(config, z)
        for s in range(n):
            loss = 1.0 if s == 0 else np.sqrt(1.0 - getattr(config.cavities[s], f"eta_{z}"))
            for j in range(s, n):
                kj = getattr(config.cavities[j], f"kappa_{z}")
                w = np.sqrt(2.0 * kj) * t[j, s] * loss
                m[lay.quadratures(lay.optical(j, z)), 2 * col:2 * col + 2] = w * eye2
            col += 1
    for j, cav in enumerate(config.cavities):
        m[lay.quadratures(lay.mechanical(j)), 2 * col:2 * col + 2] = np.sqrt(2.0 * cav.gamma_m) * eye2
        col += 1
    return m


def input_variances(config: ChainConfig) -> np.ndarray:
    """Symmetrized variance of each input quadrature, aligned with ``noise_coupling``."""
    n = config.n
    var = [0.5] * (4 * n)
    for cav in config.cavities:
        var += [cav.n_th + 0.5] * 2
    return np.array(var)


def build_diffusion(config: ChainConfig) -> DiffusionMatrix:
    """Symmetric diffusion matrix ``D`` with ``<f_i f_j + f_j f_i>/2 = D_ij delta``."""
    m = noise_coupling(config)
    d = (m * input_variances(config)) @ m.T
    d = 0.5 * (d + d.T)
    return DiffusionMatrix(_frozen(d), ModeLayout(config.n))


def stability(drift) -> float:
    """Spectral abscissa ``max Re(lambda(A))``."""
    a = drift.matrix if isinstance(drift, DriftMatrix) else np.asarray(drift)
    if not np.all(np.isfinite(a)):
        raise ValueError("drift matrix has non-finite entries")
    return float(np.max(np.linalg.eigvals(a).real))


def stability_margin(drift) -> float:
    a = drift.matrix if isinstance(drift, DriftMatrix) else np.asarray(drift)
    return 1e-9 * float(np.linalg.norm(a))


def is_stable(drift) -> bool:
    return stability(drift) < -stability_margin(drift)


def write_matrix_csv(path, matrix, header_lines=()):
    """Row-major CSV at full precision; ``#`` header lines first.

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _write_matrix(path, matrix, header_lines)
        return
    with Path(path).open("w") as fh:
        _write_matrix(fh, matrix, header_lines)


def _write_matrix(fh, matrix, header_lines):
    for line in header_lines:
        fh.write(f"# {line}\n")
    # adding 0.0 turns -0.0 into 0.0
    np.savetxt(fh, np.asarray(matrix, dtype=float) + 0.0, fmt="%.17g", delimiter=",")


def read_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
