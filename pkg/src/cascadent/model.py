"""Physical parameter model for cascaded optomechanical chains.

Rates live internally as angular frequencies (rad/s). Config files carry
ordinary frequencies in Hz, i.e. ``rate / 2pi``; :func:`hz` and
:func:`to_hz` convert between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
from scipy.constants import hbar

TWO_PI = 2.0 * math.pi

# Picard iteration defaults for the classical fixed point.
PICARD_DAMPING = 0.5
PICARD_TOL = 1e-12
PICARD_MAX_ITER = 1000

# Resolved-sideband diagnostics fire below this ratio.
SIDEBAND_RATIO = 10.0


def hz(f):
    """Ordinary frequency in Hz -> angular rate in rad/s."""
    return TWO_PI * f


def to_hz(w):
    """Angular rate in rad/s -> ordinary frequency in Hz."""
    return w / TWO_PI


class ConfigError(ValueError):
    """Raised for schema violations or physically invalid parameters."""


class ConvergenceError(RuntimeError):
    """Raised when the classical fixed-point iteration does not settle."""


# ---------------------------------------------------------------------------
# Pump -> effective coupling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PumpParams:
    """Drive of a single cavity mode.

    All rates are angular (rad/s). ``delta`` is the bare detuning
    ``omega_cav - nu``. ``g0`` overrides the single-photon coupling that is
    otherwise computed from mass, length and frequencies.
    """

    power: float
    kappa_in: float
    nu: float
    omega_cav: float
    length: float
    mass: float
    omega_m: float
    gamma_m: float
    kappa: float
    delta: float | None = None
    g0: float | None = None

    def __post_init__(self):
        for name in ("kappa_in", "nu", "omega_cav", "length", "mass",
                     "omega_m", "kappa"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"pump parameter {name} must be > 0")
        if self.power < 0 or self.gamma_m < 0:
            raise ConfigError("pump power and gamma_m must be >= 0")
        if self.g0 is not None and self.g0 < 0:
            raise ConfigError("g0 must be >= 0")

    @property
    def detuning(self) -> float:
        if self.delta is not None:
            return self.delta
        return self.omega_cav - self.nu

    @property
    def single_photon_coupling(self) -> float:
        if self.g0 is not None:
            return self.g0
        return math.sqrt(hbar / (self.mass * self.omega_m)) * self.omega_cav / self.length

    @property
    def drive_amplitude(self) -> float:
        return math.sqrt(2.0 * self.power * self.kappa_in / (hbar * self.nu))

    @property
    def input_loss_negligible(self) -> bool:
        return self.kappa >= SIDEBAND_RATIO * self.kappa_in


@dataclass(frozen=True)
class ClassicalSteadyState:
    cavity_amplitude: complex
    mechanical_amplitude: complex
    detuning: float
    coupling: float
    residual: float
    iterations: int


def _classical_map(pumps: Sequence[PumpParams], x: float):
    """Evaluate amplitudes for a trial Re(c), returning (z list, c)."""
    p0 = pumps[0]
    zs = []
    acc = 0.0
    for p in pumps:
        g0 = p.single_photon_coupling
        shifted = p.detuning + 2.0 * g0 * x
        denom = complex(p.kappa, shifted)
        z = p.drive_amplitude / denom
        zs.append((z, shifted))
        acc += g0 * abs(z) ** 2
    c = acc / complex(p0.omega_m, p0.gamma_m)
    return zs, c


def _check_shared_mechanics(pumps: Sequence[PumpParams]):
    p0 = pumps[0]
    for p in pumps[1:]:
        if (p.omega_m, p.gamma_m, p.mass) != (p0.omega_m, p0.gamma_m, p0.mass):
            raise ConfigError("pumps driving one cavity must share the mechanical oscillator")


def classical_steady_state(pumps: Sequence[PumpParams], tolerance=PICARD_TOL,
                           max_iterations=PICARD_MAX_ITER,
                           damping=PICARD_DAMPING) -> list[ClassicalSteadyState]:
    """Solve the coupled classical amplitudes for all pumps of one cavity.

    The modes share one mechanical oscillator, so the scalar unknown is
    ``Re(c)``; it is found by damped Picard iteration. The residual is the
    relative change ``|F(x) - x| / max(|x|, tiny)`` at the returned point.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    pumps = list(pumps)
    if not pumps:
        raise ValueError("need at least one pump")
    _check_shared_mechanics(pumps)

    x = 0.0
    residual = math.inf
    for it in range(1, max_iterations + 1):
        _, c = _classical_map(pumps, x)
        fx = c.real
        scale = max(abs(fx), abs(x), 1e-300)
        residual = abs(fx - x) / scale if (fx or x) else 0.0
        if residual <= tolerance:
            x = fx
            break
        x = (1.0 - damping) * x + damping * fx
    else:
        raise ConvergenceError(
            f"classical fixed point did not converge in {max_iterations} "
            f"iterations (residual {residual:.3e}); operating point may be bistable")

    zs, c = _classical_map(pumps, x)
    return [ClassicalSteadyState(cavity_amplitude=z, mechanical_amplitude=c,
                                 detuning=shifted,
                                 coupling=abs(z) * p.single_photon_coupling,
                                 residual=residual, iterations=it)
            for p, (z, shifted) in zip(pumps, zs)]


def effective_coupling(pump: PumpParams, tolerance=PICARD_TOL,
                       max_iterations=PICARD_MAX_ITER) -> ClassicalSteadyState:
    """Effective linearized coupling ``g = |z| g0`` for a single driven mode."""
    return classical_steady_state([pump], tolerance, max_iterations)[0]


# ---------------------------------------------------------------------------
# Chain description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CavityParams:
    """One cavity of the chain. Rates in rad/s.

    ``eta_a``/``eta_b`` are the efficiencies of the link from the previous
    cavity; they are ignored for the first cavity.
    """

    kappa_a: float
    kappa_b: float
    g_a: float
    g_b: float
    gamma_m: float
    n_th: float = 0.0
    eta_a: float = 1.0
    eta_b: float = 1.0


@dataclass(frozen=True)
class ChainConfig:
    cavities: tuple[CavityParams, ...]
    omega_m: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "cavities", tuple(self.cavities))
        if not self.cavities:
            raise ConfigError("chain needs at least one cavity")
        if self.omega_m is not None:
            om = tuple(float(w) for w in np.broadcast_to(
                np.asarray(self.omega_m, dtype=float), (len(self.cavities),)))
            object.__setattr__(self, "omega_m", om)

    @property
    def n(self) -> int:
        return len(self.cavities)

    def __len__(self):
        return len(self.cavities)

    @classmethod
    def matched(cls, n, g1, g2, kappa, gamma_m=0.0, n_th=0.0, eta=1.0,
                omega_m=None) -> "ChainConfig":
        """Chain with the matched-coupling convention.

        Odd cavities (1-based) get ``g_a = g1, g_b = g2``; even cavities the
        reverse, so the amplifying coupling is always ``g1``.
        """
        if n < 1:
            raise ConfigError("chain needs at least one cavity")
        cavs = []
        for j in range(1, n + 1):
            ga, gb = (g1, g2) if j % 2 == 1 else (g2, g1)
            cavs.append(CavityParams(kappa, kappa, ga, gb, gamma_m, n_th, eta, eta))
        return cls(tuple(cavs), omega_m=omega_m)

    def scaled(self, factor: float) -> "ChainConfig":
        """Multiply every rate by ``factor`` (dimensionless values untouched)."""
        cavs = tuple(replace(c, kappa_a=c.kappa_a * factor, kappa_b=c.kappa_b * factor,
                             g_a=c.g_a * factor, g_b=c.g_b * factor,
                             gamma_m=c.gamma_m * factor) for c in self.cavities)
        om = None if self.omega_m is None else tuple(w * factor for w in self.omega_m)
        return ChainConfig(cavs, om)

    def append(self, cavity: CavityParams) -> "ChainConfig":
        om = self.omega_m
        if om is not None:
            om = om + (om[-1],)
        return ChainConfig(self.cavities + (cavity,), om)

    def with_cavities(self, **changes) -> "ChainConfig":
        """Apply the same field changes to every cavity."""
        return ChainConfig(tuple(replace(c, **changes) for c in self.cavities), self.omega_m)


def is_odd(j: int) -> bool:
    """Parity of a 0-based cavity index in the 1-based odd/even convention."""
    return (j + 1) % 2 == 1


def amplifying_coupling(cav: CavityParams, j: int) -> float:
    """Parametric (blue-detuned) coupling of 0-based cavity ``j``."""
    return cav.g_a if is_odd(j) else cav.g_b


def damping_coupling(cav: CavityParams, j: int) -> float:
    """Beam-splitter (red-detuned) coupling of 0-based cavity ``j``."""
    return cav.g_b if is_odd(j) else cav.g_a


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    level: str  # "ERROR" | "WARN"
    cavity: int | None
    message: str

    def as_dict(self):
        return {"level": self.level, "cavity": self.cavity, "message": self.message}


@dataclass
class _Collector:
    items: list = field(default_factory=list)

    def error(self, j, msg):
        self.items.append(Diagnostic("ERROR", j, msg))

    def warn(self, j, msg):
        self.items.append(Diagnostic("WARN", j, msg))


def validate_chain(config: ChainConfig) -> list[Diagnostic]:
    """Collect ERROR/WARN diagnostics for a chain; never raises."""
    out = _Collector()
    for j, cav in enumerate(config.cavities):
        for name in ("kappa_a", "kappa_b", "g_a", "g_b", "gamma_m", "n_th"):
            v = getattr(cav, name)
            if not np.isfinite(v):
                out.error(j, f"{name} is not finite")
            elif v < 0:
                out.error(j, f"{name} = {v!r} is negative")
        for name in ("kappa_a", "kappa_b"):
            if getattr(cav, name) == 0:
                out.error(j, f"{name} must be > 0")
        for name in ("eta_a", "eta_b"):
            v = getattr(cav, name)
            if not 0.0 <= v <= 1.0:
                out.error(j, f"{name} = {v!r} outside [0, 1]")

        amp, damp = amplifying_coupling(cav, j), damping_coupling(cav, j)
        if cav.gamma_m == 0 and amp >= damp and (amp > 0 or damp > 0):
            out.warn(j, f"amplifying coupling {to_hz(amp):.6g} Hz >= damping coupling "
                        f"{to_hz(damp):.6g} Hz with gamma_m = 0: marginal or unstable")
        elif cav.gamma_m == 0 and amp == 0 and damp == 0:
            out.warn(j, "mechanical mode undamped and uncoupled: no steady state")

        if config.omega_m is not None:
            wm = config.omega_m[j]
            kappa = max(cav.kappa_a, cav.kappa_b)
            g = max(cav.g_a, cav.g_b)
            if kappa > 0 and wm / kappa < SIDEBAND_RATIO:
                out.warn(j, f"omega_m/kappa = {wm / kappa:.3g} < {SIDEBAND_RATIO:g}: "
                            "outside the resolved-sideband regime")
            if g > 0 and wm / g < SIDEBAND_RATIO:
                out.warn(j, f"omega_m/g = {wm / g:.3g} < {SIDEBAND_RATIO:g}: "
                            "rotating-wave approximation questionable")
    return out.items


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.level == "ERROR" for d in diags)
