"""JSON config schema for chains.

Example::

    {
      "omega_m_hz": 1e7,
      "chain": [
        {"kappa_a_hz": 4e5, "kappa_b_hz": 4e5, "g_a_hz": 1e4, "g_b_hz": 1.5e4,
         "gamma_m_hz": 100, "n_th": 0},
        {"kappa_a_hz": 4e5, "kappa_b_hz": 4e5, "g_a_hz": 1.5e4, "g_b_hz": 1e4,
         "gamma_m_hz": 100, "n_th": 0, "eta_a": 0.95, "eta_b": 0.95}
      ]
    }

Cavity keys ``n_th``, ``eta_a`` and ``eta_b`` default to 0, 1 and 1. A
cavity may replace ``g_a_hz``/``g_b_hz`` by ``pump_a``/``pump_b`` blocks,
in which case the coupling is derived from the classical steady state.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import (CavityParams, ChainConfig, ConfigError, PumpParams,
                    classical_steady_state, hz, to_hz)

CAVITY_KEYS = {"kappa_a_hz", "kappa_b_hz", "g_a_hz", "g_b_hz", "gamma_m_hz",
               "n_th", "eta_a", "eta_b", "pump_a", "pump_b"}
TOP_KEYS = {"chain", "omega_m_hz"}
# Pump blocks: frequencies in Hz, power in W, SI otherwise.
PUMP_KEYS = {"power_w", "kappa_in_hz", "nu_hz", "omega_cav_hz", "delta_hz",
             "length_m", "mass_kg", "g0_hz"}
_PUMP_REQUIRED = {"power_w", "kappa_in_hz", "nu_hz", "omega_cav_hz", "length_m", "mass_kg"}


def _number(obj, key, where):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return float(v)


def _pump_from_dict(block, cav, mode, omega_m, where):
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(block) - PUMP_KEYS
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = _PUMP_REQUIRED - set(block)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")
    if omega_m is None:
        raise ConfigError(f"{where}: pump derivation needs omega_m_hz")
    num = {k: _number(block, k, where) for k in block}
    return PumpParams(
        power=num["power_w"], kappa_in=hz(num["kappa_in_hz"]), nu=hz(num["nu_hz"]),
        omega_cav=hz(num["omega_cav_hz"]), length=num["length_m"], mass=num["mass_kg"],
        omega_m=omega_m, gamma_m=cav["gamma_m"], kappa=cav[f"kappa_{mode}"],
        delta=hz(num["delta_hz"]) if "delta_hz" in num else None,
        g0=hz(num["g0_hz"]) if "g0_hz" in num else None)


def config_from_dict(data) -> ChainConfig:
    """Parse and unit-convert a config mapping; raises ConfigError."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    if "chain" not in data:
        raise ConfigError("missing 'chain'")
    chain = data["chain"]
    if not isinstance(chain, list) or not chain:
        raise ConfigError("'chain' must be a non-empty array")

    omega_m = None
    if "omega_m_hz" in data:
        v = data["omega_m_hz"]
        vals = v if isinstance(v, list) else [v] * len(chain)
        if len(vals) != len(chain):
            raise ConfigError("omega_m_hz list length must match chain length")
        omega_m = tuple(hz(_number({"v": x}, "v", "omega_m_hz")) for x in vals)

    cavities = []
    for j, entry in enumerate(chain):
        where = f"chain[{j}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be an object")
        unknown = set(entry) - CAVITY_KEYS
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
        for key in ("kappa_a_hz", "kappa_b_hz", "gamma_m_hz"):
            if key not in entry:
                raise ConfigError(f"{where}: missing {key}")
        cav = {
            "kappa_a": hz(_number(entry, "kappa_a_hz", where)),
            "kappa_b": hz(_number(entry, "kappa_b_hz", where)),
            "gamma_m": hz(_number(entry, "gamma_m_hz", where)),
            "n_th": _number(entry, "n_th", where) if "n_th" in entry else 0.0,
            "eta_a": _number(entry, "eta_a", where) if "eta_a" in entry else 1.0,
            "eta_b": _number(entry, "eta_b", where) if "eta_b" in entry else 1.0,
        }
        pumps = {}
        for mode in ("a", "b"):
            gkey, pkey = f"g_{mode}_hz", f"pump_{mode}"
            if (gkey in entry) == (pkey in entry):
                raise ConfigError(f"{where}: give exactly one of {gkey} or {pkey}")
            if gkey in entry:
                cav[f"g_{mode}"] = hz(_number(entry, gkey, where))
            else:
                pumps[mode] = _pump_from_dict(entry[pkey], cav, mode,
                                              omega_m[j] if omega_m else None,
                                              f"{where}.{pkey}")
        if pumps:
            states = classical_steady_state(list(pumps.values()))
            for mode, st in zip(pumps, states):
                cav[f"g_{mode}"] = st.coupling
        cavities.append(CavityParams(**cav))
    return ChainConfig(tuple(cavities), omega_m)


def config_to_dict(config: ChainConfig) -> dict:
    """Resolved config in file units (couplings always explicit)."""
    out = {"chain": [
        {"kappa_a_hz": to_hz(c.kappa_a), "kappa_b_hz": to_hz(c.kappa_b),
         "g_a_hz": to_hz(c.g_a), "g_b_hz": to_hz(c.g_b),
         "gamma_m_hz": to_hz(c.gamma_m), "n_th": c.n_th,
         "eta_a": c.eta_a, "eta_b": c.eta_b}
        for c in config.cavities]}
    if config.omega_m is not None:
        out["omega_m_hz"] = [to_hz(w) for w in config.omega_m]
    return out


def load_config(path) -> ChainConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def dump_config(config: ChainConfig, path):
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
