"""Parameter sweeps over chain configs and CSV dataset output.

Sweeps act on the config mapping in file units (Hz), so every grid point
is re-parsed through the same schema as a config file.

Parameter paths:

* ``chain[i].<key>`` / ``chain[*].<key>`` for any cavity key
* ``kappa_hz``, ``eta``, ``n_th``, ``gamma_m_hz``: every cavity, both modes
* ``g1_hz`` / ``g2_hz``: amplifying / damping coupling of every cavity
* ``g2_over_g1``: set ``g2 = value * g1``
* ``kappa_over_g2``: set ``kappa = value * g2``

Bindings use the same names and are applied after the swept value:
absolute values first, then ``g2_over_g1``, then ``kappa_over_g2`` (which
reads the already-updated g2).
"""

from __future__ import annotations

import copy
import itertools
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import steady_state
from .config import CAVITY_KEYS, config_from_dict
from .entanglement import log_negativity, ppt_negativity_eigenvalues, reduce
from .lyapunov import NumericalError, UnstableError
from .model import ConfigError
from .network import build_drift, stability

GLOBAL_TARGETS = ("kappa_hz", "eta", "n_th", "gamma_m_hz", "g1_hz", "g2_hz",
                  "g2_over_g1", "kappa_over_g2")
_RATIOS = ("g2_over_g1", "kappa_over_g2")
_PATH = re.compile(r"^chain\[(\d+|\*)\]\.(\w+)$")
CSV_FMT = "%.12g"


@dataclass(frozen=True)
class SweepSpec:
    target: str
    start: float
    stop: float
    count: int
    scale: str = "linear"
    bindings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError("sweep count must be >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep bounds must be finite")
        if self.scale not in ("linear", "log"):
            raise ConfigError("sweep scale must be 'linear' or 'log'")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("log sweep needs positive bounds")
        _check_target(self.target)
        for name in self.bindings:
            _check_target(name)

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def _check_target(target):
    if target in GLOBAL_TARGETS:
        return
    m = _PATH.match(target)
    if not m or m.group(2) not in CAVITY_KEYS - {"pump_a", "pump_b"}:
        raise ConfigError(f"unknown sweep parameter {target!r}")


def _amplifying_key(j):
    return "g_a_hz" if j % 2 == 0 else "g_b_hz"


def _damping_key(j):
    return "g_b_hz" if j % 2 == 0 else "g_a_hz"


def set_parameter(data: dict, target: str, value: float) -> dict:
    """Return a copy of a config mapping with ``target`` set to ``value``."""
    data = copy.deepcopy(data)
    chain = data["chain"]
    m = _PATH.match(target)
    if m:
        idx = range(len(chain)) if m.group(1) == "*" else [int(m.group(1))]
        for j in idx:
            if j >= len(chain):
                raise ConfigError(f"{target}: chain has only {len(chain)} cavities")
            chain[j][m.group(2)] = value
        return data
    for j, cav in enumerate(chain):
        if target == "kappa_hz":
            cav["kappa_a_hz"] = cav["kappa_b_hz"] = value
        elif target == "eta":
            cav["eta_a"] = cav["eta_b"] = value
        elif target in ("n_th", "gamma_m_hz"):
            cav[target] = value
        elif target == "g1_hz":
            cav[_amplifying_key(j)] = value
        elif target == "g2_hz":
            cav[_damping_key(j)] = value
        elif target == "g2_over_g1":
            cav[_damping_key(j)] = value * cav[_amplifying_key(j)]
        elif target == "kappa_over_g2":
            cav["kappa_a_hz"] = cav["kappa_b_hz"] = value * cav[_damping_key(j)]
        else:
            raise ConfigError(f"unknown sweep parameter {target!r}")
    return data


def apply_point(data: dict, spec: SweepSpec, value: float) -> dict:
    data = set_parameter(data, spec.target, value)
    ordered = sorted(spec.bindings.items(),
                     key=lambda kv: _RATIOS.index(kv[0]) + 1 if kv[0] in _RATIOS else 0)
    for name, v in ordered:
        data = set_parameter(data, name, v)
    return data


def mechanical_pairs(n):
    return [(f"c{i + 1}", f"c{j + 1}") for i, j in itertools.combinations(range(n), 2)]


def evaluate_point(data: dict, pairs=None, witness=False) -> dict:
    """Entanglement row for one config mapping; failures go into ``status``."""
    row = {"status": "ok", "abscissa": math.nan}
    try:
        config = config_from_dict(data)
    except (ConfigError, ValueError) as exc:
        row["status"] = f"config_error: {exc}"
        return row
    pairs = pairs or mechanical_pairs(config.n)
    for a, b in pairs:
        row[f"E_{a}_{b}"] = math.nan
    labels = [f"c{j + 1}" for j in range(config.n)]
    if witness:
        for lab in labels:
            row[f"lambda_{lab}"] = math.nan
        row["genuine"] = math.nan
    try:
        row["abscissa"] = stability(build_drift(config))
        res = steady_state(config)
    except UnstableError:
        row["status"] = "unstable"
        return row
    except (NumericalError, np.linalg.LinAlgError) as exc:
        row["status"] = f"numerical_error: {exc}"
        return row
    mech = res.mechanical
    for a, b in pairs:
        row[f"E_{a}_{b}"] = log_negativity(reduce(mech, [a, b]))[0]
    if witness:
        negs = [ppt_negativity_eigenvalues(mech, lab) for lab in labels]
        for lab, v in zip(labels, negs):
            row[f"lambda_{lab}"] = float(v.min()) if len(v) else 0.0
        row["genuine"] = int(all(len(v) for v in negs))
    return row


def run_sweep(data: dict, spec: SweepSpec, pairs=None, witness=False, workers=1):
    """Evaluate every grid point; rows come back in grid order."""
    grid = spec.grid()
    points = [apply_point(data, spec, v) for v in grid]

    def one(p):
        return evaluate_point(p, pairs, witness)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]
    out = []
    for v, r in zip(grid, rows):
        out.append({spec.target: float(v), **r})
    return out


def _fmt(v):
    if isinstance(v, str):
        return '"' + v.replace('"', "'") + '"' if ("," in v or '"' in v) else v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return CSV_FMT % v


def write_csv(path_or_fh, rows, columns=None, metadata=None):
    """Comma-separated, ``%.12g`` numbers, ``#`` metadata lines first."""
    if columns is None:
        columns = list(rows[0]) if rows else []
    lines = []
    for key, val in (metadata or {}).items():
        text = val if isinstance(val, str) else json.dumps(val, sort_keys=True)
        lines.append(f"# {key}: {text}")
    lines.append(",".join(columns))
    for r in rows:
        lines.append(",".join(_fmt(r.get(c, math.nan)) for c in columns))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_fh, "write"):
        path_or_fh.write(text)
    else:
        with open(path_or_fh, "w", newline="") as fh:
            fh.write(text)


def sweep_columns(spec: SweepSpec, rows):
    cols = [spec.target, "status", "abscissa"]
    for r in rows:
        cols += [c for c in r if c not in cols]
    return cols
