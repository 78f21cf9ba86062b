"""Datasets for the published figures, parameters taken from the captions.

Rates are quoted as ordinary frequencies (Hz). Curve sets and axis ranges
that the captions leave open are fixed here:

* fig2a: g2/g1 in {1.2, 1.5, 2.0}, kappa/2pi from 1e3 to 1e7 Hz
* fig2b: kappa = 100 g2
* fig3: n_th in {0, 10, 50, 100}, g1/2pi from 1e3 to 5e5 Hz
* fig5/fig6: g2 = 1.5 g1; kappa in units of 2pi x 1e5 Hz from 0.1 to 10
* fig6c: kappa/2pi = 2e5 Hz
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import config_to_dict
from .model import ChainConfig, hz
from .sweep import SweepSpec, run_sweep, write_csv

FIG2_G1_HZ = 1e4
FIG2_ETA = 0.95
FIG2_RATIOS = (1.2, 1.5, 2.0)
FIG2_KAPPA_RANGE_HZ = (1e3, 1e7)
FIG2B_RATIO = 1.2
FIG2B_KAPPA_OVER_G2 = 100.0

FIG3_KAPPA_HZ = 4e5
FIG3_GAMMA_M_HZ = 100.0
FIG3_RATIO = 1.5
FIG3_ETA = 0.95
FIG3_NTH = (0.0, 10.0, 50.0, 100.0)
FIG3_G1_RANGE_HZ = (1e3, 5e5)

FIG5_G1_HZ = 1e3
FIG5_RATIO = 1.5
FIG5_GAMMA_M_HZ = 10.0
FIG5_NTH = 0.0
FIG5_ETA = 1.0
KAPPA_UNIT_HZ = 1e5
FIG5_KAPPA_RANGE = (0.1, 10.0)  # in KAPPA_UNIT_HZ
FIG6C_KAPPA_HZ = 2e5

FIGURES = ("fig2a", "fig2b", "fig3", "fig5", "fig6")


def fig2_config(ratio, kappa_hz=1e6, eta=FIG2_ETA) -> ChainConfig:
    g1 = hz(FIG2_G1_HZ)
    return ChainConfig.matched(2, g1, ratio * g1, hz(kappa_hz), gamma_m=0.0, eta=eta)


def fig3_config(g1_hz, n_th, eta=FIG3_ETA) -> ChainConfig:
    g1 = hz(g1_hz)
    return ChainConfig.matched(2, g1, FIG3_RATIO * g1, hz(FIG3_KAPPA_HZ),
                               gamma_m=hz(FIG3_GAMMA_M_HZ), n_th=n_th, eta=eta)


def fig5_config(n=3, kappa_hz=KAPPA_UNIT_HZ, eta=FIG5_ETA, ratio=FIG5_RATIO) -> ChainConfig:
    g1 = hz(FIG5_G1_HZ)
    return ChainConfig.matched(n, g1, ratio * g1, hz(kappa_hz),
                               gamma_m=hz(FIG5_GAMMA_M_HZ), n_th=FIG5_NTH, eta=eta)


def _rename(rows, mapping):
    return [{mapping.get(k, k): v for k, v in r.items()} for r in rows]


def _dataset(name, config, spec, rows, rename, columns):
    rows = _rename(rows, rename)
    meta = {"figure": name, "config": config_to_dict(config),
            "sweep": {"target": spec.target, "start": spec.start, "stop": spec.stop,
                      "count": spec.count, "scale": spec.scale, "bindings": spec.bindings}}
    return columns, rows, meta


def fig2a(count=61, workers=1):
    out = {}
    for ratio in FIG2_RATIOS:
        cfg = fig2_config(ratio)
        spec = SweepSpec("kappa_hz", *FIG2_KAPPA_RANGE_HZ, count, "log")
        rows = run_sweep(config_to_dict(cfg), spec, pairs=[("c1", "c2")], workers=workers)
        out[f"fig2a_g2_over_g1_{ratio:g}.csv"] = _dataset(
            "fig2a", cfg, spec, rows, {"kappa_hz": "kappa_over_2pi_hz", "E_c1_c2": "E12"},
            ["kappa_over_2pi_hz", "E12", "status", "abscissa"])
    return out


def fig2b(count=51, workers=1):
    cfg = fig2_config(FIG2B_RATIO, kappa_hz=FIG2B_KAPPA_OVER_G2 * FIG2B_RATIO * FIG2_G1_HZ)
    spec = SweepSpec("eta", 0.0, 1.0, count)
    rows = run_sweep(config_to_dict(cfg), spec, pairs=[("c1", "c2")], workers=workers)
    return {"fig2b.csv": _dataset("fig2b", cfg, spec, rows, {"E_c1_c2": "E12"},
                                  ["eta", "E12", "status", "abscissa"])}


def fig3(count=121, workers=1):
    out = {}
    for n_th in FIG3_NTH:
        cfg = fig3_config(FIG3_G1_RANGE_HZ[0], n_th)
        spec = SweepSpec("g1_hz", *FIG3_G1_RANGE_HZ, count, "log",
                         bindings={"g2_over_g1": FIG3_RATIO})
        rows = run_sweep(config_to_dict(cfg), spec, pairs=[("c1", "c2")], workers=workers)
        out[f"fig3_nth_{n_th:g}.csv"] = _dataset(
            "fig3", cfg, spec, rows, {"g1_hz": "g1_over_2pi_hz", "E_c1_c2": "E12"},
            ["g1_over_2pi_hz", "E12", "status", "abscissa"])
    return out


def _kappa_sweep(n, count, workers=1, eta=FIG5_ETA):
    cfg = fig5_config(n, eta=eta)
    lo, hi = FIG5_KAPPA_RANGE
    spec = SweepSpec("kappa_hz", lo * KAPPA_UNIT_HZ, hi * KAPPA_UNIT_HZ, count, "log")
    rows = run_sweep(config_to_dict(cfg), spec, witness=True, workers=workers)
    for r in rows:
        r["kappa_1e5_hz"] = r["kappa_hz"] / KAPPA_UNIT_HZ
    return cfg, spec, rows


def fig5(count=61, workers=1):
    cfg, spec, rows = _kappa_sweep(3, count, workers)
    ren = {"E_c1_c2": "E12", "E_c2_c3": "E23", "E_c1_c3": "E13",
           "lambda_c1": "lambda_1_23", "lambda_c2": "lambda_2_13", "lambda_c3": "lambda_3_12"}
    return {
        "fig5_bipartite.csv": _dataset("fig5", cfg, spec, rows, ren,
                                       ["kappa_1e5_hz", "E12", "E23", "E13", "status", "abscissa"]),
        "fig5_witness.csv": _dataset("fig5", cfg, spec, rows, ren,
                                     ["kappa_1e5_hz", "lambda_1_23", "lambda_2_13", "lambda_3_12",
                                      "genuine", "status"]),
    }


def fig6(count=61, eta_count=51, workers=1):
    cfg, spec, rows = _kappa_sweep(4, count, workers)
    ren = {f"E_c{i}_c{j}": f"E{i}{j}" for i in range(1, 5) for j in range(i + 1, 5)}
    ren.update({f"lambda_c{l}": f"lambda_{l}" for l in range(1, 5)})
    out = {
        "fig6a.csv": _dataset("fig6", cfg, spec, rows, ren,
                              ["kappa_1e5_hz", "E34", "E12", "status", "abscissa"]),
        "fig6b.csv": _dataset("fig6", cfg, spec, rows, ren,
                              ["kappa_1e5_hz", "E12", "E23", "E34", "E14", "E13", "E24",
                               "lambda_1", "lambda_2", "lambda_3", "lambda_4", "genuine", "status"]),
    }
    cfg_c = fig5_config(4, kappa_hz=FIG6C_KAPPA_HZ)
    spec_c = SweepSpec("eta", 0.0, 1.0, eta_count)
    rows_c = run_sweep(config_to_dict(cfg_c), spec_c, witness=True, workers=workers)
    out["fig6c.csv"] = _dataset("fig6", cfg_c, spec_c, rows_c, ren,
                                ["eta", "E12", "E23", "E34", "E14", "E13", "E24",
                                 "lambda_1", "lambda_2", "lambda_3", "lambda_4", "genuine", "status"])
    return out


def build_figure(name, workers=1):
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return globals()[name](workers=workers)


def write_figure(name, output_dir, workers=1) -> list[Path]:
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, (cols, rows, meta) in build_figure(name, workers).items():
        path = out_dir / fname
        write_csv(path, rows, cols, meta)
        written.append(path)
    return written
