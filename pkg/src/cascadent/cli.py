"""Command-line entry point: ``cascadent {steady,sweep,figure,oracle,validate}``.

Exit codes: 0 success, 2 config error, 3 instability, 4 numerical failure,
5 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import steady_state
from .config import config_to_dict, load_config
from .lyapunov import NumericalError, UnstableError, lyapunov_residual, residual_bound
from .model import ConfigError, has_errors, validate_chain
from .network import write_matrix_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_NUMERICAL = 4
EXIT_MISMATCH = 5

log = logging.getLogger("cascadent")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fail(code, kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": str(message), "exit_code": code}) + "\n")
    return code


def cmd_validate(args):
    config = load_config(args.config)
    diags = validate_chain(config)
    _emit({"config": config_to_dict(config), "diagnostics": [d.as_dict() for d in diags]}, args.out)
    return EXIT_CONFIG if has_errors(diags) else EXIT_OK


def cmd_steady(args):
    config = load_config(args.config)
    diags = validate_chain(config)
    if has_errors(diags):
        return _fail(EXIT_CONFIG, "config", "; ".join(d.message for d in diags if d.level == "ERROR"))
    res = steady_state(config)
    a, d, s = res.drift.matrix, res.diffusion.matrix, res.covariance.matrix
    report = {
        "config": config_to_dict(config),
        "diagnostics": [x.as_dict() for x in diags],
        "stability_abscissa": res.abscissa,
        "lyapunov_residual": lyapunov_residual(a, s, d),
        "residual_bound": residual_bound(a, s, d),
        "physical": res.covariance.is_physical(),
        "entanglement": res.report().as_dict(),
    }
    if args.out is None:
        if args.format == "csv":
            write_matrix_csv(sys.stdout, s, [f"modes: {' '.join(res.covariance.labels)}"])
        else:
            _emit(report)
        return EXIT_OK
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _emit(report, out / "report.json")
    res.covariance.to_csv(out / "covariance.csv")
    write_matrix_csv(out / "drift.csv", a, ["drift matrix A"])
    write_matrix_csv(out / "diffusion.csv", d, ["diffusion matrix D"])
    _emit(res.drift.layout.manifest(), out / "layout.json")
    return EXIT_OK


def _parse_bindings(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"binding {item!r} must look like NAME=VALUE")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"binding {item!r}: value is not a number") from None
    return out


def _parse_pairs(text):
    if not text:
        return None
    pairs = []
    for tok in text.split(","):
        a, sep, b = tok.strip().partition("-")
        if not sep:
            raise ConfigError(f"pair {tok!r} must look like c1-c2")
        pairs.append((a, b))
    return pairs


def cmd_sweep(args):
    from .sweep import SweepSpec, run_sweep, sweep_columns, write_csv
    config = load_config(args.config)
    data = config_to_dict(config)
    spec = SweepSpec(args.param, args.start, args.stop, args.count, args.scale,
                     _parse_bindings(args.bind))
    rows = run_sweep(data, spec, pairs=_parse_pairs(args.pairs), witness=args.witness,
                     workers=args.workers)
    meta = {"config": data, "sweep": {"target": spec.target, "start": spec.start,
                                      "stop": spec.stop, "count": spec.count,
                                      "scale": spec.scale, "bindings": spec.bindings}}
    if args.format == "json":
        _emit({"metadata": meta, "rows": rows}, args.out)
    else:
        cols = sweep_columns(spec, rows)
        write_csv(args.out if args.out else sys.stdout, rows, cols, meta)
    return EXIT_OK


def cmd_figure(args):
    from .figures import write_figure
    out = args.out or "figures"
    for path in write_figure(args.name, out, workers=args.workers):
        print(path)
    return EXIT_OK


def cmd_oracle(args):
    from .oracle import MIN_SAMPLE_SIZE, TrajectoryConfig, compare, simulate_trajectories
    config = load_config(args.config)
    diags = validate_chain(config)
    if has_errors(diags):
        return _fail(EXIT_CONFIG, "config", "; ".join(d.message for d in diags if d.level == "ERROR"))
    res = steady_state(config)
    tc = TrajectoryConfig(n_trajectories=args.trajectories, seed=args.seed, dt=args.dt,
                          burn_in=args.burn_in, sample_time=args.sample_time,
                          stride=args.stride, workers=args.workers)
    est = simulate_trajectories(res.drift, res.diffusion, tc, backend=args.backend)
    cmp = compare(est, res.covariance, threshold=args.threshold)
    warnings = []
    if est.sample_size < MIN_SAMPLE_SIZE:
        warnings.append({"level": "WARN", "message": f"effective sample size {est.sample_size} "
                                                     f"< {MIN_SAMPLE_SIZE}; z-scores unreliable"})
    report = {
        "config": config_to_dict(config),
        "trajectories": est.sample_size,
        "seed": args.seed,
        "dt": est.dt,
        "n_steps": est.n_steps,
        "samples_per_trajectory": est.samples_per_trajectory,
        "comparison": cmp.as_dict(),
        "result": "PASS" if cmp.passed else "FAIL",
        "warnings": warnings,
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _emit(report, out / "oracle_report.json")
        est.to_csv(out / "estimate.csv")
        write_matrix_csv(out / "zscores.csv", cmp.z, ["z = (estimate - lyapunov) / stderr"])
        res.covariance.to_csv(out / "lyapunov.csv")
    else:
        _emit(report)
    return EXIT_OK if cmp.passed else EXIT_MISMATCH


def build_parser():
    p = argparse.ArgumentParser(prog="cascadent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, help="chain config (JSON)")
        sp.add_argument("--out", help="output path (directory for steady/figure/oracle)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--format", choices=("csv", "json"), default="json")

    sp = sub.add_parser("validate", help="check a config and print diagnostics")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("steady", help="steady-state covariance and entanglement report")
    common(sp)
    sp.set_defaults(func=cmd_steady)

    sp = sub.add_parser("sweep", help="one-parameter sweep to CSV")
    common(sp)
    sp.set_defaults(func=cmd_sweep, format="csv")
    sp.add_argument("--param", required=True, help="e.g. kappa_hz, eta, chain[0].g_b_hz")
    sp.add_argument("--start", type=float, required=True)
    sp.add_argument("--stop", type=float, required=True)
    sp.add_argument("--count", type=int, default=30)
    sp.add_argument("--scale", choices=("linear", "log"), default="linear")
    sp.add_argument("--bind", action="append", metavar="NAME=VALUE",
                    help="derived parameter applied at every point, e.g. g2_over_g1=1.5")
    sp.add_argument("--pairs", help="comma-separated mechanical pairs, e.g. c1-c2,c2-c3")
    sp.add_argument("--witness", action="store_true", help="add PPT witness columns")

    sp = sub.add_parser("figure", help="reproduce a figure dataset")
    common(sp, config=False)
    sp.add_argument("name", choices=("fig2a", "fig2b", "fig3", "fig5", "fig6"))
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("oracle", help="Monte Carlo check of the steady covariance")
    common(sp)
    sp.add_argument("--trajectories", type=int, default=2000)
    sp.add_argument("--dt", type=float, help="time step in s (default 0.01/||A||_2)")
    sp.add_argument("--burn-in", type=float)
    sp.add_argument("--sample-time", type=float)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--threshold", type=float, default=4.0)
    sp.add_argument("--backend", choices=("numba", "numpy"))
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except UnstableError as exc:
        return _fail(EXIT_UNSTABLE, "unstable", exc)
    except (NumericalError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", exc)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "invalid_argument", exc)


if __name__ == "__main__":
    sys.exit(main())
