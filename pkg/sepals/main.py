from __future__ import annotations

import argparse
import json
import sys
from functools import partial, wraps
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
import pandas as pd

from sepals import __version__, config
from sepals.adapters.csv_adapter import CsvAdapter
from sepals.diagnostics import (
    freedman_diaconis_histogram,
    hill_curve,
    qq_data,
    run_sweep,
    tail_corr_coordinates,
    tail_corr_grid,
)
from sepals.estimators import conjugate_map, fit_epls, fit_epls_at, map_direction
from sepals.exceptions import NUMERICAL_ERRORS, BadThreshold, DomainError, UsageError
from sepals.logger import get_logger, set_level
from sepals.models import ConjugatePrior, Dataset, Direction, RunManifest, SimConfig, SparsePrior, default_direction
from sepals.simulation import far_direction, simulate_dataset, theta_from_kendall_tau
from sepals.workers.sweep import make_prior

logger = get_logger("sepals.main")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

adapter = CsvAdapter()

STUDY_GRIDS = {
    "none": [0.0],
    "conjugate": config.STUDY_KAPPA0_GRID,
    "sparse": config.STUDY_LAMBDA_GRID,
}


def exit_codes(func: Callable[[argparse.Namespace], None]) -> Callable[[argparse.Namespace], int]:
    """Run a command and turn its exceptions into process exit codes."""

    @wraps(func)
    def wrapper(args: argparse.Namespace) -> int:
        try:
            func(args)
            return EXIT_OK

        except NUMERICAL_ERRORS as exc:
            logger.error(f"[{args.command}] numerical failure: {type(exc).__name__}: {exc}")
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
            return EXIT_NUMERICAL

        except (UsageError, BadThreshold, DomainError) as exc:
            logger.error(f"[{args.command}] invalid arguments: {type(exc).__name__}: {exc}")
            return EXIT_USAGE

        except OSError as exc:
            logger.error(f"[{args.command}] I/O failure: {type(exc).__name__}: {exc}")
            return EXIT_IO

    return wrapper


# -- argument helpers ---------------------------------------------------------


def parse_float_grid(value: str | Sequence[float]) -> list[float]:
    if isinstance(value, str):
        try:
            return [float(v) for v in value.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"invalid number list {value!r}") from exc
    return [float(v) for v in value]


def parse_int_grid(value: str | Sequence[int]) -> list[int]:
    """Comma list or inclusive range a:b[:step]."""
    if not isinstance(value, str):
        return [int(v) for v in value]
    try:
        if ":" in value:
            parts = [int(v) for v in value.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(start, stop + 1, step))
        return [int(v) for v in value.split(",") if v.strip()]
    except (ValueError, IndexError) as exc:
        raise UsageError(f"invalid integer grid {value!r}") from exc


def parse_direction(value: str, p: int) -> Direction:
    """'true' (or 'default'), 'far', or p comma-separated reals."""
    if value in ("true", "default"):
        return default_direction(p)
    if value == "far":
        return far_direction(p)
    coords = parse_float_grid(value)
    if len(coords) != p:
        raise UsageError(f"direction has {len(coords)} coordinates, expected {p}")
    return Direction.from_vector(coords)


def sim_config_from_args(args: argparse.Namespace) -> SimConfig:
    theta, rotated = args.theta, args.rotated
    if args.tau is not None:
        if args.theta_given:
            raise UsageError("--tau and --theta are mutually exclusive")
        theta, rotated = theta_from_kendall_tau(args.tau)
    return SimConfig(
        n=args.n,
        p=args.p,
        gamma_y=args.gamma,
        a=args.scale,
        c=args.c,
        theta=theta,
        rotated=rotated,
        snr=args.snr,
        seed=args.seed,
    )


def load_data(args: argparse.Namespace) -> Dataset:
    if args.data is None:
        raise UsageError("--data is required")
    data = adapter.read_dataset(Path(args.data), args.y_col)
    if getattr(args, "lower_tail", False):
        data = data.lower_tail()
    if getattr(args, "standardize", False):
        data = data.standardized()
    return data


def write_manifest(command: str, output: Path, params: dict[str, Any], seed: int | None = None) -> None:
    manifest = RunManifest(command=command, params=params, seed=seed)
    adapter.write_json(manifest.to_dict(), RunManifest.path_for(output))


def _params(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in ("func", "theta_given")}


# -- commands -----------------------------------------------------------------


@exit_codes
def cmd_simulate(args: argparse.Namespace) -> None:
    sim = sim_config_from_args(args)
    if args.out is None:
        raise UsageError("--out is required")
    out = Path(args.out)
    sample = simulate_dataset(sim)
    adapter.write_dataset(sample.data, out)
    write_manifest("simulate", out, {**_params(args), "config": sim.to_dict()}, sim.seed)


@exit_codes
def cmd_fit(args: argparse.Namespace) -> None:
    if (args.k is None) == (args.threshold is None):
        raise UsageError("give exactly one of --k and --threshold")
    if args.prior == "conjugate" and args.mu0 is None:
        raise UsageError("--prior conjugate needs --mu0")

    data = load_data(args)
    if args.k is not None:
        fit = fit_epls(data, args.k, args.theta_n)
    else:
        fit = fit_epls_at(data, args.threshold, args.theta_n)

    mu0 = parse_direction(args.mu0, data.p) if args.mu0 is not None else None
    prior = make_prior(args.prior, args.kappa0 if args.prior == "conjugate" else args.lam, mu0, args.theta_n)
    beta = map_direction(fit, prior)

    result: dict[str, Any] = {
        **fit.to_dict(),
        "beta": beta.tolist(),
        "beta_ml": fit.beta.tolist(),
        "prior": prior.to_dict(),
    }
    if isinstance(prior, ConjugatePrior):
        result["posterior_kappa"] = conjugate_map(fit, prior.mu0, prior.kappa0)[1]
    if isinstance(prior, SparsePrior):
        support = np.flatnonzero(beta.coords)
        result["nonzero_support"] = (support + 1).tolist()
        result["selected_columns"] = [data.columns[j] for j in support]
    if args.beta_true is not None:
        result["similarity"] = beta.dot(parse_direction(args.beta_true, data.p)) ** 2

    logger.info(f"[fit k={fit.k}] prior={prior.family} K_n={fit.K_n:.6g} y_n={fit.y_threshold:.6g}")

    if args.scatter is not None:
        scatter = pd.DataFrame(
            {"projection": data.X @ beta.coords, "y": data.Y, "exceedance": (data.Y >= fit.y_threshold).astype(int)}
        )
        adapter.write_frame(scatter, Path(args.scatter))

    if args.out is None:
        print(adapter.dumps(result))
        return
    out = Path(args.out)
    adapter.write_json(result, out)
    write_manifest("fit", out, _params(args))


@exit_codes
def cmd_sweep(args: argparse.Namespace) -> None:
    if args.out is None:
        raise UsageError("--out is required")
    sim = sim_config_from_args(args)
    hyper_grid = parse_float_grid(args.hyper_grid if args.hyper_grid is not None else STUDY_GRIDS[args.family])
    mu0 = parse_direction(args.mu0, sim.p) if args.family == "conjugate" else None
    k_grid = list(range(args.k_min, args.k_max + 1))

    result = run_sweep(
        sim,
        args.family,
        hyper_grid,
        mu0,
        k_grid,
        args.reps,
        theta_n=args.theta_n,
        jobs=args.jobs,
        progress=not args.quiet,
    )
    out = Path(args.out)
    adapter.write_frame(result.to_frame(), out)

    flagged = [
        {"hyper": float(result.hyper_grid[i]), "k": int(result.k_grid[j])} for i, j in np.argwhere(result.flagged)
    ]
    write_manifest("sweep", out, {**_params(args), "config": sim.to_dict(), "flagged_cells": flagged}, sim.seed)


@exit_codes
def cmd_tail(args: argparse.Namespace) -> None:
    if args.data is None or args.k_max is None:
        raise UsageError("--data and --k-max are required")
    Y = adapter.read_response(Path(args.data), args.y_col)
    if args.lower_tail:
        if np.any(Y <= 0):
            raise DomainError("lower-tail analysis requires a positive response")
        Y = 1.0 / Y
    curve = hill_curve(Y, args.k_max)
    qq = qq_data(Y, args.k if args.k is not None else args.k_max)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    adapter.write_frame(curve.to_frame(), outdir / "hill.csv")
    adapter.write_frame(qq.to_frame(), outdir / "qq.csv")
    adapter.write_frame(freedman_diaconis_histogram(Y), outdir / "hist.csv")
    logger.info(f"[tail {args.data}] qq slope={qq.slope:.6g}")
    write_manifest("tail", outdir / "tail", {**_params(args), "qq_slope": qq.slope})


@exit_codes
def cmd_tailcorr(args: argparse.Namespace) -> None:
    if args.out is None or args.k_grid is None:
        raise UsageError("--out and --k-grid are required")
    data = load_data(args)
    k_grid = parse_int_grid(args.k_grid)
    out = Path(args.out)

    if args.lam is not None:
        beta = parse_direction(args.beta, data.p) if args.beta is not None else None
        frame = tail_corr_coordinates(data, args.lam, k_grid, args.theta_n, beta)
        adapter.write_frame(frame, out)
        write_manifest("tailcorr", out, _params(args))
        return

    if args.lambda_grid is None:
        raise UsageError("give --lambda-grid, or --lambda for per-coordinate curves")
    grid = tail_corr_grid(data, parse_float_grid(args.lambda_grid), k_grid, args.theta_n)
    adapter.write_frame(grid.frame, out)
    best = {"best_k": grid.best_k, "best_lambda": grid.best_lambda, "best_rho": grid.best_rho}
    logger.info(f"[tailcorr {args.data}] argmax k={grid.best_k} lambda={grid.best_lambda} rho={grid.best_rho}")
    print(adapter.dumps(best))
    write_manifest("tailcorr", out, {**_params(args), **best})


# -- parser -------------------------------------------------------------------


class _TrackTheta(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.theta_given = True


def _add_simulation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=config.N_SAMPLES, help="sample size")
    parser.add_argument("--p", type=int, default=config.DIMENSION, help="covariate dimension")
    parser.add_argument("--gamma", type=float, default=config.GAMMA_Y, help="tail index of Y")
    parser.add_argument("--scale", type=float, default=config.PARETO_SCALE, help="Pareto scale a")
    parser.add_argument("--c", type=float, default=config.LINK_EXPONENT, help="link exponent, g(t) = t^c")
    parser.add_argument("--theta", type=float, default=config.CLAYTON_THETA, action=_TrackTheta, help="Clayton theta")
    parser.add_argument("--rotated", action="store_true", help="use the rotated Clayton copula")
    parser.add_argument("--tau", type=float, default=None, help="target Kendall tau (sets theta and rotation)")
    parser.add_argument("--snr", type=float, default=config.SNR, help="signal-to-noise ratio")
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.set_defaults(theta_given=False)


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", type=str, default=None, help="input CSV")
    parser.add_argument("--y-col", type=str, default=None, help="response column (default: 'y' or last)")
    parser.add_argument("--lower-tail", action="store_true", help="analyse 1/Y instead of Y")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", type=str, default=None, help="JSON file of flag defaults")
    common.add_argument(
        "--log-level", type=str.upper, default=config.LOG_LEVEL, choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    common.add_argument("--quiet", action="store_true", help="no progress bars")

    parser = argparse.ArgumentParser(
        prog="sepals", description="Extreme PLS directions with shrinkage", allow_abbrev=False
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subcommand = partial(sub.add_parser, parents=[common], allow_abbrev=False)
    commands: dict[str, argparse.ArgumentParser] = {}

    p = subcommand("simulate", help="simulate a dataset from the inverse model")
    _add_simulation_flags(p)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_simulate)
    commands["simulate"] = p

    p = subcommand("fit", help="fit EPLS and an optional shrinkage prior")
    _add_data_flags(p)
    p.add_argument("--k", type=int, default=None, help="number of exceedances")
    p.add_argument("--threshold", type=float, default=None, help="explicit threshold y_n")
    p.add_argument("--prior", choices=["none", "conjugate", "sparse"], default="none")
    p.add_argument("--kappa0", type=float, default=0.0)
    p.add_argument("--mu0", type=str, default=None, help="'true', 'far' or comma-separated reals")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--theta-n", type=float, default=config.THETA_N)
    p.add_argument("--standardize", action="store_true", help="divide covariates by their standard deviation")
    p.add_argument("--beta-true", type=str, default=None, help="report <beta, beta_true>^2")
    p.add_argument("--scatter", type=str, default=None, help="CSV of (projection, y, exceedance)")
    p.add_argument("--out", type=str, default=None, help="JSON output (default: stdout)")
    p.set_defaults(func=cmd_fit)
    commands["fit"] = p

    p = subcommand("sweep", help="Monte Carlo similarity over (hyper, k)")
    _add_simulation_flags(p)
    p.add_argument("--family", choices=["none", "conjugate", "sparse"], default="conjugate")
    p.add_argument("--hyper-grid", type=str, default=None, help="default: the study grid of the family")
    p.add_argument("--mu0", type=str, default="true", help="'true', 'far' or comma-separated reals")
    p.add_argument("--k-min", type=int, default=config.STUDY_K_RANGE[0])
    p.add_argument("--k-max", type=int, default=config.STUDY_K_RANGE[1])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--jobs", type=int, default=config.JOBS)
    p.add_argument("--theta-n", type=float, default=config.THETA_N)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_sweep)
    commands["sweep"] = p

    p = subcommand("tail", help="Hill plot, QQ plot and histogram data")
    _add_data_flags(p)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="exceedances for the QQ plot (default: k-max)")
    p.add_argument("--outdir", type=str, default=".")
    p.set_defaults(func=cmd_tail)
    commands["tail"] = p

    p = subcommand("tailcorr", help="conditional tail correlations of the sparse MAP")
    _add_data_flags(p)
    p.add_argument("--family", choices=["sparse"], default="sparse")
    p.add_argument("--lambda-grid", type=str, default=None)
    p.add_argument("--k-grid", type=str, default=None, help="comma list or a:b[:step]")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="fixed lambda: per-coordinate mode")
    p.add_argument("--beta", type=str, default=None, help="fixed direction for per-coordinate mode")
    p.add_argument("--theta-n", type=float, default=config.THETA_N)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_tailcorr)
    commands["tailcorr"] = p

    return parser, commands


def load_config_file(path: str) -> dict[str, Any]:
    """Flat JSON object of flag defaults; keys may use dashes or underscores."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    defaults = {key.lstrip("-").replace("-", "_"): value for key, value in raw.items()}
    if "lambda" in defaults:
        defaults["lam"] = defaults.pop("lambda")
    return defaults


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = build_parser()

    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", type=str, default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is not None:
        try:
            defaults = load_config_file(known.config)
        except (OSError, json.JSONDecodeError) as exc:
            logger.error(f"[config {known.config}] cannot load: {exc}")
            return EXIT_IO
        except UsageError as exc:
            logger.error(f"[config {known.config}] {exc}")
            return EXIT_USAGE
        for subparser in commands.values():
            subparser.set_defaults(**defaults)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    set_level(args.log_level)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
