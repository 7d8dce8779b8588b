"""Command-line entry points: drift, simulate, mse-baseline.

Exit codes: 0 success, 1 validation error, 2 pipeline error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .dataset import SimulationConfig
from .pipeline import (
    PipelineError,
    RunConfig,
    ingest,
    load_forests,
    ols_mse_baseline,
    run_drift,
    run_simulation,
    write_csv,
    write_json,
    write_report_files,
)

EXIT_VALIDATION = 1
EXIT_PIPELINE = 2


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _merge_config(config_path, seed, out, mode, encoding, criterion, mixed) -> RunConfig:
    base = _load_config(config_path)
    cfg = RunConfig.from_dict(base)
    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if out is not None:
        overrides["out"] = out
    if mode is not None:
        overrides["stability_mode"] = mode
    if encoding is not None:
        overrides["encoding"] = "full_dummies" if encoding == "full" else encoding
    if criterion is not None:
        overrides["criterion"] = criterion
    if mixed is not None:
        overrides["mixed_mode"] = mixed
    return replace(cfg, **overrides) if overrides else cfg


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="JSON run configuration.")(fn)
    fn = click.option("--seed", type=int, default=None, help="Root seed.")(fn)
    fn = click.option("--out", type=click.Path(), default=None,
                      help="Output directory.")(fn)
    fn = click.option("--mode", type=click.Choice(["cumulative", "consecutive"]),
                      default=None, help="Stability mode.")(fn)
    fn = click.option("--encoding", type=click.Choice(["full", "canonical"]),
                      default=None, help="Code-dummy encoding.")(fn)
    fn = click.option("--criterion", type=click.Choice(["aic", "bic"]),
                      default=None, help="MI penalty.")(fn)
    fn = click.option("--mixed", type=click.Choice(["homogeneous", "heterogeneous"]),
                      default=None, help="Mixed-pair variance model.")(fn)
    return fn


@click.group()
def main():
    """Concept-drift detection from the evolution of dependence forests."""


@main.command()
@_common_options
@click.option("--from-forests", "forests_path", type=click.Path(exists=True),
              default=None,
              help="Reuse a forests.json file and skip ingest/MI estimation.")
def drift(config_path, seed, out, mode, encoding, criterion, mixed, forests_path):
    """Run the full pipeline on a windowed CSV input and write the report."""
    try:
        cfg = _merge_config(config_path, seed, out, mode, encoding, criterion, mixed)
        cfg.validate()
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"invalid configuration: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        forests = load_forests(forests_path) if forests_path else None
        report = run_drift(cfg, forests=forests)
        write_report_files(report, cfg.out)
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    click.echo(f"report written to {Path(cfg.out) / 'report.json'}")


@main.command()
@_common_options
@click.option("--n", "n_per_period", type=int, default=5000,
              help="Observations per period.")
def simulate(config_path, seed, out, mode, encoding, criterion, mixed, n_per_period):
    """Generate the 8-period synthetic study and report both stability modes."""
    try:
        cfg = _merge_config(config_path, seed, out, mode, encoding, criterion, mixed)
        cfg.validate()
        sim = SimulationConfig(n_per_period=n_per_period, seed=cfg.seed)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"invalid configuration: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        payload = run_simulation(sim, cfg)
        out_dir = Path(cfg.out)
        write_json(out_dir / "report.json", payload)
        for mode_name, rep in payload["modes"].items():
            write_csv(out_dir / f"stability_fractions_{mode_name}.csv", ["t", "mu"],
                      [[r["t"], r["mu"]] for r in rep["stability"]["fractions"]])
            write_csv(out_dir / f"stability_curve_{mode_name}.csv",
                      ["t", "mean", "lower", "upper", "observed"],
                      [[p["t"], p["mean"], p["lower"], p["upper"], p["observed"]]
                       for p in rep["curve"]])
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    click.echo(f"simulation report written to {Path(cfg.out) / 'report.json'}")


@main.command("mse-baseline")
@_common_options
@click.option("--target", type=str, required=True,
              help="Continuous column to predict.")
@click.option("--simulated", is_flag=True, default=False,
              help="Use the synthetic 8-period tensor instead of reading a file.")
@click.option("--n", "n_per_period", type=int, default=5000,
              help="Observations per period (simulated input only).")
def mse_baseline(config_path, seed, out, mode, encoding, criterion, mixed,
                 target, simulated, n_per_period):
    """Fit OLS on window 1 and track its MSE across every window."""
    try:
        cfg = _merge_config(config_path, seed, out, mode, encoding, criterion, mixed)
        cfg.validate()
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"invalid configuration: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        if simulated:
            from .dataset import simulate_appendix
            from .pipeline import _SEED_SIMULATOR
            tensor = simulate_appendix(SimulationConfig(
                n_per_period=n_per_period, seed=cfg.seed + _SEED_SIMULATOR))
        else:
            tensor = ingest(cfg)
        result = ols_mse_baseline(tensor, target)
        out_dir = Path(cfg.out)
        write_csv(out_dir / "mse_baseline.csv", ["t", "mse"],
                  [[r["t"], r["mse"]] for r in result["series"]])
        write_json(out_dir / "mse_baseline.json", result)
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(EXIT_PIPELINE)
    click.echo(f"mse series written to {Path(cfg.out) / 'mse_baseline.csv'}")


if __name__ == "__main__":
    main()
