"""Command-line harness for running scheduler sweeps."""

import sys
from dataclasses import replace
from pathlib import Path

import click

from .experiment import (
    ConfigError,
    ExperimentConfig,
    emit_plot_data,
    emit_results,
    load_config,
    run_experiment,
    validate_config,
)

_EXAMPLE_CONFIG = """\
# appsched experiment configuration
agents:
  n_agents: 100
  period_T: 100
  lifetime_D: 100
  resilience_list: [90, 95, 100, 105, 110, 115]
channel:
  p_lo: 1.0e-3
  p_hi: 1.0e-1
  jitter_factor: 2.0
  mean_spacing: log   # or linear
run:
  n_slots: 10000
  n_iterations: 100
  master_seed: 0
  worker_count: 1
schedulers:
  - id: round-robin
  - id: pf-like
  - id: ols-r
    alphas: [0]
  - id: olt-r
    alphas: [0, -1, -2, -5]
output:
  results_path: results.csv
"""


@click.group()
def main():
    """Discrete-time radio-resource scheduling simulator."""


@main.command("example-config")
def example_config():
    """Print a template experiment configuration (YAML)."""
    click.echo(_EXAMPLE_CONFIG, nl=False)


@main.command("run")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Experiment config file (YAML); defaults mirror the reference sweep.")
@click.option("--seed", type=int, default=None, help="Override run.master_seed.")
@click.option("--iterations", type=int, default=None, help="Override run.n_iterations.")
@click.option("--workers", type=int, default=None, help="Override run.worker_count.")
@click.option("--output-dir", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Directory for results and plot data.")
@click.option("--scheduler", "scheduler_filter", multiple=True,
              help="Keep only these scheduler ids (repeatable).")
@click.option("--trace", is_flag=True, help="Dump a per-slot trace of iteration 0 of each cell.")
def run(config_path, seed, iterations, workers, scheduler_filter, output_dir, trace):
    """Run the sweep and write results.csv plus per-variant plot data."""
    try:
        cfg = load_config(config_path) if config_path else ExperimentConfig()
        if seed is not None:
            cfg = replace(cfg, master_seed=seed)
        if iterations is not None:
            cfg = replace(cfg, n_iterations=iterations)
        if workers is not None:
            cfg = replace(cfg, worker_count=workers)
        if scheduler_filter:
            kept = tuple(s for s in cfg.schedulers if s.scheduler_id in scheduler_filter)
            if not kept:
                raise ConfigError("--scheduler: no configured scheduler matches the filter")
            cfg = replace(cfg, schedulers=kept)
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        if trace:
            cfg = replace(cfg, trace_dir=str(out / "traces"))
        validate_config(cfg)
    except ConfigError as exc:
        click.echo(f"error: invalid configuration: {exc}", err=True)
        sys.exit(2)

    def progress(cell):
        click.echo(
            f"{cell.scheduler_id:>12} alpha={'' if cell.alpha is None else cell.alpha:<5}"
            f" R={cell.resilience_R:<4} f_cst={cell.f_cst_mean:.4e}"
            f" (+-{cell.f_cst_stderr:.1e}, n={cell.n_iterations})"
        )

    try:
        table = run_experiment(cfg, progress=progress)
        results_path = out / Path(cfg.results_path).name
        emit_results(table, cfg, results_path)
        emit_plot_data(table, out / "plot_data")
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"wrote {results_path}")


if __name__ == "__main__":
    main()
