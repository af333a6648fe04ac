"""Experiment harness: config parsing, sweep orchestration, result files.

A sweep runs every (scheduler variant, resilience R) cell for a configured
number of Monte-Carlo iterations, estimates the steady-state violation rate
per iteration, and aggregates across iterations. Iterations are seeded from
(master_seed, iteration_index) only, so the same config and seed produce
byte-identical result files at any worker count.
"""

import csv
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

import yaml

from .engine import IterationConfig, run_iteration, write_trace
from .metrics import aggregate, steady_slope
from .schedulers import SCHEDULER_IDS

_BASELINES = ("round-robin", "pf-like")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class SchedulerSpec:
    scheduler_id: str
    alphas: tuple = (0.0,)


@dataclass(frozen=True)
class ExperimentConfig:
    n_agents: int = 100
    period_T: int = 100
    lifetime_D: int = 100
    resilience_list: tuple = (90, 95, 100, 105, 110, 115)
    p_lo: float = 1e-3
    p_hi: float = 1e-1
    jitter_factor: float = 2.0
    mean_spacing: str = "log"
    n_slots: int = 10_000
    n_iterations: int = 100
    master_seed: int = 0
    worker_count: int = 1
    slope_window: Optional[int] = None  # default: min(5000, n_slots)
    schedulers: tuple = (
        SchedulerSpec("round-robin"),
        SchedulerSpec("pf-like"),
        SchedulerSpec("ols-r", (0.0,)),
        SchedulerSpec("olt-r", (0.0, -1.0, -2.0, -5.0)),
    )
    results_path: str = "results.csv"
    trace_dir: Optional[str] = None
    consume_on_success: bool = True
    olt_floor_v: bool = True
    pf_omega_allocated: bool = True

    def effective_window(self) -> int:
        return self.slope_window if self.slope_window is not None else min(5000, self.n_slots)


@dataclass(frozen=True)
class CellResult:
    scheduler_id: str
    alpha: Optional[float]
    heuristic_kind: Optional[str]
    resilience_R: int
    f_cst_mean: float
    f_cst_stderr: float
    n_iterations: int


def _require(cond: bool, path: str, msg: str):
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build and validate a config from the parsed YAML mapping."""
    _require(isinstance(raw, dict), "<root>", "config must be a mapping")
    agents = raw.get("agents", {})
    channel = raw.get("channel", {})
    run = raw.get("run", {})
    output = raw.get("output", {})
    scheds = raw.get("schedulers")

    base = ExperimentConfig()
    cfg = dict(
        n_agents=agents.get("n_agents", base.n_agents),
        period_T=agents.get("period_T", base.period_T),
        lifetime_D=agents.get("lifetime_D", base.lifetime_D),
        resilience_list=tuple(agents.get("resilience_list", base.resilience_list)),
        p_lo=channel.get("p_lo", base.p_lo),
        p_hi=channel.get("p_hi", base.p_hi),
        jitter_factor=channel.get("jitter_factor", base.jitter_factor),
        mean_spacing=channel.get("mean_spacing", base.mean_spacing),
        n_slots=run.get("n_slots", base.n_slots),
        n_iterations=run.get("n_iterations", base.n_iterations),
        master_seed=run.get("master_seed", base.master_seed),
        worker_count=run.get("worker_count", base.worker_count),
        slope_window=run.get("slope_window", base.slope_window),
        results_path=output.get("results_path", base.results_path),
        trace_dir=output.get("trace_dir", base.trace_dir),
        consume_on_success=run.get("consume_on_success", base.consume_on_success),
        olt_floor_v=run.get("olt_floor_v", base.olt_floor_v),
        pf_omega_allocated=run.get("pf_omega_allocated", base.pf_omega_allocated),
    )
    if scheds is not None:
        _require(isinstance(scheds, list) and scheds, "schedulers", "must be a non-empty list")
        parsed = []
        for i, entry in enumerate(scheds):
            path = f"schedulers[{i}]"
            _require(isinstance(entry, dict) and "id" in entry, path, "must be a mapping with an 'id'")
            sid = entry["id"]
            _require(sid in SCHEDULER_IDS, f"{path}.id", f"must be one of {SCHEDULER_IDS}")
            alphas = tuple(float(a) for a in entry.get("alphas", [0.0]))
            parsed.append(SchedulerSpec(sid, alphas))
        cfg["schedulers"] = tuple(parsed)
    return validate_config(ExperimentConfig(**cfg))


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    _require(cfg.n_agents >= 1, "agents.n_agents", "must be >= 1")
    _require(1 <= cfg.lifetime_D <= cfg.period_T, "agents.lifetime_D", "must be in [1, period_T]")
    _require(len(cfg.resilience_list) > 0, "agents.resilience_list", "must be non-empty")
    _require(all(R >= 1 for R in cfg.resilience_list), "agents.resilience_list", "entries must be >= 1")
    _require(0.0 < cfg.p_lo < 1.0, "channel.p_lo", "must be in (0, 1)")
    _require(cfg.p_lo < cfg.p_hi < 1.0 or cfg.n_agents == 1, "channel.p_hi", "must satisfy p_lo < p_hi < 1")
    _require(cfg.jitter_factor >= 1.0, "channel.jitter_factor", "must be >= 1")
    _require(cfg.mean_spacing in ("log", "linear"), "channel.mean_spacing", "must be 'log' or 'linear'")
    _require(cfg.n_slots >= 2, "run.n_slots", "must be >= 2")
    _require(cfg.n_iterations >= 1, "run.n_iterations", "must be >= 1")
    _require(cfg.worker_count >= 1, "run.worker_count", "must be >= 1")
    _require(len(cfg.schedulers) > 0, "schedulers", "must be non-empty")
    window = cfg.effective_window()
    _require(2 <= window <= cfg.n_slots, "run.slope_window", "must be in [2, n_slots]")
    for i, spec in enumerate(cfg.schedulers):
        _require(spec.scheduler_id in SCHEDULER_IDS, f"schedulers[{i}].id", f"must be one of {SCHEDULER_IDS}")
        for a in spec.alphas:
            _require(a <= 0.0, f"schedulers[{i}].alphas", "solver alphas must be <= 0")
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return config_from_dict(raw or {})


def variants(cfg: ExperimentConfig):
    """Expand scheduler specs into (scheduler_id, alpha-or-None) variants."""
    out = []
    for spec in cfg.schedulers:
        if spec.scheduler_id in _BASELINES:
            out.append((spec.scheduler_id, None))
        else:
            for a in spec.alphas:
                out.append((spec.scheduler_id, a))
    return out


def _heuristic_kind(scheduler_id: str) -> Optional[str]:
    if scheduler_id.startswith(("ols-", "olt-")):
        return scheduler_id[-1].upper()
    return None


def _iteration_config(cfg: ExperimentConfig, scheduler_id, alpha, R, iteration_index, record=False):
    return IterationConfig(
        n_agents=cfg.n_agents,
        n_slots=cfg.n_slots,
        period_T=cfg.period_T,
        lifetime_D=cfg.lifetime_D,
        resilience_R=R,
        scheduler_id=scheduler_id,
        alpha=alpha if alpha is not None else 0.0,
        master_seed=cfg.master_seed,
        iteration_index=iteration_index,
        p_lo=cfg.p_lo,
        p_hi=cfg.p_hi,
        jitter_factor=cfg.jitter_factor,
        mean_spacing=cfg.mean_spacing,
        consume_on_success=cfg.consume_on_success,
        olt_floor_v=cfg.olt_floor_v,
        pf_omega_allocated=cfg.pf_omega_allocated,
        record_decisions=record,
    )


def _run_task(args):
    it_config, window = args
    trace = run_iteration(it_config)
    return steady_slope(trace.s_series, window)


def run_experiment(cfg: ExperimentConfig, progress=None) -> list[CellResult]:
    """Run the full sweep and return one aggregated result per cell."""
    validate_config(cfg)
    window = cfg.effective_window()
    cells = [(sid, alpha, R) for sid, alpha in variants(cfg) for R in cfg.resilience_list]
    tasks = [
        ((sid, alpha, R), _iteration_config(cfg, sid, alpha, R, i))
        for sid, alpha, R in cells
        for i in range(cfg.n_iterations)
    ]
    if cfg.worker_count == 1:
        values = [_run_task((tc, window)) for _, tc in tasks]
    else:
        with Pool(cfg.worker_count) as pool:
            values = pool.map(
                _run_task, [(tc, window) for _, tc in tasks],
                chunksize=max(1, len(tasks) // (cfg.worker_count * 4)),
            )

    results = []
    per_cell = cfg.n_iterations
    for c, (sid, alpha, R) in enumerate(cells):
        cell_values = values[c * per_cell:(c + 1) * per_cell]  # iteration-index order
        mean, stderr, count = aggregate(cell_values)
        results.append(CellResult(sid, alpha, _heuristic_kind(sid), R, mean, stderr, count))
        if progress is not None:
            progress(results[-1])

    if cfg.trace_dir is not None:
        _dump_traces(cfg, cells)
    return results


def _dump_traces(cfg: ExperimentConfig, cells):
    out = Path(cfg.trace_dir)
    out.mkdir(parents=True, exist_ok=True)
    for sid, alpha, R in cells:
        trace = run_iteration(_iteration_config(cfg, sid, alpha, R, 0, record=True))
        write_trace(trace, out / f"trace_{_variant_name(sid, alpha)}_R{R}.csv")


def _variant_name(scheduler_id, alpha) -> str:
    if alpha is None:
        return scheduler_id
    return f"{scheduler_id}_alpha{_format_alpha(alpha)}"


def _format_alpha(alpha) -> str:
    if alpha is None:
        return ""
    return str(int(alpha)) if float(alpha).is_integer() else str(alpha)


def _sort_key(row: CellResult):
    return (row.scheduler_id, row.alpha is not None, row.alpha or 0.0, row.resilience_R)


RESULTS_HEADER = [
    "scheduler", "alpha", "heuristic", "N", "T", "D", "R",
    "n_slots", "n_iterations", "master_seed", "f_cst_mean", "f_cst_stderr",
]


def emit_results(table: list[CellResult], cfg: ExperimentConfig, path) -> None:
    """Write the sweep results as a sorted CSV, one row per cell."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for row in sorted(table, key=_sort_key):
            writer.writerow([
                row.scheduler_id,
                _format_alpha(row.alpha),
                row.heuristic_kind or "",
                cfg.n_agents, cfg.period_T, cfg.lifetime_D, row.resilience_R,
                cfg.n_slots, row.n_iterations, cfg.master_seed,
                repr(row.f_cst_mean), repr(row.f_cst_stderr),
            ])


def parse_results(path) -> list[CellResult]:
    """Read back a results file written by emit_results."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(CellResult(
                scheduler_id=rec["scheduler"],
                alpha=float(rec["alpha"]) if rec["alpha"] else None,
                heuristic_kind=rec["heuristic"] or None,
                resilience_R=int(rec["R"]),
                f_cst_mean=float(rec["f_cst_mean"]),
                f_cst_stderr=float(rec["f_cst_stderr"]),
                n_iterations=int(rec["n_iterations"]),
            ))
    return rows


def emit_plot_data(table: list[CellResult], out_dir) -> None:
    """One file per scheduler variant: columns R, f_cst_mean, f_cst_stderr.

    Ready for semilog-y plots of the steady-state violation rate against R.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    by_variant = {}
    for row in sorted(table, key=_sort_key):
        by_variant.setdefault((row.scheduler_id, row.alpha), []).append(row)
    for (sid, alpha), rows in by_variant.items():
        with open(out / f"{_variant_name(sid, alpha)}.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("R,f_cst_mean,f_cst_stderr\n")
            for r in rows:
                fh.write(f"{r.resilience_R},{r.f_cst_mean!r},{r.f_cst_stderr!r}\n")
