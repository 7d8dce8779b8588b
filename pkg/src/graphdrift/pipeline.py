"""End-to-end drift pipeline: ingest, window, forests, transition, inference, report.

All randomness flows from one root seed, split deterministically per
stage; reports are plain JSON/CSV with a provenance block sufficient to
re-run them byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import (
    SimulationConfig,
    WindowedTensor,
    elec2_adapter,
    load_csv,
    load_schema,
    make_windows,
    simulate_appendix,
)
from .forest import AdjacencyMatrix, kruskal_max_forest, weight_matrix
from .inference import (
    Prior,
    SamplerConfig,
    build_design,
    coefficient_summary,
    map_estimate,
    posterior_predictive,
    sample_posterior,
)
from .mi import MiConfig
from .transition import (
    CONSECUTIVE,
    CUMULATIVE,
    build_stability_dataset,
    stability_fractions,
)

# deterministic sub-seed offsets, one per randomized stage
_SEED_SAMPLER = 1
_SEED_SIMULATOR = 2


class PipelineError(RuntimeError):
    """A pipeline stage failed; carries the stage name (and window when known)."""

    def __init__(self, stage: str, message: str, window: int | None = None):
        where = f"{stage}" + (f" (window {window})" if window is not None else "")
        super().__init__(f"{where}: {message}")
        self.stage = stage
        self.window = window


@dataclass(frozen=True)
class RunConfig:
    """Everything a drift run depends on; the seed is mandatory."""

    input: str = ""
    schema: str = ""                    # path to a JSON schema file
    window_len: int = 336
    criterion: str = "bic"
    mixed_mode: str = "homogeneous"
    stability_mode: str = CUMULATIVE
    encoding: str = "canonical"
    prior_sigma: float = 10.0
    draws: int = 4000
    burn_in: int = 1000
    step_scale: float | None = None
    seed: int = 0
    out: str = "out"
    adapter: str = "csv"                # 'csv' | 'elec2'
    columns: tuple[str, ...] = ()       # elec2 adapter column selection
    row_range: tuple[int, int] | None = None
    has_header: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if "columns" in d and d["columns"] is not None:
            d["columns"] = tuple(d["columns"])
        if "row_range" in d and d["row_range"] is not None:
            d["row_range"] = tuple(d["row_range"])
        return cls(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["columns"] = list(self.columns)
        d["row_range"] = list(self.row_range) if self.row_range else None
        return d

    def validate(self) -> None:
        MiConfig(criterion=self.criterion, mixed_mode=self.mixed_mode)
        if self.stability_mode not in (CUMULATIVE, CONSECUTIVE):
            raise ValueError(f"unknown stability mode {self.stability_mode!r}")
        if self.encoding not in ("canonical", "full_dummies"):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.prior_sigma <= 0:
            raise ValueError("prior_sigma must be positive")
        if self.adapter not in ("csv", "elec2"):
            raise ValueError(f"unknown adapter {self.adapter!r}")


@dataclass
class DriftReport:
    """Machine-readable run output; `provenance` is enough to reproduce it."""

    provenance: dict
    forests: list[dict]
    stability: dict
    coefficients: list[dict]
    curve: list[dict]
    flags: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "forests": self.forests,
            "stability": self.stability,
            "coefficients": self.coefficients,
            "curve": self.curve,
            "flags": self.flags,
        }


def _provenance(cfg: RunConfig, extra: dict | None = None) -> dict:
    echo = cfg.to_dict()
    echo.pop("out")  # output location is not an analysis input
    block = {
        "config": echo,
        "package": "graphdrift",
        "version": __version__,
        "numpy": np.__version__,
        "seed": cfg.seed,
    }
    if extra:
        block.update(extra)
    return block


def ingest(cfg: RunConfig) -> WindowedTensor:
    try:
        if cfg.adapter == "elec2":
            columns = cfg.columns or None
            kwargs = {"window_len": cfg.window_len, "row_range": cfg.row_range}
            if columns:
                kwargs["selected_columns"] = columns
            return elec2_adapter(cfg.input, **kwargs)
        schema = load_schema(cfg.schema)
        table = load_csv(cfg.input, schema, has_header=cfg.has_header)
        if cfg.row_range is not None:
            start, stop = cfg.row_range
            table = type(table)(schema=table.schema, values=table.values[start:stop])
        return make_windows(table, cfg.window_len)
    except (OSError, ValueError) as exc:
        raise PipelineError("ingest", str(exc)) from exc


def estimate_forests(tensor: WindowedTensor, cfg: RunConfig) -> list[AdjacencyMatrix]:
    mi_cfg = MiConfig(criterion=cfg.criterion, mixed_mode=cfg.mixed_mode)
    ams = []
    for t, window in enumerate(tensor.windows, start=1):
        try:
            g = weight_matrix(window, list(tensor.schema), mi_cfg)
            ams.append(kruskal_max_forest(g, window_index=t))
        except ValueError as exc:
            raise PipelineError("forest", str(exc), window=t) from exc
    return ams


def infer_stability(ams: list[AdjacencyMatrix], cfg: RunConfig):
    """Transition + inference stages shared by every entry point."""
    try:
        sdataset = build_stability_dataset(ams, mode=cfg.stability_mode)
        fractions = stability_fractions(sdataset)
    except ValueError as exc:
        raise PipelineError("transition", str(exc)) from exc
    try:
        design = build_design(sdataset, encoding=cfg.encoding)
        prior = Prior.flat(design.k, sigma=cfg.prior_sigma)
        sampler_cfg = SamplerConfig(draws=cfg.draws, burn_in=cfg.burn_in,
                                    step_scale=cfg.step_scale,
                                    seed=cfg.seed + _SEED_SAMPLER)
        draws = sample_posterior(design.x, design.y, prior, sampler_cfg,
                                 labels=design.labels)
        curve = posterior_predictive(draws, design)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise PipelineError("inference", str(exc)) from exc
    return sdataset, fractions, draws, curve, design


def run_drift(cfg: RunConfig, tensor: WindowedTensor | None = None,
              forests: list[AdjacencyMatrix] | None = None) -> DriftReport:
    """The full pipeline; `forests` short-circuits ingest and MI estimation."""
    cfg.validate()
    if forests is None:
        if tensor is None:
            tensor = ingest(cfg)
        forests = estimate_forests(tensor, cfg)
    sdataset, fractions, draws, curve, design = infer_stability(forests, cfg)
    flags = list(design.warnings) + list(draws.flags)
    report = DriftReport(
        provenance=_provenance(cfg),
        forests=[am.to_json_dict() for am in forests],
        stability={
            "mode": sdataset.mode,
            "n_records": len(sdataset.records),
            "n_pairs": sdataset.n_pairs,
            "fractions": [{"t": t, "mu": mu} for t, mu in fractions.items()],
        },
        coefficients=coefficient_summary(draws),
        curve=[{"t": p.t, "mean": p.mean, "lower": p.lower, "upper": p.upper,
                "observed": p.observed} for p in curve.points],
        flags=flags,
    )
    return report


def run_simulation(sim: SimulationConfig, cfg: RunConfig) -> dict:
    """Generate the 8-period synthetic study and run both stability modes."""
    cfg.validate()
    tensor = simulate_appendix(SimulationConfig(
        n_per_period=sim.n_per_period, seed=sim.seed + _SEED_SIMULATOR))
    forests = estimate_forests(tensor, cfg)
    reports = {}
    for mode in (CUMULATIVE, CONSECUTIVE):
        reports[mode] = run_drift(replace(cfg, stability_mode=mode), forests=forests)
    return {
        "provenance": _provenance(cfg, {"simulation": {
            "n_per_period": sim.n_per_period, "seed": sim.seed}}),
        "modes": {mode: rep.to_json_dict() for mode, rep in reports.items()},
    }


def ols_mse_baseline(tensor: WindowedTensor, target: str) -> dict:
    """OLS of the target on all other variables, fit on window 1 only.

    Singular normal equations fall back to a fixed 1e-8 ridge and are
    flagged; the MSE is then evaluated on every window.
    """
    names = [s.name for s in tensor.schema]
    if target not in names:
        raise PipelineError("mse", f"unknown target column {target!r}")
    tgt = names.index(target)
    if tensor.schema[tgt].kind != "continuous":
        raise PipelineError("mse", f"target {target!r} must be continuous")
    others = [c for c in range(tensor.p) if c != tgt]

    w1 = tensor.windows[0]
    x1 = np.column_stack([np.ones(len(w1)), w1[:, others]])
    yv = w1[:, tgt]
    xtx = x1.T @ x1
    flagged = False
    try:
        beta = np.linalg.solve(xtx, x1.T @ yv)
    except np.linalg.LinAlgError:
        beta = np.linalg.solve(xtx + 1e-8 * np.eye(xtx.shape[0]), x1.T @ yv)
        flagged = True
    if not flagged and np.linalg.cond(xtx) > 1e14:
        beta = np.linalg.solve(xtx + 1e-8 * np.eye(xtx.shape[0]), x1.T @ yv)
        flagged = True

    series = []
    for t, window in enumerate(tensor.windows, start=1):
        xw = np.column_stack([np.ones(len(window)), window[:, others]])
        resid = window[:, tgt] - xw @ beta
        series.append({"t": t, "mse": float(np.mean(resid ** 2))})
    return {"target": target, "ridge_fallback": flagged, "series": series}


# ---------------------------------------------------------------- output files

def write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report_files(report: DriftReport, out_dir: str | Path,
                       suffix: str = "") -> None:
    out = Path(out_dir)
    tag = f"_{suffix}" if suffix else ""
    write_json(out / f"report{tag}.json", report.to_json_dict())
    write_json(out / f"forests{tag}.json", {"forests": report.forests})
    write_csv(out / f"stability_fractions{tag}.csv", ["t", "mu"],
              [[row["t"], row["mu"]] for row in report.stability["fractions"]])
    write_csv(out / f"stability_curve{tag}.csv",
              ["t", "mean", "lower", "upper", "observed"],
              [[p["t"], p["mean"], p["lower"], p["upper"], p["observed"]]
               for p in report.curve])
    write_csv(out / f"coefficients{tag}.csv",
              ["label", "mean", "sd", "q025", "q975"],
              [[c["label"], c["mean"], c["sd"], c["q025"], c["q975"]]
               for c in report.coefficients])


def load_forests(path: str | Path) -> list[AdjacencyMatrix]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return [AdjacencyMatrix.from_json_dict(d) for d in payload["forests"]]
