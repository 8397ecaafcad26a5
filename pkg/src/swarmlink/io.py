"""Scenario file parsing and bit-exact emitters for time series, summaries,
and the four summary plots.

Scenario files are JSON key-value trees; every field has the experiment
default, so a minimal file (or a bare preset name) runs the full setup.
All emitters produce byte-identical output for identical inputs.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .config import (
    ConfigError,
    GaParams,
    GroundMode,
    GroundWeights,
    PRESETS,
    ScenarioConfig,
    UavFormation,
    validate_config,
)
from .core import EnvBounds
from .engine import SweepResult
from .metrics import MetricsRecord, TimelineSummary

TIMESERIES_HEADER = "step,coverage,components,top1,top2,top3"


class EmitError(RuntimeError):
    """I/O failure while writing an artifact; message carries the path."""


def _build_section(cls, data: dict, prefix: str, converters: dict | None = None):
    converters = converters or {}
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"{prefix}{key}", "unknown key")
        conv = converters.get(key)
        try:
            kwargs[key] = conv(value) if conv else value
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{prefix}{key}", str(exc)) from exc
    return dataclasses.replace(cls(), **kwargs)


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build and validate a config; unknown keys are rejected by name."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "scenario must be a key-value object")
    data = dict(data)
    preset = data.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}")
        base = PRESETS[preset]()
    else:
        base = ScenarioConfig()

    top_fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    kwargs = {}
    for key, value in data.items():
        if key not in top_fields:
            raise ConfigError(key, "unknown key")
        try:
            if key == "env":
                kwargs[key] = _build_section(EnvBounds, value, "env.")
            elif key == "ground_weights":
                kwargs[key] = _build_section(GroundWeights, value, "ground_weights.")
            elif key == "ga":
                kwargs[key] = _build_section(GaParams, value, "ga.")
            elif key == "ground_mode":
                kwargs[key] = GroundMode(value)
            elif key == "uav_formation":
                kwargs[key] = UavFormation(value)
            else:
                kwargs[key] = value
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, str(exc)) from exc
    cfg = dataclasses.replace(base, **kwargs)
    return validate_config(cfg)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "env": {"width": cfg.env.width, "height": cfg.env.height},
        "ground_count": cfg.ground_count,
        "uav_count": cfg.uav_count,
        "total_steps": cfg.total_steps,
        "ground_mode": cfg.ground_mode.value,
        "ground_weights": dataclasses.asdict(cfg.ground_weights),
        "vision_distance": cfg.vision_distance,
        "vision_angle_deg": cfg.vision_angle_deg,
        "comm_range": cfg.comm_range,
        "ground_safe_distance": cfg.ground_safe_distance,
        "ground_max_speed": cfg.ground_max_speed,
        "uav_safe_distance": cfg.uav_safe_distance,
        "uav_formation": cfg.uav_formation.value,
        "uav_square_side": cfg.uav_square_side,
        "ga": dataclasses.asdict(cfg.ga),
        "ga_enabled": cfg.ga_enabled,
        "seed": cfg.seed,
    }


def parse_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise EmitError(f"cannot read scenario {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def emit_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    _write_text(Path(path), json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n")


def emit_timeseries(records: list[MetricsRecord], path: str | Path) -> None:
    """CSV with the pinned header, one integer row per step, LF endings."""
    if not records:
        raise ValueError("no records to emit")
    lines = [TIMESERIES_HEADER]
    for r in records:
        lines.append(
            f"{r.step},{r.coverage},{r.component_count},"
            f"{r.top_sizes[0]},{r.top_sizes[1]},{r.top_sizes[2]}"
        )
    _write_text(Path(path), "\n".join(lines) + "\n")


def parse_timeseries(path: str | Path) -> list[MetricsRecord]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise EmitError(f"cannot read timeseries {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0] != TIMESERIES_HEADER:
        raise ValueError(f"{path}: bad or missing header")
    records = []
    for line in lines[1:]:
        step, cov, comp, t1, t2, t3 = (int(v) for v in line.split(","))
        records.append(MetricsRecord(step, cov, comp, (t1, t2, t3)))
    return records


def summary_to_dict(summary: TimelineSummary) -> dict:
    return {
        "steps": summary.steps,
        "component_count_freq": {str(k): v for k, v in summary.component_count_freq.items()},
        "largest_size_freq": {str(k): v for k, v in summary.largest_size_freq.items()},
        "frac_count_one": summary.frac_count_one,
        "frac_largest_at_least": {str(k): v for k, v in summary.frac_largest_at_least.items()},
    }


def emit_summary(
    summary: TimelineSummary,
    path: str | Path,
    scenario_id: str = "",
    seed: int | None = None,
) -> None:
    """Single-run summary as deterministic JSON (stable key order)."""
    payload = {"scenario": scenario_id, "seed": seed, **summary_to_dict(summary)}
    _write_text(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def emit_sweep_summary(result: SweepResult, path: str | Path, scenario_id: str = "") -> None:
    """Per-seed summaries plus the best-run marker, deterministic bytes."""
    payload = {
        "scenario": scenario_id,
        "runs": [
            {"seed": seed, **summary_to_dict(summary)}
            for seed, summary in zip(result.seeds, result.summaries)
        ],
        "best_seed": result.best_seed,
        "best_frac_count_one": result.best_frac_count_one,
    }
    _write_text(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc}") from exc


def emit_plots(records: list[MetricsRecord], out_dir: str | Path, stem: str = "run") -> list[Path]:
    """Four SVG summary plots; byte-identical across reruns."""
    if not records:
        raise ValueError("no records to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "swarmlink"

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise EmitError(f"cannot create {out_dir}: {exc}") from exc

    from .metrics import timeline_summaries

    summary = timeline_summaries(records)
    steps = [r.step for r in records]
    paths = []

    def save(fig, name: str) -> None:
        path = out_dir / f"{stem}_{name}.svg"
        try:
            fig.savefig(path, metadata={"Date": None})
        except OSError as exc:
            raise EmitError(f"cannot write {path}: {exc}") from exc
        finally:
            plt.close(fig)
        paths.append(path)

    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(steps, [r.component_count for r in records], lw=0.6)
    ax.set_xlabel("step")
    ax.set_ylabel("connected components")
    ax.set_title("Ground connectivity over time")
    fig.tight_layout()
    save(fig, "connectivity_timeline")

    fig, ax = plt.subplots(figsize=(6, 3))
    counts = sorted(summary.component_count_freq)
    ax.bar(counts, [100.0 * summary.component_count_freq[c] for c in counts])
    ax.set_xlabel("connected components")
    ax.set_ylabel("% of steps")
    ax.set_title("Connectivity frequency")
    fig.tight_layout()
    save(fig, "connectivity_frequency")

    fig, ax = plt.subplots(figsize=(8, 3))
    for rank in range(3):
        ax.plot(steps, [r.top_sizes[rank] for r in records], lw=0.6, label=f"top {rank + 1}")
    ax.set_xlabel("step")
    ax.set_ylabel("agents in component")
    ax.set_title("Three largest components over time")
    ax.legend(loc="center right")
    fig.tight_layout()
    save(fig, "top_components_timeline")

    fig, ax = plt.subplots(figsize=(6, 3))
    sizes = sorted(summary.largest_size_freq)
    ax.bar(sizes, [100.0 * summary.largest_size_freq[s] for s in sizes])
    ax.set_xlabel("agents in largest component")
    ax.set_ylabel("% of steps")
    ax.set_title("Largest-component time fractions")
    fig.tight_layout()
    save(fig, "largest_component_fractions")

    return paths
