"""Experiment runner: canned reproductions, report files, manifests.

Every experiment writes its data files (CSV/JSON, meant for external
plotting) plus a manifest.json that echoes the full configuration, the RNG
algorithm and seed where one is used, and a sha256 digest of every output
file.  Nothing in the outputs depends on wall-clock time, so a rerun with
the same configuration is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .dynamics import (
    Backend,
    FixedBackend,
    TentParams,
    backend_from_label,
    detect_cycle,
    error_accumulation,
    format_value,
    iterate,
    sine_cycle_search,
)
from .fixedbin import PrecisionSpec, parse_decimal, to_decimal_string
from .histogram import Histogram, build_histogram, uniformity_metrics
from .preimage import (
    DEFAULT_CAP_BITS,
    backward_random_walk,
    forward_consistency_check,
    integer_basin_forest,
)
from .rng import SplitMix64
from .sweep import grid_orbit_stats

__all__ = [
    "ExperimentConfig",
    "EXPERIMENTS",
    "run_experiment",
    "emit_report",
    "orbit_files",
    "walk_files",
    "histogram_files",
    "basin_files",
    "errsum_files",
]

DEFAULT_SEED = 1
DEFAULT_BINS = 20


@dataclass
class ExperimentConfig:
    """Echoed into every manifest; holds what a rerun needs."""

    experiment: str
    bound: str = "100"
    slope: str = "2"
    x0: Optional[str] = None
    backend: Optional[str] = None
    steps: int = 1000
    bins: int = DEFAULT_BINS
    seed: int = DEFAULT_SEED
    cap_bits: int = DEFAULT_CAP_BITS
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError("bins must be >= 2")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    def to_json_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "N": self.bound,
            "a": self.slope,
            "steps": self.steps,
            "bins": self.bins,
            "seed": self.seed,
            "cap_bits": self.cap_bits,
        }
        if self.x0 is not None:
            d["x0"] = self.x0
        if self.backend is not None:
            d["backend"] = self.backend
        d.update(self.extra)
        return d

    @property
    def params(self) -> TentParams:
        return TentParams(bound=parse_decimal(self.bound),
                          slope=parse_decimal(self.slope))


def emit_report(out_dir, files: dict, manifest: dict) -> Path:
    """Write data files plus manifest.json; digest every file into the manifest.

    Returns the manifest path.  Raises OSError upward; the CLI maps that to
    a runtime-failure exit status.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name, content in sorted(files.items()):
        data = content.encode() if isinstance(content, str) else content
        (out / name).write_bytes(data)
        digests[name] = {
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        }
    manifest = dict(manifest)
    manifest["outputs"] = digests
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _trajectory_csv(traj, backend: Backend) -> str:
    if isinstance(backend, FixedBackend):
        rows = ((t, to_decimal_string(s), s.bits) for t, s in enumerate(traj))
        return _csv("step,value,bits", rows)
    rows = ((t, format_value(backend.label, backend.to_fraction(s)))
            for t, s in enumerate(traj))
    return _csv("step,value", rows)


def _histogram_csv(h: Histogram) -> str:
    return _csv("bin_lo,bin_hi,count", h.csv_rows())


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Building blocks shared by the CLI subcommands and the canned experiments
# ---------------------------------------------------------------------------

def orbit_files(cfg: ExperimentConfig) -> tuple[dict, dict]:
    backend = backend_from_label(cfg.backend)
    result = detect_cycle(cfg.x0, cfg.params, backend, cfg.steps)
    files = {"orbit.json": _dump(result.to_json_dict())}
    summary = {"orbit": result.to_json_dict()}
    return files, summary


def iterate_files(cfg: ExperimentConfig) -> tuple[dict, dict]:
    backend = backend_from_label(cfg.backend)
    traj = iterate(cfg.x0, cfg.params, backend, cfg.steps)
    files = {"trajectory.csv": _trajectory_csv(traj, backend)}
    summary = {"final_value": format_value(backend.label,
                                           backend.to_fraction(traj[-1]))}
    return files, summary


def walk_files(cfg: ExperimentConfig) -> tuple[dict, dict]:
    walk = backward_random_walk(parse_decimal(cfg.x0), cfg.steps, cfg.seed,
                                cfg.params, cfg.cap_bits)
    files = {"walk.csv": _csv("step,value,choice", walk.csv_rows())}
    summary = {
        "rng": {"algorithm": SplitMix64.algorithm, "seed": cfg.seed},
        "truncated_from": walk.truncated_from,
        "final_value_is_integer": walk.values[-1].denominator == 1,
    }
    return files, summary


def histogram_files(cfg: ExperimentConfig, values=None) -> tuple[dict, dict]:
    """Histogram of backward-walk values (or of explicitly provided values)."""
    summary: dict = {}
    if values is None:
        walk = backward_random_walk(parse_decimal(cfg.x0), cfg.steps, cfg.seed,
                                    cfg.params, cfg.cap_bits)
        values = walk.values
        summary["rng"] = {"algorithm": SplitMix64.algorithm, "seed": cfg.seed}
        summary["truncated_from"] = walk.truncated_from
    h = build_histogram(values, parse_decimal(cfg.bound), cfg.bins)
    summary["uniformity"] = uniformity_metrics(h)
    summary["samples"] = h.total
    return {"histogram.csv": _histogram_csv(h)}, summary


def basin_files(cfg: ExperimentConfig) -> tuple[dict, dict]:
    """All integer cycles of the map on [0, N] with their preimage forests."""
    bound = parse_decimal(cfg.bound)
    if bound.denominator != 1:
        raise ValueError("basin forests need an integer domain bound")
    n = bound.numerator
    stats = grid_orbit_stats(n, 0)
    cycles = []
    for mn in sorted(set(int(m) for m in stats.cycle_min)):
        forest = integer_basin_forest(_cycle_from(mn, n), n)
        cycles.append(forest)
    files = {}
    cycle_records = []
    all_nodes: list[set] = []
    for forest in cycles:
        mn = min(forest.cycle)
        files[f"edges_{mn}.csv"] = _csv("parent,child,depth", forest.edge_rows())
        files[f"tree_{mn}.txt"] = forest.render_text() + "\n"
        cycle_records.append({
            "cycle": list(forest.cycle),
            "nodes": len(forest.nodes),
            "edges_file": f"edges_{mn}.csv",
        })
        all_nodes.append(forest.nodes)
    union = set().union(*all_nodes)
    disjoint = len(union) == sum(len(s) for s in all_nodes)
    files["cycles.json"] = _dump(cycle_records)
    summary = {
        "cycles": cycle_records,
        "basins_disjoint": disjoint,
        "integers_covered": len(union),
    }
    return files, summary


def _cycle_from(start: int, n: int) -> list[int]:
    cyc = [start]
    v = 2 * start if 2 * start < n else 2 * (n - start)
    while v != start:
        cyc.append(v)
        v = 2 * v if 2 * v < n else 2 * (n - v)
    return cyc


def errsum_files(cfg: ExperimentConfig) -> tuple[dict, dict]:
    backend = backend_from_label(cfg.backend)
    series = error_accumulation(cfg.x0, cfg.params, backend, cfg.steps)
    files = {"errsum.csv": _csv("t,E_t", series.csv_rows())}
    summary = {"E_final": float(series.final)}
    return files, summary


# ---------------------------------------------------------------------------
# Canned experiments
# ---------------------------------------------------------------------------

def _run_five_bit_table(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="five-bit-table", bound="1", x0="0.4",
                           backend="fixed:1,4", steps=8)
    backend = backend_from_label(cfg.backend)
    traj = iterate(cfg.x0, cfg.params, backend, cfg.steps)
    files = {"trajectory.csv": _trajectory_csv(traj, backend)}
    orbit = detect_cycle(cfg.x0, cfg.params, backend, 64)
    files["orbit.json"] = _dump(orbit.to_json_dict())
    manifest = {
        "config": cfg.to_json_dict(),
        "results": {
            "decimal_trajectory": [to_decimal_string(s) for s in traj],
            "orbit": orbit.to_json_dict(),
        },
        "errata": [{
            "id": "five-bit-extra-row",
            "detail": "a published rendition of this trajectory inserts an "
                      "extra value 0.25 between 0.75 and 0.5; the doubling "
                      "rule applied to 0.75 forces 2*(1 - 0.75) = 0.5 in one "
                      "step, so the inserted row is an erratum",
        }],
    }
    return emit_report(out_dir, files, manifest)


def _run_n100_orbits(out_dir) -> Path:
    runs = [("67.2", "f32"), ("4.23828125", "f64"), ("12.5", "f64")]
    params = TentParams(bound=Fraction(100))
    files = {}
    reports = []
    for x0, label in runs:
        backend = backend_from_label(label)
        report = detect_cycle(x0, params, backend, 1_000_000)
        reports.append(report.to_json_dict())
    files["orbits.json"] = _dump(reports)
    cfg = ExperimentConfig(experiment="n100-orbits", bound="100", steps=1_000_000,
                           extra={"runs": [{"x0": x, "backend": b}
                                           for x, b in runs]})
    manifest = {"config": cfg.to_json_dict(), "results": {"orbits": reports}}
    return emit_report(out_dir, files, manifest)


def _run_basin_forests(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="basin-forests", bound="100")
    files, summary = basin_files(cfg)
    return emit_report(out_dir, files,
                       {"config": cfg.to_json_dict(), "results": summary})


def _run_preimage_histogram(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="preimage-histogram", bound="100",
                           x0="67.2", steps=60_000, bins=DEFAULT_BINS,
                           seed=DEFAULT_SEED)
    walk = backward_random_walk(parse_decimal(cfg.x0), cfg.steps, cfg.seed,
                                cfg.params, cfg.cap_bits)
    h = build_histogram(walk.values, cfg.params.bound, cfg.bins)
    sub_walk = backward_random_walk(parse_decimal(cfg.x0), 40, cfg.seed,
                                    cfg.params, cfg.cap_bits)
    consistency = forward_consistency_check(sub_walk, PrecisionSpec.for_domain(100, 20))
    files = {
        "walk.csv": _csv("step,value,choice", walk.csv_rows()),
        "histogram.csv": _histogram_csv(h),
        "consistency.json": _dump({
            "sub_walk_steps": 40,
            "reproduced_exactly": consistency.reproduced_exactly,
            "first_divergence_step": consistency.first_divergence_step,
            "forward_result": consistency.forward_result.to_json_dict(),
        }),
    }
    manifest = {
        "config": cfg.to_json_dict(),
        "rng": {"algorithm": SplitMix64.algorithm, "seed": cfg.seed},
        "results": {
            "uniformity": uniformity_metrics(h),
            "truncated_from": walk.truncated_from,
            "final_value_is_integer": walk.values[-1].denominator == 1,
            "forward_consistency": {
                "reproduced_exactly": consistency.reproduced_exactly,
                "even_cycle": consistency.even_cycle,
            },
        },
    }
    return emit_report(out_dir, files, manifest)


def _run_noninteger_n(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="noninteger-N", bound="100.0001",
                           x0="67.2", backend="f64", steps=60_000)
    backend = backend_from_label(cfg.backend)
    traj = iterate(cfg.x0, cfg.params, backend, cfg.steps)
    # bin over the represented bound: trajectory values never exceed it
    bin_bound = Fraction(backend.represent(cfg.params.bound))
    h = build_histogram((Fraction(v) for v in traj), bin_bound, cfg.bins)
    probe = detect_cycle(cfg.x0, cfg.params, backend, cfg.steps)
    files = {
        "trajectory.csv": _trajectory_csv(traj, backend),
        "histogram.csv": _histogram_csv(h),
        "cycle_probe.json": _dump(probe.to_json_dict()),
    }
    manifest = {
        "config": cfg.to_json_dict(),
        "results": {
            "uniformity": uniformity_metrics(h),
            "represented_bound": repr(float(bin_bound)),
            "cycle_probe": probe.to_json_dict(),
        },
    }
    return emit_report(out_dir, files, manifest)


def _run_error_sum(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="error-sum", bound="1", x0="0.4",
                           backend="fixed:1,4", steps=1000)
    files, summary = errsum_files(cfg)
    return emit_report(out_dir, files,
                       {"config": cfg.to_json_dict(), "results": summary})


def _run_sine_cycle(out_dir) -> Path:
    cfg = ExperimentConfig(experiment="sine-cycle", bound="1", x0="0.4",
                           backend="f64", steps=10_000_000)
    result = sine_cycle_search(0.4, cfg.steps)
    files = {"sine_cycle.json": _dump(result.to_json_dict())}
    manifest = {
        "config": cfg.to_json_dict(),
        "results": {"outcome": result.to_json_dict()},
    }
    return emit_report(out_dir, files, manifest)


EXPERIMENTS = {
    "five-bit-table": _run_five_bit_table,
    "n100-orbits": _run_n100_orbits,
    "basin-forests": _run_basin_forests,
    "preimage-histogram": _run_preimage_histogram,
    "noninteger-N": _run_noninteger_n,
    "error-sum": _run_error_sum,
    "sine-cycle": _run_sine_cycle,
}


def run_experiment(experiment_id: str, out_dir) -> Path:
    """Run one canned experiment; returns the manifest path."""
    try:
        runner = EXPERIMENTS[experiment_id]
    except KeyError:
        raise ValueError(
            f"unknown experiment {experiment_id!r}; "
            f"known: {', '.join(sorted(EXPERIMENTS))}"
        )
    return runner(out_dir)
