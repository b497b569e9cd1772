"""Seeded experiments over networks and algorithms, CSV records and statistics."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import stats

from .baselines import exhaustive_min, minimal_linkstate, minimal_subgraph
from .engine import GaConfig, run_ga
from .layout import build_layout, search_space_log10
from .netgraph import (GeneratorParams, Network, make_canonical, make_cascade,
                       make_random_acyclic, parse_network)

ALGORITHMS = ("ncga_bls", "ncga_bts", "ncga_mhd", "minimal1", "minimal2", "exhaustive")


@dataclass(frozen=True)
class NetworkSource:
    """Where a network comes from: a file, or a generator plus its arguments."""

    name: str
    kind: str
    args: dict = field(default_factory=dict)

    def build(self, base_dir: Path | None = None) -> Network:
        if self.kind == "file":
            path = Path(self.args["path"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            return parse_network(path.read_text(encoding="utf-8"))
        if self.kind == "canonical":
            return make_canonical(self.args["which"])
        if self.kind == "cascade":
            return make_cascade(int(self.args["copies"]))
        if self.kind == "random":
            return make_random_acyclic(GeneratorParams(**self.args))
        raise ValueError(f"unknown network source kind {self.kind!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkSource":
        d = dict(d)
        name = d.pop("name", None)
        if "file" in d:
            src = cls(name or Path(d["file"]).stem, "file", {"path": d["file"]})
        elif "canonical" in d:
            src = cls(name or d["canonical"], "canonical", {"which": d["canonical"]})
        elif "cascade" in d:
            src = cls(name or f"II-{d['cascade']}", "cascade", {"copies": d["cascade"]})
        elif "random" in d:
            src = cls(name or "random", "random", dict(d["random"]))
        else:
            raise ValueError(f"network entry needs file/canonical/cascade/random: {d}")
        return src


@dataclass
class ExperimentSpec:
    networks: list[NetworkSource]
    algorithms: list[str]
    runs: int = 30
    base_seed: int = 0
    ga_overrides: dict = field(default_factory=dict)
    records_path: str | None = None
    summary_path: str | None = None
    plot_path: str | None = None
    workers: int = 1
    base_dir: Path | None = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.algorithms:
            raise ValueError("no algorithms given")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithm(s) {sorted(unknown)}; choose from {ALGORITHMS}")
        if not self.networks:
            raise ValueError("no networks given")

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        """Read a JSON experiment file; relative paths resolve against its directory."""
        path = Path(path)
        raw = json.loads(path.read_text(encoding="utf-8"))
        out = raw.get("output", {})
        return cls(
            networks=[NetworkSource.from_dict(n) for n in raw["networks"]],
            algorithms=list(raw["algorithms"]),
            runs=int(raw.get("runs", 30)),
            base_seed=int(raw.get("base_seed", 0)),
            ga_overrides=dict(raw.get("ga", {})),
            records_path=out.get("records"),
            summary_path=out.get("summary"),
            plot_path=out.get("plot"),
            workers=int(raw.get("workers", 1)),
            base_dir=path.parent,
        )


@dataclass(frozen=True)
class RunRecord:
    network: str
    algorithm: str
    encoding: str
    run: int
    seed: int
    best_fitness: float
    best_after_sweep: float
    evaluations: int
    generations: int
    wallclock_ms: float


CSV_COLUMNS = tuple(f.name for f in fields(RunRecord))


@dataclass(frozen=True)
class SummaryRow:
    network: str
    algorithm: str
    mean: float
    std: float
    n: int
    mean_before_sweep: float
    std_before_sweep: float


def _value(fitness) -> float:
    return math.inf if fitness.coding_blocks is None else float(fitness.coding_blocks)


def run_one(network: Network, network_name: str, algorithm: str, run: int, seed: int,
            ga_overrides: dict | None = None) -> RunRecord:
    if algorithm.startswith("ncga_"):
        encoding = algorithm[len("ncga_"):]
        result = run_ga(network, GaConfig.defaults(encoding, seed=seed, **(ga_overrides or {})))
        return RunRecord(network_name, algorithm, encoding, run, seed,
                         _value(result.best_fitness), _value(result.best_fitness_after_sweep),
                         result.evaluations_used, result.generations_completed,
                         round(result.wallclock * 1000, 3))
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    if algorithm == "minimal1":
        res = minimal_subgraph(network, rng)
        count, evals = res.coding_link_count, res.evaluations
    elif algorithm == "minimal2":
        res = minimal_linkstate(network, rng)
        count, evals = res.coding_link_count, res.evaluations
    elif algorithm == "exhaustive":
        count, evals = exhaustive_min(network), 0
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    elapsed = round((time.perf_counter() - start) * 1000, 3)
    return RunRecord(network_name, algorithm, "", run, seed, float(count), float(count), evals, 0,
                     elapsed)


def _task(args):
    return run_one(*args)


class ExperimentResult(NamedTuple):
    records: list[RunRecord]
    summary: list[SummaryRow]
    plot: str


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    tasks = []
    spaces = {}
    for source in spec.networks:
        network = source.build(spec.base_dir)
        spaces[source.name] = search_space_log10(build_layout(network))[1]
        for algorithm in spec.algorithms:
            for run in range(spec.runs):
                tasks.append((network, source.name, algorithm, run, spec.base_seed + run,
                              spec.ga_overrides))
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            records = list(pool.map(_task, tasks))
    else:
        records = [_task(t) for t in tasks]
    summary, plot = summarize(records, spaces)
    return ExperimentResult(records, summary, plot)


def write_outputs(spec: ExperimentSpec, result: ExperimentResult) -> None:
    def target(p):
        p = Path(p)
        if spec.base_dir is not None and not p.is_absolute():
            p = spec.base_dir / p
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    if spec.records_path:
        target(spec.records_path).write_text(records_to_csv(result.records), encoding="utf-8")
    if spec.summary_path:
        target(spec.summary_path).write_text(summary_to_csv(result.summary), encoding="utf-8")
    if spec.plot_path:
        target(spec.plot_path).write_text(result.plot, encoding="utf-8")


# ---------------------------------------------------------------------------
# CSV


def _fmt(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return repr(int(v)) if v.is_integer() else repr(v)
    return str(v)


def records_to_csv(records, header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(RunRecord(
            row["network"], row["algorithm"], row["encoding"], int(row["run"]), int(row["seed"]),
            float(row["best_fitness"]), float(row["best_after_sweep"]), int(row["evaluations"]),
            int(row["generations"]), float(row["wallclock_ms"]),
        ))
    return out


def summary_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(SummaryRow)]
    writer.writerow(names)
    for r in rows:
        writer.writerow([_fmt(v) if not isinstance(v, float) else f"{v:.4f}"
                         for v in asdict(r).values()])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# statistics


def _mean_std(values) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    if values.size == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1))


def summarize(records, space_sizes: dict[str, float] | None = None) -> tuple[list[SummaryRow], str]:
    """Per (network, algorithm) mean/std, and plot data for the GA encodings.

    The plot text holds one block per encoding of ``log10(BTS space) mean``
    lines, separated by blank lines.
    """
    if not records:
        raise ValueError("no records")
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.network, r.algorithm), []).append(r)
    rows = []
    for (network, algorithm), rs in groups.items():
        mean, std = _mean_std([r.best_after_sweep for r in rs])
        mean_b, std_b = _mean_std([r.best_fitness for r in rs])
        rows.append(SummaryRow(network, algorithm, mean, std, len(rs), mean_b, std_b))

    blocks = []
    if space_sizes:
        for algorithm in ALGORITHMS[:3]:
            points = sorted((space_sizes[row.network], row.mean) for row in rows
                            if row.algorithm == algorithm and row.network in space_sizes)
            if points:
                lines = [f"# {algorithm}: log10_search_space mean_coding_links"]
                lines += [f"{x:.2f} {y:.4f}" for x, y in points]
                blocks.append("\n".join(lines))
    return rows, ("\n\n".join(blocks) + "\n") if blocks else ""


class TTestResult(NamedTuple):
    t: float
    df: int
    p: float


def paired_t_test(a, b) -> TTestResult:
    """Two-sided paired Student t-test on ``a - b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"sample lengths differ: {a.size} vs {b.size}")
    n = a.size
    if n < 2:
        raise ValueError("need at least two pairs")
    d = a - b
    mean, sd = d.mean(), d.std(ddof=1)
    df = n - 1
    if sd == 0:
        if mean == 0:
            return TTestResult(0.0, df, 1.0)
        return TTestResult(math.copysign(math.inf, mean), df, 0.0)
    t = float(mean * math.sqrt(n) / sd)
    return TTestResult(t, df, float(2 * stats.t.sf(abs(t), df)))
