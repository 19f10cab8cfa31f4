"""Benchmark protocol: exact ground truth once, then a budget sweep with
seeded repetitions per estimator, aggregated into error curves.

The (method, budget, repetition) grid runs on a thread pool; records are
canonically sorted before anything is written so the worker count never
changes emitted files.
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .baselines import BaselineConfig, kernelshap, permutation_sampling, stratified_sampling
from .estimator import EstimateResult, EstimatorConfig, run_svakadd
from .exact import exact_shapley, mse
from .games import Game
from .wls import SolverOptions

# Estimators the harness can run itself.  "stratified_svarm" is reserved in
# the schema so externally produced curves can be merged into plots, but no
# implementation ships here.
METHODS = ("svakadd", "permutation", "stratified", "kernelshap")
RESERVED_METHODS = ("stratified_svarm",)

RECORD_HEADER = "method,k,budget,repetition,mse,evaluations,wall_ms,flags"
AGGREGATE_HEADER = "method,k,budget,mean_mse,stderr_mse,median_mse,reps"


@dataclass(frozen=True)
class BenchmarkRecord:
    method: str
    k: int
    budget: int
    repetition: int
    mse: float
    evaluations: int
    wall_ms: float
    underdetermined: bool

    @property
    def flags(self) -> str:
        return "underdetermined" if self.underdetermined else ""

    def sort_key(self):
        return (self.method, self.k, self.budget, self.repetition)


@dataclass(frozen=True)
class AggregateRecord:
    method: str
    k: int
    budget: int
    mean_mse: float
    stderr_mse: float
    median_mse: float
    reps: int

    @property
    def label(self) -> str:
        if self.method in ("svakadd", "kernelshap"):
            return f"{self.method}-k{self.k}"
        return self.method


@dataclass
class BenchmarkPlan:
    game: Game
    methods: list[tuple[str, int]]
    budgets: list[int]
    repetitions: int = 100
    seed_base: int = 0
    solver: SolverOptions = field(default_factory=SolverOptions)
    workers: int = 1

    def validate(self) -> None:
        n = self.game.n
        if not self.methods:
            raise ValueError("benchmark plan needs at least one method")
        for method, k in self.methods:
            if method not in METHODS:
                raise ValueError(f"unknown method {method!r}")
            if method == "svakadd" and not 1 <= k <= n:
                raise ValueError(f"svakadd degree k={k} out of range for n={n}")
        if not self.budgets:
            raise ValueError("benchmark plan needs at least one budget")
        if sorted(self.budgets) != list(self.budgets):
            raise ValueError("budgets must be ascending")
        if len(set(self.budgets)) != len(self.budgets):
            raise ValueError("budgets must be distinct")
        if self.budgets[-1] > (1 << n):
            raise ValueError(f"budget {self.budgets[-1]} exceeds 2^{n}")
        if self.budgets[0] < 2:
            raise ValueError("budgets must be at least 2")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def method_degree(method: str, k: int | None) -> int:
    """Surrogate degree recorded per method: kernelshap is degree 1, the
    mean-estimate baselines carry 0 (no surrogate)."""
    if method == "svakadd":
        return 3 if k is None else k
    if method == "kernelshap":
        return 1
    return 0


def run_single(
    game: Game, method: str, k: int, budget: int, seed: int, solver: SolverOptions
) -> EstimateResult:
    """Dispatch one estimator run."""
    if method == "svakadd":
        return run_svakadd(game, EstimatorConfig(k=k, budget=budget, seed=seed, solver=solver))
    cfg = BaselineConfig(method=method, budget=budget, seed=seed, solver=solver)
    if method == "permutation":
        return permutation_sampling(game, cfg)
    if method == "stratified":
        return stratified_sampling(game, cfg)
    if method == "kernelshap":
        return kernelshap(game, cfg)
    raise ValueError(f"unknown method {method!r}")


def run_benchmark(
    plan: BenchmarkPlan,
) -> tuple[list[BenchmarkRecord], list[AggregateRecord], np.ndarray]:
    """Execute the full grid; returns (records, aggregates, exact values).

    Ground truth is computed exactly once up front (2^n evaluations); the
    estimator runs only ever read the game through its cache and cannot
    perturb the truth.  Each repetition r uses seed seed_base + r.
    """
    plan.validate()
    truth = exact_shapley(plan.game)

    tasks = [
        (method, k, budget, rep)
        for method, k in plan.methods
        for budget in plan.budgets
        for rep in range(plan.repetitions)
    ]

    def execute(task: tuple[str, int, int, int]) -> BenchmarkRecord:
        method, k, budget, rep = task
        start = time.perf_counter()
        result = run_single(
            plan.game, method, k, budget, plan.seed_base + rep, plan.solver
        )
        wall_ms = (time.perf_counter() - start) * 1e3
        return BenchmarkRecord(
            method=method,
            k=k,
            budget=budget,
            repetition=rep,
            mse=mse(result.estimates, truth),
            evaluations=result.evaluations,
            wall_ms=wall_ms,
            underdetermined=result.underdetermined,
        )

    if plan.workers == 1:
        records = [execute(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            records = list(pool.map(execute, tasks))
    records.sort(key=BenchmarkRecord.sort_key)
    return records, aggregate(records), truth


def aggregate(records: Iterable[BenchmarkRecord]) -> list[AggregateRecord]:
    """Mean / standard error / median of MSE per curve point.

    Underdetermined runs are excluded: curves begin at the first budget
    where the fit is identified, matching how the error curves are read.
    A point whose repetitions were all underdetermined gets no aggregate.
    """
    groups: dict[tuple[str, int, int], list[float]] = {}
    for rec in records:
        if rec.underdetermined:
            continue
        groups.setdefault((rec.method, rec.k, rec.budget), []).append(rec.mse)
    out = []
    for (method, k, budget), errors in sorted(groups.items()):
        mean = statistics.fmean(errors)
        stderr = (
            statistics.stdev(errors) / len(errors) ** 0.5 if len(errors) > 1 else 0.0
        )
        out.append(
            AggregateRecord(
                method=method,
                k=k,
                budget=budget,
                mean_mse=mean,
                stderr_mse=stderr,
                median_mse=statistics.median(errors),
                reps=len(errors),
            )
        )
    return out


def emit_csv(
    records: Sequence[BenchmarkRecord], path: str | Path, include_timing: bool = False
) -> None:
    """Long-format records CSV, one row per estimator run.

    Wall times are measurement noise, so by default the wall_ms column is
    written as 0 to keep repeated benchmark runs byte-identical; pass
    ``include_timing=True`` to keep the measured values.
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(RECORD_HEADER + "\n")
        for rec in records:
            wall = f"{rec.wall_ms:.3f}" if include_timing else "0"
            f.write(
                f"{rec.method},{rec.k},{rec.budget},{rec.repetition},"
                f"{rec.mse!r},{rec.evaluations},{wall},{rec.flags}\n"
            )


def emit_aggregates_csv(aggregates: Sequence[AggregateRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(AGGREGATE_HEADER + "\n")
        for agg in aggregates:
            f.write(
                f"{agg.method},{agg.k},{agg.budget},{agg.mean_mse!r},"
                f"{agg.stderr_mse!r},{agg.median_mse!r},{agg.reps}\n"
            )


def parse_records_csv(path: str | Path) -> list[BenchmarkRecord]:
    """Inverse of ``emit_csv`` (timing column is read back verbatim)."""
    out = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != RECORD_HEADER.split(","):
            raise ValueError(f"{path}: unexpected records header {reader.fieldnames}")
        for row in reader:
            out.append(
                BenchmarkRecord(
                    method=row["method"],
                    k=int(row["k"]),
                    budget=int(row["budget"]),
                    repetition=int(row["repetition"]),
                    mse=float(row["mse"]),
                    evaluations=int(row["evaluations"]),
                    wall_ms=float(row["wall_ms"]),
                    underdetermined=row["flags"] == "underdetermined",
                )
            )
    return out


MSE_FLOOR = 1e-16
_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
)


def emit_plot(aggregates: Sequence[AggregateRecord], path: str | Path) -> None:
    """Self-contained SVG: mean MSE (log scale) against budget, one
    polyline per (method, degree) curve, legend top right.

    Zero (or sub-floor) MSE points are clamped to 1e-16 for log display.
    """
    if not aggregates:
        raise ValueError("nothing to plot: no aggregate curve points")
    curves: dict[str, list[tuple[int, float]]] = {}
    for agg in sorted(aggregates, key=lambda a: (a.method, a.k, a.budget)):
        curves.setdefault(agg.label, []).append(
            (agg.budget, max(agg.mean_mse, MSE_FLOOR))
        )

    width, height = 640.0, 440.0
    left, right, top, bottom = 72.0, 180.0, 28.0, 48.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    budgets = sorted({b for pts in curves.values() for b, _ in pts})
    x_lo, x_hi = budgets[0], budgets[-1]
    x_span = max(x_hi - x_lo, 1)

    import math

    logs = [math.log10(v) for pts in curves.values() for _, v in pts]
    y_lo = math.floor(min(logs))
    y_hi = math.ceil(max(logs))
    if y_hi == y_lo:
        y_hi += 1

    def x_of(budget: float) -> float:
        return left + (budget - x_lo) / x_span * plot_w

    def y_of(value: float) -> float:
        return top + (y_hi - math.log10(value)) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{left:g}" y="{top:g}" width="{plot_w:g}" height="{plot_h:g}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    for decade in range(y_lo, y_hi + 1):
        y = y_of(10.0 ** decade)
        parts.append(
            f'<line x1="{left:g}" y1="{y:.2f}" x2="{left + plot_w:g}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{left - 6:g}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">1e{decade}</text>'
        )
    for budget in budgets:
        x = x_of(budget)
        parts.append(
            f'<line x1="{x:.2f}" y1="{top + plot_h:g}" x2="{x:.2f}" '
            f'y2="{top + plot_h + 4:g}" stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 18:g}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{budget}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{height - 10:g}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">budget T</text>'
    )
    parts.append(
        f'<text x="16" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">mean MSE</text>'
    )

    for idx, (label, points) in enumerate(sorted(curves.items())):
        color = _PALETTE[idx % len(_PALETTE)]
        coords = " ".join(f"{x_of(b):.2f},{y_of(v):.2f}" for b, v in points)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for b, v in points:
            parts.append(
                f'<circle cx="{x_of(b):.2f}" cy="{y_of(v):.2f}" r="2.5" fill="{color}"/>'
            )
        ly = top + 14 + 18 * idx
        lx = left + plot_w + 14
        parts.append(
            f'<line x1="{lx:g}" y1="{ly:g}" x2="{lx + 22:g}" y2="{ly:g}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 28:g}" y="{ly + 4:g}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
