"""Threshold sweeps over random sets and side-length sets, plus the DFT benchmark.

Seeding: one integer seed per experiment.  The set for trial ``i`` comes
from ``SeedSequence(seed, spawn_key=(0, i))`` and the same stream is reused
at every density, so sets are nested across densities and extra trials
never perturb earlier ones.  Random side-length sets come from
``SeedSequence(seed, spawn_key=(1,))``.

CSV output is deterministic: rows are sorted by (density, trial, side
lengths) after all cells finish, and floats are written with ``repr``.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Sequence, TextIO

import numpy as np

from .errors import InstanceTooLarge
from .fourier import GridFunction, dft
from .io import make_rng, sample_set, side_length_seed, trial_seed
from .simplex import DEFAULT_BUDGET, DEFAULT_C_TEST, SimplexSpec, concentration_report, threshold

CSV_VERSION = "fqsimplex-experiment v1"
CSV_COLUMNS = [
    "q", "d", "k", "lk", "density", "trial", "e_size", "threshold", "exact",
    "main", "residual", "residual_bound", "rel_dev", "realized", "pass", "error",
]
# hard cap on the number of side-length sets an "all" sweep may enumerate
MAX_SWEEP = 100_000


@dataclass
class ExperimentConfig:
    q: int
    d: int
    k: int
    distances: str | list[SimplexSpec] = "all"
    densities: Sequence[float] = (1.0,)
    trials: int = 1
    seed: int = 0
    c_test: float = DEFAULT_C_TEST
    random_lk: int | None = None
    budget: float = DEFAULT_BUDGET
    threads: int = 1
    strategy: str = "auto"

    def __post_init__(self):
        if any(not 0 < p <= 1 for p in self.densities):
            raise ValueError("densities must lie in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.random_lk is not None and self.random_lk < 1:
            raise ValueError("random_lk must be >= 1")

    def side_lengths(self) -> list[SimplexSpec]:
        """The l_k sweep: explicit list, every l_k, or a seeded random sample."""
        if self.distances != "all":
            specs = list(self.distances)
            for s in specs:
                if s.k != self.k:
                    raise ValueError(f"side-length set {s.label} is for k={s.k}, not {self.k}")
                s.validate(self.q)
            return specs
        n_pairs = math.comb(self.k + 1, 2)
        total = (self.q - 1) ** n_pairs
        if self.random_lk is not None:
            rng = make_rng(side_length_seed(self.seed))
            flats = rng.integers(1, self.q, size=(self.random_lk, n_pairs))
            return [SimplexSpec.from_flat(self.k, [int(t) for t in f]) for f in flats]
        if total > MAX_SWEEP:
            raise InstanceTooLarge(f"an all-l_k sweep would enumerate {total} side-length sets")
        return [SimplexSpec.from_flat(self.k, f) for f in product(range(1, self.q), repeat=n_pairs)]


@dataclass
class ExperimentRow:
    q: int
    d: int
    k: int
    lk: str
    density: float
    trial: int
    e_size: int
    threshold: float
    exact: int | None
    main: float | None
    residual: float | None
    residual_bound: float | None
    rel_dev: float | None
    realized: bool | None
    passed: bool | None
    error: str = ""
    sort_key: tuple = field(default=(), repr=False, compare=False)

    def csv_values(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "1" if v else "0"
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return [fmt(v) for v in (
            self.q, self.d, self.k, self.lk, self.density, self.trial, self.e_size, self.threshold,
            self.exact, self.main, self.residual, self.residual_bound, self.rel_dev, self.realized,
            self.passed, self.error,
        )]


def _cell(cfg: ExperimentConfig, e, density: float, trial: int, spec: SimplexSpec, order: int) -> ExperimentRow:
    base = dict(q=cfg.q, d=cfg.d, k=cfg.k, lk=spec.label, density=density, trial=trial,
                e_size=len(e), threshold=threshold(cfg.q, cfg.d, cfg.k))
    key = (density, trial, tuple(spec.flat()), order)
    try:
        r = concentration_report(e, spec, c_test=cfg.c_test, strategy=cfg.strategy, budget=cfg.budget)
    except InstanceTooLarge as exc:
        return ExperimentRow(**base, exact=None, main=None, residual=None, residual_bound=None,
                             rel_dev=None, realized=None, passed=None,
                             error=f"InstanceTooLarge: {exc}", sort_key=key)
    return ExperimentRow(**base, exact=r.exact_count, main=float(r.main_term), residual=float(r.residual),
                         residual_bound=r.residual_bound, rel_dev=r.relative_deviation,
                         realized=r.realized, passed=r.passed, sort_key=key)


def run_threshold_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    """One row per (density, trial, l_k); InstanceTooLarge is recorded in-row."""
    specs = cfg.side_lengths()
    sets = {}
    for density in cfg.densities:
        for trial in range(cfg.trials):
            sets[(density, trial)] = sample_set(cfg.q, cfg.d, density, trial_seed(cfg.seed, trial))
    jobs = [
        (cfg, sets[(density, trial)], density, trial, spec, n)
        for density in cfg.densities
        for trial in range(cfg.trials)
        for n, spec in enumerate(specs)
    ]
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            rows = list(pool.map(lambda job: _cell(*job), jobs))
    else:
        rows = [_cell(*job) for job in jobs]
    rows.sort(key=lambda r: r.sort_key)
    return rows


def summarize(rows: Sequence[ExperimentRow]) -> list[dict]:
    """Per density: realized fraction and median ``|exact/main - 1|`` over completed cells."""
    out = []
    for density in sorted({r.density for r in rows}):
        cells = [r for r in rows if r.density == density]
        done = [r for r in cells if not r.error]
        devs = [r.rel_dev for r in done if r.rel_dev is not None]
        out.append({
            "density": density,
            "cells": len(cells),
            "completed": len(done),
            "realized_fraction": (sum(r.realized for r in done) / len(done)) if done else None,
            "pass_fraction": (sum(r.passed for r in done) / len(done)) if done else None,
            "median_rel_dev": statistics.median(devs) if devs else None,
            "mean_e_size": statistics.fmean(r.e_size for r in cells),
        })
    return out


def write_csv(rows: Sequence[ExperimentRow], fh: TextIO, cfg: ExperimentConfig | None = None) -> None:
    """Header comment, column row, data rows, then ``# summary`` comment lines."""
    fh.write(f"# {CSV_VERSION}\n")
    if cfg is not None:
        fh.write(
            f"# q={cfg.q} d={cfg.d} k={cfg.k} seed={cfg.seed} trials={cfg.trials} "
            f"densities={','.join(repr(float(x)) for x in cfg.densities)} c_test={cfg.c_test!r}\n"
        )
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(r.csv_values())
    for s in summarize(rows):
        fh.write("# summary " + " ".join(f"{k}={v!r}" for k, v in s.items()) + "\n")


def experiment_csv(cfg: ExperimentConfig) -> str:
    buf = io.StringIO()
    write_csv(run_threshold_experiment(cfg), buf, cfg)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse rows written by :func:`write_csv`, skipping comment lines."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


def bench_dft(q: int, d: int, repeats: int = 3, seed: int = 0, threads: int = 1) -> dict:
    """Best-of wall times for the naive and factorized forward transforms."""
    rng = np.random.default_rng(seed)
    f = GridFunction(rng.standard_normal(q**d) + 1j * rng.standard_normal(q**d), q, d)
    timings = {}
    results = {}
    for strategy in ("naive", "factorized"):
        best = None
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter_ns()
            results[strategy] = dft(f, strategy, threads=threads if strategy == "factorized" else 1)
            elapsed = time.perf_counter_ns() - t0
            best = elapsed if best is None else min(best, elapsed)
        timings[strategy] = best
    diff = float(np.max(np.abs(results["naive"].values - results["factorized"].values)))
    return {
        "q": q,
        "d": d,
        "repeats": repeats,
        "naive_ns": timings["naive"],
        "factorized_ns": timings["factorized"],
        "speedup": timings["naive"] / max(timings["factorized"], 1),
        "max_abs_diff": diff,
        "equal": diff <= 1e-9,
    }


def row_dicts(rows: Sequence[ExperimentRow]) -> list[dict]:
    out = []
    for r in rows:
        d = asdict(r)
        d.pop("sort_key")
        out.append(d)
    return out
