"""Timed comparisons of the selection algorithms on random ensembles.

A benchmark run draws systems from one generator over a grid of sizes,
executes a fixed list of algorithms on each draw, and records one row per
(system, algorithm) pair with the result size and wall-clock seconds.
Rows where an algorithm raises are kept with the exception name in the
result column so a run never dies halfway through an ensemble.

The per-trial seed is derived as (seed, n, trial), so any row can be
reproduced in isolation. The CTRLSPARSE_THREADS environment variable caps
how many trials run concurrently; the default of 1 keeps timings clean.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .generators import gen_jordan, gen_scale_free, stabilize
from .macp import greedy_macp, gramian_greedy_macp
from .mscp import simple_greedy_mscp, two_stage_mscp
from .spectral import ToleranceConfig

CSV_COLUMNS = ("generator", "n", "trial", "algorithm", "result", "seconds", "seed")


@dataclass(frozen=True)
class BenchConfig:
    """Everything a benchmark run depends on.

    tol is handed to every algorithm unchanged. Sparse random networks
    need a coarser cluster_tol than the package default because their
    defective zero eigenvalue scatters under floating point; see
    ToleranceConfig.
    """

    generator: str = "jordan"
    sizes: tuple[int, ...] = (20, 40, 60, 80, 100)
    trials: int = 20
    algorithms: tuple[str, ...] = ("greedy_macp", "gramian_macp")
    seed: int = 0
    n_inputs: int = 3
    k_max: int = 3
    density: float = 0.5
    avg_degree_coeff: float = 0.3
    tol: ToleranceConfig | float | None = None


@dataclass(frozen=True)
class BenchRecord:
    """One (system, algorithm) measurement."""

    generator: str
    n: int
    trial: int
    algorithm: str
    result: str
    seconds: float
    seed: int


def _build_system(config: BenchConfig, n: int, trial: int) -> np.ndarray:
    trial_seed = (config.seed, n, trial)
    if config.generator == "jordan":
        return gen_jordan(
            n, k_max=config.k_max, density=config.density, seed=trial_seed
        )
    if config.generator == "scale_free":
        return gen_scale_free(
            n, seed=trial_seed, avg_degree_coeff=config.avg_degree_coeff
        )
    raise ValueError(
        f"unknown generator {config.generator!r}; "
        f"expected 'jordan' or 'scale_free'"
    )


def _algorithm_registry(
    config: BenchConfig,
) -> dict[str, Callable[[np.ndarray], int]]:
    def run_greedy_macp(a: np.ndarray) -> int:
        states, _ = greedy_macp(a, tol=config.tol)
        return len(states)

    def run_gramian_macp(a: np.ndarray) -> int:
        states, _ = gramian_greedy_macp(a, tol=config.tol)
        return len(states)

    def run_simple_mscp(a: np.ndarray) -> int:
        pattern, _ = simple_greedy_mscp(a, config.n_inputs, tol=config.tol)
        return pattern.sparsity

    def run_two_stage_mscp(a: np.ndarray) -> int:
        _, cert = two_stage_mscp(a, config.n_inputs, tol=config.tol)
        return cert.sparsity

    return {
        "greedy_macp": run_greedy_macp,
        "gramian_macp": run_gramian_macp,
        "simple_mscp": run_simple_mscp,
        "two_stage_mscp": run_two_stage_mscp,
    }


def _run_one(
    config: BenchConfig,
    registry: dict[str, Callable[[np.ndarray], int]],
    n: int,
    trial: int,
) -> list[BenchRecord]:
    a = _build_system(config, n, trial)
    records = []
    for name in config.algorithms:
        func = registry[name]
        # the energy baseline needs a Hurwitz matrix; the shift preserves
        # eigenvectors and multiplicities so sizes stay comparable, and it
        # happens outside the timer because it is not part of the method
        arg = stabilize(a) if name == "gramian_macp" else a
        start = time.perf_counter()
        try:
            result = str(func(arg))
        except Exception as exc:
            result = f"error:{type(exc).__name__}"
        seconds = time.perf_counter() - start
        records.append(
            BenchRecord(
                generator=config.generator,
                n=n,
                trial=trial,
                algorithm=name,
                result=result,
                seconds=seconds,
                seed=config.seed,
            )
        )
    return records


def run_benchmark(config: BenchConfig) -> list[BenchRecord]:
    """Execute the configured grid and return rows in deterministic order.

    Rows are ordered by (size, trial, algorithm position) regardless of
    how many worker threads execute the trials.
    """
    if config.trials < 1:
        raise ValueError("trials must be positive")
    registry = _algorithm_registry(config)
    for name in config.algorithms:
        if name not in registry:
            raise ValueError(
                f"unknown algorithm {name!r}; expected one of "
                f"{sorted(registry)}"
            )

    tasks = [(n, t) for n in config.sizes for t in range(config.trials)]
    workers = int(os.environ.get("CTRLSPARSE_THREADS", "1"))
    if workers <= 1:
        batches = [_run_one(config, registry, n, t) for n, t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(
                pool.map(lambda nt: _run_one(config, registry, *nt), tasks)
            )
    return [record for batch in batches for record in batch]


def write_csv(records: Iterable[BenchRecord], path: str) -> None:
    """Write rows with the stable column set the plotting helpers expect."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(
                [
                    rec.generator,
                    rec.n,
                    rec.trial,
                    rec.algorithm,
                    rec.result,
                    f"{rec.seconds:.6f}",
                    rec.seed,
                ]
            )


def summarize(
    records: Sequence[BenchRecord],
) -> dict[tuple[str, int], dict[str, float]]:
    """Mean result size and mean seconds per (algorithm, n), skipping
    error rows."""
    buckets: dict[tuple[str, int], list[BenchRecord]] = {}
    for rec in records:
        if rec.result.startswith("error:"):
            continue
        buckets.setdefault((rec.algorithm, rec.n), []).append(rec)
    out = {}
    for key, rows in sorted(buckets.items()):
        out[key] = {
            "mean_result": float(np.mean([int(r.result) for r in rows])),
            "mean_seconds": float(np.mean([r.seconds for r in rows])),
            "count": float(len(rows)),
        }
    return out
