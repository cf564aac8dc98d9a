"""Timing harness for route and simulate, with a log-log exponent fit."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import NetworkConfig
from .permgen import random_permutation
from .router import route
from .simulator import execute


@dataclass(frozen=True)
class BenchRow:
    d: int
    g: int
    seed: int
    route_time: float
    simulate_time: float
    slots: int
    delivered: bool


def time_cell(d: int, g: int, seed: int, repeats: int = 1) -> BenchRow:
    """Best-of-``repeats`` wall time for routing and simulating one random permutation."""
    cfg = NetworkConfig(d, g)
    pi = random_permutation(cfg.n, seed)
    best_route = best_sim = float("inf")
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        schedule = route(cfg, pi)
        t1 = time.perf_counter()
        verdict = execute(cfg, pi, schedule)
        t2 = time.perf_counter()
        best_route = min(best_route, t1 - t0)
        best_sim = min(best_sim, t2 - t1)
    return BenchRow(d, g, seed, best_route, best_sim, len(schedule), verdict.delivered)


def _time_cell_args(args: tuple[int, int, int, int]) -> BenchRow:
    return time_cell(*args)


def run_bench(cells: Iterable[tuple[int, int]], seeds: Sequence[int] = (0,),
              repeats: int = 1, jobs: int = 1) -> list[BenchRow]:
    """Time every (d, g, seed) cell; rows come back sorted by cell key."""
    keys = sorted({(d, g, s) for d, g in cells for s in seeds})
    work = [(d, g, s, repeats) for d, g, s in keys]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_time_cell_args, work))
    else:
        rows = [_time_cell_args(w) for w in work]
    return rows


def fit_exponent(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    if len(xs) < 2:
        raise ValueError("need at least two points to fit an exponent")
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def diagonal_exponent(rows: Sequence[BenchRow]) -> float | None:
    """Fitted exponent of route time against g over the d == g rows (best time per g)."""
    best: dict[int, float] = {}
    for row in rows:
        if row.d == row.g:
            best[row.g] = min(best.get(row.g, float("inf")), row.route_time)
    if len(best) < 2:
        return None
    gs = sorted(best)
    return fit_exponent(gs, [best[g] for g in gs])


def to_csv(rows: Sequence[BenchRow]) -> str:
    lines = ["d,g,seed,route_time,simulate_time,slots,delivered"]
    for r in rows:
        lines.append(f"{r.d},{r.g},{r.seed},{r.route_time:.6f},{r.simulate_time:.6f},"
                     f"{r.slots},{str(r.delivered).lower()}")
    return "\n".join(lines) + "\n"
