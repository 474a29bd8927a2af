"""Monte Carlo layout scanner: per-layout unsolvable fractions with
deterministic per-board seeding, timing percentiles and a random-playout
difficulty measure."""

from __future__ import annotations

import json
import math
import multiprocessing
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .board import Layout, Slot, shuffle
from .layouts import default_group_sizes
from .rng import derive_seed
from .solver import random_solve, solve_group_directed


@dataclass(frozen=True)
class ScanReport:
    layout: str
    n: int
    seed: int
    unsolvable_count: int
    unsolvable_fraction: Optional[float]
    p50_ms: Optional[float]
    p99_ms: Optional[float]
    max_ms: Optional[float]
    random_success_fraction: Optional[float]

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    def comparable(self) -> Dict:
        """Fields that must match across runs and worker counts."""
        d = dict(self.__dict__)
        for k in ("p50_ms", "p99_ms", "max_ms"):
            d.pop(k)
        return d


def _nearest_rank(sorted_values: List[float], pct: float) -> float:
    rank = max(1, math.ceil(pct / 100.0 * len(sorted_values)))
    return sorted_values[rank - 1]


# worker globals, set once per process
_WORK: Dict = {}


def _init_worker(slots: Tuple[Slot, ...], sizes: Tuple[int, ...], seed: int,
                 playout_attempts: int) -> None:
    _WORK["layout"] = Layout(slots)
    _WORK["sizes"] = sizes
    _WORK["seed"] = seed
    _WORK["playout_attempts"] = playout_attempts


def _scan_one(index: int) -> Tuple[int, bool, float, Optional[float]]:
    board_seed = derive_seed(_WORK["seed"], index)
    board = shuffle(_WORK["layout"], _WORK["sizes"], board_seed)
    t0 = time.perf_counter()
    verdict = solve_group_directed(board)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    success: Optional[float] = None
    if verdict.solvable and _WORK["playout_attempts"] > 0:
        rr = random_solve(board, attempts=_WORK["playout_attempts"],
                          seed=board_seed, measure=True)
        success = rr.success_fraction
    return index, verdict.solvable, elapsed_ms, success


def scan_layout(layout: Layout, n: int, seed: int, workers: int = 1,
                layout_name: str = "custom",
                group_sizes: Optional[Sequence[int]] = None,
                playout_attempts: int = 16) -> ScanReport:
    """Decide n seeded boards of the layout and aggregate the results.

    Board i is dealt with the derived seed mix(seed, i), so the report does
    not depend on the worker partitioning.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    sizes = tuple(group_sizes) if group_sizes else default_group_sizes(layout)
    _init_worker(layout.slots, sizes, seed, playout_attempts)
    if workers == 1 or n <= 1:
        rows = [_scan_one(i) for i in range(n)]
    else:
        with multiprocessing.Pool(
                workers, initializer=_init_worker,
                initargs=(layout.slots, sizes, seed, playout_attempts)) as pool:
            rows = list(pool.imap_unordered(_scan_one, range(n),
                                            chunksize=max(1, n // (8 * workers))))
    rows.sort(key=lambda r: r[0])
    unsolvable = sum(1 for r in rows if not r[1])
    times = sorted(r[2] for r in rows)
    fractions = [r[3] for r in rows if r[3] is not None]
    return ScanReport(
        layout=layout_name,
        n=n,
        seed=seed,
        unsolvable_count=unsolvable,
        unsolvable_fraction=(unsolvable / n) if n else None,
        p50_ms=_nearest_rank(times, 50) if times else None,
        p99_ms=_nearest_rank(times, 99) if times else None,
        max_ms=times[-1] if times else None,
        random_success_fraction=(sum(fractions) / len(fractions)
                                 if fractions else None),
    )
