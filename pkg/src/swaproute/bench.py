"""Benchmark harness: sweep problem sizes and densities over topology
families, comparing the strategy router with the greedy baseline.

Each data point averages the depth, CNOT count and transpile time over
the configured seeds; points are independent pure computations and may
run concurrently (capped by the SWAPROUTE_THREADS environment variable),
with output ordered by configuration order regardless of completion.
"""

from __future__ import annotations

import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .problem import build_qaoa_circuit, random_gnm
from .router import route, route_baseline
from .strategy import heavy_hex_strategy, strategy_for_map
from .topology import CouplingMap, build_coupling_map, unrolled_heavy_hex

BENCH_FAMILIES = ("line", "grid2d", "grid3d", "heavy-hex", "unrolled-heavy-hex")
ROUTERS = ("strategy", "baseline")


@dataclass
class BenchConfig:
    families: list[str]
    sizes: list[int]
    densities: list[float] = field(default_factory=lambda: [0.2, 0.5, 0.8, 1.0])
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    routers: list[str] = field(default_factory=lambda: list(ROUTERS))
    p: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchConfig":
        cfg = cls(
            families=list(doc["families"]),
            sizes=[int(s) for s in doc["sizes"]],
        )
        if "densities" in doc:
            cfg.densities = [float(d) for d in doc["densities"]]
        if "seeds" in doc:
            cfg.seeds = [int(s) for s in doc["seeds"]]
        if "routers" in doc:
            cfg.routers = list(doc["routers"])
        if "p" in doc:
            cfg.p = int(doc["p"])
        for fam in cfg.families:
            if fam not in BENCH_FAMILIES:
                raise ValueError(f"unknown bench family {fam!r}")
        for r in cfg.routers:
            if r not in ROUTERS:
                raise ValueError(f"unknown router {r!r}")
        if cfg.p < 1 or not cfg.sizes or not cfg.seeds:
            raise ValueError("bench config needs p >= 1, sizes and seeds")
        return cfg


def bench_map_and_strategy(family: str, n: int):
    """Topology and strategy for a benchmark point; the device may hold
    more qubits than the problem (smallest family instance covering n)."""
    if family == "line":
        cmap = build_coupling_map("line", (n,))
        return cmap, strategy_for_map(cmap)
    if family == "grid2d":
        x = math.isqrt(n - 1) + 1
        cmap = build_coupling_map("grid2d", (x, x))
        return cmap, strategy_for_map(cmap)
    if family == "grid3d":
        x = max(2, math.ceil(n ** (1 / 3) - 1e-9))
        cmap = build_coupling_map("grid3d", (x, x, x))
        return cmap, strategy_for_map(cmap)
    if family == "heavy-hex":
        for i in range(1, 40):
            if 5 * i * i + 8 * i - 1 >= n:
                cmap = build_coupling_map("heavy-hex", (i, i))
                return cmap, strategy_for_map(cmap)
        raise ValueError(f"no heavy-hex instance covers n={n}")
    if family == "unrolled-heavy-hex":
        unfolding = unrolled_heavy_hex(n)
        return unfolding.map, heavy_hex_strategy(unfolding)
    raise ValueError(f"unknown bench family {family!r}")


def _run_point(args):
    family, n, density, router, seeds, p = args
    cmap, strategy = bench_map_and_strategy(family, n)
    cnots, depths, cx_layers, times = [], [], [], []
    for seed in seeds:
        graph = random_gnm(n, density, seed)
        circuit = build_qaoa_circuit(graph, p, [0.4] * p, [0.3] * p)
        t0 = time.perf_counter()
        if router == "strategy":
            routed = route(circuit, cmap, strategy)
        else:
            routed = route_baseline(circuit, cmap)
        times.append(time.perf_counter() - t0)
        cnots.append(routed.cnot_count)
        depths.append(routed.depth())
        cx_layers.append(routed.cnot_layer_count)
    def mean_std(xs):
        if len(xs) == 1:
            return xs[0], 0.0
        return statistics.fmean(xs), statistics.stdev(xs)
    row = {
        "family": family,
        "n": n,
        "density": density,
        "router": router,
    }
    for name, xs in (
        ("cnot", cnots),
        ("depth", depths),
        ("cnot_layers", cx_layers),
        ("transpile_s", times),
    ):
        m, s = mean_std(xs)
        row[f"{name}_mean"] = m
        row[f"{name}_std"] = s
    row["cnot_median"] = statistics.median(cnots)
    row["transpile_s_median"] = statistics.median(times)
    return row


def run_bench(cfg: BenchConfig) -> list[dict]:
    points = [
        (family, n, density, router, cfg.seeds, cfg.p)
        for family in cfg.families
        for n in cfg.sizes
        for density in cfg.densities
        for router in cfg.routers
    ]
    workers = int(os.environ.get("SWAPROUTE_THREADS", "1") or "1")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_point, points))
    return [_run_point(p) for p in points]


BENCH_COLUMNS = [
    "family",
    "n",
    "density",
    "router",
    "cnot_mean",
    "cnot_std",
    "cnot_median",
    "depth_mean",
    "depth_std",
    "cnot_layers_mean",
    "cnot_layers_std",
    "transpile_s_mean",
    "transpile_s_std",
    "transpile_s_median",
]


def bench_rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(BENCH_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in BENCH_COLUMNS))
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
