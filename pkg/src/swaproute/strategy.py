"""Swap strategies and their reachability analysis.

A swap strategy is a predefined ordered sequence of swap layers over a
coupling map; every layer is a matching of device edges whose SWAPs run
simultaneously.  The graph of logical pairs that have been adjacent on
hardware within the first L layers grows with L; its density bounds the
density of the commuting gate layers that can be routed with L layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .topology import (
    CUSTOM,
    GRID2D,
    GRID3D,
    HEAVY_HEX,
    LINE,
    CouplingMap,
    Edge,
    UnfoldedHeavyHex,
    _norm_edge,
    build_coupling_map,
    unfold_heavy_hex,
)

LINE_OPTIMAL = "line-optimal"
GRID2D_STRATEGY = "grid2d"
GRID3D_STRATEGY = "grid3d"
HEAVY_HEX_FULL = "heavy-hex-full"
HEAVY_HEX_SIMPLE = "heavy-hex-simple"
CUSTOM_STRATEGY = "custom"


class StrategyError(ValueError):
    """Base class for swap-strategy errors."""


class OutOfRange(StrategyError):
    """Index or layer count outside the valid range."""


class NonSquare(StrategyError):
    """Grid strategies require equal dimensions."""


class BadUnfolding(StrategyError):
    """Unfolding violates the line/tail invariants."""


class Unreachable(StrategyError):
    """The strategy saturates below the requested density."""


@dataclass(frozen=True)
class SwapStrategy:
    """Ordered swap layers over a host coupling map."""

    map: CouplingMap
    layers: tuple[frozenset[Edge], ...]
    family: str = CUSTOM_STRATEGY

    def __post_init__(self):
        for idx, layer in enumerate(self.layers):
            seen: set[int] = set()
            for u, v in layer:
                if _norm_edge(u, v) not in self.map.edges:
                    raise StrategyError(f"layer {idx}: ({u},{v}) is not a device edge")
                if u in seen or v in seen:
                    raise StrategyError(f"layer {idx} is not a matching at qubit {u if u in seen else v}")
                seen.add(u)
                seen.add(v)

    def __len__(self) -> int:
        return len(self.layers)

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "family": self.family,
                "n": self.map.num_qubits,
                "layers": [sorted([u, v] for u, v in layer) for layer in self.layers],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str, cmap: CouplingMap) -> "SwapStrategy":
        import json

        doc = json.loads(text)
        layers = tuple(
            frozenset(_norm_edge(int(u), int(v)) for u, v in layer) for layer in doc["layers"]
        )
        return cls(cmap, layers, doc.get("family", CUSTOM_STRATEGY))


# ---------------------------------------------------------------------------
# line
# ---------------------------------------------------------------------------


def _line_layers(order: list[int], num_layers: int, start_parity: int = 0):
    """Alternating even/odd-edge layers along an ordered path of qubits."""
    layers = []
    for s in range(num_layers):
        parity = (start_parity + s) % 2
        layers.append(
            frozenset(
                _norm_edge(order[p], order[p + 1])
                for p in range(parity, len(order) - 1, 2)
            )
        )
    return layers


def line_strategy(n: int) -> SwapStrategy:
    """Optimal line strategy: even edges, odd edges, ... for n-2 layers."""
    if n < 2:
        raise OutOfRange(f"line strategy needs n >= 2, got {n}")
    cmap = build_coupling_map(LINE, (n,))
    layers = _line_layers(list(range(n)), max(n - 2, 0))
    return SwapStrategy(cmap, tuple(layers), LINE_OPTIMAL)


def qubit_position_after(n: int, i: int, k: int) -> int:
    """Closed-form position of the qubit starting at node i after k layers
    of the line strategy (even edges first), valid for 0 <= k <= n."""
    if not (0 <= i < n):
        raise OutOfRange(f"qubit index {i} outside [0, {n})")
    if not (0 <= k <= n):
        raise OutOfRange(f"layer count {k} outside [0, {n}]")
    if i % 2 == 0:
        return min(i + k, 2 * n - i - 1 - k)
    return max(i - k, -i + k - 1)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


def _grid_row_layer(shape, s: int) -> frozenset[Edge]:
    """In-row swap layer at step s; neighbouring lines (in every slower axis)
    run on opposite edge parities."""
    from .topology import _grid_coords

    cmap_edges = []
    sizes = shape
    # iterate over all edges along the last axis
    def rec(prefix):
        if len(prefix) == len(sizes) - 1:
            base = 0
            for c, d in zip(prefix, sizes):
                base = base * d + c
            base *= sizes[-1]
            for c in range(sizes[-1] - 1):
                if (sum(prefix) + c + s) % 2 == 0:
                    cmap_edges.append((base + c, base + c + 1))
            return
        for c in range(sizes[len(prefix)]):
            rec(prefix + (c,))

    rec(())
    return frozenset(cmap_edges)


def _grid_axis_layer(shape, axis: int, parity: int) -> frozenset[Edge]:
    """Transposition layer along `axis`: swaps lines at positions (p, p+1)
    where (p + sum of slower coordinates) matches `parity`."""
    from .topology import _grid_coords

    edges = []
    n = 1
    for d in shape:
        n *= d
    for flat in range(n):
        cu = _grid_coords(shape, flat)
        if cu[axis] + 1 >= shape[axis]:
            continue
        if (sum(cu[: axis + 1])) % 2 == parity % 2:
            stride = 1
            for d in shape[axis + 1 :]:
                stride *= d
            edges.append((flat, flat + stride))
    return frozenset(edges)


def grid_strategy(x: int, eta: int = 2) -> SwapStrategy:
    """Swap strategy for the square (eta=2) or cubic (eta=3) grid.

    2D: repeat [x-1 phase-staggered row layers, then one even and one odd
    column layer] ceil((x-2)/2) times, then a final block of row layers.
    3D applies the same pattern to x virtual rows, one boustrophedon snake
    of length x*x per plane, with plane-transposition layers as the column
    step; the 2D argument then carries over row-for-row.
    """
    if eta not in (2, 3):
        raise NonSquare(f"eta must be 2 or 3, got {eta}")
    if x < 2:
        raise OutOfRange(f"grid strategy needs x >= 2, got {x}")
    shape = (x,) * eta
    family = GRID2D if eta == 2 else GRID3D
    cmap = build_coupling_map(family, shape)
    reps = max((x - 2 + 1) // 2, 0)  # ceil((x-2)/2)
    layers: list[frozenset[Edge]] = []

    if eta == 2:
        row_pass = [_grid_row_layer(shape, s) for s in range(x - 1)]
        for _ in range(reps):
            layers.extend(row_pass)
            layers.append(_grid_axis_layer(shape, 0, 0))
            layers.append(_grid_axis_layer(shape, 0, 1))
        layers.extend(row_pass)
        return SwapStrategy(cmap, tuple(layers), GRID2D_STRATEGY)

    snakes = _plane_snakes(x)
    m = x * x

    def snake_layer(s: int) -> frozenset[Edge]:
        edges = []
        for z, snake in enumerate(snakes):
            for p in range((s + z) % 2, m - 1, 2):
                edges.append(_norm_edge(snake[p], snake[p + 1]))
        return frozenset(edges)

    row_pass = [snake_layer(s) for s in range(m - 1)]
    for _ in range(reps):
        layers.extend(row_pass)
        layers.append(_grid_axis_layer(shape, 0, 0))
        layers.append(_grid_axis_layer(shape, 0, 1))
    layers.extend(row_pass)
    return SwapStrategy(cmap, tuple(layers), GRID3D_STRATEGY)


def _plane_snakes(x: int) -> list[list[int]]:
    """Boustrophedon qubit order through each z-plane of the cubic grid."""
    out = []
    for z in range(x):
        snake = []
        for y in range(x):
            cols = range(x) if y % 2 == 0 else range(x - 1, -1, -1)
            snake.extend(z * x * x + y * x + c for c in cols)
        out.append(snake)
    return out


def grid_layer_count_2d(x: int) -> int:
    """Constructed 2D layer count: ceil((x-2)/2)*(x+1) + (x-1)."""
    reps = max((x - 2 + 1) // 2, 0)
    return reps * (x + 1) + (x - 1)


def grid_layer_bound_2d(x: int) -> float:
    """Reported upper bound n/2 + sqrt(n) + 1/2 for the square grid."""
    n = x * x
    return n / 2 + math.sqrt(n) + 0.5


# ---------------------------------------------------------------------------
# heavy-hex
# ---------------------------------------------------------------------------


def heavy_hex_iteration_length(line_length: int) -> int:
    """k = l/4 - (l/4 mod 8) + 10; satisfies k mod 8 == 2 and k > l/4."""
    if line_length % 4 != 0:
        raise BadUnfolding(f"line length {line_length} not a multiple of 4")
    quarter = line_length // 4
    return quarter - (quarter % 8) + 10


def heavy_hex_strategy(unfolding: UnfoldedHeavyHex) -> SwapStrategy:
    """Full-connectivity heavy-hex strategy over an unfolded map.

    Four layer kinds: odd line edges, even line edges, edges into dangling
    group A, edges into dangling group B.  One iteration alternates
    odd/even k-7 times starting odd, swaps group B in and out, alternates
    even/odd 7 times, then swaps group A; five iterations are emitted,
    5*(k+2) layers in total.
    """
    l = unfolding.line_length
    if l % 4 != 0 or len(unfolding.tail_long) % 4 != 2:
        raise BadUnfolding("unfolding violates the line/tail invariants")
    order = list(unfolding.line_order)
    odd_layer = frozenset(_norm_edge(order[p], order[p + 1]) for p in range(1, l - 1, 2))
    even_layer = frozenset(_norm_edge(order[p], order[p + 1]) for p in range(0, l - 1, 2))
    a_layer = frozenset(unfolding.dangling_edges("A"))
    b_layer = frozenset(unfolding.dangling_edges("B"))

    k = heavy_hex_iteration_length(l)
    iteration: list[frozenset[Edge]] = []
    for m in range(k - 7):
        iteration.append(odd_layer if m % 2 == 0 else even_layer)
    iteration.append(b_layer)
    for m in range(7):
        iteration.append(even_layer if m % 2 == 0 else odd_layer)
    iteration.append(a_layer)

    layers = tuple(iteration) * 5
    return SwapStrategy(unfolding.map, layers, HEAVY_HEX_FULL)


def heavy_hex_simple_line_strategy(unfolding: UnfoldedHeavyHex) -> SwapStrategy:
    """Line strategy restricted to the working line of the unfolding.

    Dangling qubits never move, so this strategy cannot reach density 1
    on a map that has any dangling qubit.
    """
    order = list(unfolding.line_order)
    layers = _line_layers(order, max(len(order) - 2, 0))
    return SwapStrategy(unfolding.map, tuple(layers), HEAVY_HEX_SIMPLE)


def heavy_hex_layer_bound(n: int) -> float:
    """Full-connectivity bound n + sqrt(n) + 61 for heavy-hex maps."""
    return n + math.sqrt(n) + 61


# ---------------------------------------------------------------------------
# reachability
# ---------------------------------------------------------------------------


class _Reachability:
    """Incremental simulation of the permutation trajectory of a strategy."""

    def __init__(self, cmap: CouplingMap):
        self.cmap = cmap
        self.n = cmap.num_qubits
        self.pos_to_logical = list(range(self.n))
        self.pairs: set[Edge] = set()
        self.edges = cmap.sorted_edges
        self._collect()

    def _collect(self):
        p2l = self.pos_to_logical
        for u, v in self.edges:
            self.pairs.add(_norm_edge(p2l[u], p2l[v]))

    def step(self, layer: frozenset[Edge]):
        p2l = self.pos_to_logical
        for u, v in layer:
            p2l[u], p2l[v] = p2l[v], p2l[u]
        self._collect()

    def density(self) -> float:
        if self.n < 2:
            return 1.0
        return len(self.pairs) / (self.n * (self.n - 1) / 2)


def reachability(strategy: SwapStrategy, L: int) -> tuple[frozenset[Edge], float]:
    """Logical pairs adjacent on hardware within the first L layers, and
    the density of that graph."""
    if not (0 <= L <= len(strategy)):
        raise OutOfRange(f"L={L} outside [0, {len(strategy)}]")
    reach = _Reachability(strategy.map)
    for layer in strategy.layers[:L]:
        reach.step(layer)
    return frozenset(reach.pairs), reach.density()


def density_curve(strategy: SwapStrategy, max_layers: int | None = None) -> list[float]:
    """Density of the reachability graph after 0, 1, ..., L layers."""
    if max_layers is None:
        max_layers = len(strategy)
    if not (0 <= max_layers <= len(strategy)):
        raise OutOfRange(f"max_layers={max_layers} outside [0, {len(strategy)}]")
    reach = _Reachability(strategy.map)
    curve = [reach.density()]
    for layer in strategy.layers[:max_layers]:
        reach.step(layer)
        curve.append(reach.density())
    return curve


_DENSITY_ESTIMATE_COEFF = {
    LINE_OPTIMAL: None,  # exact form (n-2)*D
    GRID2D_STRATEGY: 0.5,
    GRID3D_STRATEGY: 0.25,
    HEAVY_HEX_FULL: 1.0,
    HEAVY_HEX_SIMPLE: 1.0,
}


def layers_estimate(family: str, n: int, density: float) -> float | None:
    """Closed-form estimate of the layers needed to reach `density`."""
    if family == LINE_OPTIMAL:
        return (n - 2) * density
    coeff = _DENSITY_ESTIMATE_COEFF.get(family)
    if coeff is None:
        return None
    return coeff * n * density


def min_layers_for_density(strategy: SwapStrategy, density: float) -> tuple[int, float | None]:
    """Smallest L whose reachability graph has at least `density`, plus the
    family's closed-form estimate (None for custom strategies).

    Raises Unreachable if the strategy saturates below the target.
    """
    if not (0 < density <= 1):
        raise OutOfRange(f"density {density} outside (0, 1]")
    reach = _Reachability(strategy.map)
    estimate = layers_estimate(strategy.family, strategy.map.num_qubits, density)
    if reach.density() >= density:
        return 0, estimate
    for L, layer in enumerate(strategy.layers, start=1):
        reach.step(layer)
        if reach.density() >= density:
            return L, estimate
    raise Unreachable(
        f"strategy saturates at density {reach.density():.6f} < {density}"
    )


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def strategy_for_map(cmap: CouplingMap, name: str | None = None) -> SwapStrategy:
    """Family-appropriate strategy for a coupling map.

    `name` may force "heavy-hex-simple" on heavy-hex maps.  Custom maps
    have no generic strategy and must load one from JSON.
    """
    if cmap.family == LINE:
        return line_strategy(cmap.num_qubits)
    if cmap.family == GRID2D:
        x, y = cmap.dims
        if x != y:
            raise NonSquare(f"grid strategy needs a square grid, got {cmap.dims}")
        return grid_strategy(x, 2)
    if cmap.family == GRID3D:
        x, y, z = cmap.dims
        if not (x == y == z):
            raise NonSquare(f"grid strategy needs a cubic grid, got {cmap.dims}")
        return grid_strategy(x, 3)
    if cmap.family == HEAVY_HEX:
        unfolding = unfold_heavy_hex(cmap)
        if name == HEAVY_HEX_SIMPLE:
            return heavy_hex_simple_line_strategy(unfolding)
        return heavy_hex_strategy(unfolding)
    raise StrategyError(f"no predefined strategy for family {cmap.family!r}")
