"""Routing of commuting gate sets with a swap strategy, plus a greedy
commutation-aware baseline.

The strategy router repeats, inside every commuting cost set: select all
terms executable under the current mapping, emit them partitioned into
simultaneously executable classes, then apply the next swap layer.  Terms
whose physical edge coincides with an edge of the upcoming swap layer are
scheduled last and fused with the swap: SWAP * RZZ(theta) costs three
CNOTs and one RZ instead of five CNOTs and one RZ.  Swap gates at the end
of a cost set that no later gate depends on are removed again.

Emitted circuits are sequences of depth-one layers of primitive gates
(h, rx, rz, cx) acting on physical wires, with every cx on a coupling
edge and all gates of a layer vertex-disjoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .problem import H_SET, RX_SET, RZZ_SET, AbstractCircuit
from .strategy import SwapStrategy
from .topology import CouplingMap, Edge, _norm_edge, edge_coloring


class RoutingError(ValueError):
    """Base class for routing failures."""


class StrategyExhausted(RoutingError):
    """The strategy ran out of swap layers before the set was routed."""

    def __init__(self, message: str, unroutable):
        super().__init__(message)
        self.unroutable = tuple(unroutable)


class MappingInvalid(RoutingError):
    """Initial mapping is not a bijection onto the device qubits."""


class NoProgress(RoutingError):
    """The greedy baseline stalled without executing a gate."""


class Gate(NamedTuple):
    name: str  # "h" | "rx" | "rz" | "cx"
    qubits: tuple[int, ...]  # physical wires; cx is (control, target)
    angle: float | None = None


@dataclass
class RoutedCircuit:
    num_qubits: int
    layers: list[list[Gate]]
    initial_mapping: tuple[int, ...]
    final_mapping: tuple[int, ...]
    cnot_count: int = 0
    cnot_layer_count: int = 0
    rzz_absorbed_count: int = 0
    swaps_removed: int = 0
    swap_layers_used: tuple[int, ...] = ()

    def recount(self) -> None:
        self.layers = [layer for layer in self.layers if layer]
        self.cnot_count = sum(g.name == "cx" for layer in self.layers for g in layer)
        self.cnot_layer_count = sum(
            any(g.name == "cx" for g in layer) for layer in self.layers
        )

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for layer in self.layers:
            for g in layer:
                counts[g.name] = counts.get(g.name, 0) + 1
        return counts

    def depth(self) -> int:
        return len(self.layers)

    # serialization -------------------------------------------------------

    def to_qasm(self) -> str:
        lines = [
            "OPENQASM 2.0;",
            'include "qelib1.inc";',
            f"qreg q[{self.num_qubits}];",
        ]
        for layer in self.layers:
            for g in layer:
                if g.name == "cx":
                    lines.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
                elif g.name in ("rz", "rx"):
                    lines.append(f"{g.name}({g.angle!r}) q[{g.qubits[0]}];")
                else:
                    lines.append(f"{g.name} q[{g.qubits[0]}];")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        layers = []
        for layer in self.layers:
            out = []
            for g in layer:
                entry: dict = {"g": g.name, "q": list(g.qubits)}
                if g.angle is not None:
                    entry["angle"] = g.angle
                out.append(entry)
            layers.append(out)
        return json.dumps(
            {
                "n": self.num_qubits,
                "layers": layers,
                "cnot_count": self.cnot_count,
                "cnot_layer_count": self.cnot_layer_count,
                "rzz_absorbed": self.rzz_absorbed_count,
                "swaps_removed": self.swaps_removed,
                "swap_layers_used": list(self.swap_layers_used),
                "initial_mapping": list(self.initial_mapping),
                "final_mapping": list(self.final_mapping),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "RoutedCircuit":
        doc = json.loads(text)
        layers = [
            [Gate(e["g"], tuple(e["q"]), e.get("angle")) for e in layer]
            for layer in doc["layers"]
        ]
        rc = cls(
            num_qubits=doc["n"],
            layers=layers,
            initial_mapping=tuple(doc["initial_mapping"]),
            final_mapping=tuple(doc["final_mapping"]),
            rzz_absorbed_count=doc.get("rzz_absorbed", 0),
            swaps_removed=doc.get("swaps_removed", 0),
            swap_layers_used=tuple(doc.get("swap_layers_used", ())),
        )
        rc.recount()
        return rc


def check_layers(routed: RoutedCircuit, cmap: CouplingMap) -> None:
    """Exhaustive legality scan: per-layer vertex-disjointness and cx gates
    on coupling edges.  Raises RoutingError on violation."""
    for idx, layer in enumerate(routed.layers):
        seen: set[int] = set()
        for g in layer:
            for q in g.qubits:
                if q in seen:
                    raise RoutingError(f"layer {idx}: wire {q} used twice")
                seen.add(q)
            if g.name == "cx" and not cmap.has_edge(*g.qubits):
                raise RoutingError(f"layer {idx}: cx{g.qubits} off the coupling map")


# ---------------------------------------------------------------------------
# mapping helpers
# ---------------------------------------------------------------------------


def resolve_initial_mapping(initial, num_qubits: int) -> list[int]:
    """Normalize an initial logical-to-physical mapping to a permutation of
    range(num_qubits); shorter injective prefixes are completed in order."""
    if initial is None:
        return list(range(num_qubits))
    l2p = [int(q) for q in initial]
    if len(l2p) > num_qubits:
        raise MappingInvalid(f"mapping longer than device ({len(l2p)} > {num_qubits})")
    if len(set(l2p)) != len(l2p) or any(not (0 <= q < num_qubits) for q in l2p):
        raise MappingInvalid(f"mapping {l2p} is not injective into range({num_qubits})")
    if len(l2p) < num_qubits:
        free = [q for q in range(num_qubits) if q not in set(l2p)]
        l2p.extend(free)
    return l2p


# ---------------------------------------------------------------------------
# strategy router
# ---------------------------------------------------------------------------


def route(
    circuit: AbstractCircuit,
    cmap: CouplingMap,
    strategy: SwapStrategy,
    initial=None,
) -> RoutedCircuit:
    """Route an abstract circuit with a swap strategy.

    The strategy restarts from its first layer for every commuting cost
    set.  Raises StrategyExhausted if a cost set still has unexecuted
    terms when the layers run out.
    """
    if circuit.num_qubits > cmap.num_qubits:
        raise RoutingError(
            f"circuit needs {circuit.num_qubits} qubits, device has {cmap.num_qubits}"
        )
    if strategy.map.edges - cmap.edges:
        raise RoutingError("strategy is not hosted on this coupling map")
    n = cmap.num_qubits
    coloring = edge_coloring(cmap)
    l2p = resolve_initial_mapping(initial, n)
    p2l = [0] * n
    for logical, phys in enumerate(l2p):
        p2l[phys] = logical
    initial_mapping = tuple(l2p)

    out: list[list[Gate]] = []
    absorbed = 0
    removed = 0
    swap_layers_used: list[int] = []

    for kind, payload in circuit.sets:
        if kind == H_SET:
            out.append([Gate("h", (l2p[q],)) for q in payload])
            continue
        if kind == RX_SET:
            out.append([Gate("rx", (l2p[q],), theta) for q, theta in payload])
            continue
        if kind != RZZ_SET:
            raise RoutingError(f"unknown commuting set kind {kind!r}")

        remaining = list(payload)
        set_start = len(out)
        # (edge, fused, indices of the swap's three cx layers) per swap
        swap_records: list[tuple[Edge, bool, tuple[int, int, int]]] = []
        round_idx = 0
        while remaining:
            executable = [
                t for t in remaining if cmap.has_edge(l2p[t[0]], l2p[t[1]])
            ]
            exec_keys = {(t[0], t[1]) for t in executable}
            remaining = [t for t in remaining if (t[0], t[1]) not in exec_keys]

            will_swap = bool(remaining)
            if will_swap and round_idx >= len(strategy.layers):
                raise StrategyExhausted(
                    f"strategy exhausted after {round_idx} layers "
                    f"with {len(remaining)} terms left",
                    remaining,
                )
            upcoming = strategy.layers[round_idx] if will_swap else frozenset()

            fused: dict[Edge, float] = {}
            plain: dict[int, list[tuple[Edge, float]]] = {}
            for i, j, theta in executable:
                edge = _norm_edge(l2p[i], l2p[j])
                if edge in upcoming:
                    fused[edge] = theta
                else:
                    plain.setdefault(coloring[edge], []).append((edge, theta))
            for color in sorted(plain, key=lambda c: (-len(plain[c]), c)):
                gates = plain[color]
                out.append([Gate("cx", e) for e, _ in gates])
                out.append([Gate("rz", (e[1],), th) for e, th in gates])
                out.append([Gate("cx", e) for e, _ in gates])

            if will_swap:
                # swap layer, with absorbed terms placed inside the block:
                # fused pair: cx(u,v), rz(v), cx(v,u), cx(u,v)
                # bare swap:  cx(u,v),        cx(v,u), cx(u,v)
                swaps = sorted(upcoming)
                first = len(out)
                out.append([Gate("cx", e) for e in swaps])
                rz_layer = [
                    Gate("rz", (e[1],), fused[e]) for e in swaps if e in fused
                ]
                if rz_layer:
                    out.append(rz_layer)
                out.append([Gate("cx", (v, u)) for u, v in swaps])
                out.append([Gate("cx", e) for e in swaps])
                cx_layers = (first, len(out) - 2, len(out) - 1)
                absorbed += len(fused)
                for e in swaps:
                    swap_records.append((e, e in fused, cx_layers))
                    u, v = e
                    p2l[u], p2l[v] = p2l[v], p2l[u]
                    l2p[p2l[u]] = u
                    l2p[p2l[v]] = v
                round_idx += 1

        removed += _remove_trailing_swaps(out, set_start, swap_records, l2p, p2l)
        swap_layers_used.append(round_idx)

    routed = RoutedCircuit(
        num_qubits=n,
        layers=out,
        initial_mapping=initial_mapping,
        final_mapping=tuple(l2p),
        rzz_absorbed_count=absorbed,
        swaps_removed=removed,
        swap_layers_used=tuple(swap_layers_used),
    )
    routed.recount()
    return routed


def _remove_trailing_swaps(out, set_start, swap_records, l2p, p2l) -> int:
    """Delete bare swaps at the tail of a cost set that no later gate in
    the set depends on, walking backward and re-pointing the mapping."""
    removed = 0
    touched: set[int] = set()
    record_by_layer: dict[int, list[tuple[Edge, bool, tuple[int, int, int]]]] = {}
    for edge, is_fused, cx_layers in swap_records:
        record_by_layer.setdefault(cx_layers[-1], []).append((edge, is_fused, cx_layers))

    for layer_idx in range(len(out) - 1, set_start - 1, -1):
        blocks = record_by_layer.get(layer_idx, ())
        for edge, is_fused, cx_layers in blocks:
            u, v = edge
            if not is_fused and u not in touched and v not in touched:
                removed += 1
                for k in cx_layers:
                    out[k] = [
                        g
                        for g in out[k]
                        if not (g.name == "cx" and _norm_edge(*g.qubits) == edge)
                    ]
                # un-apply: positions u and v exchange content again
                p2l[u], p2l[v] = p2l[v], p2l[u]
                l2p[p2l[u]] = u
                l2p[p2l[v]] = v
            else:
                touched.update(edge)
        if not blocks:
            for g in out[layer_idx]:
                touched.update(g.qubits)
    return removed


# ---------------------------------------------------------------------------
# closed-form scaling estimates
# ---------------------------------------------------------------------------

_TABLE = {
    "line": {"swap_layers": 1.0, "cnot_layers": 3.0, "cnot_total": 1.5, "per_layer": 0.5},
    "grid2d": {"swap_layers": 0.5, "cnot_layers": 3.5, "cnot_total": 1.75, "per_layer": 0.5},
    "grid3d": {"swap_layers": 0.25, "cnot_layers": 2.75, "cnot_total": 1.375, "per_layer": 11.0 / 32.0},
    "heavy-hex": {"swap_layers": 1.0, "cnot_layers": 9.0, "cnot_total": 1.6, "per_layer": 8.0 / 45.0},
}


class UnknownFamily(RoutingError):
    """No closed-form scaling for this family."""


def count_table_estimates(family: str, n: int, density: float) -> dict[str, float]:
    """Leading-order per-cost-layer resource estimates for a family.

    Returns swap layers L_S, CNOT layers L_cx, total CNOTs and average
    CNOTs per layer l_cx.  For density < 1 these are lower bounds.
    """
    if family not in _TABLE:
        raise UnknownFamily(f"no scaling estimates for family {family!r}")
    if not (0 < density <= 1):
        raise RoutingError(f"density {density} outside (0, 1]")
    row = _TABLE[family]
    return {
        "L_S": row["swap_layers"] * density * n,
        "L_cx": row["cnot_layers"] * density * n,
        "cnot_total": row["cnot_total"] * density * n * n,
        "l_cx_avg": row["per_layer"] * n,
        "lower_bound": density < 1,
    }


def cnot_bound_from_strategy(cmap: CouplingMap, strategy: SwapStrategy, layers_used: int) -> float:
    """Per-cost-layer CNOT upper bound 2|E0|(L_S+1) - sum |S_i| for a
    routing that used the first `layers_used` layers of the strategy."""
    swaps = sum(len(strategy.layers[i]) for i in range(layers_used))
    return 2 * len(cmap.edges) * (layers_used + 1) - swaps


def cnot_layer_bound(family: str, layers_used: int) -> float:
    """Per-cost-layer CNOT-layer upper bound: (4*eta-1)(L_S+1)+1 for
    grids (eta=1 covers the line) and 9 L_S + 10 for heavy-hex."""
    eta = {"line": 1, "grid2d": 2, "grid3d": 3}.get(family)
    if eta is not None:
        return (4 * eta - 1) * (layers_used + 1) + 1
    if family == "heavy-hex":
        return 9 * layers_used + 10
    raise UnknownFamily(f"no layer bound for family {family!r}")


# ---------------------------------------------------------------------------
# commutation-aware greedy baseline
# ---------------------------------------------------------------------------


def route_baseline(
    circuit: AbstractCircuit,
    cmap: CouplingMap,
    initial=None,
) -> RoutedCircuit:
    """Greedy router that treats the whole commuting set as its front
    layer: apply everything executable, otherwise insert the single swap
    that most reduces the summed distance of the remaining terms.

    Ties break to the lowest edge; when no swap improves the sum, one
    endpoint of the closest pair walks a shortest path so the router
    always terminates.  An escape counter of n^2 swaps without executing
    a gate raises NoProgress.
    """
    if circuit.num_qubits > cmap.num_qubits:
        raise RoutingError(
            f"circuit needs {circuit.num_qubits} qubits, device has {cmap.num_qubits}"
        )
    n = cmap.num_qubits
    dist = cmap.shortest_path_lengths()
    coloring = edge_coloring(cmap)
    edges = cmap.sorted_edges
    adj = cmap.neighbors()
    l2p = resolve_initial_mapping(initial, n)
    p2l = [0] * n
    for logical, phys in enumerate(l2p):
        p2l[phys] = logical
    initial_mapping = tuple(l2p)

    out: list[list[Gate]] = []
    swap_budget = n * n

    def emit_batch(batch):
        classes: dict[int, list[tuple[Edge, float]]] = {}
        for i, j, theta in batch:
            edge = _norm_edge(l2p[i], l2p[j])
            classes.setdefault(coloring[edge], []).append((edge, theta))
        for color in sorted(classes, key=lambda c: (-len(classes[c]), c)):
            gates = classes[color]
            out.append([Gate("cx", e) for e, _ in gates])
            out.append([Gate("rz", (e[1],), th) for e, th in gates])
            out.append([Gate("cx", e) for e, _ in gates])

    for kind, payload in circuit.sets:
        if kind == H_SET:
            out.append([Gate("h", (l2p[q],)) for q in payload])
            continue
        if kind == RX_SET:
            out.append([Gate("rx", (l2p[q],), theta) for q, theta in payload])
            continue

        remaining = list(payload)
        stalls = 0
        while remaining:
            executable = [
                t for t in remaining if cmap.has_edge(l2p[t[0]], l2p[t[1]])
            ]
            if executable:
                exec_keys = {(t[0], t[1]) for t in executable}
                remaining = [t for t in remaining if (t[0], t[1]) not in exec_keys]
                emit_batch(executable)
                stalls = 0
                continue
            if stalls >= swap_budget:
                raise NoProgress(f"no executable gate after {stalls} swaps")

            pairs = [(l2p[i], l2p[j]) for i, j, _ in remaining]
            current = sum(dist[a][b] for a, b in pairs)
            best_edge = None
            best_sum = current
            for u, v in edges:
                after = 0
                for a, b in pairs:
                    a2 = v if a == u else (u if a == v else a)
                    b2 = v if b == u else (u if b == v else b)
                    after += dist[a2][b2]
                if after < best_sum:
                    best_sum = after
                    best_edge = (u, v)
            if best_edge is None:
                # walk one endpoint of the closest pair along a shortest path
                a, b = min(pairs, key=lambda p: dist[p[0]][p[1]])
                step = min(
                    (w for w in adj[a] if dist[w][b] < dist[a][b]),
                    default=None,
                )
                if step is None:
                    raise NoProgress(f"pair ({a},{b}) is disconnected")
                best_edge = _norm_edge(a, step)

            u, v = best_edge
            out.append([Gate("cx", (u, v))])
            out.append([Gate("cx", (v, u))])
            out.append([Gate("cx", (u, v))])
            p2l[u], p2l[v] = p2l[v], p2l[u]
            l2p[p2l[u]] = u
            l2p[p2l[v]] = v
            stalls += 1

    routed = RoutedCircuit(
        num_qubits=n,
        layers=out,
        initial_mapping=initial_mapping,
        final_mapping=tuple(l2p),
    )
    routed.recount()
    return routed
