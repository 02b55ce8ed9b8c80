"""Coupling-map construction, edge coloring and heavy-hex unfolding.

Supported device families:

- line:       path 0-1-...-n-1
- grid2d:     x*y qubits with 4-neighbour edges, row-major numbering
- grid3d:     x*y*z qubits with 6-neighbour edges
- heavy-hex:  i rows by j columns of hexagonal cells, one extra qubit on
              every hexagon edge (n = 5ij + 4(i+j) - 1)
- custom:     arbitrary edge list

Heavy-hex numbering is row-major over the brick-wall drawing: for each
qubit row (top to bottom) the row qubits are numbered left to right,
followed by the vertical connector qubits hanging below that row.  This
order is fixed so that fixtures and unfoldings are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

LINE = "line"
GRID2D = "grid2d"
GRID3D = "grid3d"
HEAVY_HEX = "heavy-hex"
CUSTOM = "custom"

FAMILIES = (LINE, GRID2D, GRID3D, HEAVY_HEX, CUSTOM)

Edge = tuple[int, int]


class TopologyError(ValueError):
    """Base class for coupling-map construction errors."""


class InvalidDims(TopologyError):
    """Dimensions are missing, non-positive or overflow."""


class UnfoldFailed(TopologyError):
    """No valid unfolding line exists for this map."""


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CouplingMap:
    """Undirected device graph.

    Edges are stored normalized (u < v).  Instances are immutable and may
    be shared freely between concurrent routing jobs.
    """

    num_qubits: int
    edges: frozenset[Edge]
    family: str = CUSTOM
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        n = self.num_qubits
        if n < 1:
            raise InvalidDims(f"need at least one qubit, got {n}")
        for u, v in self.edges:
            if u == v:
                raise TopologyError(f"self-loop on qubit {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise TopologyError(f"edge ({u},{v}) out of range for n={n}")
            if u > v:
                raise TopologyError(f"edge ({u},{v}) not normalized")

    @property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for u, v in self.sorted_edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self) -> list[int]:
        deg = [0] * self.num_qubits
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def shortest_path_lengths(self) -> list[list[int]]:
        """All-pairs BFS distances; unreachable pairs get a large sentinel."""
        n = self.num_qubits
        adj = self.neighbors()
        inf = n + 1
        dist = [[inf] * n for _ in range(n)]
        for src in range(n):
            d = dist[src]
            d[src] = 0
            queue = [src]
            while queue:
                nxt = []
                for u in queue:
                    for v in adj[u]:
                        if d[v] == inf:
                            d[v] = d[u] + 1
                            nxt.append(v)
                queue = nxt
        return dist

    # serialization -------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "n": self.num_qubits,
            "family": self.family,
            "dims": list(self.dims),
            "edges": [[u, v] for u, v in self.sorted_edges],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CouplingMap":
        doc = json.loads(text)
        edges = frozenset(_norm_edge(int(u), int(v)) for u, v in doc["edges"])
        return cls(
            num_qubits=int(doc["n"]),
            edges=edges,
            family=doc.get("family", CUSTOM),
            dims=tuple(doc.get("dims", ())),
        )

    def to_edge_list(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in self.sorted_edges) + "\n"

    @classmethod
    def from_edge_list(cls, text: str, num_qubits: int | None = None) -> "CouplingMap":
        edges = set()
        max_q = -1
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, v = (int(tok) for tok in line.split()[:2])
            edges.add(_norm_edge(u, v))
            max_q = max(max_q, u, v)
        n = num_qubits if num_qubits is not None else max_q + 1
        return cls(num_qubits=n, edges=frozenset(edges), family=CUSTOM)

    @classmethod
    def load(cls, path: str | Path) -> "CouplingMap":
        path = Path(path)
        text = path.read_text()
        if path.suffix == ".json" or text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_edge_list(text)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def build_coupling_map(family: str, dims) -> CouplingMap:
    """Build one of the named topologies.

    dims: line -> (n,); grid2d -> (x, y); grid3d -> (x, y, z);
    heavy-hex -> (i, j) hexagon rows/columns.
    """
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise InvalidDims(f"dimensions must be >= 1, got {dims}")
    if family == LINE:
        (n,) = dims
        edges = frozenset((k, k + 1) for k in range(n - 1))
        return CouplingMap(n, edges, LINE, dims)
    if family == GRID2D:
        x, y = dims
        return _grid_map((x, y), GRID2D)
    if family == GRID3D:
        x, y, z = dims
        return _grid_map((x, y, z), GRID3D)
    if family == HEAVY_HEX:
        i, j = dims
        return _heavy_hex_map(i, j)
    raise InvalidDims(f"unknown family {family!r}")


def _grid_map(shape: tuple[int, ...], family: str) -> CouplingMap:
    n = 1
    for d in shape:
        n *= d
        if n > 10**7:
            raise InvalidDims(f"grid {shape} too large")
    strides = []
    acc = 1
    for d in reversed(shape):
        strides.append(acc)
        acc *= d
    strides.reverse()

    def index(coord):
        return sum(c * s for c, s in zip(coord, strides))

    edges = set()
    for flat in range(n):
        coord = []
        rem = flat
        for s in strides:
            coord.append(rem // s)
            rem %= s
        for axis, d in enumerate(shape):
            if coord[axis] + 1 < d:
                nb = list(coord)
                nb[axis] += 1
                edges.add(_norm_edge(flat, index(nb)))
    return CouplingMap(n, frozenset(edges), family, shape)


# heavy-hex geometry --------------------------------------------------------
#
# Brick-wall drawing with i hexagon rows and j hexagon columns.  Qubit rows
# y = 0..i hold the hexagon corner and horizontal-edge qubits; hexagon row r
# additionally has j+1 vertical connector qubits at columns
# x in {o_r, o_r+4, ..., o_r+4j} with offset o_r = 2*(r % 2).
# Row x-ranges: y=0 -> [0, 4j]; 0<y<i -> [0, 4j+2]; y=i -> [o_{i-1}, o_{i-1}+4j].


@dataclass(frozen=True)
class _HexGeometry:
    i: int
    j: int
    row_qubit: dict  # (y, x) -> qubit index
    conn_qubit: dict  # (r, x) -> qubit index
    row_range: dict  # y -> (x_min, x_max)

    def conn_columns(self, r: int) -> list[int]:
        off = 2 * (r % 2)
        return [off + 4 * c for c in range(self.j + 1)]


def _heavy_hex_geometry(i: int, j: int) -> _HexGeometry:
    row_qubit: dict = {}
    conn_qubit: dict = {}
    row_range: dict = {}
    idx = 0
    for y in range(i + 1):
        if y == 0:
            lo, hi = 0, 4 * j
        elif y == i:
            off = 2 * ((i - 1) % 2)
            lo, hi = off, off + 4 * j
        else:
            lo, hi = 0, 4 * j + 2
        row_range[y] = (lo, hi)
        for x in range(lo, hi + 1):
            row_qubit[(y, x)] = idx
            idx += 1
        if y < i:
            off = 2 * (y % 2)
            for x in range(off, off + 4 * j + 1, 4):
                conn_qubit[(y, x)] = idx
                idx += 1
    return _HexGeometry(i, j, row_qubit, conn_qubit, row_range)


def _heavy_hex_map(i: int, j: int) -> CouplingMap:
    geo = _heavy_hex_geometry(i, j)
    edges = set()
    for (y, x), q in geo.row_qubit.items():
        if (y, x + 1) in geo.row_qubit:
            edges.add(_norm_edge(q, geo.row_qubit[(y, x + 1)]))
    for (r, x), q in geo.conn_qubit.items():
        edges.add(_norm_edge(q, geo.row_qubit[(r, x)]))
        edges.add(_norm_edge(q, geo.row_qubit[(r + 1, x)]))
    n = len(geo.row_qubit) + len(geo.conn_qubit)
    expected = 5 * i * j + 4 * (i + j) - 1
    if n != expected:
        raise TopologyError(f"heavy-hex size bug: built {n}, expected {expected}")
    return CouplingMap(n, frozenset(edges), HEAVY_HEX, (i, j))


# ---------------------------------------------------------------------------
# edge coloring
# ---------------------------------------------------------------------------


def edge_coloring(cmap: CouplingMap) -> dict[Edge, int]:
    """Proper edge coloring keyed by normalized edge.

    Line: 2 colors (even/odd edges).  Grids: 2 colors per axis so each
    strategy swap layer is monochromatic.  Heavy-hex: 3 colors.  Custom:
    Misra-Gries with at most max_degree + 1 colors.
    """
    if cmap.family == LINE:
        return {(k, k + 1): k % 2 for k, _ in enumerate(cmap.sorted_edges)}
    if cmap.family in (GRID2D, GRID3D):
        return _grid_coloring(cmap)
    if cmap.family == HEAVY_HEX:
        return _heavy_hex_coloring(cmap)
    return misra_gries_coloring(cmap)


def _grid_coords(shape, flat):
    coord = []
    for d in reversed(shape):
        coord.append(flat % d)
        flat //= d
    coord.reverse()
    return coord


def _grid_coloring(cmap: CouplingMap) -> dict[Edge, int]:
    shape = cmap.dims
    coloring = {}
    for u, v in cmap.sorted_edges:
        cu = _grid_coords(shape, u)
        cv = _grid_coords(shape, v)
        axis = next(a for a in range(len(shape)) if cu[a] != cv[a])
        # parity includes all coordinates up to the edge axis so that the
        # phase-staggered strategy swap layers are single color classes
        parity = sum(cu[: axis + 1]) % 2
        coloring[(u, v)] = 2 * axis + parity
    return coloring


def _heavy_hex_coloring(cmap: CouplingMap) -> dict[Edge, int]:
    i, j = cmap.dims
    geo = _heavy_hex_geometry(i, j)
    pos_row = {q: (y, x) for (y, x), q in geo.row_qubit.items()}
    pos_conn = {q: (r, x) for (r, x), q in geo.conn_qubit.items()}
    coloring = {}
    for u, v in cmap.sorted_edges:
        if u in pos_row and v in pos_row:
            (y, x1), (_, x2) = pos_row[u], pos_row[v]
            coloring[(u, v)] = (min(x1, x2) + y) % 3
        else:
            cq, rq = (u, v) if u in pos_conn else (v, u)
            _, x = pos_conn[cq]
            y = pos_row[rq][0]
            coloring[_norm_edge(u, v)] = (x + 1 + y) % 3
    return coloring


def misra_gries_coloring(cmap: CouplingMap) -> dict[Edge, int]:
    """Edge-color an arbitrary simple graph with <= max_degree + 1 colors
    (Misra-Gries: maximal fan, cd-path inversion, fan rotation)."""
    n = cmap.num_qubits
    deg = cmap.degree()
    max_colors = (max(deg) if deg else 0) + 1
    color_of: dict[Edge, int] = {}
    incident: list[dict[int, int]] = [dict() for _ in range(n)]  # vertex -> color -> other

    def free_color(v):
        return next(c for c in range(max_colors) if c not in incident[v])

    def is_free(c, v):
        return c not in incident[v]

    def set_color(a, b, c):
        e = _norm_edge(a, b)
        old = color_of.get(e)
        if old is not None:
            del incident[a][old]
            del incident[b][old]
        if c is None:
            color_of.pop(e, None)
            return
        color_of[e] = c
        incident[a][c] = b
        incident[b][c] = a

    def edge_color(a, b):
        return color_of.get(_norm_edge(a, b))

    for u, v in cmap.sorted_edges:
        # maximal fan of u starting at v: each next edge's color is free
        # on the previous fan vertex
        fan = [v]
        while True:
            cand = next(
                (
                    w
                    for c, w in sorted(incident[u].items())
                    if w not in fan and is_free(c, fan[-1])
                ),
                None,
            )
            if cand is None:
                break
            fan.append(cand)
        c = free_color(u)
        d = free_color(fan[-1])
        if c != d and not is_free(d, u):
            # collect the cd path from u (starts with the d-colored edge)
            path = []
            prev, cur = u, d
            while cur in incident[prev]:
                nxt = incident[prev][cur]
                path.append((prev, nxt, cur))
                prev = nxt
                cur = c if cur == d else d
            for a, b, _ in path:
                set_color(a, b, None)
            for a, b, col in path:
                set_color(a, b, c if col == d else d)
        # shortest fan prefix that is still a fan and ends where d is free
        w_idx = None
        for j in range(len(fan)):
            ok = is_free(d, fan[j])
            for i in range(1, j + 1):
                if not is_free(edge_color(u, fan[i]), fan[i - 1]):
                    ok = False
                    break
            if ok:
                w_idx = j
                break
        if w_idx is None:  # cannot happen for a maximal fan
            raise TopologyError("edge coloring failed to find a rotation point")
        for i in range(w_idx):
            col = edge_color(u, fan[i + 1])
            set_color(u, fan[i + 1], None)  # free before reassigning
            set_color(u, fan[i], col)
        set_color(u, fan[w_idx], d)
    return color_of


def check_proper_coloring(cmap: CouplingMap, coloring: dict[Edge, int]) -> bool:
    """Exhaustive scan: every color class must be a matching."""
    seen: dict[tuple[int, int], Edge] = {}
    for (u, v), c in coloring.items():
        for vert in (u, v):
            key = (vert, c)
            if key in seen:
                return False
            seen[key] = (u, v)
    return set(coloring) == cmap.edges


# ---------------------------------------------------------------------------
# heavy-hex unfolding
# ---------------------------------------------------------------------------

GROUP_A = "A"
GROUP_B = "B"
GROUP_TAIL_SHORT = "tail_short"
GROUP_TAIL_LONG = "tail_long"


@dataclass(frozen=True)
class UnfoldedHeavyHex:
    """A heavy-hex map re-read as a line with periodic dangling qubits.

    line_order lists the physical qubits along the working line (length l,
    l % 4 == 0).  dangling maps a line position p (p % 4 == 1) to the
    off-line qubit attached there; the edge kept for each dangling qubit is
    the one into the line, all others are in removed_edges.  tail_short and
    tail_long are the leading and trailing line segments that carry no
    dangling attachment (the generic construction gives 5 and t qubits with
    t % 4 == 2).  groups assigns every qubit to one of A, B, V0..V7,
    tail_short, tail_long: dangling qubits alternate between A (attach
    position 1 mod 8) and B (attach position 5 mod 8), spaced eight line
    nodes apart; remaining line nodes get V_{(p // 4) % 8}.
    """

    map: CouplingMap
    line_order: tuple[int, ...]
    dangling: dict[int, int]
    tail_short: tuple[int, ...]
    tail_long: tuple[int, ...]
    removed_edges: frozenset[Edge]
    groups: dict[int, str] = field(compare=False)

    @property
    def line_length(self) -> int:
        return len(self.line_order)

    def line_edges(self) -> list[Edge]:
        lo = self.line_order
        return [_norm_edge(lo[p], lo[p + 1]) for p in range(len(lo) - 1)]

    def dangling_edges(self, group: str | None = None) -> list[Edge]:
        out = []
        for p, q in sorted(self.dangling.items()):
            if group is None or self.groups[q] == group:
                out.append(_norm_edge(self.line_order[p], q))
        return out


def _assign_groups(line_order, dangling, first_attach, last_attach) -> dict[int, str]:
    groups = {}
    for p, q in enumerate(line_order):
        if p < first_attach:
            groups[q] = GROUP_TAIL_SHORT
        elif p > last_attach:
            groups[q] = GROUP_TAIL_LONG
        else:
            groups[q] = f"V{(p // 4) % 8}"
    for p, q in dangling.items():
        groups[q] = GROUP_A if p % 8 == 1 else GROUP_B
    return groups


def _finish_unfolding(cmap, path, keep_edge_of) -> UnfoldedHeavyHex:
    """Assemble the record from a line path and dangling attachments.

    keep_edge_of: dangling qubit -> line qubit it stays attached to.
    """
    n = cmap.num_qubits
    pos = {q: p for p, q in enumerate(path)}
    dangling = {}
    for q, anchor in keep_edge_of.items():
        p = pos[anchor]
        if p % 4 != 1:
            raise UnfoldFailed(f"dangling qubit {q} attaches at position {p} != 1 mod 4")
        if p in dangling:
            raise UnfoldFailed(f"two dangling qubits at line position {p}")
        dangling[p] = q

    line_edge_set = {_norm_edge(path[p], path[p + 1]) for p in range(len(path) - 1)}
    kept_dangling = {_norm_edge(q, anchor) for q, anchor in keep_edge_of.items()}
    removed = frozenset(cmap.edges - line_edge_set - kept_dangling)

    attach_positions = sorted(dangling)
    first = attach_positions[0] if attach_positions else 5
    last = attach_positions[-1] if attach_positions else 5
    tail_short = tuple(path[:first])
    tail_long = tuple(path[last + 1 :])

    unfolded = UnfoldedHeavyHex(
        map=cmap,
        line_order=tuple(path),
        dangling=dangling,
        tail_short=tail_short,
        tail_long=tail_long,
        removed_edges=removed,
        groups=_assign_groups(path, dangling, first, last),
    )
    _validate_unfolding(unfolded, n)
    return unfolded


def _validate_unfolding(u: UnfoldedHeavyHex, n: int) -> None:
    if u.line_length % 4 != 0:
        raise UnfoldFailed(f"line length {u.line_length} not a multiple of 4")
    covered = list(u.line_order) + list(u.dangling.values())
    if len(covered) != n or len(set(covered)) != n:
        raise UnfoldFailed("line and dangling qubits do not partition the device")
    if len(u.tail_long) % 4 != 2:
        raise UnfoldFailed(f"long tail has {len(u.tail_long)} qubits, not 2 mod 4")
    edges = u.map.edges
    for e in u.line_edges():
        if e not in edges or e in u.removed_edges:
            raise UnfoldFailed("line uses a removed or missing edge")
    for e in u.dangling_edges():
        if e not in edges or e in u.removed_edges:
            raise UnfoldFailed("dangling attachment is not a device edge")


def unfold_heavy_hex(cmap: CouplingMap) -> UnfoldedHeavyHex:
    """Unfold a heavy-hex map along its canonical serpentine line.

    The serpentine starts on the rightmost connector of the first hexagon
    row, sweeps each qubit row alternately right-to-left and left-to-right,
    and steps down through the end-of-row connectors; the final connector
    is dropped to make the line length a multiple of 4.  Every off-line
    connector keeps its edge into the row above (attach position 1 mod 4)
    and its other edge is removed.
    """
    if cmap.family != HEAVY_HEX:
        raise UnfoldFailed(f"cannot unfold family {cmap.family!r}")
    i, j = cmap.dims
    geo = _heavy_hex_geometry(i, j)
    R, C = geo.row_qubit, geo.conn_qubit

    path = [C[(0, 4 * j)]]
    used_conns = {(0, 4 * j)}
    enter = 4 * j  # column where we enter row 0
    for y in range(i + 1):
        lo, hi = geo.row_range[y]
        exit_col = lo + hi - enter  # opposite end of the row
        step = 1 if exit_col > enter else -1
        path.extend(R[(y, x)] for x in range(enter, exit_col + step, step))
        if y < i:
            path.append(C[(y, exit_col)])
            used_conns.add((y, exit_col))
            enter = exit_col
    if i >= 2:
        # close with the spare connector next to the last row's end
        f = exit_col
        path.append(C[(i - 1, f)])
        used_conns.add((i - 1, f))

    keep_edge_of: dict[int, int] = {}
    drop = len(path) % 4
    for _ in range(drop):
        q = path.pop()
        # dropped nodes are always end connectors; re-attach to the row above
        (r, x) = next(key for key, val in C.items() if val == q)
        used_conns.discard((r, x))
        keep_edge_of[q] = R[(r, x)]
    for (r, x), q in C.items():
        if (r, x) not in used_conns and q not in keep_edge_of:
            keep_edge_of[q] = R[(r, x)]

    if len(path) < 8:
        raise UnfoldFailed(f"working line of length {len(path)} is too short")
    return _finish_unfolding(cmap, path, keep_edge_of)


def unrolled_heavy_hex(n: int) -> UnfoldedHeavyHex:
    """Idealized unrolled topology: a line with a dangling qubit on every
    fourth line node, used as a benchmarking target for arbitrary n.

    The dangling attachments start at line position 5, reproducing the
    five-node leading tail of real unfoldings; very small n fall back to
    attachments from position 1.  Returns an UnfoldedHeavyHex whose map
    is a Custom coupling map.
    """
    if n < 4:
        raise InvalidDims(f"need at least 4 qubits, got {n}")

    def split(first):
        for d in range(n // 5, -1, -1):
            l = n - d
            if l % 4 == 0 and (d == 0 or first + 4 * (d - 1) <= l - 3):
                return l, d
        return None, 0

    first = 5
    l, d = split(first)
    if d == 0:
        l1, d1 = split(1)
        if d1 > 0:
            first, l, d = 1, l1, d1
    if l is None:
        raise InvalidDims(f"no line/dangling split for n={n}")
    line = list(range(l))
    dangling = {first + 4 * k: l + k for k in range(d)}
    edges = {(p, p + 1) for p in range(l - 1)}
    edges |= {_norm_edge(p, q) for p, q in dangling.items()}
    cmap = CouplingMap(n, frozenset(edges), CUSTOM, (n,))
    attach = sorted(dangling)
    lo = attach[0] if attach else 5
    hi = attach[-1] if attach else 5
    unfolded = UnfoldedHeavyHex(
        map=cmap,
        line_order=tuple(line),
        dangling=dangling,
        tail_short=tuple(line[:lo]),
        tail_long=tuple(line[hi + 1 :]),
        removed_edges=frozenset(),
        groups=_assign_groups(line, dangling, lo, hi),
    )
    _validate_unfolding(unfolded, n)
    return unfolded
