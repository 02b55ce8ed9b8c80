import random

import pytest

from swaproute.topology import (
    CUSTOM,
    GRID2D,
    GRID3D,
    HEAVY_HEX,
    LINE,
    CouplingMap,
    InvalidDims,
    TopologyError,
    UnfoldFailed,
    build_coupling_map,
    check_proper_coloring,
    edge_coloring,
    misra_gries_coloring,
    unfold_heavy_hex,
    unrolled_heavy_hex,
)

from oracles import longest_simple_path


def test_line_is_path():
    cm = build_coupling_map(LINE, (5,))
    assert cm.num_qubits == 5
    assert cm.edges == {(0, 1), (1, 2), (2, 3), (3, 4)}


def test_grid2d_counts():
    cm = build_coupling_map(GRID2D, (4, 4))
    assert cm.num_qubits == 16
    assert len(cm.edges) == 24  # 2*x*(x-1) for the square grid
    cm = build_coupling_map(GRID2D, (3, 5))
    assert cm.num_qubits == 15
    assert len(cm.edges) == 3 * 4 + 5 * 2


def test_grid3d_counts():
    cm = build_coupling_map(GRID3D, (3, 3, 3))
    assert cm.num_qubits == 27
    assert len(cm.edges) == 3 * 9 * 2  # 3 axes x x^2(x-1)


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (4, 4)])
def test_heavy_hex_closed_forms(i, j):
    cm = build_coupling_map(HEAVY_HEX, (i, j))
    assert cm.num_qubits == 5 * i * j + 4 * (i + j) - 1
    assert len(cm.edges) == 6 * i * j + 4 * (i + j) - 2
    degs = cm.degree()
    assert max(degs) <= 3  # heavy-hex keeps degree at most three


def test_heavy_hex_33_is_68():
    assert build_coupling_map(HEAVY_HEX, (3, 3)).num_qubits == 68


def test_invalid_dims():
    with pytest.raises(InvalidDims):
        build_coupling_map(LINE, (0,))
    with pytest.raises(InvalidDims):
        build_coupling_map(HEAVY_HEX, (1, 0))
    with pytest.raises(InvalidDims):
        build_coupling_map("hexagon", (2, 2))


def test_map_validation():
    with pytest.raises(TopologyError):
        CouplingMap(3, frozenset({(1, 1)}))
    with pytest.raises(TopologyError):
        CouplingMap(3, frozenset({(0, 5)}))


def test_serialization_roundtrip(tmp_path):
    cm = build_coupling_map(HEAVY_HEX, (2, 2))
    again = CouplingMap.from_json(cm.to_json())
    assert again == cm
    text = cm.to_edge_list()
    again = CouplingMap.from_edge_list(text, cm.num_qubits)
    assert again.edges == cm.edges
    path = tmp_path / "map.json"
    path.write_text(cm.to_json())
    assert CouplingMap.load(path) == cm


# -- colorings ---------------------------------------------------------------


def test_line_coloring_two_colors():
    cm = build_coupling_map(LINE, (6,))
    col = edge_coloring(cm)
    assert check_proper_coloring(cm, col)
    assert col[(0, 1)] == col[(2, 3)] == col[(4, 5)] == 0
    assert col[(1, 2)] == col[(3, 4)] == 1


def test_grid_coloring_matches_swap_layers():
    # each strategy layer of the 4x4 grid must be monochromatic
    from swaproute.strategy import grid_strategy

    cm = build_coupling_map(GRID2D, (4, 4))
    col = edge_coloring(cm)
    assert check_proper_coloring(cm, col)
    assert len(set(col.values())) == 4
    strat = grid_strategy(4, 2)
    for layer in strat.layers:
        assert len({col[e] for e in layer}) == 1


def test_heavy_hex_coloring_three_matchings():
    cm = build_coupling_map(HEAVY_HEX, (3, 3))
    col = edge_coloring(cm)
    assert check_proper_coloring(cm, col)  # every class a matching
    assert len(set(col.values())) == 3


def test_misra_gries_random_graphs():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(2, 20)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = frozenset(rng.sample(pairs, rng.randint(1, len(pairs))))
        cm = CouplingMap(n, edges, CUSTOM)
        col = misra_gries_coloring(cm)
        assert check_proper_coloring(cm, col)
        assert len(set(col.values())) <= max(cm.degree()) + 1


# -- unfolding ---------------------------------------------------------------


def test_unfold_33():
    cm = build_coupling_map(HEAVY_HEX, (3, 3))
    u = unfold_heavy_hex(cm)
    assert u.line_length == 60
    assert len(u.tail_short) == 5
    assert len(u.tail_long) == 18
    assert len(u.dangling) == 8
    # every device qubit exactly once across line and dangling
    covered = sorted(list(u.line_order) + list(u.dangling.values()))
    assert covered == list(range(68))


def test_unfold_line_is_simple_path():
    cm = build_coupling_map(HEAVY_HEX, (2, 3))
    u = unfold_heavy_hex(cm)
    live = cm.edges - u.removed_edges
    for e in u.line_edges():
        assert e in live
    # dangling qubits keep exactly one live edge, into the line
    line_set = set(u.line_order)
    for pos, q in u.dangling.items():
        incident = [e for e in live if q in e]
        assert len(incident) == 1
        other = incident[0][0] if incident[0][1] == q else incident[0][1]
        assert other == u.line_order[pos]
        assert pos % 4 == 1
    # no live edge between non-consecutive line nodes
    consec = set(u.line_edges())
    for a, b in live:
        if a in line_set and b in line_set:
            assert (min(a, b), max(a, b)) in consec


def test_unfold_11_longest_line():
    cm = build_coupling_map(HEAVY_HEX, (1, 1))
    u = unfold_heavy_hex(cm)
    lmax = longest_simple_path(cm.num_qubits, cm.edges)
    assert u.line_length == lmax - (lmax % 4) == 12


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 3)])
def test_unfold_partition_invariants(i, j):
    cm = build_coupling_map(HEAVY_HEX, (i, j))
    u = unfold_heavy_hex(cm)
    assert u.line_length % 4 == 0
    assert len(u.tail_long) % 4 == 2
    groups = set(u.groups.values())
    assert groups <= {"A", "B", "tail_short", "tail_long"} | {f"V{k}" for k in range(8)}
    # A/B alternate with eight line nodes between same-group attachments
    a_pos = sorted(p for p, q in u.dangling.items() if u.groups[q] == "A")
    b_pos = sorted(p for p, q in u.dangling.items() if u.groups[q] == "B")
    assert all(p % 8 == 1 for p in a_pos)
    assert all(p % 8 == 5 for p in b_pos)


def test_unfold_rejects_custom():
    cm = CouplingMap(4, frozenset({(0, 1), (1, 2), (2, 3)}), CUSTOM)
    with pytest.raises(UnfoldFailed):
        unfold_heavy_hex(cm)


def test_unrolled_shapes():
    u = unrolled_heavy_hex(40)
    assert u.line_length + len(u.dangling) == 40
    assert u.line_length % 4 == 0
    assert len(u.tail_long) % 4 == 2
    assert all(p % 4 == 1 for p in u.dangling)
    with pytest.raises(InvalidDims):
        unrolled_heavy_hex(3)
