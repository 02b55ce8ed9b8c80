import math

import pytest

from swaproute.strategy import (
    NonSquare,
    OutOfRange,
    SwapStrategy,
    StrategyError,
    Unreachable,
    density_curve,
    grid_layer_bound_2d,
    grid_layer_count_2d,
    grid_strategy,
    heavy_hex_iteration_length,
    heavy_hex_layer_bound,
    heavy_hex_simple_line_strategy,
    heavy_hex_strategy,
    line_strategy,
    min_layers_for_density,
    qubit_position_after,
    reachability,
    strategy_for_map,
)
from swaproute.topology import (
    GRID2D,
    HEAVY_HEX,
    LINE,
    build_coupling_map,
    unfold_heavy_hex,
    unrolled_heavy_hex,
)

from oracles import simulate_line_positions


def test_line_layers_shape():
    s = line_strategy(6)
    assert len(s) == 4
    assert s.layers[0] == {(0, 1), (2, 3), (4, 5)}
    assert s.layers[1] == {(1, 2), (3, 4)}
    s5 = line_strategy(5)
    assert s5.layers[0] == {(0, 1), (2, 3)}
    assert s5.layers[1] == {(1, 2), (3, 4)}
    assert len(line_strategy(2)) == 0


def test_every_layer_is_matching():
    for strat in (
        line_strategy(9),
        grid_strategy(4, 2),
        grid_strategy(3, 3),
        heavy_hex_strategy(unfold_heavy_hex(build_coupling_map(HEAVY_HEX, (2, 2)))),
    ):
        for layer in strat.layers:
            seen = set()
            for u, v in layer:
                assert u not in seen and v not in seen
                seen.update((u, v))
                assert (min(u, v), max(u, v)) in strat.map.edges


def test_position_formula_matches_simulation():
    for n in range(2, 13):
        positions = simulate_line_positions(n, n)
        for k in range(n + 1):
            for i in range(n):
                assert qubit_position_after(n, i, k) == positions[k][i]


def test_position_formula_examples():
    assert qubit_position_after(6, 0, 6) == 5  # full reversal end point
    assert qubit_position_after(6, 3, 2) == 1
    for n in (5, 8):
        assert [qubit_position_after(n, i, 0) for i in range(n)] == list(range(n))
    with pytest.raises(OutOfRange):
        qubit_position_after(6, 6, 0)
    with pytest.raises(OutOfRange):
        qubit_position_after(6, 0, 7)


def test_full_reversal_at_n():
    for n in range(2, 12):
        assert [qubit_position_after(n, i, n) for i in range(n)] == list(
            range(n - 1, -1, -1)
        )


def test_line_density_one_at_n_minus_2():
    for n in (2, 5, 9, 16):
        s = line_strategy(n)
        L, est = min_layers_for_density(s, 1.0)
        assert L == max(n - 2, 0)
        assert est == pytest.approx((n - 2) * 1.0)


def test_line_density_below_before():
    s = line_strategy(6)
    _, density = reachability(s, 3)
    assert density < 1.0
    _, density = reachability(s, 4)
    assert density == 1.0


def test_grid_strategy_counts():
    s = grid_strategy(4, 2)
    assert len(s) == grid_layer_count_2d(4) == 8
    L, est = min_layers_for_density(s, 1.0)
    assert L <= min(8, grid_layer_bound_2d(4))
    assert est == pytest.approx(0.5 * 16)
    s2 = grid_strategy(2, 2)
    L2, _ = min_layers_for_density(s2, 1.0)
    assert len(s2) == 1 and L2 == 1


def test_grid_rejects_non_square():
    with pytest.raises(NonSquare):
        strategy_for_map(build_coupling_map(GRID2D, (4, 3)))
    with pytest.raises(NonSquare):
        grid_strategy(3, eta=4)


def test_grid3d_reaches_full():
    for x in (2, 3):
        s = grid_strategy(x, 3)
        L, est = min_layers_for_density(s, 1.0)
        assert L <= len(s)
        assert est == pytest.approx(0.25 * x ** 3)


def test_heavy_hex_iteration_length():
    assert heavy_hex_iteration_length(60) == 18
    assert heavy_hex_iteration_length(32) == 18
    assert heavy_hex_iteration_length(12) == 10
    for l in (12, 32, 60, 96):
        k = heavy_hex_iteration_length(l)
        assert k % 8 == 2 and k > l // 4


def test_heavy_hex_strategy_layout():
    cm = build_coupling_map(HEAVY_HEX, (3, 3))
    u = unfold_heavy_hex(cm)
    s = heavy_hex_strategy(u)
    k = heavy_hex_iteration_length(u.line_length)
    assert len(s) == 5 * (k + 2) == 100
    assert 5 * k + 10 <= heavy_hex_layer_bound(cm.num_qubits)
    L, est = min_layers_for_density(s, 1.0)
    assert L <= len(s)
    assert est == pytest.approx(68.0)


def test_heavy_hex_simple_saturates_below_one():
    u = unfold_heavy_hex(build_coupling_map(HEAVY_HEX, (3, 3)))
    simple = heavy_hex_simple_line_strategy(u)
    with pytest.raises(Unreachable):
        min_layers_for_density(simple, 1.0)
    _, d_simple = reachability(simple, len(simple))
    full = heavy_hex_strategy(u)
    _, d_full = reachability(full, len(full))
    assert d_simple < d_full == 1.0
    # dangling qubits only ever meet passing line traffic
    pairs, _ = reachability(simple, len(simple))
    dangling = set(u.dangling.values())
    for a in dangling:
        for b in dangling:
            if a < b:
                assert (a, b) not in pairs


def test_reachability_monotone_and_bounds():
    s = grid_strategy(4, 2)
    curve = density_curve(s)
    assert curve == sorted(curve)
    assert curve[0] > 0  # initial coupling-map adjacency counts
    with pytest.raises(OutOfRange):
        reachability(s, len(s) + 1)
    with pytest.raises(OutOfRange):
        min_layers_for_density(s, 0.0)


def test_min_layers_line_485():
    s = line_strategy(485)
    L, est = min_layers_for_density(s, 1.0)
    assert L == 483
    assert est == pytest.approx(483.0)


def test_grid_22_within_bound():
    s = grid_strategy(22, 2)
    L, _ = min_layers_for_density(s, 1.0)
    assert L <= grid_layer_bound_2d(22) == pytest.approx(264.5)


def test_strategy_json_roundtrip():
    cm = build_coupling_map(LINE, (5,))
    s = line_strategy(5)
    again = SwapStrategy.from_json(s.to_json(), cm)
    assert again.layers == s.layers


def test_strategy_validation():
    cm = build_coupling_map(LINE, (4,))
    with pytest.raises(StrategyError):
        SwapStrategy(cmap_bad := cm, (frozenset({(0, 2)}),))
    with pytest.raises(StrategyError):
        SwapStrategy(cm, (frozenset({(0, 1), (1, 2)}),))


def test_unrolled_full_strategy_saturates():
    for n in (10, 20, 30, 40):
        u = unrolled_heavy_hex(n)
        s = heavy_hex_strategy(u)
        L, _ = min_layers_for_density(s, 1.0)
        assert L <= len(s)
