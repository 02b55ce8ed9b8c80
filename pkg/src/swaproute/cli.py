"""Command-line interface.

Commands: gen-problem, gen-map, route, verify, density-curve, estimate,
bench.  Report-producing commands write delimited output (CSV/JSON) and
can render a matplotlib figure next to it via --plot.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from . import estimator, fixtures
from .oracle import MAX_QUBITS, verify_equivalence
from .problem import ProblemGraph, build_cost_circuit, build_qaoa_circuit, complete_graph, random_gnm
from .report import RunReport
from .router import RoutedCircuit, route, route_baseline
from .strategy import (
    HEAVY_HEX_SIMPLE,
    SwapStrategy,
    density_curve,
    heavy_hex_strategy,
    strategy_for_map,
)
from .topology import CouplingMap, build_coupling_map, unrolled_heavy_hex

FAMILY_DIMS = {"line": 1, "grid2d": 2, "grid3d": 3, "heavy-hex": 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _save_figure(fig, path: str) -> None:
    fig.savefig(path, dpi=160, bbox_inches="tight")
    print(f"wrote {path}", file=sys.stderr)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


# ---------------------------------------------------------------------------
# gen-problem / gen-map
# ---------------------------------------------------------------------------


def cmd_gen_problem(args) -> int:
    if args.fixture:
        graph = fixtures.problem_fixture(args.fixture)
    elif args.complete:
        graph = complete_graph(args.complete)
    else:
        if args.n is None or args.density is None:
            raise SystemExit("gen-problem: need --n and --density (or --fixture/--complete)")
        graph = random_gnm(args.n, args.density, args.seed, args.weights)
    text = graph.to_edge_list() if args.format == "edgelist" else graph.to_json() + "\n"
    _write(args.output, text)
    return 0


def _build_map(family: str, dims: list[int]) -> CouplingMap:
    if family == "unrolled-heavy-hex":
        (n,) = dims
        return unrolled_heavy_hex(n).map
    want = FAMILY_DIMS.get(family)
    if want is None:
        raise SystemExit(f"gen-map: unknown family {family!r}")
    if len(dims) != want:
        raise SystemExit(f"gen-map: family {family} needs {want} dims, got {len(dims)}")
    return build_coupling_map(family, dims)


def cmd_gen_map(args) -> int:
    if args.fixture:
        cmap = fixtures.map_fixture(args.fixture)
    else:
        cmap = _build_map(args.family, args.dims or [])
    text = cmap.to_edge_list() if args.format == "edgelist" else cmap.to_json() + "\n"
    _write(args.output, text)
    return 0


# ---------------------------------------------------------------------------
# route / verify
# ---------------------------------------------------------------------------


def _load_strategy(spec: str | None, cmap: CouplingMap) -> tuple[SwapStrategy, str]:
    """Strategy from a family keyword or a JSON file path."""
    if spec is None or spec in ("auto", "family"):
        strategy = strategy_for_map(cmap)
        return strategy, strategy.family
    if spec == HEAVY_HEX_SIMPLE:
        strategy = strategy_for_map(cmap, HEAVY_HEX_SIMPLE)
        return strategy, spec
    path = Path(spec)
    if path.exists():
        return SwapStrategy.from_json(path.read_text(), cmap), f"file:{path.name}"
    raise SystemExit(f"route: strategy {spec!r} is neither a keyword nor a file")


def _run_route(args, force_verify: bool) -> int:
    graph = ProblemGraph.load(args.problem)
    cmap = CouplingMap.load(args.map)
    strategy, strategy_name = (None, "none")
    if not args.baseline:
        strategy, strategy_name = _load_strategy(args.strategy, cmap)

    p = args.p
    gammas = args.gammas or [0.4 * (k + 1) for k in range(p)]
    betas = args.betas or [0.3] * p
    if len(gammas) != p or len(betas) != p:
        raise SystemExit(f"route: need {p} gammas and betas")
    circuit = build_qaoa_circuit(graph, p, gammas, betas)

    t0 = time.perf_counter()
    if args.baseline:
        routed = route_baseline(circuit, cmap, args.initial)
        router_name = "baseline"
    else:
        routed = route(circuit, cmap, strategy, args.initial)
        router_name = "strategy"
    dt = time.perf_counter() - t0

    verified = None
    do_verify = force_verify or args.verify
    if do_verify:
        if cmap.num_qubits > MAX_QUBITS:
            raise SystemExit(
                f"verify: dense oracle limited to {MAX_QUBITS} qubits, map has {cmap.num_qubits}"
            )
        cost = build_cost_circuit(graph, gammas[0])
        if args.baseline:
            routed_cost = route_baseline(cost, cmap, args.initial)
        else:
            routed_cost = route(cost, cmap, strategy, args.initial)
        verified = verify_equivalence(routed_cost, graph, gammas[0])

    report = RunReport.from_routing(
        routed,
        problem_text=graph.to_json(),
        map_text=cmap.to_json(),
        strategy_text=strategy.to_json() if strategy else "baseline",
        router=router_name,
        transpile_seconds=dt,
        verified=verified,
    )
    if args.qasm:
        _write(args.qasm, routed.to_qasm())
    if args.circuit_json:
        _write(args.circuit_json, routed.to_json() + "\n")
    _write(args.report, report.to_json() + "\n")
    if verified is False:
        return 2
    return 0


def cmd_route(args) -> int:
    return _run_route(args, force_verify=False)


def cmd_verify(args) -> int:
    return _run_route(args, force_verify=True)


# ---------------------------------------------------------------------------
# density-curve
# ---------------------------------------------------------------------------


def cmd_density_curve(args) -> int:
    curves: list[tuple[str, list[float]]] = []
    if args.map:
        cmap = CouplingMap.load(args.map)
        strategy, name = _load_strategy(args.strategy, cmap)
        curves.append((name, density_curve(strategy)))
    else:
        if args.family is None or args.n is None:
            raise SystemExit("density-curve: need --family and --n (or --map)")
        fam, n = args.family, args.n
        if fam == "line":
            curves.append(("line", density_curve(strategy_for_map(build_coupling_map("line", (n,))))))
        elif fam in ("grid2d", "grid3d"):
            eta = 2 if fam == "grid2d" else 3
            x = round(n ** (1 / eta))
            if x ** eta != n:
                raise SystemExit(f"density-curve: {fam} needs n = x^{eta}, got {n}")
            curves.append((fam, density_curve(strategy_for_map(build_coupling_map(fam, (x,) * eta)))))
        elif fam in ("heavy-hex", "unrolled-heavy-hex"):
            unfolding = None
            if fam == "heavy-hex":
                # exact heavy-hex instance when one matches n, else unrolled
                from .topology import unfold_heavy_hex

                for i in range(1, 40):
                    num = n + 1 - 4 * i
                    den = 5 * i + 4
                    if num > 0 and num % den == 0:
                        unfolding = unfold_heavy_hex(
                            build_coupling_map("heavy-hex", (i, num // den))
                        )
                        break
            if unfolding is None:
                unfolding = unrolled_heavy_hex(n)
            from .strategy import heavy_hex_simple_line_strategy

            curves.append(("heavy-hex-full", density_curve(heavy_hex_strategy(unfolding))))
            curves.append(("heavy-hex-simple", density_curve(heavy_hex_simple_line_strategy(unfolding))))
        else:
            raise SystemExit(f"density-curve: unknown family {fam!r}")

    max_len = max(len(c) for _, c in curves)
    lines = ["layers," + ",".join(name for name, _ in curves)]
    for L in range(max_len):
        row = [str(L)]
        for _, curve in curves:
            row.append(f"{curve[min(L, len(curve) - 1)]:.8f}")
        lines.append(",".join(row))
    _write(args.output, "\n".join(lines) + "\n")

    if args.plot:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        for name, curve in curves:
            ax.plot(range(len(curve)), curve, label=name)
        ax.set_xlabel("swap layers")
        ax.set_ylabel("reachable pair density")
        ax.set_ylim(0, 1.05)
        ax.legend()
        ax.grid(alpha=0.3)
        _save_figure(fig, args.plot)
    return 0


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _parse_policy(text: str):
    if ":" in text:
        kind, value = text.split(":", 1)
        return (kind, float(value))
    if text in ("default", "single"):
        return text
    try:
        return float(text)
    except ValueError:
        raise SystemExit(f"estimate: bad policy {text!r}")


def cmd_estimate(args) -> int:
    hw = estimator.HardwareModel(
        f_cx_error=1.0 - args.fidelity,
        tau_cx=args.tau_cx,
        tau_delay=args.tau_delay,
        tau_init=args.tau_init,
        tau_meas_reset=args.tau_meas_reset,
    )
    p_policy = "log2" if args.p is None else args.p
    shots = _parse_policy(args.shots_policy)
    if isinstance(shots, float):
        shots = ("fixed", shots)
    iters = _parse_policy(args.iters_policy)

    breakdown = estimator.total_time(
        args.n, args.density, args.family, hw, shots, iters, p_policy, args.mitigation
    )
    crit = estimator.criterion_check(
        p=int(round(estimator._qaoa_depth(args.n, p_policy))),
        n=args.n,
        density=args.density,
        family=args.family,
        f_cx=args.fidelity,
        epsilon=args.epsilon,
    )
    doc = {
        "n": args.n,
        "density": args.density,
        "family": args.family,
        "tau_shot_s": breakdown.tau_shot,
        "tau_circ_s": breakdown.tau_circ,
        "n_shots": breakdown.n_shots,
        "n_iter": breakdown.n_iter,
        "tau_total_s": breakdown.tau_total,
        "tau_total_h": breakdown.tau_total / 3600.0,
        "criterion_lhs_layers": crit.lhs,
        "criterion_rhs_layers": crit.rhs,
        "criterion_satisfied": crit.satisfied,
        "epsilon_star": crit.epsilon_star,
    }
    _write(args.output, json.dumps(doc, indent=2) + "\n")

    if args.sweep:
        _estimate_sweep(args, hw)
    return 0


def _estimate_sweep(args, hw) -> None:
    plt = _pyplot() if args.plot else None
    sizes = [int(round(10 * 1.25 ** k)) for k in range(22)]
    sizes = sorted({s for s in sizes if s >= 4})
    if args.sweep == "shot-time":
        fast = estimator.fast_gates_hardware()
        lines = ["n,tau_shot_s,tau_shot_fast_s"]
        for n in sizes:
            cur = estimator.shot_time(n, args.density, args.family, hw)
            fst = estimator.shot_time(n, args.density, args.family, fast)
            lines.append(f"{n},{cur:.8g},{fst:.8g}")
        _write(args.sweep_output, "\n".join(lines) + "\n")
        if plt:
            rows = [line.split(",") for line in lines[1:]]
            ns = [int(r[0]) for r in rows]
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.loglog(ns, [float(r[1]) for r in rows], label=f"tau_cx={hw.tau_cx*1e9:.0f} ns")
            ax.loglog(ns, [float(r[2]) for r in rows], "--", label="tau_cx=30 ns")
            ax.set_xlabel("problem size n")
            ax.set_ylabel("single-shot duration (s)")
            ax.legend()
            ax.grid(alpha=0.3, which="both")
            _save_figure(fig, args.plot)
    elif args.sweep == "total-time":
        lines = ["n,fixed_shots_s,quadratic_shots_s,single_iteration_s"]
        for n in sizes:
            fixed = estimator.total_time(n, args.density, args.family, hw, ("fixed", 1e4), "default").tau_total
            quad = estimator.total_time(n, args.density, args.family, hw, ("quadratic", 0.1), "default").tau_total
            single = estimator.total_time(n, args.density, args.family, hw, ("fixed", 1e4), "single").tau_total
            lines.append(f"{n},{fixed:.8g},{quad:.8g},{single:.8g}")
        _write(args.sweep_output, "\n".join(lines) + "\n")
        if plt:
            rows = [line.split(",") for line in lines[1:]]
            ns = [int(r[0]) for r in rows]
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.loglog(ns, [float(r[1]) for r in rows], label="1e4 shots")
            ax.loglog(ns, [float(r[2]) for r in rows], "--", label="quadratic shots")
            ax.loglog(ns, [float(r[3]) for r in rows], "-.", label="single iteration")
            ax.set_xlabel("problem size n")
            ax.set_ylabel("total execution time (s)")
            ax.legend()
            ax.grid(alpha=0.3, which="both")
            _save_figure(fig, args.plot)
    elif args.sweep == "heatmap":
        import numpy as np

        densities = np.linspace(0.05, 1.0, 39)
        errors = np.logspace(-6, -1, 51)
        matrix, _, _ = estimator.fidelity_heatmap(args.n, args.family, densities, errors)
        lines = ["density\\error," + ",".join(f"{e:.6g}" for e in errors)]
        for d, row in zip(densities, matrix):
            lines.append(f"{d:.4f}," + ",".join(f"{v:.6g}" for v in row))
        _write(args.sweep_output, "\n".join(lines) + "\n")
        if plt:
            fig, ax = plt.subplots(figsize=(6, 4.5))
            mesh = ax.pcolormesh(
                errors, densities, matrix, norm=_log_norm(), shading="auto"
            )
            levels = [estimator.heatmap_contour(args.epsilon, p) for p in (1, 2, 4, 8)]
            cs = ax.contour(errors, densities, matrix, levels=sorted(levels), colors="white")
            ax.clabel(cs, fmt="%.2f", fontsize=7)
            ax.set_xscale("log")
            ax.set_xlabel("two-qubit gate error")
            ax.set_ylabel("problem density")
            fig.colorbar(mesh, label="2 p L_cx (1 - F^l_cx) at p=1")
            _save_figure(fig, args.plot)
    else:
        raise SystemExit(f"estimate: unknown sweep {args.sweep!r}")


def _log_norm():
    from matplotlib.colors import LogNorm

    return LogNorm()


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench(args) -> int:
    cfg_doc = json.loads(Path(args.config).read_text())
    cfg = bench_mod.BenchConfig.from_dict(cfg_doc)
    rows = bench_mod.run_bench(cfg)
    _write(args.output, bench_mod.bench_rows_to_csv(rows))
    if args.plot:
        plt = _pyplot()
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        for family in cfg.families:
            for router in cfg.routers:
                for density in cfg.densities:
                    pts = [
                        r
                        for r in rows
                        if r["family"] == family
                        and r["router"] == router
                        and r["density"] == density
                    ]
                    pts.sort(key=lambda r: r["n"])
                    ns = [r["n"] for r in pts]
                    style = "-" if router == "strategy" else "--"
                    label = f"{family} {router} D={density}"
                    axes[0].plot(ns, [r["depth_mean"] for r in pts], style, label=label)
                    axes[1].plot(ns, [r["cnot_mean"] for r in pts], style, label=label)
        axes[0].set_xlabel("problem size n")
        axes[0].set_ylabel("circuit depth")
        axes[1].set_xlabel("problem size n")
        axes[1].set_ylabel("CNOT count")
        axes[1].legend(fontsize=6)
        for ax in axes:
            ax.grid(alpha=0.3)
        _save_figure(fig, args.plot)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swaproute", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-problem", help="generate or export a problem graph")
    p.add_argument("--n", type=int)
    p.add_argument("--density", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", choices=["pm1", "ones"], default="pm1")
    p.add_argument("--complete", type=int, help="complete graph on N variables")
    p.add_argument("--fixture", choices=fixtures.FIXTURE_NAMES)
    p.add_argument("--format", choices=["json", "edgelist"], default="json")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen_problem)

    p = sub.add_parser("gen-map", help="generate or export a coupling map")
    p.add_argument("--family", choices=list(FAMILY_DIMS) + ["unrolled-heavy-hex"])
    p.add_argument("--dims", type=int, nargs="+")
    p.add_argument("--fixture", choices=fixtures.MAP_NAMES)
    p.add_argument("--format", choices=["json", "edgelist"], default="json")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen_map)

    for name, fn, blurb in (
        ("route", cmd_route, "route a problem onto a map with a swap strategy"),
        ("verify", cmd_verify, "route and check unitary equivalence (n <= 12)"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--problem", required=True)
        p.add_argument("--map", required=True)
        p.add_argument("--strategy", default=None, help="family keyword, 'heavy-hex-simple', or JSON file")
        p.add_argument("--baseline", action="store_true", help="use the greedy baseline router")
        p.add_argument("--p", type=int, default=1)
        p.add_argument("--gammas", type=float, nargs="+")
        p.add_argument("--betas", type=float, nargs="+")
        p.add_argument("--initial", type=int, nargs="+", help="initial logical-to-physical mapping")
        p.add_argument("--verify", action="store_true")
        p.add_argument("--qasm", help="write the routed circuit as OpenQASM-2-style text")
        p.add_argument("--circuit-json", help="write the routed circuit layer dump")
        p.add_argument("--report", default="-", help="write the run report JSON")
        p.set_defaults(func=fn)

    p = sub.add_parser("density-curve", help="reachable density vs swap layers, as CSV")
    p.add_argument("--family", choices=["line", "grid2d", "grid3d", "heavy-hex", "unrolled-heavy-hex"])
    p.add_argument("--n", type=int)
    p.add_argument("--map", help="explicit coupling map file instead of --family")
    p.add_argument("--strategy", default=None)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--plot", help="render the curves to this image file")
    p.set_defaults(func=cmd_density_curve)

    p = sub.add_parser("estimate", help="fidelity criterion and execution-time model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--family", default="heavy-hex", choices=["line", "grid2d", "grid3d", "heavy-hex"])
    p.add_argument("--tau-cx", type=float, default=400e-9, help="CNOT duration in seconds")
    p.add_argument("--tau-delay", type=float, default=0.0)
    p.add_argument("--tau-init", type=float, default=0.0)
    p.add_argument("--tau-meas-reset", type=float, default=0.0)
    p.add_argument("--fidelity", type=float, default=1 - 169.0e-4, help="CNOT fidelity")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--p", type=float, help="fixed depth (default log2(n))")
    p.add_argument("--shots-policy", default="fixed:10000", help="fixed:K or quadratic:EPS")
    p.add_argument("--iters-policy", default="default", help="default, single, or fixed:K")
    p.add_argument("--mitigation", type=int, default=1)
    p.add_argument("--sweep", choices=["shot-time", "total-time", "heatmap"])
    p.add_argument("--sweep-output", default="-")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--plot", help="render the sweep to this image file")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="randomized routing benchmark sweep")
    p.add_argument("--config", required=True, help="JSON benchmark configuration")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--plot", help="render depth/CNOT panels to this image file")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, OSError, KeyError) as exc:
        print(f"swaproute: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
