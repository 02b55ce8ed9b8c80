"""Analytic hardware-requirement models.

Two pieces: an entropic depth criterion that bounds how many two-qubit
gate layers a noisy circuit can have before a classically samplable
Gibbs state matches its output energy, and a wall-clock model for the
full variational loop, tau_total = n_iter * (n_shots * tau_shot +
tau_init) with tau_shot driven by the CNOT-layer count of the routed
cost layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .router import count_table_estimates


class EstimatorError(ValueError):
    """Invalid estimator input."""


class InvalidPolicy(EstimatorError):
    """Unknown shots or iterations policy."""


@dataclass(frozen=True)
class HardwareModel:
    """Gate errors, durations and timing overheads, all in SI units."""

    f_cx_error: float = 169.0e-4
    f_1q_error: float = 7.2e-4
    tau_cx: float = 400e-9
    tau_1q: float = 36e-9
    tau_delay: float = 0.0
    tau_init: float = 0.0
    tau_meas_reset: float = 0.0

    def __post_init__(self):
        for name in ("f_cx_error", "f_1q_error"):
            p = getattr(self, name)
            if not (0 <= p < 1):
                raise EstimatorError(f"{name}={p} outside [0, 1)")
        for name in ("tau_cx", "tau_1q", "tau_delay", "tau_init", "tau_meas_reset"):
            if getattr(self, name) < 0:
                raise EstimatorError(f"{name} must be >= 0")

    @property
    def cx_fidelity(self) -> float:
        return 1.0 - self.f_cx_error


def current_hardware() -> HardwareModel:
    """Typical present-day superconducting values."""
    return HardwareModel()


def fast_gates_hardware() -> HardwareModel:
    """Demonstrated fast-gate durations (30 ns CNOT, 4 ns single-qubit)."""
    return HardwareModel(tau_cx=30e-9, tau_1q=4e-9)


def nairobi_model() -> HardwareModel:
    """Seven-qubit device snapshot: 98.88% average CNOT fidelity."""
    return HardwareModel(f_cx_error=1 - 0.9888)


def mumbai_model() -> HardwareModel:
    """27-qubit device snapshot: 99.05% average CNOT fidelity."""
    return HardwareModel(f_cx_error=1 - 0.9905)


# ---------------------------------------------------------------------------
# depth / fidelity criterion
# ---------------------------------------------------------------------------


def max_depth_bound(epsilon: float, f1: float, p1: float, f2: float, p2: float) -> float:
    """ln(1/epsilon) / (2 (f1 p1 + f2 p2)): the layer count beyond which a
    polynomial-time classical sampler matches the noisy output energy to
    relative precision epsilon."""
    if not (0 < epsilon < 1):
        raise EstimatorError(f"epsilon {epsilon} outside (0, 1)")
    denom = f1 * p1 + f2 * p2
    if denom <= 0:
        raise ZeroDivisionError("f1*p1 + f2*p2 must be positive")
    return math.log(1.0 / epsilon) / (2.0 * denom)


def layer_depolarizing(f_cx: float, l_cx: float) -> float:
    """Depolarizing probability of a layer of l_cx parallel CNOTs of
    fidelity f_cx: 1 - f_cx**l_cx.  l_cx may be a fractional average."""
    if not (0 < f_cx <= 1):
        raise EstimatorError(f"fidelity {f_cx} outside (0, 1]")
    if l_cx <= 0:
        raise EstimatorError(f"l_cx must be positive, got {l_cx}")
    return 1.0 - f_cx ** l_cx


@dataclass(frozen=True)
class CriterionResult:
    lhs: float  # p * L_cx, the planned CNOT-layer count
    rhs: float  # allowed layer budget at the given epsilon
    satisfied: bool
    epsilon_star: float  # epsilon at which lhs would sit exactly on the bound
    p2: float

    @property
    def max_layers(self) -> int:
        """Largest whole number of CNOT layers satisfying the criterion."""
        return math.floor(self.rhs)

    @property
    def quoted_bound(self) -> int:
        """The budget rounded to the nearest integer, as usually quoted."""
        return round(self.rhs)


def criterion_check(
    p: int,
    n: int,
    density: float,
    family: str | None,
    f_cx: float,
    epsilon: float,
    L_cx: float | None = None,
    l_cx: float | None = None,
) -> CriterionResult:
    """Check p * L_cx(n, D) <= ln(1/eps) / (2 (1 - f_cx**l_cx)).

    L_cx and l_cx default to the family's closed forms; pass measured
    values to override (family may then be None).
    """
    if L_cx is None or l_cx is None:
        est = count_table_estimates(family, n, density)
        L_cx = est["L_cx"] if L_cx is None else L_cx
        l_cx = est["l_cx_avg"] if l_cx is None else l_cx
    p2 = layer_depolarizing(f_cx, l_cx)
    lhs = p * L_cx
    rhs = max_depth_bound(epsilon, 0.0, 0.0, 1.0, p2)
    eps_star = math.exp(-2.0 * lhs * p2)
    return CriterionResult(lhs, rhs, lhs <= rhs, eps_star, p2)


def fidelity_heatmap(
    n: int,
    family: str,
    densities,
    error_rates,
):
    """Matrix of 2 * L_cx(n, D) * (1 - f_cx**l_cx) over a (density,
    gate-error) grid; a point is classically matchable at precision eps
    and depth p when the value exceeds ln(1/eps)/p.

    Returns (matrix, densities, error_rates); matrix[i][j] corresponds to
    densities[i] and error_rates[j].
    """
    import numpy as np

    densities = np.asarray(list(densities), dtype=float)
    error_rates = np.asarray(list(error_rates), dtype=float)
    l_cx = count_table_estimates(family, n, 1.0)["l_cx_avg"]
    coeff = count_table_estimates(family, n, 1.0)["L_cx"]  # L_cx at D=1
    fid = 1.0 - error_rates
    p2 = 1.0 - fid ** l_cx
    matrix = 2.0 * coeff * densities[:, None] * p2[None, :]
    return matrix, densities, error_rates


def heatmap_contour(epsilon: float, p: int) -> float:
    """Contour level ln(1/epsilon)/p for the heatmap quantity."""
    return math.log(1.0 / epsilon) / p


# ---------------------------------------------------------------------------
# execution time
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuntimeBreakdown:
    tau_shot: float
    tau_circ: float
    n_shots: float
    n_iter: float
    tau_total: float


def _qaoa_depth(n: int, p_policy) -> float:
    if p_policy == "log2":
        return math.log2(n)
    if p_policy == "log2_floor":
        return float(math.floor(math.log2(n)))
    if isinstance(p_policy, (int, float)):
        return float(p_policy)
    raise InvalidPolicy(f"unknown depth policy {p_policy!r}")


def shot_time(
    n: int,
    density: float,
    family: str,
    hw: HardwareModel | None = None,
    p_policy="log2",
) -> float:
    """Duration of one shot: p * L_cx(n, D) * tau_cx plus the measurement,
    reset and delay overheads carried by the hardware model (zero by
    default, so the bare circuit time is returned)."""
    if n < 2:
        raise EstimatorError(f"need n >= 2, got {n}")
    hw = hw or current_hardware()
    p = _qaoa_depth(n, p_policy)
    L_cx = count_table_estimates(family, n, density)["L_cx"]
    tau_circ = p * L_cx * hw.tau_cx + hw.tau_meas_reset
    return tau_circ + hw.tau_delay


def shots_policy_count(policy, n: int) -> float:
    """("fixed", k) or ("quadratic", eps): quadratic scales as 100 n^2
    shots at eps = 0.1 (a size-ten problem then uses 10^4 shots) with an
    inverse-epsilon prefactor."""
    if isinstance(policy, tuple) and policy[0] == "fixed":
        return float(policy[1])
    if isinstance(policy, tuple) and policy[0] == "quadratic":
        eps = float(policy[1]) if len(policy) > 1 else 0.1
        if eps <= 0:
            raise InvalidPolicy(f"epsilon {eps} must be positive")
        return 100.0 * n * n * (0.1 / eps)
    if isinstance(policy, (int, float)):
        return float(policy)
    raise InvalidPolicy(f"unknown shots policy {policy!r}")


def iters_policy_count(policy, n: int) -> float:
    """("scaled", c) gives c*log2(n) iterations (default c=25); "single"
    skips the optimization loop entirely."""
    if policy in ("default", "scaled"):
        return 25.0 * math.log2(n)
    if isinstance(policy, tuple) and policy[0] == "scaled":
        return float(policy[1]) * math.log2(n)
    if policy == "single":
        return 1.0
    if isinstance(policy, tuple) and policy[0] == "fixed":
        return float(policy[1])
    if isinstance(policy, (int, float)):
        return float(policy)
    raise InvalidPolicy(f"unknown iterations policy {policy!r}")


def total_time(
    n: int,
    density: float,
    family: str,
    hw: HardwareModel | None = None,
    shots_policy=("fixed", 10_000),
    iters_policy="default",
    p_policy="log2",
    mitigation_factor: int = 1,
) -> RuntimeBreakdown:
    """Full loop estimate: n_iter * (n_shots * tau_shot + tau_init).

    mitigation_factor multiplies the per-iteration data-taking cost, e.g.
    for zero-noise extrapolation over several noise levels."""
    hw = hw or current_hardware()
    if mitigation_factor < 1:
        raise EstimatorError("mitigation_factor must be >= 1")
    tau_shot = shot_time(n, density, family, hw, p_policy)
    tau_circ = tau_shot - hw.tau_delay
    n_shots = shots_policy_count(shots_policy, n)
    n_iter = iters_policy_count(iters_policy, n)
    tau_total = n_iter * (n_shots * tau_shot * mitigation_factor + hw.tau_init)
    return RuntimeBreakdown(tau_shot, tau_circ, n_shots, n_iter, tau_total)
