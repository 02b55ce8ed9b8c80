"""Small-scale dense-matrix verification of routed circuits.

Conventions: qubit 0 is the least significant bit of a basis index;
cx(c, t) flips bit t when bit c is set; rz(theta) = diag(e^{-i theta/2},
e^{i theta/2}); rx(theta) = exp(-i theta X / 2); the two-qubit phase
term exp(-i gamma w Z_i Z_j) enters circuits as a cx-rz-cx block with
rz angle 2 gamma w.

Routed cost segments contain only cx and rz gates, so their unitary is a
generalized permutation; verification then reduces to integer bit
tracking and is exact and fast.  Circuits with h or rx gates fall back
to full dense matrices, limited to 12 qubits.
"""

from __future__ import annotations

import math

import numpy as np

from .problem import ProblemGraph
from .router import RoutedCircuit

MAX_QUBITS = 12


class TooLarge(ValueError):
    """Dense verification is limited to MAX_QUBITS qubits."""


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise TooLarge(f"{n} qubits exceeds the dense-oracle limit of {MAX_QUBITS}")


def _term_energies(graph: ProblemGraph, num_qubits: int) -> np.ndarray:
    """sum w_ij z_i z_j for every basis state of num_qubits wires, reading
    variable q from bit q and z = +1 for bit 0, -1 for bit 1."""
    dim = 1 << num_qubits
    idx = np.arange(dim, dtype=np.int64)
    energies = np.zeros(dim, dtype=float)
    for i, j, w in graph.terms:
        zi = 1 - 2 * ((idx >> i) & 1)
        zj = 1 - 2 * ((idx >> j) & 1)
        energies += w * (zi * zj)
    return energies


def cost_unitary(graph: ProblemGraph, gamma: float, num_qubits: int | None = None) -> np.ndarray:
    """Diagonal operator with entries exp(-i gamma * sum w z z)."""
    n = num_qubits if num_qubits is not None else graph.num_vars
    if n < graph.num_vars:
        raise ValueError(f"{n} wires cannot hold {graph.num_vars} variables")
    _check_size(n)
    return np.diag(np.exp(-1j * gamma * _term_energies(graph, n)))


_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _gate_matrix(name: str, angle: float | None) -> np.ndarray:
    if name == "h":
        return _H
    if name == "rz":
        return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
    if name == "rx":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    raise ValueError(f"unknown single-qubit gate {name!r}")


def _apply_1q(state: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    # state has shape (2**n, cols); bit q varies with stride 2**q
    shaped = state.reshape(2 ** (n - q - 1), 2, (1 << q) * state.shape[1])
    return np.einsum("ab,xby->xay", mat, shaped).reshape(state.shape)

def _apply_cx(state: np.ndarray, c: int, t: int, n: int) -> np.ndarray:
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    flipped = idx ^ (((idx >> c) & 1) << t)
    return state[flipped, :]


def circuit_unitary(routed: RoutedCircuit) -> np.ndarray:
    """Dense unitary of a routed circuit (layer order = time order)."""
    n = routed.num_qubits
    _check_size(n)
    dim = 1 << n
    state = np.eye(dim, dtype=complex)
    for layer in routed.layers:
        for g in layer:
            if g.name == "cx":
                state = _apply_cx(state, g.qubits[0], g.qubits[1], n)
            else:
                state = _apply_1q(state, _gate_matrix(g.name, g.angle), g.qubits[0], n)
    return state


def _is_phase_circuit(routed: RoutedCircuit) -> bool:
    return all(g.name in ("cx", "rz") for layer in routed.layers for g in layer)


def _phase_circuit_action(routed: RoutedCircuit) -> tuple[np.ndarray, np.ndarray]:
    """For cx/rz-only circuits: basis permutation and per-column phase,
    U|x> = exp(i phase[x]) |perm[x]>."""
    n = routed.num_qubits
    dim = 1 << n
    perm = np.arange(dim, dtype=np.int64)
    phase = np.zeros(dim, dtype=float)
    for layer in routed.layers:
        for g in layer:
            if g.name == "cx":
                c, t = g.qubits
                perm ^= ((perm >> c) & 1) << t
            else:
                bit = (perm >> g.qubits[0]) & 1
                phase += g.angle * (bit - 0.5)
    return perm, phase


def _target_action(
    routed: RoutedCircuit, graph: ProblemGraph, gamma: float
) -> tuple[np.ndarray, np.ndarray]:
    """Permutation/phase form of P(final) * cost_unitary, with the routed
    circuit's wires initially holding logicals per its initial mapping."""
    n = routed.num_qubits
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    init = routed.initial_mapping
    final = routed.final_mapping
    # logical q reads bit init[q]; the cost phase is diagonal in that frame
    logical_bits = [(idx >> init[q]) & 1 for q in range(n)]
    energies = np.zeros(dim, dtype=float)
    for i, j, w in graph.terms:
        energies += w * (1 - 2 * logical_bits[i]) * (1 - 2 * logical_bits[j])
    phase = -gamma * energies
    perm = np.zeros(dim, dtype=np.int64)
    for q in range(n):
        perm |= logical_bits[q] << final[q]
    return perm, phase


def frobenius_distance_phase(
    perm_a: np.ndarray, phase_a: np.ndarray, perm_b: np.ndarray, phase_b: np.ndarray
) -> float:
    """min over global phases of ||A - e^{ic} B||_F for two generalized
    permutation operators given in perm/phase form.  The residual is
    summed directly so near-zero distances are not lost to cancellation."""
    dim = len(perm_a)
    match = perm_a == perm_b
    mismatched = dim - int(match.sum())
    z = np.where(match, np.exp(1j * (phase_a - phase_b)), 0.0)
    total = z.sum()
    if abs(total) == 0:
        return math.sqrt(2.0 * dim)
    align = total / abs(total)
    residual = float((np.abs(z - align) ** 2 * match).sum())
    return math.sqrt(residual + 2.0 * mismatched)


def verify_equivalence(
    routed: RoutedCircuit, graph: ProblemGraph, gamma: float, tol: float = 1e-8
) -> bool:
    """True iff the routed circuit equals the diagonal cost operator
    followed by its own final qubit permutation, up to global phase, at
    Frobenius tolerance tol.  The routed circuit must hold exactly one
    cost segment (cx/rz two-qubit content only)."""
    n = routed.num_qubits
    _check_size(n)
    if graph.num_vars > n:
        raise ValueError("problem has more variables than the routed circuit has wires")
    perm_t, phase_t = _target_action(routed, graph, gamma)
    if _is_phase_circuit(routed):
        perm_c, phase_c = _phase_circuit_action(routed)
        return frobenius_distance_phase(perm_c, phase_c, perm_t, phase_t) <= tol
    u_circ = circuit_unitary(routed)
    dim = 1 << n
    u_target = np.zeros((dim, dim), dtype=complex)
    u_target[perm_t, np.arange(dim)] = np.exp(1j * phase_t)
    overlap = np.trace(u_target.conj().T @ u_circ)
    align = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u_circ - align * u_target)) <= tol


def unitarity_defect(matrix: np.ndarray) -> float:
    """Frobenius norm of U^dag U - I."""
    dim = matrix.shape[0]
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(dim)))
