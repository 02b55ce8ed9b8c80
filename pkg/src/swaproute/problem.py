"""Interaction graphs and abstract circuits of commuting cost terms.

A problem is a weighted graph over n binary variables; each edge (i, j)
with weight w contributes a commuting two-qubit phase term to the cost
layer.  The full trial-state circuit is H on every qubit, then for each
round k a commuting set of RZZ(i, j, 2*gamma_k*w) gates followed by
RX(q, 2*beta_k) mixers.  With the convention RZZ(theta) = exp(-i theta
ZZ / 2), the term angle 2*gamma*w implements exp(-i gamma w Z_i Z_j).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path


class ProblemError(ValueError):
    """Base class for problem construction errors."""


class InvalidDensity(ProblemError):
    """Requested density outside (0, 1]."""


class LengthMismatch(ProblemError):
    """Assignment or parameter vector has the wrong length."""


@dataclass(frozen=True)
class ProblemGraph:
    """Weighted interaction graph; term insertion order is preserved."""

    num_vars: int
    terms: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ProblemError(f"need at least one variable, got {self.num_vars}")
        seen = set()
        for i, j, w in self.terms:
            if i == j:
                raise ProblemError(f"self-interaction on variable {i}")
            if not (0 <= i < self.num_vars and 0 <= j < self.num_vars):
                raise ProblemError(f"term ({i},{j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ProblemError(f"duplicate term {key}")
            seen.add(key)
            if not math.isfinite(w):
                raise ProblemError(f"non-finite weight on term ({i},{j})")

    @property
    def density(self) -> float:
        n = self.num_vars
        if n < 2:
            return 0.0
        return len(self.terms) / (n * (n - 1) / 2)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(i, j), max(i, j)) for i, j, _ in self.terms)

    def weight_sum(self) -> float:
        return sum(w for _, _, w in self.terms)

    # serialization -------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.num_vars, "terms": [[i, j, w] for i, j, w in self.terms]},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ProblemGraph":
        doc = json.loads(text)
        terms = tuple((int(i), int(j), float(w)) for i, j, w in doc["terms"])
        return cls(int(doc["n"]), terms)

    def to_edge_list(self) -> str:
        return "\n".join(f"{i} {j} {w:g}" for i, j, w in self.terms) + "\n"

    @classmethod
    def from_edge_list(cls, text: str, num_vars: int | None = None) -> "ProblemGraph":
        terms = []
        max_v = -1
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            i, j = int(toks[0]), int(toks[1])
            w = float(toks[2]) if len(toks) > 2 else 1.0
            terms.append((i, j, w))
            max_v = max(max_v, i, j)
        n = num_vars if num_vars is not None else max_v + 1
        return cls(n, tuple(terms))

    @classmethod
    def load(cls, path: str | Path) -> "ProblemGraph":
        path = Path(path)
        text = path.read_text()
        if path.suffix == ".json" or text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_edge_list(text)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def random_gnm(n: int, density: float, seed: int, weights: str = "pm1") -> ProblemGraph:
    """Uniform random graph with ceil(density * n(n-1)/2) distinct edges.

    weights: "pm1" draws each weight uniformly from {-1, +1}; "ones" sets
    every weight to 1.  Deterministic for a fixed (n, density, seed).
    """
    if n < 2:
        raise ProblemError(f"need n >= 2, got {n}")
    if not (0 < density <= 1):
        raise InvalidDensity(f"density {density} outside (0, 1]")
    if weights not in ("pm1", "ones"):
        raise ProblemError(f"unknown weight scheme {weights!r}")
    total = n * (n - 1) // 2
    m = math.ceil(density * total)
    rng = random.Random(seed)
    chosen = sorted(rng.sample(range(total), m))
    pairs = []
    for idx in chosen:
        # unrank the pair: row i owns indices [i*n - i*(i+1)/2 - i, ...)
        i = 0
        offset = idx
        row = n - 1
        while offset >= row:
            offset -= row
            i += 1
            row -= 1
        pairs.append((i, i + 1 + offset))
    terms = tuple(
        (i, j, float(rng.choice((-1, 1))) if weights == "pm1" else 1.0)
        for i, j in pairs
    )
    return ProblemGraph(n, terms)


def complete_graph(n: int, weight: float = 1.0) -> ProblemGraph:
    terms = tuple((i, j, weight) for i in range(n) for j in range(i + 1, n))
    return ProblemGraph(n, terms)


# ---------------------------------------------------------------------------
# energies
# ---------------------------------------------------------------------------


def _spins(assignment) -> list[int]:
    if isinstance(assignment, str):
        bits = [int(c) for c in assignment]
    else:
        bits = [int(b) for b in assignment]
    if any(b not in (0, 1) for b in bits):
        raise ProblemError(f"assignment must be binary, got {assignment!r}")
    return [1 - 2 * b for b in bits]


def maxcut_energy(graph: ProblemGraph, assignment) -> tuple[float, float]:
    """Cut value and the matching diagonal cost energy of an assignment.

    cut = 1/2 sum w_ij (1 - z_i z_j) with z = 1 - 2x; the energy is
    -2*cut + sum w_ij, which equals sum w_ij z_i z_j.
    """
    z = _spins(assignment)
    if len(z) != graph.num_vars:
        raise LengthMismatch(
            f"assignment length {len(z)} != {graph.num_vars} variables"
        )
    cut = 0.5 * sum(w * (1 - z[i] * z[j]) for i, j, w in graph.terms)
    energy = -2.0 * cut + graph.weight_sum()
    return cut, energy


def cut_value_counts(graph: ProblemGraph, chunk_bits: int = 22) -> dict[float, int]:
    """Histogram of cut values over all 2^n assignments, enumerated
    bit-parallel in chunks; integer weights give exact integer buckets.
    Feasible up to roughly n = 30."""
    import numpy as np

    n = graph.num_vars
    if n > 30:
        raise ProblemError(f"exhaustive enumeration over 2^{n} is not feasible")
    integral = all(float(w).is_integer() for _, _, w in graph.terms)
    counts: dict[float, int] = {}
    chunk = 1 << min(chunk_bits, n)
    for base in range(0, 1 << n, chunk):
        idx = np.arange(base, base + chunk, dtype=np.int64)
        cut = np.zeros(chunk, dtype=np.float64)
        for i, j, w in graph.terms:
            cut += w * (((idx >> i) ^ (idx >> j)) & 1)
        vals, cnts = np.unique(cut, return_counts=True)
        for v, c in zip(vals, cnts):
            key = int(v) if integral else float(v)
            counts[key] = counts.get(key, 0) + int(c)
    return counts


# ---------------------------------------------------------------------------
# abstract circuits
# ---------------------------------------------------------------------------

H_SET = "h"
RZZ_SET = "rzz"
RX_SET = "rx"


@dataclass(frozen=True)
class AbstractCircuit:
    """Ordered commuting sets; each set holds gates that pairwise commute.

    sets entries: ("h", (q, ...)), ("rzz", ((i, j, theta), ...)) or
    ("rx", ((q, theta), ...)).
    """

    num_qubits: int
    sets: tuple[tuple[str, tuple], ...]

    def cost_set_count(self) -> int:
        return sum(1 for kind, _ in self.sets if kind == RZZ_SET)


def build_qaoa_circuit(graph: ProblemGraph, p: int, gammas, betas) -> AbstractCircuit:
    """Trial-state circuit: H layer, then p rounds of cost + mixer sets."""
    gammas = tuple(float(g) for g in gammas)
    betas = tuple(float(b) for b in betas)
    if p < 1:
        raise LengthMismatch(f"depth p must be >= 1, got {p}")
    if len(gammas) != p or len(betas) != p:
        raise LengthMismatch(
            f"expected {p} gammas and betas, got {len(gammas)} and {len(betas)}"
        )
    n = graph.num_vars
    sets: list[tuple[str, tuple]] = [(H_SET, tuple(range(n)))]
    for gamma, beta in zip(gammas, betas):
        sets.append(
            (RZZ_SET, tuple((i, j, 2.0 * gamma * w) for i, j, w in graph.terms))
        )
        sets.append((RX_SET, tuple((q, 2.0 * beta) for q in range(n))))
    return AbstractCircuit(n, tuple(sets))


def build_cost_circuit(graph: ProblemGraph, gamma: float) -> AbstractCircuit:
    """A single commuting cost set, used for unitary verification."""
    terms = tuple((i, j, 2.0 * gamma * w) for i, j, w in graph.terms)
    return AbstractCircuit(graph.num_vars, ((RZZ_SET, terms),))
