"""Run reports: input digests, routing counters and timing for one route
invocation, serializable to JSON and exactly re-parseable."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

from .router import RoutedCircuit


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class RunReport:
    problem_digest: str
    map_digest: str
    strategy_digest: str
    router: str
    cnot_count: int
    cnot_layer_count: int
    depth: int
    rzz_absorbed: int
    swaps_removed: int
    swap_layers_used: list[int]
    transpile_seconds: float
    verified: bool | None = None
    estimates: dict | None = None

    @classmethod
    def from_routing(
        cls,
        routed: RoutedCircuit,
        problem_text: str,
        map_text: str,
        strategy_text: str,
        router: str,
        transpile_seconds: float,
        verified: bool | None = None,
        estimates: dict | None = None,
    ) -> "RunReport":
        return cls(
            problem_digest=digest(problem_text),
            map_digest=digest(map_text),
            strategy_digest=digest(strategy_text),
            router=router,
            cnot_count=routed.cnot_count,
            cnot_layer_count=routed.cnot_layer_count,
            depth=routed.depth(),
            rzz_absorbed=routed.rzz_absorbed_count,
            swaps_removed=routed.swaps_removed,
            swap_layers_used=list(routed.swap_layers_used),
            transpile_seconds=transpile_seconds,
            verified=verified,
            estimates=estimates,
        )

    def matches(self, routed: RoutedCircuit) -> bool:
        return (
            self.cnot_count == routed.cnot_count
            and self.cnot_layer_count == routed.cnot_layer_count
            and self.depth == routed.depth()
            and self.rzz_absorbed == routed.rzz_absorbed_count
            and self.swaps_removed == routed.swaps_removed
            and self.swap_layers_used == list(routed.swap_layers_used)
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))
