"""Bundled reference instances and device snapshots.

g10: seven-variable MaxCut instance with ten +-1 weighted terms, laid out
so one swap layer {(0,1), (3,5)} routes it on the seven-qubit H-shaped
device; its single maximum cut has value 3.

mumbai27: 27-variable instance native to the 27-qubit device coupling
map, +-1 weights summing to -4; the maximum cut is 12 (two optimal
bitstrings) with 12 and 212 bitstrings at cut values 11 and 10.  The
weights were reconstructed to match that published census, since only a
drawing of them is available; the census is re-verified exhaustively by
the acceptance suite.
"""

from __future__ import annotations

from importlib import resources

from .problem import ProblemGraph
from .strategy import SwapStrategy
from .topology import CouplingMap

FIXTURE_NAMES = ("g10", "mumbai27")
MAP_NAMES = ("nairobi", "mumbai")


def _read(name: str) -> str:
    return resources.files("swaproute.data").joinpath(name).read_text()


def g10() -> ProblemGraph:
    return ProblemGraph.from_json(_read("g10.json"))


def mumbai27() -> ProblemGraph:
    return ProblemGraph.from_json(_read("mumbai27.json"))


def problem_fixture(name: str) -> ProblemGraph:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown problem fixture {name!r}; have {FIXTURE_NAMES}")
    return ProblemGraph.from_json(_read(f"{name}.json"))


def nairobi_map() -> CouplingMap:
    return CouplingMap.from_json(_read("nairobi.json"))


def mumbai_map() -> CouplingMap:
    return CouplingMap.from_json(_read("mumbai.json"))


def map_fixture(name: str) -> CouplingMap:
    if name not in MAP_NAMES:
        raise KeyError(f"unknown map fixture {name!r}; have {MAP_NAMES}")
    return CouplingMap.from_json(_read(f"{name}.json"))


def nairobi_strategy() -> SwapStrategy:
    return SwapStrategy.from_json(_read("nairobi_s0.json"), nairobi_map())
