"""Shared fixtures: the 4-node mirror graph and small helpers.

The mirror graph is the smallest game where the SUT needs memory: from
the hub it must return to whichever branch the tester already took, or
the tester collects all four nodes instead of three.
"""
from __future__ import annotations

import pytest

from ncgames.graph import GameGraph, NodeInfo, SUT, TESTER

MIRROR_TEXT = """\
ncgame 1
node v0 owner=tester gain=1
node v1 owner=tester gain=1
node v2 owner=tester gain=1
node v3 owner=sut gain=1
edge v0 v1
edge v0 v2
edge v1 v3
edge v2 v3
edge v3 v1
edge v3 v2
init v0
"""

MIRROR_WITNESS_TEXT = """\
ncwitness 1
entry v0 c=3 P=v0
entry v1 c=2 P=v1,v3
entry v2 c=2 P=v2,v3
entry v3 c=2 P=v2,v3
"""


@pytest.fixture
def mirror() -> GameGraph:
    nodes = {
        "v0": NodeInfo(TESTER, 1),
        "v1": NodeInfo(TESTER, 1),
        "v2": NodeInfo(TESTER, 1),
        "v3": NodeInfo(SUT, 1),
    }
    edges = {
        "v0": ("v1", "v2"),
        "v1": ("v3",),
        "v2": ("v3",),
        "v3": ("v1", "v2"),
    }
    return GameGraph(nodes, edges, "v0")


def graph_of(layout: dict[str, tuple[int, int, tuple[str, ...]]], init: str) -> GameGraph:
    """Compact builder: node -> (owner, gain, successors)."""
    nodes = {v: NodeInfo(owner, gain) for v, (owner, gain, _) in layout.items()}
    edges = {v: succs for v, (_, _, succs) in layout.items()}
    return GameGraph(nodes, edges, init)
