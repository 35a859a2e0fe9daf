"""Budgeted execution of static test suites against a random-responding SUT.

A test case is a prescribed play prefix starting at the initial node.
Executing one walks the prefix while the SUT re-resolves every choice at
its own nodes; a response that departs from the prescription ends the
case (the diverging node is still visited and paid for).  Every visited
node costs one dollar; starting a case after the first costs a flat reset
fee on top.

``nt_plan`` repeatedly picks the case with the greatest selection score
(``pgain``) until the budget cannot fund another start or everything the
suite prescribes has been covered.  Four scores are provided:

* ``s1.5`` - round-robin passes: 1 for cases not yet run in the current
  pass, else 0 (passes restart, so leftover budget keeps buying
  repetition while coverage is incomplete);
* ``s2``   - 1 for cases that could still add coverage, else 0;
* ``s3``   - a uniform random draw in [0, u] where u counts the case's
  still-uncovered prescribed nodes;
* ``s4``   - as s3 but with u divided by the number of SUT positions in
  the case, favoring cases the SUT interferes with less.

Baselines: ``random_walk`` wanders edge-by-edge until the budget is gone;
``static_once`` runs each case exactly once in suite order.  Suites are
written in the ``ncsuite 1`` format::

    ncsuite 1
    case <id>: <node> <node> ...

Each run owns its responder and RNG; independent runs execute
concurrently without coordination.
"""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .graph import SUT, GameGraph, ensure_valid, reachable

_ID_RE = re.compile(r"^[A-Za-z0-9_]+$")

PGAIN_STRATEGIES = ("s1.5", "s2", "s3", "s4")


@dataclass(frozen=True)
class TestCase:
    id: str
    path: tuple[str, ...]

    def node_set(self) -> frozenset[str]:
        return frozenset(self.path)


@dataclass(frozen=True)
class TestSuite:
    cases: tuple[TestCase, ...]

    def node_union(self) -> frozenset[str]:
        out: set[str] = set()
        for tc in self.cases:
            out.update(tc.path)
        return frozenset(out)


@dataclass(frozen=True)
class ExecutionRecord:
    case_id: str
    realized: tuple[str, ...]
    diverged: bool


@dataclass(frozen=True)
class RunResult:
    """Outcome of one budgeted run: what was covered and what it cost."""

    covered: frozenset[str]
    spent: int
    resets: int
    executions: int
    log: tuple[ExecutionRecord, ...]


class SutResponder:
    """Seeded random resolver of SUT choices: uniform over successors."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, g: GameGraph, v: str) -> str:
        succs = g.edges[v]
        return succs[self._rng.randrange(len(succs))]


def validate_suite(g: GameGraph, suite: TestSuite) -> list[str]:
    """Suite invariants: distinct ids, paths start at init and follow edges."""
    violations = []
    seen_ids: set[str] = set()
    for tc in suite.cases:
        if tc.id in seen_ids:
            violations.append(f"duplicate case id `{tc.id}`")
        seen_ids.add(tc.id)
        if not tc.path:
            violations.append(f"{tc.id}: empty path")
            continue
        if tc.path[0] != g.init:
            violations.append(f"{tc.id}: path starts at `{tc.path[0]}`, not init")
        for v in tc.path:
            if v not in g.nodes:
                violations.append(f"{tc.id}: unknown node `{v}`")
                break
        else:
            for a, b in zip(tc.path, tc.path[1:]):
                if b not in g.edges[a]:
                    violations.append(f"{tc.id}: `{a} {b}` is not an edge")
                    break
    return violations


def generate_static_suite(g: GameGraph) -> TestSuite:
    """Deterministic node-coverage suite for the deterministic reading of g.

    Nodes are targeted in lexicographic order; each still-uncovered target
    gets the shortest initial-node path to it (lexicographic tie-break on
    every step), greedily extended while the smallest successor of the
    path's end still adds an uncovered node.  Cases that end up as a
    prefix of another case are dropped.  The suite prescribes every
    reachable node.
    """
    ensure_valid(g, strict=True)
    reach = reachable(g, g.init)
    covered: set[str] = set()
    paths: list[tuple[str, ...]] = []
    for target in sorted(reach):
        if target in covered:
            continue
        dist = _distances_to(g, target, reach)
        path = [g.init]
        while path[-1] != target:
            step = min(
                w for w in g.edges[path[-1]] if dist.get(w, -1) == dist[path[-1]] - 1
            )
            path.append(step)
        while True:
            nxt = min(g.edges[path[-1]])
            if nxt in covered or nxt in path:
                break
            path.append(nxt)
        covered.update(path)
        paths.append(tuple(path))
    kept = [
        p
        for p in paths
        if not any(q != p and q[: len(p)] == p for q in paths)
    ]
    return TestSuite(tuple(TestCase(f"t{i}", p) for i, p in enumerate(kept)))


def _distances_to(g: GameGraph, target: str, universe: frozenset[str]) -> dict[str, int]:
    """BFS distance to `target` over reversed edges, within `universe`."""
    preds: dict[str, list[str]] = {v: [] for v in universe}
    for v in universe:
        for w in g.edges[v]:
            if w in universe:
                preds[w].append(v)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def alpha(tc: TestCase, g: GameGraph) -> int:
    """Number of SUT-owned positions in the case's path (positions, not nodes)."""
    return sum(1 for v in tc.path if g.owner(v) == SUT)


def pgain(
    strategy: str,
    g: GameGraph,
    tc: TestCase,
    covered: frozenset[str] | set[str],
    suite: TestSuite,
    rng: random.Random,
    executed_ids: frozenset[str] | set[str] = frozenset(),
) -> float:
    """Selection score of a test case under one of the four strategies.

    `executed_ids` carries the ids already run in the current pass; only
    ``s1.5`` reads it.  `suite` is part of the score's signature even
    though none of the four strategies ranks cases against each other.
    """
    if strategy == "s1.5":
        return 0.0 if tc.id in executed_ids else 1.0
    if strategy == "s2":
        return 0.0 if tc.node_set() <= covered else 1.0
    if strategy == "s3":
        u = len(tc.node_set() - covered)
        return rng.uniform(0.0, u) if u else 0.0
    if strategy == "s4":
        u = len(tc.node_set() - covered)
        bound = u / max(1, alpha(tc, g))
        return rng.uniform(0.0, bound) if bound else 0.0
    raise ValueError(f"unknown strategy `{strategy}`")


def execute_case(
    g: GameGraph, tc: TestCase, budget: int, sut: SutResponder
) -> tuple[tuple[str, ...], bool, int]:
    """Run one test case within `budget` dollars.

    Returns (realized prefix, diverged flag, cost).  Every visited node
    costs one dollar, including a diverging successor chosen by the SUT;
    execution stops on divergence, on path exhaustion, or when the budget
    cannot pay the next visit.
    """
    if budget < 1:
        return (), False, 0
    realized = [tc.path[0]]
    left = budget - 1
    pos = 0
    diverged = False
    while pos < len(tc.path) - 1 and left > 0:
        cur = tc.path[pos]
        prescribed = tc.path[pos + 1]
        if g.owner(cur) == SUT:
            actual = sut.choose(g, cur)
            realized.append(actual)
            left -= 1
            if actual != prescribed:
                diverged = True
                break
        else:
            realized.append(prescribed)
            left -= 1
        pos += 1
    return tuple(realized), diverged, len(realized)


def nt_plan(
    g: GameGraph,
    suite: TestSuite,
    budget: int,
    strategy: str,
    reset_cost: int,
    sut: SutResponder,
    rng: random.Random,
    charge_first_start: bool = False,
) -> RunResult:
    """Repetitive suite execution: keep picking the highest-scoring case.

    Stops when everything the suite prescribes is covered or the leftover
    budget cannot fund another start (reset fee plus one visit; the first
    start is free unless `charge_first_start`).  Ties on the score are
    broken uniformly at random.
    """
    if not suite.cases:
        raise ValidationError("empty test suite")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if reset_cost < 0:
        raise ValueError("reset_cost must be >= 0")
    if strategy not in PGAIN_STRATEGIES:
        raise ValueError(f"unknown strategy `{strategy}`")

    target = suite.node_union()
    all_ids = {tc.id for tc in suite.cases}
    covered: set[str] = set()
    executed_ids: set[str] = set()
    log: list[ExecutionRecord] = []
    spent = resets = executions = 0
    while not target <= covered:
        first = executions == 0 and not charge_first_start
        start_cost = 0 if first else reset_cost
        if spent + start_cost + 1 > budget:
            break
        if strategy == "s1.5" and all_ids <= executed_ids:
            executed_ids.clear()  # new pass, run everything again
        scores = [
            pgain(strategy, g, tc, covered, suite, rng, executed_ids)
            for tc in suite.cases
        ]
        top = max(scores)
        ties = [tc for tc, s in zip(suite.cases, scores) if s == top]
        tc = ties[rng.randrange(len(ties))]
        spent += start_cost
        if not first:
            resets += 1
        realized, diverged, cost = execute_case(g, tc, budget - spent, sut)
        spent += cost
        executions += 1
        covered.update(realized)
        executed_ids.add(tc.id)
        log.append(ExecutionRecord(tc.id, realized, diverged))
    return RunResult(frozenset(covered), spent, resets, executions, tuple(log))


def static_once(
    g: GameGraph,
    suite: TestSuite,
    budget: int,
    reset_cost: int,
    sut: SutResponder,
    charge_first_start: bool = False,
) -> RunResult:
    """Execute each case exactly once, in suite order, within the budget.

    This is the deterministic-model baseline: no repetition after a
    divergence, and typically the budget is not exhausted.
    """
    if not suite.cases:
        raise ValidationError("empty test suite")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    covered: set[str] = set()
    log: list[ExecutionRecord] = []
    spent = resets = executions = 0
    for tc in suite.cases:
        first = executions == 0 and not charge_first_start
        start_cost = 0 if first else reset_cost
        if spent + start_cost + 1 > budget:
            break
        spent += start_cost
        if not first:
            resets += 1
        realized, diverged, cost = execute_case(g, tc, budget - spent, sut)
        spent += cost
        executions += 1
        covered.update(realized)
        log.append(ExecutionRecord(tc.id, realized, diverged))
    return RunResult(frozenset(covered), spent, resets, executions, tuple(log))


def random_walk(
    g: GameGraph,
    budget: int,
    reset_cost: int,
    sut: SutResponder,
    rng: random.Random,
) -> RunResult:
    """Single continuous random walk from the initial node until the budget
    runs out.  Tester choices are uniform; SUT choices come from the
    responder.  Never resets on strict graphs (`reset_cost` is accepted
    for interface symmetry with the other runners)."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    realized = [g.init]
    left = budget - 1
    while left > 0:
        v = realized[-1]
        succs = g.edges[v]
        if not succs:
            raise ValidationError(f"sink: {v}")
        if g.owner(v) == SUT:
            nxt = sut.choose(g, v)
        else:
            nxt = succs[rng.randrange(len(succs))]
        realized.append(nxt)
        left -= 1
    record = ExecutionRecord("walk", tuple(realized), False)
    return RunResult(frozenset(realized), len(realized), 0, 1, (record,))


def parse_suite(text: str) -> TestSuite:
    """Parse ``ncsuite 1`` text."""
    cases: list[TestCase] = []
    seen: set[str] = set()
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != "ncsuite 1":
                raise ParseError("expected `ncsuite 1` header", lineno)
            header_seen = True
            continue
        if not line.startswith("case "):
            raise ParseError("expected `case <id>: <node> <node> ...`", lineno)
        head, _, tail = line[len("case "):].partition(":")
        case_id = head.strip()
        if not _ID_RE.match(case_id):
            raise ParseError(f"invalid case id `{case_id}`", lineno)
        if case_id in seen:
            raise ParseError(f"duplicate case id `{case_id}`", lineno)
        seen.add(case_id)
        path = tuple(tail.split())
        if not path or any(not _ID_RE.match(v) for v in path):
            raise ParseError("case path must list node ids", lineno)
        cases.append(TestCase(case_id, path))
    if not header_seen:
        raise ParseError("empty input: expected `ncsuite 1` header", None)
    return TestSuite(tuple(cases))


def serialize_suite(suite: TestSuite) -> str:
    """Render a suite in ``ncsuite 1`` text (case order preserved)."""
    lines = ["ncsuite 1"]
    for tc in suite.cases:
        lines.append(f"case {tc.id}: {' '.join(tc.path)}")
    return "\n".join(lines) + "\n"
