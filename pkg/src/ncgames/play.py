"""Plays, strategies, bounded play simulation, and exhaustive search helpers.

A play prefix is a tuple of node ids respecting the graph's edges.  A
strategy for a player is any callable mapping a play prefix (whose last
node the player owns) to one successor of that node; positional strategies
specialize this to a per-node choice table.

``StateMachineStrategy`` is the finite-state SUT interface used by
certificate checking and by ``best_response_gain``: the strategy exposes a
hashable state, updates it on every node the pebble visits, and picks a
successor whenever the pebble sits on an SUT node.

Strategy objects are single-play; independent simulations can run
concurrently as long as each gets its own strategy instances and RNG
stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Iterator, Mapping

from .errors import CapacityError, StrategyError, ValidationError
from .graph import SUT, TESTER, GameGraph, ensure_valid

PlayPrefix = tuple[str, ...]
StrategyFn = Callable[[PlayPrefix], str]


class StateMachineStrategy:
    """Finite-state SUT strategy: (state, node) -> next state / chosen successor.

    ``transition`` runs once for every node the pebble arrives at (including
    tester nodes and the initial node); ``choose`` is consulted afterwards
    when the node belongs to the SUT.  States must be hashable and the
    state space finite; both methods must be pure (exhaustive search
    replays them on arbitrary interleavings).
    """

    def initial_state(self) -> Hashable:
        return None

    def transition(self, state: Hashable, node: str) -> Hashable:
        return state

    def choose(self, state: Hashable, node: str) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PositionalStrategy(StateMachineStrategy):
    """Memoryless strategy: a fixed successor choice per owned node."""

    player: int
    moves: Mapping[str, str]

    def __call__(self, prefix: PlayPrefix) -> str:
        return self.moves[prefix[-1]]

    def choose(self, state: Hashable, node: str) -> str:
        return self.moves[node]


def as_strategy_fn(strategy) -> StrategyFn:
    """Adapt a StateMachineStrategy (or pass through a callable) for
    simulate_play.  The state is recomputed from the prefix on every call,
    so the returned function is stateless and reusable across plays."""
    if isinstance(strategy, StateMachineStrategy) and not callable(strategy):
        def fn(prefix: PlayPrefix) -> str:
            state = strategy.initial_state()
            for node in prefix:
                state = strategy.transition(state, node)
            return strategy.choose(state, prefix[-1])

        return fn
    if callable(strategy):
        return strategy
    raise TypeError(f"not a strategy: {strategy!r}")


def positional_bound(g: GameGraph) -> int:
    """Simulation bound after which positional-pair coverage has stabilized."""
    return len(g.nodes) + 1


def simulate_play(
    g: GameGraph,
    r: str,
    s1: StrategyFn | StateMachineStrategy,
    s2: StrategyFn | StateMachineStrategy,
    max_steps: int,
) -> PlayPrefix:
    """Prefix (at most max_steps nodes) of the unique play from r that
    conforms to tester strategy s1 and SUT strategy s2.

    Raises StrategyError when a strategy returns a non-successor.
    """
    ensure_valid(g, strict=True)
    if r not in g.nodes:
        raise ValueError(f"unknown node `{r}`")
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    f1 = as_strategy_fn(s1)
    f2 = as_strategy_fn(s2)
    prefix = [r]
    while len(prefix) < max_steps:
        v = prefix[-1]
        fn = f1 if g.owner(v) == TESTER else f2
        choice = fn(tuple(prefix))
        if choice not in g.edges[v]:
            raise StrategyError(
                f"strategy chose `{choice}`, not a successor of `{v}` "
                f"(prefix: {' '.join(prefix)})"
            )
        prefix.append(choice)
    return tuple(prefix)


def check_log_consistency(prefix: PlayPrefix, g: GameGraph) -> bool:
    """True iff every revisited SUT node repeats its earlier choice.

    Vacuously true when no SUT node occurs twice before the last position.
    """
    first_choice: dict[str, str] = {}
    for i in range(len(prefix) - 1):
        v = prefix[i]
        if g.owner(v) != SUT:
            continue
        nxt = prefix[i + 1]
        if v in first_choice:
            if first_choice[v] != nxt:
                return False
        else:
            first_choice[v] = nxt
    return True


def enumerate_positional(
    g: GameGraph, player: int, cap: int = 1_000_000
) -> Iterator[PositionalStrategy]:
    """Yield every positional strategy of `player`, in deterministic order.

    The number of strategies is the product of out-degrees over the
    player's nodes; exceeding `cap` raises CapacityError before yielding.
    """
    owned = [v for v in g.node_ids() if g.owner(v) == player]
    choice_lists = []
    for v in owned:
        succs = g.edges[v]
        if not succs:
            raise ValidationError(f"sink: {v}")
        choice_lists.append(succs)
    count = math.prod(len(c) for c in choice_lists)
    if count > cap:
        raise CapacityError(f"{count} positional strategies exceed cap {cap}")

    def gen() -> Iterator[PositionalStrategy]:
        for combo in product(*choice_lists):
            yield PositionalStrategy(player, dict(zip(owned, combo)))

    return gen()


def best_response_gain(
    g: GameGraph,
    r: str,
    sut: StateMachineStrategy,
    state_cap: int = 1_000_000,
) -> int:
    """Maximum coverage gain any tester behavior can achieve from r against
    the fixed finite-state SUT strategy.

    Exhaustive search on the arena of (node, covered set, SUT state)
    triples.  Covered sets only grow, so the arena is layered by covered
    set; within a layer the value is the least fixed point of the one-step
    maximization initialized at the stay-forever payoff (the gain of the
    layer's covered set), which resolves cycles.
    """
    ensure_valid(g, strict=True)
    if r not in g.nodes:
        raise ValueError(f"unknown node `{r}`")

    ids = g.node_ids()
    index = {v: i for i, v in enumerate(ids)}
    succ = [tuple(index[w] for w in g.edges[v]) for v in ids]
    owner_is_tester = [g.owner(v) == TESTER for v in ids]
    gains = [g.gain(v) for v in ids]

    s0 = sut.transition(sut.initial_state(), r)
    root = (index[r], 1 << index[r], s0)
    mask_gain = {1 << index[r]: gains[index[r]]}

    # forward exploration of all (node, covered, sut-state) triples
    seen = {root}
    layers: dict[int, list[tuple[int, Hashable]]] = {}
    stack = [root]
    while stack:
        v, mask, s = stack.pop()
        layers.setdefault(mask, []).append((v, s))
        if owner_is_tester[v]:
            choices = succ[v]
        else:
            chosen = sut.choose(s, ids[v])
            if chosen not in g.edges[ids[v]]:
                raise StrategyError(
                    f"SUT strategy chose `{chosen}`, not a successor of `{ids[v]}`"
                )
            choices = (index[chosen],)
        for u in choices:
            bit = 1 << u
            m2 = mask | bit
            if m2 not in mask_gain:
                mask_gain[m2] = mask_gain[mask] + gains[u]
            s2 = sut.transition(s, ids[u])
            nxt = (u, m2, s2)
            if nxt not in seen:
                if len(seen) >= state_cap:
                    raise CapacityError(f"search state space exceeds cap {state_cap}")
                seen.add(nxt)
                stack.append(nxt)

    values: dict[tuple[int, int, Hashable], int] = {}
    for mask in sorted(layers, key=lambda m: -bin(m).count("1")):
        members = layers[mask]
        base = mask_gain[mask]
        # split each member's options into in-layer refs and settled exits
        exits: dict[tuple[int, Hashable], list[int]] = {}
        inside: dict[tuple[int, Hashable], list[tuple[int, Hashable]]] = {}
        for v, s in members:
            if owner_is_tester[v]:
                choices = succ[v]
            else:
                choices = (index[sut.choose(s, ids[v])],)
            ex, ins = [], []
            for u in choices:
                s2 = sut.transition(s, ids[u])
                if mask & (1 << u):
                    ins.append((u, s2))
                else:
                    ex.append(values[(u, mask | (1 << u), s2)])
            exits[(v, s)] = ex
            inside[(v, s)] = ins
        w = {m: base for m in members}
        changed = True
        while changed:
            changed = False
            prev = dict(w)
            for m in members:
                best = max(exits[m], default=base)
                for u in inside[m]:
                    best = max(best, prev[u])
                if best != prev[m]:
                    w[m] = best
                    changed = True
        for (v, s), val in w.items():
            values[(v, mask, s)] = val
    return values[root]
