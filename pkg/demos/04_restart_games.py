#!/usr/bin/env python3
"""Restart games and the node-doubling reduction.

Letting the tester restart the play at the initial node (keeping the
accumulated coverage) can only help: branches the SUT forced shut become
reachable again.  The restart game reduces to a plain game by splitting
every node into an entry half (offering restart-or-continue) and an exit
half (carrying the original moves); the plain value of the doubled graph
is exactly twice the restart value.
"""
from ncgames import (
    generate_random,
    parse_game_graph,
    restart_double,
    solve_mcg,
    solve_mcg_restart,
)

TEXT = """\
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

g = parse_game_graph(TEXT)
plain = solve_mcg(g, g.init).value
with_restart = solve_mcg_restart(g, g.init)
print(f"plain value: {plain}  (the SUT traps the play in one branch)")
print(f"with restart: {with_restart}  (restart after the trap, take the other branch)")

doubled = restart_double(g)
print(f"\ndoubled graph: {len(doubled.nodes)} nodes, init {doubled.init}")
print(f"plain value of the doubled graph: {solve_mcg(doubled, doubled.init).value}")
print(f"twice the restart value:          {2 * with_restart}")

print("\nthe identity holds on random graphs:")
for seed in range(5):
    rg = generate_random(6, 0.5, 1, 2, seed=seed)
    lhs = solve_mcg(restart_double(rg), f"{rg.init}__in").value
    rhs = 2 * solve_mcg_restart(rg, rg.init)
    print(f"  seed {seed}: doubled {lhs} == 2 x restart {rhs // 2} -> {lhs == rhs}")
