#!/usr/bin/env python3
"""Satisfiability as a coverage game.

A CNF with n variables and m nonempty clauses becomes a game with
m + 3n + 1 nodes: the SUT walks the variable chain choosing polarities,
the tester then drives the play into clause nodes, and each clause node
escapes into one of its literals.  The formula is satisfiable exactly
when the SUT can pin the guaranteed coverage at m + 2n + 1; any
unsatisfiable choice of polarities leaks at least one extra node.
"""
from ncgames import brute_force_sat, parse_dimacs, sat_to_ncgame, serialize_game_graph, solve_mcg

SATISFIABLE = "p cnf 3 2\n1 2 3 0\n-1 -2 0\n"
CONTRADICTION = "p cnf 1 2\n1 0\n-1 0\n"

for label, dimacs in (("satisfiable", SATISFIABLE), ("contradiction", CONTRADICTION)):
    f = parse_dimacs(dimacs)
    game, threshold = sat_to_ncgame(f)
    value = solve_mcg(game, game.init).value
    print(f"{label}: {f.variable_count} vars, {len(f.clauses)} clauses")
    print(f"  game size {len(game.nodes)}, threshold {threshold}, solved value {value}")
    print(f"  brute-force satisfiable: {brute_force_sat(f)}")
    print(f"  value <= threshold: {value <= threshold}")
    print()

game, _ = sat_to_ncgame(parse_dimacs(SATISFIABLE))
print("the reduced game in ncgame text:")
print(serialize_game_graph(game), end="")
