#!/usr/bin/env python3
"""Budgeted test-plan execution against a randomly responding SUT.

A deterministic-model test suite prescribes paths, but a nondeterministic
SUT diverges from them; re-running diverged cases recovers the lost
coverage at the price of reset fees.  This demo generates a static
node-coverage suite, executes it under the four repetition strategies and
the two baselines, and prints the campaign as CSV.
"""
import random

from ncgames import (
    ExperimentConfig,
    SutResponder,
    emit_csv,
    generate_random,
    generate_static_suite,
    nt_plan,
    run_experiment,
)

g = generate_random(30, 0.3, 1, 2, seed=2)
suite = generate_static_suite(g)
print(f"graph: {len(g.nodes)} nodes; suite: {len(suite.cases)} cases, "
      f"prescribing {len(suite.node_union())} nodes")

# one run, spelled out
res = nt_plan(g, suite, budget=240, strategy="s2", reset_cost=10,
              sut=SutResponder(7), rng=random.Random(7))
print(f"\nsingle s2 run at budget 240: covered {len(res.covered)}/{len(g.nodes)}, "
      f"spent {res.spent} (resets {res.resets}, executions {res.executions})")
diverged = sum(1 for rec in res.log if rec.diverged)
print(f"executions that diverged: {diverged}/{res.executions}")

# the full campaign: repetition strategies vs the baselines
cfg = ExperimentConfig(
    graph_name="demo30",
    budgets=(90, 240, 480),
    trials=100,
    reset_cost=10,
    base_seed=42,
)
print("\ncampaign (100 trials per cell):")
print(emit_csv(run_experiment(g, cfg)), end="")
