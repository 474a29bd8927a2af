"""Monte Carlo layout scanning.

How often is a random deal of a layout unwinnable even for a player who
sees everything?  scan_layout deals n seeded boards, decides each with the
complete group-directed solver, and aggregates the unsolvable fraction,
per-board timing percentiles and a random-playout difficulty measure.

Board i is dealt from a seed derived from (master seed, i), so the report
is identical for any worker count or run — only the timing fields move.
"""

from mahsolve.harness import scan_layout
from mahsolve.layouts import get_layout

# Two pair groups on two stacks: 4 of the 6 possible deals are dead on
# arrival, so the fraction converges on 2/3.
lay, sizes = get_layout("two-stacks-demo")
rep = scan_layout(lay, 2000, seed=1, group_sizes=sizes,
                  layout_name="two-stacks-demo", playout_attempts=4)
print("two-stacks-demo, 2000 deals: unsolvable fraction %.3f (exact: 2/3)"
      % rep.unsolvable_fraction)

# The classic 144-tile turtle: roughly 3% of deals are unwinnable.
lay, sizes = get_layout("turtle")
rep = scan_layout(lay, 200, seed=1, group_sizes=sizes, layout_name="turtle")
print("\nturtle, 200 deals:")
print("  unsolvable: %d (%.1f%%)" % (rep.unsolvable_count,
                                     100 * rep.unsolvable_fraction))
print("  decision time p50/p99/max: %.0f / %.0f / %.0f ms"
      % (rep.p50_ms, rep.p99_ms, rep.max_ms))
print("  mean random-playout success on solvable boards: %.3f"
      % rep.random_success_fraction)
print("\nJSON report:")
print(rep.to_json())
