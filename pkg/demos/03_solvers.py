"""The solving engines, cross-checked.

- solve_group_directed: complete search over per-group pairing choices,
  pruned by the scan.  The adaptive heuristic grows a path of constrained
  groups until the scan objects, then trims the accidental ones; the
  min_pairings heuristic branches on the most-constrained group.
- solve_match_directed: complete search at the individual-match level with
  canonicalization, a baseline the pairing view soundly outruns.
- random_solve: random playouts with safe-move cleaning; can only ever
  answer "solvable" or "unknown".
- oracle_solve: exhaustive ground truth, feasible for small boards only.
"""

import random
import time

from mahsolve.board import Layout, Slot, shuffle
from mahsolve import layouts
from mahsolve.solver import (default_attempts, oracle_solve, random_solve,
                             solve_group_directed, solve_match_directed,
                             verify_solution)


def micro_board(rnd):
    xs = sorted(rnd.sample(range(0, 20, 2), 5))
    slots = set()
    for x in xs:
        for z in range(rnd.choice([1, 1, 2])):
            slots.add(Slot(x, 0, z))
    pad = max(s.x for s in slots) + 4
    while len(slots) % 4:
        slots.add(Slot(pad, 0, 0))
        pad += 2
    lay = Layout(slots)
    return shuffle(lay, [4] * (len(slots) // 4), rnd.getrandbits(32))


rnd = random.Random(1)
agree = solvable = 0
for _ in range(60):
    b = micro_board(rnd)
    ref = oracle_solve(b)
    got = [solve_group_directed(b.copy()),
           solve_group_directed(b.copy(), heuristic="min_pairings"),
           solve_match_directed(b.copy())]
    assert all(v.solvable == ref.solvable for v in got)
    assert all(verify_solution(b, v.solution) for v in got if v.solvable)
    agree += 1
    solvable += ref.solvable
print("60 micro boards: all 3 engines agree with the oracle on all %d "
      "(%d solvable)" % (agree, solvable))

board = shuffle(layouts.turtle(), [4] * 36, seed=7)
t0 = time.perf_counter()
v = solve_group_directed(board)
dt = time.perf_counter() - t0
print("\nturtle seed 7: %s in %.3fs, solution length %d moves"
      % ("solvable" if v.solvable else "unsolvable", dt,
         len(v.solution or ())))
print("solution verifies:", verify_solution(board, v.solution))

print("\nrandom engine, default attempts = floor(1.2^36) =",
      default_attempts(board))
rr = random_solve(board, attempts=100, seed=0, measure=True)
print("100 playouts: %d successes (success fraction %.2f) -> %s"
      % (rr.successes, rr.success_fraction, rr.status))
