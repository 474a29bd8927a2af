"""Hardness at height 3, easiness at height 2.

With stacks of height 3 the game is NP-hard: any 3-SAT formula compiles
into a board of isolated stacks that is solvable exactly when the formula
is satisfiable (and a flat one-level variant does the same with rows).

At heights <= 2 the game collapses: a board of isolated stacks is winnable
if and only if it contains no "blocked cycle" - pair groups p1..pk where
each p_i has one tile atop the stack burying a tile of p_{i+1}.  That
yields a polynomial solver, and even without peeking a simple policy is
provably optimal - checked here against an exact expectimax evaluation.
"""

from fractions import Fraction

from mahsolve.board import Board, Layout, Slot
from mahsolve.solver import solve_group_directed
from mahsolve.theory import (detect_blocked_cycle, expectimax_no_peek,
                             no_peek_policy, one_level, parse_dimacs,
                             reduce_3sat, solve_low_peek)

sat = parse_dimacs("p cnf 1 1\n1 0\n")            # x1         : satisfiable
unsat = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")    # x1 & ~x1   : unsatisfiable

for name, f in (("x1", sat), ("x1 & ~x1", unsat)):
    board, tags = reduce_3sat(f)
    v = solve_group_directed(board)
    print("reduce_3sat(%s): %d stacks, %d groups -> %s"
          % (name, len(board.layout.slots) // 3, len(set(tags)),
             "solvable" if v.solvable else "unsolvable"))

flat, _ = one_level(sat)
print("one_level(x1): all flat:", all(s.z == 0 for s in flat.layout.slots),
      "->", "solvable" if solve_group_directed(flat).solvable else "unsolvable")


def stacks(columns):
    asg = {Slot(4 * n, 0, z): g
           for n, col in enumerate(columns) for z, g in enumerate(col)}
    return Board(Layout(asg), asg)


# k=1 blocked cycle: a pair group stacked on itself.
b = stacks([(0, 0), (1,), (1,)])
print("\npair on itself:", detect_blocked_cycle(b))

# k=2: p1 over p2 and p2 over p1.
b = stacks([(1, 0), (0, 1)])
print("crossed pairs:  ", detect_blocked_cycle(b))

# Cycle-free low boards are always winnable, in polynomial time.
b = stacks([(0, 1), (1, 2), (2, 3), (0,), (3,)])
cyc = detect_blocked_cycle(b)
v = solve_low_peek(b)
print("chain without a cycle: cycle=%s -> %s in %d moves"
      % (cyc, "solvable" if v.solvable else "unsolvable", len(v.solution or ())))

# No peeking: two pair groups on two stacks, bottoms hidden.  Exactly 2 of
# the 6 deals are winnable, and no strategy can beat knowing that.
lay = Layout([Slot(0, 0, 0), Slot(0, 0, 1), Slot(4, 0, 0), Slot(4, 0, 1)])
opt = expectimax_no_peek(lay, [2, 2])
pol = expectimax_no_peek(lay, [2, 2], policy=no_peek_policy)
print("\ntwo hidden stacks: optimal win probability = %s (= 2/6), "
      "policy achieves %s" % (opt, pol))
assert opt == pol == Fraction(1, 3)
