"""The relaxed-rules pruning scan.

The scan removes tiles under a relaxation of the matching rules: a
four-tile group with no assigned pairing "opens" by removing any two of
its simultaneously playable tiles in one step and then sheds its remaining
tiles one at a time.  Pair groups (and groups constrained to a chosen
pairing) still need two simultaneously playable partner tiles.

If even this relaxation cannot clear the board, no real play can: a stuck
scan is a proof of unsolvability.  A cleared scan proves nothing.
"""

from mahsolve.board import Board, Layout, Slot, shuffle
from mahsolve import layouts
from mahsolve.scan import (pairing_feasibility, prune_scan, scan_trace_lines,
                           simultaneous_removal_flags)

# A contiguous ground row of four same-group tiles.
row = Board(Layout([Slot(2 * i, 0, 0) for i in range(4)]),
            {Slot(2 * i, 0, 0): 0 for i in range(4)})

r = prune_scan(row, record_trace=True)
print("free 4-row cleared:", r.cleared)
for line in scan_trace_lines(r):
    print(" ", line)

# Constrain the group to a pairing: only {ends},{middles} can be played
# for real, and the scan agrees.
for k in (1, 2, 3):
    print("pairing %d clears: %s" % (k, prune_scan(row, {0: k}).cleared))
print("feasibility mask: 0b%03d" % int(bin(pairing_feasibility(row, None, 0))[2:]))

# Were all four tiles ever playable at once?  (Used by the min_pairings
# branching heuristic to spot groups that must be sequenced.)
print("sim flags on the row:", simultaneous_removal_flags(row))

# Two pair groups crossed over two stacks: each group has one tile buried
# under the other group.  No relaxation helps; the scan proves it.
cross = Board(Layout([Slot(0, 0, 0), Slot(0, 0, 1),
                      Slot(4, 0, 0), Slot(4, 0, 1)]),
              {Slot(0, 0, 1): 0, Slot(4, 0, 0): 0,
               Slot(0, 0, 0): 1, Slot(4, 0, 1): 1})
r = prune_scan(cross)
print("\ncrossed stacks cleared:", r.cleared,
      "- remaining tiles:", len(r.remaining))

# On a full deal the scan is the solvers' workhorse filter.
board = shuffle(layouts.turtle(), [4] * 36, seed=7)
print("\nturtle seed 7 top-level scan cleared:", prune_scan(board).cleared)
