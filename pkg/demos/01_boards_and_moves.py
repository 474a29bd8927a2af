"""Boards, playability and moves.

A layout is a set of slots on a half-unit grid: a tile at (x, y, z) covers
[x, x+2) x [y, y+2) on level z and may rest on tiles one level down.  A
tile is playable when nothing overlaps it from above and at least one of
its sides (x-2 or x+2, same level, overlapping y-range) is free.
"""

from mahsolve import layouts
from mahsolve.board import (legal_moves, playable, serialize_board, shuffle,
                            Slot)

lay = layouts.turtle()
print("turtle layout: %d slots, %d on the ground"
      % (len(lay.slots), sum(1 for s in lay.slots if s.z == 0)))

board = shuffle(lay, [4] * 36, seed=7)
free = [s for s in lay.slots if playable(board, s)]
print("seed-7 deal: %d playable tiles" % len(free))

# The apex straddles the four level-3 tiles: it blocks all of them at once.
apex = Slot(13, 9, 4)
print("apex playable:", playable(board, apex))
for s in sorted(lay.slots):
    if s.z == 3:
        print("  level-3 tile %s playable: %s" % ((s.x, s.y, s.z),
                                                  playable(board, s)))

moves = legal_moves(board)
print("legal opening moves: %d" % len(moves))
print("first few:", [((m.a.x, m.a.y, m.a.z), (m.b.x, m.b.y, m.b.z))
                     for m in moves[:3]])

# Boards round-trip through a plain text format.
text = serialize_board(board)
print("\nboard file starts with:")
print("\n".join(text.splitlines()[:4]))
