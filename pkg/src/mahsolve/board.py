"""Board geometry, playability rules, moves, file formats, shuffling.

Coordinates live on a half-unit grid: a slot at (x, y, z) occupies the square
[x, x+2) x [y, y+2) at level z, so tiles may straddle one another by half a
tile in either direction (the turtle apex does exactly that).
"""

from __future__ import annotations

from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from .rng import SplitMix64


class Slot(NamedTuple):
    x: int
    y: int
    z: int


class Move(NamedTuple):
    a: Slot
    b: Slot


# ---------------------------------------------------------------------------
# Errors.  Parse errors carry the offending line number(s) in .lines.
# ---------------------------------------------------------------------------

class BoardFileError(ValueError):
    def __init__(self, message: str, lines: Sequence[int] = ()):
        if lines:
            message = "%s (line%s %s)" % (
                message, "s" if len(lines) > 1 else "", ", ".join(map(str, lines)))
        super().__init__(message)
        self.lines = tuple(lines)


class FormatError(BoardFileError):
    pass


class SlotOverlapError(BoardFileError):
    pass


class UnsupportedSlotError(BoardFileError):
    """A slot above ground with nothing under it."""


class OddCountError(BoardFileError):
    pass


class GroupSizeError(BoardFileError):
    pass


class IllegalMoveError(ValueError):
    pass


def overlaps(a: Slot, b: Slot) -> bool:
    """Footprint overlap at the same level."""
    return a.z == b.z and abs(a.x - b.x) < 2 and abs(a.y - b.y) < 2


class Layout:
    """A finite set of slots obeying the physical stacking rules."""

    def __init__(self, slots: Iterable[Slot], _lines: Optional[Dict[Slot, int]] = None):
        self.slots: Tuple[Slot, ...] = tuple(sorted(set(slots)))
        self._geometry = None
        self._validate(_lines or {})

    def _validate(self, lines: Dict[Slot, int]) -> None:
        def where(*ss: Slot) -> Tuple[int, ...]:
            return tuple(lines[s] for s in ss if s in lines)

        by_level: Dict[int, List[Slot]] = {}
        for s in self.slots:
            if s.z < 0:
                raise FormatError("negative level in slot %r" % (s,), where(s))
            by_level.setdefault(s.z, []).append(s)
        for level_slots in by_level.values():
            for i, a in enumerate(level_slots):
                for b in level_slots[i + 1:]:
                    if overlaps(a, b):
                        raise SlotOverlapError(
                            "slots %r and %r overlap" % (a, b), where(a, b))
        for s in self.slots:
            if s.z > 0:
                under = by_level.get(s.z - 1, ())
                if not any(abs(s.x - t.x) < 2 and abs(s.y - t.y) < 2 for t in under):
                    raise UnsupportedSlotError("slot %r has no support" % (s,), where(s))
        if len(self.slots) % 2 != 0:
            raise OddCountError("layout has %d slots, need an even count"
                                % len(self.slots))

    def __len__(self) -> int:
        return len(self.slots)

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and self.slots == other.slots

    def __hash__(self) -> int:
        return hash(self.slots)

    @property
    def geometry(self) -> "Geometry":
        if self._geometry is None:
            self._geometry = Geometry(self.slots)
        return self._geometry


class Geometry:
    """Index-based adjacency tables for one layout (shared, immutable)."""

    def __init__(self, slots: Sequence[Slot]):
        self.slots = tuple(slots)
        n = len(slots)
        self.n = n
        self.index = {s: i for i, s in enumerate(slots)}
        above: List[List[int]] = [[] for _ in range(n)]
        below: List[List[int]] = [[] for _ in range(n)]
        lefts: List[List[int]] = [[] for _ in range(n)]
        rights: List[List[int]] = [[] for _ in range(n)]
        by_pos: Dict[Tuple[int, int], List[int]] = {}
        for i, s in enumerate(slots):
            by_pos.setdefault((s.x, s.y), []).append(i)
        # neighbor search over candidate x offsets only
        for i, s in enumerate(slots):
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for j in by_pos.get((s.x + dx, s.y + dy), ()):
                        t = slots[j]
                        if t.z == s.z + 1:
                            above[i].append(j)
                        elif t.z == s.z - 1:
                            below[i].append(j)
            for dx in (-2, 2):
                for dy in (-1, 0, 1):
                    for j in by_pos.get((s.x + dx, s.y + dy), ()):
                        t = slots[j]
                        if t.z == s.z:
                            (rights if dx > 0 else lefts)[i].append(j)
        self.above = [tuple(v) for v in above]
        self.below = [tuple(v) for v in below]
        self.lefts = [tuple(v) for v in lefts]
        self.rights = [tuple(v) for v in rights]


class Board:
    """Layout + slot-to-group assignment + removed set (the game state)."""

    def __init__(self, layout: Layout, assignment: Dict[Slot, int],
                 removed: Iterable[Slot] = ()):
        self.layout = layout
        self.assignment = dict(assignment)
        self.removed: Set[Slot] = set(removed)
        self._validate()

    def _validate(self) -> None:
        slots = set(self.layout.slots)
        if set(self.assignment) != slots:
            missing = slots - set(self.assignment)
            extra = set(self.assignment) - slots
            raise GroupSizeError("assignment does not cover the layout "
                                 "(missing %d, extra %d)" % (len(missing), len(extra)))
        counts: Dict[int, int] = {}
        for g in self.assignment.values():
            counts[g] = counts.get(g, 0) + 1
        gids = sorted(counts)
        if gids != list(range(len(gids))):
            raise GroupSizeError("group ids must be dense 0..G-1, got %s" % (gids,))
        for g, c in counts.items():
            if c not in (2, 4):
                raise GroupSizeError("group %d has %d tiles, need 2 or 4" % (g, c))
        if not self.removed <= slots:
            raise GroupSizeError("removed set contains unknown slots")
        if len(self.removed) % 2 != 0:
            raise OddCountError("removed count must be even")

    @property
    def group_count(self) -> int:
        return max(self.assignment.values()) + 1 if self.assignment else 0

    def group_slots(self, g: int) -> Tuple[Slot, ...]:
        return tuple(sorted(s for s, gg in self.assignment.items() if gg == g))

    def groups(self) -> List[Tuple[Slot, ...]]:
        out: List[List[Slot]] = [[] for _ in range(self.group_count)]
        for s, g in self.assignment.items():
            out[g].append(s)
        return [tuple(sorted(v)) for v in out]

    def copy(self) -> "Board":
        b = Board.__new__(Board)
        b.layout = self.layout
        b.assignment = self.assignment  # shared, never mutated
        b.removed = set(self.removed)
        return b


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

def playable(board: Board, s: Slot) -> bool:
    """A slot is playable iff nothing lies on it and a left or right side is free."""
    if s not in board.layout.geometry.index:
        raise ValueError("unknown slot %r" % (s,))
    if s in board.removed:
        raise ValueError("slot %r is already removed" % (s,))
    geom = board.layout.geometry
    i = geom.index[s]
    removed = board.removed
    slots = geom.slots
    if any(slots[j] not in removed for j in geom.above[i]):
        return False
    left_free = all(slots[j] in removed for j in geom.lefts[i])
    right_free = all(slots[j] in removed for j in geom.rights[i])
    return left_free or right_free


def legal_moves(board: Board) -> List[Move]:
    """All unordered playable same-group pairs, lexicographic by (group, slots)."""
    by_group: Dict[int, List[Slot]] = {}
    for s in board.layout.slots:
        if s not in board.removed and playable(board, s):
            by_group.setdefault(board.assignment[s], []).append(s)
    moves: List[Move] = []
    for g in sorted(by_group):
        tiles = sorted(by_group[g])
        for i, a in enumerate(tiles):
            for b in tiles[i + 1:]:
                moves.append(Move(a, b))
    return moves


def apply_move(board: Board, m: Move) -> Board:
    a, b = m
    if a == b or board.assignment.get(a) != board.assignment.get(b):
        raise IllegalMoveError("move %r does not pair two tiles of one group" % (m,))
    if not (playable(board, a) and playable(board, b)):
        raise IllegalMoveError("move %r is not playable" % (m,))
    board.removed.add(a)
    board.removed.add(b)
    return board


def undo_move(board: Board, m: Move) -> Board:
    a, b = m
    if a not in board.removed or b not in board.removed:
        raise IllegalMoveError("cannot undo %r: tiles not removed" % (m,))
    board.removed.discard(a)
    board.removed.discard(b)
    return board


def shuffle(layout: Layout, group_sizes: Sequence[int], seed: int) -> Board:
    """Seeded uniform deal of group tiles onto slots (SplitMix64 Fisher-Yates)."""
    if any(sz not in (2, 4) for sz in group_sizes):
        raise GroupSizeError("group sizes must be 2 or 4, got %s" % (list(group_sizes),))
    if sum(group_sizes) != len(layout.slots):
        raise GroupSizeError("group sizes sum to %d, layout has %d slots"
                             % (sum(group_sizes), len(layout.slots)))
    tiles: List[int] = []
    for g, sz in enumerate(group_sizes):
        tiles.extend([g] * sz)
    SplitMix64(seed).shuffle(tiles)
    assignment = dict(zip(layout.slots, tiles))
    return Board(layout, assignment)


# ---------------------------------------------------------------------------
# File formats
#   layout: "slot <x> <y> <z>"      board: "tile <x> <y> <z> <group-id>"
#   '#' starts a comment, blank lines ignored, integers are decimal.
# ---------------------------------------------------------------------------

def _records(text: str) -> Iterable[Tuple[int, List[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_layout(text: str) -> Layout:
    slots: Dict[Slot, int] = {}
    for lineno, parts in _records(text):
        if parts[0] != "slot" or len(parts) != 4:
            raise FormatError("expected 'slot <x> <y> <z>'", (lineno,))
        try:
            s = Slot(int(parts[1]), int(parts[2]), int(parts[3]))
        except ValueError:
            raise FormatError("non-integer coordinate", (lineno,)) from None
        if s in slots:
            raise SlotOverlapError("duplicate slot %r" % (s,), (slots[s], lineno))
        slots[s] = lineno
    return Layout(slots, _lines=slots)


def serialize_layout(layout: Layout) -> str:
    return "".join("slot %d %d %d\n" % s for s in layout.slots)


def parse_board(text: str) -> Board:
    assignment: Dict[Slot, int] = {}
    lines: Dict[Slot, int] = {}
    for lineno, parts in _records(text):
        if parts[0] == "group":  # tag comment lines without '#' are rejected
            raise FormatError("expected 'tile <x> <y> <z> <group-id>'", (lineno,))
        if parts[0] != "tile" or len(parts) != 5:
            raise FormatError("expected 'tile <x> <y> <z> <group-id>'", (lineno,))
        try:
            s = Slot(int(parts[1]), int(parts[2]), int(parts[3]))
            g = int(parts[4])
        except ValueError:
            raise FormatError("non-integer field", (lineno,)) from None
        if g < 0:
            raise GroupSizeError("negative group id", (lineno,))
        if s in assignment:
            raise SlotOverlapError("duplicate tile %r" % (s,), (lines[s], lineno))
        assignment[s] = g
        lines[s] = lineno
    layout = Layout(assignment, _lines=lines)
    return Board(layout, assignment)


def serialize_board(board: Board, tags: Optional[Dict[int, str]] = None) -> str:
    out = []
    if tags:
        for g in sorted(tags):
            out.append("# group %d tag %s\n" % (g, tags[g]))
    for s in board.layout.slots:
        out.append("tile %d %d %d %d\n" % (s.x, s.y, s.z, board.assignment[s]))
    return "".join(out)
