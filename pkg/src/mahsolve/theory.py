"""Hardness constructions and low-stack theory made executable.

Contents: strict 3-SAT DIMACS front-end, the stack-form reduction generator
and its one-level variant, blocked-cycle detection, the polynomial solver for
isolated stacks of heights one and two, the no-peek move policy, and an exact
expectimax oracle for tiny hidden-information instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .board import Board, Layout, Move, Slot
from .solver import Verdict, UNSOLVABLE


# ---------------------------------------------------------------------------
# DIMACS CNF (strict 3-SAT subset)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: Tuple[Tuple[int, ...], ...]


class DimacsError(ValueError):
    pass


def parse_dimacs(text: str) -> CnfFormula:
    header: Optional[Tuple[int, int]] = None
    tokens: List[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("malformed header %r" % line)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError("malformed header %r" % line) from None
            if header[0] < 1 or header[1] < 0:
                raise DimacsError("header needs at least one variable")
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise DimacsError("non-integer token in %r" % line) from None
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    nvars, nclauses = header
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for t in tokens:
        if t == 0:
            if not current:
                raise DimacsError("empty clause")
            if len(current) > 3:
                raise DimacsError("clause %s has more than three literals"
                                  % (current,))
            clauses.append(tuple(current))
            current = []
        else:
            if abs(t) > nvars:
                raise DimacsError("literal %d out of range (%d variables)"
                                  % (t, nvars))
            current.append(t)
    if current:
        raise DimacsError("unterminated clause %s" % (current,))
    if len(clauses) != nclauses:
        raise DimacsError("header promises %d clauses, found %d"
                          % (nclauses, len(clauses)))
    return CnfFormula(nvars, tuple(clauses))


def brute_force_satisfiable(f: CnfFormula) -> bool:
    for bits in itertools.product((False, True), repeat=f.variable_count):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in f.clauses):
            return True
    return False


# ---------------------------------------------------------------------------
# The stack reduction from 3-SAT
# ---------------------------------------------------------------------------

SAT = ("sat",)


def _padded(clause: Sequence[int]) -> List[int]:
    lits = list(clause)
    while len(lits) < 3:
        lits.append(lits[0])
    return lits


def _build_stacks(f: CnfFormula) -> List[Tuple[Tuple, Tuple, Tuple]]:
    """Stack list (top, middle, bottom) with symbolic group names."""
    def x(i): return ("x", i)
    def y(j): return ("y", j)
    def v(i): return ("v", i)
    def t(i, k): return ("t", i, k)
    def fg(i, k): return ("f", i, k)
    def c(j): return ("c", j)

    stacks: List[Tuple[Tuple, Tuple, Tuple]] = [
        (x(1), x(1), x(2)), (x(2), x(1), x(1)), (x(2), x(2), SAT),
        (SAT, y(1), y(1)), (y(1), y(2), y(2)), (y(1), y(3), y(3)),
        (y(2), y(2), SAT), (y(3), y(3), SAT),
    ]

    def drop(stack) -> None:
        stacks.remove(stack)

    x_max, y_max = 2, 3
    t_max: Dict[int, int] = {}
    f_max: Dict[int, int] = {}

    for i in range(1, f.variable_count + 1):
        m, n = x_max, y_max
        drop((x(m), x(m), SAT))
        stacks += [
            (x(m), x(m), x(m + 2)),
            (v(i), x(m + 1), x(m + 1)),
            (x(m + 1), x(m + 1), x(m + 2)),
            (x(m + 2), x(m + 2), SAT),
        ]
        drop((y(n), y(n), SAT))
        stacks += [
            (y(n), y(n + 1), y(n + 1)),
            (y(n + 1), y(n + 1), v(i)),
            (y(n), y(n + 2), y(n + 2)),
            (y(n + 2), y(n + 2), SAT),
        ]
        stacks += [
            (v(i), t(i, 2), t(i, 2)),
            (t(i, 1), t(i, 1), t(i, 2)),
            (t(i, 2), t(i, 1), t(i, 1)),
            (v(i), fg(i, 2), fg(i, 2)),
            (fg(i, 1), fg(i, 1), fg(i, 2)),
            (fg(i, 2), fg(i, 1), fg(i, 1)),
        ]
        x_max, y_max = m + 2, n + 2
        t_max[i] = 2
        f_max[i] = 2

    for j, clause in enumerate(f.clauses, start=1):
        m = x_max
        drop((x(m), x(m), SAT))
        stacks += [
            (x(m), x(m), x(m + 2)),
            (c(j), x(m + 1), x(m + 1)),
            (x(m + 1), x(m + 1), x(m + 2)),
            (x(m + 2), x(m + 2), SAT),
        ]
        x_max = m + 2
        for lit in _padded(clause):
            i = abs(lit)
            if lit > 0:
                k = t_max[i]
                drop((v(i), t(i, k), t(i, k)))
                stacks += [
                    (v(i), t(i, k + 2), t(i, k + 2)),
                    (t(i, k + 2), t(i, k), t(i, k)),
                    (t(i, k + 2), t(i, k + 1), t(i, k + 1)),
                    (t(i, k + 1), t(i, k + 1), c(j)),
                ]
                t_max[i] = k + 2
            else:
                k = f_max[i]
                drop((v(i), fg(i, k), fg(i, k)))
                stacks += [
                    (v(i), fg(i, k + 2), fg(i, k + 2)),
                    (fg(i, k + 2), fg(i, k), fg(i, k)),
                    (fg(i, k + 2), fg(i, k + 1), fg(i, k + 1)),
                    (fg(i, k + 1), fg(i, k + 1), c(j)),
                ]
                f_max[i] = k + 2
    return stacks


def _tag_text(name: Tuple) -> str:
    kind = name[0]
    if kind == "sat":
        return "Sat"
    if kind == "x":
        return "X(%d)" % name[1]
    if kind == "y":
        return "Y(%d)" % name[1]
    if kind == "v":
        return "Var(%d)" % name[1]
    if kind == "t":
        return "T(%d,%d)" % (name[1], name[2])
    if kind == "f":
        return "F(%d,%d)" % (name[1], name[2])
    if kind == "c":
        return "Clause(%d)" % name[1]
    if kind == "row":
        return "Blocker(%d)" % name[1]
    raise ValueError(name)


def _dense_ids(names: Iterable[Tuple]) -> Dict[Tuple, int]:
    ids: Dict[Tuple, int] = {}
    for name in names:
        if name not in ids:
            ids[name] = len(ids)
    return ids


def reduce_3sat(f: CnfFormula) -> Tuple[Board, Dict[int, str]]:
    """Board of isolated height-3 stacks, solvable iff f is satisfiable.

    Stack n sits at (4n, 0) with levels 2 (top), 1, 0.  Returns the board and
    a group-id -> role tag map.
    """
    stacks = _build_stacks(f)
    ids = _dense_ids(name for stack in stacks for name in stack)
    assignment: Dict[Slot, int] = {}
    for n, (top, mid, bot) in enumerate(stacks):
        assignment[Slot(4 * n, 0, 2)] = ids[top]
        assignment[Slot(4 * n, 0, 1)] = ids[mid]
        assignment[Slot(4 * n, 0, 0)] = ids[bot]
    board = Board(Layout(assignment), assignment)
    tags = {gid: _tag_text(name) for name, gid in ids.items()}
    return board, tags


def one_level(f: CnfFormula) -> Tuple[Board, Dict[int, str]]:
    """Flat variant: each stack becomes a ground row (top, mid, bot, blocker)
    read left to right; four consecutive rows share one blocker group."""
    stacks = _build_stacks(f)
    if len(stacks) % 4 != 0:
        raise AssertionError("stack count %d not divisible by 4" % len(stacks))
    rows = [(top, mid, bot, ("row", n // 4))
            for n, (top, mid, bot) in enumerate(stacks)]
    ids = _dense_ids(name for row in rows for name in row)
    assignment: Dict[Slot, int] = {}
    for r, row in enumerate(rows):
        for c, name in enumerate(row):
            assignment[Slot(2 * c, 4 * r, 0)] = ids[name]
    board = Board(Layout(assignment), assignment)
    tags = {gid: _tag_text(name) for name, gid in ids.items()}
    return board, tags


# ---------------------------------------------------------------------------
# Blocked cycles and the polynomial low-stack solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockedCycle:
    groups: Tuple[int, ...]
    # witness stacks in cycle order: (top slot of p_i, slot below it)
    stacks: Tuple[Tuple[Slot, Slot], ...]


class LowLayoutError(ValueError):
    pass


def _check_low_layout(board: Board) -> Dict[Slot, Slot]:
    """Validate isolated stacks of heights <= 2; returns top -> bottom map."""
    geom = board.layout.geometry
    tops: Dict[Slot, Slot] = {}
    for i, s in enumerate(geom.slots):
        if s.z > 1:
            raise LowLayoutError("slot %r above level 1" % (s,))
        if geom.lefts[i] or geom.rights[i]:
            raise LowLayoutError("slot %r touches a neighbor; stacks must be "
                                 "isolated" % (s,))
        if s.z == 1:
            if len(geom.below[i]) != 1:
                raise LowLayoutError("slot %r does not sit on exactly one "
                                     "slot" % (s,))
            tops[s] = geom.slots[geom.below[i][0]]
        elif len(geom.above[i]) > 1:
            raise LowLayoutError("slot %r carries more than one slot" % (s,))
    return tops


def detect_blocked_cycle(board: Board) -> Optional[BlockedCycle]:
    """Find a cyclic chain of size-two groups stacked on one another."""
    tops = _check_low_layout(board)
    present: Dict[int, List[Slot]] = {}
    for s, g in board.assignment.items():
        if s not in board.removed:
            present.setdefault(g, []).append(s)
    for g, tiles in present.items():
        if len(tiles) not in (2, 4):
            raise LowLayoutError("group %d has %d tiles present" % (g, len(tiles)))

    # qualifying group: size two, one tile the top of a live height-2 stack,
    # the other buried under a live tile
    succ: Dict[int, Tuple[int, Slot, Slot]] = {}
    covered = {bot for top, bot in tops.items() if top not in board.removed}
    for g, tiles in present.items():
        if len(tiles) != 2:
            continue
        top_tiles = [s for s in tiles
                     if s in tops and tops[s] not in board.removed]
        buried = [s for s in tiles if s in covered]
        if len(top_tiles) == 1 and len(buried) == 1 and top_tiles[0] != buried[0]:
            below = tops[top_tiles[0]]
            succ[g] = (board.assignment[below], top_tiles[0], below)

    seen: Set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        chain: List[int] = []
        pos: Dict[int, int] = {}
        g = start
        while g in succ and g not in pos:
            if g in seen:
                break
            pos[g] = len(chain)
            chain.append(g)
            g = succ[g][0]
        if g in pos:
            cycle = chain[pos[g]:]
            return BlockedCycle(tuple(cycle),
                                tuple((succ[p][1], succ[p][2]) for p in cycle))
        seen.update(chain)
    return None


def solve_low_peek(board: Board) -> Verdict:
    """Polynomial solver for isolated stacks of heights one and two: winnable
    iff no blocked cycle; play matches that never introduce one."""
    _check_low_layout(board)
    if detect_blocked_cycle(board) is not None:
        return UNSOLVABLE
    from .board import legal_moves, apply_move, undo_move
    b = board.copy()
    moves: List[Move] = []
    while len(b.removed) < len(b.layout.slots):
        legal = legal_moves(b)
        if not legal:
            raise AssertionError("cycle-free low board ran out of matches")
        g = b.assignment[legal[0].a]
        played = False
        for m in legal:
            if b.assignment[m.a] != g:
                break
            apply_move(b, m)
            if detect_blocked_cycle(b) is None:
                moves.append(m)
                played = True
                break
            undo_move(b, m)
        if not played:
            raise AssertionError("no safe match in group %d" % g)
    return Verdict(True, tuple(moves))


# ---------------------------------------------------------------------------
# No-peek play on low layouts
# ---------------------------------------------------------------------------

class Stuck(Exception):
    """No group has a match."""


def visible_labels(board: Board) -> Dict[Slot, Optional[int]]:
    """Group labels as a non-peeking player sees them: tiles completely below
    a live tile read as None."""
    _check_low_layout(board)
    geom = board.layout.geometry
    labels: Dict[Slot, Optional[int]] = {}
    for i, s in enumerate(geom.slots):
        if s in board.removed:
            continue
        hidden = any(geom.slots[j] not in board.removed for j in geom.above[i])
        labels[s] = None if hidden else board.assignment[s]
    return labels


def no_peek_policy(board: Board) -> Move:
    """Deterministic realization of the optimal no-peek strategy: lowest
    group id with a match, then the match with the most tiles off the
    ground, ties broken lexicographically."""
    from .board import playable
    labels = visible_labels(board)
    by_group: Dict[int, List[Slot]] = {}
    for s, g in labels.items():
        if g is not None and playable(board, s):
            by_group.setdefault(g, []).append(s)
    for g in sorted(by_group):
        tiles = sorted(by_group[g])
        if len(tiles) < 2:
            continue
        best: Optional[Tuple[int, Move]] = None
        for a, b in itertools.combinations(tiles, 2):
            off_ground = (a.z > 0) + (b.z > 0)
            cand = (-off_ground, Move(a, b))
            if best is None or cand < best:
                best = cand
        return best[1]
    raise Stuck("no group has a match")


# ---------------------------------------------------------------------------
# Exact expectimax for tiny hidden-information instances
# ---------------------------------------------------------------------------

class ExpectimaxSizeError(ValueError):
    pass


def _multiset_permutations(items: Sequence[int]) -> Iterable[Tuple[int, ...]]:
    counts = sorted(set(items))
    remaining = {v: items.count(v) for v in counts}
    n = len(items)
    out: List[int] = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for v in counts:
            if remaining[v]:
                remaining[v] -= 1
                out.append(v)
                yield from rec()
                out.pop()
                remaining[v] += 1

    yield from rec()


def expectimax_no_peek(layout: Layout, group_sizes: Sequence[int],
                       policy=None) -> Fraction:
    """Exact win probability over uniformly random deals with hidden bottoms.

    With policy=None the value of optimal play; otherwise the value of the
    given policy (a callable Board -> Move raising Stuck when out of moves).
    """
    if len(group_sizes) > 3 or sum(group_sizes) > 12:
        raise ExpectimaxSizeError("instance too large for exact evaluation")
    if sum(group_sizes) != len(layout.slots):
        raise ValueError("group sizes do not cover the layout")
    slots = list(layout.slots)
    geom = layout.geometry
    _check_low_layout(Board(layout, {s: g
                                     for s, g in zip(slots, _tiles(group_sizes))}))
    tiles = _tiles(group_sizes)
    deals = list(_multiset_permutations(tiles))

    def board_for(deal: Tuple[int, ...], removed: FrozenSet[Slot]) -> Board:
        b = Board.__new__(Board)
        b.layout = layout
        b.assignment = {s: g for s, g in zip(slots, deal)}
        b.removed = set(removed)
        return b

    def visible_key(deal: Tuple[int, ...], removed: FrozenSet[Slot]) -> Tuple:
        vb = visible_labels(board_for(deal, removed))
        return tuple(sorted((s, g) for s, g in vb.items() if g is not None))

    from .board import legal_moves as _legal_moves, apply_move as _apply

    memo: Dict[Tuple, Fraction] = {}

    def value(deal_ids: Tuple[int, ...], removed: FrozenSet[Slot]) -> Fraction:
        if len(removed) == len(slots):
            return Fraction(1)
        key = (deal_ids, removed)
        if key in memo:
            return memo[key]
        rep = board_for(deals[deal_ids[0]], removed)
        if policy is None:
            legal = _legal_moves(rep)
            # moves whose both tiles are visible == all legal moves
            options = {tuple(sorted(m)): m for m in legal}
            best = Fraction(0)
            for m in options.values():
                best = max(best, _after(deal_ids, removed, m))
            result = best
        else:
            try:
                m = policy(rep)
            except Stuck:
                result = Fraction(0)
            else:
                result = _after(deal_ids, removed, m)
        memo[key] = result
        return result

    def _after(deal_ids: Tuple[int, ...], removed: FrozenSet[Slot],
               m: Move) -> Fraction:
        new_removed = removed | {m.a, m.b}
        parts: Dict[Tuple, List[int]] = {}
        for di in deal_ids:
            parts.setdefault(visible_key(deals[di], new_removed), []).append(di)
        total = Fraction(0)
        for sub in parts.values():
            total += Fraction(len(sub), len(deal_ids)) * value(tuple(sub),
                                                               new_removed)
        return total

    # the player observes the initial visible labels before the first move
    initial: Dict[Tuple, List[int]] = {}
    for di in range(len(deals)):
        initial.setdefault(visible_key(deals[di], frozenset()), []).append(di)
    total = Fraction(0)
    for sub in initial.values():
        total += Fraction(len(sub), len(deals)) * value(tuple(sub), frozenset())
    return total


def _tiles(group_sizes: Sequence[int]) -> List[int]:
    tiles: List[int] = []
    for g, sz in enumerate(group_sizes):
        if sz not in (2, 4):
            raise ValueError("group sizes must be 2 or 4")
        tiles.extend([g] * sz)
    return tiles
