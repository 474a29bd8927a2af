import itertools
import random
from fractions import Fraction

import pytest

from mahsolve.board import Board, Layout, Move, Slot, playable
from mahsolve.solver import oracle_solve, solve_group_directed, verify_solution
from mahsolve.theory import (
    BlockedCycle, CnfFormula, DimacsError, ExpectimaxSizeError,
    LowLayoutError, Stuck, brute_force_satisfiable, detect_blocked_cycle,
    expectimax_no_peek, no_peek_policy, one_level, parse_dimacs, reduce_3sat,
    solve_low_peek, visible_labels,
)


# ---------------------------------------------------------------------------
# DIMACS parsing
# ---------------------------------------------------------------------------

def test_parse_dimacs_basic():
    f = parse_dimacs("c comment\np cnf 1 1\n1 0\n")
    assert f == CnfFormula(1, ((1,),))
    f2 = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0\n")
    assert f2.clauses == ((1, -2), (-1, 2))


def test_parse_dimacs_errors():
    for text in (
        "p cnf 4 1\n1 2 3 4 0\n",        # clause too wide
        "1 0\n",                          # clause before header
        "p cnf 1 1\np cnf 1 1\n1 0\n",    # duplicate header
        "p cnf 1 2\n1 0\n",               # clause count mismatch
        "p cnf 1 1\n2 0\n",               # literal out of range
        "p cnf 1 1\n0\n",                 # empty clause
        "p cnf 1 1\n1\n",                 # unterminated clause
        "p cnf 1 1\nx 0\n",               # non-integer token
        "",                               # missing header
        "p dnf 1 1\n1 0\n",               # malformed header
    ):
        with pytest.raises(DimacsError):
            parse_dimacs(text)


def test_brute_force_satisfiable():
    assert brute_force_satisfiable(CnfFormula(1, ((1,),)))
    assert not brute_force_satisfiable(CnfFormula(1, ((1,), (-1,))))


# ---------------------------------------------------------------------------
# The stack reduction
# ---------------------------------------------------------------------------

def _stacks_of(board):
    """Recover (top, mid, bot) group triples from a generated board."""
    xs = sorted({s.x for s in board.layout.slots})
    out = []
    for x in xs:
        col = {s.z: board.assignment[s]
               for s in board.layout.slots if s.x == x}
        assert sorted(col) == [0, 1, 2]
        out.append((col[2], col[1], col[0]))
    return out


@pytest.mark.parametrize("text,v,c", [
    ("p cnf 1 1\n1 0\n", 1, 1),
    ("p cnf 1 2\n1 0\n-1 0\n", 1, 2),
    ("p cnf 2 2\n1 -2 0\n-1 2 0\n", 2, 2),
])
def test_reduction_shape_audit(text, v, c):
    f = parse_dimacs(text)
    board, tags = reduce_3sat(f)
    stacks = _stacks_of(board)
    assert len(stacks) == 8 + 12 * v + 12 * c
    groups = set(board.assignment.values())
    assert len(groups) == 6 + 9 * v + 9 * c
    # aab / abb forms only
    for top, mid, bot in stacks:
        assert (top == mid) != (mid == bot)
    # exactly one Sat group, with exactly four tiles
    sat = [g for g, t in tags.items() if t == "Sat"]
    assert len(sat) == 1
    assert sum(1 for g in board.assignment.values() if g == sat[0]) == 4
    # every group carries exactly one tag and has 4 tiles
    assert set(tags) == groups
    for g in groups:
        assert sum(1 for h in board.assignment.values() if h == g) == 4


@pytest.mark.parametrize("text,sat", [
    ("p cnf 1 1\n1 0\n", True),
    ("p cnf 1 2\n1 0\n-1 0\n", False),
    ("p cnf 2 2\n1 -2 0\n-1 2 0\n", True),
    ("p cnf 2 2\n1 2 0\n-1 -2 0\n", True),
])
def test_reduction_equivalence_samples(text, sat):
    f = parse_dimacs(text)
    assert brute_force_satisfiable(f) == sat
    board, _ = reduce_3sat(f)
    v = solve_group_directed(board)
    assert v.solvable == sat
    if v.solvable:
        assert verify_solution(board, v.solution)


def test_one_level_geometry():
    f = parse_dimacs("p cnf 1 1\n1 0\n")
    stacks, _ = reduce_3sat(f)
    board, tags = one_level(f)
    assert all(s.z == 0 for s in board.layout.slots)
    assert len(board.layout.slots) == 4 * (len(stacks.layout.slots) // 3)
    # rows of four: left end playable, interior tiles not
    ys = sorted({s.y for s in board.layout.slots})
    for y in ys:
        row = sorted(s for s in board.layout.slots if s.y == y)
        assert len(row) == 4
        assert playable(board, row[0]) and playable(board, row[3])
        assert not playable(board, row[1]) and not playable(board, row[2])
    assert sum(1 for t in tags.values() if t.startswith("Blocker")) \
        == len(stacks.layout.slots) // 3 // 4


def test_one_level_solvable_sample():
    f = parse_dimacs("p cnf 1 1\n1 0\n")
    board, _ = one_level(f)
    v = solve_group_directed(board)
    assert v.solvable
    assert verify_solution(board, v.solution)


# ---------------------------------------------------------------------------
# Blocked cycles and the low-stack solver
# ---------------------------------------------------------------------------

def stacks_board(columns):
    """columns: list of group-id tuples bottom->top, one isolated stack each."""
    assignment = {}
    for n, col in enumerate(columns):
        for z, g in enumerate(col):
            assignment[Slot(4 * n, 0, z)] = g
    return Board(Layout(assignment), assignment)


def test_cycle_k1_single_stack():
    b = stacks_board([(0, 0), (1,), (1,)])
    cyc = detect_blocked_cycle(b)
    assert isinstance(cyc, BlockedCycle)
    assert cyc.groups == (0,)
    assert not solve_low_peek(b).solvable


def test_cycle_k2_crossed_stacks():
    b = stacks_board([(1, 0), (0, 1)])
    cyc = detect_blocked_cycle(b)
    assert cyc is not None and set(cyc.groups) == {0, 1}
    assert not solve_low_peek(b).solvable


def test_ground_tile_breaks_cycles():
    # every size-2 group keeps a ground tile: no group qualifies
    b = stacks_board([(0, 1), (0,), (1,)])
    assert detect_blocked_cycle(b) is None
    v = solve_low_peek(b)
    assert v.solvable and verify_solution(b, v.solution)


def test_low_layout_preconditions():
    tall = stacks_board([(0, 0, 1, 1)])
    with pytest.raises(LowLayoutError):
        detect_blocked_cycle(tall)
    lay = Layout([Slot(0, 0, 0), Slot(2, 0, 0), Slot(8, 0, 0), Slot(10, 0, 0)])
    touching = Board(lay, {s: 0 for s in lay.slots})
    with pytest.raises(LowLayoutError):
        detect_blocked_cycle(touching)


def test_flat_boards_always_solvable():
    rnd = random.Random(5)
    for _ in range(20):
        k = rnd.choice([2, 4, 6])
        groups = [g for g in range(k // 2) for _ in (0, 1)]
        rnd.shuffle(groups)
        b = stacks_board([(g,) for g in groups])
        assert detect_blocked_cycle(b) is None
        v = solve_low_peek(b)
        assert v.solvable and verify_solution(b, v.solution)


def test_low_solver_matches_oracle_random():
    rnd = random.Random(17)
    for _ in range(60):
        n_stacks = rnd.randrange(2, 7)
        heights = [rnd.choice([1, 2]) for _ in range(n_stacks)]
        total = sum(heights)
        if total % 2:
            heights[0] = 3 - heights[0]
            total = sum(heights)
        tiles = [g for g in range(total // 2) for _ in (0, 1)]
        rnd.shuffle(tiles)
        it = iter(tiles)
        b = stacks_board([tuple(next(it) for _ in range(h)) for h in heights])
        ref = oracle_solve(b).solvable
        assert (detect_blocked_cycle(b) is None) == ref
        v = solve_low_peek(b)
        assert v.solvable == ref
        if ref:
            assert verify_solution(b, v.solution)


def test_low_solver_moves_stay_cycle_free():
    b = stacks_board([(0, 1), (1, 2), (2, 0), (3,), (3,)])
    if detect_blocked_cycle(b) is not None:
        return
    v = solve_low_peek(b)
    probe = b.copy()
    from mahsolve.board import apply_move
    for m in v.solution:
        apply_move(probe, m)
        assert detect_blocked_cycle(probe) is None


# ---------------------------------------------------------------------------
# No-peek policy and expectimax
# ---------------------------------------------------------------------------

def test_visible_labels_hide_buried_tiles():
    b = stacks_board([(0, 1), (0,), (1,)])
    labels = visible_labels(b)
    assert labels[Slot(0, 0, 0)] is None
    assert labels[Slot(0, 0, 1)] == 1
    assert labels[Slot(4, 0, 0)] == 0


def test_policy_prefers_off_ground_tiles():
    b = stacks_board([(1, 0), (1, 0), (0,), (0,)])
    m = no_peek_policy(b)
    assert m == Move(Slot(0, 0, 1), Slot(4, 0, 1))


def test_policy_single_match_and_stuck():
    b = stacks_board([(0,), (0,), (1, 1)])
    assert no_peek_policy(b) == Move(Slot(0, 0, 0), Slot(4, 0, 0))
    stuck = stacks_board([(0, 1), (1, 0)])
    with pytest.raises(Stuck):
        no_peek_policy(stuck)


def test_expectimax_flat_is_certain():
    lay = Layout([Slot(4 * i, 0, 0) for i in range(4)])
    assert expectimax_no_peek(lay, [2, 2]) == 1
    assert expectimax_no_peek(lay, [4]) == 1


def test_expectimax_two_stacks_is_one_third():
    lay = Layout([Slot(0, 0, 0), Slot(0, 0, 1), Slot(4, 0, 0), Slot(4, 0, 1)])
    assert expectimax_no_peek(lay, [2, 2]) == Fraction(1, 3)


def test_expectimax_size_guard():
    lay = Layout([Slot(4 * i, 0, 0) for i in range(16)])
    with pytest.raises(ExpectimaxSizeError):
        expectimax_no_peek(lay, [4, 4, 4, 4])


def _micro_instances():
    """Small low layouts with at least one hidden tile."""
    out = []
    for heights in itertools.product((1, 2), repeat=3):
        total = sum(heights)
        if total % 2 or 2 not in heights:
            continue
        lay = Layout([Slot(4 * n, 0, z)
                      for n, h in enumerate(heights) for z in range(h)])
        if total == 4:
            out.append((lay, [2, 2]))
            out.append((lay, [4]))
        elif total == 6:
            out.append((lay, [2, 4]))
    return out


def test_policy_is_optimal_on_micro_instances():
    for lay, sizes in _micro_instances():
        opt = expectimax_no_peek(lay, sizes)
        pol = expectimax_no_peek(lay, sizes, policy=no_peek_policy)
        assert pol == opt, (lay.slots, sizes, pol, opt)
