import pytest

from mahsolve.board import Board, Layout, Move, Slot, shuffle
from mahsolve.solver import (
    OracleSizeError, clean, default_attempts, oracle_solve, random_solve,
    solve_group_directed, solve_match_directed, verify_solution,
)
from mahsolve import layouts

from conftest import micro_suite


def test_clean_rule1_whole_group_playable():
    lay = Layout([Slot(4 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})
    moves = clean(b)
    assert len(moves) == 2
    assert b.removed == set(lay.slots)


def test_clean_rule2_nonblocking_tile_spares_its_pair():
    # group 0: buried, two mutual blockers, one isolated non-blocker
    slots = {
        Slot(0, 0, 0): 0, Slot(6, 0, 0): 0, Slot(8, 0, 0): 0, Slot(12, 0, 0): 0,
        Slot(0, 0, 1): 1, Slot(16, 0, 0): 1, Slot(18, 0, 0): 1, Slot(20, 0, 0): 1,
    }
    b = Board(Layout(slots), slots)
    moves = clean(b)
    assert moves == [Move(Slot(6, 0, 0), Slot(8, 0, 0))]


def test_clean_no_rule_applies():
    lay = Layout([Slot(2 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})   # 4-row: middles blocked
    assert clean(b) == []


def test_solve_trivial_examples():
    lay = Layout([Slot(2 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})
    v = solve_group_directed(b)
    assert v.solvable and len(v.solution) == 2
    assert verify_solution(b, v.solution)

    # size-2 group stacked on itself: top-level scan already effective
    lay2 = Layout([Slot(0, 0, 0), Slot(0, 0, 1), Slot(4, 0, 0), Slot(8, 0, 0)])
    b2 = Board(lay2, {Slot(0, 0, 0): 0, Slot(0, 0, 1): 0,
                      Slot(4, 0, 0): 1, Slot(8, 0, 0): 1})
    assert not solve_group_directed(b2).solvable
    assert not solve_match_directed(b2).solvable


def test_engine_agreement_micro():
    for lay, sizes, seed in micro_suite(120, seed=101):
        b = shuffle(lay, sizes, seed)
        ref = oracle_solve(b)
        for verdict in (solve_group_directed(b.copy()),
                        solve_group_directed(b.copy(), heuristic="min_pairings"),
                        solve_match_directed(b.copy())):
            assert verdict.solvable == ref.solvable
            if verdict.solvable:
                assert verify_solution(b, verdict.solution)


def test_bad_heuristic_name():
    lay = Layout([Slot(2 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})
    with pytest.raises(ValueError):
        solve_group_directed(b, heuristic="zigzag")


def test_search_trace_events():
    for lay, sizes, seed in micro_suite(10, seed=61):
        b = shuffle(lay, sizes, seed)
        tr = []
        solve_group_directed(b, search_trace=tr)
        for ev in tr:
            assert ev[0] in ("attempt", "push", "trim", "pop", "advance",
                             "refuted-by-propagation")
            if ev[0] in ("push", "advance"):
                assert ev[2] in (1, 2, 3)


def test_default_attempts_turtle_is_708():
    b = shuffle(layouts.turtle(), [4] * 36, seed=0)
    assert default_attempts(b) == 708


def test_random_solve_pruned_board_is_unknown_zero_playouts():
    lay = Layout([Slot(0, 0, 0), Slot(0, 0, 1), Slot(4, 0, 0), Slot(8, 0, 0)])
    b = Board(lay, {Slot(0, 0, 0): 0, Slot(0, 0, 1): 0,
                    Slot(4, 0, 0): 1, Slot(8, 0, 0): 1})
    r = random_solve(b)
    assert r.status == "unknown" and r.attempts == 0 and r.successes == 0


def test_random_solve_success_is_verified():
    b = shuffle(layouts.turtle(), [4] * 36, seed=2)
    r = random_solve(b, attempts=200, seed=9)
    if r.status == "solvable":
        assert verify_solution(b, r.solution)
        assert solve_group_directed(b.copy()).solvable


def test_random_solve_measure_runs_all_attempts():
    lay = Layout([Slot(4 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})
    r = random_solve(b, attempts=10, seed=1, measure=True)
    assert r.attempts == 10
    assert r.successes == 10          # every playout wins a free group
    assert r.success_fraction == 1.0


def test_random_solve_deterministic():
    b = shuffle(layouts.turtle(), [4] * 36, seed=3)
    a = random_solve(b, attempts=50, seed=4, measure=True)
    c = random_solve(b, attempts=50, seed=4, measure=True)
    assert (a.successes, a.solution) == (c.successes, c.solution)


def test_oracle_size_guard():
    b = shuffle(layouts.turtle(), [4] * 36, seed=0)
    with pytest.raises(OracleSizeError):
        oracle_solve(b)


def test_verify_solution_rejects_bad_sequences():
    lay = Layout([Slot(2 * i, 0, 0) for i in range(4)])
    b = Board(lay, {s: 0 for s in lay.slots})
    good = solve_group_directed(b).solution
    assert verify_solution(b, good)
    assert not verify_solution(b, good[:1])              # incomplete
    assert not verify_solution(b, tuple(reversed(good)))  # illegal order
