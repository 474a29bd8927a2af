"""Solving engines: cleaning, group-directed search with critical-group
heuristics, a match-directed baseline, random playouts and an exhaustive
oracle, plus solution verification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .board import Board, IllegalMoveError, Move, Slot, apply_move
from .engine import (PAIRING_PATTERNS, SEARCH_BUDGETS, PlayState,
                     ScanContext, search_schedule)
from .rng import SplitMix64, derive_seed


@dataclass(frozen=True)
class Verdict:
    solvable: bool
    solution: Optional[Tuple[Move, ...]] = None

    def __bool__(self) -> bool:
        return self.solvable


UNSOLVABLE = Verdict(False)


@dataclass(frozen=True)
class RandomResult:
    status: str                 # "solvable" | "unknown"
    solution: Optional[Tuple[Move, ...]]
    attempts: int               # playouts actually run
    successes: int
    success_fraction: float


class OracleSizeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Cleaning operations (safe moves applied to fixpoint)
# ---------------------------------------------------------------------------

def _clean_state(st: PlayState, moves: List[Tuple[int, int]]) -> None:
    changed = True
    while changed:
        changed = False
        for g in range(st.group_count):
            present = [i for i in st.groups[g] if not st.removed[i]]
            if not present:
                continue
            ps = [i for i in present if st.playable(i)]
            if len(ps) == len(present):
                # whole group playable: play all remaining tiles
                ps.sort()
                for a, b in zip(ps[0::2], ps[1::2]):
                    st.remove(a)
                    st.remove(b)
                    moves.append((a, b))
                changed = True
            elif len(present) == 4 and len(ps) == 3:
                keep = None
                for i in ps:
                    if st.blocks_nothing(i):
                        keep = i
                        break
                if keep is not None:
                    a, b = sorted(i for i in ps if i != keep)
                    st.remove(a)
                    st.remove(b)
                    moves.append((a, b))
                    changed = True


def clean(board: Board) -> List[Move]:
    """Apply both cleaning operations to fixpoint, mutating the board.

    Returns the moves played, legal in sequence.  Cleaning never reduces
    solvability.
    """
    st = PlayState(board)
    raw: List[Tuple[int, int]] = []
    _clean_state(st, raw)
    moves = [Move(st.slots[a], st.slots[b]) for a, b in raw]
    for m in moves:
        board.removed.add(m.a)
        board.removed.add(m.b)
    return moves


# ---------------------------------------------------------------------------
# Group-directed search (adaptive and min-pairings heuristics)
# ---------------------------------------------------------------------------

def _cycle(order: Tuple[Slot, ...]) -> Tuple[Slot, ...]:
    """Cycle tile positions two, three and four forward; three applications
    rotate every pairing through the first-tried spot."""
    a, b, c, d = order
    return (a, c, d, b)


def _partition(order: Sequence[Slot], k: int) -> FrozenSet[FrozenSet[Slot]]:
    p = PAIRING_PATTERNS[k - 1]
    return frozenset((frozenset((order[p[0]], order[p[1]])),
                      frozenset((order[p[2]], order[p[3]]))))


def _solution_from_trace(ctx: ScanContext, trace) -> Tuple[Move, ...]:
    moves = []
    for _, slots in trace:
        if len(slots) != 2:
            raise AssertionError("fully assigned scan produced a lone removal")
        moves.append(Move(ctx.slots[slots[0]], ctx.slots[slots[1]]))
    return tuple(moves)


# scan budget for the most-constrained-first probe attempt; feasibility
# mask scans count against it, so the probe stays a bounded detour
MINP_PROBE_BUDGET = 60_000


def solve_group_directed(board: Board, heuristic: str = "adaptive",
                         search_trace: Optional[List] = None) -> Verdict:
    """Complete search over per-group pairing choices, scan-pruned.

    heuristic: "adaptive" grows the path until the scan prunes, then trims
    non-essential freshly added groups; "min_pairings" branches on the group
    with the fewest feasible pairings.
    """
    if heuristic not in ("adaptive", "min_pairings"):
        raise ValueError("unknown heuristic %r" % (heuristic,))
    ctx = ScanContext(board)
    size4 = [g for g, members in enumerate(ctx.present_groups)
             if len(members) == 4]
    total = len(size4)
    use_fast = ctx.fast

    def note(event) -> None:
        if search_trace is not None:
            search_trace.append(event)

    def attempt(order4: List[int], budget: Optional[int],
                dom: Optional[Dict[int, int]] = None,
                minp: bool = False) -> Optional[Verdict]:
        """One bounded search attempt; None means the budget ran out."""
        orders: Dict[int, Tuple[Slot, ...]] = {g: ctx.slot_order(g)
                                               for g in size4}
        trims: Dict[int, int] = {g: 0 for g in size4}

        def next_allowed(g: int, k: int) -> int:
            # next pairing after k whose partition survives propagation;
            # trim-cycling rotates which partition each pairing denotes
            mask = 0b1110 if dom is None else dom[g]
            t = trims[g] % 3
            for kk in range(k + 1, 4):
                if mask & (1 << (((kk - 1 + t) % 3) + 1)):
                    return kk
            return 0
        path: List[List[int]] = []          # [group, pairing]
        on_path: Set[int] = set()
        cursor = 0
        nscans = 0

        def assignment() -> Dict[int, int]:
            return {g: k for g, k in path}

        def scan_clears() -> bool:
            nonlocal nscans
            nscans += 1
            if use_fast:
                return ctx.fast_scan()
            return ctx.run(assignment(), orders).cleared

        def path_assign(g: int, k: int) -> None:
            if use_fast:
                ctx.fast_assign(g, k, orders[g])

        def path_unassign(g: int) -> None:
            if use_fast:
                ctx.fast_unassign(g)

        def abandon() -> None:
            for g, _k in path:
                path_unassign(g)

        def feas_mask(asg: Dict[int, int], g: int) -> int:
            nonlocal nscans
            m = 0
            for k in (1, 2, 3):
                nscans += 1
                if use_fast:
                    ctx.fast_assign(g, k, orders[g])
                    ok = ctx.fast_scan()
                    ctx.fast_unassign(g)
                else:
                    asg[g] = k
                    ok = ctx.run(asg, orders).cleared
                    del asg[g]
                if ok:
                    m |= 1 << (k - 1)
            return m

        def choose_next() -> int:
            free = [g for g in order4 if g not in on_path]
            if not minp:
                # next free group in cyclic order after the last push
                nonlocal cursor
                n4 = len(order4)
                for qq in range(n4):
                    q = (cursor + qq) % n4
                    if order4[q] not in on_path:
                        cursor = (q + 1) % n4
                        return order4[q]
            asg = assignment()
            masks = {g: feas_mask(asg, g) for g in free}
            dead = [g for g in free if masks[g] == 0]
            if dead:
                return dead[0]
            if any(bin(masks[g]).count("1") < 3 for g in free):
                return min(free, key=lambda g: (bin(masks[g]).count("1"), g))
            flags = ctx.run(asg, orders, want_sim_flags=True).sim_flags or {}
            blocked = [g for g in free if not flags.get(g, True)]
            if blocked:
                return blocked[0]
            return free[0]

        while True:
            if budget is not None and nscans >= budget:
                abandon()
                return None
            if scan_clears():
                if len(path) == total:
                    final = ctx.run(assignment(), orders, record=True)
                    abandon()
                    return Verdict(True, _solution_from_trace(ctx, final.trace))
                start = len(path)
                while True:
                    g = choose_next()
                    k1 = next_allowed(g, 0)
                    path.append([g, k1])
                    on_path.add(g)
                    path_assign(g, k1)
                    note(("push", g, k1, _partition(orders[g], k1)))
                    if not scan_clears():
                        break
                    if len(path) == total:
                        final = ctx.run(assignment(), orders, record=True)
                        abandon()
                        return Verdict(True,
                                       _solution_from_trace(ctx, final.trace))
                # scan went effective: trim freshly added groups (backwards,
                # keeping the last one), cycling trimmed groups' tile order
                for i in range(len(path) - 2, start - 1, -1):
                    entry = path.pop(i)
                    path_unassign(entry[0])
                    if scan_clears():
                        path.insert(i, entry)
                        path_assign(entry[0], entry[1])
                    else:
                        g = entry[0]
                        on_path.discard(g)
                        trims[g] += 1
                        orders[g] = _cycle(orders[g])
                        note(("trim", g))
                k = 0
                while path:
                    k = next_allowed(path[-1][0], path[-1][1])
                    if k:
                        break
                    g = path.pop()[0]
                    on_path.discard(g)
                    path_unassign(g)
                    note(("pop", g))
                if not path:
                    abandon()
                    return UNSOLVABLE
                path[-1][1] = k
                g = path[-1][0]
                path_assign(g, k)
                note(("advance", g, k, _partition(orders[g], k)))
            else:
                k = 0
                while path:
                    k = next_allowed(path[-1][0], path[-1][1])
                    if k:
                        break
                    g = path.pop()[0]
                    on_path.discard(g)
                    path_unassign(g)
                    note(("pop", g))
                if not path:
                    abandon()
                    return UNSOLVABLE
                path[-1][1] = k
                g = path[-1][0]
                path_assign(g, k)
                note(("advance", g, k, _partition(orders[g], k)))

    if heuristic == "min_pairings":
        verdict = attempt(list(size4), None, minp=True)
        assert verdict is not None
        return verdict

    kernel = use_fast and search_trace is None
    dom_masks: Optional[Dict[int, int]] = None
    for attempt_no, (order4, budget) in enumerate(search_schedule(size4)):
        if attempt_no == 1:
            domains = ctx.propagate_domains()
            if domains is None:
                note(("refuted-by-propagation",))
                return UNSOLVABLE
            dom_masks = {g: sum(1 << k for k in ks)
                         for g, ks in domains.items()}
            # budgeted most-constrained-first probe: cheap on the rare
            # deals whose refutation tree is small under that ordering
            note(("attempt", list(size4)))
            verdict = attempt(list(size4), MINP_PROBE_BUDGET, dom_masks,
                              minp=True)
            if verdict is not None:
                return verdict
        if attempt_no == len(SEARCH_BUDGETS):
            # last stand before the unbounded attempt: a larger probe only
            # the rare monster deals ever reach
            note(("attempt", list(size4)))
            verdict = attempt(list(size4), 10 * MINP_PROBE_BUDGET, dom_masks,
                              minp=True)
            if verdict is not None:
                return verdict
        note(("attempt", list(order4)))
        if kernel:
            status, asg, final_orders, _ = ctx.fast_search_attempt(
                order4, budget, dom_masks)
            if status == 1:
                final = ctx.run(asg, final_orders, record=True)
                if not final.cleared:
                    raise AssertionError("kernel search leaf failed to replay")
                return Verdict(True, _solution_from_trace(ctx, final.trace))
            if status == 0:
                return UNSOLVABLE
        else:
            verdict = attempt(order4, budget, dom_masks)
            if verdict is not None:
                return verdict
    raise AssertionError("unbounded search attempt returned no verdict")


# ---------------------------------------------------------------------------
# Match-directed baseline
# ---------------------------------------------------------------------------

def _group_pairings(members: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...]:
    a, b, c, d = members
    return (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c)))


def solve_match_directed(board: Board) -> Verdict:
    """Recursive match selection with group-order canonicalization and
    forbidden-pairing bookkeeping, plus guarded cleaning at each node."""
    st = PlayState(board)
    full_groups = st.groups  # original members per group, sorted indices
    pairings = [_group_pairings(m) if len(m) == 4 else ((tuple(m),),)
                for m in full_groups]

    def fixed_pid(g: int, present: List[int]) -> int:
        # group reduced to two: its pairing was fixed by the removed pair
        if len(full_groups[g]) == 2:
            return 0
        pres = set(present)
        for pid, pairing in enumerate(pairings[g]):
            for pair in pairing:
                if set(pair) == pres:
                    return pid
        raise AssertionError("remaining tiles do not match any pairing")

    def group_matches(g: int, present: List[int],
                      forbidden: FrozenSet[Tuple[int, int]]):
        """Allowed currently-playable pairings: list of (pid, (a, b))."""
        out = []
        if len(present) == 4:
            for pid, pairing in enumerate(pairings[g]):
                if (g, pid) in forbidden:
                    continue
                best = None
                for pair in pairing:
                    if st.playable(pair[0]) and st.playable(pair[1]):
                        if best is None or pair < best:
                            best = pair
                if best is not None:
                    out.append((pid, best))
        elif len(present) == 2:
            pid = fixed_pid(g, present)
            if (g, pid) not in forbidden:
                if st.playable(present[0]) and st.playable(present[1]):
                    out.append((pid, (present[0], present[1])))
        return out

    memo: Set[Tuple[int, FrozenSet[Tuple[int, int]]]] = set()

    def clean_here(forbidden: FrozenSet[Tuple[int, int]]) -> Optional[List[Tuple[int, int]]]:
        """Safe moves honoring forbidden pairings; None if a half-played
        group's remaining pair is forbidden (dead branch)."""
        played: List[Tuple[int, int]] = []
        changed = True
        while changed:
            changed = False
            for g in range(st.group_count):
                present = [i for i in full_groups[g] if not st.removed[i]]
                if not present:
                    continue
                if len(present) == 2:
                    pid = fixed_pid(g, present)
                    if (g, pid) in forbidden:
                        for a, b in reversed(played):
                            st.restore(b)
                            st.restore(a)
                        return None
                ps = [i for i in present if st.playable(i)]
                if len(ps) == len(present):
                    if len(present) == 2:
                        a, b = present
                        st.remove(a)
                        st.remove(b)
                        played.append((a, b))
                        changed = True
                    else:
                        pid = next((p for p in range(3)
                                    if (g, p) not in forbidden), None)
                        if pid is not None:
                            for a, b in pairings[g][pid]:
                                st.remove(a)
                                st.remove(b)
                                played.append((a, b))
                            changed = True
                elif len(present) == 4 and len(ps) == 3:
                    keep = next((i for i in ps if st.blocks_nothing(i)), None)
                    if keep is not None:
                        a, b = sorted(i for i in ps if i != keep)
                        pres = set(present) - {a, b}
                        pid = next(p for p, pairing in enumerate(pairings[g])
                                   if set(pairing[0]) == {a, b}
                                   or set(pairing[1]) == {a, b})
                        if (g, pid) not in forbidden:
                            st.remove(a)
                            st.remove(b)
                            played.append((a, b))
                            changed = True
        return played

    def rec(forbidden: FrozenSet[Tuple[int, int]]) -> Optional[List[Tuple[int, int]]]:
        cleaned = clean_here(forbidden)
        if cleaned is None:
            return None
        if st.present_count == 0:
            return list(cleaned)
        key = (st.mask, forbidden)
        if key in memo:
            for a, b in reversed(cleaned):
                st.restore(b)
                st.restore(a)
            return None
        present_by_g = [[i for i in full_groups[g] if not st.removed[i]]
                        for g in range(st.group_count)]
        matches_by_g = [group_matches(g, present_by_g[g], forbidden)
                        for g in range(st.group_count)]
        for g in range(st.group_count):
            if not matches_by_g[g]:
                continue
            to_forbid: List[Tuple[int, int]] = []
            invalid = False
            for h in range(g):
                hm = matches_by_g[h]
                if len(hm) > 1:
                    invalid = True
                    break
                if len(hm) == 1:
                    to_forbid.append((h, hm[0][0]))
            if invalid:
                continue
            child_forbidden = forbidden | frozenset(to_forbid)
            for pid, (a, b) in matches_by_g[g]:
                st.remove(a)
                st.remove(b)
                rest = rec(child_forbidden)
                if rest is not None:
                    return list(cleaned) + [(a, b)] + rest
                st.restore(b)
                st.restore(a)
        memo.add(key)
        for a, b in reversed(cleaned):
            st.restore(b)
            st.restore(a)
        return None

    result = rec(frozenset())
    if result is None:
        return UNSOLVABLE
    return Verdict(True, tuple(Move(st.slots[a], st.slots[b])
                               for a, b in result))


# ---------------------------------------------------------------------------
# Random solver
# ---------------------------------------------------------------------------

def default_attempts(board: Board) -> int:
    g4 = sum(1 for members in PlayState(board).present_by_group()
             if len(members) == 4)
    return int(math.floor(1.2 ** g4))


def random_solve(board: Board, attempts: Optional[int] = None, seed: int = 0,
                 measure: bool = False) -> RandomResult:
    """Random playouts with cleaning, behind a top-level pruning scan.

    With measure=True all attempts run even after a success, so the success
    fraction is a usable difficulty measure.
    """
    if attempts is None:
        attempts = default_attempts(board)
    if attempts < 0:
        raise ValueError("attempts must be >= 0")
    ctx = ScanContext(board)
    if not ctx.run().cleared:
        return RandomResult("unknown", None, 0, 0, 0.0)
    base = PlayState(board)
    snap = base.snapshot()
    successes = 0
    solution: Optional[Tuple[Move, ...]] = None
    ran = 0
    for attempt in range(attempts):
        ran += 1
        rng = SplitMix64(derive_seed(seed, attempt))
        base.load(snap)
        seq: List[Tuple[int, int]] = []
        while True:
            _clean_state(base, seq)
            if base.present_count == 0:
                successes += 1
                if solution is None:
                    solution = tuple(Move(base.slots[a], base.slots[b])
                                     for a, b in seq)
                break
            moves = base.legal_move_pairs()
            if not moves:
                break
            a, b = moves[rng.below(len(moves))]
            base.remove(a)
            base.remove(b)
            seq.append((a, b))
        if solution is not None and not measure:
            break
    if solution is not None:
        return RandomResult("solvable", solution, ran, successes,
                            successes / ran if ran else 0.0)
    return RandomResult("unknown", None, ran, 0, 0.0)


# ---------------------------------------------------------------------------
# Exhaustive oracle
# ---------------------------------------------------------------------------

def oracle_solve(board: Board, max_groups: int = 8) -> Verdict:
    """Plain exhaustive DFS over legal matches, memoized on the removed set.

    Deliberately independent of the scan machinery; guarded by a group bound.
    """
    if board.group_count > max_groups:
        raise OracleSizeError("board has %d groups, oracle bound is %d"
                              % (board.group_count, max_groups))
    st = PlayState(board)
    failed: Set[int] = set()

    def dfs() -> Optional[List[Tuple[int, int]]]:
        if st.present_count == 0:
            return []
        if st.mask in failed:
            return None
        for a, b in st.legal_move_pairs():
            st.remove(a)
            st.remove(b)
            rest = dfs()
            if rest is not None:
                rest.insert(0, (a, b))
                return rest
            st.restore(b)
            st.restore(a)
        failed.add(st.mask)
        return None

    result = dfs()
    if result is None:
        return UNSOLVABLE
    return Verdict(True, tuple(Move(st.slots[a], st.slots[b])
                               for a, b in result))


def verify_solution(board: Board, solution: Sequence[Move]) -> bool:
    b = board.copy()
    try:
        for m in solution:
            apply_move(b, m)
    except (IllegalMoveError, ValueError):
        return False
    return len(b.removed) == len(b.layout.slots)
