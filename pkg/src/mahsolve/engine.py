"""Internal index-based engine state.

Two workhorses live here:

  * PlayState -- a mutable board snapshot with O(degree) remove/restore and
    incrementally maintained playability, used by the exhaustive solver, the
    match-directed solver, cleaning and random playouts.

  * ScanContext -- a reusable context for the relaxed-rules pruning scan.
    The group-directed solver runs thousands of scans per board, so plain
    verdict scans go through a numba-compiled kernel when available; scans
    that need traces, simultaneity flags or a randomized eligibility order
    take the pure-Python path (same fixpoint, confluence-tested).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:          # pragma: no cover - numba is an optional speedup
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap

from .board import Board, Slot

# pairing k (1-based) on a tile order (t0,t1,t2,t3):
#   1: {t0,t1},{t2,t3}   2: {t0,t2},{t1,t3}   3: {t0,t3},{t1,t2}
PAIRING_PATTERNS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))

# scan budgets for successive adaptive-search attempts; the attempt after
# the last listed budget is unbounded, keeping the search complete
SEARCH_BUDGETS = (25_000, 100_000, 400_000, 1_600_000, 6_400_000)


def search_schedule(size4: Sequence[int]):
    """(group order, scan budget) per restart attempt of the adaptive search.

    Attempt 0 uses ascending group ids; exhausted attempts restart with a
    deterministic permutation, which changes the cursor's support sets and
    reliably defuses the rare deals a single order grinds on.  Deterministic
    in the board alone, so verdicts stay reproducible everywhere.
    """
    import random as _random
    yield list(size4), SEARCH_BUDGETS[0]
    for attempt, budget in enumerate(SEARCH_BUDGETS[1:], start=1):
        order = list(size4)
        _random.Random(1000 + attempt).shuffle(order)
        yield order, budget
    order = list(size4)
    _random.Random(1000 + len(SEARCH_BUDGETS)).shuffle(order)
    yield order, 1 << 62


def compile_groups(board: Board) -> Tuple[List[int], List[Tuple[int, ...]]]:
    geom = board.layout.geometry
    group_of = [board.assignment[s] for s in geom.slots]
    count = max(group_of) + 1 if group_of else 0
    groups: List[List[int]] = [[] for _ in range(count)]
    for i, g in enumerate(group_of):
        groups[g].append(i)
    return group_of, [tuple(v) for v in groups]


class PlayState:
    """Compiled mutable game state over a board snapshot."""

    def __init__(self, board: Board):
        geom = board.layout.geometry
        self.geom = geom
        self.slots = geom.slots
        self.n = geom.n
        self.group_of, self.groups = compile_groups(board)
        self.group_count = len(self.groups)
        n = self.n
        self.removed = bytearray(n)
        for s in board.removed:
            self.removed[geom.index[s]] = 1
        self.above_cnt = [0] * n
        self.below_cnt = [0] * n
        self.left_cnt = [0] * n
        self.right_cnt = [0] * n
        rm = self.removed
        for i in range(n):
            self.above_cnt[i] = sum(1 for j in geom.above[i] if not rm[j])
            self.below_cnt[i] = sum(1 for j in geom.below[i] if not rm[j])
            self.left_cnt[i] = sum(1 for j in geom.lefts[i] if not rm[j])
            self.right_cnt[i] = sum(1 for j in geom.rights[i] if not rm[j])
        self.present_count = n - sum(self.removed)
        self.mask = 0
        for i in range(n):
            if rm[i]:
                self.mask |= 1 << i

    def snapshot(self) -> Tuple:
        return (bytearray(self.removed), self.above_cnt[:], self.below_cnt[:],
                self.left_cnt[:], self.right_cnt[:], self.present_count, self.mask)

    def load(self, snap: Tuple) -> None:
        (rm, a, b, l, r, pc, mask) = snap
        self.removed = bytearray(rm)
        self.above_cnt = a[:]
        self.below_cnt = b[:]
        self.left_cnt = l[:]
        self.right_cnt = r[:]
        self.present_count = pc
        self.mask = mask

    def playable(self, i: int) -> bool:
        return (not self.removed[i] and self.above_cnt[i] == 0
                and (self.left_cnt[i] == 0 or self.right_cnt[i] == 0))

    def blocks_nothing(self, i: int) -> bool:
        return (self.below_cnt[i] == 0 and self.left_cnt[i] == 0
                and self.right_cnt[i] == 0)

    def remove(self, i: int) -> None:
        self.removed[i] = 1
        self.present_count -= 1
        self.mask |= 1 << i
        geom = self.geom
        for j in geom.below[i]:
            self.above_cnt[j] -= 1
        for j in geom.above[i]:
            self.below_cnt[j] -= 1
        for j in geom.lefts[i]:
            self.right_cnt[j] -= 1
        for j in geom.rights[i]:
            self.left_cnt[j] -= 1

    def restore(self, i: int) -> None:
        self.removed[i] = 0
        self.present_count += 1
        self.mask &= ~(1 << i)
        geom = self.geom
        for j in geom.below[i]:
            self.above_cnt[j] += 1
        for j in geom.above[i]:
            self.below_cnt[j] += 1
        for j in geom.lefts[i]:
            self.right_cnt[j] += 1
        for j in geom.rights[i]:
            self.left_cnt[j] += 1

    def playable_by_group(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.group_count)]
        removed = self.removed
        above, left, right = self.above_cnt, self.left_cnt, self.right_cnt
        group_of = self.group_of
        for i in range(self.n):
            if (not removed[i] and above[i] == 0
                    and (left[i] == 0 or right[i] == 0)):
                out[group_of[i]].append(i)
        return out

    def present_by_group(self) -> List[List[int]]:
        return [[i for i in members if not self.removed[i]]
                for members in self.groups]

    def legal_move_pairs(self) -> List[Tuple[int, int]]:
        moves: List[Tuple[int, int]] = []
        for tiles in self.playable_by_group():
            for a in range(len(tiles)):
                for b in range(a + 1, len(tiles)):
                    moves.append((tiles[a], tiles[b]))
        return moves


class ScanOutcome:
    __slots__ = ("cleared", "removed", "trace", "sim_flags")

    def __init__(self, cleared: bool, removed,
                 trace: Optional[List[Tuple[int, Tuple[int, ...]]]],
                 sim_flags: Optional[Dict[int, bool]]):
        self.cleared = cleared
        self.removed = removed
        self.trace = trace
        self.sim_flags = sim_flags


def _csr(rows: Sequence[Sequence[int]]) -> Tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(rows) + 1, dtype=np.int32)
    for i, row in enumerate(rows):
        ptr[i + 1] = ptr[i] + len(row)
    dat = np.zeros(int(ptr[-1]), dtype=np.int32)
    k = 0
    for row in rows:
        for v in row:
            dat[k] = v
            k += 1
    return ptr, dat


# blocking counters of one tile packed into a single int32:
# above in bits 0..9, left side in 10..19, right side in 20..29
_P_ABOVE = np.int32(0x3FF)
_P_LEFT = np.int32(0x3FF << 10)
_P_RIGHT = np.int32(0x3FF << 20)


@njit(inline="always")
def _rm(j, pack, removed, playable, ready, sp, edge_ptr, edge_dst, edge_delta):
    removed[j] = 1
    for p in range(edge_ptr[j], edge_ptr[j + 1]):
        i = edge_dst[p]
        v = pack[i] - edge_delta[p]
        pack[i] = v
        if removed[i] == 0 and playable[i] == 0 and (v & _P_ABOVE) == 0 \
                and ((v & _P_LEFT) == 0 or (v & _P_RIGHT) == 0):
            playable[i] = 1
            ready[sp] = i
            sp += 1
    return sp


@njit(cache=True)
def _scan_once(pack0, removed0, playable0, ready0,
               sp0, pack, removed, playable,
               ready, mode, mode_live, partner,
               edge_ptr, edge_dst, edge_delta, gptr, gdat, group_of):
    """One fixpoint scan; returns the number of tiles it removed."""
    n = removed0.shape[0]
    for i in range(n):
        pack[i] = pack0[i]
        removed[i] = removed0[i]
        playable[i] = playable0[i]
    for g in range(mode_live.shape[0]):
        mode[g] = mode_live[g]
    for q in range(sp0):
        ready[q] = ready0[q]
    sp = sp0
    cnt = 0
    while sp > 0:
        sp -= 1
        i = ready[sp]
        if removed[i]:
            continue
        g = group_of[i]
        m = mode[g]
        if m == 2:
            j = partner[i]
            if j >= 0 and removed[j] == 0 and playable[j] == 1:
                sp = _rm(i, pack, removed, playable, ready, sp,
                         edge_ptr, edge_dst, edge_delta)
                sp = _rm(j, pack, removed, playable, ready, sp,
                         edge_ptr, edge_dst, edge_delta)
                cnt += 2
        elif m == 1:
            sp = _rm(i, pack, removed, playable, ready, sp,
                     edge_ptr, edge_dst, edge_delta)
            cnt += 1
        elif m == 0:
            a = -1
            b = -1
            for p in range(gptr[g], gptr[g + 1]):
                s = gdat[p]
                if removed[s] == 0 and playable[s] == 1:
                    if a < 0:
                        a = s
                    elif b < 0:
                        b = s
                        break
            if b >= 0:
                mode[g] = 1
                sp = _rm(a, pack, removed, playable, ready, sp,
                         edge_ptr, edge_dst, edge_delta)
                sp = _rm(b, pack, removed, playable, ready, sp,
                         edge_ptr, edge_dst, edge_delta)
                cnt += 2
                for p in range(gptr[g], gptr[g + 1]):
                    s = gdat[p]
                    if removed[s] == 0 and playable[s] == 1:
                        ready[sp] = s
                        sp += 1
    return cnt


@njit(inline="always")
def _assign_pairing(g, k, ord4, partner, mode_live):
    a = ord4[g, 0]
    b = ord4[g, 1]
    c = ord4[g, 2]
    d = ord4[g, 3]
    if k == 1:
        p0, p1, p2, p3 = a, b, c, d
    elif k == 2:
        p0, p1, p2, p3 = a, c, b, d
    else:
        p0, p1, p2, p3 = a, d, b, c
    partner[p0] = p1
    partner[p1] = p0
    partner[p2] = p3
    partner[p3] = p2
    mode_live[g] = 2


@njit(inline="always")
def _unassign_pairing(g, ord4, partner, mode_live):
    for q in range(4):
        partner[ord4[g, q]] = -1
    mode_live[g] = 0


@njit(inline="always")
def _next_allowed(mask, t, k):
    # next pairing index after k whose partition survives in mask; the
    # group's tile order has been forward-cycled t (mod 3) times, which
    # rotates which partition each pairing index denotes
    for kk in range(k + 1, 4):
        if mask & (1 << (((kk - 1 + t) % 3) + 1)):
            return kk
    return 0


@njit(cache=True)
def _kernel_search(pack0, removed0, playable0, ready0, sp0,
                   present0, edge_ptr, edge_dst, edge_delta,
                   gptr, gdat, group_of,
                   pack, removed, playable,
                   ready, mode, mode_live, partner,
                   g4, ord4, path_g, path_k, on_path, trims, dom, budget):
    """The adaptive group-directed search, entirely in machine code.

    Mirrors the pure-Python loop in solver.solve_group_directed decision for
    decision; mutates ord4/path arrays so the caller can rebuild the final
    assignment.  Returns (status, path_len, scans) with status 1 on
    solvable, 0 on unsolvable, -1 when the scan budget ran out.
    """
    n4 = g4.shape[0]
    nscans = 0
    path_len = 0
    cursor = 0
    while True:
        if nscans >= budget:
            return -1, path_len, nscans
        nscans += 1
        cnt = _scan_once(pack0, removed0, playable0,
                         ready0, sp0, pack,
                         removed, playable, ready, mode, mode_live, partner,
                         edge_ptr, edge_dst, edge_delta, gptr, gdat, group_of)
        if cnt == present0:
            if path_len == n4:
                return 1, path_len, nscans
            start = path_len
            while True:
                # next unassigned group in cyclic id order after the last
                # push; a rotating cursor varies the support sets and tames
                # boards that a fixed lowest-id choice grinds on
                g = -1
                for qq in range(n4):
                    q = (cursor + qq) % n4
                    if on_path[g4[q]] == 0:
                        g = g4[q]
                        cursor = (q + 1) % n4
                        break
                k1 = _next_allowed(dom[g], trims[g] % 3, 0)
                path_g[path_len] = g
                path_k[path_len] = k1
                path_len += 1
                on_path[g] = 1
                _assign_pairing(g, k1, ord4, partner, mode_live)
                nscans += 1
                cnt = _scan_once(pack0, removed0,
                                 playable0, ready0, sp0,
                                 pack, removed, playable,
                                 ready, mode, mode_live, partner,
                                 edge_ptr, edge_dst, edge_delta,
                                 gptr, gdat, group_of)
                if cnt != present0:
                    break
                if path_len == n4:
                    return 1, path_len, nscans
            for i in range(path_len - 2, start - 1, -1):
                gg = path_g[i]
                kk = path_k[i]
                _unassign_pairing(gg, ord4, partner, mode_live)
                nscans += 1
                cnt = _scan_once(pack0, removed0,
                                 playable0, ready0, sp0,
                                 pack, removed, playable,
                                 ready, mode, mode_live, partner,
                                 edge_ptr, edge_dst, edge_delta,
                                 gptr, gdat, group_of)
                if cnt == present0:
                    _assign_pairing(gg, kk, ord4, partner, mode_live)
                else:
                    for j in range(i, path_len - 1):
                        path_g[j] = path_g[j + 1]
                        path_k[j] = path_k[j + 1]
                    path_len -= 1
                    on_path[gg] = 0
                    trims[gg] += 1
                    # forward cycle: (a,b,c,d) -> (a,c,d,b); three trims
                    # rotate through all three pairings as the first try
                    b = ord4[gg, 1]
                    ord4[gg, 1] = ord4[gg, 2]
                    ord4[gg, 2] = ord4[gg, 3]
                    ord4[gg, 3] = b
            k = 0
            while path_len > 0:
                g = path_g[path_len - 1]
                k = _next_allowed(dom[g], trims[g] % 3,
                                  path_k[path_len - 1])
                if k != 0:
                    break
                path_len -= 1
                on_path[g] = 0
                _unassign_pairing(g, ord4, partner, mode_live)
            if path_len == 0:
                return 0, 0, nscans
            path_k[path_len - 1] = k
            _assign_pairing(g, k, ord4, partner, mode_live)
        else:
            k = 0
            while path_len > 0:
                g = path_g[path_len - 1]
                k = _next_allowed(dom[g], trims[g] % 3,
                                  path_k[path_len - 1])
                if k != 0:
                    break
                path_len -= 1
                on_path[g] = 0
                _unassign_pairing(g, ord4, partner, mode_live)
            if path_len == 0:
                return 0, 0, nscans
            path_k[path_len - 1] = k
            _assign_pairing(g, k, ord4, partner, mode_live)


class ScanContext:
    """Reusable pruning-scan runner for one board snapshot."""

    def __init__(self, board: Board):
        geom = board.layout.geometry
        self.board = board
        self.geom = geom
        self.slots = geom.slots
        self.n = geom.n
        self.group_of, self.groups = compile_groups(board)
        self.group_count = len(self.groups)
        n = self.n
        removed0 = bytearray(n)
        for s in board.removed:
            removed0[geom.index[s]] = 1
        self.removed0 = bytes(removed0)
        self.above0 = [sum(1 for j in geom.above[i] if not removed0[j])
                       for i in range(n)]
        self.left0 = [sum(1 for j in geom.lefts[i] if not removed0[j])
                      for i in range(n)]
        self.right0 = [sum(1 for j in geom.rights[i] if not removed0[j])
                       for i in range(n)]
        self.present0 = n - sum(removed0)
        self.present_groups = [tuple(i for i in members if not removed0[i])
                               for members in self.groups]
        playable0 = bytearray(n)
        ready0 = []
        for i in range(n):
            if (not removed0[i] and self.above0[i] == 0
                    and (self.left0[i] == 0 or self.right0[i] == 0)):
                playable0[i] = 1
                ready0.append(i)
        self.playable0 = bytes(playable0)
        self.ready0 = tuple(ready0)
        # static group modes / partners: size-2 groups are always
        # pair-constrained, four-tile groups default to free
        partner0 = [-1] * n
        mode0 = [3] * self.group_count
        for g, members in enumerate(self.present_groups):
            if len(members) == 2:
                u, v = members
                partner0[u] = v
                partner0[v] = u
                mode0[g] = 2
            elif len(members) == 4:
                mode0[g] = 0
            elif members:
                raise ValueError("group %d has %d tiles present"
                                 % (g, len(members)))
        self._partner0 = partner0
        self._mode0 = mode0
        self._fast_ready = False
        if _HAVE_NUMBA:
            # merged neighbor edges: removing tile j applies edge_delta[p]
            # to the packed counters of edge_dst[p]
            edges = [[] for _ in range(n)]
            for j in range(n):
                for i in geom.below[j]:
                    edges[j].append((i, 1))            # above count
                for i in geom.rights[j]:
                    edges[j].append((i, 1 << 10))      # left-side count
                for i in geom.lefts[j]:
                    edges[j].append((i, 1 << 20))      # right-side count
            self._edge_ptr, self._edge_dst = _csr(
                [[i for i, _ in row] for row in edges])
            self._edge_delta = np.array(
                [d for row in edges for _, d in row] or [0],
                dtype=np.int32)[:int(self._edge_ptr[-1])]
            self._gptr, self._gdat = _csr(self.present_groups)
            self._np_group_of = np.array(self.group_of or [0], dtype=np.int32)
            self._np_pack0 = np.array(
                [self.above0[i] + (self.left0[i] << 10)
                 + (self.right0[i] << 20) for i in range(n)] or [0],
                dtype=np.int32)[:max(1, n)]
            self._np_removed0 = np.frombuffer(bytes(removed0), dtype=np.uint8)
            self._np_playable0 = np.frombuffer(self.playable0, dtype=np.uint8)
            self._np_ready0 = np.zeros(max(1, 4 * n), dtype=np.int32)
            self._np_ready0[:len(ready0)] = ready0
            self._np_sp0 = len(ready0)
            # live assignment state for the solver fast path
            self._np_partner = np.array(partner0 or [0], dtype=np.int32)
            self._np_mode0 = np.array(mode0 or [0], dtype=np.uint8)
            self._np_mode_live = self._np_mode0.copy()
            # scratch state, reused by every fast scan
            ng = max(1, self.group_count)
            self._sc_pack = np.empty(max(1, n), dtype=np.int32)
            self._sc_removed = np.empty(max(1, n), dtype=np.uint8)
            self._sc_playable = np.empty(max(1, n), dtype=np.uint8)
            self._sc_ready = np.empty(max(1, 4 * n), dtype=np.int32)
            self._sc_mode = np.empty(ng, dtype=np.uint8)
            self._fast_ready = True

    def slot_order(self, g: int) -> Tuple[Slot, ...]:
        return tuple(self.slots[i] for i in self.present_groups[g])

    # -- solver fast path: incrementally maintained assignment state --------

    @property
    def fast(self) -> bool:
        return self._fast_ready

    def fast_assign(self, g: int, pairing: int,
                    order: Sequence[Slot]) -> None:
        index = self.geom.index
        ids = [index[s] for s in order]
        pat = PAIRING_PATTERNS[pairing - 1]
        p = self._np_partner
        a0, b0, a1, b1 = ids[pat[0]], ids[pat[1]], ids[pat[2]], ids[pat[3]]
        p[a0] = b0
        p[b0] = a0
        p[a1] = b1
        p[b1] = a1
        self._np_mode_live[g] = 2

    def fast_unassign(self, g: int) -> None:
        p = self._np_partner
        for i in self.present_groups[g]:
            p[i] = -1
        self._np_mode_live[g] = 0

    def fast_scan(self) -> bool:
        cnt = _scan_once(
            self._np_pack0,
            self._np_removed0, self._np_playable0, self._np_ready0,
            self._np_sp0,
            self._sc_pack,
            self._sc_removed, self._sc_playable, self._sc_ready,
            self._sc_mode, self._np_mode_live, self._np_partner,
            self._edge_ptr, self._edge_dst, self._edge_delta,
            self._gptr, self._gdat, self._np_group_of)
        return cnt == self.present0

    def fast_search_attempt(self, order, budget, dom_masks=None):
        """One budgeted adaptive-search attempt in the compiled kernel.

        order is the group order for the rotating cursor; dom_masks
        restricts each group to the pairing partitions that survived
        propagation (bitmask over partitions 1..3 of the uncycled order).

        Returns (status, assignment, orders, nscans): status 1 solvable
        (with the leaf's pairing assignment and cycled tile orders),
        0 unsolvable, -1 budget exhausted.
        """
        size4 = [g for g, members in enumerate(self.present_groups)
                 if len(members) == 4]
        n4 = len(size4)
        dom = np.full(max(1, self.group_count), 0b1110, dtype=np.int32)
        if dom_masks:
            for g, m in dom_masks.items():
                dom[g] = m
        g4 = np.asarray(list(order), dtype=np.int32)
        ord4 = np.zeros((max(1, self.group_count), 4), dtype=np.int32)
        for g in size4:
            ord4[g, :] = self.present_groups[g]
        path_g = np.zeros(max(1, n4), dtype=np.int32)
        path_k = np.zeros(max(1, n4), dtype=np.int32)
        on_path = np.zeros(max(1, self.group_count), dtype=np.uint8)
        trims = np.zeros(max(1, self.group_count), dtype=np.int64)
        mode_live = self._np_mode0.copy()
        partner = np.array(self._partner0 or [0], dtype=np.int32)
        status, path_len, nscans = _kernel_search(
            self._np_pack0,
            self._np_removed0, self._np_playable0, self._np_ready0,
            self._np_sp0, self.present0,
            self._edge_ptr, self._edge_dst, self._edge_delta,
            self._gptr, self._gdat, self._np_group_of,
            self._sc_pack,
            self._sc_removed, self._sc_playable, self._sc_ready,
            self._sc_mode, mode_live, partner,
            g4, ord4, path_g, path_k, on_path, trims, dom, budget)
        if status == 1:
            assignment = {int(path_g[i]): int(path_k[i])
                          for i in range(path_len)}
            orders = {g: tuple(self.slots[j] for j in ord4[g])
                      for g in size4}
            return 1, assignment, orders, int(nscans)
        return int(status), None, None, int(nscans)

    def propagation_refutes(self) -> bool:
        """Pairwise pairing-domain propagation; True proves unsolvability."""
        return self.propagate_domains() is None

    def propagate_domains(self):
        """Arc-consistent pairing domains per four-group, or None.

        Assigning constraints only shrinks what the scan removes, so if
        every pairing of some group is incompatible with all live pairings
        of another group, that pairing can appear in no clearing assignment
        and is deleted; an emptied domain proves unsolvability (None).
        Runs a few thousand scans; used once the cheap search attempt has
        failed, both as an unsolvability filter and to restrict the
        restarted search to surviving pairings.  Domains are in terms of
        the group's uncycled slot order.
        """
        size4 = [g for g, members in enumerate(self.present_groups)
                 if len(members) == 4]
        orders = {g: self.slot_order(g) for g in size4}

        if self.fast:
            def compatible(g, k, h, dom_h):
                self.fast_assign(g, k, orders[g])
                try:
                    for l in dom_h:
                        self.fast_assign(h, l, orders[h])
                        ok = self.fast_scan()
                        self.fast_unassign(h)
                        if ok:
                            return True
                    return False
                finally:
                    self.fast_unassign(g)

            def feasible(g, k):
                self.fast_assign(g, k, orders[g])
                ok = self.fast_scan()
                self.fast_unassign(g)
                return ok
        else:
            def compatible(g, k, h, dom_h):
                for l in dom_h:
                    if self.run({g: k, h: l}, orders).cleared:
                        return True
                return False

            def feasible(g, k):
                return self.run({g: k}, orders).cleared

        dom = {}
        for g in size4:
            dom[g] = {k for k in (1, 2, 3) if feasible(g, k)}
            if not dom[g]:
                return None
        changed = True
        while changed:
            changed = False
            for g in size4:
                for k in sorted(dom[g]):
                    for h in size4:
                        if h != g and not compatible(g, k, h, dom[h]):
                            dom[g].discard(k)
                            changed = True
                            if not dom[g]:
                                return None
                            break
        return dom

    # -- generic scan for public API, traces, diagnostics -------------------

    def run(self, assignment: Optional[Dict[int, int]] = None,
            tile_orders: Optional[Dict[int, Sequence[Slot]]] = None,
            rng=None, record: bool = False,
            want_sim_flags: bool = False) -> ScanOutcome:
        """One fixpoint scan.

        assignment maps group id -> pairing index 1..3 (groups with four
        present tiles only).  tile_orders optionally overrides the default
        sorted tile order the pairing indexes refer to.  rng (random.Random
        compatible) randomizes the eligibility order; the verdict must not
        depend on it.
        """
        n = self.n
        geom = self.geom
        index = geom.index
        below_of, lefts_of, rights_of = geom.below, geom.lefts, geom.rights
        group_of = self.group_of
        groups = self.present_groups
        removed = bytearray(self.removed0)
        above = self.above0[:]
        left = self.left0[:]
        right = self.right0[:]
        playable = bytearray(self.playable0)

        partner = self._partner0[:]
        mode = self._mode0[:]
        if assignment:
            for g, k in assignment.items():
                if not 0 <= g < self.group_count:
                    raise ValueError("unknown group %d" % g)
                if k not in (1, 2, 3):
                    raise ValueError("pairing index must be 1..3, got %r" % (k,))
                if mode[g] == 2:
                    continue       # a two-tile group is already a fixed pair
                if mode[g] != 0:
                    raise ValueError("cannot assign group %d" % g)
                members = groups[g]
                if tile_orders and g in tile_orders:
                    order = [index[s] for s in tile_orders[g]]
                else:
                    order = list(members)
                pat = PAIRING_PATTERNS[k - 1]
                a0, b0 = order[pat[0]], order[pat[1]]
                a1, b1 = order[pat[2]], order[pat[3]]
                partner[a0] = b0
                partner[b0] = a0
                partner[a1] = b1
                partner[b1] = a1
                mode[g] = 2

        sim_flags: Optional[Dict[int, bool]] = None
        if want_sim_flags:
            sim_flags = {g: False for g in range(self.group_count)
                         if mode[g] == 0 and groups[g]}
        trace: Optional[List[Tuple[int, Tuple[int, ...]]]] = [] if record else None

        ready: List[int] = list(self.ready0)
        push = ready.append
        if sim_flags is not None:
            for g in sim_flags:
                if all(playable[s] for s in groups[g]):
                    sim_flags[g] = True

        removed_cnt = 0

        def _flag(i: int) -> None:
            g = group_of[i]
            if mode[g] == 0 and not sim_flags[g]:
                if all(playable[s] and not removed[s] for s in groups[g]):
                    sim_flags[g] = True

        def do_remove(j: int) -> None:
            nonlocal removed_cnt
            removed[j] = 1
            removed_cnt += 1
            for i in below_of[j]:
                above[i] -= 1
                if (not removed[i] and not playable[i] and above[i] == 0
                        and (left[i] == 0 or right[i] == 0)):
                    playable[i] = 1
                    push(i)
                    if sim_flags is not None:
                        _flag(i)
            for i in rights_of[j]:
                left[i] -= 1
                if (not removed[i] and not playable[i] and above[i] == 0
                        and left[i] == 0):
                    playable[i] = 1
                    push(i)
                    if sim_flags is not None:
                        _flag(i)
            for i in lefts_of[j]:
                right[i] -= 1
                if (not removed[i] and not playable[i] and above[i] == 0
                        and right[i] == 0):
                    playable[i] = 1
                    push(i)
                    if sim_flags is not None:
                        _flag(i)

        while ready:
            if rng is None:
                i = ready.pop()
            else:
                k = rng.randrange(len(ready))
                ready[k], ready[-1] = ready[-1], ready[k]
                i = ready.pop()
            if removed[i]:
                continue
            g = group_of[i]
            m = mode[g]
            if m == 2:
                j = partner[i]
                if j >= 0 and not removed[j] and playable[j]:
                    do_remove(i)
                    do_remove(j)
                    if trace is not None:
                        trace.append((g, (i, j) if i < j else (j, i)))
            elif m == 1:
                do_remove(i)
                if trace is not None:
                    trace.append((g, (i,)))
            else:
                ps = [s for s in groups[g] if not removed[s] and playable[s]]
                if len(ps) >= 2:
                    if rng is None:
                        a, b = ps[0], ps[1]
                    else:
                        a, b = rng.sample(ps, 2)
                    mode[g] = 1
                    do_remove(a)
                    do_remove(b)
                    if trace is not None:
                        trace.append((g, (a, b) if a < b else (b, a)))
                    for s in ps:
                        if not removed[s]:
                            push(s)

        return ScanOutcome(removed_cnt == self.present0, removed, trace, sim_flags)
