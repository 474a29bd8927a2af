"""Relaxed-rules pruning scan, public API.

The scan plays the first two tiles of each unconstrained group in one
simultaneous step and the rest individually; groups constrained to a pairing
are removed strictly pair-wise.  A scan that fails to clear the board proves
the board unsolvable under the given pairing assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .board import Board, Slot
from .engine import PAIRING_PATTERNS, ScanContext

__all__ = [
    "PAIRING_PATTERNS", "PairingAssignment", "ScanResult", "prune_scan",
    "pairing_feasibility", "simultaneous_removal_flags", "scan_trace_lines",
]

PairingAssignment = Dict[int, int]   # group id -> pairing index 1..3


@dataclass(frozen=True)
class ScanResult:
    cleared: bool
    remaining: FrozenSet[Slot]
    # removal events in fixpoint order: (group id, slots removed in the event)
    trace: Optional[Tuple[Tuple[int, Tuple[Slot, ...]], ...]] = None
    sim_flags: Optional[Dict[int, bool]] = None


def _to_result(ctx: ScanContext, outcome, record: bool) -> ScanResult:
    remaining = frozenset(ctx.slots[i] for i in range(ctx.n)
                          if not outcome.removed[i] and not ctx.removed0[i])
    trace = None
    if record and outcome.trace is not None:
        trace = tuple((g, tuple(ctx.slots[i] for i in slots))
                      for g, slots in outcome.trace)
    return ScanResult(outcome.cleared, remaining, trace, outcome.sim_flags)


def prune_scan(board: Board, assignment: Optional[PairingAssignment] = None,
               tile_orders: Optional[Dict[int, Sequence[Slot]]] = None,
               rng=None, record_trace: bool = False) -> ScanResult:
    """Run the scan to its fixpoint and report the verdict.

    rng (a random.Random or compatible) randomizes the eligibility order;
    cleared verdict and remaining set are the same for every order.
    """
    ctx = ScanContext(board)
    outcome = ctx.run(assignment, tile_orders, rng=rng, record=record_trace)
    return _to_result(ctx, outcome, record_trace)


def pairing_feasibility(board: Board, assignment: Optional[PairingAssignment],
                        g: int,
                        tile_orders: Optional[Dict[int, Sequence[Slot]]] = None) -> int:
    """3-bit mask: bit k-1 set iff the scan still clears with g at pairing k."""
    assignment = dict(assignment or {})
    if g in assignment:
        raise ValueError("group %d is already assigned" % g)
    ctx = ScanContext(board)
    if len(ctx.present_groups[g]) != 4:
        raise ValueError("group %d does not have four tiles" % g)
    mask = 0
    for k in (1, 2, 3):
        assignment[g] = k
        if ctx.run(assignment, tile_orders).cleared:
            mask |= 1 << (k - 1)
    return mask


def simultaneous_removal_flags(board: Board,
                               assignment: Optional[PairingAssignment] = None,
                               tile_orders: Optional[Dict[int, Sequence[Slot]]] = None
                               ) -> Dict[int, bool]:
    """Per unassigned four-tile group: were all four tiles ever playable at
    once during the scan's fixpoint construction?"""
    ctx = ScanContext(board)
    outcome = ctx.run(assignment, tile_orders, want_sim_flags=True)
    return dict(outcome.sim_flags or {})


def scan_trace_lines(result: ScanResult) -> List[str]:
    """Debug dump, one line per removal event."""
    lines = []
    for g, slots in result.trace or ():
        lines.append("scan: group %d removes %s"
                     % (g, " ".join("%d,%d,%d" % s for s in slots)))
    return lines
