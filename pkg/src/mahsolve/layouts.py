"""Built-in layouts.

Coordinates are half-units: one tile spans 2x2.  The bundled turtle is the
widely used 144-slot arrangement (five levels, half-offset apex); micro
layouts back the test and demo suites.
"""

from __future__ import annotations

import os
from typing import Dict, List, Sequence, Tuple

from .board import Layout, Slot

# ground rows of the turtle: row number (1..8) -> tile columns
_TURTLE_GROUND = {
    1: range(1, 13),
    2: range(3, 11),
    3: range(2, 12),
    4: range(1, 13),
    5: range(1, 13),
    6: range(2, 12),
    7: range(3, 11),
    8: range(1, 13),
}


def _turtle_slots() -> List[Slot]:
    slots: List[Slot] = []
    for row, cols in _TURTLE_GROUND.items():
        for col in cols:
            slots.append(Slot(2 * col, 2 * row, 0))
    # the lone left tile and the two right tiles straddle rows 4 and 5
    slots.append(Slot(0, 9, 0))
    slots.append(Slot(26, 9, 0))
    slots.append(Slot(28, 9, 0))
    for col in range(4, 10):        # 6x6 on level 1
        for row in range(2, 8):
            slots.append(Slot(2 * col, 2 * row, 1))
    for col in range(5, 9):         # 4x4 on level 2
        for row in range(3, 7):
            slots.append(Slot(2 * col, 2 * row, 2))
    for col in range(6, 8):         # 2x2 on level 3
        for row in range(4, 6):
            slots.append(Slot(2 * col, 2 * row, 3))
    slots.append(Slot(13, 9, 4))    # apex, straddling the 2x2
    return slots


def turtle() -> Layout:
    return Layout(_turtle_slots())


def row4_demo() -> Layout:
    """One contiguous ground row of four tiles."""
    return Layout([Slot(2 * c, 0, 0) for c in range(4)])


def two_stacks_demo() -> Layout:
    """Two isolated height-2 stacks."""
    return Layout([Slot(0, 0, 0), Slot(0, 0, 1), Slot(4, 0, 0), Slot(4, 0, 1)])


_REGISTRY: Dict[str, Tuple] = {
    "turtle": (turtle, tuple([4] * 36)),
    "row4-demo": (row4_demo, (4,)),
    "two-stacks-demo": (two_stacks_demo, (2, 2)),
}


def layout_names() -> List[str]:
    return sorted(_REGISTRY)


def get_layout(name: str) -> Tuple[Layout, Tuple[int, ...]]:
    """Named layout plus its default group sizes."""
    try:
        factory, sizes = _REGISTRY[name]
    except KeyError:
        raise KeyError("unknown layout %r (have: %s)"
                       % (name, ", ".join(layout_names()))) from None
    return factory(), sizes


def default_group_sizes(layout: Layout) -> Tuple[int, ...]:
    if len(layout.slots) % 4 != 0:
        raise ValueError("slot count %d not divisible by four; pass explicit "
                         "group sizes" % len(layout.slots))
    return tuple([4] * (len(layout.slots) // 4))


def default_workers() -> int:
    value = os.environ.get("MAHSOLVE_WORKERS", "")
    try:
        return max(1, int(value))
    except ValueError:
        return max(1, os.cpu_count() or 1)
