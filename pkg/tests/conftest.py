import random

from mahsolve.board import Layout, Slot


def micro_layout(rnd: random.Random) -> Layout:
    """Small mixed layout: a few ground columns, random stacking, flat padding.

    Slot count is a multiple of 4 so the layout can hold 2..7 four-groups.
    """
    while True:
        slots = set()
        cols = rnd.randrange(3, 8)
        xs = sorted(rnd.sample(range(0, 24, 2), cols))
        rows = rnd.choice([1, 1, 2])
        for r in range(rows):
            for x in xs:
                if r == 0 or rnd.random() < 0.6:
                    slots.add(Slot(x, 4 * r, 0))
        for s in list(slots):
            h = rnd.choice([0, 0, 1, 1, 2])
            for z in range(1, h + 1):
                slots.add(Slot(s.x, s.y, z))
        pad_x = max(s.x for s in slots) + 4
        while len(slots) % 4 or len(slots) < 8:
            slots.add(Slot(pad_x, 0, 0))
            pad_x += 2
        if len(slots) <= 28:
            return Layout(slots)


def micro_suite(count: int, seed: int, pair_groups: bool = False):
    """Deterministic stream of (layout, group_sizes, deal_seed) triples.

    With pair_groups=True some four-groups are split into two pair groups,
    which makes unsolvable deals (and scan prunes) much more common.
    """
    rnd = random.Random(seed)
    for i in range(count):
        lay = micro_layout(rnd)
        sizes = []
        for _ in range(len(lay.slots) // 4):
            if pair_groups and rnd.random() < 0.5:
                sizes += [2, 2]
            else:
                sizes.append(4)
        yield lay, sizes, rnd.getrandbits(32)
