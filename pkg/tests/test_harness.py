import json

import pytest

from mahsolve.harness import ScanReport, scan_layout
from mahsolve.layouts import (default_group_sizes, default_workers, get_layout,
                              layout_names, turtle)
from mahsolve.board import Layout, Slot


def test_registry_contents():
    assert layout_names() == ["row4-demo", "turtle", "two-stacks-demo"]
    lay, sizes = get_layout("turtle")
    assert len(lay.slots) == 144 and sizes == tuple([4] * 36)
    lay, sizes = get_layout("two-stacks-demo")
    assert len(lay.slots) == 4 and sizes == (2, 2)
    with pytest.raises(KeyError):
        get_layout("dragon")


def test_default_group_sizes():
    assert default_group_sizes(turtle()) == tuple([4] * 36)
    with pytest.raises(ValueError):
        default_group_sizes(Layout([Slot(0, 0, 0), Slot(4, 0, 0)]))


def test_default_workers_env(monkeypatch):
    monkeypatch.setenv("MAHSOLVE_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("MAHSOLVE_WORKERS", "junk")
    assert default_workers() >= 1
    monkeypatch.delenv("MAHSOLVE_WORKERS")
    assert default_workers() >= 1


def test_scan_empty():
    lay, sizes = get_layout("row4-demo")
    rep = scan_layout(lay, 0, 7, group_sizes=sizes, layout_name="row4-demo")
    assert rep.n == 0 and rep.unsolvable_count == 0
    assert rep.unsolvable_fraction is None
    assert rep.p50_ms is None and rep.max_ms is None
    d = json.loads(rep.to_json())
    assert set(d) == {"layout", "n", "seed", "unsolvable_count",
                      "unsolvable_fraction", "p50_ms", "p99_ms", "max_ms",
                      "random_success_fraction"}


def test_two_stacks_fraction_near_two_thirds():
    lay, sizes = get_layout("two-stacks-demo")
    rep = scan_layout(lay, 6000, 11, group_sizes=sizes,
                      layout_name="two-stacks-demo", playout_attempts=4)
    assert abs(rep.unsolvable_fraction - 2 / 3) < 0.02
    # solvable deals have both groups split across the stacks: random
    # playouts win them outright
    assert rep.random_success_fraction == 1.0


def test_worker_count_independence():
    lay, sizes = get_layout("turtle")
    reports = [scan_layout(lay, 40, 5, workers=w, group_sizes=sizes,
                           layout_name="turtle", playout_attempts=4)
               for w in (1, 4)]
    assert reports[0].comparable() == reports[1].comparable()


def test_rerun_is_byte_identical_modulo_timing():
    lay, sizes = get_layout("two-stacks-demo")
    a = scan_layout(lay, 500, 3, group_sizes=sizes, layout_name="x")
    b = scan_layout(lay, 500, 3, group_sizes=sizes, layout_name="x")
    assert a.comparable() == b.comparable()


def test_invalid_arguments():
    lay, sizes = get_layout("row4-demo")
    with pytest.raises(ValueError):
        scan_layout(lay, -1, 0, group_sizes=sizes)
    with pytest.raises(ValueError):
        scan_layout(lay, 1, 0, workers=0, group_sizes=sizes)
