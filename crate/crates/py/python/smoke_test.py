"""Smoke test for the cubik_py extension.

Usage: python3 smoke_test.py [DIR]   (DIR holds cubik_py.so)
"""

import json
import math
import sys

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import cubik_py


def check_strip():
    strip = cubik_py.generate("strip")
    assert (strip.num_vertices, strip.dim) == (6, 2)
    assert strip.cubes() == [[0, 1, 3, 4], [1, 2, 4, 5]]
    assert strip.is_median() and strip.is_cat0() and strip.link_condition()
    assert strip.width() == 2
    assert abs(strip.distance("c0:0,0", "c1:1,1", "inf") - 2.0) < 1e-9
    assert abs(strip.distance("c0:0,0", "c1:1,1", "1") - 3.0) < 1e-9
    assert abs(strip.distance("c0:0,0", "c1:1,1") - math.sqrt(5.0)) < 1e-9
    report = json.loads(strip.hyperplanes())
    assert report["format"] == "hyperplanes/1" and len(report["hyperplanes"]) == 3
    ball = json.loads(strip.ball("c0:0.5,0.5", 0.25))
    assert ball["boxes"] == {"0": [[0.25, 0.75], [0.25, 0.75]]}
    assert strip.common_point(["c0:0,0", "c1:1,1"], [1.0, 1.0]) is not None
    assert strip.common_point(["c0:0,0", "c1:1,1"], [0.9, 0.9]) is None


def check_round_trip():
    c = cubik_py.generate("random_collapsible", seed=7, steps=6)
    assert c.is_cat0()
    back = cubik_py.expand(c.collapse())
    assert back.to_json() == c.to_json()
    again = cubik_py.Complex.from_json(c.to_json())
    assert again.to_json() == c.to_json()


def check_coloring():
    s = cubik_py.generate("simplex", n=3)
    colors = s.coloring(exact=True)
    assert max(colors) == 4
    assert not cubik_py.generate("tricorner").is_cat0()


def check_errors():
    strip = cubik_py.generate("strip")
    for bad in [lambda: strip.distance("c9:0,0", "c0:0,0"),
                lambda: strip.distance("c0:0,0", "c0:1,1", "0.5"),
                lambda: cubik_py.generate("tree"),
                lambda: cubik_py.Complex.from_json("{}")]:
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")
    assert issubclass(cubik_py.BudgetExceeded, RuntimeError)


if __name__ == "__main__":
    check_strip()
    check_round_trip()
    check_coloring()
    check_errors()
    print("cubik_py smoke test: ok")
