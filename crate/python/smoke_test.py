"""Smoke test for the `pcd` extension module.

Build and install first:

    cd crates/py && maturin build --release -i python3
    pip install ../../target/wheels/pcd-*.whl
    python3 python/smoke_test.py
"""

import math
import random

import pcd


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    assert close(pcd.p_r("3/2"), 0.7413, 1e-3)
    assert close(pcd.p_r(math.sqrt(2)), 0.4826, 1e-3)
    assert close(pcd.p_r(1.25), 0.6514, 1e-3)
    try:
        pcd.p_r(1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("p_r(1.0) should fail")

    t2 = pcd.tr_triangle("5/4")[1]
    assert close(t2[0], 0.7, 1e-12) and close(t2[1], math.sqrt(3) / 10, 1e-12)
    assert pcd.tr_triangle(2) is None
    assert pcd.classify_m("5/4", "t2") == "VertexOfTr"
    assert pcd.classify_m("5/4", "centroid") == "InteriorTr"
    assert pcd.classify_m("5/4", (0.3, 0.5, 0.2)) == "BoundaryNonVertex"

    law = pcd.asymptotic_law("5/4", "t2")
    assert law["law"] == "two_plus_bernoulli" and close(law["q"], 0.3486, 1e-3)
    assert pcd.asymptotic_law(2)["value"] == 1
    assert pcd.asymptotic_law("5/4", jm=5)["value"] == 15

    tri = pcd.Triangle.equilateral()
    assert close(tri.area(), math.sqrt(3) / 4, 1e-15)
    b = tri.barycentric((0.5, math.sqrt(3) / 6))
    assert all(close(x, 1 / 3, 1e-12) for x in b)

    corners = [(0.01, 0.005), (0.99, 0.005), (0.5, 0.85)]
    assert pcd.domination(corners, 1)[0] == 3
    assert pcd.domination(corners, "inf")[0] == 1
    g = pcd.Digraph(corners, 1.0)
    assert len(g) == 3 and g.arc_count() == 0
    assert g.domination(bruteforce=True)[0] == 3

    rng = random.Random(1)
    pts = []
    while len(pts) < 40:
        x, y = rng.random(), rng.random() * math.sqrt(3) / 2
        if tri.contains((x, y)):
            pts.append((x, y))
    for r in (1.0, 1.2, 1.5, 2.0):
        fast, _ = pcd.domination(pts[:12], r, "centroid")
        slow, _ = pcd.domination(pts[:12], r, "centroid", bruteforce=True)
        assert fast == slow <= 3

    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert len(pcd.delaunay(square)) == 2
    hull = pcd.convex_hull(square + [(0.5, 0.5)])
    assert len(hull) == 4

    res = pcd.domination_multi(square, [(0.6, 0.2), (0.2, 0.7), (3, 3)], "inf")
    assert res["discarded"] == 1 and res["total_gamma"] == 2

    rep = pcd.simulate("2", [20], replicates=200, seed=3)
    rows = rep["tables"][0]["rows"]
    assert rows[0]["k"] == 1 and rows[0]["count"] == 200
    a = pcd.simulate("5/4", [30], m="t2", replicates=100, seed=4, threads=1)
    b = pcd.simulate("5/4", [30], m="t2", replicates=100, seed=4, threads=8)
    assert a["tables"] == b["tables"]
    d3 = pcd.simulate("4/3", [20], replicates=50, seed=5, d=3)
    assert len(d3["tables"][0]["rows"]) == 4

    print("smoke test passed")


if __name__ == "__main__":
    main()
