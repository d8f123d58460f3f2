"""Acceptance criteria, one test each.

Every test prints a single PASS or FAIL line and records it for the terminal
summary. Run this file directly to print the lines without pytest.
"""

import sys
import time
from fractions import Fraction as F
from math import sqrt
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from acceptance_log import report  # noqa: E402
from oracles import (  # noqa: E402
    blue_rule_literal,
    brute_force_geodesic_length,
    random_flag_complex,
    random_point,
)
from phylotrop.centroid import centroid_in_treespace, fermat_weber, fermat_weber_objective  # noqa: E402
from phylotrop.complex import OrthantPoint, clade_fan, double_factorial_odd, enumerate_maximal_nested_sets  # noqa: E402
from phylotrop.experiments import DepthExperimentConfig, depth_experiment  # noqa: E402
from phylotrop.geodesic import geodesic, geodesic_distance  # noqa: E402
from phylotrop.hull import geodesic_triangle_example, s_d, thm35_instance  # noqa: E402
from phylotrop.hull2d import trop_hull_2d  # noqa: E402
from phylotrop.newick import emit_newick, parse_newick  # noqa: E402
from phylotrop.sampler import sample_pair, sample_tree  # noqa: E402
from phylotrop.treespace import (  # noqa: E402
    bhv_geodesic,
    compose,
    decompose,
    subdominant_ultrametric,
    tree_from_point,
    to_orthant_point,
)
from phylotrop.tropical import (  # noqa: E402
    PluckerVector,
    TropicalPoint,
    blue_rule_project,
    segment_depth,
    trop_membership,
    trop_segment,
    uniform_closed_form,
)

vec = OrthantPoint.from_vector


def _row(text):
    return [F(x) for x in text.split()]


D1 = _row("77/100 1 21/25 1 1 21/25 1 1 13/25 1")
D2 = _row("1 1 1 1 8/25 3/4 3/4 3/4 3/4 23/50")
D3 = _row("1 1 1 49/50 16/25 16/25 1 3/100 1 1")

# boundary nodes of the three-by-ten triangle with their nested sets
BOUNDARY_ROWS = [
    ("77/100 1 21/25 1 1 21/25 1 1 13/25 1", "12 35 124"),
    ("21/25 1 21/25 1 1 21/25 1 1 59/100 1", "35 124"),
    ("1 1 1 1 1 21/25 1 1 3/4 1", "24 35"),
    ("1 1 1 1 91/100 3/4 91/100 91/100 3/4 91/100", "24 35 2345"),
    ("1 1 1 1 3/4 3/4 3/4 3/4 3/4 3/4", "2345"),
    ("1 1 1 1 23/50 3/4 3/4 3/4 3/4 23/50", "23 45 2345"),
    ("1 1 1 1 8/25 3/4 3/4 3/4 3/4 23/50", "23 45 2345"),
    ("1 1 1 1 8/25 3/4 3/4 3/4 3/4 17/25", "23 45 2345"),
    ("1 1 1 1 39/100 3/4 3/4 3/4 3/4 3/4", "23 2345"),
    ("1 1 1 1 16/25 3/4 1 3/4 1 1", "23 234"),
    ("1 1 1 49/50 16/25 73/100 1 73/100 1 1", "15 23 234"),
    ("1 1 1 49/50 16/25 16/25 1 3/100 1 1", "15 34 234"),
    ("1 1 1 49/50 16/25 16/25 1 16/25 1 1", "15 234"),
    ("1 1 1 49/50 4/5 16/25 1 4/5 1 1", "15 24 234"),
    ("1 1 1 49/50 89/100 73/100 1 89/100 1 1", "15 24 234"),
    ("1 1 1 49/50 49/50 41/50 1 49/50 1 1", "15 24 234"),
    ("1 1 1 1 1 21/25 1 1 1 1", "24"),
    ("21/25 1 21/25 1 1 21/25 1 1 21/25 1", "35 124"),
    ("77/100 1 21/25 1 1 21/25 1 1 77/100 1", "12 35 124"),
]

EUCLIDEAN_REFERENCE = {
    4: [8.4, 58.4, 33.2],
    5: [1.6, 26.4, 47.4, 24.6],
    6: [0.2, 13.2, 36.7, 31.5, 18.4],
    7: [0, 4, 25.9, 29.9, 22.2, 18],
    8: [0, 1.1, 15, 28.9, 25, 17.1, 12.9],
}
TROPICAL_REFERENCE = {
    4: [8.1, 88.7, 3.2],
    5: [1.5, 84.7, 13.8, 0],
    6: [0.3, 69.9, 29.8, 0, 0],
    7: [0, 55.7, 44.1, 0.2, 0, 0],
    8: [0, 42.8, 56.9, 0.2, 0.1, 0, 0],
}
BAND = 10.0


def _finish(name, failures, t0):
    line = report(name, failures, time.perf_counter() - t0)
    assert not failures, line


def _close(p, q, tol=1e-9):
    keys = p.support | q.support
    return all(abs(float(p[k]) - float(q[k])) <= tol for k in keys)


def _matches(points, expected):
    return len(points) == len(expected) and all(_close(p, q) for p, q in zip(points, expected))


def test_golden_geodesics():
    t0 = time.perf_counter()
    K, p = geodesic_triangle_example()
    # reference rationals, typed in independently of the example module
    d = vec([0, 0, F(1, 7), F(5, 7), 0, 0])
    e = vec([0, 0, 0, F(8, 11), F(1, 11), 0])
    f = vec([0, 0, 0, F(14, 25), 0, 0])
    h = vec([0, F(14, 19), F(14, 19), 0, 0, 0])
    x = vec([0, F(11, 13), F(12, 13), 0, 0, 0])
    y = vec([0, 0, F(6, 67), F(44, 67), 0, 0])
    a, b, c = vec([4, 6, 6, 0, 0, 0]), vec([0, 5, 8, 0, 0, 0]), vec([0, 0, 0, 1, 2, 3])
    failures = []
    g = geodesic(a, c, K)
    if not _matches(g.breakpoints, [vec([0] * 6)]) or abs(g.length - (sqrt(88) + sqrt(14))) > 1e-9:
        failures.append("G(a,c) is not the cone path through the origin")
    if not _matches(geodesic(b, c, K).breakpoints, [d, e]):
        failures.append("G(b,c) breakpoints differ from d, e")
    if not _matches(geodesic(a, e, K).breakpoints, [x, y]):
        failures.append("G(a,e) breakpoints differ from x, y")
    if not _matches(geodesic(a, f, K).breakpoints, [h]):
        failures.append("G(a,f) breakpoint differs from h")
    elapsed = time.perf_counter() - t0
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s >= 1s")
    _finish("golden geodesics", failures, t0)


def test_high_dimensional_triangle():
    t0 = time.perf_counter()
    failures = []
    for d in range(2, 9):
        inst = thm35_instance(d, strict=False)
        bad = [k for k, ok in inst.certificates.items() if not ok]
        if bad:
            failures.append(f"d={d}: {', '.join(bad)}")
        if abs(inst.length - sqrt(2 * s_d(d))) > 1e-9:
            failures.append(f"d={d}: length {inst.length}")
        if d >= 3 and inst.det != 4 ** (d - 3) * abs(10 * d - 34):
            failures.append(
                f"d={d}: |det U''| = {inst.det} = 4^{d - 2}*{abs(10 * d - 34)}, expected 4^{d - 3}*{abs(10 * d - 34)}"
            )
    # reference d = 5 matrix, rows scaled by their denominators
    reference = [
        ([7, 1, 14, 2, 21, 3, 28, 4, 35, 5], 1),
        ([0, 0, 7, 1, 14, 2, 21, 3, 28, 4], 6),
        ([0, 0, 5, 5, 12, 6, 19, 7, 26, 8], 16),
        ([0, 0, 5, 5, 10, 10, 17, 11, 24, 12], 26),
        ([0, 0, 5, 5, 10, 10, 15, 15, 22, 16], 36),
        ([0, 0, 5, 5, 10, 10, 15, 15, 20, 20], 46),
    ]
    want = [[F(v, den) for v in row] + [F(1)] for row, den in reference]
    if [list(r) for r in thm35_instance(5, strict=False).U] != want:
        failures.append("d=5 matrix differs from the reference")
    elapsed = time.perf_counter() - t0
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.1f}s >= 10s")
    _finish("high-dimensional triangle certificates d=2..8", failures, t0)


def _candidates(u, v, p):
    return {a - b for a, b in zip(p.normalized().coords, v)} | {a - b for a, b in zip(u, v)}


def test_triangle_boundary_rows():
    t0 = time.perf_counter()
    rows = [TropicalPoint(_row(r)) for r, _ in BOUNDARY_ROWS]
    tops = [frozenset(frozenset(int(ch) for ch in s) for s in t.split()) for _, t in BOUNDARY_ROWS]
    # rows 1..6, 7..12, 13..19 with the shared endpoints closing each side
    sides = [("D1->D2", D1, D2, range(0, 7)), ("D2->D3", D2, D3, range(6, 13)), ("D3->D1", D3, D1, list(range(11, 19)) + [0])]
    failures = []
    for name, u, v, idx in sides:
        seg = trop_segment(u, v)
        for k in idx:
            if not any(rows[k] == seg.point_at(t) for t in _candidates(u, v, rows[k])):
                failures.append(f"row {k + 1} not on {name}")
            if decompose(list(rows[k].normalized().coords)).topology != tops[k]:
                failures.append(f"row {k + 1} topology")
        table = [rows[k] for k in idx]
        extra = [bp for bp in seg.breakpoints if bp not in table and bp not in rows]
        if extra:
            failures.append(f"{name} has {len(extra)} unlisted bends")
    depths = [segment_depth(D1, D2)[0], segment_depth(D2, D3)[0], segment_depth(D3, D1)[0]]
    if depths != [2, 1, 2]:
        failures.append(f"depths {depths}")
    _finish("tropical triangle boundary rows", failures, t0)


def test_three_by_ten_hull_counts():
    t0 = time.perf_counter()
    columns = [list(col) for col in zip(D1, D2, D3)]
    H = trop_hull_2d(columns)
    counts = (len(H.nodes), len(H.edges), len(H.cells))
    failures = [] if counts == (23, 35, 13) else [f"counts {counts}"]
    _finish("three-by-ten hull counts 23/35/13", failures, t0)


def _parallelogram(x, y):
    return [1, 1, 1, 1, F(61, 100) + y, F(61, 100) + x + y, F(3, 4) + y, F(61, 100) + y, F(3, 4) + y, F(3, 4) + y]


def test_centroid_corners():
    t0 = time.perf_counter()
    pts = [D1, D2, D3]
    free = fermat_weber(pts)
    tree = centroid_in_treespace(pts, 5)
    failures = []
    values = {corner: fermat_weber_objective(_parallelogram(*corner), pts) for corner in [(0, 0), (F(43, 100), F(7, 50))]}
    if len(set(values.values())) != 1:
        failures.append(f"corner objectives differ: {values}")
    if any(v != tree.value for v in values.values()):
        failures.append(f"corner objectives {set(values.values())} vs constrained optimum {tree.value}")
    if fermat_weber_objective(tree.point, pts) != tree.value or not trop_membership(tree.point):
        failures.append("constrained optimum is not certified in tree space")
    if not free.value <= tree.value:
        failures.append(f"unconstrained {free.value} > constrained {tree.value}")
    _finish("centroid parallelogram corners", failures, t0)


def test_blue_rule():
    t0 = time.perf_counter()
    failures = []
    rng = np.random.default_rng(0)
    for e in range(1, 9):
        for r in range(1, e + 1):
            w = PluckerVector.uniform(r, e)
            for _ in range(4):
                u = [F(int(v), 4) for v in rng.integers(0, 40, e)]
                got = blue_rule_project(u, w)
                if got != uniform_closed_form(u, r) or list(got.coords) != blue_rule_literal(u, w.weights, r, e):
                    failures.append(f"uniform (r,e)=({r},{e}) u={u}")
    graphic = {m: PluckerVector.graphic(m) for m in range(3, 7)}
    for k in range(200):
        m = 3 + k % 4
        krng = np.random.default_rng(1000 + k)
        u = [F(int(v), 3) for v in krng.integers(0, 30, m * (m - 1) // 2)]
        if list(blue_rule_project(u, graphic[m]).coords) != list(subdominant_ultrametric(u, m).entries):
            failures.append(f"graphic m={m} sample {k}")
    _finish("blue rule uniform and graphic", failures, t0)


def test_depth_tables():
    t0 = time.perf_counter()
    out = depth_experiment(DepthExperimentConfig(ms=tuple(range(4, 9)), samples=1000, seed=0))
    budget = time.perf_counter() - t0
    failures = []
    for label, table, ref in [("euclidean", out["euclidean"], EUCLIDEAN_REFERENCE), ("tropical", out["tropical"], TROPICAL_REFERENCE)]:
        for m, want in ref.items():
            got = table.percentages(m)
            for depth, (g, w) in enumerate(zip(got, want)):
                if abs(g - w) > BAND:
                    failures.append(f"{label} m={m} depth{depth}: {g:.1f} vs {w}")
    if budget >= 300:
        failures.append(f"runtime {budget:.0f}s >= 300s")
    # structural claims
    trop = dict(out["tropical"].counts)
    trop.update(depth_experiment(DepthExperimentConfig(ms=(9, 10), samples=1000, seed=0, mode="tropical"))["tropical"].counts)
    for m, row in sorted(trop.items()):
        if sum(row[:3]) < 0.95 * sum(row):
            failures.append(f"tropical depth<=2 only {100 * sum(row[:3]) / sum(row):.1f}% at m={m}")
    for m in (7, 8):
        if out["euclidean"].percentages(m)[0] > 1.0:
            failures.append(f"euclidean depth0 {out['euclidean'].percentages(m)[0]}% at m={m}")
    _finish("depth tables m=4..8", failures, t0)


def _instance(seed):
    rng = np.random.default_rng(seed)
    K = random_flag_complex(rng, int(rng.integers(4, 8)), max_dim=4)
    return K, random_point(rng, K), random_point(rng, K), rng


def test_property_suites():
    t0 = time.perf_counter()
    failures = []
    for seed in range(200):
        K, v, w, _ = _instance(seed)
        best, _ = brute_force_geodesic_length(v, w, K)
        if abs(geodesic(v, w, K).length - best) > 1e-9 * max(1.0, best):
            failures.append(f"brute force seed {seed}")
    for seed in range(500):
        K, u, v, rng = _instance(10_000 + seed)
        w = random_point(rng, K)
        duv, dvw, duw = geodesic_distance(u, v, K), geodesic_distance(v, w, K), geodesic_distance(u, w, K)
        mid = geodesic(v, w, K).point_at(F(1, 2))
        dm = geodesic_distance(u, mid, K)
        if duw > duv + dvw + 1e-9 or dm**2 > (duv**2 + duw**2) / 2 - dvw**2 / 4 + 1e-9:
            failures.append(f"CAT(0) seed {seed}")
    for k in range(500):
        m = 4 + k % 6
        t1, t2 = sample_pair(m, 7, k)
        seg = trop_segment(compose(t1).entries, compose(t2).entries)
        ts = seg.parameters
        probes = list(ts) + [(a + b) / 2 for a, b in zip(ts, ts[1:])]
        if not all(trop_membership(seg.point_at(t), m) for t in probes):
            failures.append(f"closure pair {k}")
    for seed in range(200):
        T = sample_tree(4 + seed % 7, seed)
        p, fan = to_orthant_point(T)
        if parse_newick(emit_newick(T)) != T or decompose(compose(T)) != T or tree_from_point(p, fan) != T:
            failures.append(f"round trip seed {seed}")
    for k in range(200):
        m = 4 + k % 2
        t1, t2 = sample_pair(m, 11, k)
        g, fan = bhv_geodesic(t1, t2)
        for q in list(g.breakpoints) + [g.point_at(F(j, 7)) for j in range(1, 7)]:
            coords = dict(q.coords)
            for leaf in range(1, m + 1):
                if sum(float(x) for r, x in coords.items() if leaf in fan.clade(r)) > 1 + 1e-9:
                    failures.append(f"convexity geodesic {k}")
                    break
    _finish("property suites", failures, t0)


def test_counting():
    t0 = time.perf_counter()
    failures = []
    for m, facets, rays in [(4, 15, 10), (5, 105, 25), (6, 945, 56), (7, 10395, 119)]:
        got = len(enumerate_maximal_nested_sets(m))
        if got != facets or got != double_factorial_odd(m):
            failures.append(f"m={m}: {got} nested sets")
        n = clade_fan(m).n
        if n != rays or n != 2**m - m - 2:
            failures.append(f"m={m}: {n} rays")
    _finish("counting nested sets and rays", failures, t0)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_") and callable(v)]
    ok = True
    for t in tests:
        try:
            t()
        except AssertionError:
            ok = False
    sys.exit(0 if ok else 1)
