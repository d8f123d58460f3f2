"""Geodesic convex hulls in orthant spaces.

``g(S)`` is the union of the geodesics between pairs of points of ``S`` and
the hull is the limit of ``g^t(S)``.  Nothing exact is known about that
limit in general, so :func:`hull_iterate` samples it.  The second half of the
module builds the triangle whose hull contains a ``d``-simplex, together
with exact certificates for every coordinate the construction predicts.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

import numpy as np

from .complex import OrthantPoint, SimplicialComplex, clades_compatible
from .errors import CertificateError, ValidationError
from .geodesic import SupportPair, breakpoints_for, geodesic, verify_support_pair
from .treespace import EquidistantTree, compose

DEFAULT_POINT_CAP = 200
BISECTION_STEPS = 40
RANK_TOL = 1e-8


def _key(p):
    return tuple((r, x if isinstance(x, Fraction) else round(x, 12)) for r, x in p.coords)


def _type(g):
    return tuple(p.support for p in g.breakpoints)


@dataclass
class HullCloud:
    generators: tuple
    complex: SimplicialComplex
    t: int = 0
    points: list = field(default_factory=list)
    round_sizes: list = field(default_factory=list)
    truncated: bool = False

    def by_orthant(self):
        """Points grouped by facet; a point belongs to every facet containing its support."""
        out = {}
        for f in self.complex.facets:
            out[f] = [p for p in self.points if p.support <= f]
        return out

    def ranks(self):
        return {f: affine_rank(pts, sorted(f)) for f, pts in self.by_orthant().items()}

    def nearest(self, target):
        """Distance from ``target`` to the closest cloud point (coordinatewise, Euclidean)."""
        best = float("inf")
        for p in self.points:
            rays = p.support | target.support
            best = min(best, sqrt(sum(float(p[r] - target[r]) ** 2 for r in rays)))
        return best


class _Entry:
    __slots__ = ("point", "source", "index", "vertex")

    def __init__(self, point, source=None, index=None, vertex=False):
        self.point = point
        self.source = source
        self.index = index
        self.vertex = vertex


def _samples(g, resolution):
    """Evenly spaced arclength samples plus every breakpoint of ``g``."""
    params = [Fraction(j, resolution - 1) for j in range(resolution)]
    return params, [g.point_at(t) for t in params], list(g.breakpoints)


def hull_iterate(S, K, t=4, resolution=33, point_cap=DEFAULT_POINT_CAP, seed=0):
    """Sampled ``g^t(S)``.

    Each round joins pairs of current points by geodesics, samples every
    geodesic at ``resolution`` evenly spaced parameters and keeps its
    breakpoints.  Between two consecutive samples of one geodesic the
    combinatorial type of the geodesic to a third point can change; there the
    parameter is bisected and the breakpoints of the limiting geodesics are
    added, since those are the extreme points a uniform grid misses.  When a
    round starts with more than ``point_cap`` points it keeps the generators
    and the newest breakpoints first and fills up with a seeded random subset
    of the newest samples.
    """
    if resolution < 2:
        raise ValidationError("resolution must be at least 2")
    rng = np.random.default_rng(seed)
    cloud = HullCloud(tuple(S), K)
    entries = {}
    for p in S:
        entries.setdefault(_key(p), _Entry(p, vertex=True))
    fresh = list(entries)
    generator_keys = set(entries)
    done = set()
    cloud.round_sizes.append(len(entries))
    for _ in range(t):
        keys = sorted(entries)
        fresh_set = set(fresh)
        if len(keys) > point_cap:
            cloud.truncated = True
            keys = _select(keys, entries, fresh_set, generator_keys, point_cap, rng)
        new = {}
        cache = {}

        def geo(p, q):
            kk = (_key(p), _key(q))
            if kk not in cache:
                cache[kk] = geodesic(p, q, K)
            return cache[kk]

        for i, ki in enumerate(keys):
            for kj in keys[i + 1 :]:
                if (ki, kj) in done or (ki not in fresh_set and kj not in fresh_set):
                    continue
                done.add((ki, kj))
                g = geo(entries[ki].point, entries[kj].point)
                _, pts, bps = _samples(g, resolution)
                for idx, p in enumerate(pts):
                    new.setdefault(_key(p), _Entry(p, g, idx))
                for p in bps:
                    new.setdefault(_key(p), _Entry(p, vertex=True))
        partners = [entries[k].point for k in keys if entries[k].vertex]
        for k in keys:
            if k in fresh_set:
                _refine(entries[k], partners, geo, new, resolution)
        fresh = [k for k in new if k not in entries]
        for k, e in new.items():
            entries.setdefault(k, e)
        cloud.round_sizes.append(len(entries))
        cloud.t += 1
    cloud.points = [entries[k].point for k in sorted(entries)]
    return cloud


def _select(keys, entries, fresh, generators, cap, rng):
    """Generators, then fresh breakpoints, then a random share of fresh samples,
    then older breakpoints, up to ``cap`` points."""
    tiers = [
        [k for k in keys if k in generators],
        [k for k in keys if k in fresh and entries[k].vertex and k not in generators],
    ]
    rest = [k for k in keys if k in fresh and not entries[k].vertex]
    order = rng.permutation(len(rest)) if rest else []
    tiers.append([rest[i] for i in order])
    tiers.append([k for k in keys if k not in fresh and entries[k].vertex and k not in generators])
    out = []
    for tier in tiers:
        out.extend(tier[: cap - len(out)])
    return sorted(out)


def _refine(entry, partners, geo, new, resolution):
    """Bisect between ``entry`` and its successor sample wherever the type of
    the geodesic to a vertex partner changes."""
    if entry.source is None or entry.index + 1 >= resolution:
        return
    src = entry.source
    lo_t = Fraction(entry.index, resolution - 1)
    hi_t = Fraction(entry.index + 1, resolution - 1)
    for r in partners:
        g_lo = geo(src.point_at(lo_t), r)
        g_hi = geo(src.point_at(hi_t), r)
        if _type(g_lo) == _type(g_hi):
            continue
        a, b = lo_t, hi_t
        ta = _type(g_lo)
        for _ in range(BISECTION_STEPS):
            mid = (a + b) / 2
            if _type(geo(src.point_at(mid), r)) == ta:
                a = mid
            else:
                b = mid
        for tt in (a, b):
            for p in geo(src.point_at(tt), r).breakpoints:
                new.setdefault(_key(p), _Entry(p, vertex=True))


def affine_rank(points, rays, tol=RANK_TOL):
    """Affine rank of points restricted to ``rays``; singular values above ``tol`` times the scale count."""
    if len(points) < 2:
        return 0
    X = np.array([[float(p[r]) for r in rays] for p in points])
    X = X - X.mean(axis=0)
    sv = np.linalg.svd(X, compute_uv=False)
    if not len(sv) or sv[0] == 0:
        return 0
    scale = max(sv[0], float(np.abs(X).max()))
    return int((sv > tol * scale).sum())


def hull_dimension_report(cloud):
    """Per-facet affine ranks, their maximum and the rank in the ambient space."""
    if not cloud.points:
        raise ValidationError("empty cloud")
    per = cloud.ranks()
    ambient = affine_rank(cloud.points, list(range(1, cloud.complex.n + 1)))
    return {
        "orthants": {tuple(sorted(f)): r for f, r in per.items()},
        "dimension": max(per.values(), default=0),
        "ambient_rank": ambient,
        "points": len(cloud.points),
        "rounds": list(cloud.round_sizes),
        "truncated": cloud.truncated,
    }


# -- named complexes -----------------------------------------------------------


def geodesic_triangle_example():
    """The 2-dimensional chain of tetrahedra on six rays and its points ``a..o``."""
    K = SimplicialComplex(6, [{1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {4, 5, 6}])
    F = Fraction
    vec = OrthantPoint.from_vector
    pts = {
        "a": vec([4, 6, 6, 0, 0, 0]),
        "b": vec([0, 5, 8, 0, 0, 0]),
        "c": vec([0, 0, 0, 1, 2, 3]),
        "d": vec([0, 0, F(1, 7), F(5, 7), 0, 0]),
        "e": vec([0, 0, 0, F(8, 11), F(1, 11), 0]),
        "f": vec([0, 0, 0, F(14, 25), 0, 0]),
        "h": vec([0, F(14, 19), F(14, 19), 0, 0, 0]),
        "o": vec([0, 0, 0, 0, 0, 0]),
        "x": vec([0, F(11, 13), F(12, 13), 0, 0, 0]),
        "y": vec([0, 0, F(6, 67), F(44, 67), 0, 0]),
    }
    return K, pts


def open_book(pages=3):
    """An open book: page ``k`` is spanned by ray ``k`` and the spine rays ``s+ = pages+1``, ``s- = pages+2``."""
    sp, sm = pages + 1, pages + 2
    facets = [{k, sp} for k in range(1, pages + 1)] + [{k, sm} for k in range(1, pages + 1)]
    return SimplicialComplex(pages + 2, facets)


# -- the high-dimensional triangle ------------------------------------------------


def _v(i):
    return Fraction(i, 2) if i % 2 == 0 else Fraction(7 * (i + 1), 2)


def thm35_complex(d):
    n = 4 * d
    return SimplicialComplex(n, [set(range(i + 1, i + 2 * d + 1)) for i in range(2 * d + 1)])


def predicted_inner(d, i):
    """Coordinates of ``u^i`` predicted in closed form."""
    coords = {}
    for j in range(i + 1, d + 1):
        coords[2 * j - 1] = Fraction(7 * (j - i), 5 * i + 1)
        coords[2 * j] = Fraction(j - i, 5 * i + 1)
    for j in range(1, i):
        coords[2 * d + 2 * j - 1] = coords[2 * d + 2 * j] = Fraction(5 * (i - j), 5 * i + 1)
    return OrthantPoint(tuple(coords.items()))


def predicted_boundary(d, i):
    """Coordinates of the boundary point on ``G(b, u^i)`` predicted in closed form."""
    den = 10 * i - 4
    coords = {}
    for j in range(1, d + 1):
        if j >= i + 1:
            coords[2 * j - 1] = Fraction(7 * j - 2 * i - 5, den)
            coords[2 * j] = Fraction(j + 4 * i - 5, den)
        else:
            coords[2 * j - 1] = coords[2 * j] = Fraction(5 * j - 5, den)
    return OrthantPoint(tuple(coords.items()))


def s_d(d):
    return sum((5 * i + 1) ** 2 for i in range(1, d + 1))


def exact_rank(rows):
    M = [[Fraction(x) for x in row] for row in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c] / M[rank][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def exact_det(rows):
    M = [[Fraction(x) for x in row] for row in rows]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def _exit_point(g, inside):
    """Last vertex of ``g`` before it leaves the orthant spanned by ``inside``."""
    pts = g.vertices()
    last = None
    for p, q in zip(pts, pts[1:]):
        if p.support <= inside:
            last = p
            if not q.support <= inside:
                return p
    if pts[-1].support <= inside:
        return pts[-1]
    return last


@dataclass
class Thm35Instance:
    d: int
    complex: SimplicialComplex
    a: OrthantPoint
    b: OrthantPoint
    c: OrthantPoint
    inner: tuple
    boundary: tuple
    U: tuple
    S: int
    length: float
    det: Fraction
    certificates: dict
    recorded: dict = field(default_factory=dict)

    def ok(self):
        return all(self.certificates.values())


def thm35_instance(d, strict=True):
    """Build the triangle on ``4d`` rays and certify its simplex.

    Certificates: the support pair of ``G(a, c)``, closed forms of the inner
    breakpoints and the boundary points, the singleton support pair of each
    ``G(b, u^i)``, the length ``sqrt(2 S_d)``, ``rank U = d + 1`` and the
    determinant of the square submatrix ``U''``.  The determinant is compared
    with ``4^(d-3) |10d - 34|`` and with ``4^(d-2) |10d - 34|``; the
    construction produces the second, and only that one is enforced with
    ``strict``.
    """
    if d < 2:
        raise ValidationError("need d >= 2")
    K = thm35_complex(d)
    n2 = 2 * d
    a = OrthantPoint(tuple((i, _v(i)) for i in range(1, n2 + 1)))
    b = OrthantPoint(tuple((i, 1) for i in range(1, n2 + 1)))
    c = OrthantPoint(tuple((n2 + i, 1) for i in range(1, n2 + 1)))
    cert = {}
    recorded = {}

    def need(name, ok, detail=""):
        cert[name] = bool(ok)
        if strict and not ok:
            raise CertificateError(name, detail)

    g = geodesic(a, c, K)
    want_A = tuple(frozenset({2 * j - 1, 2 * j}) for j in range(1, d + 1))
    want_B = tuple(frozenset({n2 + 2 * j - 1, n2 + 2 * j}) for j in range(1, d + 1))
    need("support pair of G(a,c)", g.support_pair.A == want_A and g.support_pair.B == want_B,
         f"got {g.support_pair.as_lists()}")
    inner = g.breakpoints
    need("inner breakpoint count", len(inner) == d, f"{len(inner)} breakpoints")
    for i, u in enumerate(inner, start=1):
        need(f"inner nodes u^{i}", u == predicted_inner(d, i), f"u^{i} = {u}")
    S = s_d(d)
    target = sqrt(2 * S)
    need("length of G(a,c)", abs(g.length - target) <= 1e-9 * target, f"{g.length} vs {target}")
    need("sum of segment lengths", abs(sum(g.segment_lengths()) - target) <= 1e-9 * target)

    inside = frozenset(range(1, n2 + 1))
    boundary = []
    for i, u in enumerate(inner, start=1):
        gb = geodesic(b, u, K)
        A = tuple(frozenset({k}) for k in range(1, 2 * i - 1))
        B = tuple(frozenset({n2 + k}) for k in range(1, 2 * i - 1))
        if i > 1:
            # coordinates 2i-1, 2i of u^i vanish, so in sparse form they sit in
            # a last block with empty B instead of among the common rays
            sp = SupportPair(A + (frozenset({2 * i - 1, 2 * i}),), B + (frozenset(),))
            ok, tag = verify_support_pair(sp, b, u, K)
            same = set(breakpoints_for(sp, b, u)) == set(gb.breakpoints)
            need(f"singleton support pair of G(b,u^{i})", ok and same, f"tag {tag}, same path {same}")
        ut = _exit_point(gb, inside)
        boundary.append(ut)
        need(f"boundary nodes ~u^{i}", ut == predicted_boundary(d, i), f"~u^{i} = {ut}")

    U = [[a[k] for k in range(1, n2 + 1)] + [Fraction(1)]]
    for p in boundary:
        U.append([p[k] for k in range(1, n2 + 1)] + [Fraction(1)])
    need("rank U = d+1", exact_rank(U) == d + 1)
    Up = [[x * (10 * i - 4 if i else 1) for x in row] for i, row in enumerate(U)]
    cols = [2 * j - 1 for j in range(1, d + 1)] + [n2]
    Upp = [[row[k] for k in cols] for row in Up]
    det = abs(exact_det(Upp))
    if d >= 3:
        recorded["|det U''| = 4^(d-3)|10d-34|"] = det == Fraction(4) ** (d - 3) * abs(10 * d - 34)
    need("|det U''| = 4^(d-2)|10d-34|", det == Fraction(4) ** (d - 2) * abs(10 * d - 34), f"det {det}")
    return Thm35Instance(d, K, a, b, c, tuple(inner), tuple(boundary), tuple(map(tuple, U)), S,
                         g.length, det, cert, recorded)


# -- caterpillar embedding ------------------------------------------------------------


@dataclass
class CaterpillarEmbedding:
    d: int
    clades: tuple

    @property
    def m(self):
        return 2 * self.d + 2

    def compatibility(self):
        n = len(self.clades)
        return [[i != j and clades_compatible(self.clades[i], self.clades[j]) for j in range(n)] for i in range(n)]

    def is_banded(self):
        band = 2 * self.d
        cm = self.compatibility()
        return all(cm[i][j] == (0 < abs(i - j) < band) for i in range(len(cm)) for j in range(len(cm)))

    def tree(self, p):
        """The equidistant tree of a point whose ray ``k`` carries clade ``k``."""
        return EquidistantTree(self.m, tuple(self.clades[r - 1] for r, _ in p.coords), tuple(x for _, x in p.coords))

    def ultrametric(self, p):
        return compose(self.tree(p))


def caterpillar_clades(d):
    """The ``4d`` clades on ``[2d+2]`` whose induced subfan is the triangle's complex."""
    if d < 2:
        raise ValidationError("need d >= 2")
    first = [frozenset(range(1, k + 1)) for k in range(2, 2 * d + 2)]
    second = [frozenset({1, *range(3, k + 1)}) for k in range(3, 2 * d + 3)]
    return CaterpillarEmbedding(d, tuple(first + second))
