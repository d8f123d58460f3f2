"""Geodesics in orthant spaces of flag complexes.

The support pair is found by successive splitting: start from one block
``(sigma - tau, tau - sigma)`` and split any block whose bipartite
incompatibility graph has a vertex cover of normalized weight below one.
The cover is a minimum cut in the usual source/sink flow network.

Along the geodesic take the parameter ``lam`` in ``[0, 1]`` proportional to
arclength.  Block ``i`` has the switching time
``lam_i = |v_A| / (|v_A| + |w_B|)``; coordinates in ``A_i`` shrink linearly to
zero on ``[0, lam_i]``, coordinates in ``B_i`` grow linearly from zero on
``[lam_i, 1]`` and common coordinates interpolate on the whole interval.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm, sqrt

import networkx as nx

from ._rational import exact_sqrt
from .complex import CladeFan, OrthantPoint, check_point, is_flag
from .errors import NotFlagError

COVER_SLACK = 1e-12
EXHAUSTIVE_P3_LIMIT = 12


@dataclass(frozen=True)
class SupportPair:
    A: tuple
    B: tuple
    a_norms: tuple = ()
    b_norms: tuple = ()

    @property
    def q(self):
        return len(self.A)

    def blocks(self):
        return list(zip(self.A, self.B))

    def as_lists(self):
        return [[sorted(a), sorted(b)] for a, b in zip(self.A, self.B)]


@dataclass(frozen=True)
class Geodesic:
    source: OrthantPoint
    target: OrthantPoint
    support_pair: SupportPair
    common: frozenset
    lambdas: tuple
    breakpoints: tuple
    length: float
    depth: int
    dim: int = field(default=0, repr=False)

    def vertices(self):
        """Endpoints and breakpoints in path order."""
        return (self.source, *self.breakpoints, self.target)

    def point_at(self, t):
        """Point at arclength fraction ``t`` in ``[0, 1]``."""
        return _point_at(self.source, self.target, self.support_pair, self.common, t)

    def segment_lengths(self):
        pts = self.vertices()
        return [euclidean(p, q) for p, q in zip(pts, pts[1:])]


def euclidean(p, q):
    rays = p.support | q.support
    return sqrt(sum(float(p[r] - q[r]) ** 2 for r in rays))


def _norm(point, rays):
    return exact_sqrt(sum((point[r] ** 2 for r in rays), Fraction(0)))


def _ensure_flag(K):
    if isinstance(K, CladeFan):
        return
    cached = getattr(K, "_flag_witness", False)
    if cached is False:
        ok, witness = is_flag(K)
        cached = None if ok else witness
        K._flag_witness = cached
    if cached is not None:
        raise NotFlagError(cached)


def _min_cover(A, B, v, w, K):
    """Minimum-weight vertex cover of the incompatibility graph of one block.

    Returns ``(weight, cover_A, cover_B)`` with ``weight`` an exact Fraction.
    Capacities are scaled to integers so the cut and its value always agree.
    """
    na = sum((Fraction(v[a]) ** 2 for a in A), Fraction(0))
    nb = sum((Fraction(w[b]) ** 2 for b in B), Fraction(0))
    caps = {("a", a): Fraction(v[a]) ** 2 / na for a in A}
    caps.update({("b", b): Fraction(w[b]) ** 2 / nb for b in B})
    scale = lcm(*(c.denominator for c in caps.values()))
    g = nx.DiGraph()
    g.add_node("s")
    g.add_node("t")
    has_edge = False
    for a in A:
        g.add_edge("s", ("a", a), capacity=int(caps["a", a] * scale))
        for b in B:
            if not K.compatible(a, b):
                g.add_edge(("a", a), ("b", b))
                has_edge = True
    for b in B:
        g.add_edge(("b", b), "t", capacity=int(caps["b", b] * scale))
    if not has_edge:
        return Fraction(0), frozenset(), frozenset()
    cut, (src_side, _) = nx.minimum_cut(g, "s", "t")
    cover_a = frozenset(a for a in A if ("a", a) not in src_side)
    cover_b = frozenset(b for b in B if ("b", b) in src_side)
    return Fraction(cut, scale), cover_a, cover_b


def find_support_pair(v, w, K):
    """The coarsest support pair satisfying (P1), (P2') and (P3)."""
    sigma, tau = v.support, w.support
    A0, B0 = sigma - tau, tau - sigma
    if not A0 and not B0:
        A, B = [], []
    elif not A0 or not B0:
        A, B = [A0], [B0]
    else:
        A, B = [A0], [B0]
        i = 0
        while i < len(A):
            if A[i] and B[i]:
                weight, ca, cb = _min_cover(A[i], B[i], v, w, K)
                if weight < 1:
                    a_i, b_i = A[i], B[i]
                    A[i : i + 1] = [ca, a_i - ca]
                    B[i : i + 1] = [b_i - cb, cb]
                    continue
            i += 1
    a_norms = tuple(float(_norm(v, a)) for a in A)
    b_norms = tuple(float(_norm(w, b)) for b in B)
    return SupportPair(tuple(A), tuple(B), a_norms, b_norms)


def _lambda(v, w, a, b):
    if not a:
        return Fraction(0)
    if not b:
        return Fraction(1)
    sa = sum((v[k] ** 2 for k in a), Fraction(0))
    sb = sum((w[k] ** 2 for k in b), Fraction(0))
    # exact whenever |v_A| / |w_B| is rational, even if the norms are not
    ratio = exact_sqrt(sa / sb) if isinstance(sa, Fraction) and isinstance(sb, Fraction) else None
    if isinstance(ratio, Fraction):
        return ratio / (1 + ratio)
    na, nb = _norm(v, a), _norm(w, b)
    return na / (na + nb)


def _point_at(v, w, sp, common, lam):
    lam = lam if isinstance(lam, float) else Fraction(lam)
    coords = {}
    for k in common:
        coords[k] = (1 - lam) * v[k] + lam * w[k]
    for a, b in sp.blocks():
        li = _lambda(v, w, a, b)
        if lam < li:
            for k in a:
                coords[k] = v[k] * (1 - lam / li)
        elif lam > li:
            for k in b:
                coords[k] = w[k] * (lam - li) / (1 - li)
    return OrthantPoint(tuple(coords.items()))


def breakpoints_for(sp, v, w):
    """Breakpoints induced by an arbitrary support pair, in path order."""
    common = v.support & w.support
    out = []
    for a, b in sp.blocks():
        if a and b:
            out.append(_point_at(v, w, sp, common, _lambda(v, w, a, b)))
    return out


def geodesic(v, w, K):
    """The unique geodesic from ``v`` to ``w`` in the orthant space of ``K``."""
    _ensure_flag(K)
    check_point(v, K)
    check_point(w, K)
    sp = find_support_pair(v, w, K)
    common = v.support & w.support
    lambdas, points = [], []
    for a, b in sp.blocks():
        if a and b:
            li = _lambda(v, w, a, b)
            lambdas.append(li)
            points.append(_point_at(v, w, sp, common, li))
    sq = sum(float(v[k] - w[k]) ** 2 for k in common)
    sq += sum((na + nb) ** 2 for na, nb in zip(sp.a_norms, sp.b_norms))
    dim = K.dim
    depth = max((dim - len(p.support) for p in points), default=0)
    return Geodesic(v, w, sp, common, tuple(lambdas), tuple(points), sqrt(sq), depth, dim)


def geodesic_distance(v, w, K):
    return geodesic(v, w, K).length


def depth(g, K=None):
    """Maximal codimension over the breakpoints of ``g``."""
    dim = K.dim if K is not None else g.dim
    return max((dim - len(p.support) for p in g.breakpoints), default=0)


def length_formula(sp, v, w):
    common = v.support & w.support
    sq = sum(float(v[k] - w[k]) ** 2 for k in common)
    for a, b in sp.blocks():
        sq += (float(_norm(v, a)) + float(_norm(w, b))) ** 2
    return sqrt(sq)


def recursive_breakpoints(sp, v, w):
    """Breakpoints ``u^1..u^q`` from the block recursion, starting at ``u^0 = v``.

    Entries are computed from the previous breakpoint rather than from the
    closed-form switching times, which makes this an independent route.
    """
    common = v.support & w.support
    u = v
    out = []
    A, B = sp.A, sp.B
    for i in range(sp.q):
        nu = _norm(u, A[i])
        nw = _norm(w, B[i])
        denom = nu + nw
        coords = {}
        done = set().union(*B[:i]) if i else set()
        for k in done | common:
            coords[k] = (nu * w[k] + nw * u[k]) / denom
        for j in range(i + 1, sp.q):
            nuj = _norm(u, A[j])
            nwj = _norm(w, B[j])
            for ell in A[j]:
                coords[ell] = u[ell] / nuj * (nw * nuj - nu * nwj) / denom
        u = OrthantPoint(tuple((k, x) for k, x in coords.items() if _positive(x)))
        out.append(u)
    return out


def _positive(x):
    return x > 1e-15 if isinstance(x, float) else x > 0


def verify_support_pair(sp, v, w, K):
    """Check shape, (P1), (P2') and (P3). Returns ``(ok, tag)``."""
    sigma, tau = v.support, w.support
    A, B = list(sp.A), list(sp.B)
    if len(A) != len(B):
        return False, "shape"
    if _disjoint_union(A) != sigma - tau or _disjoint_union(B) != tau - sigma:
        return False, "shape"
    if any(not a and not b for a, b in zip(A, B)):
        return False, "shape"
    for i in range(len(A)):
        for j in range(i):
            if not all(K.compatible(x, y) for x in A[i] for y in B[j]):
                return False, "P1"
    na = [float(_norm(v, a)) for a in A]
    nb = [float(_norm(w, b)) for b in B]
    for i in range(len(A) - 1):
        lhs, rhs = na[i] * nb[i + 1], nb[i] * na[i + 1]
        if lhs > rhs * (1 + COVER_SLACK) + COVER_SLACK:
            return False, "P2"
    for a, b in zip(A, B):
        if a and b and _p3_violated(a, b, v, w, K):
            return False, "P3"
    return True, None


def _disjoint_union(parts):
    out = set()
    for p in parts:
        if out & p:
            return None
        out |= p
    return frozenset(out)


def _p3_violated(a, b, v, w, K):
    if len(a) + len(b) > EXHAUSTIVE_P3_LIMIT:
        weight, _, _ = _min_cover(a, b, v, w, K)
        return weight < 1
    a, b = sorted(a), sorted(b)
    va = {x: float(v[x]) ** 2 for x in a}
    wb = {y: float(w[y]) ** 2 for y in b}
    for ka in range(len(a) + 1):
        for L2 in combinations(a, ka):
            for kb in range(len(b) + 1):
                for R1 in combinations(b, kb):
                    if not L2 and not R1 or ka == len(a) and kb == len(b):
                        continue
                    if not all(K.compatible(x, y) for x in L2 for y in R1):
                        continue
                    l2 = sqrt(sum(va[x] for x in L2))
                    l1 = sqrt(sum(va[x] for x in a if x not in L2))
                    r1 = sqrt(sum(wb[y] for y in R1))
                    r2 = sqrt(sum(wb[y] for y in b if y not in R1))
                    if l1 * r2 < l2 * r1 * (1 - COVER_SLACK) - COVER_SLACK:
                        return True
    return False

