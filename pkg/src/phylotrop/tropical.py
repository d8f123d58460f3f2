"""Max-plus convexity on ``R^e / R 1``.

Addition is ``max`` and multiplication is ``+``.  Points are stored as exact
rational representatives; equality and hashing ignore the all-ones shift.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm

from ._rational import as_fraction
from .errors import ValidationError
from .treespace import Ultrametric, pair_index, taxa_count

NEG_INF = float("-inf")


class TropicalPoint:
    """A representative of a point of ``R^e / R 1``."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(as_fraction(x) for x in coords)
        if not self.coords:
            raise ValidationError("a tropical point needs at least one coordinate")

    @property
    def e(self):
        return len(self.coords)

    def canonical(self):
        """The representative with largest coordinate 0."""
        top = max(self.coords)
        return TropicalPoint([x - top for x in self.coords])

    def normalized(self, top=1):
        """The representative with largest coordinate ``top``."""
        shift = as_fraction(top) - max(self.coords)
        return TropicalPoint([x + shift for x in self.coords])

    def __add__(self, c):
        return TropicalPoint([x + as_fraction(c) for x in self.coords])

    def __eq__(self, other):
        if isinstance(other, TropicalPoint):
            other = other.coords
        other = tuple(other)
        if len(other) != len(self.coords):
            return False
        return len({a - as_fraction(b) for a, b in zip(self.coords, other)}) <= 1

    def __hash__(self):
        return hash(self.canonical().coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __repr__(self):
        return f"TropicalPoint(({', '.join(str(x) for x in self.coords)}))"


def _coords(p):
    if isinstance(p, TropicalPoint):
        return p.coords
    return tuple(as_fraction(x) for x in p)


def _same_length(u, v):
    if len(u) != len(v):
        raise ValidationError(f"dimension mismatch: {len(u)} vs {len(v)}")


def trop_distance(v, w):
    """``max(v - w) - min(v - w)``."""
    v, w = _coords(v), _coords(w)
    _same_length(v, w)
    diff = [a - b for a, b in zip(v, w)]
    return max(diff) - min(diff)


def trop_sum(*points):
    """Coordinatewise maximum of representatives."""
    cs = [_coords(p) for p in points]
    for c in cs[1:]:
        _same_length(cs[0], c)
    return TropicalPoint([max(col) for col in zip(*cs)])


def trop_scale(lam, v):
    """``lam (.) v``, i.e. ``v + lam``."""
    return TropicalPoint([x + as_fraction(lam) for x in _coords(v)])


@dataclass(frozen=True)
class TropicalSegment:
    """``tconv(u, v)`` as a polyline from ``u`` to ``v``.

    ``breakpoints`` includes both endpoints.  Consecutive points differ by a
    multiple of a 0/1 vector.
    """

    start: TropicalPoint
    end: TropicalPoint
    breakpoints: tuple
    parameters: tuple

    @property
    def pieces(self):
        return len(self.breakpoints) - 1

    def point_at(self, t):
        """``max(u, t + v)`` for ``t`` between the first and last parameter."""
        t = as_fraction(t)
        return TropicalPoint([max(a, t + b) for a, b in zip(self.start, self.end)])

    def length(self):
        return trop_distance(self.start, self.end)


def trop_segment(u, v):
    """The tropical segment from ``u`` to ``v``.

    Its points are ``max(u, t + v)``; the breakpoints sit at the sorted
    distinct values ``t`` of ``u - v``.
    """
    u, v = _coords(u), _coords(v)
    _same_length(u, v)
    ts = sorted(set(a - b for a, b in zip(u, v)))
    pts = tuple(TropicalPoint([max(a, t + b) for a, b in zip(u, v)]) for t in ts)
    return TropicalSegment(TropicalPoint(u), TropicalPoint(v), pts, tuple(ts))


def trop_project_polytope(D, generators):
    """Nearest point of ``tconv(generators)`` to ``D``: ``max_k (lam_k + V^k)``."""
    D = _coords(D)
    gens = [_coords(g) for g in generators]
    if not gens:
        raise ValidationError("need at least one generator")
    best = None
    for g in gens:
        _same_length(D, g)
        lam = min(a - b for a, b in zip(D, g))
        cand = [lam + b for b in g]
        best = cand if best is None else [max(x, y) for x, y in zip(best, cand)]
    return TropicalPoint(best)


def in_tropical_polytope(D, generators):
    return trop_project_polytope(D, generators) == TropicalPoint(D)


def trop_membership(D, m=None):
    """Is ``D`` in ``Trop(L_m)``: every triple attains its maximum twice."""
    c = _coords(D)
    m = m or taxa_count(len(c))
    for i, j, k in combinations(range(1, m + 1), 3):
        a, b, d = c[pair_index(i, j, m)], c[pair_index(i, k, m)], c[pair_index(j, k, m)]
        top = max(a, b, d)
        if (a == top) + (b == top) + (d == top) < 2:
            return False
    return True


# -- Pluecker vectors and the Blue Rule -------------------------------------------


class PluckerVector:
    """Tropical Pluecker coordinates ``w_sigma`` for ``sigma`` in ``C([e], r)``.

    Subsets are frozensets of ``1..e``; absent subsets carry ``-inf``.
    """

    def __init__(self, r, e, weights):
        self.r, self.e = int(r), int(e)
        w = {}
        for s, x in dict(weights).items():
            s = frozenset(int(i) for i in s)
            if len(s) != self.r or min(s) < 1 or max(s) > self.e:
                raise ValidationError(f"{sorted(s)} is not an {self.r}-subset of [1..{self.e}]")
            if x != NEG_INF:
                w[s] = as_fraction(x)
        if not w:
            raise ValidationError("all Pluecker coordinates are -inf")
        self.weights = w

    def __getitem__(self, s):
        return self.weights.get(frozenset(s), NEG_INF)

    @classmethod
    def uniform(cls, r, e):
        return cls(r, e, {frozenset(s): 0 for s in combinations(range(1, e + 1), r)})

    @classmethod
    def from_bases(cls, r, e, bases):
        return cls(r, e, {frozenset(b): 0 for b in bases})

    @classmethod
    def graphic(cls, m):
        """Graphic matroid of ``K_m``; ground set = pairs in pair order."""
        from .treespace import pairs

        edges = pairs(m)
        bases = []
        for sub in combinations(range(len(edges)), m - 1):
            if _is_spanning_tree([edges[k] for k in sub], m):
                bases.append(frozenset(k + 1 for k in sub))
        return cls.from_bases(m - 1, len(edges), bases)

    def three_term_violations(self, limit=None):
        """Subsets ``S`` and ``{a,b,c,d}`` where the three-term relation fails.

        For ``|S| = r - 2`` the maximum of ``w_Sab + w_Scd``, ``w_Sac + w_Sbd``
        and ``w_Sad + w_Sbc`` must be attained twice.
        """
        bad = []
        ground = range(1, self.e + 1)
        for S in combinations(ground, self.r - 2):
            rest = [x for x in ground if x not in S]
            S = frozenset(S)
            for a, b, c, d in combinations(rest, 4):
                terms = [
                    self[S | {a, b}] + self[S | {c, d}],
                    self[S | {a, c}] + self[S | {b, d}],
                    self[S | {a, d}] + self[S | {b, c}],
                ]
                top = max(terms)
                if top != NEG_INF and terms.count(top) < 2:
                    bad.append((S, (a, b, c, d)))
                    if limit and len(bad) >= limit:
                        return bad
        return bad


def _is_spanning_tree(edges, m):
    parent = list(range(m + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def blue_rule_project(u, w):
    """Nearest point of the tropical linear space ``L_w`` to ``u``.

    Coordinate ``i`` is the maximum over ``(r-1)``-sets ``tau`` not containing
    ``i`` of ``min_{j not in tau} (u_j + w_{tau+i} - w_{tau+j})``.  Only sets
    ``tau`` with ``w_{tau+i}`` finite contribute, and ``j`` with
    ``w_{tau+j} = -inf`` drop out of the minimum.  The returned
    representative is dominated by ``u``.
    """
    u = _coords(u)
    if len(u) != w.e:
        raise ValidationError(f"point has {len(u)} coordinates, Pluecker vector has e={w.e}")
    taus = {s - {x} for s in w.weights for x in s}
    best = [None] * w.e
    for tau in taus:
        m_tau = None
        for j in range(1, w.e + 1):
            if j in tau:
                continue
            wj = w.weights.get(tau | {j})
            if wj is None:
                continue
            val = u[j - 1] - wj
            if m_tau is None or val < m_tau:
                m_tau = val
        for i in range(1, w.e + 1):
            if i in tau:
                continue
            wi = w.weights.get(tau | {i})
            if wi is None:
                continue
            cand = wi + m_tau
            if best[i - 1] is None or cand > best[i - 1]:
                best[i - 1] = cand
    if any(b is None for b in best):
        loops = [i + 1 for i, b in enumerate(best) if b is None]
        raise ValidationError(f"degenerate Pluecker vector: coordinates {loops} lie in no finite w_sigma")
    return TropicalPoint(best)


def blue_rule_direct(u, w):
    """Literal evaluation of the Blue Rule over every ``(r-1)``-subset."""
    u = _coords(u)
    out = []
    for i in range(1, w.e + 1):
        best = None
        others = [x for x in range(1, w.e + 1) if x != i]
        for tau in combinations(others, w.r - 1):
            tau = frozenset(tau)
            wi = w[tau | {i}]
            if wi == NEG_INF:
                continue
            terms = [u[j - 1] + wi - w[tau | {j}] for j in range(1, w.e + 1) if j not in tau and w[tau | {j}] != NEG_INF]
            val = min(terms)
            best = val if best is None or val > best else best
        if best is None:
            raise ValidationError(f"degenerate Pluecker vector at coordinate {i}")
        out.append(best)
    return TropicalPoint(out)


def tropical_determinant(X):
    """``max over permutations pi of sum_i x_{i, pi(i)}``.

    Small matrices are enumerated; larger ones go through an assignment
    solver and the winning permutation is re-summed exactly.
    """
    X = [[as_fraction(x) if x != NEG_INF else NEG_INF for x in row] for row in X]
    r = len(X)
    if any(len(row) != r for row in X):
        raise ValidationError("tropical determinant needs a square matrix")
    if r == 0:
        return Fraction(0)
    if r <= 8:
        return max(sum(X[i][p[i]] for i in range(r)) for p in permutations(range(r)))
    import numpy as np
    from scipy.optimize import linear_sum_assignment

    finite = [x for row in X for x in row if x != NEG_INF]
    low = float(min(finite)) - 1.0 - sum(abs(float(x)) for x in finite)
    cost = np.array([[float(x) if x != NEG_INF else low for x in row] for row in X])
    rows, cols = linear_sum_assignment(cost, maximize=True)
    return sum(X[i][j] for i, j in zip(rows, cols))


def stiefel_plucker(X):
    """Pluecker vector of the tropical linear space spanned by the rows of ``X``."""
    r, e = len(X), len(X[0])
    if r > e:
        raise ValidationError("need r <= e")
    w = {}
    for cols in combinations(range(e), r):
        w[frozenset(c + 1 for c in cols)] = tropical_determinant([[row[c] for c in cols] for row in X])
    return PluckerVector(r, e, w)


def uniform_closed_form(u, r):
    """The ``e - r`` largest coordinates of ``u`` replaced by its ``r``-th smallest."""
    u = _coords(u)
    order = sorted(range(len(u)), key=lambda k: u[k])
    cap = u[order[r - 1]]
    return TropicalPoint([min(x, cap) for x in u])


# -- depth of tropical segments in the clade fan ------------------------------


def clade_count(entries, m):
    """Number of clade nodes of an ultrametric given as pair-order entries.

    Internal nodes appear as merges in single linkage; pairs sharing a value
    are merged together, and each component that grows at that value is one
    node.  The root is not a clade.
    """
    order = sorted(range(len(entries)), key=entries.__getitem__)
    parent = list(range(m + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    idx = _pair_list(m)
    nodes = 0
    k = 0
    n = len(order)
    while k < n:
        val = entries[order[k]]
        grown = set()
        while k < n and entries[order[k]] == val:
            i, j = idx[order[k]]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
                grown.add(rj)
            k += 1
        nodes += len({find(x) for x in grown})
    return nodes - 1


_PAIRS = {}


def _pair_list(m):
    if m not in _PAIRS:
        _PAIRS[m] = list(combinations(range(1, m + 1), 2))
    return _PAIRS[m]


def segment_depth(u, v, m=None):
    """Largest codimension in the clade fan met by ``tconv(u, v)``.

    The topology of ``max(u, t + v)`` only changes where two coordinates
    meet, so the maximum is taken over every kink ``t = u_k - v_k``, every
    crossing ``t = u_k - v_l`` inside its valid range, and one point inside
    each interval between consecutive critical values.
    Returns ``(depth, t)`` with ``t`` a parameter where it is attained.
    """
    u, v = _coords(u), _coords(v)
    _same_length(u, v)
    m = m or taxa_count(len(u))
    scale = 2 * lcm(*(x.denominator for x in u + v))
    U = [int(x * scale) for x in u]
    V = [int(x * scale) for x in v]
    C = [a - b for a, b in zip(U, V)]
    lo, hi = min(C), max(C)
    crit = set(C)
    for k in range(len(U)):
        for ell in range(len(U)):
            t = U[k] - V[ell]
            if C[ell] < t < C[k]:
                crit.add(t)
    crit = sorted(crit)
    samples = list(crit)
    samples += [(a + b) // 2 for a, b in zip(crit, crit[1:]) if b - a > 1]
    dim = m - 2
    best, where = -1, None
    for t in sorted(samples):
        if not lo <= t <= hi:
            continue
        row = [max(a, t + b) for a, b in zip(U, V)]
        codim = dim - clade_count(row, m)
        if codim > best:
            best, where = codim, Fraction(t, scale)
    return best, where


def segment_topologies(u, v, m=None):
    """Distinct tree topologies seen along the segment, in order."""
    from .treespace import decompose

    seg = trop_segment(u, v)
    out = []
    for p in seg.breakpoints:
        top = decompose(Ultrametric(m or taxa_count(p.e), p.coords)).topology
        if not out or out[-1] != top:
            out.append(top)
    return out
