"""Simplicial complexes, orthant-space points and clade combinatorics.

Rays are the integers ``1..n``.  A face is a ``frozenset`` of rays.  The
complexes used by the geodesic code are flag, so most queries reduce to the
pairwise relation :meth:`SimplicialComplex.compatible`.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod, sqrt

import networkx as nx

from ._rational import as_fraction
from .errors import ResourceError, ValidationError

DEFAULT_NESTED_SET_CAP = 2_000_000
DEFAULT_RAY_CAP = 1 << 16


class SimplicialComplex:
    """A simplicial complex on ``[n]`` given by its facets.

    Facets that are contained in other facets are dropped, so the stored
    family is always an antichain.
    """

    def __init__(self, n, facets, dim=None):
        self.n = int(n)
        fs = {frozenset(int(i) for i in f) for f in facets}
        for f in fs:
            if any(i < 1 or i > self.n for i in f):
                raise ValidationError(f"facet {sorted(f)} is not a subset of [1..{self.n}]")
        self._facets = frozenset(f for f in fs if f and not any(f < g for g in fs))
        self._adj = {i: set() for i in range(1, self.n + 1)}
        for f in self._facets:
            for i, j in combinations(f, 2):
                self._adj[i].add(j)
                self._adj[j].add(i)
        self._dim = dim

    @property
    def facets(self):
        return self._facets

    @property
    def dim(self):
        """Size of the largest facet, i.e. the dimension of the orthant space."""
        if self._dim is None:
            self._dim = max((len(f) for f in self.facets), default=0)
        return self._dim

    def vertices(self):
        return range(1, self.n + 1)

    def edges(self):
        return {frozenset((i, j)) for i in self._adj for j in self._adj[i] if i < j}

    def compatible(self, i, j):
        return i == j or j in self._adj[i]

    def is_face(self, face):
        face = frozenset(face)
        if not face:
            return True
        return any(face <= f for f in self.facets)

    @classmethod
    def flag_from_edges(cls, n, edges, dim=None):
        """The clique complex of a graph on ``[n]``."""
        g = nx.Graph()
        g.add_nodes_from(range(1, n + 1))
        g.add_edges_from(tuple(e) for e in edges)
        return cls(n, [frozenset(c) for c in nx.find_cliques(g)], dim=dim)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, facets={len(self.facets)}, dim={self.dim})"


def is_flag(K):
    """Return ``(True, None)`` or ``(False, witness)`` with a minimal non-face of size >= 3."""
    g = nx.Graph()
    g.add_nodes_from(K.vertices())
    g.add_edges_from(tuple(e) for e in K.edges())
    for clique in nx.find_cliques(g):
        face = set(clique)
        if K.is_face(face):
            continue
        for v in sorted(clique):
            if len(face) > 3 and not K.is_face(face - {v}):
                face.discard(v)
        return False, frozenset(face)
    return True, None


@dataclass(frozen=True)
class OrthantPoint:
    """A point ``sum coords[i] e_i`` of an orthant space, stored sparsely.

    ``coords`` is a sorted tuple of ``(ray, value)`` with every value > 0.
    Values are Fractions except where a geodesic produced an irrational
    coordinate, in which case they are floats.
    """

    coords: tuple = ()

    def __post_init__(self):
        items = []
        for ray, val in sorted(dict(self.coords).items()):
            if not isinstance(val, float):
                val = as_fraction(val)
            if val < 0:
                raise ValidationError(f"negative coordinate {val} on ray {ray}")
            if val != 0:
                items.append((int(ray), val))
        object.__setattr__(self, "coords", tuple(items))

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple(mapping.items()))

    @classmethod
    def from_vector(cls, vec):
        """Dense vector whose position ``k`` (0-based) is ray ``k+1``."""
        return cls(tuple((k + 1, x) for k, x in enumerate(vec)))

    @property
    def support(self):
        return frozenset(r for r, _ in self.coords)

    def __getitem__(self, ray):
        for r, val in self.coords:
            if r == ray:
                return val
        return Fraction(0)

    def as_dict(self):
        return dict(self.coords)

    def as_vector(self, n):
        vec = [Fraction(0)] * n
        for r, val in self.coords:
            vec[r - 1] = val
        return vec

    def is_origin(self):
        return not self.coords

    def __repr__(self):
        inner = ", ".join(f"{r}: {v}" for r, v in self.coords)
        return f"OrthantPoint({{{inner}}})"


def squared_projection_length(v, face):
    return sum((v[i] ** 2 for i in face), Fraction(0))


def projection_length(v, face):
    """Euclidean length of the projection of ``v`` onto the orthant of ``face``."""
    return sqrt(squared_projection_length(v, face))


def check_point(v, K):
    if not K.is_face(v.support):
        raise ValidationError(f"support {sorted(v.support)} is not a face of the complex")


# -- clades -----------------------------------------------------------------


def make_clade(taxa, m):
    clade = frozenset(int(t) for t in taxa)
    if not 2 <= len(clade) <= m - 1 or min(clade) < 1 or max(clade) > m:
        raise ValidationError(f"{sorted(clade)} is not a clade on [1..{m}]")
    return clade


def clade_key(clade):
    return tuple(sorted(clade))


def clades_compatible(s, t):
    """Nested or disjoint."""
    return s <= t or t <= s or not (s & t)


def double_factorial_odd(m):
    """(2m-3)!!, the number of rooted binary trees on m labelled leaves."""
    return prod(range(1, 2 * m - 2, 2))


def enumerate_maximal_nested_sets(m, cap=DEFAULT_NESTED_SET_CAP):
    """All maximal nested sets of clades on ``[m]`` (rooted binary topologies).

    Trees are grown by inserting each new leaf above every node of every tree
    on the previous leaves.  Clusters are bitmasks while growing.
    """
    if m < 3:
        raise ValidationError("need m >= 3")
    total = double_factorial_odd(m)
    if total > cap:
        raise ResourceError(f"(2m-3)!! = {total} nested sets for m={m} exceeds the cap {cap}")
    trees = [(0b1, 0b10, 0b11)]
    for k in range(3, m + 1):
        bit = 1 << (k - 1)
        grown = []
        for clusters in trees:
            for s in clusters:
                # new leaf becomes the sibling of s; only strict ancestors grow
                new = [c | bit if c & s == s and c != s else c for c in clusters]
                new.append(s | bit)
                new.append(bit)
                grown.append(tuple(new))
        trees = grown
    full = (1 << m) - 1
    out = []
    for clusters in trees:
        nested = sorted(
            (_mask_to_set(c) for c in set(clusters) if c != full and c & (c - 1)),
            key=lambda c: (len(c), clade_key(c)),
        )
        out.append(tuple(nested))
    return out


def _mask_to_set(mask):
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def all_clades(m):
    """Every clade on ``[m]`` in lexicographic order of sorted taxa."""
    out = []
    for size in range(2, m):
        out.extend(frozenset(c) for c in combinations(range(1, m + 1), size))
    out.sort(key=clade_key)
    return out


class CladeFan(SimplicialComplex):
    """The flag complex of nested sets of clades on ``[m]``.

    With ``clades=None`` every clade is a ray (``2^m - m - 2`` of them) and the
    facets are the maximal nested sets.  Passing a clade list restricts the
    fan to those rays, which is how tree geodesics stay small for large ``m``;
    the orthant dimension stays ``m - 2`` either way.  Facets are only
    materialized on request.
    """

    def __init__(self, m, clades=None, max_rays=DEFAULT_RAY_CAP):
        if m < 3:
            raise ValidationError("need m >= 3")
        self.m = m
        if clades is None:
            count = 2**m - m - 2
            if count > max_rays:
                raise ResourceError(f"{count} clade rays for m={m} exceeds the cap {max_rays}")
            self.clades = all_clades(m)
            self._full = True
        else:
            self.clades = sorted({make_clade(c, m) for c in clades}, key=clade_key)
            self._full = False
        self.n = len(self.clades)
        self._index = {c: i + 1 for i, c in enumerate(self.clades)}
        self._dim = m - 2
        self._facets = None

    @property
    def facets(self):
        if self._facets is None:
            if self._full:
                self._facets = frozenset(
                    frozenset(self._index[c] for c in ns)
                    for ns in enumerate_maximal_nested_sets(self.m)
                )
            else:
                g = nx.Graph()
                g.add_nodes_from(range(1, self.n + 1))
                g.add_edges_from(
                    (i, j)
                    for i, j in combinations(range(1, self.n + 1), 2)
                    if self.compatible(i, j)
                )
                self._facets = frozenset(frozenset(c) for c in nx.find_cliques(g))
        return self._facets

    def index(self, clade):
        try:
            return self._index[frozenset(clade)]
        except KeyError:
            raise ValidationError(f"{sorted(clade)} is not a ray of this fan") from None

    def clade(self, ray):
        return self.clades[ray - 1]

    def compatible(self, i, j):
        return clades_compatible(self.clades[i - 1], self.clades[j - 1])

    def is_face(self, face):
        return all(self.compatible(i, j) for i, j in combinations(face, 2))

    def edges(self):
        return {
            frozenset((i, j))
            for i, j in combinations(range(1, self.n + 1), 2)
            if self.compatible(i, j)
        }

    def __repr__(self):
        return f"CladeFan(m={self.m}, n={self.n})"


def clade_fan(m, max_rays=DEFAULT_RAY_CAP):
    return CladeFan(m, max_rays=max_rays)
