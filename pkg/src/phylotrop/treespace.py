"""Ultrametrics, equidistant trees and their clade coordinates.

Pairs ``{i, j}`` with ``i < j`` are ordered ``12, 13, ..., 1m, 23, ...``.  A
dissimilarity map on ``[m]`` is a vector in that order; an ultrametric is one
whose every triple attains its maximum at least twice.  Classes are taken
modulo the all-ones vector throughout.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._rational import as_fraction
from .complex import CladeFan, OrthantPoint, clade_key, clades_compatible, make_clade
from .errors import ValidationError


def pairs(m):
    return list(combinations(range(1, m + 1), 2))


def pair_index(i, j, m):
    """0-based position of ``{i, j}`` in pair order."""
    if i > j:
        i, j = j, i
    return (i - 1) * (2 * m - i) // 2 + (j - i - 1)


def taxa_count(e):
    m = 2
    while m * (m - 1) // 2 < e:
        m += 1
    if m * (m - 1) // 2 != e:
        raise ValidationError(f"{e} is not a binomial coefficient m(m-1)/2")
    return m


class PairMap:
    """A dissimilarity vector indexed by unordered pairs of ``[m]``."""

    def __init__(self, m, entries):
        self.m = int(m)
        vals = tuple(as_fraction(x) for x in entries)
        if len(vals) != self.m * (self.m - 1) // 2:
            raise ValidationError(f"expected {self.m * (self.m - 1) // 2} entries for m={self.m}")
        self.entries = vals

    @classmethod
    def from_matrix(cls, matrix):
        m = len(matrix)
        return cls(m, [matrix[i - 1][j - 1] for i, j in pairs(m)])

    def d(self, i, j):
        return self.entries[pair_index(i, j, self.m)]

    def shifted(self, c):
        return type(self)(self.m, [x + c for x in self.entries])

    def __eq__(self, other):
        if not isinstance(other, PairMap) or other.m != self.m:
            return NotImplemented
        diffs = {a - b for a, b in zip(self.entries, other.entries)}
        return len(diffs) <= 1

    def __hash__(self):
        top = max(self.entries, default=0)
        return hash((self.m, tuple(x - top for x in self.entries)))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"{type(self).__name__}({self.m}, ({', '.join(str(x) for x in self.entries)}))"


def ultrametric_violation(entries, m):
    """First triple ``(i, j, k)`` whose maximum is attained only once, or None."""
    for i, j, k in combinations(range(1, m + 1), 3):
        a = entries[pair_index(i, j, m)]
        b = entries[pair_index(i, k, m)]
        c = entries[pair_index(j, k, m)]
        top = max(a, b, c)
        if (a == top) + (b == top) + (c == top) < 2:
            return (i, j, k)
    return None


class Ultrametric(PairMap):
    """A representative of an ultrametric class; validated on construction."""

    def __init__(self, m, entries):
        super().__init__(m, entries)
        if self.m < 2:
            raise ValidationError("need m >= 2")
        bad = ultrametric_violation(self.entries, self.m)
        if bad is not None:
            raise ValidationError(f"not an ultrametric: triple {bad} has a unique maximum")


def is_ultrametric(D, m=None):
    """Return ``(True, None)`` or ``(False, (i, j, k))``."""
    if isinstance(D, PairMap):
        entries, m = D.entries, D.m
    else:
        entries = tuple(as_fraction(x) for x in D)
        m = m or taxa_count(len(entries))
    bad = ultrametric_violation(entries, m)
    return bad is None, bad


def clade_metric(clade, m):
    """``D_sigma``: 0 on pairs inside the clade and 1 elsewhere."""
    return [Fraction(0) if i in clade and j in clade else Fraction(1) for i, j in pairs(m)]


@dataclass(frozen=True)
class EquidistantTree:
    """A nested set of clades with positive lengths (twice the edge lengths)."""

    m: int
    clades: tuple
    lengths: tuple

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError("need m >= 2")
        cl = [make_clade(c, self.m) for c in self.clades]
        ls = [as_fraction(x) for x in self.lengths]
        if len(cl) != len(ls):
            raise ValidationError("clades and lengths differ in length")
        if len(set(cl)) != len(cl):
            raise ValidationError("repeated clade")
        if any(x <= 0 for x in ls):
            raise ValidationError("clade lengths must be positive")
        for s, t in combinations(cl, 2):
            if not clades_compatible(s, t):
                raise ValidationError(f"clades {sorted(s)} and {sorted(t)} are incompatible")
        order = sorted(range(len(cl)), key=lambda k: (len(cl[k]), clade_key(cl[k])))
        object.__setattr__(self, "clades", tuple(cl[k] for k in order))
        object.__setattr__(self, "lengths", tuple(ls[k] for k in order))

    @classmethod
    def from_mapping(cls, m, mapping):
        return cls(m, tuple(mapping), tuple(mapping.values()))

    def as_dict(self):
        return dict(zip(self.clades, self.lengths))

    @property
    def topology(self):
        return frozenset(self.clades)

    def is_binary(self):
        return len(self.clades) == self.m - 2

    def chain_sum(self, leaf):
        return sum((x for c, x in zip(self.clades, self.lengths) if leaf in c), Fraction(0))

    def max_chain_sum(self):
        return max(self.chain_sum(i) for i in range(1, self.m + 1))

    def in_compact_space(self):
        """Every chain of clades has total length at most one."""
        return self.max_chain_sum() <= 1

    def ultrametric(self):
        return compose(self)

    def u1_representative(self):
        """``d_ij = 1 - sum of lengths of clades containing i and j``."""
        vals = []
        for i, j in pairs(self.m):
            inside = (x for c, x in zip(self.clades, self.lengths) if i in c and j in c)
            vals.append(1 - sum(inside, Fraction(0)))
        return Ultrametric(self.m, vals)

    def node_heights(self, root_height=None):
        """Height of each clade node and of the root, for a given root height."""
        H = Fraction(1, 2) if root_height is None else as_fraction(root_height)
        out = {}
        for c in self.clades:
            out[c] = H - sum((x for d, x in zip(self.clades, self.lengths) if c <= d), Fraction(0)) / 2
        return H, out

    def __repr__(self):
        inner = ", ".join(f"{sorted(c)}: {x}" for c, x in zip(self.clades, self.lengths))
        return f"EquidistantTree(m={self.m}, {{{inner}}})"


def _ball_clades(D):
    m = D.m
    found = set()
    for i, j in pairs(m):
        r = D.d(i, j)
        ball = frozenset([i] + [k for k in range(1, m + 1) if k != i and D.d(i, k) <= r])
        if len(ball) < m:
            found.add(ball)
    return found


def edge_length(D, clade):
    inside = [D.d(r, s) for r, s in combinations(sorted(clade), 2)]
    outside = [D.d(r, t) for r in clade for t in range(1, D.m + 1) if t not in clade]
    return min(outside) - max(inside)


def decompose(D):
    """Clades and lengths of the tree of an ultrametric class."""
    if not isinstance(D, Ultrametric):
        D = Ultrametric(D.m, D.entries) if isinstance(D, PairMap) else Ultrametric(taxa_count(len(D)), D)
    mapping = {}
    for c in _ball_clades(D):
        x = edge_length(D, c)
        if x > 0:
            mapping[c] = x
    return EquidistantTree.from_mapping(D.m, mapping)


def compose(T):
    """The representative ``sum_i l_i D_{sigma_i}``."""
    vals = [Fraction(0)] * (T.m * (T.m - 1) // 2)
    for c, x in zip(T.clades, T.lengths):
        for k, y in enumerate(clade_metric(c, T.m)):
            vals[k] += x * y
    return Ultrametric(T.m, vals)


def normalize_u1(D):
    """Scale a nonnegative representative so that its largest entry is 1."""
    if not isinstance(D, PairMap):
        D = PairMap(taxa_count(len(D)), D)
    if len(set(D.entries)) <= 1:
        raise ValidationError("the zero class cannot be normalized")
    if min(D.entries) < 0:
        raise ValidationError("representative has negative entries; it is not a dissimilarity")
    top = max(D.entries)
    return Ultrametric(D.m, [x / top for x in D.entries])


def to_orthant_point(D, fan=None):
    """Clade coordinates of ``D`` (an Ultrametric or EquidistantTree) in ``fan``.

    Without a fan the point is expressed in the fan spanned by the tree's own
    clades; pass a shared fan to compare several trees.
    """
    T = D if isinstance(D, EquidistantTree) else decompose(D)
    if fan is None:
        fan = CladeFan(T.m, T.clades)
    return OrthantPoint(tuple((fan.index(c), x) for c, x in zip(T.clades, T.lengths))), fan


def from_orthant_point(p, fan):
    T = EquidistantTree(fan.m, tuple(fan.clade(r) for r, _ in p.coords), tuple(x for _, x in p.coords))
    return compose(T)


def tree_from_point(p, fan):
    return EquidistantTree(fan.m, tuple(fan.clade(r) for r, _ in p.coords), tuple(x for _, x in p.coords))


def local_fan(*trees):
    """The clade fan restricted to the union of the trees' clades."""
    m = trees[0].m
    if any(t.m != m for t in trees):
        raise ValidationError("trees have different taxa counts")
    clades = set()
    for t in trees:
        clades.update(t.clades)
    return CladeFan(m, clades)


def bhv_geodesic(t1, t2, fan=None):
    """BHV geodesic between two equidistant trees; returns ``(geodesic, fan)``.

    Only the clades of the two endpoints can appear along the geodesic, so the
    fan restricted to those clades gives the same path as the full clade fan.
    """
    from .geodesic import geodesic

    if isinstance(t1, PairMap):
        t1 = decompose(t1)
    if isinstance(t2, PairMap):
        t2 = decompose(t2)
    fan = fan or local_fan(t1, t2)
    v, _ = to_orthant_point(t1, fan)
    w, _ = to_orthant_point(t2, fan)
    return geodesic(v, w, fan), fan


def subdominant_ultrametric(u, m=None):
    """Largest ultrametric below ``u``: minimax path weights (single linkage)."""
    if isinstance(u, PairMap):
        entries, m = u.entries, u.m
    else:
        entries = tuple(as_fraction(x) for x in u)
        m = m or taxa_count(len(entries))
    parent = list(range(m + 1))
    members = {i: [i] for i in range(1, m + 1)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = [None] * len(entries)
    plist = pairs(m)
    for k in sorted(range(len(entries)), key=lambda k: entries[k]):
        i, j = plist[k]
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        for a in members[ri]:
            for b in members[rj]:
                out[pair_index(a, b, m)] = entries[k]
        parent[rj] = ri
        members[ri].extend(members.pop(rj))
    return Ultrametric(m, out)

