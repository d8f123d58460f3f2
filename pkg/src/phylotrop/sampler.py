"""Random equidistant trees: coalescent topology, label shuffle, NNI moves.

The pipeline follows the usual recipe for tree-space depth studies:

1. Kingman coalescent (waiting time ``Exp(C(k, 2))`` with ``k`` lineages).
2. Uniform permutation of the leaf labels.
3. ``m`` nearest-neighbour interchanges on random internal edges.
4. Restore an equidistant tree by reassigning the node heights.
5. Scale to root height 1/2, so the largest leaf distance is 1.

Step 4 keeps the multiset of internal node heights and hands them out in a
linear extension of the new topology, which is the least intrusive way to
make parents strictly older than children.
"""

from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .treespace import EquidistantTree

HEIGHT_DENOMINATOR = 1 << 32


class _Tree:
    """Mutable binary tree: leaves ``0..m-1`` and internal nodes ``m..2m-2``."""

    def __init__(self, m):
        self.m = m
        self.children = {}
        self.parent = {}
        self.height = {k: 0.0 for k in range(m)}
        self.label = list(range(1, m + 1))

    @property
    def root(self):
        return next(k for k in self.children if k not in self.parent)

    def leafset(self, node):
        if node < self.m:
            return frozenset([self.label[node]])
        a, b = self.children[node]
        return self.leafset(a) | self.leafset(b)

    def internal_non_root(self):
        r = self.root
        return sorted(k for k in self.children if k != r)

    def sibling(self, node):
        a, b = self.children[self.parent[node]]
        return b if a == node else a

    def replace_child(self, parent, old, new):
        a, b = self.children[parent]
        self.children[parent] = (new, b) if a == old else (a, new)
        self.parent[new] = parent


def _coalescent(m, rng):
    t = _Tree(m)
    active = list(range(m))
    time = 0.0
    nxt = m
    while len(active) > 1:
        k = len(active)
        time += rng.exponential(1.0 / (k * (k - 1) / 2))
        i, j = sorted(rng.choice(k, size=2, replace=False), reverse=True)
        a, b = active.pop(i), active.pop(j)
        t.children[nxt] = (b, a)
        t.parent[a] = t.parent[b] = nxt
        t.height[nxt] = time
        active.append(nxt)
        nxt += 1
    return t


def _min_label(t, node):
    return min(t.leafset(node))


def _nni(t, node, variant):
    """Swap the sibling of ``node`` with one of ``node``'s children."""
    if node not in t.children or node not in t.parent:
        raise ValidationError("NNI needs an internal, non-root edge")
    kids = sorted(t.children[node], key=lambda k: _min_label(t, k))
    child = kids[variant]
    sib = t.sibling(node)
    p = t.parent[node]
    t.replace_child(p, sib, child)
    t.replace_child(node, child, sib)


def _repair_heights(t):
    """Reassign internal heights so every parent is strictly above its children."""
    key, size = {}, {}

    def visit(node):
        if node < t.m:
            key[node], size[node] = 0.0, 1
            return
        a, b = t.children[node]
        visit(a)
        visit(b)
        key[node] = max(t.height[node], key[a], key[b])
        size[node] = size[a] + size[b]

    visit(t.root)
    internal = list(t.children)
    heights = sorted(t.height[k] for k in internal)
    order = sorted(internal, key=lambda k: (key[k], size[k], k))
    for k, h in zip(order, heights):
        t.height[k] = h


def _to_equidistant(t):
    """Scale to root height 1/2 on a dyadic grid and read off clade lengths."""
    root = t.root
    top = t.height[root]
    q = {}

    def visit(node):
        if node < t.m:
            q[node] = 0
            return
        a, b = t.children[node]
        visit(a)
        visit(b)
        if node == root:
            q[node] = HEIGHT_DENOMINATOR // 2
        else:
            q[node] = int(round(t.height[node] / top * HEIGHT_DENOMINATOR / 2))
        q[node] = max(q[node], q[a] + 1, q[b] + 1)

    visit(root)
    mapping = {}
    for node in t.children:
        if node == root:
            continue
        gap = q[t.parent[node]] - q[node]
        if gap <= 0:
            raise ValidationError("height repair produced a non-positive edge")
        mapping[t.leafset(node)] = Fraction(2 * gap, HEIGHT_DENOMINATOR)
    return EquidistantTree.from_mapping(t.m, mapping)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_tree(m, rng_seed=None):
    """One random normalized equidistant tree on ``m`` leaves."""
    if m < 4:
        raise ValidationError("sample_tree needs m >= 4")
    rng = _rng(rng_seed)
    t = _coalescent(m, rng)
    t.label = [int(x) + 1 for x in rng.permutation(m)]
    for _ in range(m):
        edges = t.internal_non_root()
        node = edges[rng.integers(len(edges))]
        _nni(t, node, int(rng.integers(2)))
    _repair_heights(t)
    return _to_equidistant(t)


def pair_seed(seed, m, index, which):
    """Per-sample seed sequence; both experiment modes consume the same pairs."""
    return np.random.SeedSequence([int(seed), int(m), int(index), int(which)])


def sample_pair(m, seed, index):
    return (
        sample_tree(m, np.random.default_rng(pair_seed(seed, m, index, 0))),
        sample_tree(m, np.random.default_rng(pair_seed(seed, m, index, 1))),
    )


def _from_equidistant(T):
    """Rebuild a mutable tree from a binary EquidistantTree (heights in floats)."""
    if not T.is_binary():
        raise ValidationError("NNI needs a binary tree")
    m = T.m
    _, heights = T.node_heights()
    t = _Tree(m)
    nodes = sorted(T.clades, key=len) + [frozenset(range(1, m + 1))]
    ids = {frozenset([k]): k - 1 for k in range(1, m + 1)}
    for n, c in enumerate(nodes):
        ids[c] = m + n
        t.height[m + n] = float(heights.get(c, Fraction(1, 2)))
    for c in nodes:
        kids = [d for d in ids if d < c and not any(d < e < c for e in nodes)]
        if len(kids) != 2:
            raise ValidationError("NNI needs a binary tree")
        a, b = sorted(kids, key=min)
        t.children[ids[c]] = (ids[a], ids[b])
        t.parent[ids[a]] = t.parent[ids[b]] = ids[c]
    return t, ids


def nni_move(T, edge, variant=None, rng=None):
    """Nearest-neighbour interchange across the internal edge above clade ``edge``.

    ``variant`` 0 or 1 picks which child of the clade (ordered by smallest
    taxon) trades places with the clade's sibling; ``None`` draws it from
    ``rng``.
    """
    edge = frozenset(edge)
    if edge not in T.clades:
        raise ValidationError(f"{sorted(edge)} is not an internal edge of the tree")
    if variant is None:
        variant = int(_rng(rng).integers(2))
    if variant not in (0, 1):
        raise ValidationError("variant must be 0 or 1")
    t, ids = _from_equidistant(T)
    _nni(t, ids[edge], variant)
    _repair_heights(t)
    return _to_equidistant_scaled(t, T)


def _to_equidistant_scaled(t, T):
    root = t.root
    H = Fraction(1, 2)
    _, old = T.node_heights()
    exact = {float(h): h for h in old.values()}
    mapping = {}
    for node in t.children:
        if node == root:
            continue
        hp = H if t.parent[node] == root else exact[t.height[t.parent[node]]]
        mapping[t.leafset(node)] = 2 * (hp - exact[t.height[node]])
    return EquidistantTree.from_mapping(t.m, mapping)
