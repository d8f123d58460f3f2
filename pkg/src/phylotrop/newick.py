"""Newick reading and writing for equidistant trees.

Leaves are labelled ``1..m`` (or mapped through a taxa list).  Branch lengths
may be decimals or ``p/q`` rationals and are read exactly.  Internal branch
lengths become clade lengths ``l = 2 * length``.
"""

import re
from fractions import Fraction

from .errors import ParseError, ValidationError
from .treespace import EquidistantTree

EQUIDISTANCE_TOL = 1e-9

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?")
_LABEL = re.compile(r"[^\s(),:;\[\]]+")


class _Node:
    __slots__ = ("children", "label", "length", "offset")

    def __init__(self, offset):
        self.children = []
        self.label = None
        self.length = None
        self.offset = offset


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, chars, what):
        c = self.peek()
        if c == "" or c not in chars:
            found = repr(c) if c else "end of input"
            raise ParseError(f"expected {what}, found {found}", self.pos)
        self.pos += 1
        return c

    def subtree(self):
        node = _Node(self.pos)
        if self.peek() == "(":
            self.pos += 1
            node.children.append(self.subtree())
            while self.expect(",)", "',' or ')'") == ",":
                node.children.append(self.subtree())
            mt = _LABEL.match(self.text, self.pos)
            if mt:
                node.label = mt.group()
                self.pos = mt.end()
        else:
            self.skip()
            mt = _LABEL.match(self.text, self.pos)
            if not mt:
                raise ParseError("expected a leaf label or '('", self.pos)
            node.label = mt.group()
            self.pos = mt.end()
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            mt = _NUMBER.match(self.text, self.pos)
            if not mt:
                raise ParseError("expected a branch length", self.pos)
            node.length = Fraction(mt.group())
            self.pos = mt.end()
        return node

    def tree(self):
        root = self.subtree()
        self.expect(";", "';'")
        if self.peek():
            raise ParseError("trailing characters after ';'", self.pos)
        return root


def parse_newick(text, taxa=None):
    """Parse one equidistant Newick tree into clades and lengths."""
    root = _Parser(text).tree()
    index = {str(t): k + 1 for k, t in enumerate(taxa)} if taxa is not None else None
    leaves = {}
    depths = {}
    internal = []

    def walk(node, depth):
        if not node.children:
            if node.length is None:
                raise ValidationError(f"leaf {node.label} has no branch length")
            label = node.label
            key = index.get(label) if index is not None else _int_label(label, node.offset)
            if key is None:
                raise ValidationError(f"unknown taxon {label}")
            if key in leaves:
                raise ValidationError(f"taxon {label} appears twice")
            leaves[key] = node
            depths[key] = depth + node.length
            return frozenset([key])
        if len(node.children) < 2:
            raise ValidationError(f"internal node at offset {node.offset} has one child")
        here = depth + (node.length or 0) if node is not root else depth
        below = frozenset().union(*(walk(c, here) for c in node.children))
        if node is not root:
            if node.length is None:
                raise ValidationError(f"internal node at offset {node.offset} has no branch length")
            internal.append((below, node.length))
        return below

    taxa_set = walk(root, Fraction(0))
    m = len(taxa_set)
    if taxa_set != frozenset(range(1, m + 1)):
        raise ValidationError(f"leaf labels must be 1..{m}, got {sorted(taxa_set)}")
    lo, hi = min(depths.values()), max(depths.values())
    if hi - lo > EQUIDISTANCE_TOL:
        listing = ", ".join(f"{k}: {float(depths[k])}" for k in sorted(depths))
        raise ValidationError(f"tree is not equidistant; leaf depths {{{listing}}}")
    mapping = {c: 2 * x for c, x in internal if x > 0}
    return EquidistantTree.from_mapping(m, mapping)


def _int_label(label, offset):
    if not label.isdigit():
        raise ParseError(f"leaf label {label!r} is not a positive integer", offset)
    return int(label)


def format_length(x):
    """Exact decimal when the denominator allows it, ``p/q`` otherwise."""
    x = Fraction(x)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    if places == 0:
        return str(x.numerator)
    scaled = x * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")


def emit_newick(T, taxa=None):
    """Canonical Newick text; children ordered by smallest taxon.

    The root sits at height ``max(1/2, longest chain / 2)`` so that every
    branch length is nonnegative.
    """
    H = max(Fraction(1, 2), T.max_chain_sum() / 2)
    _, heights = T.node_heights(H)
    name = (lambda k: str(taxa[k - 1])) if taxa is not None else str
    clades = sorted(T.clades, key=len)
    full = frozenset(range(1, T.m + 1))

    def children(c):
        inner = [d for d in clades if d < c and not any(d < e < c for e in clades)]
        covered = frozenset().union(*inner) if inner else frozenset()
        kids = inner + [frozenset([k]) for k in c - covered]
        return sorted(kids, key=min)

    def height(c):
        if len(c) == 1:
            return Fraction(0)
        return H if c == full else heights[c]

    def render(c, parent_h):
        if len(c) == 1:
            body = name(next(iter(c)))
        else:
            body = "(" + ",".join(render(k, height(c)) for k in children(c)) + ")"
        if c == full:
            return body
        return f"{body}:{format_length(parent_h - height(c))}"

    return render(full, H) + ";"
