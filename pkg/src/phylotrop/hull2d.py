"""Type decomposition of a tropical polytope in ``R^3 / R 1``.

Points are drawn in the plane through ``(x, y) = (p2 - p1, p3 - p1)``.  For
the max-plus hull, a point ``p`` belongs to ``tconv(V)`` exactly when the
sets ``argmin_i (p_i - v_i)`` over the generators ``v`` cover ``{1, 2, 3}``.
The cell complex is cut out by the three rays leaving every generator in the
directions ``(1, 0)``, ``(0, 1)`` and ``(-1, -1)``, where two of those minima
tie.  Everything is exact rational arithmetic.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ._rational import as_fraction
from .errors import ValidationError

DIRECTIONS = ((1, 0), (0, 1), (-1, -1))


def to_plane(p):
    p = [as_fraction(x) for x in p]
    if len(p) != 3:
        raise ValidationError("planar tropical hulls need points in R^3")
    return (p[1] - p[0], p[2] - p[0])


def from_plane(xy):
    return (Fraction(0), xy[0], xy[1])


def _argmin_types(pt, gens):
    covered = set()
    for g in gens:
        q = (Fraction(0) - 0, pt[0] - g[0], pt[1] - g[1])
        low = min(q)
        covered.update(i for i in range(3) if q[i] == low)
    return covered


def in_hull(pt, gens):
    """Membership of a plane point in the tropical hull of plane generators."""
    return len(_argmin_types(pt, gens)) == 3


@dataclass
class CellComplex2D:
    generators: list
    nodes: list
    edges: list
    cells: list = field(default_factory=list)

    @property
    def counts(self):
        return len(self.nodes), len(self.edges), len(self.cells)

    def euler_characteristic(self):
        n, e, c = self.counts
        return n - e + c

    def cell_polygons(self):
        return [[self.nodes[k] for k in cell] for cell in self.cells]


def _line_key(apex, d):
    x, y = apex
    if d == (1, 0):
        return ("h", y)
    if d == (0, 1):
        return ("v", x)
    return ("d", y - x)


def _param(pt, d):
    return pt[0] * d[0] + pt[1] * d[1]


def _intersect(a, da, b, db):
    """Intersection of two rays, or None."""
    (ax, ay), (bx, by) = a, b
    det = da[0] * (-db[1]) - da[1] * (-db[0])
    if det == 0:
        return None
    rx, ry = bx - ax, by - ay
    s = Fraction(rx * (-db[1]) - ry * (-db[0]), 1) / det
    t = Fraction(da[0] * ry - da[1] * rx, 1) / det
    if s < 0 or t < 0:
        return None
    return (ax + s * da[0], ay + s * da[1])


def trop_hull_2d(points):
    """Cell complex of ``tconv(points)`` for points of ``R^3 / R 1``."""
    gens = sorted({to_plane(p) for p in points})
    if not gens:
        raise ValidationError("need at least one point")
    # one ray per (line, direction): the union of collinear rays is the ray
    # from the earliest apex
    rays = {}
    for g in gens:
        for d in DIRECTIONS:
            key = (_line_key(g, d), d)
            if key not in rays or _param(g, d) < _param(rays[key], d):
                rays[key] = g
    ray_list = [(apex, d) for (_, d), apex in sorted(rays.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    on_ray = [set([apex]) for apex, _ in ray_list]
    for g in gens:
        for k, (apex, d) in enumerate(ray_list):
            if _on_ray(g, apex, d):
                on_ray[k].add(g)
    for i in range(len(ray_list)):
        for j in range(i + 1, len(ray_list)):
            x = _intersect(*ray_list[i], *ray_list[j])
            if x is not None:
                on_ray[i].add(x)
                on_ray[j].add(x)
    vertices = set()
    segments = set()
    for (apex, d), pts in zip(ray_list, on_ray):
        ordered = sorted(pts, key=lambda p: _param(p, d))
        vertices.update(ordered)
        for a, b in zip(ordered, ordered[1:]):
            segments.add((a, b) if a < b else (b, a))
    nodes = sorted(v for v in vertices if in_hull(v, gens))
    index = {v: k for k, v in enumerate(nodes)}
    edges = []
    for a, b in sorted(segments):
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        if a in index and b in index and in_hull(mid, gens):
            edges.append((index[a], index[b]))
    cells = _bounded_faces(nodes, edges, gens)
    return CellComplex2D(gens, nodes, edges, cells)


def _on_ray(p, apex, d):
    dx, dy = p[0] - apex[0], p[1] - apex[1]
    if dx * d[1] - dy * d[0] != 0:
        return False
    return dx * d[0] + dy * d[1] >= 0


def _angle_key(d):
    # exact ordering of the six possible directions by angle
    order = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    return order.index(d)


def _direction(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = max(abs(dx), abs(dy))
    return (int(dx / g), int(dy / g))


def _bounded_faces(nodes, edges, gens):
    """Trace faces of the planar graph and keep bounded ones inside the hull."""
    out = {k: [] for k in range(len(nodes))}
    for a, b in edges:
        out[a].append(b)
        out[b].append(a)
    for k in out:
        out[k].sort(key=lambda j: _angle_key(_direction(nodes[k], nodes[j])))
    seen = set()
    faces = []
    for a, b in edges:
        for start in ((a, b), (b, a)):
            if start in seen:
                continue
            cycle = []
            u, v = start
            while (u, v) not in seen:
                seen.add((u, v))
                cycle.append(u)
                nbrs = out[v]
                k = nbrs.index(u)
                u, v = v, nbrs[(k - 1) % len(nbrs)]
            if _area2(cycle, nodes) > 0:
                faces.append(cycle)
    cells = []
    for cycle in faces:
        if _face_in_hull(cycle, nodes, gens):
            cells.append(_canonical_cycle(cycle))
    return sorted(cells)


def _area2(cycle, nodes):
    s = Fraction(0)
    for i in range(len(cycle)):
        x1, y1 = nodes[cycle[i]]
        x2, y2 = nodes[cycle[(i + 1) % len(cycle)]]
        s += x1 * y2 - x2 * y1
    return s


def _face_in_hull(cycle, nodes, gens):
    a, b = nodes[cycle[0]], nodes[cycle[1]]
    dx, dy = b[0] - a[0], b[1] - a[1]
    length = max(abs(dx), abs(dy))
    eps = length / 100
    # interior lies to the left of a counterclockwise boundary edge
    nx_, ny_ = -dy / length, dx / length
    pt = ((a[0] + b[0]) / 2 + eps * nx_, (a[1] + b[1]) / 2 + eps * ny_)
    return in_hull(pt, gens)


def _canonical_cycle(cycle):
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]
