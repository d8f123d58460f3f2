"""Tropical Fermat-Weber points.

A tropical centroid of ``v^1, ..., v^s`` minimizes ``sum_i d_tr(y, v^i)``.
Over all of ``R^e / R 1`` this is one linear program.  Restricted to the
ultrametrics it is one linear program per maximal cone of tree space, with
``y = sum_k l_k D_{sigma_k}`` and ``l >= 0``.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .complex import enumerate_maximal_nested_sets
from .errors import PhylotropError, ResourceError, ValidationError
from .lp import LinearProgram, lp_solve
from .treespace import PairMap, clade_metric
from .tropical import TropicalPoint, _coords, trop_distance

MAX_TREESPACE_TAXA = 7


@dataclass
class CentroidResult:
    value: Fraction
    point: TropicalPoint
    distances: tuple
    tight: tuple = ()
    duals: tuple = None
    cones: tuple = ()
    table: tuple = ()

    def check(self, points):
        total = fermat_weber_objective(self.point, points)
        if total != self.value:
            raise PhylotropError(f"objective {total} disagrees with LP value {self.value}")
        return True


def fermat_weber_objective(y, points):
    return sum((trop_distance(y, v) for v in points), Fraction(0))


def _prepare(points):
    vs = [_coords(p.entries if isinstance(p, PairMap) else p) for p in points]
    if not vs:
        raise ValidationError("need at least one point")
    e = len(vs[0])
    if any(len(v) != e for v in vs):
        raise ValidationError("points have different lengths")
    return vs, e


def _compact_lp(vs, e, basis=None):
    """Variables ``(x, a_1, b_1, ..., a_s, b_s)``; ``y = x`` or ``y = basis . x``.

    ``a_i >= y_j - v^i_j >= b_i`` for all ``j``, and ``d_i = a_i - b_i``.
    """
    s = len(vs)
    nx = e if basis is None else len(basis)
    n = nx + 2 * s
    objective = [0] * nx + [1, -1] * s
    rows = []
    for j in range(e):
        yrow = [0] * nx
        if basis is None:
            yrow[j] = 1
        else:
            for k, col in enumerate(basis):
                yrow[k] = col[j]
        for i, v in enumerate(vs):
            up = list(yrow) + [0] * (2 * s)
            up[nx + 2 * i] = -1
            rows.append((up, "<=", v[j]))
            lo = [-x for x in yrow] + [0] * (2 * s)
            lo[nx + 2 * i + 1] = 1
            rows.append((lo, "<=", -v[j]))
    if basis is None:
        bounds = [(None, None)] * (e - 1) + [(0, 0)]
    else:
        bounds = [(0, None)] * nx
    bounds += [(None, None)] * (2 * s)
    return LinearProgram(objective, rows, bounds), nx, n


def _pairwise_lp(vs, e):
    """The textbook program: ``|(y_j - y_k) - (v^i_j - v^i_k)| <= d_i`` for ``j < k``."""
    s = len(vs)
    n = e + s
    rows = []
    for i, v in enumerate(vs):
        for j in range(e):
            for k in range(j + 1, e):
                row = [0] * n
                row[j], row[k], row[e + i] = 1, -1, -1
                rows.append((row, "<=", v[j] - v[k]))
                row = [0] * n
                row[j], row[k], row[e + i] = -1, 1, -1
                rows.append((row, "<=", v[k] - v[j]))
    bounds = [(None, None)] * (e - 1) + [(0, 0)] + [(0, None)] * s
    return LinearProgram([0] * e + [1] * s, rows, bounds)


def fermat_weber(points, formulation="compact"):
    """Unconstrained tropical centroid; ``y_e`` is pinned to 0."""
    vs, e = _prepare(points)
    if formulation == "compact":
        lp, _, _ = _compact_lp(vs, e)
    elif formulation == "pairwise":
        lp = _pairwise_lp(vs, e)
    else:
        raise ValidationError(f"unknown formulation {formulation!r}")
    res = lp_solve(lp)
    if not res.optimal:
        raise PhylotropError(f"Fermat-Weber program reported {res.status}")
    y = TropicalPoint(res.x[:e])
    dists = tuple(trop_distance(y, v) for v in vs)
    out = CentroidResult(res.value, y, dists, res.tight, res.duals)
    out.check(vs)
    return out


def _cone_job(args):
    vs, e, m, cone = args
    basis = [clade_metric(c, m) for c in cone]
    lp, nx, _ = _compact_lp(vs, e, basis)
    res = lp_solve(lp)
    if not res.optimal:
        raise PhylotropError(f"cone program reported {res.status}")
    ls = res.x[:nx]
    y = [sum((l * col[p] for l, col in zip(ls, basis)), Fraction(0)) for p in range(e)]
    return res.value, tuple(y), tuple(ls)


def _workers():
    try:
        return max(1, int(os.environ.get("TREESPACE_THREADS", "1")))
    except ValueError:
        return 1


def centroid_in_treespace(points, m, max_taxa=MAX_TREESPACE_TAXA, workers=None):
    """Tropical centroid restricted to the ultrametrics on ``m`` taxa.

    Solves one program per maximal nested set.  ``cones`` lists every
    nested set attaining the minimum and ``table`` holds ``(cone, value)``
    for all of them.
    """
    vs, e = _prepare(points)
    if e != m * (m - 1) // 2:
        raise ValidationError(f"points have {e} entries, expected {m * (m - 1) // 2} for m={m}")
    if m > max_taxa:
        raise ResourceError(f"centroid_in_treespace enumerates (2m-3)!! cones; m={m} exceeds the cap {max_taxa}")
    if m < 3:
        raise ValidationError("need m >= 3")
    cones = enumerate_maximal_nested_sets(m)
    jobs = [(vs, e, m, cone) for cone in cones]
    workers = workers or _workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cone_job, jobs, chunksize=8))
    else:
        results = [_cone_job(j) for j in jobs]
    best = min(r[0] for r in results)
    table = tuple((tuple(sorted(c, key=lambda s: (len(s), sorted(s)))), r[0]) for c, r in zip(cones, results))
    winners = [k for k, r in enumerate(results) if r[0] == best]
    y = TropicalPoint(results[winners[0]][1])
    out = CentroidResult(
        best,
        y,
        tuple(trop_distance(y, v) for v in vs),
        cones=tuple(table[k][0] for k in winners),
        table=table,
    )
    out.check(vs)
    return out
