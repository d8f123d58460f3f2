"""Command-line interface.

Every subcommand prints JSON (or CSV / Newick where noted) on stdout.  Exit
codes: 0 success, 1 invalid input, 2 resource limit, 3 internal error.
"""

import argparse
import json
import sys

import numpy as np

from . import serialize as ser
from .centroid import MAX_TREESPACE_TAXA, centroid_in_treespace, fermat_weber
from .complex import OrthantPoint
from .errors import PhylotropError, ValidationError
from .experiments import DEFAULT_MAX_M, DepthExperimentConfig, depth_experiment
from .geodesic import geodesic
from .hull import (
    DEFAULT_POINT_CAP,
    geodesic_triangle_example,
    hull_dimension_report,
    hull_iterate,
    open_book,
    thm35_instance,
)
from .hull2d import trop_hull_2d
from .newick import emit_newick, parse_newick
from .sampler import sample_tree
from .svg import render_svg
from .treespace import bhv_geodesic, compose, decompose, is_ultrametric, taxa_count, tree_from_point
from .tropical import (
    PluckerVector,
    blue_rule_project,
    segment_depth,
    trop_project_polytope,
    trop_segment,
)


class _UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: {message}")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _json_file(path):
    return ser.loads(_read(path))


def _vector(text):
    """A point given inline as ``a,b,c`` or ``[a, b, c]``, or as a JSON file with ``@path``."""
    if text.startswith("@"):
        return ser.vector_from_json(_json_file(text[1:]), text[1:])
    text = text.strip()
    if text.startswith("["):
        return ser.vector_from_json(ser.loads(text))
    return [ser.parse_rational(x.strip(), "coordinate") for x in text.split(",") if x.strip()]


def _point_list(path):
    """A JSON list of vectors, or a CSV matrix whose rows are the points."""
    text = _read(path)
    if text.lstrip().startswith("["):
        obj = ser.loads(text)
        if not isinstance(obj, list) or not obj:
            raise ValidationError(f"{path}: expected a nonempty list of vectors")
        return [ser.vector_from_json(v, path) for v in obj]
    return ser.read_matrix_csv(text)


def _tree(path):
    text = _read(path)
    if text.lstrip().startswith("{"):
        return ser.tree_from_json(ser.loads(text))
    return parse_newick(text)


def _emit(obj):
    sys.stdout.write(ser.dumps(obj))


def _points_json(pts):
    return [[ser.rational_str(x) for x in p] for p in pts]


def _geodesic_json(g):
    return {
        "support_pair": g.support_pair.as_lists(),
        "breakpoints": [ser.point_to_json(p) for p in g.breakpoints],
        "length": g.length,
        "depth": g.depth,
    }


# -- subcommands ----------------------------------------------------------------------


def cmd_geodesic(args):
    if args.trees:
        t1, t2 = (_tree(p) for p in args.trees)
        g, fan = bhv_geodesic(t1, t2)
        out = _geodesic_json(g)
        out["breakpoint_trees"] = [ser.tree_to_json(tree_from_point(p, fan)) for p in g.breakpoints]
        _emit(out)
        return 0
    if not args.input:
        raise ValidationError("give an input JSON file or --trees A B")
    obj = _json_file(args.input)
    K = ser.complex_from_json(ser._require(obj, "complex", "geodesic input"))
    v = ser.point_from_json(ser._require(obj, "from", "geodesic input"))
    w = ser.point_from_json(ser._require(obj, "to", "geodesic input"))
    _emit(_geodesic_json(geodesic(v, w, K)))
    return 0


def cmd_tropsegment(args):
    u, v = _vector(args.u), _vector(args.v)
    seg = trop_segment(u, v)
    out = {
        "parameters": [ser.rational_str(t) for t in seg.parameters],
        "breakpoints": _points_json(p.coords for p in seg.breakpoints),
        "length": ser.rational_str(seg.length()),
    }
    if args.depth:
        m = taxa_count(len(u))
        out["depth"], _ = segment_depth(u, v, m)
    _emit(out)
    return 0


def cmd_tropproject(args):
    gens = _point_list(args.generators)
    p = trop_project_polytope(_vector(args.point), gens)
    _emit({"projection": [ser.rational_str(x) for x in p.coords]})
    return 0


def _plucker(args):
    if args.uniform:
        r, e = args.uniform
        return PluckerVector.uniform(r, e)
    if args.graphic:
        return PluckerVector.graphic(args.graphic)
    obj = _json_file(args.plucker)
    weights = {frozenset(map(int, k.split(","))): ser.parse_rational(x) for k, x in obj["weights"].items()}
    return PluckerVector(obj["r"], obj["e"], weights)


def cmd_bluerule(args):
    w = _plucker(args)
    p = blue_rule_project(_vector(args.point), w)
    _emit({"projection": [ser.rational_str(x) for x in p.coords]})
    return 0


def cmd_trophull2d(args):
    rows = ser.read_matrix_csv(_read(args.input))
    pts = ser.columns(rows) if args.columns else rows
    cx = trop_hull_2d(pts)
    if args.svg:
        render_svg(cx, args.svg)
    n, e, c = cx.counts
    _emit({
        "nodes": n,
        "edges": e,
        "cells": c,
        "node_coordinates": _points_json(cx.nodes),
    })
    return 0


def cmd_centroid(args):
    if args.trees:
        trees = [_tree(p) for p in args.trees]
        pts = [list(compose(t).entries) for t in trees]
    else:
        pts = _point_list(args.input)
    if args.constrain_treespace:
        m = taxa_count(len(pts[0]))
        res = centroid_in_treespace(pts, m, max_taxa=args.max_taxa)
        extra = {
            "winning_cones": [[sorted(c) for c in cone] for cone in res.cones],
            "tree": ser.tree_to_json(decompose(res.point.coords)),
        }
    else:
        res = fermat_weber(pts)
        extra = {}
    _emit({
        "value": ser.rational_str(res.value),
        "point": [ser.rational_str(x) for x in res.point.coords],
        "distances": [ser.rational_str(d) for d in res.distances],
        **extra,
    })
    return 0


def cmd_hull(args):
    if args.example == "triangle":
        K, named = geodesic_triangle_example()
        S = [named["a"], named["b"], named["c"]]
    elif args.example == "open-book":
        K = open_book()
        S = [OrthantPoint.from_vector(v) for v in ([1, 0, 0, 1, 0], [0, 2, 0, 0, 1], [0, 0, 3, 1, 0])]
    else:
        if not args.input:
            raise ValidationError("give an input JSON file or --example")
        obj = _json_file(args.input)
        K = ser.complex_from_json(ser._require(obj, "complex", "hull input"))
        S = [ser.point_from_json(p) for p in ser._require(obj, "points", "hull input")]
    cloud = hull_iterate(S, K, t=args.rounds, point_cap=args.point_cap, seed=args.seed)
    rep = hull_dimension_report(cloud)
    rep["orthants"] = [{"facet": list(f), "rank": r} for f, r in sorted(rep["orthants"].items())]
    _emit(rep)
    return 0


def cmd_thm35(args):
    inst = thm35_instance(args.d)
    out = {
        "d": inst.d,
        "rays": inst.complex.n,
        "S_d": inst.S,
        "length": inst.length,
        "det": ser.rational_str(inst.det),
        "certificates": inst.certificates,
        "recorded": inst.recorded,
        "ok": inst.ok(),
    }
    if args.emit_matrix:
        out["U"] = _points_json(inst.U)
    _emit(out)
    return 0 if inst.ok() else 3


def cmd_depth_experiment(args):
    ms = range(args.m[0], args.m[1] + 1) if len(args.m) == 2 else args.m
    cfg = DepthExperimentConfig(
        ms=tuple(ms), samples=args.samples, seed=args.seed, mode=args.mode,
        output=args.output, max_m=args.max_m,
    )
    tables = depth_experiment(cfg, workers=args.workers)
    text = "".join(f"# {mode}\n{t.to_csv()}" for mode, t in tables.items())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sample_trees(args):
    rng = np.random.default_rng(args.seed)
    for _ in range(args.count):
        T = sample_tree(args.m, rng)
        if args.format == "json":
            sys.stdout.write(json.dumps(ser.tree_to_json(T), sort_keys=True) + "\n")
        else:
            sys.stdout.write(emit_newick(T) + "\n")
    return 0


def cmd_validate(args):
    text = _read(args.input)
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        obj = ser.loads(text)
        if isinstance(obj, list):
            ok, bad = is_ultrametric(ser.vector_from_json(obj))
            if not ok:
                raise ValidationError(f"not an ultrametric: triple {bad} has a unique maximum")
            _emit({"valid": True, "kind": "ultrametric"})
            return 0
        if "facets" in obj:
            ser.complex_from_json(obj)
            _emit({"valid": True, "kind": "complex"})
            return 0
        if "complex" in obj:
            K = ser.complex_from_json(obj["complex"])
            for key in ("from", "to"):
                p = ser.point_from_json(ser._require(obj, key, "geodesic input"))
                if not K.is_face(p.support):
                    raise ValidationError(f"'{key}' point is not in the complex")
            _emit({"valid": True, "kind": "geodesic-input"})
            return 0
        ser.tree_from_json(obj)
        _emit({"valid": True, "kind": "tree"})
        return 0
    T = parse_newick(text)
    _emit({"valid": True, "kind": "newick", "m": T.m, "clades": len(T.clades)})
    return 0


# -- parser --------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="phylotrop", description="Geodesic and tropical geometry of tree space.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("geodesic", help="geodesic in an orthant space or between two trees")
    s.add_argument("input", nargs="?", help='JSON with "complex", "from", "to"')
    s.add_argument("--trees", nargs=2, metavar=("A", "B"), help="two Newick or tree-JSON files")
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("tropsegment", help="tropical segment between two points")
    s.add_argument("u", help="a,b,c or [..] or @file.json")
    s.add_argument("v")
    s.add_argument("--depth", action="store_true", help="also report the depth in tree space")
    s.set_defaults(func=cmd_tropsegment)

    s = sub.add_parser("tropproject", help="projection onto a tropical polytope")
    s.add_argument("point")
    s.add_argument("--generators", required=True, help="JSON list or CSV (one generator per row)")
    s.set_defaults(func=cmd_tropproject)

    s = sub.add_parser("bluerule", help="projection onto a tropical linear space")
    s.add_argument("point")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--uniform", nargs=2, type=int, metavar=("R", "E"))
    g.add_argument("--graphic", type=int, metavar="M", help="graphic matroid of K_M")
    g.add_argument("--plucker", metavar="FILE", help='JSON {"r", "e", "weights": {"1,2": w}}')
    s.set_defaults(func=cmd_bluerule)

    s = sub.add_parser("trophull2d", help="cell complex of a planar tropical polytope")
    s.add_argument("input", help="CSV matrix; points are rows unless --columns")
    s.add_argument("--columns", action="store_true", help="read points from the columns")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_trophull2d)

    s = sub.add_parser("centroid", help="tropical Fermat-Weber point")
    s.add_argument("input", nargs="?", help="JSON list or CSV of points")
    s.add_argument("--trees", nargs="+", metavar="FILE")
    s.add_argument("--constrain-treespace", action="store_true")
    s.add_argument("--max-taxa", type=int, default=MAX_TREESPACE_TAXA)
    s.set_defaults(func=cmd_centroid)

    s = sub.add_parser("hull", help="iterated geodesic hull and its dimension")
    s.add_argument("input", nargs="?", help='JSON with "complex" and "points"')
    s.add_argument("--example", choices=("triangle", "open-book"))
    s.add_argument("--rounds", type=int, default=3)
    s.add_argument("--point-cap", type=int, default=DEFAULT_POINT_CAP)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_hull)

    s = sub.add_parser("thm35", help="certify the high-dimensional geodesic triangle")
    s.add_argument("-d", type=int, required=True)
    s.add_argument("--emit-matrix", action="store_true")
    s.set_defaults(func=cmd_thm35)

    s = sub.add_parser("depth-experiment", help="depth distributions of random pairs")
    s.add_argument("-m", type=int, nargs="+", default=[4, 8], help="LO HI range, or a single m")
    s.add_argument("--samples", "-s", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=("euclidean", "tropical", "both"), default="both")
    s.add_argument("--output", "-o")
    s.add_argument("--max-m", type=int, default=DEFAULT_MAX_M)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_depth_experiment)

    s = sub.add_parser("sample-trees", help="random normalized equidistant trees")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-n", "--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("newick", "json"), default="newick")
    s.set_defaults(func=cmd_sample_trees)

    s = sub.add_parser("validate", help="check a Newick tree, tree JSON, complex or ultrametric")
    s.add_argument("input")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except PhylotropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to the internal exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
