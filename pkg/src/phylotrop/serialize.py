"""JSON and CSV formats for complexes, points, trees and matrices.

Rationals travel as strings ``"p/q"`` so nothing is rounded on the way in or
out.  Irrational geodesic coordinates (floats) are written as JSON numbers.
"""

import csv
import io
import json
from fractions import Fraction

from ._rational import as_fraction
from .complex import OrthantPoint, SimplicialComplex
from .errors import ParseError, ValidationError
from .treespace import EquidistantTree


def rational_str(x):
    if isinstance(x, float):
        return x
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(x, where="value"):
    if isinstance(x, bool):
        raise ValidationError(f"{where}: booleans are not numbers")
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: cannot read {x!r} as a rational") from None


def loads(text):
    """``json.loads`` that reports malformed input with its character offset."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.pos) from None


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _require(obj, key, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{kind} needs a {key!r} field")
    return obj[key]


def complex_to_json(K):
    facets = sorted(sorted(f) for f in K.facets)
    return {"n": K.n, "facets": facets}


def complex_from_json(obj):
    n = _require(obj, "n", "complex")
    facets = _require(obj, "facets", "complex")
    if not isinstance(n, int) or not isinstance(facets, list):
        raise ValidationError("complex: 'n' must be an integer and 'facets' a list")
    return SimplicialComplex(n, [tuple(f) for f in facets])


def point_to_json(p):
    return {
        "support": sorted(p.support),
        "coords": {str(r): rational_str(x) for r, x in p.coords},
    }


def point_from_json(obj):
    coords = _require(obj, "coords", "point")
    if not isinstance(coords, dict):
        raise ValidationError("point: 'coords' must map ray indices to values")
    out = {}
    for k, x in coords.items():
        try:
            ray = int(k)
        except ValueError:
            raise ValidationError(f"point: ray index {k!r} is not an integer") from None
        out[ray] = x if isinstance(x, float) and not x.is_integer() else parse_rational(x, f"ray {k}")
    p = OrthantPoint.from_mapping(out)
    if "support" in obj and set(obj["support"]) != set(p.support):
        raise ValidationError("point: 'support' disagrees with the nonzero coordinates")
    return p


def tree_to_json(T):
    return {
        "m": T.m,
        "clades": [sorted(c) for c in T.clades],
        "lengths": [rational_str(x) for x in T.lengths],
    }


def tree_from_json(obj):
    clades = _require(obj, "clades", "tree")
    lengths = _require(obj, "lengths", "tree")
    if "m" in obj:
        m = obj["m"]
    else:
        m = max((max(c) for c in clades if c), default=0)
    return EquidistantTree(m, tuple(tuple(c) for c in clades), tuple(parse_rational(x) for x in lengths))


def vector_from_json(obj, where="vector"):
    if not isinstance(obj, list):
        raise ValidationError(f"{where} must be a list of numbers")
    return [parse_rational(x, where) for x in obj]


def read_matrix_csv(text):
    """Rows of rationals; blank lines and ``#`` comments are skipped."""
    rows = []
    for k, row in enumerate(csv.reader(io.StringIO(text))):
        cells = [c.strip() for c in row]
        if not cells or not any(cells) or cells[0].startswith("#"):
            continue
        rows.append([parse_rational(c, f"row {k + 1}") for c in cells])
    if not rows:
        raise ValidationError("matrix is empty")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix rows have different lengths")
    return rows


def write_matrix_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([rational_str(x) for x in r])
    return buf.getvalue()


def columns(rows):
    return [list(c) for c in zip(*rows)]
