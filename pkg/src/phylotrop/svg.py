"""SVG drawing of a planar tropical cell complex.

Output depends only on the complex: coordinates are printed with a fixed
number of decimals and elements are emitted in index order.
"""

from .errors import ValidationError

MARGIN = 0.05
CELL_FILL = "#c6dbef"
EDGE_STROKE = "#08306b"
NODE_FILL = "#2171b5"
GENERATOR_FILL = "#cb181d"


def _f(x):
    s = f"{float(x):.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_text(cx):
    pts = list(cx.generators) + list(cx.nodes)
    if not pts:
        raise ValidationError("nothing to draw")
    xs = [float(p[0]) for p in pts]
    ys = [-float(p[1]) for p in pts]  # SVG y grows downward
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    pad = MARGIN * span
    x0, y0 = x0 - pad, y0 - pad
    w, h = (x1 + pad) - x0, (y1 + pad) - y0
    r = span / 80

    def xy(p):
        return _f(p[0]), _f(-p[1])

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}">',
        '<g class="cells">',
    ]
    for k, cell in enumerate(cx.cells):
        poly = " ".join(",".join(xy(cx.nodes[i])) for i in cell)
        out.append(f'<polygon id="cell{k}" points="{poly}" fill="{CELL_FILL}" stroke="none"/>')
    out.append("</g>")
    out.append(f'<g class="edges" stroke="{EDGE_STROKE}" stroke-width="{_f(r / 2)}">')
    for k, (a, b) in enumerate(cx.edges):
        (ax, ay), (bx, by) = xy(cx.nodes[a]), xy(cx.nodes[b])
        out.append(f'<line id="edge{k}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
    out.append("</g>")
    out.append(f'<g class="nodes" fill="{NODE_FILL}">')
    for k, p in enumerate(cx.nodes):
        px, py = xy(p)
        out.append(f'<circle class="node" id="node{k}" cx="{px}" cy="{py}" r="{_f(r)}"/>')
    out.append("</g>")
    out.append(f'<g class="generators" fill="{GENERATOR_FILL}" font-size="{_f(3 * r)}">')
    for k, p in enumerate(cx.generators, start=1):
        px, py = xy(p)
        out.append(f'<circle class="generator" id="gen{k}" cx="{px}" cy="{py}" r="{_f(1.5 * r)}"/>')
        out.append(f'<text x="{_f(float(p[0]) + 2 * r)}" y="{_f(-float(p[1]) - 2 * r)}">v{k}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(cx, path):
    """Write the drawing of ``cx`` to ``path``; I/O errors propagate."""
    text = svg_text(cx)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
