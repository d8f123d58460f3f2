"""Exact rational linear programming: two-phase tableau simplex, Bland's rule.

Problems are stated as

    minimize  c . x   subject to   a_r . x  (<=, =, >=)  b_r,   lo_j <= x_j <= hi_j

with ``None`` for a missing bound.  Outcomes are typed: an infeasible or
unbounded program is a result, not an exception.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ._rational import as_fraction
from .errors import ValidationError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "=", ">=")


@dataclass
class LinearProgram:
    objective: list
    rows: list = field(default_factory=list)
    bounds: list = None

    def __post_init__(self):
        self.objective = [as_fraction(x) for x in self.objective]
        n = len(self.objective)
        rows = []
        for coeffs, rel, rhs in self.rows:
            if rel not in _RELATIONS:
                raise ValidationError(f"unknown relation {rel!r}")
            if len(coeffs) != n:
                raise ValidationError(f"row has {len(coeffs)} coefficients, expected {n}")
            rows.append(([as_fraction(x) for x in coeffs], rel, as_fraction(rhs)))
        self.rows = rows
        if self.bounds is None:
            self.bounds = [(Fraction(0), None)] * n
        if len(self.bounds) != n:
            raise ValidationError("bounds and objective differ in length")
        self.bounds = [
            (None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))
            for lo, hi in self.bounds
        ]
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise ValidationError("a variable has lower bound above its upper bound")

    @property
    def n(self):
        return len(self.objective)

    def add_row(self, coeffs, rel, rhs):
        if rel not in _RELATIONS:
            raise ValidationError(f"unknown relation {rel!r}")
        self.rows.append(([as_fraction(x) for x in coeffs], rel, as_fraction(rhs)))

    def evaluate(self, x):
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x):
        for (lo, hi), v in zip(self.bounds, x):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        for coeffs, rel, rhs in self.rows:
            lhs = sum((a * v for a, v in zip(coeffs, x)), Fraction(0))
            if (rel == "<=" and lhs > rhs) or (rel == ">=" and lhs < rhs) or (rel == "=" and lhs != rhs):
                return False
        return True


@dataclass
class LPResult:
    status: str
    x: tuple = None
    value: Fraction = None
    tight: tuple = ()
    duals: tuple = None
    pivots: int = 0

    @property
    def optimal(self):
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, col):
        row = self.rows[r]
        p = row[col]
        if p != 1:
            self.rows[r] = row = [x / p for x in row]
            self.rhs[r] /= p
        br = self.rhs[r]
        nz = [j for j, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * br
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost):
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, x in enumerate(self.rows[i]):
                    if x:
                        red[j] -= cb * x
        return red

    def run(self, cost, allowed):
        """Minimize ``cost`` over the current basis; True if optimal, False if unbounded."""
        red = self.reduced_costs(cost)
        while True:
            col = next((j for j in allowed if red[j] < 0), None)
            if col is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            r = best[1]
            self.pivot(r, col)
            f = red[col]
            row = self.rows[r]
            for j, x in enumerate(row):
                if x:
                    red[j] -= f * x


def _standard_form(lp):
    """Substitute bounds away; returns columns, maps back, and extra bound rows."""
    cols = []  # per original variable: list of (new column, sign), plus offset
    offsets = []
    extra = []
    k = 0
    for lo, hi in lp.bounds:
        if lo is not None:
            cols.append([(k, 1)])
            offsets.append(lo)
            if hi is not None:
                extra.append((k, hi - lo))
            k += 1
        elif hi is not None:
            cols.append([(k, -1)])
            offsets.append(hi)
            k += 1
        else:
            cols.append([(k, 1), (k + 1, -1)])
            offsets.append(Fraction(0))
            k += 2
    return cols, offsets, extra, k


def lp_solve(lp):
    """Solve ``lp`` exactly and return an :class:`LPResult`."""
    cols, offsets, extra, k = _standard_form(lp)
    cost = [Fraction(0)] * k
    for j, c in enumerate(lp.objective):
        for col, sign in cols[j]:
            cost[col] += sign * c
    const = sum((c * o for c, o in zip(lp.objective, offsets)), Fraction(0))

    work = []
    for coeffs, rel, rhs in lp.rows:
        row = [Fraction(0)] * k
        b = rhs
        for j, a in enumerate(coeffs):
            if a:
                b -= a * offsets[j]
                for col, sign in cols[j]:
                    row[col] += sign * a
        work.append((row, rel, b))
    for col, width in extra:
        row = [Fraction(0)] * k
        row[col] = Fraction(1)
        work.append((row, "<=", width))

    m = len(work)
    flips = []
    n_slack = sum(1 for _, rel, _ in work if rel != "=")
    n_art = 0
    layout = []
    for row, rel, b in work:
        flip = b < 0
        if flip:
            row, b = [-x for x in row], -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        flips.append(-1 if flip else 1)
        needs_art = rel != "<="
        layout.append((row, rel, b, needs_art))
        n_art += needs_art
    width = k + n_slack + n_art
    rows, rhs, basis, identity = [], [], [], []
    s = k
    a = k + n_slack
    art_cols = []
    for row, rel, b, needs_art in layout:
        full = row + [Fraction(0)] * (n_slack + n_art)
        if rel != "=":
            full[s] = Fraction(1) if rel == "<=" else Fraction(-1)
            slack_col = s
            s += 1
        if needs_art:
            full[a] = Fraction(1)
            identity.append(a)
            basis.append(a)
            art_cols.append(a)
            a += 1
        else:
            identity.append(slack_col)
            basis.append(slack_col)
        rows.append(full)
        rhs.append(b)
    t = _Tableau(rows, rhs, basis)
    art = set(art_cols)

    if art:
        phase1 = [Fraction(0)] * width
        for c in art:
            phase1[c] = Fraction(1)
        t.run(phase1, range(width))
        if sum((t.rhs[i] for i, b in enumerate(t.basis) if b in art), Fraction(0)) > 0:
            return LPResult(INFEASIBLE, pivots=t.pivots)
        for i in range(m):
            if t.basis[i] in art:
                col = next((j for j in range(k + n_slack) if t.rows[i][j] != 0), None)
                if col is not None:
                    t.pivot(i, col)
    allowed = [j for j in range(width) if j not in art]
    full_cost = cost + [Fraction(0)] * (n_slack + n_art)
    # redundant rows keep a basic artificial at value zero; it never blocks
    if not t.run(full_cost, allowed):
        return LPResult(UNBOUNDED, pivots=t.pivots)

    z = [Fraction(0)] * width
    for i, b in enumerate(t.basis):
        z[b] = t.rhs[i]
    x = []
    for j in range(lp.n):
        x.append(offsets[j] + sum((sign * z[col] for col, sign in cols[j]), Fraction(0)))
    red = t.reduced_costs(full_cost)
    duals = tuple(-red[identity[i]] * flips[i] for i in range(len(lp.rows)))
    tight = []
    for r, (coeffs, rel, rhs_r) in enumerate(lp.rows):
        lhs = sum((c * v for c, v in zip(coeffs, x)), Fraction(0))
        if lhs == rhs_r:
            tight.append(r)
    value = sum((c * v for c, v in zip(cost, z)), Fraction(0)) + const
    return LPResult(OPTIMAL, tuple(x), value, tuple(tight), duals, t.pivots)
