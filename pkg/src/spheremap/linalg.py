"""Exact linear algebra kernels used across the package.

Three layers, all division-free or exactly-dividing:

* dense Gaussian elimination over any field object exposing +, -, *,
  ``inverse()`` and ``is_zero()`` (RadicalReal and ComplexRadical both do);
* a sparse integer row-echelon solver for the large real-linear systems
  coming out of the deformation equations (rows are dicts, entries ints,
  rows kept gcd-normalized to control growth);
* fraction-free (Bareiss-style) elimination over the polynomial ring for
  generic rank and fraction-field kernels of reflection matrices.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .polys import BiPoly, exact_div


# ---------------------------------------------------------------------------
# dense elimination over an exact field (RadicalReal / ComplexRadical)
# ---------------------------------------------------------------------------


def field_kernel(rows, ncols: int, zero):
    """Rank and right-kernel basis of a dense matrix over an exact field.

    ``rows`` is a list of lists of field elements; ``zero`` is the field's
    zero (used to build basis vectors).  Returns (rank, basis).
    """
    work = [list(r) for r in rows]
    pivots: list[tuple[int, int]] = []  # (row, col)
    row = 0
    for col in range(ncols):
        pr = None
        for r in range(row, len(work)):
            if not work[r][col].is_zero():
                pr = r
                break
        if pr is None:
            continue
        work[row], work[pr] = work[pr], work[row]
        inv = work[row][col].inverse()
        work[row] = [x * inv for x in work[row]]
        for r in range(len(work)):
            if r != row and not work[r][col].is_zero():
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[row])]
        pivots.append((row, col))
        row += 1
        if row == len(work):
            break
    rank = len(pivots)
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        vec = [zero for _ in range(ncols)]
        vec[f] = vec[f] + 1
        for r, c in pivots:
            vec[c] = vec[c] - work[r][f]
        basis.append(vec)
    return rank, basis


class Span:
    """Incremental span of sparse vectors over an exact field.

    Vectors are dicts coord -> field element; coords must be mutually
    orderable.  Rows are kept in echelon form (each stored row has a pivot
    coordinate eliminated from all others).
    """

    def __init__(self):
        self.rows: dict = {}  # pivot coord -> dict vector (pivot entry = 1)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        while True:
            hits = vec.keys() & self.rows.keys()
            if not hits:
                return vec
            coord = min(hits)
            f = vec[coord]
            for c2, v2 in self.rows[coord].items():
                s = vec.get(c2)
                s = -f * v2 if s is None else s - f * v2
                if s.is_zero():
                    vec.pop(c2, None)
                else:
                    vec[c2] = s

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert vec into the span; returns True if the dimension grew."""
        red = self._reduce(vec)
        if not red:
            return False
        pivot = min(red)
        inv = red[pivot].inverse()
        red = {c: v * inv for c, v in red.items()}
        for p, row in self.rows.items():
            if pivot in row:
                f = row[pivot]
                for c2, v2 in red.items():
                    s = row.get(c2)
                    s = -f * v2 if s is None else s - f * v2
                    if s.is_zero():
                        row.pop(c2, None)
                    else:
                        row[c2] = s
        self.rows[pivot] = red
        return True


# ---------------------------------------------------------------------------
# sparse integer echelon solver
# ---------------------------------------------------------------------------


def _strip_gcd(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class SparseIntSystem:
    """Homogeneous linear system over Q with sparse integer rows.

    Columns are arbitrary hashable keys.  Rows are accumulated, then
    ``kernel()`` runs a deterministic sparse echelon reduction and returns
    exact rank and a rational kernel basis.
    """

    def __init__(self):
        self.rows: list[dict] = []
        self.columns: set = set()

    def add_row(self, row: dict):
        row = {c: v for c, v in row.items() if v}
        if row:
            self.rows.append(_strip_gcd(row))
        self.columns.update(row)

    def add_column(self, col):
        self.columns.add(col)

    def kernel(self):
        """Returns (rank, basis) with basis vectors as dicts col -> Fraction."""
        order = sorted(self.columns)
        col_id = {c: i for i, c in enumerate(order)}
        pivots: dict[int, dict] = {}  # pivot col id -> row (int entries)

        def reduce_row(row: dict) -> dict:
            while row:
                hits = row.keys() & pivots.keys()
                if not hits:
                    return row
                piv_c = min(hits)
                piv = pivots[piv_c]
                a, b = piv[piv_c], row[piv_c]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = {}
                for c, v in row.items():
                    new[c] = v * fa
                for c, v in piv.items():
                    s = new.get(c, 0) - v * fb
                    if s:
                        new[c] = s
                    else:
                        new.pop(c, None)
                row = _strip_gcd(new)
            return row

        for raw in self.rows:
            row = reduce_row({col_id[c]: v for c, v in raw.items()})
            if row:
                pc = min(row)
                pivots[pc] = row

        # back-substitution to reduced form so kernel extraction is direct
        for pc in sorted(pivots, reverse=True):
            row = pivots[pc]
            for qc in [c for c in row if c != pc and c in pivots]:
                piv = pivots[qc]
                a, b = piv[qc], row[qc]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = {}
                for c, v in row.items():
                    new[c] = v * fa
                for c, v in piv.items():
                    s = new.get(c, 0) - v * fb
                    if s:
                        new[c] = s
                    else:
                        new.pop(c, None)
                row = _strip_gcd(new)
            pivots[pc] = row

        rank = len(pivots)
        basis = []
        for c in range(len(order)):
            if c in pivots:
                continue
            vec = {order[c]: Fraction(1)}
            for pc, row in pivots.items():
                if c in row:
                    vec[order[pc]] = Fraction(-row[c], row[pc])
            basis.append(vec)
        return rank, basis


def fraction_rows_to_int(row: dict) -> dict:
    """Clear denominators of a sparse Fraction row."""
    lcm = 1
    for v in row.values():
        d = v.denominator
        lcm = lcm // gcd(lcm, d) * d
    return {c: int(v * lcm) for c, v in row.items()}


class SparseFieldSystem:
    """Homogeneous system with sparse rows over an exact field.

    The fallback for coefficient data that does not rationalize; same
    contract as SparseIntSystem but entries are field elements.  ``one`` is
    the field's multiplicative unit.
    """

    def __init__(self, one):
        self.one = one
        self.rows: list[dict] = []
        self.columns: set = set()

    def add_row(self, row: dict):
        row = {c: v for c, v in row.items() if not v.is_zero()}
        if row:
            self.rows.append(row)
        self.columns.update(row)

    def add_column(self, col):
        self.columns.add(col)

    def kernel(self):
        order = sorted(self.columns)
        col_id = {c: i for i, c in enumerate(order)}
        span = Span()
        for raw in self.rows:
            span.add({col_id[c]: v for c, v in raw.items()})
        pivots = span.rows
        rank = len(pivots)
        basis = []
        for c in range(len(order)):
            if c in pivots:
                continue
            vec = {order[c]: self.one}
            for pc, row in pivots.items():
                if c in row:
                    vec[order[pc]] = -row[c]
            basis.append(vec)
        return rank, basis


# ---------------------------------------------------------------------------
# fraction-free elimination over the polynomial ring
# ---------------------------------------------------------------------------


def _poly_pivot_key(p: BiPoly):
    return (len(p.terms), tuple(sorted(p.terms, reverse=True)))


def bareiss_echelon(rows: list[list[BiPoly]]):
    """Fraction-free row echelon form of a BiPoly matrix.

    Returns (echelon rows, pivot (row, col) list).  Divisions are by the
    previous pivot and are exact (Bareiss).  Pivot choice is deterministic:
    fewest terms first, then lex order of the term set.
    """
    if not rows:
        return [], []
    work = [list(r) for r in rows]
    nrows, ncols = len(work), len(work[0])
    n = work[0][0].n
    prev = BiPoly.constant(n, 1)
    pivots = []
    r = 0
    for c in range(ncols):
        cand = [i for i in range(r, nrows) if not work[i][c].is_zero()]
        if not cand:
            continue
        best = min(cand, key=lambda i: _poly_pivot_key(work[i][c]))
        work[r], work[best] = work[best], work[r]
        piv = work[r][c]
        for i in range(r + 1, nrows):
            if all(work[i][j].is_zero() for j in range(c, ncols)):
                continue
            fi = work[i][c]
            for j in range(ncols):
                if j <= c:
                    work[i][j] = BiPoly(n)
                    continue
                num = work[i][j] * piv - fi * work[r][j]
                work[i][j] = exact_div(num, prev) if not num.is_zero() else num
        pivots.append((r, c))
        prev = piv
        r += 1
        if r == nrows:
            break
    return work, pivots


def poly_matrix_rank(rows: list[list[BiPoly]]) -> int:
    _, pivots = bareiss_echelon(rows)
    return len(pivots)


class _PolyFrac:
    """Unreduced polynomial fraction, enough for small back-substitutions."""

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly | None = None):
        self.num = num
        self.den = den if den is not None else BiPoly.constant(num.n, 1)

    def __add__(self, o: _PolyFrac) -> _PolyFrac:
        return _PolyFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    def __mul__(self, o: _PolyFrac) -> _PolyFrac:
        return _PolyFrac(self.num * o.num, self.den * o.den)

    def __neg__(self) -> _PolyFrac:
        return _PolyFrac(-self.num, self.den)

    def div(self, o: _PolyFrac) -> _PolyFrac:
        return _PolyFrac(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()


def poly_kernel(rows: list[list[BiPoly]]):
    """Rank and a polynomial basis of the right kernel over the fraction field.

    Kernel vectors are returned with denominators cleared (polynomial
    entries) and each is verified to satisfy rows * v = 0 exactly.
    """
    if not rows:
        return 0, []
    ncols = len(rows[0])
    n = rows[0][0].n
    ech, pivots = bareiss_echelon(rows)
    rank = len(pivots)
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    one = _PolyFrac(BiPoly.constant(n, 1))
    zero = _PolyFrac(BiPoly(n))
    for f in free_cols:
        x: list[_PolyFrac] = [zero] * ncols
        x[f] = one
        for (r, c) in reversed(pivots):
            # row r: piv * x_c + sum_{j>c} a_j x_j = 0
            acc = zero
            for j in range(c + 1, ncols):
                if not ech[r][j].is_zero() and not x[j].is_zero():
                    acc = acc + _PolyFrac(ech[r][j]) * x[j]
            x[c] = (-acc).div(_PolyFrac(ech[r][c])) if not acc.is_zero() else zero
        common = BiPoly.constant(n, 1)
        for xi in x:
            if not xi.is_zero():
                common = common * xi.den
        vec = []
        for xi in x:
            if xi.is_zero():
                vec.append(BiPoly(n))
            else:
                vec.append(xi.num * exact_div(common, xi.den))
        # strip any common BiPoly monomial content for readability
        vec = _strip_monomial_content(vec)
        for row in rows:
            chk = BiPoly(n)
            for a, b in zip(row, vec):
                chk = chk + a * b
            if not chk.is_zero():
                raise ArithmeticError("kernel vector verification failed")
        basis.append(tuple(vec))
    return rank, basis


def _strip_monomial_content(vec: list[BiPoly]) -> list[BiPoly]:
    n = vec[0].n
    mins_h = None
    for p in vec:
        for (h, a) in p.terms:
            if mins_h is None:
                mins_h = list(h)
            else:
                mins_h = [min(x, y) for x, y in zip(mins_h, h)]
    if mins_h is None or not any(mins_h):
        return vec
    shift = tuple(mins_h)
    out = []
    for p in vec:
        out.append(
            BiPoly(
                n,
                {
                    (tuple(x - s for x, s in zip(h, shift)), a): c
                    for (h, a), c in p.terms.items()
                },
            )
        )
    return out
