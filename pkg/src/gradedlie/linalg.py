"""Exact sparse rational linear algebra on (degree, weight) slices.

Forward elimination is fraction-free (Bareiss) over integerized rows; reduced
echelon forms and solutions are finished with exact Fractions.  No floating
point anywhere: triviality decisions downstream are exact yes/no questions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import CutoffTooSmall, NotACocycle


class SliceMatrix:
    """Sparse rational matrix whose rows/cols are indexed by monomial lists."""

    __slots__ = ("nrows", "ncols", "entries", "row_labels", "col_labels")

    def __init__(self, nrows, ncols, entries=None, row_labels=None, col_labels=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {k: Fraction(v) for k, v in (entries or {}).items() if v != 0}
        self.row_labels = row_labels
        self.col_labels = col_labels

    def dense_rows(self):
        rows = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    @classmethod
    def from_rows(cls, rows, **kw):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v != 0:
                    entries[(r, c)] = Fraction(v)
        return cls(nrows, ncols, entries, **kw)


def _integerize(row):
    denom = 1
    for v in row:
        if v:
            denom = denom * v.denominator // gcd(denom, v.denominator)
    return [int(v * denom) for v in row]


def _forward_eliminate(rows):
    """Fraction-free (Bareiss) forward elimination.

    Returns (echelon integer rows, pivot column list).  Row order of the
    output follows pivot discovery; zero rows are dropped.
    """
    work = [_integerize(r) for r in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    pivots = []
    prev_pivot = 1
    r = 0
    for c in range(ncols):
        sel = None
        for rr in range(r, nrows):
            if work[rr][c] != 0:
                sel = rr
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        piv = work[r][c]
        for rr in range(r + 1, nrows):
            if all(x == 0 for x in work[rr]):
                continue
            factor = work[rr][c]
            for cc in range(ncols):
                work[rr][cc] = (piv * work[rr][cc] - factor * work[r][cc]) // prev_pivot
        pivots.append(c)
        prev_pivot = piv
        r += 1
        if r == nrows:
            break
    return work[:r], pivots


def rref(rows):
    """Reduced row echelon form over the rationals.

    Returns (list of Fraction rows, pivot columns).  Input rows may be any
    exact rationals; zero rows are dropped.
    """
    if not rows:
        return [], []
    echelon, pivots = _forward_eliminate(rows)
    out = [[Fraction(v) for v in row] for row in echelon]
    # back-substitute to reduced form, normalize pivots to 1
    for i in reversed(range(len(pivots))):
        piv_col = pivots[i]
        piv = out[i][piv_col]
        out[i] = [v / piv for v in out[i]]
        for j in range(i):
            f = out[j][piv_col]
            if f:
                out[j] = [vj - f * vi for vj, vi in zip(out[j], out[i])]
    return out, pivots


def rank(m):
    if isinstance(m, SliceMatrix):
        rows = m.dense_rows()
    else:
        rows = m
    if not rows or not rows[0]:
        return 0
    _, pivots = _forward_eliminate(rows)
    return len(pivots)


def kernel_basis(m):
    """Basis of the null space, one vector per free column, in reduced
    echelon form (vector j has 1 at its free column, 0 at other free columns)."""
    if isinstance(m, SliceMatrix):
        rows = m.dense_rows()
        ncols = m.ncols
    else:
        rows = m
        ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return []
    if not rows:
        rows = [[Fraction(0)] * ncols]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -red[i][fc]
        basis.append(vec)
    return basis


class Solution:
    """Particular solution plus kernel basis; falsy when no solution exists."""

    __slots__ = ("ok", "particular", "kernel")

    def __init__(self, ok, particular=None, kernel=None):
        self.ok = ok
        self.particular = particular
        self.kernel = kernel or []

    def __bool__(self):
        return self.ok


NO_SOLUTION = Solution(False)


def solve(m, target):
    """Exact solution set of m x = target.

    Returns a Solution with the lexicographically-first echelon particular
    solution (free variables set to zero) and the kernel basis, or a falsy
    Solution when the system is inconsistent.
    """
    if isinstance(m, SliceMatrix):
        rows = m.dense_rows()
        nrows, ncols = m.nrows, m.ncols
    else:
        rows = [list(r) for r in m]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
    target = [Fraction(t) for t in target]
    if len(target) != nrows:
        raise ValueError(f"target length {len(target)} != {nrows} rows")
    if ncols == 0:
        return Solution(all(t == 0 for t in target), [], []) if nrows else Solution(True, [], [])
    aug = [rows[r] + [target[r]] for r in range(nrows)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return NO_SOLUTION
    particular = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        particular[pc] = red[i][ncols]
    return Solution(True, particular, kernel_basis(rows))


# -- slice-level operations ---------------------------------------------------

from functools import lru_cache


@lru_cache(maxsize=None)
def d_matrix(g, q, k):
    """Matrix of the differential from the (q, k) slice to the (q+1, k) slice.

    Rows are indexed by the target slice basis, columns by the source basis.
    Cached per (algebra, degree, weight); instances are never mutated.
    """
    from .cohomology import weight_slice_basis
    from .forms import Form, differential

    src = weight_slice_basis(g, q, k)
    dst = weight_slice_basis(g, q + 1, k)
    dst_index = {m: r for r, m in enumerate(dst)}
    entries = {}
    for c, mono in enumerate(src):
        img = differential(g, Form.monomial(g, mono))
        for m, v in img.terms.items():
            entries[(dst_index[m], c)] = v
    return SliceMatrix(len(dst), len(src), entries, row_labels=dst, col_labels=src)


def coboundary_preimage(g, c_form):
    """Solve d x = c for a closed degree-homogeneous form c.

    Returns a Solution whose particular/kernel entries are Forms of degree
    deg(c) - 1 (kernel = all closed forms of that degree in the relevant
    weights).  Mixed weights are handled weight-by-weight.
    """
    from .cohomology import weight_slice_basis
    from .forms import Form, differential

    if c_form.is_zero():
        return Solution(True, Form.zero(c_form.alg), [])
    g_ = c_form.alg
    if g_ != g:
        raise NotACocycle("ambient mismatch")
    q = c_form.degree()
    if q == 0:
        raise NotACocycle("cannot take a preimage of a scalar")
    if not differential(g, c_form).is_zero():
        raise NotACocycle("form is not closed")
    weights = c_form.weights()
    if max(weights) > g.cutoff:
        raise CutoffTooSmall(max(weights), g.cutoff, "coboundary preimage")
    particular = Form.zero(g)
    kernel_forms = []
    for k in weights:
        comp = c_form.weight_part(k)
        mat = d_matrix(g, q - 1, k)
        target = [comp.terms.get(m, Fraction(0)) for m in mat.row_labels]
        sol = solve(mat, target)
        if not sol:
            return NO_SOLUTION
        terms = {mat.col_labels[i]: v for i, v in enumerate(sol.particular) if v}
        particular = particular + Form(g, terms)
        for vec in sol.kernel:
            kf = Form(g, {mat.col_labels[i]: v for i, v in enumerate(vec) if v})
            kernel_forms.append(kf)
    return Solution(True, particular, kernel_forms)
