"""Weight-graded Lie algebra cohomology, slice by slice.

H^q_k = ker(d on the (q,k) slice) / im(d from the (q-1,k) slice), all over
exact rationals.  A (q, k) query needs algebra cutoff >= k; results for
k <= cutoff are truncation-stable.

Canonical representatives: closed single monomials are preferred (greedily,
in lexicographic order), the remainder is completed by reduced-echelon
vectors; for m0 the omega cocycles are returned verbatim whenever they span
the slice, since the explicit constructions downstream quote omega classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .errors import CutoffTooSmall, NotACocycle
from .forms import Form, differential, slice_basis
from .algebra import is_m0_like, load_preset


@lru_cache(maxsize=None)
def _slice_basis_cached(g, q, k):
    return tuple(slice_basis(g, q, k))


def weight_slice_basis(g, q, k):
    return list(_slice_basis_cached(g, q, k))


@dataclass(frozen=True)
class CohomologySlice:
    algebra: object
    q: int
    k: int
    basis: tuple                 # slice monomials, lexicographic
    cocycles: tuple              # coordinate vectors over basis
    coboundaries: tuple
    representatives: tuple       # Forms, one per cohomology class
    rep_vectors: tuple
    dimension: int = field(default=0)

    def vector_of(self, form):
        comp = form.weight_part(self.k).degree_part(self.q)
        if comp.terms != form.terms:
            raise NotACocycle(f"form is not homogeneous of (q={self.q}, k={self.k})")
        index = {m: i for i, m in enumerate(self.basis)}
        vec = [Fraction(0)] * len(self.basis)
        for m, c in form.terms.items():
            vec[index[m]] = c
        return vec


def _is_in_span(vectors, vec):
    if not vectors:
        return all(v == 0 for v in vec)
    cols = list(zip(*vectors))
    sol = linalg.solve(cols, vec)
    return bool(sol)


@lru_cache(maxsize=None)
def cohomology_slice(g, q, k):
    """Compute the full (q, k) slice data with canonical representatives."""
    if k > g.cutoff:
        raise CutoffTooSmall(k, g.cutoff, f"cohomology slice (q={q}, k={k})")
    basis = _slice_basis_cached(g, q, k)
    dmat = linalg.d_matrix(g, q, k)
    cocycles = tuple(tuple(v) for v in linalg.kernel_basis(dmat))
    if q == 0:
        cocycles = tuple(tuple(v) for v in ([[Fraction(1)]] if k == 0 else []))
    prev = linalg.d_matrix(g, q - 1, k) if q >= 1 else None
    cobs = []
    if prev is not None and prev.ncols:
        cols = prev.dense_rows()
        # image vectors = columns of the previous differential, reduced
        image_rows = [[cols[r][c] for r in range(prev.nrows)] for c in range(prev.ncols)]
        red, _ = linalg.rref(image_rows)
        cobs = [tuple(r) for r in red]
    coboundaries = tuple(cobs)
    dim = len(cocycles) - len(coboundaries)

    reps = _choose_representatives(g, q, k, basis, cocycles, coboundaries, dim)
    rep_vectors = tuple(tuple(_vec(basis, f)) for f in reps)
    return CohomologySlice(g, q, k, basis, cocycles, coboundaries,
                           tuple(reps), rep_vectors, dim)


def _vec(basis, form):
    index = {m: i for i, m in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for m, c in form.terms.items():
        vec[index[m]] = c
    return vec


def _choose_representatives(g, q, k, basis, cocycles, coboundaries, dim):
    if dim <= 0:
        return []
    # m0 preference: omega cocycles verbatim when they span the slice
    if is_m0_like(g) and all(g.weight(i) == i for i in g.indices) and q >= 2:
        from .mzero import omega, omega_index_lists
        lists = omega_index_lists(q - 1, k)
        if len(lists) == dim:
            forms = [omega(g, idx) for idx in lists]
            span = list(coboundaries)
            ok = True
            for f in forms:
                v = _vec(basis, f)
                if _is_in_span(span, v):
                    ok = False
                    break
                span.append(tuple(v))
            if ok:
                return forms
    # greedy pass: closed single monomials, lexicographic order
    chosen = []
    span = list(coboundaries)
    cocycle_set = list(cocycles)
    for i, mono in enumerate(basis):
        if len(chosen) == dim:
            break
        unit = [Fraction(0)] * len(basis)
        unit[i] = Fraction(1)
        if not _is_in_span(cocycle_set, unit):
            continue  # monomial not closed
        if _is_in_span(span, unit):
            continue
        chosen.append(Form(g, {mono: Fraction(1)}))
        span.append(tuple(unit))
    # completion: cocycles reduced modulo the coboundary echelon (zero on
    # coboundary pivot columns), re-echelonized, leading coefficient 1
    if len(chosen) < dim:
        cob_red, cob_pivots = linalg.rref([list(v) for v in coboundaries]) \
            if coboundaries else ([], [])
        reduced = []
        for z in cocycles:
            vec = list(z)
            for i, pc in enumerate(cob_pivots):
                f = vec[pc]
                if f:
                    vec = [a - f * b for a, b in zip(vec, cob_red[i])]
            if any(vec):
                reduced.append(vec)
        red, _ = linalg.rref(reduced) if reduced else ([], [])
        for vec in red:
            if len(chosen) == dim:
                break
            if _is_in_span(span, vec):
                continue
            chosen.append(Form(g, {basis[i]: v for i, v in enumerate(vec) if v}))
            span.append(tuple(vec))
    return chosen


def betti(g, q, k):
    """dim H^q_k as a kernel/image dimension difference on slices."""
    return cohomology_slice(g, q, k).dimension


def representatives(g, q, k):
    return list(cohomology_slice(g, q, k).representatives)


@dataclass(frozen=True)
class ClassCoordinates:
    """Coordinates of a cohomology class over a slice's representative basis."""

    q: int
    k: int
    coords: tuple

    def is_zero(self):
        return all(c == 0 for c in self.coords)


def class_coordinates(slc, c_form):
    """Unique coordinates of [c] in the representative basis of the slice."""
    g = slc.algebra
    vec = slc.vector_of(c_form)
    if not _is_in_span(list(slc.cocycles), vec):
        raise NotACocycle("form is not closed")
    cols = [list(b) for b in slc.coboundaries] + [list(r) for r in slc.rep_vectors]
    if not cols:
        return ClassCoordinates(slc.q, slc.k, ())
    sol = linalg.solve(list(zip(*cols)), vec)
    if not sol:
        raise NotACocycle("cocycle does not reduce over the slice (internal error)")
    n_cob = len(slc.coboundaries)
    return ClassCoordinates(slc.q, slc.k, tuple(sol.particular[n_cob:]))


def class_coordinates_form(g, c_form):
    """Weight-by-weight class coordinates of a closed, degree-homogeneous form;
    returns {weight: ClassCoordinates} for weights with nonzero slices."""
    if c_form.is_zero():
        return {}
    q = c_form.degree()
    if not differential(g, c_form).is_zero():
        raise NotACocycle("form is not closed")
    out = {}
    for k in c_form.weights():
        slc = cohomology_slice(g, q, k)
        out[k] = class_coordinates(slc, c_form.weight_part(k))
    return out


# -- partition counting -------------------------------------------------------

@lru_cache(maxsize=None)
def partition_count(q, k):
    """P_q(k): partitions of k into exactly q positive parts."""
    if q < 0 or k < 0:
        return 0
    if q == 0:
        return 1 if k == 0 else 0
    if k < q:
        return 0
    return partition_count(q - 1, k - 1) + partition_count(q, k - q)


# -- verification oracles -----------------------------------------------------

@dataclass(frozen=True)
class ReportRow:
    q: int
    k: int
    computed: int
    expected: int

    @property
    def match(self):
        return self.computed == self.expected


@dataclass(frozen=True)
class Report:
    name: str
    rows: tuple

    @property
    def ok(self):
        return all(r.match for r in self.rows)

    def to_csv(self):
        lines = ["q,k,computed,expected,match"]
        for r in self.rows:
            lines.append(f"{r.q},{r.k},{r.computed},{r.expected},{str(r.match).lower()}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return json.dumps({
            "report": self.name,
            "ok": self.ok,
            "rows": [{"q": r.q, "k": r.k, "computed": r.computed,
                      "expected": r.expected, "match": r.match} for r in self.rows],
        }, indent=2, sort_keys=True)

    def to_table(self):
        lines = [f"{'q':>3} {'k':>4} {'computed':>9} {'expected':>9} match"]
        for r in self.rows:
            lines.append(f"{r.q:>3} {r.k:>4} {r.computed:>9} {r.expected:>9} "
                         f"{'ok' if r.match else 'MISMATCH'}")
        lines.append(f"-- {self.name}: {'all match' if self.ok else 'MISMATCHES FOUND'}")
        return "\n".join(lines)


def pentagonal_weights(q):
    return ((3 * q * q - q) // 2, (3 * q * q + q) // 2)


def check_goncharova(cutoff_q, cutoff_k, algebra=None):
    """dim H^q_k(L1) = 1 exactly at the pentagonal weights (3q^2 +- q)/2."""
    need = (3 * cutoff_q * cutoff_q + cutoff_q) // 2
    if cutoff_k < need:
        raise CutoffTooSmall(need, cutoff_k, "Goncharova check")
    g = algebra if algebra is not None else load_preset("L1", cutoff_k)
    if g.cutoff < cutoff_k:
        raise CutoffTooSmall(cutoff_k, g.cutoff, "Goncharova check")
    rows = []
    for q in range(1, cutoff_q + 1):
        lo, hi = pentagonal_weights(q)
        for k in range(1, cutoff_k + 1):
            expected = 1 if k in (lo, hi) else 0
            rows.append(ReportRow(q, k, betti(g, q, k), expected))
    return Report("goncharova", tuple(rows))


def check_m0_dimensions(cutoff_q, cutoff_k, algebra=None):
    """dim H^q_{k + q(q+1)/2}(m0) = P_q(k) - P_q(k-1) for positive k;
    the q = 1 sector is spanned by e^1, e^2 (weights 1 and 2)."""
    g = algebra if algebra is not None else load_preset("m0", cutoff_k)
    if g.cutoff < cutoff_k:
        raise CutoffTooSmall(cutoff_k, g.cutoff, "m0 dimension check")
    rows = []
    for q in range(1, cutoff_q + 1):
        shift = q * (q + 1) // 2
        for w in range(1, cutoff_k + 1):
            if q == 1:
                expected = 1 if w in (1, 2) else 0
            else:
                k = w - shift
                expected = partition_count(q, k) - partition_count(q, k - 1) if k >= 1 else 0
            rows.append(ReportRow(q, w, betti(g, q, w), expected))
    return Report("m0dims", tuple(rows))
