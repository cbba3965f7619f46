"""Cones of flag vectors: interval systems and blocking sets, the
nonnegativity validator, the first-r-atoms chain selection machinery, exact
limit vectors of one-parameter families, and the rank-8 facet certificate.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import (DegreeExceeded, InterpolationMismatch, NotThickEnough,
                     SizeLimit)
from .exprs import GlueP8Expr, PolyN, ThickenRangeExpr, ChainExpr
from .flags import KParam, LinearFunctional, flag_f_vector, l_vector
from .subsets import as_mask, elements_of, is_even_set, subsets_of

VALIDATE_LIMIT = 10   # interval-system enumeration guard


@dataclass(frozen=True)
class IntervalSystem:
    """Antichain of subintervals of [1, n]."""
    n: int
    intervals: tuple

    @classmethod
    def make(cls, n, intervals):
        ivs = tuple(sorted((int(u), int(v)) for u, v in intervals))
        for u, v in ivs:
            if not 1 <= u <= v <= n:
                raise ValueError(f"interval [{u}, {v}] not within [1, {n}]")
        for i, (u1, v1) in enumerate(ivs):
            for u2, v2 in ivs[i + 1:]:
                if u1 <= u2 and v2 <= v1 or u2 <= u1 and v1 <= v2:
                    raise ValueError(
                        f"[{u1},{v1}] and [{u2},{v2}] are nested")
        return cls(n, ivs)

    def masks(self):
        return [(((1 << v) - 1) ^ ((1 << (u - 1)) - 1))
                for u, v in self.intervals]

    def blocks(self, subset_mask):
        """True iff the subset meets every interval (vacuously for the empty
        system)."""
        return all(subset_mask & im for im in self.masks())

    def __str__(self):
        if not self.intervals:
            return "{}"
        return "".join(f"[{u},{v}]" for u, v in self.intervals)


def enumerate_interval_systems(n):
    """Every antichain of subintervals of [1, n], each exactly once, ordered
    by (number of intervals, lexicographic on the sorted interval list)."""
    if n > VALIDATE_LIMIT:
        raise SizeLimit(f"interval-system enumeration guarded at n <= "
                        f"{VALIDATE_LIMIT}")
    all_intervals = [(u, v) for u in range(1, n + 1)
                     for v in range(u, n + 1)]
    systems = [[]]
    frontier = [[]]
    while frontier:
        nxt = []
        for sys_ in frontier:
            u0, v0 = sys_[-1] if sys_ else (0, 0)
            for u, v in all_intervals:
                if u > u0 and v > v0:
                    nxt.append(sys_ + [(u, v)])
        systems.extend(nxt)
        frontier = nxt
    systems.sort(key=lambda s: (len(s), s))
    for s in systems:
        yield IntervalSystem.make(n, s)


def blockers(system):
    """All subsets of [1, n] blocking the system, as masks in increasing
    order; every subset for the empty system."""
    return [m for m in subsets_of(system.n) if system.blocks(m)]


@dataclass
class Verdict:
    valid: bool
    system: IntervalSystem | None = None
    value: Fraction | None = None
    systems_checked: int = 0

    def __bool__(self):
        return self.valid


def validate_functional(a, mode="graded", r=None, include_empty_system=True):
    """Decide whether sum a_S f_S is nonnegative on every graded poset of the
    functional's rank (mode "graded"), via the blocking criterion: the sum of
    coefficients over the blockers of every interval system must be >= 0.

    Mode "r_thick" decides nonnegativity of sum a_S f_S over all r-thick
    posets, which holds iff the rescaled coefficients a_S / r^(n-|S|) pass
    the graded test.
    """
    if a.basis != "f":
        raise ValueError("validate_functional needs an f-basis functional")
    n = a.n
    if n > VALIDATE_LIMIT:
        raise SizeLimit(f"validation enumerates interval systems; "
                        f"n <= {VALIDATE_LIMIT}")
    coeffs = a.coeff_dict()
    if mode == "r_thick":
        if r is None or r < 1:
            raise ValueError("r_thick mode needs r >= 1")
        coeffs = {m: v / Fraction(r) ** (n - m.bit_count())
                  for m, v in coeffs.items()}
    elif mode != "graded":
        raise ValueError(f"unknown mode {mode!r}")
    checked = 0
    for system in enumerate_interval_systems(n):
        if not include_empty_system and not system.intervals:
            continue
        checked += 1
        total = Fraction(0)
        masks = system.masks()
        for m, v in coeffs.items():
            if all(m & im for im in masks):
                total += v
        if total < 0:
            return Verdict(False, system, total, checked)
    return Verdict(True, None, None, checked)


def blocking_sum(a, system, r=None):
    coeffs = a.coeff_dict()
    if r is not None:
        n = a.n
        coeffs = {m: v / Fraction(r) ** (n - m.bit_count())
                  for m, v in coeffs.items()}
    return sum((v for m, v in coeffs.items() if system.blocks(m)),
               Fraction(0))


# -- first-r-atoms selection machinery --------------------------------------

def default_ordering(P):
    """A total order of each rank's elements (by id)."""
    return {r: tuple(sorted(layer)) for r, layer in enumerate(P.layers)}


def m_next(subset_mask, n, i):
    """Smallest j in [i, n+1] lying in the subset or equal to n+1."""
    for j in range(i, n + 1):
        if subset_mask & (1 << (j - 1)):
            return j
    return n + 1


def phi_first_atoms(P, ordering, r, x, y):
    """The first r atoms of [x, y] in the rank ordering; {y} if y covers x."""
    if P.rank_of[y] - P.rank_of[x] == 1:
        return (y,)
    rank_order = ordering[P.rank_of[x] + 1]
    covers_above = set(P.up[x])
    atoms = [z for z in rank_order if z in covers_above and P.leq(z, y)]
    if len(atoms) < r:
        raise NotThickEnough(
            f"interval [{x}, {y}] has {len(atoms)} atoms, needs {r}")
    return tuple(atoms[:r])


def maximal_chains(P):
    """All maximal chains bottom..top as tuples, in id order."""
    chains = []
    stack = [(P.bottom, [P.bottom])]
    while stack:
        x, path = stack.pop()
        if x == P.top:
            chains.append(tuple(path))
            continue
        for y in reversed(P.up[x]):
            stack.append((y, path + [y]))
    return chains


def chain_in_selection(P, ordering, r, subset_mask, chain_):
    n = P.n
    for i in range(1, n + 1):
        j = m_next(subset_mask, n, i)
        if chain_[i] not in phi_first_atoms(P, ordering, r,
                                            chain_[i - 1], chain_[j]):
            return False
    return True


def selection_F_S(P, r, ordering, subset):
    """The maximal chains selected for S by the first-r-atoms rule; exactly
    r^(n-|S|) f_S(P) of them when P is r-thick."""
    mask = as_mask(subset, P.n)
    return [c for c in maximal_chains(P)
            if chain_in_selection(P, ordering, r, mask, c)]


def psi_largest(P, ordering, r, chain_, i):
    """Largest j with p_i among the first r atoms of [p_{i-1}, p_j]."""
    for j in range(P.n + 1, i - 1, -1):
        if chain_[i] in phi_first_atoms(P, ordering, r,
                                        chain_[i - 1], chain_[j]):
            return j
    raise AssertionError("p_i is always phi of the covering interval")


def chain_interval_system(P, r, ordering, chain_):
    """The interval system attached to a maximal chain: minimal intervals
    among [i, psi(C, i)] over the i with psi(C, i) != n+1.  A chain belongs
    to the S selection iff S blocks its system."""
    n = P.n
    raw = []
    for i in range(1, n + 1):
        j = psi_largest(P, ordering, r, chain_, i)
        if j != n + 1:
            raw.append((i, j))
    minimal = [iv for iv in raw
               if not any(o != iv and iv[0] <= o[0] and o[1] <= iv[1]
                          for o in raw)]
    return IntervalSystem.make(n, sorted(set(minimal)))


# -- exact polynomial interpolation and limit vectors ------------------------

def fit_polynomial(xs, ys):
    """Exact coefficients (low to high) of the polynomial through the given
    points; plain Gaussian elimination over rationals."""
    npts = len(xs)
    A = [[Fraction(x) ** j for j in range(npts)] + [Fraction(y)]
         for x, y in zip(xs, ys)]
    for col in range(npts):
        piv = next(i for i in range(col, npts) if A[i][col])
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col]
        A[col] = [v / inv for v in A[col]]
        for i in range(npts):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [v - f * w for v, w in zip(A[i], A[col])]
    return [A[i][npts] for i in range(npts)]


def eval_polynomial(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def limit_l_vector(expr, k, norm_exp, order="inner_first"):
    """Degree-norm_exp coefficients of the L^k-vector of a one-parameter
    family, as exact rationals.

    Builds the family at N = 1..d+2 where d = (summed multiplicity degree of
    the expression) + 2, interpolates every entry as an exact polynomial in N
    through the first d+1 points, verifies the held-out last point
    (InterpolationMismatch otherwise), and verifies every coefficient above
    norm_exp vanishes (DegreeExceeded otherwise).
    """
    d = expr.degree_bound() + 2 if expr.needs_N() else 0
    xs = list(range(1, d + 3))
    vectors = []
    for x in xs:
        P = expr.build(N=x, order=order)
        vectors.append(l_vector(flag_f_vector(P), k))
    n = vectors[0].n
    out = {}
    for mask in subsets_of(n):
        ys = [vec.entries[mask] for vec in vectors]
        coeffs = fit_polynomial(xs[:-1], ys[:-1])
        if eval_polynomial(coeffs, xs[-1]) != ys[-1]:
            raise InterpolationMismatch(
                f"entry {elements_of(mask)} of {expr} is not a polynomial "
                f"of degree <= {d}")
        for j, c in enumerate(coeffs):
            if j > norm_exp and c:
                raise DegreeExceeded(
                    f"entry {elements_of(mask)} of {expr} grows like N^{j} "
                    f"> N^{norm_exp}")
        out[mask] = coeffs[norm_exp] if norm_exp < len(coeffs) \
            else Fraction(0)
    return out


def expected_limit_vector(n, intervals):
    """Closed-form limit for an interval-thickened chain family: (-1)^j on
    the union of each j-subcollection of the intervals, 0 elsewhere."""
    out = {}
    ivs = list(intervals)
    for pick in subsets_of(len(ivs)):
        mask = 0
        j = 0
        for idx, (u, v) in enumerate(ivs):
            if pick & (1 << idx):
                mask |= ((1 << v) - 1) ^ ((1 << (u - 1)) - 1)
                j += 1
        value = Fraction(-1 if j % 2 else 1)
        if mask in out and out[mask] != value:
            raise ValueError("interval unions collide with opposite signs")
        out[mask] = value
    return {m: v for m, v in out.items()}


# -- exact matrix rank -------------------------------------------------------

def matrix_rank(rows):
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    if not rows:
        return 0
    scaled = []
    for row in rows:
        fracs = [Fraction(v) for v in row]
        den = 1
        for v in fracs:
            den = den * v.denominator // _gcd(den, v.denominator)
        scaled.append([int(v * den) for v in fracs])
    m, ncols = len(scaled), len(scaled[0])
    A = [row[:] for row in scaled]
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, m) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, ncols):
                A[i][j] = (A[rank][col] * A[i][j]
                           - A[i][col] * A[rank][j]) // prev
            A[i][col] = 0
        prev = A[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# -- the rank-8 facet certificate --------------------------------------------

# the sixteen interval-thickened chain families whose limits are tight
TABLE_SYSTEMS = (
    ("P1", ()),
    ("P2", ((1, 2),)),
    ("P3", ((2, 3),)),
    ("P4", ((3, 4),)),
    ("P5", ((1, 2), (3, 4))),
    ("P6", ((2, 3), (4, 5))),
    ("P7", ((1, 2), (5, 6))),
    ("P8", ((1, 2), (3, 4), (5, 6))),
    ("P9", ((3, 6),)),
    ("P10", ((6, 7),)),
    ("P11", ((1, 2), (6, 7))),
    ("P12", ((1, 4), (6, 7))),
    ("P13", ((4, 5), (6, 7))),
    ("P14", ((2, 3), (4, 5), (6, 7))),
    ("P15", ((1, 2), (4, 7))),
    ("P16", ((2, 7),)),
)

FACET_F_COEFFS = {
    (1, 3, 5, 6): 1, (1, 3, 5): -1, (3, 5, 6): -1, (1, 5): 1,
    (1, 6): -1, (3, 5): 1, (3, 6): 1, (3,): -1,
}

# L^{1/2} form with the <= 0 orientation
FACET_L_LEQ0_COEFFS = {
    (4, 5): 1, (2, 3, 4, 5): 1, (5, 6): 1, (1, 2, 5, 6): 1,
    (2, 3, 6, 7): -1, (3, 4, 6, 7): -1, (4, 5, 6, 7): 1,
    (1, 2, 4, 5, 6, 7): 1,
}


def rank8_facet_functional(basis="f"):
    """The valid, tight rank-8 inequality: >= 0 in the f basis, and its
    L^{1/2} counterpart with the <= 0 orientation."""
    if basis == "f":
        return LinearFunctional.make(8, "f", list(FACET_F_COEFFS.items()))
    if basis == "L":
        return LinearFunctional.make(8, "L", list(FACET_L_LEQ0_COEFFS.items()),
                                     KParam(1))
    raise ValueError(f"basis must be 'f' or 'L', got {basis!r}")


def load_rank8_matrix():
    """(column masks, rows) of the fixture: the 20 normalized limit vectors
    over the 21 even subsets of [1, 7], columns in the published order."""
    with resources.files("flagcone.data").joinpath(
            "rank8_matrix.json").open() as fh:
        doc = json.load(fh)
    columns = [as_mask(c, 7) for c in doc["columns"]]
    rows = [tuple(int(v) for v in row) for row in doc["rows"]]
    return columns, rows


def family_expr(intervals, n=7):
    """One-parameter interval-thickened chain expression with multiplicity N
    on every interval."""
    expr = ChainExpr(n + 1)
    for u, v in sorted(intervals):
        expr = ThickenRangeExpr(PolyN([0, 1]), u, v, expr)
    return expr


def _restrict_to_columns(vector, columns):
    """Project a full L-table onto the fixture columns; everything outside
    must vanish."""
    col_set = set(columns)
    for mask, value in vector.items():
        if value and mask not in col_set:
            raise ValueError(
                f"limit vector has support outside the even columns at "
                f"{elements_of(mask)}")
    return tuple(vector.get(c, Fraction(0)) for c in columns)


def rank8_certificate(corpus_size=500, seed=20260810, order="inner_first",
                      progress=None):
    """Assemble the full facet certificate.  Checks:

    a. the sixteen table families' normalized limit L^{1/2}-vectors and the
       glued family's N^4 limit are computed exactly;
    b. the seventeen constructed vectors match seventeen distinct fixture
       rows (multiset containment; the three remaining rows are carried as
       fixture data only);
    c. the f-form functional change-bases exactly to the L-form, and the
       functional vanishes on all twenty fixture rows;
    d. the fixture matrix has rank 20 over the rationals;
    e. the f-form evaluates >= 0 on a generated half-Eulerian rank-8 corpus;
    f. every element of [1, 7] occurs in the L-form support (the inequality
       is not a convolution of lower-rank inequalities).
    """
    from .corpus import half_eulerian_rank8_corpus

    half = KParam(1)
    columns, rows = load_rank8_matrix()
    report = {"checks": {}, "ok": True}

    def record(name, ok, detail):
        report["checks"][name] = {"ok": bool(ok), "detail": detail}
        if not ok:
            report["ok"] = False
        if progress:
            progress(name, ok, detail)

    matched = {}
    used_rows = set()
    all_matched = True
    for name, intervals in TABLE_SYSTEMS:
        vec = limit_l_vector(family_expr(intervals), half,
                             norm_exp=len(intervals), order=order)
        row = _restrict_to_columns(vec, columns)
        hits = [i for i, r in enumerate(rows) if r == row]
        if len(hits) == 1 and hits[0] not in used_rows:
            matched[name] = hits[0] + 1
            used_rows.add(hits[0])
        else:
            all_matched = False
            matched[name] = None
    glued_vec = limit_l_vector(GlueP8Expr(None), half, norm_exp=4,
                               order=order)
    glued_row = _restrict_to_columns(glued_vec, columns)
    hits = [i for i, r in enumerate(rows) if r == glued_row]
    if len(hits) == 1 and hits[0] not in used_rows:
        matched["P(N)"] = hits[0] + 1
        used_rows.add(hits[0])
    else:
        all_matched = False
        matched["P(N)"] = None
    record("limit_vectors_match_fixture_rows", all_matched, matched)

    facet_f = rank8_facet_functional("f")
    facet_l = rank8_facet_functional("L")
    converted = change_basis_f_to_l(facet_f)
    even_part = {m: v for m, v in converted.items() if is_even_set(m, 7)}
    noneven_ok = all(not is_even_set(m, 7)
                     for m in set(converted) - set(even_part))
    basis_ok = noneven_ok and \
        even_part == {m: -v for m, v in facet_l.coeff_dict().items()}
    record("f_form_change_bases_to_l_form", basis_ok,
           "even-set coefficients equal minus the <=0-oriented L-form; the "
           "remaining coefficients sit on noneven sets, which vanish "
           "identically on half-Eulerian posets")

    col_index = dict(zip(columns, range(len(columns))))
    leq0 = facet_l.coeff_dict()
    vanishing = []
    for i, row in enumerate(rows):
        value = sum(v * row[col_index[m]] for m, v in leq0.items())
        vanishing.append(value)
    zeros_ok = all(v == 0 for v in vanishing)
    record("functional_vanishes_on_all_rows", zeros_ok,
           {"nonzero_rows": [i + 1 for i, v in enumerate(vanishing) if v]})

    rk = matrix_rank(rows)
    record("fixture_matrix_rank", rk == 20, {"rank": rk})

    support = set()
    for m in leq0:
        support.update(elements_of(m))
    record("support_covers_1_to_7", support == set(range(1, 8)),
           {"support": sorted(support)})

    negatives = []
    count = 0
    for name, poset in half_eulerian_rank8_corpus(corpus_size, seed=seed):
        count += 1
        value = facet_f.evaluate(poset)
        if value < 0:
            negatives.append((name, str(value)))
    record("f_form_nonnegative_on_corpus", not negatives and
           count >= corpus_size, {"corpus_size": count,
                                  "negatives": negatives})
    return report


def change_basis_f_to_l(functional, k=KParam(1)):
    """Nonzero L-basis coefficients of an f-basis functional (helper used by
    the certificate; the general operation lives in flags.change_basis)."""
    from .flags import change_basis
    return {m: v for m, v in change_basis(functional, k).coeffs if v}
