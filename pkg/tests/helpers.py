"""Independent oracles for the test suite.

Everything here recomputes quantities from first principles (brute-force
enumeration, the literal defining sums) without touching the fast paths in
the package, so the two sides of every comparison stay independent.
"""

from fractions import Fraction
from itertools import combinations

from flagcone.flags import FlagVector
from flagcone.subsets import complement, elements_of, subsets_of


def brute_chains(P):
    """Every chain of interior elements (as tuples of ids), by DFS over
    comparability."""
    interior = [x for x in range(P.m) if 0 < P.rank_of[x] < P.rank]
    chains = [()]
    stack = [(x, (x,)) for x in interior]
    while stack:
        x, path = stack.pop()
        chains.append(path)
        for y in interior:
            if P.rank_of[y] > P.rank_of[x] and P.lt(x, y):
                stack.append((y, path + (y,)))
    return chains


def brute_flag_vector(P):
    entries = {m: 0 for m in subsets_of(P.rank - 1)}
    for ch in brute_chains(P):
        mask = 0
        for x in ch:
            mask |= 1 << (P.rank_of[x] - 1)
        if len(ch) == mask.bit_count():
            entries[mask] += 1
    return FlagVector(P.rank, entries)


def literal_l_vector_entry(F, k, subset_mask):
    """The defining alternating sum, evaluated term by term."""
    n = F.rank - 1
    comp = complement(subset_mask, n)
    total = Fraction(0)
    for t in subsets_of(n):
        if t & comp == comp:
            total += Fraction(-1, k.two_k) ** t.bit_count() * F.entries[t]
    sign = -1 if (n - subset_mask.bit_count()) % 2 else 1
    return sign * total


def brute_interval_antichains(n):
    """All antichains of subintervals of [1, n], by filtering every subset of
    the interval list."""
    intervals = [(u, v) for u in range(1, n + 1) for v in range(u, n + 1)]
    out = []
    for size in range(len(intervals) + 1):
        for combo in combinations(intervals, size):
            if all(not (a[0] <= b[0] and b[1] <= a[1]) and
                   not (b[0] <= a[0] and a[1] <= b[1])
                   for a, b in combinations(combo, 2)):
                out.append(tuple(sorted(combo)))
    return set(out)


def brute_blockers(n, intervals):
    out = []
    for mask in subsets_of(n):
        members = set(elements_of(mask))
        if all(members & set(range(u, v + 1)) for u, v in intervals):
            out.append(mask)
    return out


def gauss_rank(rows):
    """Rank over the rationals by plain fraction Gaussian elimination."""
    A = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    for col in range(len(A[0]) if A else 0):
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        A[rank] = [v / A[rank][col] for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                f = A[i][col]
                A[i] = [v - f * w for v, w in zip(A[i], A[rank])]
        rank += 1
    return rank


def eulerian_fixtures():
    """(name, poset, KParam) triples that ought to be k-Eulerian."""
    from flagcone.constructions import (boolean_lattice, chain,
                                        glued_rank8_poset,
                                        matched_bipartite_poset, thicken)
    from flagcone.flags import KParam
    out = []
    for n in (1, 2, 3, 4):
        out.append((f"B{n}", boolean_lattice(n), KParam(2)))
    for j in (1, 2, 3, 4):
        for rank in (3, 5):
            out.append((f"D^{j}(C{rank})", thicken(chain(rank), j),
                        KParam(j)))
    out.append(("bipartite", matched_bipartite_poset(2, 4), KParam(1)))
    out.append(("D2 bipartite", thicken(matched_bipartite_poset(2, 4), 2),
                KParam(2)))
    out.append(("glued(1)", glued_rank8_poset(1), KParam(1)))
    return out


def non_eulerian_fixtures():
    from flagcone.constructions import chain, thicken_range
    from flagcone.corpus import ds_subspace_witness
    from flagcone.flags import KParam
    return [
        ("C3 at k=1", chain(3), KParam(2)),
        ("D2_[1,1](C3)", thicken_range(chain(3), 2, 1, 1), KParam(1)),
        ("ds witness at k=1/2", ds_subspace_witness(), KParam(1)),
    ]
