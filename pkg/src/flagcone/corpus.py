"""Generated poset corpora: seeded random graded posets for agreement
testing, a half-Eulerian rank-8 corpus for the facet certificate, and the
frozen Dehn-Sommerville "by chance" witness.
"""

import random
from itertools import product

from .constructions import (glued_rank8_poset, matched_bipartite_poset,
                            thicken, thickened_chain)
from .eulerian import is_half_eulerian_parity
from .posets import GradedPoset


def random_graded_poset(rng, rank, max_layer=4):
    """Random graded poset with the given rank: random layer sizes and random
    covers, patched so every element has the covers gradedness requires."""
    sizes = [1] + [rng.randint(1, max_layer) for _ in range(rank - 1)] + [1]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    ranks = []
    for r, s in enumerate(sizes):
        ranks.extend([r] * s)
    covers = set()
    for r in range(rank):
        lows = range(offsets[r], offsets[r + 1])
        highs = range(offsets[r + 1], offsets[r + 2])
        for y in highs:
            for x in rng.sample(list(lows), rng.randint(1, len(lows))):
                if rng.random() < 0.7 or not any(
                        (x2, y) in covers for x2 in lows):
                    covers.add((x, y))
        for x in lows:
            if not any((x, y) in covers for y in highs):
                covers.add((x, rng.choice(list(highs))))
    return GradedPoset(rank, ranks, sorted(covers))


def random_corpus(seed, count, ranks=(2, 6), max_layer=4):
    """Deterministic list of random graded posets with ranks covering the
    whole given range."""
    rng = random.Random(seed)
    lo, hi = ranks
    return [random_graded_poset(rng, lo + i % (hi - lo + 1), max_layer)
            for i in range(count)]


def even_interval_antichains(n):
    """Antichains of even-length subintervals of [1, n] (the systems whose
    interval-thickened chains can be half-Eulerian), ordered by size then
    lexicographically."""
    evens = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1, 2)]
    out = [[]]
    frontier = [[]]
    while frontier:
        nxt = []
        for sys_ in frontier:
            u0, v0 = sys_[-1] if sys_ else (0, 0)
            nxt.extend(sys_ + [(u, v)] for u, v in evens
                       if u > u0 and v > v0)
        out.extend(nxt)
        frontier = nxt
    out.sort(key=lambda s: (len(s), s))
    return [tuple(s) for s in out]


def half_eulerian_rank8_corpus(count, seed=0, verify=True):
    """Deterministic stream of (name, poset) pairs, every poset rank 8 and
    half-Eulerian: interval-thickened chains over even interval systems with
    uniform and mixed multiplicities, the matched-bipartite family, and small
    glued posets.  Candidates failing the parity verification are dropped
    (overlapping even systems are not always half-Eulerian)."""
    out = []

    def push(name, poset):
        if verify and not is_half_eulerian_parity(poset)[0]:
            return False
        out.append((name, poset))
        return len(out) >= count

    systems = even_interval_antichains(7)
    for m in range(1, 13):
        if push(f"bipartite(m={m},rank=8)", matched_bipartite_poset(m, 8)):
            return out
    for N in (1, 2):
        if push(f"GLUE_P8(N={N})", glued_rank8_poset(N)):
            return out
    for N in (1, 2, 3, 4):
        for sys_ in systems:
            name = "".join(f"[{u},{v}]" for u, v in sys_) or "chain"
            if push(f"D^{N} {name} (C8)", thickened_chain(7, sys_, N)):
                return out
    rng = random.Random(seed)
    multi = [s for s in systems if len(s) >= 2]
    for sys_ in multi:
        for mults in product((1, 2, 3), repeat=len(sys_)):
            if len(set(mults)) == 1:
                continue
            name = " ".join(f"D^{r}[{u},{v}]"
                            for (u, v), r in zip(sys_, mults)) + " (C8)"
            if push(name, thickened_chain(7, sys_, list(mults))):
                return out
    while len(out) < count:
        sys_ = rng.choice(multi)
        mults = [rng.randint(1, 5) for _ in sys_]
        name = " ".join(f"D^{r}[{u},{v}]"
                        for (u, v), r in zip(sys_, mults)) + " (C8)"
        if push(name, thickened_chain(7, sys_, mults)):
            return out
    return out


def thick_corpus(base_corpus, r):
    """Thickened copies of a corpus; every member is r-thick."""
    return [thicken(P, r) for P in base_corpus]


def ds_subspace_witness():
    """Frozen rank-5 graded poset whose flag vector satisfies every
    generalized Dehn-Sommerville equation at k = 1/2 although the poset is
    not half-Eulerian.

    Two rank-4 columns hang below a common top: in one, four rank-2 elements
    sit over two atoms and under two rank-3 elements so that the interval
    [bottom, column top] has one even-rank element too many; the other column
    is a pair of disjoint chains with one even-rank element too few.  The two
    parity defects cancel in every flag equation.  No such poset exists at
    rank <= 4: there the gap equations force every rank-2 interval to have
    exactly one middle element, which forces the parity characterization
    outright.
    """
    ranks = {
        0: 0,
        1: 1, 2: 1,                 # atoms of the defect column
        3: 2, 4: 2, 5: 2, 6: 2,    # two rank-2 elements over each atom
        7: 3, 8: 3,                 # rank-3 joins
        9: 4,                       # defect column top (+1)
        10: 1, 11: 1,               # two disjoint chains
        12: 2, 13: 2,
        14: 3, 15: 3,
        16: 4,                      # chain column top (-1)
        17: 5,
    }
    covers = [
        (0, 1), (0, 2), (0, 10), (0, 11),
        (1, 3), (1, 4), (2, 5), (2, 6),
        (3, 7), (5, 7), (4, 8), (6, 8),
        (7, 9), (8, 9),
        (10, 12), (11, 13),
        (12, 14), (13, 15),
        (14, 16), (15, 16),
        (9, 17), (16, 17),
    ]
    return GradedPoset(5, [ranks[i] for i in range(18)], covers)
