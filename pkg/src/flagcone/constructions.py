"""Constructions of the poset families used throughout: chains, Boolean
lattices, horizontal and range-restricted thickenings, vertical doubling,
interval-thickened chains, the matched-bipartite family and its regular swap,
and the glued rank-8 limit family.

Constructed elements carry coordinate labels (base element plus replica
indices in application order); labels never enter order semantics, but the
rank-8 gluing identifies shared layers by coordinate equality.
"""

from .errors import GlueMismatch, NotRegular, RangeOutOfBounds, SizeLimit
from .posets import GradedPoset, build_poset


def chain(rank):
    """Totally ordered poset with one element per rank 0..rank."""
    if rank < 1:
        raise ValueError("chain rank must be >= 1")
    ranks = list(range(rank + 1))
    covers = [(i, i + 1) for i in range(rank)]
    return GradedPoset(rank, ranks, covers, labels={i: i for i in ranks})


def boolean_lattice(n):
    """Subsets of an n-set ordered by inclusion; rank = cardinality."""
    if n < 1:
        raise ValueError("boolean_lattice needs n >= 1")
    if n > 12:
        raise SizeLimit(f"boolean_lattice({n}) has 2^{n} elements")
    ranks = [m.bit_count() for m in range(1 << n)]
    covers = [(m, m | (1 << i)) for m in range(1 << n)
              for i in range(n) if not m & (1 << i)]
    return GradedPoset(n, ranks, covers,
                       labels={m: m for m in range(1 << n)})


def _label(P, x):
    if P.labels is not None and x in P.labels:
        return P.labels[x]
    return x


def thicken(P, r):
    """Replace every interior element by r pairwise-incomparable copies;
    copies x_i < y_j iff x < y.  The result is r-thick and
    f_S(thicken(P, r)) = r^|S| f_S(P)."""
    if r < 1:
        raise ValueError("multiplicity must be >= 1")
    ranks = []
    labels = {}
    index = {}   # (x, i) -> new id; bottom/top keyed (x, 0)
    for x in range(P.m):
        interior = 0 < P.rank_of[x] < P.rank
        for i in range(1, r + 1) if interior else (0,):
            index[(x, i)] = len(ranks)
            ranks.append(P.rank_of[x])
            labels[index[(x, i)]] = (_label(P, x), i) if interior \
                else _label(P, x)
    covers = []
    for x, y in P.covers():
        xi = [(x, i) for i in range(1, r + 1)] if 0 < P.rank_of[x] < P.rank \
            else [(x, 0)]
        yj = [(y, j) for j in range(1, r + 1)] if 0 < P.rank_of[y] < P.rank \
            else [(y, 0)]
        covers.extend((index[a], index[b]) for a in xi for b in yj)
    return GradedPoset(P.rank, ranks, covers, labels=labels)


def thicken_range(P, r, u, v):
    """Replace elements of ranks u..v by r copies; copies with both ranks in
    the range satisfy x_i < y_j iff i = j and x < y, relations across the
    boundary replicate the original relation, everything else is unchanged."""
    if r < 1:
        raise ValueError("multiplicity must be >= 1")
    if not 1 <= u <= v <= P.rank - 1:
        raise RangeOutOfBounds(f"[{u}, {v}] not within [1, {P.rank - 1}]")
    in_range = [u <= P.rank_of[x] <= v for x in range(P.m)]
    ranks = []
    labels = {}
    index = {}
    for x in range(P.m):
        for i in range(1, r + 1) if in_range[x] else (0,):
            index[(x, i)] = len(ranks)
            ranks.append(P.rank_of[x])
            labels[index[(x, i)]] = (_label(P, x), i) if in_range[x] \
                else _label(P, x)
    covers = []
    for x, y in P.covers():
        if in_range[x] and in_range[y]:
            covers.extend((index[(x, i)], index[(y, i)])
                          for i in range(1, r + 1))
        elif in_range[x]:
            covers.extend((index[(x, i)], index[(y, 0)])
                          for i in range(1, r + 1))
        elif in_range[y]:
            covers.extend((index[(x, 0)], index[(y, j)])
                          for j in range(1, r + 1))
        else:
            covers.append((index[(x, 0)], index[(y, 0)]))
    return GradedPoset(P.rank, ranks, covers, labels=labels)


def vertical_double(P):
    """Replace every interior element x by a two-element chain x_1 < x_2;
    x_i < y_j whenever x < y.  Rank 2n+1 for a rank n+1 operand, and always
    half-Eulerian."""
    n1 = P.rank
    new_rank = 2 * n1 - 1
    ranks = [0]
    labels = {0: _label(P, P.bottom)}
    index = {(P.bottom, 0): 0}
    for x in range(P.m):
        if not 0 < P.rank_of[x] < n1:
            continue
        for i in (1, 2):
            index[(x, i)] = len(ranks)
            ranks.append(2 * P.rank_of[x] - 2 + i)
            labels[index[(x, i)]] = (_label(P, x), i)
    index[(P.top, 0)] = len(ranks)
    labels[len(ranks)] = _label(P, P.top)
    ranks.append(new_rank)
    covers = []
    for x in range(P.m):
        if 0 < P.rank_of[x] < n1:
            covers.append((index[(x, 1)], index[(x, 2)]))
    for x, y in P.covers():
        x_int = 0 < P.rank_of[x] < n1
        y_int = 0 < P.rank_of[y] < n1
        if x_int and y_int:
            covers.append((index[(x, 2)], index[(y, 1)]))
        elif y_int:
            covers.append((index[(P.bottom, 0)], index[(y, 1)]))
        elif x_int:
            covers.append((index[(x, 2)], index[(P.top, 0)]))
        else:
            covers.append((index[(P.bottom, 0)], index[(P.top, 0)]))
    return GradedPoset(new_rank, ranks, covers, labels=labels)


def thickened_chain(n, intervals, multiplicity):
    """Chain of rank n+1 with each interval [u, v] of ranks replaced by
    independently indexed copies: the composition of range thickenings over
    the interval system.  `multiplicity` is an int applied to every interval
    or a sequence aligned with the sorted intervals.

    For the system of maximal intervals of an even set S, the normalized
    L^{1/2}-vector of this family converges (in the multiplicity) to the
    +-1 vector supported on unions of intervals of S.
    """
    ivs = sorted((int(u), int(v)) for u, v in intervals)
    if isinstance(multiplicity, int):
        mults = [multiplicity] * len(ivs)
    else:
        mults = list(multiplicity)
        if len(mults) != len(ivs):
            raise ValueError("one multiplicity per interval required")
    P = chain(n + 1)
    for (u, v), r in zip(ivs, mults):
        P = thicken_range(P, r, u, v)
    return P


def matched_bipartite_poset(m, rank):
    """x_1..x_m at rank 1 and y_1..y_m at rank 2 with x_i < y_j iff i = j,
    one element at every other rank.  Half-Eulerian for every m."""
    if rank < 3:
        raise ValueError("rank must be >= 3")
    ranks = [0] + [1] * m + [2] * m + list(range(3, rank + 1))
    xs = list(range(1, m + 1))
    ys = list(range(m + 1, 2 * m + 1))
    singles = {r: 2 * m + r - 2 for r in range(3, rank + 1)}
    covers = [(0, x) for x in xs]
    covers += [(x, y) for x, y in zip(xs, ys)]
    covers += [(y, singles[3]) for y in ys]
    covers += [(singles[r], singles[r + 1]) for r in range(3, rank)]
    return GradedPoset(rank, ranks, covers)


def regular_swap(P, new_edges):
    """Replace the covers between ranks 1 and 2 by `new_edges`, which must be
    a d-regular bipartite graph on exactly those two layers."""
    layer1 = set(P.layers[1])
    layer2 = set(P.layers[2])
    deg = {x: 0 for x in layer1 | layer2}
    for x, y in new_edges:
        if x not in layer1 or y not in layer2:
            raise NotRegular(f"edge ({x}, {y}) is not rank1 -> rank2")
        deg[x] += 1
        deg[y] += 1
    degrees = set(deg.values())
    if len(degrees) != 1 or degrees == {0}:
        raise NotRegular(f"degrees {sorted(degrees)} are not uniform")
    covers = [(x, y) for x, y in P.covers()
              if not (P.rank_of[x] == 1 and P.rank_of[y] == 2)]
    covers += [tuple(e) for e in new_edges]
    return build_poset(P.rank, list(P.rank_of), covers)


# -- the glued rank-8 family ----------------------------------------------

def _glued_part_ops(N):
    """The four operator compositions, innermost (applied first) to outermost.
    Part multiplicities are degree-4 polynomials in N overall, and the
    identified rank selections of the parts coincide coordinatewise."""
    return {
        "I": [((1, 7), N), ((4, 5), N + 1), ((2, 3), N + 1), ((1, 2), N + 1)],
        "II": [((1, 7), N), ((1, 5), N + 1), ((1, 3), N * N)],
        "III": [((6, 7), N), ((4, 5), N + 2), ((1, 4), N * N - N + 2)],
        # The rank-1/2 multiplicity N+1 (not N+2) is what makes the glued
        # poset half-Eulerian; the N^4 limit coefficient is the same either
        # way.  See tests for the parity bookkeeping.
        "IV": [((2, 7), N ** 3 - N ** 2 + 2), ((1, 2), N + 1)],
    }


def _flat(label):
    """Nested replica label -> (base element, replica indices in application
    order)."""
    idxs = []
    while isinstance(label, tuple):
        label, i = label
        idxs.append(i)
    return label, tuple(reversed(idxs))


def _flat_labels(P):
    return [_flat(_label(P, x))[1] for x in range(P.m)]


def _layer_relation(P, flats, a, b):
    """Comparable coordinate pairs between layers a < b."""
    dl = P.down_lists(a, b)
    layer_a = P.layers[a]
    rel = set()
    for y, downs in zip(P.layers[b], dl):
        fy = flats[y]
        for p in downs:
            rel.add((flats[layer_a[p]], fy))
    return rel


def _check_shared(parts, flats, name_a, name_b, shared_ranks):
    """Identified rank selections must match coordinatewise, as element sets
    and as relations."""
    A, B = parts[name_a], parts[name_b]
    fa, fb = flats[name_a], flats[name_b]
    for r in shared_ranks:
        sa = {fa[x] for x in A.layers[r]}
        sb = {fb[x] for x in B.layers[r]}
        if sa != sb:
            raise GlueMismatch(f"layer {r} of {name_a} and {name_b} differ")
    ranks = sorted(shared_ranks)
    for i, a in enumerate(ranks):
        for b in ranks[i + 1:]:
            if _layer_relation(A, fa, a, b) != _layer_relation(B, fb, a, b):
                raise GlueMismatch(
                    f"relation {a}->{b} of {name_a} and {name_b} differ")


def glued_rank8_poset(N, order="inner_first"):
    """The rank-8 half-Eulerian family: four interval-thickened chains glued
    along common bottom, top, the {4,5,6,7} selection of parts I and II, and
    the {6,7} selection of parts I, II and III.  The order is the transitive
    closure of the union of the parts' relations; covers are just the union
    of the parts' covers.  Its normalized L^{1/2}-vector converges at N^4.

    `order` picks the operator application order within each part; the two
    orders give isomorphic posets (range thickenings commute).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    ops = _glued_part_ops(N)
    if order == "outer_first":
        ops = {k: list(reversed(v)) for k, v in ops.items()}
    elif order != "inner_first":
        raise ValueError(f"unknown order {order!r}")
    parts = {}
    flats = {}
    for name, oplist in ops.items():
        P = chain(8)
        for (u, v), r in oplist:
            P = thicken_range(P, r, u, v)
        parts[name] = P
        flats[name] = _flat_labels(P)
    _check_shared(parts, flats, "I", "II", (4, 5, 6, 7))
    _check_shared(parts, flats, "I", "III", (6, 7))

    def key(name, rank, coords):
        if rank == 0:
            return ("bot",)
        if rank == 8:
            return ("top",)
        if rank in (4, 5) and name in ("I", "II"):
            return ("sh45", rank, coords)
        if rank in (6, 7) and name in ("I", "II", "III"):
            return ("sh67", rank, coords)
        return (name, rank, coords)

    ranks = {}
    labels = {}
    ids = {}
    covers = set()
    for name in ("I", "II", "III", "IV"):
        P = parts[name]
        fl = flats[name]
        local = []
        for x in range(P.m):
            kx = key(name, P.rank_of[x], fl[x])
            if kx not in ids:
                ids[kx] = len(ids)
                ranks[ids[kx]] = P.rank_of[x]
                labels[ids[kx]] = kx
            local.append(ids[kx])
        for x, y in P.covers():
            covers.add((local[x], local[y]))
    return build_poset(8, ranks, sorted(covers), labels=labels)
