"""Graded posets with unique bottom and top, stored by cover relations.

Elements are dense integer ids 0..m-1.  The rank function increases by
exactly 1 along covers, so comparability coincides with cover-path
reachability and every maximal chain runs from rank 0 to rank n+1.
"""

import json

from .errors import CycleDetected, NoUniqueExtremes, NotComparable, NotGraded
from .subsets import as_mask, elements_of


class GradedPoset:
    """Immutable graded poset; all derived structure is cached lazily.

    `labels`, when present, carries construction coordinates for elements;
    they never influence order semantics.
    """

    def __init__(self, rank, ranks, covers, labels=None):
        self.rank = rank                      # rank of the top element (n+1)
        self.rank_of = list(ranks)            # element -> rank
        self.m = len(self.rank_of)
        self.up = [[] for _ in range(self.m)]
        self.down = [[] for _ in range(self.m)]
        for x, y in covers:
            self.up[x].append(y)
            self.down[y].append(x)
        for adj in self.up:
            adj.sort()
        for adj in self.down:
            adj.sort()
        self.layers = [[] for _ in range(rank + 1)]
        for x, r in enumerate(self.rank_of):
            self.layers[r].append(x)
        self.bottom = self.layers[0][0]
        self.top = self.layers[rank][0]
        self.labels = labels
        self._pos = None        # element -> position within its layer
        self._downlists = {}    # (a, b) -> per-layer-b tuple of layer-a positions
        self._up_masks = None
        self._down_masks = None

    # -- basic queries -------------------------------------------------

    @property
    def n(self):
        return self.rank - 1

    def covers(self):
        for x, ups in enumerate(self.up):
            for y in ups:
                yield (x, y)

    def num_covers(self):
        return sum(len(u) for u in self.up)

    def positions(self):
        if self._pos is None:
            self._pos = [0] * self.m
            for layer in self.layers:
                for i, x in enumerate(layer):
                    self._pos[x] = i
        return self._pos

    def down_lists(self, a, b):
        """For each element of layer b (in layer order), the positions within
        layer a of its layer-a ancestors.  Requires 0 <= a < b <= rank."""
        key = (a, b)
        cached = self._downlists.get(key)
        if cached is not None:
            return cached
        pos = self.positions()
        if b == a + 1:
            lists = tuple(tuple(sorted(pos[x] for x in self.down[y]))
                          for y in self.layers[b])
        else:
            prev = self.down_lists(a, b - 1)
            prev_pos = pos
            lists = []
            for y in self.layers[b]:
                acc = set()
                for z in self.down[y]:
                    acc.update(prev[prev_pos[z]])
                lists.append(tuple(sorted(acc)))
            lists = tuple(lists)
        self._downlists[key] = lists
        return lists

    def _masks(self):
        if self._up_masks is None:
            up_masks = [0] * self.m
            down_masks = [0] * self.m
            for r in range(self.rank, -1, -1):
                for x in self.layers[r]:
                    mask = 1 << x
                    for y in self.up[x]:
                        mask |= up_masks[y]
                    up_masks[x] = mask
            for r in range(self.rank + 1):
                for x in self.layers[r]:
                    mask = 1 << x
                    for y in self.down[x]:
                        mask |= down_masks[y]
                    down_masks[x] = mask
            self._up_masks = up_masks
            self._down_masks = down_masks
        return self._up_masks, self._down_masks

    def leq(self, x, y):
        up_masks, _ = self._masks()
        return bool(up_masks[x] & (1 << y))

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def comparable_pairs(self):
        """All (x, y) with x < y, ordered by (rank difference, x, y)."""
        pairs = [(x, y) for x in range(self.m) for y in range(self.m)
                 if self.lt(x, y)]
        pairs.sort(key=lambda p: (self.rank_of[p[1]] - self.rank_of[p[0]],
                                  p[0], p[1]))
        return pairs

    # -- intervals and selections ---------------------------------------

    def open_interval(self, x, y):
        """{ z : x < z < y }; raises NotComparable unless x < y."""
        if not self.lt(x, y):
            raise NotComparable(f"{x} < {y} does not hold")
        up_masks, down_masks = self._masks()
        mask = up_masks[x] & down_masks[y] & ~(1 << x) & ~(1 << y)
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def closed_interval(self, x, y):
        """The induced graded poset on [x, y], ranks shifted so x is bottom."""
        if x == y:
            raise NotComparable("closed_interval needs x < y")
        members = [x] + self.open_interval(x, y) + [y]
        member_set = set(members)
        base = self.rank_of[x]
        index = {z: i for i, z in enumerate(members)}
        ranks = [self.rank_of[z] - base for z in members]
        covers = [(index[z], index[w]) for z in members for w in self.up[z]
                  if w in member_set]
        return GradedPoset(self.rank_of[y] - base, ranks, covers)

    def rank_selected(self, subset):
        """The subposet on ranks in `subset` plus bottom and top, with ranks
        compressed to 0..|subset|+1."""
        mask = as_mask(subset, self.n)
        sel = elements_of(mask)
        new_rank = len(sel) + 1
        members = [self.bottom]
        ranks = [0]
        for i, r in enumerate(sel):
            members.extend(self.layers[r])
            ranks.extend([i + 1] * len(self.layers[r]))
        members.append(self.top)
        ranks.append(new_rank)
        index = {z: i for i, z in enumerate(members)}
        covers = []
        bounds = [0] + list(sel) + [self.rank]
        for i in range(len(bounds) - 1):
            a, b = bounds[i], bounds[i + 1]
            if b == a + 1:
                pairs = ((x, y) for x in self.layers[a] for y in self.up[x]
                         if self.rank_of[y] == b)
            else:
                dl = self.down_lists(a, b)
                layer_a = self.layers[a]
                pairs = ((layer_a[p], y)
                         for y, downs in zip(self.layers[b], dl)
                         for p in downs)
            covers.extend((index[x], index[y]) for x, y in pairs)
        return GradedPoset(new_rank, ranks, covers)

    def is_r_thick(self, r, method="definition"):
        """True iff every nonempty open interval has at least r elements.

        method "rank2" checks only intervals of rank 2, which suffices; both
        must agree and that agreement is property-tested.
        """
        if r <= 1:
            return True
        if method == "rank2":
            for x in range(self.m):
                seen = {}
                for y in self.up[x]:
                    for z in self.up[y]:
                        seen[z] = seen.get(z, 0) + 1
                if any(c < r for c in seen.values()):
                    return False
            return True
        if method != "definition":
            raise ValueError(f"unknown method {method!r}")
        up_masks, down_masks = self._masks()
        for x in range(self.m):
            for y in range(self.m):
                if self.rank_of[y] - self.rank_of[x] < 2 or not self.lt(x, y):
                    continue
                inner = up_masks[x] & down_masks[y] & ~(1 << x) & ~(1 << y)
                if inner.bit_count() < r:
                    return False
        return True

    def thickness(self):
        """Largest r such that the poset is r-thick; None when there is no
        nonempty open interval (rank-1 poset), i.e. r-thick for every r."""
        best = None
        for x in range(self.m):
            seen = {}
            for y in self.up[x]:
                for z in self.up[y]:
                    seen[z] = seen.get(z, 0) + 1
            for c in seen.values():
                if best is None or c < best:
                    best = c
        return best


def build_poset(rank, ranks, covers, labels=None):
    """Validate and build a GradedPoset.

    `ranks` maps arbitrary unique ids to ranks (dict, or list indexed by id);
    `covers` lists (lower, upper) id pairs.  Ids are remapped to dense ints.
    """
    if isinstance(ranks, dict):
        items = sorted(ranks.items())
    else:
        items = list(enumerate(ranks))
    if rank < 1:
        raise NotGraded(f"rank must be >= 1, got {rank}")
    ids = [i for i, _ in items]
    index = {i: k for k, (i, _) in enumerate(items)}
    rank_list = [r for _, r in items]
    for i, r in items:
        if not 0 <= r <= rank:
            raise NotGraded(f"element {i} has rank {r} outside [0, {rank}]")
    for r, want in ((0, "bottom"), (rank, "top")):
        count = sum(1 for rr in rank_list if rr == r)
        if count != 1:
            raise NoUniqueExtremes(f"{count} elements of rank {r} ({want})")
    seen = set()
    dense = []
    for x, y in covers:
        if x == y:
            raise CycleDetected(f"cover loop at {x}")
        if (x, y) in seen:
            continue
        seen.add((x, y))
        if (y, x) in seen:
            raise CycleDetected(f"covers {x}<{y} and {y}<{x}")
        if x not in index or y not in index:
            raise NotGraded(f"cover ({x}, {y}) uses unknown element")
        if rank_list[index[y]] - rank_list[index[x]] != 1:
            raise NotGraded(f"cover ({x}, {y}) does not raise rank by 1")
        dense.append((index[x], index[y]))
    has_up = [False] * len(ids)
    has_down = [False] * len(ids)
    for x, y in dense:
        has_up[x] = True
        has_down[y] = True
    for k, r in enumerate(rank_list):
        if r < rank and not has_up[k]:
            raise NotGraded(f"element {ids[k]} (rank {r}) has no upper cover")
        if r > 0 and not has_down[k]:
            raise NotGraded(f"element {ids[k]} (rank {r}) has no lower cover")
    new_labels = None
    if labels is not None:
        new_labels = {index[i]: v for i, v in labels.items()}
    return GradedPoset(rank, rank_list, dense, labels=new_labels)


def to_json_dict(P):
    return {
        "rank": P.rank,
        "elements": [{"id": x, "rank": P.rank_of[x]} for x in range(P.m)],
        "covers": sorted([x, y] for x, y in P.covers()),
    }


def from_json_dict(doc):
    ranks = {e["id"]: e["rank"] for e in doc["elements"]}
    if len(ranks) != len(doc["elements"]):
        raise NotGraded("duplicate element id")
    return build_poset(doc["rank"], ranks, [tuple(c) for c in doc["covers"]])


def save_poset(P, path):
    with open(path, "w") as fh:
        json.dump(to_json_dict(P), fh)


def load_poset(path):
    with open(path) as fh:
        return from_json_dict(json.load(fh))
