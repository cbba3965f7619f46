"""Bitmask representation of rank subsets S of [1, n].

Element i of [1, n] is bit i-1.  All flag/L/functional tables are keyed by
these masks.
"""

from .errors import ParseError


def as_mask(subset, n=None):
    """Accept an int mask or an iterable of ranks and return the mask."""
    if isinstance(subset, int):
        mask = subset
    else:
        mask = 0
        for s in subset:
            if s < 1:
                raise ValueError(f"rank subset members must be >= 1, got {s}")
            mask |= 1 << (s - 1)
    if n is not None and mask >> n:
        raise ValueError(f"subset {elements_of(mask)} not within [1, {n}]")
    return mask


def elements_of(mask):
    """Sorted tuple of ranks in the mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subsets_of(n):
    """All masks over [1, n] in increasing numeric order."""
    return range(1 << n)


def complement(mask, n):
    return ((1 << n) - 1) ^ mask


def subset_label(mask):
    """Dash-joined label, e.g. {1,3,5} -> "1-3-5"; empty set -> ""."""
    return "-".join(str(s) for s in elements_of(mask))


def parse_subset(text, n=None):
    """Inverse of subset_label."""
    text = text.strip()
    if text in ("", "0", "{}", "empty"):
        return 0
    try:
        parts = [int(p) for p in text.replace(",", "-").split("-") if p]
    except ValueError as exc:
        raise ParseError(f"bad subset {text!r}") from exc
    return as_mask(parts, n)


def runs_of(mask):
    """Maximal intervals [u, v] of consecutive members of the subset."""
    runs = []
    i = 1
    start = None
    while mask or start is not None:
        inside = bool(mask & 1)
        if inside and start is None:
            start = i
        elif not inside and start is not None:
            runs.append((start, i - 1))
            start = None
        mask >>= 1
        i += 1
    return runs


def gaps_of(mask, n):
    """Maximal intervals of the complement of the subset within [1, n]."""
    return runs_of(complement(mask, n))


def is_even_set(subset, n=None):
    """True iff every maximal interval of the subset has even cardinality."""
    mask = as_mask(subset, n)
    return all((v - u + 1) % 2 == 0 for u, v in runs_of(mask))


def even_subsets(n):
    """All even masks over [1, n], in increasing numeric order."""
    return [m for m in subsets_of(n) if is_even_set(m)]
