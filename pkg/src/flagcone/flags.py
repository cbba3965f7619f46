"""Flag f-vectors and the linear algebra around them.

All arithmetic is exact: counts are Python ints, everything else is
fractions.Fraction.  Subsets of [1, n] are bitmasks (see subsets.py).
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegerResult, ParseError, RankMismatch, SizeLimit
from .subsets import (as_mask, complement, elements_of, is_even_set,
                      subset_label, subsets_of)

FULL_TABLE_LIMIT = 20  # 2^n tables are materialized only up to this n


@dataclass(frozen=True)
class KParam:
    """Half-integer parameter k = two_k / 2 of the generalized Moebius and
    L-vector machinery."""
    two_k: int

    def __post_init__(self):
        if self.two_k < 1:
            raise ValueError("two_k must be a positive integer")

    @property
    def k(self):
        return Fraction(self.two_k, 2)

    @classmethod
    def parse(cls, text):
        text = str(text).strip()
        try:
            if "/" in text:
                p, q = text.split("/")
                k = Fraction(int(p), int(q))
            else:
                k = Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad k value {text!r}; use j/2 form") from exc
        two_k = 2 * k
        if two_k.denominator != 1 or two_k < 1:
            raise ParseError(f"k must be a positive half-integer, got {text!r}")
        return cls(int(two_k))

    def __str__(self):
        if self.two_k % 2 == 0:
            return str(self.two_k // 2)
        return f"{self.two_k}/2"

    def scaled(self, ell):
        return KParam(self.two_k * ell)


class FlagVector:
    """f_S for every S subseteq [1, n]; entries are exact chain counts."""

    def __init__(self, rank, entries):
        self.rank = rank
        self.entries = dict(entries)

    @property
    def n(self):
        return self.rank - 1

    def __getitem__(self, subset):
        return self.entries[as_mask(subset, self.n)]

    def __eq__(self, other):
        return (isinstance(other, FlagVector) and self.rank == other.rank
                and self.entries == other.entries)

    def items(self):
        return sorted(self.entries.items())


class LVector:
    """L^{k,n+1}_S for every S subseteq [1, n]; exact rationals."""

    def __init__(self, rank, k, entries):
        self.rank = rank
        self.k = k
        self.entries = dict(entries)

    @property
    def n(self):
        return self.rank - 1

    def __getitem__(self, subset):
        return self.entries[as_mask(subset, self.n)]

    def __eq__(self, other):
        return (isinstance(other, LVector) and self.rank == other.rank
                and self.k == other.k and self.entries == other.entries)

    def items(self):
        return sorted(self.entries.items())


def flag_count(P, subset):
    """Number of chains of P whose rank set is exactly `subset`."""
    mask = as_mask(subset, P.n)
    if mask == 0:
        return 1
    sel = elements_of(mask)
    u = [1] * len(P.layers[sel[0]])
    for a, b in zip(sel, sel[1:]):
        dl = P.down_lists(a, b)
        u = [sum(u[i] for i in idxs) for idxs in dl]
    return sum(u)


def flag_f_vector(P):
    """The whole flag f-vector, by shared-prefix dynamic programming: the
    chain counts for S are extended one rank at a time, so every layer pair
    is traversed once per subset in which it is consecutive."""
    n = P.n
    if n > FULL_TABLE_LIMIT:
        raise SizeLimit(f"full flag vector materializes 2^{n} entries")
    entries = {0: 1}

    def extend(a, u, mask):
        for b in range(a + 1, n + 1):
            dl = P.down_lists(a, b)
            v = [sum(u[i] for i in idxs) for idxs in dl]
            sub = mask | (1 << (b - 1))
            entries[sub] = sum(v)
            extend(b, v, sub)

    for a in range(1, n + 1):
        u = [1] * len(P.layers[a])
        entries[1 << (a - 1)] = len(u)
        extend(a, u, 1 << (a - 1))
    return FlagVector(P.rank, entries)


def _superset_zeta(values, n):
    """In-place-style fast transform: out[U] = sum over T >= U of values[T]."""
    out = list(values)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if not mask & bit:
                out[mask] = out[mask] + out[mask | bit]
    return out


def _subset_zeta(values, n):
    """out[U] = sum over T <= U of values[T]."""
    out = list(values)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                out[mask] = out[mask] + out[mask ^ bit]
    return out


def l_vector(F, k):
    """L^{k,n+1}_S = (-1)^(n-|S|) * sum over T >= [1,n]\\S of (-1/2k)^|T| f_T,
    computed by a superset fast transform."""
    n = F.n
    w = Fraction(-1, k.two_k)
    h = [F.entries[m] * w ** m.bit_count() for m in subsets_of(n)]
    g = _superset_zeta(h, n)
    entries = {}
    for mask in subsets_of(n):
        comp = complement(mask, n)
        sign = -1 if (n - mask.bit_count()) % 2 else 1
        entries[mask] = sign * g[comp]
    return LVector(F.rank, k, entries)


def f_from_l(L, strict=True):
    """Invert the L transform: f_S = (2k)^|S| * sum over T <= [1,n]\\S of L_T.

    With strict=True a non-integer entry raises NonIntegerResult (the input
    was not the L-vector of a poset); otherwise the rational entries are
    returned in a FlagVector as-is.
    """
    n = L.n
    z = _subset_zeta([L.entries[m] for m in subsets_of(n)], n)
    entries = {}
    for mask in subsets_of(n):
        val = Fraction(L.k.two_k) ** mask.bit_count() * z[complement(mask, n)]
        if strict:
            if val.denominator != 1:
                raise NonIntegerResult(
                    f"f_{subset_label(mask) or 'empty'} = {val}")
            val = int(val)
        entries[mask] = val
    return FlagVector(L.rank, entries)


def alpha_map(q, r, F):
    """Entrywise rescaling x_S -> (r/q)^|S| x_S; carries the flag-vector cone
    for q-thick posets onto the one for r-thick posets."""
    scale = Fraction(r, q)
    entries = {m: v * scale ** m.bit_count() for m, v in F.entries.items()}
    if all(isinstance(v, int) or v.denominator == 1 for v in entries.values()):
        entries = {m: int(v) for m, v in entries.items()}
    return FlagVector(F.rank, entries)


@dataclass(frozen=True)
class LinearFunctional:
    """sum over S of a_S f_S(P) (f basis) or a_S L^k_S(P) (L basis).

    k matters only for the L basis, where the coefficients have no meaning
    without it.
    """
    rank: int
    basis: str                      # "f" or "L"
    coeffs: tuple                   # sorted ((mask, Fraction), ...)
    k: KParam | None = None

    @classmethod
    def make(cls, rank, basis, coeffs, k=None):
        if basis not in ("f", "L"):
            raise ValueError(f"basis must be 'f' or 'L', got {basis!r}")
        if basis == "L" and k is None:
            raise ValueError("L-basis functionals need a KParam")
        n = rank - 1
        table = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for subset, value in items:
            mask = as_mask(subset, n)
            value = Fraction(value)
            if value:
                table[mask] = table.get(mask, Fraction(0)) + value
        frozen = tuple(sorted((m, v) for m, v in table.items() if v))
        return cls(rank, basis, frozen, k)

    @property
    def n(self):
        return self.rank - 1

    def coeff_dict(self):
        return dict(self.coeffs)

    def evaluate(self, P):
        if P.rank != self.rank:
            raise RankMismatch(f"functional is for rank {self.rank}, "
                               f"poset has rank {P.rank}")
        if self.basis == "f":
            return sum((v * flag_count(P, m) for m, v in self.coeffs),
                       Fraction(0))
        L = l_vector(flag_f_vector(P), self.k)
        return sum((v * L.entries[m] for m, v in self.coeffs), Fraction(0))

    def evaluate_vector(self, entries):
        """Apply to an explicit coordinate table (mask -> value) in the same
        basis; absent coordinates count as 0."""
        return sum((v * entries.get(m, 0) for m, v in self.coeffs),
                   Fraction(0))


def convolve(p, q):
    """Split evaluation at a middle rank: for rank m+1 and n+1 operands the
    result is a rank m+n+2 functional with
    p * q (P) = sum over rank-(m+1) x of p([0,x]) q([x,1]).

    f basis:  f_S * f_T -> f at S u {m+1} u (T+m+1).
    L basis:  L_S * L_T -> 2k * L at S u (T+m+1).
    """
    if p.basis != q.basis:
        raise RankMismatch("convolution operands must share a basis")
    mid = p.rank
    rank = p.rank + q.rank
    table = {}
    if p.basis == "f":
        for s, a in p.coeffs:
            for t, b in q.coeffs:
                mask = s | (1 << (mid - 1)) | (t << mid)
                table[mask] = table.get(mask, Fraction(0)) + a * b
        return LinearFunctional.make(rank, "f", table)
    if p.k != q.k:
        raise RankMismatch("L-basis convolution operands must share k")
    factor = Fraction(p.k.two_k)
    for s, a in p.coeffs:
        for t, b in q.coeffs:
            mask = s | (t << mid)
            table[mask] = table.get(mask, Fraction(0)) + factor * a * b
    return LinearFunctional.make(rank, "L", table, p.k)


def change_basis(a, k=None):
    """Re-express a functional in the other basis so that its value on every
    poset is unchanged; involutive up to the basis tag.

    f -> L:  a'_T = sum over S <= comp(T) of (2k)^|S| a_S
    L -> f:  a'_U = (-1/2k)^|U| * sum over T >= comp(U) of (-1)^(n-|T|) a_T
    """
    n = a.n
    if a.basis == "f":
        if k is None and a.k is None:
            raise ValueError("target KParam needed to convert f -> L")
        k = k or a.k
        two_k = Fraction(k.two_k)
        src = a.coeff_dict()
        b = [src.get(m, Fraction(0)) * two_k ** m.bit_count()
             for m in subsets_of(n)]
        z = _subset_zeta(b, n)
        table = {m: z[complement(m, n)] for m in subsets_of(n)}
        return LinearFunctional.make(a.rank, "L", table, k)
    k = a.k
    src = a.coeff_dict()
    c = [src.get(m, Fraction(0)) * (-1 if (n - m.bit_count()) % 2 else 1)
         for m in subsets_of(n)]
    g = _superset_zeta(c, n)
    w = Fraction(-1, k.two_k)
    table = {m: w ** m.bit_count() * g[complement(m, n)]
             for m in subsets_of(n)}
    return LinearFunctional.make(a.rank, "f", table, k)


def ce_index(F, k):
    """Coefficients of the words over {c, e} obtained by writing the chain
    generating function in the variables e and (c - e)/(2k).

    Computed by literal expansion, independently of l_vector; the two must
    agree under "T = positions of e", which is property-tested.
    """
    n = F.n
    w = Fraction(1, k.two_k)
    coeffs = {m: Fraction(0) for m in subsets_of(n)}
    for s_mask, f_val in F.entries.items():
        if not f_val:
            continue
        # positions outside S contribute a fixed e; positions in S split
        # into c (+w) or e (-w)
        spread = {0: Fraction(f_val)}
        for i in range(n):
            bit = 1 << i
            if not s_mask & bit:
                continue
            nxt = {}
            for c_mask, val in spread.items():
                nxt[c_mask | bit] = nxt.get(c_mask | bit, Fraction(0)) + val * w
                nxt[c_mask] = nxt.get(c_mask, Fraction(0)) - val * w
            spread = nxt
        for c_mask, val in spread.items():
            coeffs[c_mask] += val
    words = {}
    for c_mask, val in coeffs.items():
        word = "".join("c" if c_mask & (1 << i) else "e" for i in range(n))
        words[word] = val
    return words


def is_c_ee_polynomial(F, k):
    """True iff every word whose e-positions are not an even set has
    coefficient 0, i.e. the generating function is a polynomial in c and ee."""
    n = F.n
    words = ce_index(F, k)
    for word, val in words.items():
        if not val:
            continue
        e_mask = sum(1 << i for i, ch in enumerate(word) if ch == "e")
        if not is_even_set(e_mask, n):
            return False
    return True


def word_subset(word):
    """e-positions of a ce-word, as a mask."""
    return sum(1 << i for i, ch in enumerate(word) if ch == "e")
