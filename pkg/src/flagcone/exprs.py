"""Construction expressions: a small operator language over chains, Boolean
lattices, thickenings, vertical doubling and the glued rank-8 family, with
multiplicities that may be integer polynomials in a formal parameter N.

Text form examples:

    D2(C2)                                  full thickening, diamond
    D[1,2]^2(C4)                            range thickening
    D[1,2]^{N+1} D[2,3]^{N+1} D[1,7]^{N} (C8)   one-parameter family
    VD(B(3))                                vertical doubling
    GLUE_P8(N=2)                            glued rank-8 poset

Operators apply right-to-left: the rightmost (innermost) acts on the atom
first.  Expressions round-trip to JSON.
"""

import re
from dataclasses import dataclass

from . import constructions as cons
from .errors import ParseError


class PolyN:
    """Integer polynomial in N, stored as a low-to-high coefficient tuple."""

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(int(c) for c in coeffs)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def parse(cls, text):
        text = text.strip().replace(" ", "")
        if not text:
            raise ParseError("empty multiplicity")
        coeffs = {}
        for sign, num, var, exp in re.findall(
                r"([+-]?)(\d*)(N?)(?:\^(\d+))?", text):
            if not num and not var:
                continue
            s = -1 if sign == "-" else 1
            c = int(num) if num else 1
            d = 0
            if var:
                d = int(exp) if exp else 1
            elif exp:
                raise ParseError(f"exponent without N in {text!r}")
            coeffs[d] = coeffs.get(d, 0) + s * c
        rebuilt = "".join(
            f"{sign or '+'}{num}{var}{'^' + exp if exp else ''}"
            for sign, num, var, exp in re.findall(
                r"([+-]?)(\d*)(N?)(?:\^(\d+))?", text) if num or var)
        if rebuilt.lstrip("+") != text.lstrip("+"):
            raise ParseError(f"bad multiplicity {text!r}")
        top = max(coeffs) if coeffs else 0
        return cls([coeffs.get(d, 0) for d in range(top + 1)])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if any(self.coeffs) else 0

    @property
    def is_constant(self):
        return self.degree == 0

    def __call__(self, N=None):
        if self.is_constant:
            return self.coeffs[0]
        if N is None:
            raise ValueError("polynomial multiplicity needs N")
        return sum(c * N ** d for d, c in enumerate(self.coeffs))

    def __eq__(self, other):
        return isinstance(other, PolyN) and self.coeffs == other.coeffs

    def __str__(self):
        if self.is_constant:
            return str(self.coeffs[0])
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            mag = abs(c)
            if d == 0:
                term = str(mag)
            else:
                term = ("" if mag == 1 else str(mag)) + \
                    ("N" if d == 1 else f"N^{d}")
            parts.append(("-" if c < 0 else "+") + term)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


@dataclass(frozen=True)
class ChainExpr:
    rank: int

    def build(self, N=None, order="inner_first"):
        return cons.chain(self.rank)

    def poset_rank(self):
        return self.rank

    def degree_bound(self):
        return 0

    def needs_N(self):
        return False

    def __str__(self):
        return f"C{self.rank}"

    def to_json(self):
        return {"type": "chain", "rank": self.rank}


@dataclass(frozen=True)
class BooleanExpr:
    n: int

    def build(self, N=None, order="inner_first"):
        return cons.boolean_lattice(self.n)

    def poset_rank(self):
        return self.n

    def degree_bound(self):
        return 0

    def needs_N(self):
        return False

    def __str__(self):
        return f"B{self.n}"

    def to_json(self):
        return {"type": "boolean", "n": self.n}


@dataclass(frozen=True)
class ThickenExpr:
    r: PolyN
    child: object

    def build(self, N=None, order="inner_first"):
        return cons.thicken(self.child.build(N, order), self.r(N))

    def poset_rank(self):
        return self.child.poset_rank()

    def degree_bound(self):
        return self.child.degree_bound() + self.r.degree

    def needs_N(self):
        return not self.r.is_constant or self.child.needs_N()

    def __str__(self):
        return f"D^{{{self.r}}}({self.child})"

    def to_json(self):
        return {"type": "thicken", "r": str(self.r),
                "child": self.child.to_json()}


@dataclass(frozen=True)
class ThickenRangeExpr:
    r: PolyN
    u: int
    v: int
    child: object

    def build(self, N=None, order="inner_first"):
        return cons.thicken_range(self.child.build(N, order), self.r(N),
                                  self.u, self.v)

    def poset_rank(self):
        return self.child.poset_rank()

    def degree_bound(self):
        return self.child.degree_bound() + self.r.degree

    def needs_N(self):
        return not self.r.is_constant or self.child.needs_N()

    def __str__(self):
        return f"D[{self.u},{self.v}]^{{{self.r}}}({self.child})"

    def to_json(self):
        return {"type": "thicken_range", "r": str(self.r),
                "u": self.u, "v": self.v, "child": self.child.to_json()}


@dataclass(frozen=True)
class VerticalDoubleExpr:
    child: object

    def build(self, N=None, order="inner_first"):
        return cons.vertical_double(self.child.build(N, order))

    def poset_rank(self):
        return 2 * self.child.poset_rank() - 1

    def degree_bound(self):
        return self.child.degree_bound()

    def needs_N(self):
        return self.child.needs_N()

    def __str__(self):
        return f"VD({self.child})"

    def to_json(self):
        return {"type": "vertical_double", "child": self.child.to_json()}


@dataclass(frozen=True)
class GlueP8Expr:
    n_value: int | None = None   # None means the family parameter N is free

    def build(self, N=None, order="inner_first"):
        value = self.n_value if self.n_value is not None else N
        if value is None:
            raise ValueError("GLUE_P8 needs N")
        return cons.glued_rank8_poset(value, order=order)

    def poset_rank(self):
        return 8

    def degree_bound(self):
        # every part's summed multiplicity degree is 4
        return 4 if self.n_value is None else 0

    def needs_N(self):
        return self.n_value is None

    def __str__(self):
        return "GLUE_P8" if self.n_value is None else f"GLUE_P8(N={self.n_value})"

    def to_json(self):
        return {"type": "glue_p8", "N": self.n_value}


def from_json(doc):
    t = doc["type"]
    if t == "chain":
        return ChainExpr(doc["rank"])
    if t == "boolean":
        return BooleanExpr(doc["n"])
    if t == "thicken":
        return ThickenExpr(PolyN.parse(doc["r"]), from_json(doc["child"]))
    if t == "thicken_range":
        return ThickenRangeExpr(PolyN.parse(doc["r"]), doc["u"], doc["v"],
                                from_json(doc["child"]))
    if t == "vertical_double":
        return VerticalDoubleExpr(from_json(doc["child"]))
    if t == "glue_p8":
        return GlueP8Expr(doc.get("N"))
    raise ParseError(f"unknown expression type {t!r}")


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, word):
        self.skip_ws()
        return self.text.startswith(word, self.pos)

    def take(self, word):
        if not self.startswith(word):
            raise ParseError(f"expected {word!r} at position {self.pos} "
                             f"in {self.text!r}")
        self.pos += len(word)

    def take_int(self):
        self.skip_ws()
        m = re.match(r"\d+", self.text[self.pos:])
        if not m:
            raise ParseError(f"expected integer at position {self.pos} "
                             f"in {self.text!r}")
        self.pos += m.end()
        return int(m.group())

    def done(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_exponent(sc):
    if sc.peek() == "{":
        sc.take("{")
        end = sc.text.find("}", sc.pos)
        if end < 0:
            raise ParseError("unclosed '{' in multiplicity")
        poly = PolyN.parse(sc.text[sc.pos:end])
        sc.pos = end + 1
        return poly
    if sc.peek() == "N":
        sc.take("N")
        return PolyN([0, 1])
    return PolyN.const(sc.take_int())


def _parse_atom(sc):
    if sc.startswith("GLUE_P8"):
        sc.take("GLUE_P8")
        if sc.peek() == "(":
            sc.take("(")
            sc.take("N")
            sc.take("=")
            value = None if sc.peek() == "N" else sc.take_int()
            if value is None:
                sc.take("N")
            sc.take(")")
            return GlueP8Expr(value)
        return GlueP8Expr(None)
    if sc.startswith("VD"):
        sc.take("VD")
        sc.take("(")
        inner = _parse_expr(sc)
        sc.take(")")
        return VerticalDoubleExpr(inner)
    for letter, klass in (("C", ChainExpr), ("B", BooleanExpr)):
        if sc.startswith(letter):
            sc.take(letter)
            if sc.peek() == "(":
                sc.take("(")
                value = sc.take_int()
                sc.take(")")
            else:
                value = sc.take_int()
            return klass(value)
    if sc.peek() == "(":
        sc.take("(")
        inner = _parse_expr(sc)
        sc.take(")")
        return inner
    raise ParseError(f"expected an atom at position {sc.pos} in {sc.text!r}")


def _parse_expr(sc):
    ops = []
    while sc.startswith("D"):   # no atom starts with D
        sc.take("D")
        if sc.peek() == "[":
            sc.take("[")
            u = sc.take_int()
            sc.take(",")
            v = sc.take_int()
            sc.take("]")
            if sc.peek() == "^":
                sc.take("^")
                r = _parse_exponent(sc)
            else:
                raise ParseError("range thickening needs a multiplicity")
            ops.append(("range", r, u, v))
        elif sc.peek() == "^":
            sc.take("^")
            ops.append(("full", _parse_exponent(sc)))
        else:
            ops.append(("full", PolyN.const(sc.take_int())))
    expr = _parse_atom(sc)
    for op in reversed(ops):
        if op[0] == "full":
            expr = ThickenExpr(op[1], expr)
        else:
            expr = ThickenRangeExpr(op[1], op[2], op[3], expr)
    return expr


def parse_expr(text):
    sc = _Scanner(text)
    expr = _parse_expr(sc)
    if not sc.done():
        raise ParseError(f"trailing input at position {sc.pos} in {text!r}")
    return expr
