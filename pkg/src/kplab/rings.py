"""Exact coefficient rings: ZZ, QQ, Z/n and Laurent polynomials over QQ or Z/p.

Elements are plain Python ints (ZZ), ``fractions.Fraction`` (QQ), ``Mod``
and ``Laurent`` instances, so ordinary ``+ - *`` and ``==`` work on them.
A ``Ring`` object knows how to build, coerce, parse and print its elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class RingError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class Mod:
    """Residue class of an integer modulo ``n``."""

    __slots__ = ("v", "n")

    def __init__(self, v, n):
        self.v = v % n
        self.n = n

    def _other(self, o):
        if isinstance(o, Mod):
            if o.n != self.n:
                raise RingError(f"moduli differ: {self.n} vs {o.n}")
            return o.v
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else Mod(self.v + o, self.n)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else Mod(self.v - o, self.n)

    def __rsub__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else Mod(o - self.v, self.n)

    def __mul__(self, o):
        o = self._other(o)
        return NotImplemented if o is NotImplemented else Mod(self.v * o, self.n)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.n)

    def __eq__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.n == 0

    def __hash__(self):
        return hash((self.v, self.n))

    def __bool__(self):
        return self.v != 0

    def __pow__(self, e):
        return Mod(pow(self.v, e, self.n), self.n)

    def inverse(self):
        try:
            return Mod(pow(self.v, -1, self.n), self.n)
        except ValueError:
            raise ZeroDivisionError(f"{self.v} is not invertible mod {self.n}") from None

    def __repr__(self):
        return f"{self.v} (mod {self.n})"


class Laurent:
    """Finitely supported map exponent -> nonzero coefficient over a base ring."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs=None):
        self.base = base
        clean = {}
        for e, c in (coeffs or {}).items():
            c = base.coerce(c)
            if c != 0:
                clean[int(e)] = c
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, base, exp, coeff=1):
        return cls(base, {exp: coeff})

    def _other(self, o):
        if isinstance(o, Laurent):
            if o.base != self.base:
                raise RingError("Laurent base rings differ")
            return o
        if isinstance(o, (int, Fraction, Mod)):
            return Laurent(self.base, {0: o})
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out.get(e, self.base.zero()) + c
        return Laurent(self.base, out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.base, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, o):
        o = self._other(o)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, o):
        o = self._other(o)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, self.base.zero()) + c1 * c2
        return Laurent(self.base, out)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def evaluate(self, z):
        z = self.base.coerce(z)
        total = self.base.zero()
        for e, c in self.coeffs.items():
            total = total + c * (z ** e if e >= 0 else self.base.inv(z) ** -e)
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            cs = self.base.fmt(c)
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class Ring:
    kind: str  # "ZZ", "QQ", "ZMod", "Laurent"
    modulus: int = 0
    base: Ring | None = None

    def __post_init__(self):
        if self.kind == "ZMod" and self.modulus < 2:
            raise RingError("modulus must be at least 2")
        if self.kind == "Laurent" and (self.base is None or not self.base.is_field):
            raise RingError("Laurent polynomials are supported over QQ or Z/p only")

    def __str__(self):
        if self.kind == "ZMod":
            return f"Z/{self.modulus}"
        if self.kind == "Laurent":
            return f"Laurent({self.base})"
        return self.kind

    @property
    def is_field(self):
        return self.kind == "QQ" or (self.kind == "ZMod" and _is_prime(self.modulus))

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def gen(self):
        """The indeterminate x of a Laurent ring."""
        if self.kind != "Laurent":
            raise RingError(f"{self} has no indeterminate")
        return Laurent.monomial(self.base, 1)

    def coerce(self, x):
        k = self.kind
        if k == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return int(x)
            if isinstance(x, int):
                return x
        elif k == "QQ":
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
        elif k == "ZMod":
            if isinstance(x, Mod) and x.n == self.modulus:
                return x
            if isinstance(x, int):
                return Mod(x, self.modulus)
            if isinstance(x, Fraction):
                return Mod(x.numerator, self.modulus) * Mod(x.denominator, self.modulus).inverse()
        elif k == "Laurent":
            if isinstance(x, Laurent) and x.base == self.base:
                return x
            return Laurent(self.base, {0: self.base.coerce(x)})
        raise RingError(f"cannot coerce {x!r} into {self}")

    def inv(self, x):
        if self.kind == "QQ":
            return 1 / Fraction(x)
        if self.kind == "ZMod" and self.is_field:
            return self.coerce(x).inverse()
        raise RingError(f"division is not available in {self}")

    def fmt(self, x):
        """Text form of a base-ring element."""
        if self.kind == "ZMod":
            return str(x.v)
        if self.kind == "Laurent":
            return str(x)
        return str(x)

    def to_json(self, x):
        if self.kind == "Laurent":
            return [[e, self.base.fmt(c)] for e, c in x.coeffs.items()]
        return self.fmt(x)

    def parse_scalar(self, text):
        """Parse an integer or rational literal into the ring."""
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?", text)
        if not m:
            raise RingError(f"bad scalar literal {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise RingError("zero denominator")
        if self.kind == "Laurent":
            return self.coerce(self.base.coerce(Fraction(num, den)))
        return self.coerce(Fraction(num, den))


ZZ = Ring("ZZ")
QQ = Ring("QQ")


def Zmod(n):
    return Ring("ZMod", n)


def LaurentRing(base):
    return Ring("Laurent", base=base)


def parse_ring(text: str) -> Ring:
    t = text.strip()
    if t == "ZZ":
        return ZZ
    if t == "QQ":
        return QQ
    m = re.fullmatch(r"Z/(\d+)", t)
    if m:
        return Zmod(int(m.group(1)))
    m = re.fullmatch(r"Laurent\((.*)\)", t)
    if m:
        return LaurentRing(parse_ring(m.group(1)))
    raise RingError(f"unknown ring {text!r}")


# -- matrices -------------------------------------------------------------

class RingMatrix:
    """Sparse square matrix over a ring, indexed by an ordered index tuple."""

    def __init__(self, ring, index, entries=None):
        self.ring = ring
        self.index = tuple(index)
        self._pos = {x: i for i, x in enumerate(self.index)}
        self.entries = {}
        for (i, j), c in (entries or {}).items():
            if i not in self._pos or j not in self._pos:
                raise RingError(f"entry ({i!r}, {j!r}) outside the index set")
            c = ring.coerce(c)
            if c != 0:
                self.entries[(i, j)] = c

    @classmethod
    def _trusted(cls, ring, index, entries, pos=None):
        """Build from already-coerced nonzero entries without re-checking them."""
        m = cls.__new__(cls)
        m.ring, m.index = ring, index
        m._pos = pos if pos is not None else {x: i for i, x in enumerate(index)}
        m.entries = entries
        return m

    @classmethod
    def identity(cls, ring, index):
        return cls(ring, index, {(x, x): ring.one() for x in index})

    def _same(self, other):
        if self.index is other.index and self.ring == other.ring:
            return
        if self.index != other.index or self.ring != other.ring:
            raise RingError("matrix index sets or rings differ")

    def __getitem__(self, ij):
        return self.entries.get(ij, self.ring.zero())

    def __add__(self, other):
        self._same(other)
        out = dict(self.entries)
        zero = self.ring.zero()
        for ij, c in other.entries.items():
            v = out.get(ij, zero) + c
            if v == 0:
                out.pop(ij, None)
            else:
                out[ij] = v
        return RingMatrix._trusted(self.ring, self.index, out, self._pos)

    def __neg__(self):
        return RingMatrix._trusted(self.ring, self.index,
                                   {ij: -c for ij, c in self.entries.items()}, self._pos)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r):
        r = self.ring.coerce(r)
        return RingMatrix(self.ring, self.index, {ij: r * c for ij, c in self.entries.items()})

    def __mul__(self, other):
        self._same(other)
        by_row = {}
        for (j, k), c in other.entries.items():
            by_row.setdefault(j, []).append((k, c))
        out = {}
        zero = self.ring.zero()
        for (i, j), a in self.entries.items():
            for k, b in by_row.get(j, ()):
                out[(i, k)] = out.get((i, k), zero) + a * b
        out = {ij: c for ij, c in out.items() if c != 0}
        return RingMatrix._trusted(self.ring, self.index, out, self._pos)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.index == other.index and self.entries == other.entries

    __hash__ = None

    def is_zero(self):
        return not self.entries

    def restrict(self, rows, cols=None):
        """Entries with row in ``rows`` and column in ``cols``, as a dict."""
        rows = set(rows)
        cols = rows if cols is None else set(cols)
        return {(i, j): c for (i, j), c in self.entries.items() if i in rows and j in cols}

    def submatrix(self, index):
        index = tuple(index)
        keep = set(index)
        return RingMatrix(self.ring, index,
                          {ij: c for ij, c in self.entries.items() if ij[0] in keep and ij[1] in keep})

    def evaluate(self, z):
        """Substitute x = z in a Laurent matrix, giving a matrix over the base field."""
        if self.ring.kind != "Laurent":
            raise RingError("evaluation needs a Laurent matrix")
        base = self.ring.base
        return RingMatrix(base, self.index, {ij: c.evaluate(z) for ij, c in self.entries.items()})

    def rank(self):
        rows = {}
        for (i, j), c in self.entries.items():
            rows.setdefault(i, {})[self._pos[j]] = c
        return rank(self.ring, list(rows.values()))

    def to_json(self, label=str):
        return [[label(i), label(j), self.ring.to_json(c)]
                for (i, j), c in sorted(self.entries.items(),
                                        key=lambda kv: (self._pos[kv[0][0]], self._pos[kv[0][1]]))]

    def __repr__(self):
        return f"RingMatrix({len(self.index)}x{len(self.index)}, {len(self.entries)} nonzero over {self.ring})"


class Echelon:
    """Incrementally reduced sparse rows over a field."""

    def __init__(self, ring):
        if not ring.is_field:
            raise RingError(f"row reduction needs a field, got {ring}")
        self.ring = ring
        self.pivots = {}  # column -> row with leading entry 1 at that column

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row):
        ring = self.ring
        row = {c: ring.coerce(v) for c, v in row.items() if v != 0}
        while row:
            col = min(row, key=_col_key)
            piv = self.pivots.get(col)
            if piv is None:
                return row
            factor = row[col]
            for c, v in piv.items():
                nv = row.get(c, ring.zero()) - factor * v
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
        return row

    def add(self, row):
        """Insert a row; return True when it was independent of the rows so far."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row, key=_col_key)
        lead = self.ring.inv(row[col])
        self.pivots[col] = {c: v * lead for c, v in row.items()}
        return True

    def __contains__(self, row):
        return not self.reduce(row)


def rank(ring, rows):
    """Rank over a field of sparse row vectors given as ``{column: value}`` dicts."""
    ech = Echelon(ring)
    for row in rows:
        ech.add(row)
    return len(ech)


def _col_key(c):
    return (type(c).__name__, repr(c)) if not isinstance(c, int) else ("", c)
