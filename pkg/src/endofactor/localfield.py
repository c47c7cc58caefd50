"""Exact arithmetic in p-adic fields, their finite extensions, and R.

A tower is an unramified step (canonical degree-f lift of the residue
field) followed by an Eisenstein step of degree e.  Elements carry exact
rational coordinates on the monomial basis u^a * pi^b, i.e. they live in
the number field Q(u, pi) and are read through its distinguished place
above p.  Every valuation, residue, square-class and Hilbert-symbol
decision is therefore exact; nothing is ever rounded.

The precision attribute of BaseField is kept as part of the public
contract (and validated), but with exact coordinates no operation can run
out of precision, so PrecisionExhausted is defensive rather than routine.

Supported bases: Q_p for any odd prime p (arbitrary towers with e*f >= 1),
Q_2 itself (trivial tower only; proper dyadic extensions are rejected),
and R (trivial tower only).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import _poly
from .errors import (
    DepthTooSmall,
    DyadicRamifiedUnsupported,
    NotEisenstein,
    UnsupportedCase,
    ZeroValuation,
)

_Q0 = Fraction(0)
_Q1 = Fraction(1)


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _vp(x, p):
    """p-adic valuation of a nonzero Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ZeroValuation("valuation of zero")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class BaseField:
    """The ground local field: Q_p (kind 'p-adic') or R (kind 'real')."""

    kind: str
    p: int = 0
    precision: int = 64

    def __post_init__(self):
        if self.kind not in ("p-adic", "real"):
            raise ValueError(f"unknown base field kind {self.kind!r}")
        if self.kind == "p-adic" and not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.precision < 8:
            raise ValueError("precision must be at least 8")

    @property
    def is_real(self):
        return self.kind == "real"

    def __repr__(self):
        return "R" if self.is_real else f"Q_{self.p}"


# ---------------------------------------------------------------------------
# residue fields
# ---------------------------------------------------------------------------

def _fp_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    # reduce modulo the monic modulus
    d = len(mod) - 1
    while len(out) > d:
        c = out.pop()
        if c:
            k = len(out) - d
            for j in range(d):
                out[k + j] = (out[k + j] - c * mod[j]) % p
    return _fp_trim(out)


def _fp_powmod(a, n, mod, p):
    result = [1]
    base = _fp_trim(a)
    while n:
        if n & 1:
            result = _fp_mulmod(result, base, mod, p)
        n >>= 1
        base = _fp_mulmod(base, base, mod, p)
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        lead_inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b):
            if r[-1] == 0:
                r.pop()
                continue
            c = (r[-1] * lead_inv) % p
            k = len(r) - len(b)
            for j in range(len(b)):
                r[k + j] = (r[k + j] - c * b[j]) % p
            r.pop()
        a, b = b, _fp_trim(r)
    return a


def _fp_irreducible(poly, p):
    """Rabin test for a monic polynomial over F_p."""
    f = len(poly) - 1
    x = [0, 1]
    if _fp_powmod(x, p ** f, poly, p) != _fp_trim(x):
        return False
    for ell in {d for d in range(2, f + 1) if f % d == 0 and _is_prime(d)}:
        probe = _fp_powmod(x, p ** (f // ell), poly, p)
        probe = _fp_trim([(a - b) % p for a, b in itertools.zip_longest(probe, x, fillvalue=0)])
        if len(_fp_gcd(probe, poly, p)) > 1:
            return False
    return True


def canonical_unramified_poly(p, f):
    """Lexicographically smallest monic irreducible of degree f over F_p."""
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        poly = list(tail) + [1]
        if _fp_irreducible(poly, p):
            return tuple(poly)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class ResidueField:
    """F_q = F_p[x]/(modulus), elements as coefficient tuples of length f."""

    def __init__(self, p, f, modulus):
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = tuple(c % p for c in modulus)
        self._dlog_table = None

    def element(self, coeffs):
        c = [x % self.p for x in coeffs]
        c = c[: self.f] + [0] * (self.f - len(c))
        return ResidueElement(self, tuple(c))

    @property
    def zero(self):
        return self.element([0])

    @property
    def one(self):
        return self.element([1])

    def _mul(self, a, b):
        out = _fp_mulmod(list(a), list(b), list(self.modulus), self.p)
        return tuple(out + [0] * (self.f - len(out)))

    def _pow(self, a, n):
        if n < 0:
            a = self._pow(a, self.q - 2)  # inverse
            n = -n
        out = _fp_powmod(list(a), n, list(self.modulus), self.p)
        return tuple(out + [0] * (self.f - len(out)))

    def encode(self, rep):
        n = 0
        for c in reversed(rep):
            n = n * self.p + c
        return n

    def decode(self, n):
        c = []
        for _ in range(self.f):
            n, r = divmod(n, self.p)
            c.append(r)
        return self.element(c)

    def elements(self):
        for n in range(self.q):
            yield self.decode(n)

    def is_square(self, elem):
        if not any(elem.rep):
            raise ZeroValuation("squareness of zero in the residue field")
        if self.p == 2:
            return True  # every element of a finite field of char 2
        return self._pow(elem.rep, (self.q - 1) // 2) == self.one.rep

    def multiplicative_generator(self):
        """Smallest-encoded generator of the cyclic group F_q^x."""
        order = self.q - 1
        prime_divs = [d for d in range(2, order + 1) if order % d == 0 and _is_prime(d)]
        for n in range(1, self.q):
            g = self.decode(n)
            if all(self._pow(g.rep, order // ell) != self.one.rep for ell in prime_divs):
                return g
        raise RuntimeError("no generator found")  # unreachable

    def dlog(self, elem):
        """Index of elem against the canonical generator (brute force)."""
        if self._dlog_table is None:
            g = self.multiplicative_generator()
            table = {}
            acc = self.one.rep
            for k in range(self.q - 1):
                table[acc] = k
                acc = self._mul(acc, g.rep)
            self._dlog_table = table
        try:
            return self._dlog_table[elem.rep]
        except KeyError:
            raise ZeroValuation("discrete log of zero") from None

    def first_nonsquare(self):
        for n in range(1, self.q):
            e = self.decode(n)
            if not self.is_square(e):
                return e
        raise UnsupportedCase("every unit is a square (q even?)")

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"F_{self.q}"


@dataclass(frozen=True)
class ResidueElement:
    """An element of a residue field, with its canonical representative."""

    field: ResidueField
    rep: tuple

    @property
    def q(self):
        return self.field.q

    def __mul__(self, other):
        return ResidueElement(self.field, self.field._mul(self.rep, other.rep))

    def __pow__(self, n):
        return ResidueElement(self.field, self.field._pow(self.rep, n))

    def __bool__(self):
        return any(self.rep)

    def __repr__(self):
        return f"{self.field}({list(self.rep)})"


# ---------------------------------------------------------------------------
# towers and their elements
# ---------------------------------------------------------------------------

class ExtensionTower:
    """A finite extension of the base field, as unramified + Eisenstein step.

    Use :func:`make_extension`; the constructor assumes validated input.
    The defining data never changes after construction; the only mutable
    state is memoization (inverses, oracle residue rings), so sharing
    between threads is safe.
    """

    def __init__(self, base, f, eis_uvecs, unram_poly):
        self.base = base
        self.f = f
        self.e = len(eis_uvecs) - 1
        self.n = self.e * self.f
        self.unram_poly = unram_poly              # tuple of f+1 Fractions
        self.eis = eis_uvecs                      # tuple of e+1 u-vectors
        if base.is_real:
            self.q = None
            self.residue = None
        else:
            self.q = base.p ** f
            self.residue = ResidueField(base.p, f, tuple(int(c) % base.p for c in unram_poly))
        self._fingerprint = (
            base.kind,
            base.p,
            f,
            tuple(unram_poly),
            tuple(tuple(v) for v in eis_uvecs),
        )
        self._inv_cache = {}
        self._oracle_rings = {}

    # -- construction of elements ------------------------------------------

    def zero(self):
        return self.from_coords([[0]])

    def one(self):
        return self.from_coords([[1]])

    def element(self, x):
        """Coerce an int, Fraction, or same-tower element."""
        if isinstance(x, FieldElement):
            if x.tower is not self and x.tower._fingerprint != self._fingerprint:
                raise ValueError("element belongs to a different tower")
            return FieldElement(self, x.coords)
        return self.from_coords([[Fraction(x)]])

    def from_coords(self, rows):
        """rows[b][a] = coefficient of u^a pi^b (shorter rows are padded)."""
        coords = []
        for b in range(self.e):
            row = rows[b] if b < len(rows) else []
            row = [Fraction(c) for c in row]
            if len(row) > self.f:
                raise ValueError("u-degree exceeds unramified degree")
            coords.append(tuple(row + [_Q0] * (self.f - len(row))))
        if len(rows) > self.e and any(any(Fraction(c) for c in r) for r in rows[self.e:]):
            raise ValueError("pi-degree exceeds ramification degree")
        return FieldElement(self, tuple(coords))

    def pi(self):
        """The uniformizer: the class of the Eisenstein variable."""
        if self.base.is_real:
            raise UnsupportedCase("no uniformizer over a real base")
        if self.e == 1:
            root = tuple(-c for c in self.eis[0])
            return self.from_coords([root])
        coords = [[_Q0] * self.f for _ in range(self.e)]
        coords[1][0] = _Q1
        return self.from_coords(coords)

    def ugen(self):
        """The lift of the residue-field generator (needs f >= 2)."""
        if self.f < 2:
            raise ValueError("tower has no unramified generator (f = 1)")
        coords = [[_Q0, _Q1]]
        return self.from_coords(coords)

    # -- ring plumbing -------------------------------------------------------

    def _u_mul(self, x, y):
        f = self.f
        out = [_Q0] * (2 * f - 1)
        for i in range(f):
            if not x[i]:
                continue
            for j in range(f):
                if y[j]:
                    out[i + j] += x[i] * y[j]
        for k in range(2 * f - 2, f - 1, -1):
            c = out[k]
            if c:
                out[k] = _Q0
                for j in range(f):
                    out[k - f + j] -= c * self.unram_poly[j]
        return tuple(out[:f])

    def _u_scale(self, x, s):
        return tuple(c * s for c in x)

    def _u_add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _mul_coords(self, x, y):
        e = self.e
        zero_row = tuple([_Q0] * self.f)
        out = [zero_row] * (2 * e - 1)
        for i in range(e):
            if not any(x[i]):
                continue
            for j in range(e):
                if any(y[j]):
                    out[i + j] = self._u_add(out[i + j], self._u_mul(x[i], y[j]))
        for k in range(2 * e - 2, e - 1, -1):
            c = out[k]
            if any(c):
                out[k] = zero_row
                for j in range(e):
                    out[k - e + j] = self._u_add(
                        out[k - e + j], self._u_scale(self._u_mul(c, self.eis[j]), -1)
                    )
        return tuple(out[:e])

    def _basis_elements(self):
        for b in range(self.e):
            for a in range(self.f):
                coords = [[_Q0] * self.f for _ in range(self.e)]
                coords[b][a] = _Q1
                yield self.from_coords(coords)

    def mult_matrix(self, x):
        """Matrix of y -> x*y on the flat basis (index b*f + a), over Q."""
        cols = []
        for mono in self._basis_elements():
            prod = self._mul_coords(x.coords, mono.coords)
            cols.append([prod[b][a] for b in range(self.e) for a in range(self.f)])
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def norm_to_base(self, x):
        """Norm down to the base field, as an exact Fraction."""
        if self.n == 1:
            return x.coords[0][0]
        return _poly.gauss_det(self.mult_matrix(x))

    def trace_to_base(self, x):
        if self.n == 1:
            return x.coords[0][0]
        m = self.mult_matrix(x)
        return sum((m[i][i] for i in range(self.n)), _Q0)

    def _invert(self, x):
        key = x.coords
        hit = self._inv_cache.get(key)
        if hit is not None:
            return hit
        if not any(any(r) for r in key):
            raise ZeroValuation("inverse of zero")
        if self.n == 1:
            inv = self.from_coords([[1 / key[0][0]]])
        else:
            rhs = [_Q1] + [_Q0] * (self.n - 1)
            sol = _poly.gauss_solve(self.mult_matrix(x), rhs)
            inv = self.from_coords(
                [[sol[b * self.f + a] for a in range(self.f)] for b in range(self.e)]
            )
        if len(self._inv_cache) > 256:
            self._inv_cache.clear()
        self._inv_cache[key] = inv
        return inv

    # -- canonical data ------------------------------------------------------

    def unit_nonsquare(self):
        """Canonical lift of the first non-square of the residue field."""
        if self.base.is_real:
            raise UnsupportedCase("no unit non-square over R")
        if self.base.p == 2:
            return self.element(5)
        ns = self.residue.first_nonsquare()
        return self.from_coords([[Fraction(c) for c in ns.rep]])

    def square_class_reps(self):
        """The canonical representatives of F^x / F^x2 for this tower."""
        if self.base.is_real:
            return [self.element(1), self.element(-1)]
        if self.base.p == 2:
            return [self.element(k) for k in (1, 3, 5, 7, 2, 6, 10, 14)]
        u = self.unit_nonsquare()
        pi = self.pi()
        return [self.one(), u, pi, u * pi]

    @property
    def is_trivial(self):
        return self.n == 1

    def __eq__(self, other):
        return isinstance(other, ExtensionTower) and self._fingerprint == other._fingerprint

    def __hash__(self):
        return hash(self._fingerprint)

    def __repr__(self):
        if self.n == 1:
            return repr(self.base)
        return f"{self.base}[f={self.f},e={self.e}]"


class FieldElement:
    """An element of a tower, with exact rational coordinates."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = coords

    # -- coercion ------------------------------------------------------------

    def _co(self, other):
        if isinstance(other, FieldElement):
            if other.tower._fingerprint != self.tower._fingerprint:
                raise ValueError("elements of different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.element(other)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FieldElement(
            self.tower,
            tuple(self.tower._u_add(a, b) for a, b in zip(self.coords, o.coords)),
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(
            self.tower, tuple(tuple(-c for c in row) for row in self.coords)
        )

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, self.tower._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.tower._invert(o)

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.tower._invert(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.tower._invert(self) ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            base = base * base
        return result

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __bool__(self):
        return any(any(row) for row in self.coords)

    def __hash__(self):
        return hash((self.tower._fingerprint, self.coords))

    # -- p-adic structure ------------------------------------------------------

    def is_zero(self):
        return not self

    def as_fraction(self):
        """The rational value; only for elements of a trivial tower."""
        if self.tower.n != 1:
            raise ValueError("element of a proper extension is not rational")
        return self.coords[0][0]

    def valuation(self):
        return valuation(self)

    def residue(self):
        """Image in the residue field (requires valuation >= 0)."""
        t = self.tower
        if t.base.is_real:
            raise UnsupportedCase("no residue field over R")
        if not self:
            return ResidueElement(t.residue, tuple([0] * t.f))
        v = self.valuation()
        if v < 0:
            raise ZeroValuation("residue of a non-integral element")
        if v > 0:
            return ResidueElement(t.residue, tuple([0] * t.f))
        p = t.base.p
        reps = []
        for c in self.coords[0]:
            # units always have p-integral coordinates on this basis
            assert not c or _vp(c, p) >= 0
            reps.append((c.numerator * pow(c.denominator, -1, p)) % p if c else 0)
        return ResidueElement(t.residue, tuple(reps))

    def unit_part(self):
        """x * pi^(-v(x)); exact."""
        v = self.valuation()
        return self * self.tower.pi() ** (-v)

    def __repr__(self):
        terms = []
        for b, row in enumerate(self.coords):
            for a, c in enumerate(row):
                if not c:
                    continue
                bits = []
                if c != 1 or (a == 0 and b == 0):
                    bits.append(str(c))
                if a == 1:
                    bits.append("u")
                elif a > 1:
                    bits.append(f"u^{a}")
                if b == 1:
                    bits.append("pi")
                elif b > 1:
                    bits.append(f"pi^{b}")
                terms.append("*".join(bits))
        if not terms:
            return "0"
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def make_extension(base, f, eis):
    """Build a tower over ``base`` from an unramified degree and an
    Eisenstein polynomial.

    ``eis`` is a list of coefficients, constant first, each an int, a
    Fraction, or a list of Fractions on the u-power basis of the
    unramified step.  It must be monic; for degree >= 2 it must be
    Eisenstein over the unramified step, for degree 1 its root is taken
    as the uniformizer and must have valuation 1.
    """
    if base.is_real:
        if f != 1 or len(eis) != 2:
            raise UnsupportedCase("only the trivial tower is supported over R")
        unram = (Fraction(0), Fraction(1))
        eis_uvecs = tuple(_norm_uvec(c, 1) for c in eis)
        if eis_uvecs[1] != (_Q1,):
            raise NotEisenstein("defining polynomial must be monic")
        return ExtensionTower(base, 1, eis_uvecs, unram)
    p = base.p
    if f < 1:
        raise ValueError("unramified degree must be >= 1")
    e = len(eis) - 1
    if e < 1:
        raise NotEisenstein("defining polynomial must have degree >= 1")
    if p == 2 and e * f > 1:
        raise DyadicRamifiedUnsupported(
            "extensions with residue characteristic 2 are not supported"
        )
    unram = tuple(Fraction(c) for c in canonical_unramified_poly(p, f))
    eis_uvecs = tuple(_norm_uvec(c, f) for c in eis)
    if eis_uvecs[-1] != tuple([_Q1] + [_Q0] * (f - 1)):
        raise NotEisenstein("defining polynomial must be monic")

    def vur(uvec):
        vals = [_vp(c, p) for c in uvec if c]
        return min(vals) if vals else None

    if e == 1:
        root_v = vur(tuple(-c for c in eis_uvecs[0]))
        if root_v != 1:
            raise NotEisenstein("degree-1 step needs a valuation-1 root")
    else:
        v0 = vur(eis_uvecs[0])
        if v0 != 1:
            raise NotEisenstein("constant term must be a unit times p")
        for k in range(1, e):
            vk = vur(eis_uvecs[k])
            if vk is not None and vk < 1:
                raise NotEisenstein(f"coefficient {k} must have positive valuation")
    return ExtensionTower(base, f, eis_uvecs, unram)


def _norm_uvec(c, f):
    if isinstance(c, (list, tuple)):
        row = [Fraction(x) for x in c]
        if len(row) > f:
            raise ValueError("u-degree exceeds unramified degree")
        return tuple(row + [_Q0] * (f - len(row)))
    return tuple([Fraction(c)] + [_Q0] * (f - 1))


def trivial_tower(base):
    """The base field itself, as a tower."""
    if base.is_real:
        return make_extension(base, 1, [-1, 1])
    return make_extension(base, 1, [-base.p, 1])


def valuation(a):
    """Normalized valuation with v(pi) = 1, via the norm to the base."""
    t = a.tower
    if t.base.is_real:
        raise UnsupportedCase("no valuation over R")
    if not a:
        raise ZeroValuation("valuation of zero")
    nrm = t.norm_to_base(a)
    vnum = _vp(nrm, t.base.p)
    assert vnum % t.f == 0, "norm valuation not divisible by f"
    return vnum // t.f


def is_square(a):
    """Squareness in the completion (exact)."""
    t = a.tower
    if not a:
        raise ZeroValuation("squareness of zero")
    if t.base.is_real:
        return a.as_fraction() > 0
    v = valuation(a)
    if v % 2:
        return False
    u = a * t.pi() ** (-v)
    if t.base.p == 2:
        return _mod8(u.as_fraction()) == 1
    return t.residue.is_square(u.residue())


def square_class(a):
    """Canonical representative r with a/r a square."""
    t = a.tower
    if not a:
        raise ZeroValuation("square class of zero")
    if t.base.is_real:
        return t.element(1) if a.as_fraction() > 0 else t.element(-1)
    v = valuation(a)
    u = a * t.pi() ** (-v)
    if t.base.p == 2:
        m = _mod8(u.as_fraction())
        rep = t.element(m) * t.pi() ** (v % 2)
        return rep
    unit_rep = t.one() if t.residue.is_square(u.residue()) else t.unit_nonsquare()
    return unit_rep * t.pi() ** (v % 2)


def _mod8(x):
    """An odd Fraction mod 8."""
    return (x.numerator * pow(x.denominator, -1, 8)) % 8


def hilbert_symbol(a, b):
    """(a, b) = +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution."""
    t = a.tower
    if not isinstance(b, FieldElement) or b.tower._fingerprint != t._fingerprint:
        b = t.element(b)
    if not a or not b:
        raise ZeroValuation("Hilbert symbol needs nonzero arguments")
    if t.base.is_real:
        return -1 if (a.as_fraction() < 0 and b.as_fraction() < 0) else 1
    if t.base.p == 2:
        # trivial tower only (proper dyadic towers cannot be built)
        return _hilbert2(a.as_fraction(), b.as_fraction())
    alpha, beta = valuation(a), valuation(b)
    ua = a * t.pi() ** (-alpha)
    ub = b * t.pi() ** (-beta)
    arg = t.element((-1) ** (alpha * beta)) * ua ** beta * ub ** (-alpha)
    return 1 if t.residue.is_square(arg.residue()) else -1


def _hilbert2(a, b):
    va, vb = _vp(a, 2), _vp(b, 2)
    u = a / Fraction(2) ** va
    w = b / Fraction(2) ** vb
    eps_u = (_mod8(u) - 1) // 2 % 2
    eps_w = (_mod8(w) - 1) // 2 % 2
    om_u = (_mod8(u) ** 2 - 1) // 8 % 2
    om_w = (_mod8(w) ** 2 - 1) // 8 % 2
    exp = eps_u * eps_w + va * om_w + vb * om_u
    return -1 if exp % 2 else 1


def norm_test(c, ext):
    """+1 iff c is a norm from the quadratic etale algebra ``ext``.

    ``ext`` only needs ``is_field``, ``delta`` and ``base_pm`` attributes, so
    this stays free of an import cycle with the etale module.
    """
    if not c:
        raise ZeroValuation("norm test of zero")
    if not ext.is_field:
        return 1
    return hilbert_symbol(c, ext.delta)


# ---------------------------------------------------------------------------
# the brute-force oracle
# ---------------------------------------------------------------------------

class _ResidueRing:
    """O/pi^N for the e*f <= 2 tower shapes, on plain integers.

    Elements are int tuples; the canonical encoding indexes a bytearray of
    squares, so the oracle scan is a linear pass with O(1) membership.
    """

    def __init__(self, tower, N):
        self.tower = tower
        self.N = N
        p = tower.base.p
        self.p = p
        e, f = tower.e, tower.f
        if e == 1 and f == 1:
            self.kind = "z"
            self.mods = (p ** N,)
        elif e == 1 and f == 2:
            self.kind = "u"
            self.mods = (p ** N, p ** N)
            m = tower.unram_poly
            self.m0 = int(m[0]) % self.mods[0]
            self.m1 = int(m[1]) % self.mods[0]
        elif e == 2 and f == 1:
            self.kind = "pi"
            m0 = (N + 1) // 2
            m1 = N // 2
            self.mods = (p ** m0, p ** m1)
            a0 = tower.eis[0][0]
            a1 = tower.eis[1][0]
            self.a0 = self._int(a0, self.mods[0])
            self.a1 = self._int(a1, self.mods[0])
        else:
            raise UnsupportedCase("oracle supports towers with e*f <= 2 only")
        self.size = self.mods[0] * (self.mods[1] if len(self.mods) > 1 else 1)
        self._squares = None

    @staticmethod
    def _int(fr, mod):
        fr = Fraction(fr)
        return (fr.numerator * pow(fr.denominator, -1, mod)) % mod if mod > 1 else 0

    def reduce(self, x):
        """A tower element with integral coordinates, reduced."""
        c = x.coords
        if self.kind == "z":
            return (self._int(c[0][0], self.mods[0]),)
        if self.kind == "u":
            return (self._int(c[0][0], self.mods[0]), self._int(c[0][1], self.mods[1]))
        return (self._int(c[0][0], self.mods[0]), self._int(c[1][0], self.mods[1]))

    def mul(self, x, y):
        if self.kind == "z":
            return ((x[0] * y[0]) % self.mods[0],)
        if self.kind == "u":
            M = self.mods[0]
            # u^2 = -m1*u - m0
            cross = x[1] * y[1]
            return (
                (x[0] * y[0] - self.m0 * cross) % M,
                (x[0] * y[1] + x[1] * y[0] - self.m1 * cross) % M,
            )
        M0, M1 = self.mods
        cross = x[1] * y[1]
        return (
            (x[0] * y[0] - self.a0 * cross) % M0,
            (x[0] * y[1] + x[1] * y[0] - self.a1 * cross) % M1,
        )

    def add(self, x, y):
        if self.kind == "z":
            return ((x[0] + y[0]) % self.mods[0],)
        return ((x[0] + y[0]) % self.mods[0], (x[1] + y[1]) % self.mods[1])

    def encode(self, x):
        if self.kind == "z":
            return x[0]
        return x[0] + self.mods[0] * x[1]

    def elements(self):
        if self.kind == "z":
            for a in range(self.mods[0]):
                yield (a,)
        else:
            for b in range(self.mods[1]):
                for a in range(self.mods[0]):
                    yield (a, b)

    def squares(self):
        if self._squares is None:
            flags = bytearray(self.size)
            for x in self.elements():
                flags[self.encode(self.mul(x, x))] = 1
            self._squares = flags
        return self._squares


def brute_force_norm_oracle(c, ext, depth):
    """Independent norm test: exhaustive search for c = a^2 - delta*b^2
    modulo pi^(v(c) + depth).

    Sound because a solution at that depth differs from c by a 1-unit deep
    enough to be a square; complete because representatives reduced to
    valuation 0 or 1 admit integral solutions when they are norms.
    """
    tower = ext.base_pm
    if tower.base.is_real:
        raise UnsupportedCase("oracle is p-adic only")
    if not ext.is_field:
        return 1
    pi = tower.pi()
    vc = valuation(c)
    c_n = c * pi ** (-2 * (vc // 2))
    vd = valuation(ext.delta)
    delta_n = ext.delta * pi ** (-2 * (vd // 2))
    bound = valuation(tower.element(4)) + valuation(delta_n)
    if depth <= bound:
        raise DepthTooSmall(f"depth must exceed v(4*delta) = {bound}")
    N = valuation(c_n) + depth
    ring = tower._oracle_rings.get(N)
    if ring is None:
        ring = _ResidueRing(tower, N)
        tower._oracle_rings[N] = ring
    squares = ring.squares()
    cbar = ring.reduce(c_n)
    dbar = ring.reduce(delta_n)
    for b in ring.elements():
        t = ring.add(cbar, ring.mul(dbar, ring.mul(b, b)))
        if squares[ring.encode(t)]:
            return 1
    return -1
