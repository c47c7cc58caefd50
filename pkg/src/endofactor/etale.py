"""Quadratic etale algebras over a tower, with involution tau, norms,
traces, and characteristic polynomials over the ground field.

An algebra is presented as F_pm[rt]/(rt^2 - delta): elements are written
a + b*rt with a, b in the tower F_pm, and tau is b -> -b.  It is a field
iff delta is a non-square.  When delta is a square with a known root s
(split algebras are built with delta = 1, s = 1), the element corresponds
to the coordinate pair (a + b*s, a - b*s) of F_pm (+) F_pm and tau is the
coordinate swap.

The unitary construction tensors F_pm with a quadratic extension E of the
base field.  The tensor algebra reuses E's rt symbol (delta is the image
of delta_E), so E embeds coordinate-wise and the characteristic polynomial
of an element over E is the charpoly of an explicit m x m matrix with
entries in E.  No compositum and no p-adic square root is ever needed:
whether the tensor splits is decided by an exact square test.
"""

from __future__ import annotations

from fractions import Fraction

from . import _poly
from . import localfield
from .errors import (
    NotInFixedField,
    UnsupportedCase,
    ZeroValuation,
)
from .localfield import (
    ExtensionTower,
    FieldElement,
    ResidueField,
    is_square,
    norm_test,
    trivial_tower,
    valuation,
    _vp,
)


class QuadraticEtale:
    """F_pm[rt]/(rt^2 - delta); a quadratic field or the split algebra."""

    def __init__(self, base_pm, delta, *, split_root=None, unitary_base=None,
                 _checked=False):
        if not isinstance(delta, FieldElement):
            delta = base_pm.element(delta)
        if not delta:
            raise ZeroValuation("delta must be nonzero")
        self.base_pm = base_pm
        self.delta = delta
        self.split_root = split_root
        self.unitary_base = unitary_base
        self.is_field = not is_square(delta)
        if _checked and not self.is_field:
            raise UnsupportedCase("delta is a square; use split_algebra instead")
        self._fingerprint = ("etale", base_pm._fingerprint, delta.coords,
                             None if unitary_base is None else unitary_base.fingerprint)
        self._unit_data = None

    # -- element construction -----------------------------------------------

    def element(self, a, b=0):
        return EtaleElement(self, self.base_pm.element(a), self.base_pm.element(b))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def rt(self):
        """The square root of delta."""
        return self.element(0, 1)

    def from_pair(self, first, second):
        """Element with the given split coordinates (needs a known root)."""
        if self.split_root is None:
            raise UnsupportedCase("no explicit square root of delta is known")
        first = self.base_pm.element(first)
        second = self.base_pm.element(second)
        half = Fraction(1, 2)
        return self.element((first + second) * half,
                            (first - second) * half / self.split_root)

    def embed_ground(self, x):
        """Embed a base-field scalar (Fraction or trivial-tower element)."""
        if isinstance(x, FieldElement):
            x = x.as_fraction()
        return self.element(self.base_pm.element(Fraction(x)))

    @property
    def degree_over_ground(self):
        return 2 * self.base_pm.n

    def __eq__(self, other):
        return isinstance(other, QuadraticEtale) and self._fingerprint == other._fingerprint

    def __hash__(self):
        return hash(self._fingerprint)

    def __repr__(self):
        shape = "field" if self.is_field else "split"
        return f"Etale({self.base_pm!r}, delta={self.delta!r}, {shape})"


def quadratic_field(base_pm, delta):
    """The quadratic field extension F_pm(sqrt(delta)); delta non-square."""
    return QuadraticEtale(base_pm, delta, _checked=True)


def split_algebra(base_pm):
    """F_pm (+) F_pm, presented with delta = 1 and the evident root."""
    return QuadraticEtale(base_pm, base_pm.one(), split_root=base_pm.one())


class EtaleElement:
    """a + b*rt in a quadratic etale algebra."""

    __slots__ = ("algebra", "a", "b")

    def __init__(self, algebra, a, b):
        self.algebra = algebra
        self.a = a
        self.b = b

    # -- coercion -------------------------------------------------------------

    def _co(self, other):
        alg = self.algebra
        if isinstance(other, EtaleElement):
            if other.algebra._fingerprint == alg._fingerprint:
                return other
            ub = alg.unitary_base
            if ub is not None and other.algebra._fingerprint == ub.E._fingerprint:
                return ub.embed(other, alg)
            return None
        if isinstance(other, (int, Fraction)):
            return alg.element(other)
        if isinstance(other, FieldElement):
            if other.tower._fingerprint == alg.base_pm._fingerprint:
                return alg.element(other)
            if other.tower.is_trivial and other.tower.base == alg.base_pm.base:
                return alg.embed_ground(other)
            return None
        return None

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return EtaleElement(self.algebra, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return EtaleElement(self.algebra, -self.a, -self.b)

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
        d = self.algebra.delta
        return EtaleElement(
            self.algebra,
            self.a * o.a + d * (self.b * o.b),
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroValuation("element is not a unit in the etale algebra")
        ninv = n ** (-1)
        return EtaleElement(self.algebra, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.algebra.one()
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
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __hash__(self):
        return hash((self.algebra._fingerprint, self.a.coords, self.b.coords))

    # -- structure ----------------------------------------------------------------

    def tau(self):
        """The nontrivial automorphism over F_pm."""
        return EtaleElement(self.algebra, self.a, -self.b)

    def norm(self):
        """x * tau(x), an element of F_pm."""
        return self.a * self.a - self.algebra.delta * (self.b * self.b)

    def trace(self):
        """x + tau(x), an element of F_pm."""
        return self.a + self.a

    def is_unit(self):
        return bool(self.norm())

    def as_base(self):
        """The F_pm-value of a tau-fixed element; exact zero test on b."""
        if self.b:
            raise NotInFixedField("rt-coordinate is nonzero")
        return self.a

    def as_pair(self):
        """Split coordinates (needs the algebra's explicit root)."""
        s = self.algebra.split_root
        if s is None:
            raise UnsupportedCase("no explicit square root of delta is known")
        return (self.a + self.b * s, self.a - self.b * s)

    def __repr__(self):
        if not self:
            return "0"
        parts = []
        if self.a:
            parts.append(repr(self.a))
        if self.b:
            if self.b == self.algebra.base_pm.one():
                parts.append("s")
            else:
                parts.append(" + ".join(f"{t}*s" for t in repr(self.b).split(" + ")))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------

def tau(x):
    return x.tau()


def norm_trace(x):
    """(norm, trace) of an etale element, both in F_pm."""
    return (x.norm(), x.trace())


def sgn_value(c, ext):
    """The norm character of F_i/F_pm at c in F_pm^x."""
    return norm_test(c, ext)


def charpoly_over(x, ground="F"):
    """Characteristic polynomial of multiplication by x.

    ground "F": over the base field, degree 2*[F_pm:F], Fraction
    coefficients (constant first).  ground "E": over the unitary quadratic
    extension, degree [F_pm:F], coefficients are elements of E.
    """
    alg = x.algebra
    tower = alg.base_pm
    if ground == "F":
        n = tower.n
        if n == 1:
            return [x.norm().as_fraction(), -x.trace().as_fraction(), Fraction(1)]
        A = tower.mult_matrix(x.a)
        B = tower.mult_matrix(x.b)
        D = tower.mult_matrix(alg.delta)
        DB = _poly.mat_mul(D, B)
        top = [A[i] + DB[i] for i in range(n)]
        bot = [B[i] + A[i] for i in range(n)]
        return _poly.charpoly(top + bot, Fraction(1))
    if ground == "E":
        ub = alg.unitary_base
        if ub is None:
            raise UnsupportedCase("charpoly over E needs a unitary tensor algebra")
        n = tower.n
        E = ub.E
        A = tower.mult_matrix(x.a)
        B = tower.mult_matrix(x.b)
        mat = [
            [E.element(A[i][j], B[i][j]) for j in range(n)]
            for i in range(n)
        ]
        return _poly.charpoly(mat, E.one())
    raise ValueError(f"unknown ground {ground!r}")


def norm_to_ground(x):
    """Norm from the etale algebra all the way down to the base field."""
    return x.algebra.base_pm.norm_to_base(x.norm())


def trace_to_ground(x):
    """Trace from the etale algebra down to the base field."""
    return x.algebra.base_pm.trace_to_base(x.trace())


# ---------------------------------------------------------------------------
# the unitary quadratic extension E and its tame structure
# ---------------------------------------------------------------------------

class UnitaryBaseData:
    """A quadratic field extension E of the base, plus the derived tensor
    algebras F_pm (x) E with their split/field determination."""

    def __init__(self, base, delta_e):
        if base.is_real:
            raise UnsupportedCase("unitary cases over R are not supported")
        if base.p == 2:
            raise UnsupportedCase("unitary cases over a dyadic base are not supported")
        self.base = base
        self.F = trivial_tower(base)
        delta_e = self.F.element(delta_e)
        self.E = quadratic_field(self.F, delta_e)
        self.fingerprint = ("E", base.p, delta_e.coords)

    @property
    def delta_e(self):
        return self.E.delta

    def algebra_over(self, tower):
        """F_pm (x) E; a field iff delta_E stays a non-square in F_pm."""
        if tower.base != self.base:
            raise ValueError("tower lives over a different base field")
        delta_im = tower.element(self.delta_e.as_fraction())
        return QuadraticEtale(tower, delta_im, unitary_base=self)

    def embed(self, e, algebra):
        """Embed an element of E into a derived tensor algebra."""
        tower = algebra.base_pm
        return EtaleElement(
            algebra,
            tower.element(e.a.as_fraction()),
            tower.element(e.b.as_fraction()),
        )

    # -- tame structure of E (uniformizer, residue field, valuation) -----------

    def _data(self):
        if self.E._unit_data is None:
            p = self.base.p
            d = self.delta_e.as_fraction()
            v = _vp(d, p)
            k = (v - (v % 2)) // 2
            dprime = d / Fraction(p) ** (2 * k)
            ramified = bool(v % 2)
            if ramified:
                pi_e = self.E.element(0, Fraction(1) / Fraction(p) ** k)
                res = ResidueField(p, 1, (0, 1))
            else:
                pi_e = self.E.embed_ground(p)
                dbar = (dprime.numerator * pow(dprime.denominator, -1, p)) % p
                res = ResidueField(p, 2, ((-dbar) % p, 0, 1))
            self.E._unit_data = (ramified, k, dprime, pi_e, res)
        return self.E._unit_data

    @property
    def ramified(self):
        return self._data()[0]

    def uniformizer(self):
        return self._data()[3]

    def residue_field(self):
        return self._data()[4]

    def e_valuation(self, x):
        """Normalized valuation on E (v(uniformizer) = 1)."""
        if not x:
            raise ZeroValuation("valuation of zero")
        nrm = x.norm().as_fraction()
        v = _vp(nrm, self.base.p)
        ramified = self._data()[0]
        if ramified:
            return v
        assert v % 2 == 0
        return v // 2

    def e_residue(self, x):
        """Residue of a unit of E in the canonical residue field."""
        ramified, k, dprime, pi_e, res = self._data()
        if self.e_valuation(x) != 0:
            raise ZeroValuation("residue of a non-unit")
        p = self.base.p
        a = x.a.as_fraction()
        b = x.b.as_fraction() * Fraction(p) ** k
        if ramified:
            return res.element([_mod_p(a, p)])
        return res.element([_mod_p(a, p), _mod_p(b, p)])

    def sgn(self, x):
        """The norm character sgn_{E/F} on F^x."""
        if isinstance(x, FieldElement):
            x = x.as_fraction()
        return localfield.hilbert_symbol(self.F.element(x), self.E.delta)

    def __eq__(self, other):
        return isinstance(other, UnitaryBaseData) and self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"E = {self.base}(sqrt({self.delta_e!r}))"


def _mod_p(fr, p):
    fr = Fraction(fr)
    if fr == 0:
        return 0
    assert _vp(fr, p) >= 0
    return (fr.numerator * pow(fr.denominator, -1, p)) % p
