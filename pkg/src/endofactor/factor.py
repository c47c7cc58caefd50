"""The transfer-factor engine.

Builds the characteristic polynomials attached to the endoscopic
parameters, evaluates the per-index quantities C_i for field indices on
the minus side, runs the norm character on each, applies the case's
character prefactors, and multiplies everything into an exact value on the
unit circle.  A full trace of every intermediate is kept so a run can be
audited line by line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _poly, forms
from .errors import (
    DivisionByZero,
    MatchFailure,
    NotInFixedField,
    UnsupportedCase,
    ValidationFailure,
    ZeroValuation,
)
from .etale import charpoly_over
from .localfield import FieldElement, hilbert_symbol, norm_test
from .params import (
    EndoscopicDatum,
    IndexEntry,
    RegularParam,
    TameCharacter,
    check_regularity,
    match_stable_classes,
    side_dimensions,
    validate_endoscopic,
    validate_group,
    validate_param,
)


@dataclass(frozen=True)
class UnitCircleValue:
    """An exact point e^(2*pi*i*angle) with a rational angle mod 1."""

    angle: Fraction

    def __post_init__(self):
        object.__setattr__(self, "angle", Fraction(self.angle) % 1)

    @classmethod
    def one(cls):
        return cls(Fraction(0))

    @classmethod
    def from_sign(cls, s):
        if s == 1:
            return cls(Fraction(0))
        if s == -1:
            return cls(Fraction(1, 2))
        raise ValueError(f"not a sign: {s!r}")

    def __mul__(self, other):
        return UnitCircleValue(self.angle + other.angle)

    def inverse(self):
        return UnitCircleValue(-self.angle)

    def negate(self):
        return UnitCircleValue(self.angle + Fraction(1, 2))

    @property
    def sign(self):
        """+1 or -1 when the value is real, else None."""
        if self.angle == 0:
            return 1
        if self.angle == Fraction(1, 2):
            return -1
        return None

    def render(self):
        if self.angle == 0:
            return "+1"
        if self.angle == Fraction(1, 2):
            return "-1"
        return f"exp(2*pi*i*{self.angle})"

    def __repr__(self):
        return self.render()


@dataclass
class CharPolyPack:
    """P, its side factors, and its derivative, over the case's ground.

    Coefficients are Fractions for ground "F" and elements of E for
    ground "E"; all lists are constant-term first.
    """

    ground: str
    P: list
    P_minus: list
    P_plus: list
    dP: list
    ext: object = None   # UnitaryBaseData when ground == "E"

    def scalar(self, x):
        if self.ground == "F":
            return Fraction(x)
        return self.ext.E.embed_ground(x)

    def zero(self):
        return Fraction(0) if self.ground == "F" else self.ext.E.zero()

    def at(self, poly, point):
        """Evaluate at a ground scalar (Fraction)."""
        return _poly.peval(poly, self.scalar(point), self.zero())

    def in_algebra(self, poly, value):
        """Evaluate at an element of one of the index algebras."""
        return _poly.peval(poly, value, value.algebra.zero())


def build_charpoly_pack(y, g, role="endoscopic"):
    """Exact product of the per-index characteristic polynomials of the
    eigenvalue data, with side sub-products and the formal derivative."""
    ground = g.info["ground"]
    if ground == "E":
        one = [g.E.E.one()]
    else:
        one = [Fraction(1)]
    sides = {"-": list(one), "+": list(one)}
    for en in y.entries:
        cp = charpoly_over(en.value, ground)
        sides[en.side] = _poly.pmul(sides[en.side], cp)
    P = _poly.pmul(sides["-"], sides["+"])
    return CharPolyPack(
        ground=ground,
        P=P,
        P_minus=sides["-"],
        P_plus=sides["+"],
        dP=_poly.pderiv(P),
        ext=g.E,
    )


_FORMULA = {
    ("symplectic", 0): "C = -eta*c*P'(y)*P(-1)*y^(1-d/2)",
    ("so_odd", 1): "C = -2*eta*c*P'(y)*P(-1)*y^((3-d)/2)*(1+y)/(y-1)",
    ("so_even", 0): "C = 2*eta*c*P'(y)*P(-1)*y^(1-d/2)*(1+y)/(y-1)",
    ("twisted_gl_even", 0): "C = eta*P'(y)*P(-1)*y^(1-d/2)*(1+y)/x",
    ("twisted_gl_odd", 1): "C = x_D*P'(y)*P(1)*y^((3-d)/2)*(y-1)/x",
    ("unitary", 0): "C = -eta*c*P_E'(y)*y^(1-d/2)/P_E(-1)",
    ("unitary", 1): "C = -eta*c*P_E'(y)*y^((1-d)/2)*(1+y)/P_E(-1)",
    ("bc_unitary", 0): "C = -eta*P_E'(y)*y^(1-d/2)*(1+y)/(x*P_E(-1))",
    ("bc_unitary", 1): "C = -eta*P_E'(y)*y^((3-d)/2)/(x*P_E(-1))",
}


def _int_exponent(num):
    if num % 2:
        raise UnsupportedCase("half-integral exponent: case/parity mismatch")
    return num // 2


def compute_C(name, pack, y, x, g, e=None):
    """The per-index quantity C_i, certified to lie in F_pm^x.

    Returns (value in F_i, value as an element of F_pm); raises
    NotInFixedField when the tau-fixedness assertion fails and
    DivisionByZero when a denominator that regularity should protect
    vanishes.
    """
    ye = y.entry(name)
    xe = x.entry(name)
    if not ye.algebra.is_field:
        raise UnsupportedCase(f"index {name!r} is split; C is only defined for field indices")
    alg = ye.algebra
    yv = ye.value
    d = g.d
    case = g.case
    parity = d % 2
    try:
        dPy = pack.in_algebra(pack.dP, yv)
        if case == "symplectic":
            k = _int_exponent(2 - d)
            c = -1 * g.eta.as_fraction() * xe.c * dPy * pack.at(pack.P, -1) * yv ** k
        elif case == "so_odd":
            k = _int_exponent(3 - d)
            c = (-2 * g.eta.as_fraction()) * xe.c * dPy * pack.at(pack.P, -1) \
                * yv ** k * (1 + yv) * (yv - 1) ** (-1)
        elif case == "so_even":
            k = _int_exponent(2 - d)
            c = (2 * g.eta.as_fraction()) * xe.c * dPy * pack.at(pack.P, -1) \
                * yv ** k * (1 + yv) * (yv - 1) ** (-1)
        elif case == "twisted_gl_even":
            k = _int_exponent(2 - d)
            c = g.eta.as_fraction() * xe.value ** (-1) * dPy * pack.at(pack.P, -1) \
                * yv ** k * (1 + yv)
        elif case == "twisted_gl_odd":
            k = _int_exponent(3 - d)
            c = x.x_D.as_fraction() * xe.value ** (-1) * dPy * pack.at(pack.P, 1) \
                * yv ** k * (yv - 1)
        elif case == "unitary":
            eta = g.E.embed(g.eta, alg)
            pm1 = g.E.embed(pack.at(pack.P, -1).inverse(), alg)
            if parity == 0:
                k = _int_exponent(2 - d)
                c = -1 * eta * xe.c * dPy * pm1 * yv ** k
            else:
                k = _int_exponent(1 - d)
                c = -1 * eta * xe.c * dPy * pm1 * yv ** k * (1 + yv)
        elif case == "bc_unitary":
            eta = g.E.embed(g.eta, alg)
            pm1 = g.E.embed(pack.at(pack.P, -1).inverse(), alg)
            if parity == 0:
                k = _int_exponent(2 - d)
                c = -1 * eta * xe.value ** (-1) * dPy * pm1 * yv ** k * (1 + yv)
            else:
                k = _int_exponent(3 - d)
                c = -1 * eta * xe.value ** (-1) * dPy * pm1 * yv ** k
        else:
            raise UnsupportedCase(f"unknown case {case!r}")
    except ZeroValuation as exc:
        raise DivisionByZero(f"index {name!r}: {exc}") from None
    if not c:
        raise DivisionByZero(f"index {name!r}: C vanished (non-regular input)")
    base_value = c.as_base()   # raises NotInFixedField when the assertion fails
    return c, base_value


@dataclass
class FactorTrace:
    """Everything compute_delta did, in deterministic printable form."""

    case: str
    index_lines: list = field(default_factory=list)
    prefactor_lines: list = field(default_factory=list)
    total: UnitCircleValue = None

    def lines(self):
        out = [f"case: {self.case}"]
        out.extend(self.index_lines)
        out.extend(self.prefactor_lines)
        out.append(f"delta = {self.total.render()} (angle {self.total.angle})")
        return out

    def __repr__(self):
        return "\n".join(self.lines())


def validate_package(y, x, g, e):
    """Run every structural validation; raise ValidationFailure on the
    first report that fails, MatchFailure if the classes do not match."""
    for rep in (validate_group(g), validate_endoscopic(g, e),
                validate_param(y, g, "endoscopic"), validate_param(x, g, "group")):
        if not rep.ok:
            raise ValidationFailure("\n".join(rep.lines()))
    dims = side_dimensions(y, g)
    if dims != (e.d_minus, e.d_plus):
        raise ValidationFailure(
            f"sides have dimensions {dims}, datum says ({e.d_minus}, {e.d_plus})"
        )
    if not check_regularity(y, g, "endoscopic"):
        raise ValidationFailure("parameters are not suitably regular")
    if not match_stable_classes(y, x, g, e):
        raise MatchFailure(
            "stable classes do not correspond: x_i/tau(x_i) must equal "
            "(-1)^(d+1) * y_i * nu/tau(nu) (x_i = y_i in the untwisted cases)"
        )


def compute_delta(y, x, g, e):
    """The exact transfer factor of a matched pair (the Delta_IV term is
    omitted throughout).  Returns (value, trace)."""
    validate_package(y, x, g, e)
    pack = build_charpoly_pack(y, g)
    trace = FactorTrace(case=g.case)
    total = UnitCircleValue.one()
    label = _FORMULA[(g.case, g.d % 2) if g.case in ("unitary", "bc_unitary")
                     else (g.case, g.info["d_parity"])]
    for en in y.entries:
        if en.side != "-" or not en.algebra.is_field:
            continue
        c_fi, c_base = compute_C(en.name, pack, y, x, g, e)
        verdict = norm_test(c_base, en.algebra)
        total = total * UnitCircleValue.from_sign(verdict)
        trace.index_lines.append(
            f"index {en.name}: {label}; C = {c_base!r} in F_pm (checked); "
            f"norm test: {'+1' if verdict == 1 else '-1'}"
        )
    total = _apply_prefactors(total, pack, y, x, g, e, trace)
    trace.total = total
    return total, trace


def _apply_prefactors(total, pack, y, x, g, e, trace):
    if g.case == "twisted_gl_odd":
        arg = (g.eta.as_fraction() * x.x_D.as_fraction()
               * pack.at(pack.P, 1) * _poly.peval(pack.P_minus, Fraction(-1), Fraction(0)))
        value = eval_character(e.chi, g.F.element(arg))
        trace.prefactor_lines.append(
            f"prefactor chi(eta*x_D*P(1)*P_minus(-1)) at {arg}: {value.render()}"
        )
        return total * value
    if g.case in ("unitary", "bc_unitary"):
        zero = pack.zero()
        for tag, poly, mu in (("minus", pack.P_minus, e.mu_minus),
                              ("plus", pack.P_plus, e.mu_plus)):
            num = _poly.peval(poly, pack.scalar(0), zero)
            den = _poly.peval(poly, pack.scalar(-1), zero)
            arg = num * den.inverse()
            value = eval_character(mu, arg)
            trace.prefactor_lines.append(
                f"prefactor mu_{tag}(P_{tag}(0)/P_{tag}(-1)) at {arg!r}: {value.render()}"
            )
            total = total * value
        return total
    return total


def eval_character(chi, arg):
    """Exact character value: a tame character of E^x, or a quadratic
    character of F^x encoded by a square class acting through the Hilbert
    symbol."""
    if isinstance(chi, TameCharacter):
        return UnitCircleValue(chi.angle(arg))
    if isinstance(chi, FieldElement):
        if not arg:
            raise ZeroValuation("character of zero")
        return UnitCircleValue.from_sign(hilbert_symbol(arg, chi))
    raise UnsupportedCase(f"cannot evaluate a character of type {type(chi).__name__}")


def swapped_delta(y, x, g, e):
    """The factor with the roles of the two endoscopic halves exchanged.

    Defined for the swap-symmetric cases.  Equals compute_delta when the
    inner-torsor cocycle is trivial; the nontrivial class negates the
    value (non-archimedean base)."""
    if g.case not in ("so_odd", "so_even", "unitary"):
        raise UnsupportedCase(f"swap undefined for case {g.case!r}")
    e_swapped = EndoscopicDatum(
        d_minus=e.d_plus,
        d_plus=e.d_minus,
        delta_minus=e.delta_plus,
        delta_plus=e.delta_minus,
        chi=e.chi,
        mu_minus=e.mu_plus,
        mu_plus=e.mu_minus,
        cocycle_class=e.cocycle_class,
    )
    value, _ = compute_delta(_flip_sides(y), _flip_sides(x), g, e_swapped)
    if e.cocycle_class == "nontrivial":
        if g.base.is_real:
            raise UnsupportedCase("nontrivial cocycle swap over R is not defined")
        value = value.negate()
    return value


def _flip_sides(param):
    flipped = [
        IndexEntry(en.name, "+" if en.side == "-" else "-", en.algebra, en.value, en.c)
        for en in param.entries
    ]
    return RegularParam(tuple(flipped), param.x_D)


def special_case_indicator(y, x, g, e):
    """Two-code-path value for the even twisted case with d_minus = d,
    d_plus = 1: +1 iff the symmetrized twisted form is isometric to the
    endoscopic space (whose coefficients must be present on the minus-side
    entries of y).  The caller asserts the pinning convention
    eta = -eta_minus."""
    if g.case != "twisted_gl_even":
        raise UnsupportedCase("indicator defined for the even twisted case")
    if g.base.is_real:
        raise UnsupportedCase("indicator defined for non-archimedean bases")
    if e.d_minus != g.d or e.d_plus != 1:
        raise UnsupportedCase("indicator needs d_minus = d and d_plus = 1")
    if any(en.side != "-" for en in y.entries):
        raise ValidationFailure("d_plus = 1 forces an empty plus side")
    if any(en.c is None for en in y.entries):
        raise ValidationFailure("endoscopic-side form coefficients are required")
    q_twisted = forms.symmetrize_twisted(x)
    q_minus = forms.trace_form_gram(y, side="-")
    return UnitCircleValue.from_sign(1 if forms.isomorphic(q_twisted, q_minus) else -1)
