"""Group descriptors, endoscopic data, and regular class parameters.

Seven group cases are supported: symplectic, odd/even special orthogonal,
the twisted linear group in even/odd dimension, unitary, and the twisted
group obtained from a unitary group by base change.  Validation is
report-style: every rule violation is collected with a stable code instead
of raising, so front ends can print complete diagnoses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import _poly
from .errors import IndexMismatch, UnsupportedCase
from .etale import EtaleElement, UnitaryBaseData, charpoly_over
from .localfield import FieldElement, is_square, trivial_tower

CASES = (
    "symplectic",
    "so_odd",
    "so_even",
    "twisted_gl_even",
    "twisted_gl_odd",
    "unitary",
    "bc_unitary",
)

# per-case structure:
#   d_parity: required parity of d (None = free)
#   twisted: x-side carries free x_i (and x_D in the odd case)
#   ground: "F" or "E" for the characteristic-polynomial ground field
#   c_sign: tau(c) = c_sign * c for the x-side form coefficients (untwisted)
#   factors: the two endoscopic halves (minus, plus)
#   dim_sum: d_minus + d_plus as a function of d
#   dline: a distinguished eigenvalue-1 line accompanies the index set
_INFO = {
    "symplectic":      dict(d_parity=0, twisted=False, ground="F", c_sign=-1,
                            factors=("so_even", "symplectic"), dim_sum=lambda d: d,
                            dline=False),
    "so_odd":          dict(d_parity=1, twisted=False, ground="F", c_sign=1,
                            factors=("so_odd", "so_odd"), dim_sum=lambda d: d + 1,
                            dline=True),
    "so_even":         dict(d_parity=0, twisted=False, ground="F", c_sign=1,
                            factors=("so_even", "so_even"), dim_sum=lambda d: d,
                            dline=False),
    "twisted_gl_even": dict(d_parity=0, twisted=True, ground="F", c_sign=None,
                            factors=("so_even", "so_odd"), dim_sum=lambda d: d + 1,
                            dline=True),
    "twisted_gl_odd":  dict(d_parity=1, twisted=True, ground="F", c_sign=None,
                            factors=("so_odd", "symplectic"), dim_sum=lambda d: d,
                            dline=True),
    "unitary":         dict(d_parity=None, twisted=False, ground="E", c_sign=1,
                            factors=("unitary", "unitary"), dim_sum=lambda d: d,
                            dline=False),
    "bc_unitary":      dict(d_parity=None, twisted=True, ground="E", c_sign=None,
                            factors=("unitary", "unitary"), dim_sum=lambda d: d,
                            dline=False),
}


def case_info(case):
    try:
        return _INFO[case]
    except KeyError:
        raise UnsupportedCase(f"unknown group case {case!r}") from None


@dataclass
class ValidationReport:
    """Outcome of a validation pass; empty violations means valid."""

    subject: str
    violations: list = field(default_factory=list)

    def add(self, code, message):
        self.violations.append((code, message))

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        if self.ok:
            return [f"{self.subject}: ok"]
        return [f"{self.subject}: {code}: {msg}" for code, msg in self.violations]

    def __repr__(self):
        return "\n".join(self.lines())


@dataclass
class GroupDescriptor:
    """The ambient (twisted) group, by its discrete invariants.

    delta: normalized discriminant class (even special orthogonal only).
    E: the quadratic extension data (unitary cases).
    nu: the twisting scalar in F^x (twisted linear) or E^x (base change).
    eta: the pinning invariant, a class in F^x / squares, or in E^x modulo
    norms for the unitary cases (in F^x for odd d, tau-odd for even d).
    """

    case: str
    d: int
    base: object                      # BaseField
    delta: FieldElement = None
    E: UnitaryBaseData = None
    nu: object = None                 # FieldElement or EtaleElement of E
    eta: object = None

    @property
    def info(self):
        return case_info(self.case)

    @property
    def F(self):
        return trivial_tower(self.base)


@dataclass
class TameCharacter:
    """A character of E^x trivial on the 1-units.

    Determined by a rational angle on the canonical uniformizer and an
    exponent against the canonical generator of the residue group; values
    are exact angles in Q/Z.
    """

    E: UnitaryBaseData
    angle_pi: Fraction
    unit_exponent: int

    def __post_init__(self):
        object.__setattr__(self, "angle_pi", Fraction(self.angle_pi) % 1)

    def angle(self, x):
        """The exact angle of the character value at x in E^x."""
        E = self.E
        if isinstance(x, (int, Fraction, FieldElement)):
            x = E.E.embed_ground(x if not isinstance(x, FieldElement) else x.as_fraction())
        v = E.e_valuation(x)
        unit = x * E.uniformizer() ** (-v)
        res = E.e_residue(unit)
        m = E.residue_field().dlog(res)
        q = E.residue_field().q
        return (v * self.angle_pi + Fraction(self.unit_exponent * m, q - 1)) % 1

    def restricts_to_sgn_power(self, k):
        """Exact check of the restriction to F^x against sgn_{E/F}^k."""
        E = self.E
        p = E.base.p
        probes = [p, canonical_unit_generator(p)]
        for t in probes:
            want = Fraction(1, 2) if E.sgn(t) ** (k % 2) == -1 else Fraction(0)
            if self.angle(t) != want:
                return False
        return True


def canonical_unit_generator(p):
    """Smallest generator of (Z/p)^x."""
    for g in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1  # p == 2


@dataclass
class EndoscopicDatum:
    """The determining invariants of an elliptic endoscopic datum.

    chi is a quadratic character of F^x encoded by a square class a, acting
    through the Hilbert symbol x -> (x, a).  cocycle_class records the
    inner-torsor choice, and only drives the sign behavior of the swapped
    factor.
    """

    d_minus: int
    d_plus: int
    delta_minus: FieldElement = None
    delta_plus: FieldElement = None
    chi: FieldElement = None
    mu_minus: TameCharacter = None
    mu_plus: TameCharacter = None
    cocycle_class: str = "trivial"


@dataclass
class IndexEntry:
    """One index: the tower F_pm sits inside the algebra; ``value`` is y_i
    on the endoscopic side and x_i on the group side; ``c`` is the optional
    form coefficient."""

    name: str
    side: str
    algebra: object
    value: EtaleElement
    c: EtaleElement = None


@dataclass
class RegularParam:
    """A class-parameter pack: indexed data plus the optional x_D line."""

    entries: tuple
    x_D: FieldElement = None

    def __post_init__(self):
        self.entries = tuple(self.entries)

    def side(self, s):
        return [en for en in self.entries if en.side == s]

    def entry(self, name):
        for en in self.entries:
            if en.name == name:
                return en
        raise IndexMismatch(f"no index named {name!r}")

    def field_indices(self, side=None):
        return [en for en in self.entries
                if en.algebra.is_field and (side is None or en.side == side)]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_group(g):
    """Check the structural invariants of a group descriptor."""
    rep = ValidationReport("group")
    try:
        info = case_info(g.case)
    except UnsupportedCase as exc:
        rep.add("case-unknown", str(exc))
        return rep
    if g.d < 1:
        rep.add("dim-positive", f"d = {g.d} must be >= 1")
        return rep
    if info["d_parity"] is not None and g.d % 2 != info["d_parity"]:
        want = "even" if info["d_parity"] == 0 else "odd"
        rep.add("dim-parity", f"case {g.case} needs d {want}, got d = {g.d}")
    if g.case == "so_even":
        if g.delta is None:
            rep.add("disc-missing", "even special orthogonal case needs delta")
        elif g.d == 2 and is_square(g.delta):
            rep.add("disc-excluded", "the case (d, delta) = (2, 1) is excluded")
    elif g.delta is not None:
        rep.add("disc-extraneous", "delta is only meaningful for so_even")
    if info["ground"] == "E":
        if g.E is None:
            rep.add("ext-missing", "unitary cases need the quadratic extension E")
    elif g.E is not None:
        rep.add("ext-extraneous", "E is only meaningful for unitary cases")
    _validate_nu(g, info, rep)
    _validate_eta(g, info, rep)
    return rep


def _validate_nu(g, info, rep):
    if g.case in ("twisted_gl_even", "twisted_gl_odd"):
        if not isinstance(g.nu, FieldElement) or not g.nu:
            rep.add("nu-missing", "twisted linear cases need nu in F^x")
    elif g.case == "bc_unitary":
        if not isinstance(g.nu, EtaleElement) or not g.nu:
            rep.add("nu-missing", "base-change case needs nu in E^x")
    elif g.nu is not None:
        rep.add("nu-extraneous", "nu is only meaningful for twisted cases")


def _validate_eta(g, info, rep):
    if g.eta is None:
        rep.add("eta-missing", "eta is a required input")
        return
    if g.case in ("unitary", "bc_unitary"):
        if not isinstance(g.eta, EtaleElement) or not g.eta:
            rep.add("eta-type", "eta must be a nonzero element of E")
            return
        if g.case == "unitary":
            if g.d % 2 == 1 and g.eta.b:
                rep.add("eta-parity", "odd d needs eta in F^x")
            if g.d % 2 == 0 and g.eta.a:
                rep.add("eta-parity", "even d needs tau(eta) = -eta")
    else:
        if not isinstance(g.eta, FieldElement) or not g.eta:
            rep.add("eta-type", "eta must be a nonzero element of F")


def validate_endoscopic(g, e):
    """Check an endoscopic datum against its group."""
    rep = ValidationReport("endoscopic")
    info = g.info
    fm, fp = info["factors"]
    want = info["dim_sum"](g.d)
    if e.d_minus < 0 or e.d_plus < 0:
        rep.add("dim-negative", "factor dimensions must be >= 0")
        return rep
    if e.d_minus + e.d_plus != want:
        rep.add("dim-sum",
                f"d_minus + d_plus = {e.d_minus + e.d_plus}, expected {want}")
    for tag, fac, dim, disc in (
        ("minus", fm, e.d_minus, e.delta_minus),
        ("plus", fp, e.d_plus, e.delta_plus),
    ):
        if fac in ("so_even", "symplectic") and dim % 2:
            rep.add(f"dim-parity-{tag}", f"{fac} factor needs even dimension")
        if fac == "so_odd" and dim % 2 == 0:
            rep.add(f"dim-parity-{tag}", f"{fac} factor needs odd dimension")
        if fac == "so_even":
            if disc is None and dim > 0:
                rep.add(f"disc-missing-{tag}", f"{fac} factor needs a discriminant")
            elif disc is not None and dim == 2 and is_square(disc):
                rep.add(f"elliptic-{tag}",
                        "excluded: orthogonal factor with (dim, disc) = (2, 1)")
        elif disc is not None:
            rep.add(f"disc-extraneous-{tag}", f"{fac} factor carries no discriminant")
    if g.case == "so_even" and g.delta is not None:
        # a dimension-0 factor has discriminant 1 by convention
        dm = e.delta_minus if e.delta_minus is not None else (
            g.F.element(1) if e.d_minus == 0 else None)
        dp = e.delta_plus if e.delta_plus is not None else (
            g.F.element(1) if e.d_plus == 0 else None)
        if dm is not None and dp is not None and not is_square(dm * dp * g.delta):
            rep.add("disc-product",
                    "discriminants must satisfy delta_minus * delta_plus = delta")
    if g.case == "twisted_gl_odd":
        if not isinstance(e.chi, FieldElement) or not e.chi:
            rep.add("chi-missing", "odd twisted case needs chi as a square class")
    elif e.chi is not None:
        rep.add("chi-extraneous", "chi is only meaningful for the odd twisted case")
    if g.case in ("unitary", "bc_unitary"):
        shift = 1 if g.case == "bc_unitary" else 0
        for tag, mu, k in (("minus", e.mu_minus, e.d_plus + shift),
                           ("plus", e.mu_plus, e.d_minus)):
            if mu is None:
                rep.add(f"char-missing-{tag}", "unitary cases need both characters")
            elif mu.E is not g.E and mu.E != g.E:
                rep.add(f"char-ext-{tag}", "character lives on a different E")
            elif not mu.restricts_to_sgn_power(k):
                rep.add(f"char-restriction-{tag}",
                        f"restriction to F^x must equal the norm character to the power {k}")
    elif e.mu_minus is not None or e.mu_plus is not None:
        rep.add("char-extraneous", "characters are only meaningful for unitary cases")
    if e.cocycle_class not in ("trivial", "nontrivial"):
        rep.add("cocycle-flag", "cocycle_class must be 'trivial' or 'nontrivial'")
    return rep


def validate_param(param, g, role):
    """Check a parameter pack (role 'endoscopic' for y, 'group' for x)."""
    rep = ValidationReport(f"param-{role}")
    info = g.info
    if role not in ("endoscopic", "group"):
        raise ValueError("role must be 'endoscopic' or 'group'")
    names = set()
    dim = 0
    for en in param.entries:
        where = f"index {en.name!r}"
        if en.name in names:
            rep.add("index-duplicate", f"{where} appears twice")
        names.add(en.name)
        if en.side not in ("-", "+"):
            rep.add("side-invalid", f"{where}: side must be '-' or '+'")
        alg = en.algebra
        if alg.base_pm.base != g.base:
            rep.add("base-mismatch", f"{where}: tower over a different base field")
            continue
        if info["ground"] == "E":
            if g.E is None or alg.unitary_base is None or alg.unitary_base != g.E:
                rep.add("ext-mismatch",
                        f"{where}: algebra is not the tensor with the group's E")
                continue
            dim += alg.base_pm.n
        else:
            if alg.unitary_base is not None:
                rep.add("ext-extraneous", f"{where}: tensor algebra outside unitary case")
            dim += 2 * alg.base_pm.n
        if not en.value.is_unit():
            rep.add("value-unit", f"{where}: value must be invertible")
            continue
        needs_norm_one = role == "endoscopic" or not info["twisted"]
        if needs_norm_one and en.value.norm() != alg.base_pm.one():
            rep.add("value-norm-one", f"{where}: value must have norm 1")
        _validate_c(en, g, role, rep, where)
    if role == "group" and g.case == "twisted_gl_odd":
        if param.x_D is None or not param.x_D:
            rep.add("xD-missing", "odd twisted case needs x_D in F^x")
        elif not param.x_D.tower.is_trivial:
            rep.add("xD-field", "x_D must lie in the base field")
    elif param.x_D is not None:
        rep.add("xD-extraneous", "x_D only belongs to the odd twisted group side")
    want = g.d - (1 if info["dline"] and g.case in ("so_odd", "twisted_gl_odd") else 0)
    if dim != want:
        rep.add("dim-bookkeeping",
                f"index degrees sum to {dim}, expected {want} for d = {g.d}")
    return rep


def _validate_c(en, g, role, rep, where):
    info = g.info
    if role == "group":
        if info["twisted"]:
            if en.c is not None:
                rep.add("c-extraneous", f"{where}: twisted group side carries no c")
            return
        if en.c is None:
            rep.add("c-missing", f"{where}: form coefficient c is required")
            return
        sign = info["c_sign"]
    else:
        if en.c is None:
            return
        fac = info["factors"][0 if en.side == "-" else 1]
        sign = -1 if fac == "symplectic" else 1
    if not en.c.is_unit():
        rep.add("c-unit", f"{where}: c must be invertible")
        return
    want = en.c if sign == 1 else -en.c
    if en.c.tau() != want:
        kind = "tau-fixed" if sign == 1 else "tau-antifixed"
        rep.add("c-sign", f"{where}: c must be {kind}")


def side_dimensions(param, g):
    """(d_minus, d_plus) implied by the pack, per the factor types."""
    info = g.info
    dims = {"-": 0, "+": 0}
    for en in param.entries:
        n = en.algebra.base_pm.n
        dims[en.side] += n if info["ground"] == "E" else 2 * n
    out = []
    for s, fac in zip("-+", info["factors"]):
        out.append(dims[s] + (1 if fac == "so_odd" else 0))
    return tuple(out)


# ---------------------------------------------------------------------------
# regularity, matching, stable classes
# ---------------------------------------------------------------------------

def _norm_one_values(param, g, role):
    """The eigenvalue data y_i (deriving them through the matching relation
    for a twisted group side)."""
    info = g.info
    out = []
    for en in param.entries:
        if role == "group" and info["twisted"]:
            ratio = en.value / en.value.tau()
            sign = (-1) ** (g.d + 1)
            if g.case == "bc_unitary":
                nu = g.E.embed(g.nu, en.algebra)
            else:
                nu = en.algebra.embed_ground(g.nu.as_fraction())
            y = ratio * nu.tau() / nu * sign
        else:
            y = en.value
        out.append((en, y))
    return out


def _case_charpoly(param, g, role="endoscopic", side=None):
    """Product of per-index characteristic polynomials over the case ground."""
    info = g.info
    ground = info["ground"]
    if ground == "E":
        poly = [g.E.E.one()]
    else:
        poly = [Fraction(1)]
    for en, y in _norm_one_values(param, g, role):
        if side is not None and en.side != side:
            continue
        poly = _poly.pmul(poly, charpoly_over(y, ground))
    return poly


def check_regularity(param, g, role="endoscopic"):
    """The conservative sufficient condition: the case polynomial (with the
    distinguished eigenvalue-1 line adjoined where the case has one) is
    squarefree, and the formulary's denominators at T = 1, -1 stay away
    from zero."""
    info = g.info
    poly = _case_charpoly(param, g, role)
    if info["ground"] == "E":
        one = g.E.E.one()
        zero = g.E.E.zero()
        minus_one = g.E.E.embed_ground(-1)
    else:
        one, zero, minus_one = Fraction(1), Fraction(0), Fraction(-1)
    aug = _poly.pmul(poly, [-one, one]) if info["dline"] else poly
    if not _poly.is_squarefree(aug):
        return False
    if _poly.peval(poly, minus_one, zero) == zero:
        return False
    if not info["dline"] and _poly.peval(poly, one, zero) == zero:
        return False
    return True


def _structure_key(en):
    return (en.side, en.algebra._fingerprint)


def match_stable_classes(y, x, g, e=None):
    """Exact test of the stable-conjugacy correspondence between the
    endoscopic parameters y and the group-side parameters x."""
    if len(y.entries) != len(x.entries):
        raise IndexMismatch("different numbers of indices")
    info = g.info
    for ye, xe in zip(y.entries, x.entries):
        if ye.name != xe.name or _structure_key(ye) != _structure_key(xe):
            raise IndexMismatch(f"index {ye.name!r} differs between the packs")
        if not info["twisted"]:
            if xe.value != ye.value:
                return False
            continue
        lhs = xe.value / xe.value.tau()
        if g.case == "bc_unitary":
            nu = g.E.embed(g.nu, xe.algebra)
        else:
            nu = xe.algebra.embed_ground(g.nu.as_fraction())
        rhs = ye.value * nu / nu.tau() * ((-1) ** (g.d + 1))
        if lhs != rhs:
            return False
    return True


def stable_class_of(param, g, role="endoscopic"):
    """Canonical key of the stable class: forgets the c_i; in the twisted
    cases reduces x_i modulo F_pm^x (keyed by x_i / tau(x_i)) and drops
    x_D."""
    info = g.info
    twisted_group = role == "group" and info["twisted"]
    items = []
    for en in param.entries:
        if twisted_group:
            r = en.value / en.value.tau()
            vkey = (r.a.coords, r.b.coords)
        else:
            vkey = (en.value.a.coords, en.value.b.coords)
        items.append((en.side, en.algebra._fingerprint, vkey))
    return (g.case, tuple(sorted(items)))
