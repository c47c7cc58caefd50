"""Random-instance generators shared by the test suite.

Everything is driven by an explicit random.Random so failures reproduce.
Generated instances are always structurally valid and suitably regular;
generation retries until the regularity gate passes.
"""

from fractions import Fraction
import random

from endofactor import forms
from endofactor.etale import (
    UnitaryBaseData,
    quadratic_field,
    split_algebra,
)
from endofactor.localfield import (
    BaseField,
    is_square,
    make_extension,
    trivial_tower,
    valuation,
)
from endofactor.params import (
    EndoscopicDatum,
    GroupDescriptor,
    IndexEntry,
    RegularParam,
    TameCharacter,
    check_regularity,
    side_dimensions,
    validate_endoscopic,
    validate_group,
    validate_param,
)

UNTWISTED = ("symplectic", "so_odd", "so_even", "unitary")
ALL_CASES = ("symplectic", "so_odd", "so_even", "twisted_gl_even",
             "twisted_gl_odd", "unitary", "bc_unitary")


def rnd_rational(rng, zero_ok=False):
    while True:
        v = Fraction(rng.randint(-9, 9), rng.choice([1, 1, 1, 2, 3]))
        if v or zero_ok:
            return v


def random_unit(rng, tower):
    """A random valuation-0 element of the tower."""
    while True:
        rows = [[rnd_rational(rng, zero_ok=True) for _ in range(tower.f)]
                for _ in range(tower.e)]
        x = tower.from_coords(rows)
        if x and valuation(x) == 0:
            return x


def random_nonzero(rng, tower):
    x = random_unit(rng, tower)
    k = rng.choice([-1, 0, 0, 0, 1])
    return x * tower.pi() ** k if k else x


def random_tower(rng, base, shapes=((1, 1), (2, 1), (1, 2))):
    """A tower over Q_p with (f, e) drawn from ``shapes``."""
    f, e = rng.choice(shapes)
    if e == 1:
        return make_extension(base, f, [-base.p, 1])
    unit = rng.choice([1, _nonresidue(base.p)])
    a1 = rng.choice([0, 0, base.p])
    return make_extension(base, f, [-base.p * unit, a1, 1])


def _nonresidue(p):
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    return 1


def random_field_algebra(rng, tower):
    """A quadratic field extension of the tower."""
    reps = tower.square_class_reps()
    delta = rng.choice(reps[1:])
    sq = random_unit(rng, tower)
    return quadratic_field(tower, delta * sq * sq)


def random_algebra(rng, tower, split_ratio=0.35):
    if rng.random() < split_ratio:
        return split_algebra(tower)
    return random_field_algebra(rng, tower)


def random_etale_unit(rng, algebra):
    while True:
        x = algebra.element(
            _tower_sample(rng, algebra.base_pm),
            _tower_sample(rng, algebra.base_pm),
        )
        if x.is_unit():
            return x


def _tower_sample(rng, tower):
    rows = [[rnd_rational(rng, zero_ok=True) for _ in range(tower.f)]
            for _ in range(tower.e)]
    return tower.from_coords(rows)


def random_norm_one(rng, algebra):
    """y with y * tau(y) = 1, via t / tau(t)."""
    while True:
        t = random_etale_unit(rng, algebra)
        if t.tau().is_unit():
            y = t / t.tau()
            if (y - 1).is_unit() and (y + 1).is_unit():
                return y


def random_tau_fixed_unit(rng, algebra):
    return algebra.element(random_unit(rng, algebra.base_pm))


def random_tau_odd_unit(rng, algebra):
    return algebra.element(0, random_unit(rng, algebra.base_pm))


def random_norm(rng, algebra):
    """A nonzero norm from the algebra, for invariance tests."""
    t = random_etale_unit(rng, algebra)
    return t.norm()


def solve_matching(rng, z, algebra):
    """x with x / tau(x) = z, for norm-one z != -1: x = lambda * (1 + z)."""
    lam = random_unit(rng, algebra.base_pm)
    x = (algebra.one() + z) * lam
    assert x.is_unit()
    return x


# ---------------------------------------------------------------------------
# per-case instance generation
# ---------------------------------------------------------------------------

def _mu_character(rng, E, k):
    """A tame character of E^x whose restriction to F^x is sgn^k."""
    q = E.residue_field().q
    candidates = []
    for den in (1, 2, 3, 4):
        for num in range(den):
            for exp in range(q - 1):
                mu = TameCharacter(E, Fraction(num, den), exp)
                if mu.restricts_to_sgn_power(k):
                    candidates.append(mu)
        if candidates:
            break
    return rng.choice(candidates)


def _disc_of_side(param, side):
    entries = [en for en in param.entries if en.side == side]
    if not entries:
        return None
    space = forms.trace_form_gram(param, side=side)
    return forms.invariants(space).disc


class Instance:
    """A matched package (g, e, y, x) plus the generating rng state."""

    def __init__(self, g, e, y, x):
        self.g = g
        self.e = e
        self.y = y
        self.x = x

    def astuple(self):
        return (self.y, self.x, self.g, self.e)


def make_instance(rng, case, p=5, n_indices=None, need_minus_field=True,
                  split_ratio=0.35, force_d_parity=None):
    """A random valid, regular, matched instance of the given case."""
    for _ in range(400):
        inst = _try_instance(rng, case, p, n_indices, need_minus_field,
                             split_ratio, force_d_parity)
        if inst is not None:
            return inst
    raise RuntimeError(f"could not generate an instance for {case}")


def _try_instance(rng, case, p, n_indices, need_minus_field, split_ratio,
                  force_d_parity):
    base = BaseField("p-adic", p)
    F = trivial_tower(base)
    unitary = case in ("unitary", "bc_unitary")
    twisted = case in ("twisted_gl_even", "twisted_gl_odd", "bc_unitary")
    ub = None
    if unitary:
        delta_e = rng.choice([_nonresidue(p), p, p * _nonresidue(p)])
        ub = UnitaryBaseData(base, delta_e)

    count = rng.randint(*(n_indices or (1, 3)))
    entries = []
    for k in range(count):
        tower = random_tower(rng, base)
        if unitary:
            alg = ub.algebra_over(tower)
        else:
            alg = random_algebra(rng, tower, split_ratio)
        side = rng.choice("-+")
        entries.append((f"i{k}", side, alg))
    if need_minus_field:
        if unitary:
            if not any(s == "-" and a.is_field for _, s, a in entries):
                tower = trivial_tower(base)   # delta_E stays a non-square here
                entries.append((f"i{count}", "-", ub.algebra_over(tower)))
        else:
            if not any(s == "-" and a.is_field for _, s, a in entries):
                tower = random_tower(rng, base)
                entries.append((f"i{count}", "-", random_field_algebra(rng, tower)))

    dim = sum((a.base_pm.n if unitary else 2 * a.base_pm.n) for _, s, a in entries)
    d = dim + (1 if case in ("so_odd", "twisted_gl_odd") else 0)
    if case in ("symplectic", "so_even", "twisted_gl_even") and d % 2:
        return None
    if force_d_parity is not None and d % 2 != force_d_parity:
        return None

    # endoscopic-side values and coefficients
    y_entries = []
    for name, side, alg in entries:
        yv = random_norm_one(rng, alg)
        fac = {"symplectic": ("so_even", "symplectic"),
               "so_odd": ("so_odd", "so_odd"),
               "so_even": ("so_even", "so_even"),
               "twisted_gl_even": ("so_even", "so_odd"),
               "twisted_gl_odd": ("so_odd", "symplectic"),
               "unitary": ("unitary", "unitary"),
               "bc_unitary": ("unitary", "unitary")}[case][0 if side == "-" else 1]
        if fac == "symplectic":
            ch = random_tau_odd_unit(rng, alg)
        else:
            ch = random_tau_fixed_unit(rng, alg)
        y_entries.append(IndexEntry(name, side, alg, yv, ch))

    # group-side values
    nu = eta = None
    x_D = None
    if case in ("twisted_gl_even", "twisted_gl_odd"):
        nu = random_nonzero(rng, F)
        sq = random_unit(rng, F)
        eta = (nu if case == "twisted_gl_even" else -nu) * sq * sq
        if case == "twisted_gl_odd":
            x_D = random_nonzero(rng, F)
    elif case == "bc_unitary":
        nu = random_etale_unit(rng, ub.E)
        # the pinning ties eta to nu: eta = (-1)^d * nu modulo norms from E
        t = random_etale_unit(rng, ub.E)
        eta = nu * ((-1) ** d) * t.norm().as_fraction()
    elif case == "unitary":
        if d % 2:
            eta = ub.E.element(random_unit(rng, F))
        else:
            eta = ub.E.element(0, random_unit(rng, F))
    else:
        eta = random_nonzero(rng, F)

    x_entries = []
    for en in y_entries:
        if not twisted:
            x_entries.append(IndexEntry(en.name, en.side, en.algebra, en.value,
                                        _new_c(rng, case, en)))
            continue
        sign = (-1) ** (d + 1)
        if case == "bc_unitary":
            nu_i = ub.embed(nu, en.algebra)
            z = en.value * nu_i / nu_i.tau() * sign
        else:
            z = en.value * sign
        if not (z + 1).is_unit():
            return None
        x_entries.append(IndexEntry(en.name, en.side, en.algebra,
                                    solve_matching(rng, z, en.algebra), None))

    y = RegularParam(tuple(y_entries))
    x = RegularParam(tuple(x_entries), x_D)

    delta = None
    if case == "so_even":
        delta = forms.invariants(forms.trace_form_gram(x)).disc
        if d == 2 and is_square(delta):
            return None

    g = GroupDescriptor(case=case, d=d, base=base, delta=delta,
                        E=ub, nu=nu, eta=eta)
    if not check_regularity(y, g, "endoscopic"):
        return None

    dm, dp = side_dimensions(y, g)
    e = _make_datum(rng, g, y, dm, dp)
    if e is None:
        return None

    assert validate_group(g).ok, validate_group(g)
    assert validate_param(y, g, "endoscopic").ok, validate_param(y, g, "endoscopic")
    assert validate_param(x, g, "group").ok, validate_param(x, g, "group")
    assert validate_endoscopic(g, e).ok, validate_endoscopic(g, e)
    return Instance(g, e, y, x)


def _new_c(rng, case, en):
    if case == "symplectic":
        return random_tau_odd_unit(rng, en.algebra)
    return random_tau_fixed_unit(rng, en.algebra)


# ---------------------------------------------------------------------------
# geometric generators for the swap / indicator theorems
# ---------------------------------------------------------------------------

def diag_space(F, entries):
    d = len(entries)
    return forms.QuadraticSpace(
        F, [[entries[i] if i == j else F.element(0) for j in range(d)] for i in range(d)]
    )


def split_odd_reference(F, d, det_rep):
    """The split odd space H^((d-1)/2) perp <a> with determinant det_rep."""
    m = (d - 1) // 2
    diag = []
    for _ in range(m):
        diag += [F.element(1), F.element(-1)]
    diag.append(det_rep * F.element((-1) ** m))
    return diag_space(F, diag)


def qs_even_model(F, d, c, delta_rep):
    """The quasi-split even space H^((d-2)/2) perp <c, -c*delta>."""
    diag = []
    for _ in range((d - 2) // 2):
        diag += [F.element(1), F.element(-1)]
    diag += [c, -c * delta_rep]
    return diag_space(F, diag)


def eta_minus_even(F, d, c):
    """Pinning invariant of qs_even_model(F, d, c, .): (-1)^(d/2-1) * 2c."""
    return F.element(2 * (-1) ** (d // 2 - 1)) * c


def so_odd_swap_instance(rng, p):
    """An so_odd instance with geometrically consistent eta and cocycle flag:
    eta is the determinant class of the assembled space, and the cocycle is
    trivial exactly when the space is split-Witt."""
    import dataclasses
    inst = make_instance(rng, "so_odd", p=p)
    g, e, y, x = inst.g, inst.e, inst.y, inst.x
    F = g.F
    w = random_nonzero(rng, F)
    blocks = [forms.gram_block(en.algebra, en.c) for en in x.entries]
    dim = sum(len(b) for b in blocks) + 1
    gram = [[F.element(0)] * dim for _ in range(dim)]
    gram[0][0] = w
    off = 1
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                gram[off + i][off + j] = F.element(b[i][j])
        off += len(b)
    q = forms.QuadraticSpace(F, gram)
    inv = forms.invariants(q)
    trivial = forms.isomorphic(q, split_odd_reference(F, g.d, inv.det))
    g = dataclasses.replace(g, eta=inv.det)
    e = dataclasses.replace(e, cocycle_class="trivial" if trivial else "nontrivial")
    return Instance(g, e, y, x)


def indicator_instance(rng, p):
    """A matched twisted-even instance with d_minus = d, d_plus = 1 and the
    pinning convention eta = -eta_minus built in; both the index structure
    and the coefficients are resampled until the endoscopic space is
    quasi-split."""
    base = BaseField("p-adic", p)
    F = trivial_tower(base)
    for _ in range(80):
        while True:
            cnt = rng.randint(1, 2)
            algebras = [(f"i{i}",
                         random_algebra(rng, random_tower(rng, base), split_ratio=0.3))
                        for i in range(cnt)]
            if any(a.is_field for _, a in algebras):
                break
        d = sum(2 * a.base_pm.n for _, a in algebras)
        for _ in range(40):
            y_entries = [IndexEntry(n, "-", a, random_norm_one(rng, a),
                                    random_tau_fixed_unit(rng, a))
                         for n, a in algebras]
            y = RegularParam(tuple(y_entries))
            q_minus = forms.trace_form_gram(y)
            inv = forms.invariants(q_minus)
            if d == 2 and is_square(inv.disc):
                continue
            hits = [c for c in F.square_class_reps()
                    if forms.isomorphic(q_minus, qs_even_model(F, d, c, inv.disc))]
            if not hits:
                continue
            c = rng.choice(hits)
            eta = -eta_minus_even(F, d, c)
            x_entries = []
            ok = True
            for en in y_entries:
                z = -en.value
                if not (z + 1).is_unit():
                    ok = False
                    break
                x_entries.append(IndexEntry(en.name, en.side, en.algebra,
                                            solve_matching(rng, z, en.algebra), None))
            if not ok:
                continue
            x = RegularParam(tuple(x_entries))
            g = GroupDescriptor(case="twisted_gl_even", d=d, base=base, nu=eta, eta=eta)
            if not check_regularity(y, g, "endoscopic"):
                continue
            e = EndoscopicDatum(d_minus=d, d_plus=1, delta_minus=inv.disc)
            return Instance(g, e, y, x)
    raise RuntimeError("could not generate an indicator instance")


def hermitian_gram_det(inst):
    """Determinant over E of the hermitian Gram of the group-side form
    (a tau-fixed element, i.e. a class of F^x modulo norms from E)."""
    from endofactor import _poly
    E = inst.g.E
    det = E.E.one()
    for en in inst.x.entries:
        tower = en.algebra.base_pm
        n = tower.n
        basis = [en.algebra.element(w) for w in tower._basis_elements()]

        def tr_e(z):
            A = tower.mult_matrix(z.a)
            B = tower.mult_matrix(z.b)
            tra = sum((A[i][i] for i in range(n)), Fraction(0))
            trb = sum((B[i][i] for i in range(n)), Fraction(0))
            return E.E.element(tra, trb)

        rows = [[tr_e(w1.tau() * w2 * en.c) for w2 in basis] for w1 in basis]
        cp = _poly.charpoly(rows, E.E.one())
        det = det * cp[0] * ((-1) ** n)
    return det


def unitary_swap_instance(rng, p):
    """A unitary instance with geometrically consistent eta and cocycle:
    for odd d the chosen quasi-split space has determinant class eta; for
    even d the quasi-split space is unique (determinant (-1)^(d/2) modulo
    norms) and eta is a free tau-odd class."""
    import dataclasses
    from endofactor.localfield import hilbert_symbol
    inst = make_instance(rng, "unitary", p=p)
    g = inst.g
    F = g.F
    D = hermitian_gram_det(inst).as_base()
    if g.d % 2 == 1:
        t = rng.choice(F.square_class_reps()[:4])
        trivial = hilbert_symbol(D * t, g.E.delta_e) == 1
        eta = g.E.E.element(t.as_fraction())
    else:
        want = F.element((-1) ** (g.d // 2))
        trivial = hilbert_symbol(D * want, g.E.delta_e) == 1
        eta = g.E.E.element(0, random_unit(rng, F))
    g2 = dataclasses.replace(g, eta=eta)
    e2 = dataclasses.replace(inst.e,
                             cocycle_class="trivial" if trivial else "nontrivial")
    return Instance(g2, e2, inst.y, inst.x)


def _make_datum(rng, g, y, dm, dp):
    fm, fp = g.info["factors"]
    delta_minus = delta_plus = chi = mu_minus = mu_plus = None
    if fm == "so_even":
        delta_minus = _disc_of_side(y, "-") if dm else None
        if dm == 2 and delta_minus is not None and is_square(delta_minus):
            return None
    if fp == "so_even":
        delta_plus = _disc_of_side(y, "+") if dp else None
        if dp == 2 and delta_plus is not None and is_square(delta_plus):
            return None
    if g.case == "twisted_gl_odd":
        chi = rng.choice(g.F.square_class_reps())
    if g.case == "unitary":
        mu_minus = _mu_character(rng, g.E, dp)
        mu_plus = _mu_character(rng, g.E, dm)
    elif g.case == "bc_unitary":
        mu_minus = _mu_character(rng, g.E, dp + 1)
        mu_plus = _mu_character(rng, g.E, dm)
    return EndoscopicDatum(
        d_minus=dm, d_plus=dp,
        delta_minus=delta_minus, delta_plus=delta_plus,
        chi=chi, mu_minus=mu_minus, mu_plus=mu_plus,
        cocycle_class="trivial",
    )
