"""Independent identity chain for the odd twisted linear group.

This lane re-derives the factor's ingredients on the Lie-algebra side
(Cayley transforms X_i, characteristic polynomials Q of X) and checks the
exact identities that reconcile the two descriptions: the polynomial
identities linking P-values at y with Q-values at X, the norm-triviality
of the cross-index quantities A_{i,j}, the square class of the
distinguished-line coefficient c_D, and the consistency of the per-index
B_i with the factor engine's C_i.  Only norm-class (convention-free)
consequences are checked; the auxiliary characters themselves are never
evaluated.

The auxiliary coefficients are generated here, not accepted from users:
any tau-fixed c_i works for the identities (default 1), and c_D comes from
determinant bookkeeping of the index trace forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _poly, factor, forms
from .errors import (
    NotInFixedField,
    PoleAtMinusOne,
    PoleAtOne,
    UnsupportedCase,
)
from .etale import charpoly_over, norm_to_ground
from .localfield import is_square, norm_test


def cayley(y):
    """X = (y - 1)(1 + y)^(-1); tau(X) = -X when y has norm 1."""
    one = y.algebra.one()
    den = one + y
    if not den.is_unit():
        raise PoleAtMinusOne("1 + y is not invertible")
    return (y - one) * den.inverse()


def cayley_inv(x):
    """y = (1 + X)(1 - X)^(-1); norm(y) = 1 when tau(X) = -X."""
    one = x.algebra.one()
    den = one - x
    if not den.is_unit():
        raise PoleAtOne("1 - X is not invertible")
    return (one + x) * den.inverse()


@dataclass
class LieParam:
    """The Lie-side data for an odd twisted instance.

    X maps index names to Cayley transforms, Q_j / P_j to the per-index
    characteristic polynomials of X_j / y_j over the base field; Q_X is
    the characteristic polynomial of X on the whole space (a zero
    eigenvalue for the distinguished line, then the index blocks).
    """

    y: object
    x: object
    g: object
    eta: object                 # base-field element, -nu
    c: dict                     # name -> tau-fixed auxiliary in F_pm^x
    c_D: object                 # base-field element from determinant bookkeeping
    X: dict
    P_j: dict
    Q_j: dict
    P_I: list
    Q_X: list
    dQ_X: list


def eta_from_nu(nu):
    """The pinning invariant of the odd twisted form: -nu."""
    return -nu


def make_lie_param(y, x, g, c=None):
    """Assemble the Lie-side data for a validated odd twisted instance.

    ``c`` optionally maps index names to tau-fixed auxiliaries in F_pm^x
    (default: 1 everywhere).  c_D is derived as -nu times the product of
    the index trace-form determinants, so the square-class check against
    eta * P(1) * P(-1) runs on two independent code paths.
    """
    if g.case != "twisted_gl_odd":
        raise UnsupportedCase("the identity chain is for the odd twisted case")
    F = g.F
    eta = F.element(eta_from_nu(g.nu).as_fraction())
    cvals = {}
    X = {}
    P_j = {}
    Q_j = {}
    P_I = [Fraction(1)]
    prod_q = [Fraction(1)]
    det_prod = Fraction(1)
    for en in y.entries:
        tower = en.algebra.base_pm
        cv = tower.element(1) if c is None or en.name not in c else tower.element(c[en.name])
        cvals[en.name] = cv
        xi = cayley(en.value)
        assert xi.tau() == -xi
        X[en.name] = xi
        P_j[en.name] = charpoly_over(en.value, "F")
        Q_j[en.name] = charpoly_over(xi, "F")
        P_I = _poly.pmul(P_I, P_j[en.name])
        prod_q = _poly.pmul(prod_q, Q_j[en.name])
        det_prod *= _poly.gauss_det(forms.gram_block(en.algebra, en.algebra.element(cv)))
    Q_X = _poly.pmul([Fraction(0), Fraction(1)], prod_q)
    c_D = F.element(-g.nu.as_fraction() * det_prod)
    return LieParam(y=y, x=x, g=g, eta=eta, c=cvals, c_D=c_D, X=X,
                    P_j=P_j, Q_j=Q_j, P_I=P_I, Q_X=Q_X, dQ_X=_poly.pderiv(Q_X))


def _minus_field_names(data):
    return [en.name for en in data.y.entries if en.side == "-" and en.algebra.is_field]


def _plus_field_names(data):
    return [en.name for en in data.y.entries if en.side == "+" and en.algebra.is_field]


def delta_I_lie(data, eta=None):
    """Product over minus-side field indices of the norm character at
    eta * c_i * Q_X'(X_i); insensitive to X -> lambda^2 X."""
    eta = data.eta if eta is None else eta
    total = factor.UnitCircleValue.one()
    for name in _minus_field_names(data):
        en = data.y.entry(name)
        qx = _poly.peval(data.dQ_X, data.X[name], en.algebra.zero())
        arg = qx.as_base() * data.c[name] * eta.as_fraction()
        total = total * factor.UnitCircleValue.from_sign(norm_test(arg, en.algebra))
    return total


def li_identity_1(data, i, j):
    """P_j(y_i) = (1 - X_i)^(-deg) * P_j(-1) * Q_j(X_i), exactly in F_i."""
    en = data.y.entry(i)
    alg = en.algebra
    yv = en.value
    xi = data.X[i]
    pj = data.P_j[j]
    qj = data.Q_j[j]
    nj = _poly.degree(pj)
    lhs = _poly.peval(pj, yv, alg.zero())
    pj_m1 = _poly.peval(pj, Fraction(-1), Fraction(0))
    rhs = (alg.one() - xi) ** (-nj) * pj_m1 * _poly.peval(qj, xi, alg.zero())
    return lhs == rhs


def li_identity_2(data, i):
    """2 (1 - X_i)^(d-2) P_y'(y_i) = -P_y(-1) * Q_X'(X_i) with
    P_y = (T - 1) * P, exactly in F_i."""
    en = data.y.entry(i)
    alg = en.algebra
    yv = en.value
    xi = data.X[i]
    d = data.g.d
    p_y = _poly.pmul(data.P_I, [Fraction(-1), Fraction(1)])
    dp_y = _poly.pderiv(p_y)
    lhs = 2 * (alg.one() - xi) ** (d - 2) * _poly.peval(dp_y, yv, alg.zero())
    p_y_m1 = _poly.peval(p_y, Fraction(-1), Fraction(0))
    rhs = -1 * p_y_m1 * _poly.peval(data.dQ_X, xi, alg.zero())
    return lhs == rhs


def check_Aij_is_norm(data, i, j):
    """A_{i,j} is tau-fixed and a norm from F_i."""
    en_i = data.y.entry(i)
    en_j = data.y.entry(j)
    alg = en_i.algebra
    x_i = data.x.entry(i).value
    x_j = data.x.entry(j).value
    nj = _poly.degree(data.P_j[j])
    c_i = alg.element(data.c[i])
    c_j = en_j.algebra.element(data.c[j])
    lead = (c_i ** (-1) * x_i.tau()) ** nj
    nrm = norm_to_ground(c_j * x_j.tau().inverse())
    p_at = _poly.peval(data.P_j[j], en_i.value, alg.zero())
    q_at = _poly.peval(data.Q_j[j], data.X[i], alg.zero())
    a_ij = lead * nrm * p_at * q_at.inverse()
    base = a_ij.as_base()   # NotInFixedField when the assertion fails
    return norm_test(base, alg) == 1


def check_cD_square_class(data):
    """c_D and eta * P(1) * P(-1) agree modulo squares; the two sides come
    from determinant bookkeeping and charpoly evaluation respectively."""
    F = data.g.F
    p1 = _poly.peval(data.P_I, Fraction(1), Fraction(0))
    pm1 = _poly.peval(data.P_I, Fraction(-1), Fraction(0))
    probe = data.c_D * data.eta * F.element(p1 * pm1)
    return is_square(probe)


def check_Bi_Ci_consistency(data, i):
    """sgn(C_i) = sgn(B_i) * sgn(c_D * x_D) with
    B_i = (1/2) * eta * Q_X'(X_i) * (y_i + 1) * tau(x_i).

    The correction class c_D * x_D is evaluated through the defining class
    eta * P(1) * P(-1) * x_D, so the identity holds for every Cayley-linked
    instance regardless of how the bookkeeping c_D was produced."""
    en = data.y.entry(i)
    alg = en.algebra
    x_i = data.x.entry(i).value
    qx = _poly.peval(data.dQ_X, data.X[i], alg.zero())
    b_i = Fraction(1, 2) * data.eta.as_fraction() * qx * (en.value + 1) * x_i.tau()
    b_base = b_i.as_base()
    pack = factor.build_charpoly_pack(data.y, data.g)
    _, c_base = factor.compute_C(i, pack, data.y, data.x, data.g)
    lhs = norm_test(c_base, alg)
    p1 = _poly.peval(data.P_I, Fraction(1), Fraction(0))
    pm1 = _poly.peval(data.P_I, Fraction(-1), Fraction(0))
    correction = alg.base_pm.element(
        data.eta.as_fraction() * p1 * pm1 * data.x.x_D.as_fraction()
    )
    rhs = norm_test(b_base, alg) * norm_test(correction, alg)
    return lhs == rhs


def reconstruct_delta(data, chi):
    """Reassemble the factor from the Lie-side pieces: the product of the
    B_i norm characters, the per-index distinguished-line characters at
    c_D * x_D, and the chi prefactor.  Must equal compute_delta exactly."""
    total = factor.UnitCircleValue.one()
    for name in _minus_field_names(data):
        en = data.y.entry(name)
        alg = en.algebra
        x_i = data.x.entry(name).value
        qx = _poly.peval(data.dQ_X, data.X[name], alg.zero())
        b_i = Fraction(1, 2) * data.eta.as_fraction() * qx * (en.value + 1) * x_i.tau()
        total = total * factor.UnitCircleValue.from_sign(norm_test(b_i.as_base(), alg))
        correction = alg.base_pm.element(
            data.c_D.as_fraction() * data.x.x_D.as_fraction()
        )
        total = total * factor.UnitCircleValue.from_sign(norm_test(correction, alg))
    p1 = _poly.peval(data.P_I, Fraction(1), Fraction(0))
    pm_m1 = _poly.peval(
        factor.build_charpoly_pack(data.y, data.g).P_minus, Fraction(-1), Fraction(0)
    )
    F = data.g.F
    arg = F.element(data.eta.as_fraction() * data.x.x_D.as_fraction() * p1 * pm_m1)
    return total * factor.eval_character(chi, arg)


def run_suite(y, x, g, e):
    """The cmd-check battery: (name, ok) pairs, full for the odd twisted
    case and reduced (Cayley round trips only) otherwise."""
    results = []
    for en in y.entries:
        try:
            ok = cayley_inv(cayley(en.value)) == en.value
        except (PoleAtMinusOne, PoleAtOne):
            ok = False
        results.append((f"cayley-roundtrip[{en.name}]", ok))
    if g.case != "twisted_gl_odd":
        results.append(("notice: reduced suite (identities are for the odd twisted case)", True))
        return results
    from .errors import EndofactorError
    try:
        data = make_lie_param(y, x, g)
    except EndofactorError:
        results.append(("lie-data", False))
        return results
    minus = _minus_field_names(data)
    plus = _plus_field_names(data)
    for i in minus:
        for j in plus:
            results.append((f"li-identity-1[{i},{j}]", li_identity_1(data, i, j)))
            try:
                results.append((f"A-is-norm[{i},{j}]", check_Aij_is_norm(data, i, j)))
            except NotInFixedField:
                results.append((f"A-is-norm[{i},{j}]", False))
        results.append((f"li-identity-2[{i}]", li_identity_2(data, i)))
        try:
            results.append((f"B-C-consistency[{i}]", check_Bi_Ci_consistency(data, i)))
        except (NotInFixedField, EndofactorError):
            results.append((f"B-C-consistency[{i}]", False))
    results.append(("cD-square-class", check_cD_square_class(data)))
    try:
        delta, _ = factor.compute_delta(y, x, g, e)
        recon_ok = reconstruct_delta(data, e.chi) == delta
    except EndofactorError:
        recon_ok = False
    results.append(("lie-side-reconstruction", recon_ok))
    return results
