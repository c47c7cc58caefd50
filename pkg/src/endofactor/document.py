"""Instance documents: schema-validated JSON in, validated objects out.

An instance document declares the base field, named towers, the optional
quadratic extension E, the group descriptor, the endoscopic datum, and the
indexed parameters (endoscopic-side y with optional form coefficient, and
group-side x with its coefficient or the twisted data).  Element literals
use a small expression grammar

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' integer)?
    atom   := rational | name | '(' expr ')' | '-' atom

over the declared generators: ``pi`` and ``u`` for a tower, additionally
``s`` for the square root carried by an etale algebra or by E.  The
serializer emits literals this grammar parses back, so documents round-trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .etale import UnitaryBaseData, quadratic_field, split_algebra
from .localfield import BaseField, make_extension, trivial_tower
from .params import (
    EndoscopicDatum,
    GroupDescriptor,
    IndexEntry,
    RegularParam,
    TameCharacter,
)

# ---------------------------------------------------------------------------
# element literals
# ---------------------------------------------------------------------------

def _tokenize(text, where):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()/":
            tokens.append((ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append((("num", int(text[i:j])), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((("name", text[i:j]), i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r} at column {i + 1}", where)
    return tokens


class _LiteralParser:
    """Recursive-descent evaluator over a generator environment."""

    def __init__(self, text, env, one, where):
        self.text = text
        self.tokens = _tokenize(text, where)
        self.pos = 0
        self.env = env
        self.one = one
        self.where = where

    def _peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def _next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _fail(self, msg, col=None):
        if col is None:
            col = self.tokens[self.pos][1] + 1 if self.pos < len(self.tokens) else len(self.text) + 1
        raise ParseError(f"{msg} at column {col} in {self.text!r}", self.where)

    def parse(self):
        value = self._expr()
        if self.pos != len(self.tokens):
            self._fail("trailing input")
        return value

    def _expr(self):
        value = self._term()
        while self._peek() in ("+", "-"):
            op, _ = self._next()
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._factor()
        while self._peek() == "*":
            self._next()
            value = value * self._factor()
        return value

    def _factor(self):
        value = self._atom()
        if self._peek() == "^":
            self._next()
            sign = 1
            if self._peek() == "-":
                self._next()
                sign = -1
            tok, col = self._next() if self.pos < len(self.tokens) else ((None, None), None)
            if not (isinstance(tok, tuple) and tok[0] == "num"):
                self._fail("exponent must be an integer")
            try:
                value = value ** (sign * tok[1])
            except Exception as exc:
                raise ParseError(f"cannot raise to power: {exc}", self.where) from None
        return value

    def _atom(self):
        if self._peek() is None:
            self._fail("unexpected end of literal")
        tok, col = self._next()
        if tok == "-":
            return -self._atom()
        if tok == "(":
            value = self._expr()
            if self._peek() != ")":
                self._fail("missing ')'")
            self._next()
            return value
        if isinstance(tok, tuple) and tok[0] == "num":
            num = tok[1]
            if self._peek() == "/":
                self._next()
                den_tok, dcol = self._next() if self.pos < len(self.tokens) else ((None, None), None)
                if not (isinstance(den_tok, tuple) and den_tok[0] == "num") or den_tok[1] == 0:
                    self._fail("bad denominator")
                return self.one * Fraction(num, den_tok[1])
            return self.one * Fraction(num)
        if isinstance(tok, tuple) and tok[0] == "name":
            name = tok[1]
            if name not in self.env:
                self._fail(f"unknown generator {name!r}", col + 1)
            return self.env[name]
        self._fail("expected a value")


def parse_tower_literal(text, tower, where="literal"):
    env = {}
    if not tower.base.is_real:
        env["pi"] = tower.pi()
    if tower.f >= 2:
        env["u"] = tower.ugen()
    try:
        return _LiteralParser(text, env, tower.one(), where).parse()
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"cannot evaluate {text!r}: {exc}", where) from None


def parse_etale_literal(text, algebra, where="literal"):
    tower = algebra.base_pm
    env = {"s": algebra.rt()}
    if not tower.base.is_real:
        env["pi"] = algebra.element(tower.pi())
    if tower.f >= 2:
        env["u"] = algebra.element(tower.ugen())
    try:
        return _LiteralParser(text, env, algebra.one(), where).parse()
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"cannot evaluate {text!r}: {exc}", where) from None


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

@dataclass
class InstanceDocument:
    """A parsed instance: the four computation inputs plus naming data."""

    base: BaseField
    group: GroupDescriptor
    endoscopic: EndoscopicDatum
    y: RegularParam
    x: RegularParam
    tower_names: dict


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} has the wrong type", where)
    return value


def _opt(obj, key, default=None):
    return obj.get(key, default) if isinstance(obj, dict) else default


def load_document(text, *, precision=None):
    """Parse a JSON instance document (a string) into an InstanceDocument."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}",
                         f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    base_spec = _need(doc, "base", "$")
    kind = _need(base_spec, "kind", "$.base", str)
    try:
        if kind == "real":
            base = BaseField("real",
                             precision=precision or _opt(base_spec, "precision", 64))
        elif kind == "p-adic":
            base = BaseField("p-adic", _need(base_spec, "p", "$.base", int),
                             precision=precision or _opt(base_spec, "precision", 64))
        else:
            raise ParseError(f"unknown base kind {kind!r}", "$.base.kind")
    except ValueError as exc:
        raise ParseError(str(exc), "$.base") from None
    F = trivial_tower(base)

    towers = {}
    for name, spec in (_opt(doc, "towers", {}) or {}).items():
        where = f"$.towers.{name}"
        f = _need(spec, "f", where, int)
        eis_lits = _need(spec, "eis", where, list)
        helper = make_extension(base, max(f, 1), [-(base.p if not base.is_real else 1), 1])
        coeffs = []
        for k, lit in enumerate(eis_lits):
            val = parse_tower_literal(str(lit), helper, f"{where}.eis[{k}]")
            coeffs.append(list(val.coords[0]))
        try:
            towers[name] = make_extension(base, f, coeffs)
        except Exception as exc:
            raise ParseError(f"bad tower: {exc}", where) from None

    ub = None
    if _opt(doc, "extension") is not None:
        where = "$.extension"
        delta_lit = _need(doc["extension"], "delta", where)
        delta = parse_tower_literal(str(delta_lit), F, f"{where}.delta")
        try:
            ub = UnitaryBaseData(base, delta.as_fraction())
        except Exception as exc:
            raise ParseError(f"bad extension: {exc}", where) from None

    gspec = _need(doc, "group", "$")
    case = _need(gspec, "case", "$.group", str)
    d = _need(gspec, "d", "$.group", int)
    delta = nu = eta = None
    if _opt(gspec, "delta") is not None:
        delta = parse_tower_literal(str(gspec["delta"]), F, "$.group.delta")
    if _opt(gspec, "nu") is not None:
        if case == "bc_unitary":
            if ub is None:
                raise ParseError("bc_unitary needs $.extension", "$.group.nu")
            nu = parse_etale_literal(str(gspec["nu"]), ub.E, "$.group.nu")
        else:
            nu = parse_tower_literal(str(gspec["nu"]), F, "$.group.nu")
    if _opt(gspec, "eta") is not None:
        if case in ("unitary", "bc_unitary"):
            if ub is None:
                raise ParseError(f"{case} needs $.extension", "$.group.eta")
            eta = parse_etale_literal(str(gspec["eta"]), ub.E, "$.group.eta")
        else:
            eta = parse_tower_literal(str(gspec["eta"]), F, "$.group.eta")
    group = GroupDescriptor(case=case, d=d, base=base, delta=delta, E=ub,
                            nu=nu, eta=eta)

    espec = _need(doc, "endoscopic", "$")
    def _sq(key):
        if _opt(espec, key) is None:
            return None
        return parse_tower_literal(str(espec[key]), F, f"$.endoscopic.{key}")
    def _mu(key):
        spec = _opt(espec, key)
        if spec is None:
            return None
        if ub is None:
            raise ParseError("characters need $.extension", f"$.endoscopic.{key}")
        where = f"$.endoscopic.{key}"
        angle = _need(spec, "angle_pi", where)
        try:
            angle = Fraction(str(angle))
        except ValueError:
            raise ParseError("angle_pi must be a rational like '1/4'", where) from None
        return TameCharacter(ub, angle, _need(spec, "unit_exponent", where, int))
    endo = EndoscopicDatum(
        d_minus=_need(espec, "d_minus", "$.endoscopic", int),
        d_plus=_need(espec, "d_plus", "$.endoscopic", int),
        delta_minus=_sq("delta_minus"),
        delta_plus=_sq("delta_plus"),
        chi=_sq("chi"),
        mu_minus=_mu("mu_minus"),
        mu_plus=_mu("mu_plus"),
        cocycle_class=_opt(espec, "cocycle_class", "trivial"),
    )

    y_entries = []
    x_entries = []
    indices = _need(doc, "indices", "$", list)
    for k, ispec in enumerate(indices):
        where = f"$.indices[{k}]"
        name = _need(ispec, "name", where, str)
        side = _need(ispec, "side", where, str)
        tname = _need(ispec, "tower", where, str)
        if tname not in towers:
            raise ParseError(f"unknown tower {tname!r}", where)
        tower = towers[tname]
        aspec = _need(ispec, "algebra", where)
        akind = _need(aspec, "kind", f"{where}.algebra", str)
        try:
            if akind == "field":
                dlit = _need(aspec, "delta", f"{where}.algebra")
                algebra = quadratic_field(
                    tower, parse_tower_literal(str(dlit), tower, f"{where}.algebra.delta"))
            elif akind == "split":
                algebra = split_algebra(tower)
            elif akind == "tensor":
                if ub is None:
                    raise ParseError("tensor algebras need $.extension", f"{where}.algebra")
                algebra = ub.algebra_over(tower)
            else:
                raise ParseError(f"unknown algebra kind {akind!r}", f"{where}.algebra")
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"bad algebra: {exc}", f"{where}.algebra") from None
        yv = parse_etale_literal(str(_need(ispec, "y", where)), algebra, f"{where}.y")
        ce = (_opt(ispec, "c_endoscopic") and
              parse_etale_literal(str(ispec["c_endoscopic"]), algebra, f"{where}.c_endoscopic"))
        xv = parse_etale_literal(str(_need(ispec, "x", where)), algebra, f"{where}.x")
        cx = (_opt(ispec, "c") and
              parse_etale_literal(str(ispec["c"]), algebra, f"{where}.c"))
        y_entries.append(IndexEntry(name, side, algebra, yv, ce or None))
        x_entries.append(IndexEntry(name, side, algebra, xv, cx or None))

    x_d = None
    if _opt(doc, "x_D") is not None:
        x_d = parse_tower_literal(str(doc["x_D"]), F, "$.x_D")

    names = {tower._fingerprint: n for n, tower in towers.items()}
    return InstanceDocument(
        base=base,
        group=group,
        endoscopic=endo,
        y=RegularParam(tuple(y_entries)),
        x=RegularParam(tuple(x_entries), x_d),
        tower_names=names,
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def dump_document(g, e, y, x):
    """Emit the JSON-compatible dict for an instance; literals round-trip."""
    doc = {"base": ({"kind": "real"} if g.base.is_real
                    else {"kind": "p-adic", "p": g.base.p,
                          "precision": g.base.precision})}
    towers = {}
    names = {}
    def tower_name(tower):
        if tower._fingerprint not in names:
            names[tower._fingerprint] = f"K{len(names)}"
            towers[names[tower._fingerprint]] = {
                "f": tower.f,
                "eis": [repr(tower.from_coords([list(vec)])) for vec in tower.eis],
            }
        return names[tower._fingerprint]

    for en in y.entries:
        tower_name(en.algebra.base_pm)
    doc["towers"] = towers
    if g.E is not None:
        doc["extension"] = {"delta": str(g.E.delta_e.as_fraction())}
    gspec = {"case": g.case, "d": g.d}
    if g.delta is not None:
        gspec["delta"] = repr(g.delta)
    if g.nu is not None:
        gspec["nu"] = repr(g.nu)
    if g.eta is not None:
        gspec["eta"] = repr(g.eta)
    doc["group"] = gspec
    espec = {"d_minus": e.d_minus, "d_plus": e.d_plus,
             "cocycle_class": e.cocycle_class}
    if e.delta_minus is not None:
        espec["delta_minus"] = repr(e.delta_minus)
    if e.delta_plus is not None:
        espec["delta_plus"] = repr(e.delta_plus)
    if e.chi is not None:
        espec["chi"] = repr(e.chi)
    for tag, mu in (("mu_minus", e.mu_minus), ("mu_plus", e.mu_plus)):
        if mu is not None:
            espec[tag] = {"angle_pi": str(mu.angle_pi),
                          "unit_exponent": mu.unit_exponent}
    doc["endoscopic"] = espec
    indices = []
    for ye, xe in zip(y.entries, x.entries):
        alg = ye.algebra
        if alg.unitary_base is not None:
            aspec = {"kind": "tensor"}
        elif alg.split_root is not None:
            aspec = {"kind": "split"}
        else:
            aspec = {"kind": "field", "delta": repr(alg.delta)}
        ispec = {"name": ye.name, "side": ye.side,
                 "tower": tower_name(alg.base_pm), "algebra": aspec,
                 "y": repr(ye.value), "x": repr(xe.value)}
        if ye.c is not None:
            ispec["c_endoscopic"] = repr(ye.c)
        if xe.c is not None:
            ispec["c"] = repr(xe.c)
        indices.append(ispec)
    doc["indices"] = indices
    if x.x_D is not None:
        doc["x_D"] = repr(x.x_D)
    return doc
