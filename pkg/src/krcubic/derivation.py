"""Derivations by generator images: nilpotency, exponentials, brackets, descent.

A Derivation maps each variable to its image polynomial (unlisted variables
and all parameters go to zero) and extends by the Leibniz rule.  An optional
quotient relation makes it a derivation of the quotient ring: images and all
iterates are then kept in rewrite normal form, so nilpotency means literal
vanishing of the normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Mapping

from fractions import Fraction

from .errors import DerivationError, KrError, UnverifiedPairError
from .groebner import member, reduce
from .morphism import (QuotientRelation, RingMap, compose, exact_divide,
                       normal_form, verify_inverse_pair)
from .poly import Polynomial, VarTable


class Derivation:
    """Derivation of a polynomial ring, optionally modulo a quotient relation."""

    __slots__ = ("table", "images", "relation")

    def __init__(self, table: VarTable, images: Mapping[str, Polynomial],
                 relation: QuotientRelation | None = None):
        imgs: dict[str, Polynomial] = {}
        for v, im in images.items():
            if table.is_param(v):
                raise DerivationError("a derivation kills parameters; no image allowed")
            table.index(v)
            if not isinstance(im, Polynomial):
                im = table.constant(im)
            if im.table != table:
                im = im.transport(table)
            if relation is not None:
                im = normal_form(im, relation)
            if im:
                imgs[v] = im
        if relation is not None and relation.table != table:
            raise KrError("relation over a different table")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "relation", relation)
        if relation is not None:
            # descent condition: the derivation must preserve the ideal
            raw = self._derive_raw(relation.relation)
            if not raw.is_zero() and exact_divide(raw, relation.relation) is None:
                raise DerivationError(
                    "derivation does not descend: image of the relation is not a multiple")

    def __setattr__(self, name, value):
        raise AttributeError("Derivation is immutable")

    def image_of(self, name: str) -> Polynomial:
        self.table.index(name)
        return self.images.get(name, self.table.zero())

    def _derive_raw(self, f: Polynomial) -> Polynomial:
        acc = self.table.zero()
        for v, im in self.images.items():
            df = f.diff(v)
            if df:
                acc = acc + im * df
        return acc

    def apply(self, f: Polynomial) -> Polynomial:
        if f.table != self.table:
            f = f.transport(self.table)
        if self.relation is not None:
            f = normal_form(f, self.relation)
        out = self._derive_raw(f)
        if self.relation is not None:
            out = normal_form(out, self.relation)
        return out

    __call__ = apply

    def modulo(self, relation: QuotientRelation) -> "Derivation":
        return Derivation(self.table, self.images, relation)

    def __neg__(self):
        return Derivation(self.table, {v: -im for v, im in self.images.items()},
                          self.relation)

    def is_zero(self) -> bool:
        return not self.images

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (self.table == other.table and self.images == other.images
                and self.relation == other.relation)

    def __repr__(self):
        body = ", ".join(f"{v} -> {im}" for v, im in sorted(self.images.items()))
        tail = f" mod {self.relation.relation}" if self.relation else ""
        return f"Derivation({body}{tail})"


@dataclass(frozen=True)
class NilpotencyCertificate:
    """Per-generator order: smallest k with the k-th iterate vanishing."""

    orders: dict[str, int]
    bound_used: int
    complete: bool
    failed_generator: str | None = None

    def max_order(self) -> int:
        return max(self.orders.values(), default=0)


def nilpotency_certificate(d: Derivation, bound: int = 64) -> NilpotencyCertificate:
    """Iterate the derivation on every variable until zero or the bound.

    Exceeding the bound is an explicit outcome naming the offending
    generator, not an exception.
    """
    if bound < 1:
        raise DerivationError("bound must be at least 1")
    orders: dict[str, int] = {}
    for v in d.table.names:
        if d.table.is_param(v):
            orders[v] = 1
            continue
        g = d.table.var(v)
        k = 0
        while k < bound:
            g = d.apply(g)
            k += 1
            if g.is_zero():
                orders[v] = k
                break
        else:
            return NilpotencyCertificate(orders, bound, False, failed_generator=v)
    return NilpotencyCertificate(orders, bound, True)


def exponential(d: Derivation, s: str, bound: int = 64) -> RingMap:
    """The flow map exp(s*d): v -> sum s^k/k! d^k(v), a finite sum.

    s must be a parameter of the table that the derivation does not touch.
    The result is checked to invert exponential of -d exactly.
    """
    table = d.table
    if not table.is_param(s):
        raise DerivationError(f"flow parameter {s!r} must be a weight-0 variable")
    if d.relation is not None:
        raise DerivationError("exponential is implemented for relation-free derivations")
    for im in d.images.values():
        if im.degree_in(s) > 0:
            raise DerivationError("images must not involve the flow parameter")
    cert = nilpotency_certificate(d, bound)
    if not cert.complete:
        raise DerivationError(
            f"derivation is not nilpotent within bound {bound} "
            f"(generator {cert.failed_generator})")
    sv = table.var(s)

    def flow(v: str) -> Polynomial:
        acc = table.var(v)
        g = table.var(v)
        k = 0
        while True:
            g = d.apply(g)
            if g.is_zero():
                return acc
            k += 1
            acc = acc + g * sv ** k * Fraction(1, factorial(k))

    fwd = RingMap(table, {v: flow(v) for v in table.non_params()})
    return fwd


def verify_flow_pair(d: Derivation, s: str, bound: int = 64) -> bool:
    """exp(s*d) followed by exp(-s*d) must fix every variable exactly."""
    fwd = exponential(d, s, bound)
    bwd = exponential(-d, s, bound)
    return compose(fwd, bwd).is_identity() and compose(bwd, fwd).is_identity()


def poisson(h: Polynomial, f: Polynomial) -> Polynomial:
    """The plane Poisson bracket h_z*f_t - h_t*f_z."""
    if f.table != h.table:
        raise KrError("bracket operands over different tables")
    for v in ("z", "t"):
        h.table.index(v)
    return h.diff("z") * f.diff("t") - h.diff("t") * f.diff("z")


def conjugate(d: Derivation, fwd: RingMap, bwd: RingMap,
              mod_first=(), mod_second=()) -> Derivation:
    """Transport a derivation along a verified inverse pair: v -> fwd(d(bwd(v))).

    fwd and bwd must compose to the identity modulo the declared ideals (see
    verify_inverse_pair); the result is a derivation of the target ring.
    """
    if not verify_inverse_pair(fwd.with_inverse(bwd), mod_first, mod_second):
        raise UnverifiedPairError("maps are not a verified inverse pair")
    table = fwd.table
    images = {}
    for v in table.non_params():
        images[v] = fwd.apply(d.apply(bwd.image_of(v)))
    return Derivation(table, images)


def extend_lnd_from_base(d0: Derivation, table4: VarTable) -> Derivation:
    """Lift a derivation of the (x, z, t)-ring killing x to the cubic quotient.

    The image of y is forced by d(relation) = 0: with d(z) = x^2 d0(z) and
    d(t) = x^2 d0(t) one needs d(y) = -d0(z^2 + t^3).  The result descends to
    the quotient by x^2*y + z^2 + x + t^3 and in fact kills the relation.
    """
    if not d0.image_of("x").is_zero():
        raise DerivationError("base derivation must kill x")
    x = table4.var("x")
    z = table4.var("z")
    t = table4.var("t")
    y = table4.var("y")
    relation = x ** 2 * y + z ** 2 + x + t ** 3
    cusp = d0.table.var("z") ** 2 + d0.table.var("t") ** 3
    images = {
        "z": x ** 2 * d0.image_of("z").transport(table4),
        "t": x ** 2 * d0.image_of("t").transport(table4),
        "y": -d0.apply(cusp).transport(table4),
    }
    lifted = Derivation(table4, images, QuotientRelation(relation))
    assert lifted._derive_raw(relation).is_zero(), "lift must kill the relation"
    return lifted


def theta_extract(phi: RingMap, r: Polynomial) -> Polynomial:
    """Extract the Hamiltonian-generator invariant of a fiberwise automorphism.

    For phi fixing x with phi == id mod (x) and phi(r) in (x^2, r), write
    phi(z) = z + x*f, phi(t) = t + x*g mod (x^2).  The Jacobian-1 condition
    forces f_z + g_t = 0, so f dt - g dz integrates to h with h_t = f and
    h_z = -g; h is constant along V(r), and after dropping that constant
    h = r*alpha.  Returns alpha; the defining congruences
    phi(z) == z + x*(r*alpha)_t and phi(t) == t - x*(r*alpha)_z mod (x^2)
    are re-checked before returning.
    """
    table = phi.table
    x = table.var("x")
    if r.table != table:
        r = r.transport(table)
    if phi.image_of("x") != x:
        raise DerivationError("map must fix x")

    def slope(v: str) -> Polynomial:
        diff = phi.image_of(v) - table.var(v)
        if diff.is_zero():
            return table.zero()
        quot = exact_divide(diff, x)
        if quot is None:
            raise DerivationError(f"map is not the identity modulo (x) at {v!r}")
        return quot.substitute({"x": table.zero()})

    f = slope("z")
    g = slope("t")
    if f.diff("z") + g.diff("t") != table.zero():
        raise DerivationError("Jacobian condition f_z + g_t = 0 fails; not an automorphism mod x^2")
    if not member(phi.apply(r), [x ** 2, r]):
        raise DerivationError("map does not carry r into (x^2, r)")

    h1 = f.antiderivative("t")
    kprime = -g - h1.diff("z")
    if kprime.degree_in("t") > 0:
        raise DerivationError("integration failure: mixed term not t-free")
    h = h1 + kprime.antiderivative("z")

    rem, cofs = reduce(h, [r])
    if not rem.is_constant():
        raise DerivationError("h is not constant modulo (r): map is outside the group")
    alpha = cofs[0]

    x2 = x ** 2
    lead = r * alpha
    for v, sign in (("z", 1), ("t", -1)):
        target = table.var(v) + sign * x * lead.diff("t" if v == "z" else "z")
        if exact_divide(phi.image_of(v) - target, x2) is None:
            raise AssertionError("postcondition congruence mod x^2 violated")
    return alpha


def substitute_parameter(obj, param: str, value: Polynomial, check_ideal=None):
    """Replace a parameter by a polynomial in every image of a map or derivation.

    The value must not involve the parameter itself.  When check_ideal is
    given, the substituted map must carry each generator back into the ideal
    (the fiberwise-automorphism gluing pattern).
    """
    table = obj.table
    if not table.is_param(param):
        raise KrError(f"{param!r} is not a parameter")
    if value.table != table:
        value = value.transport(table)
    if value.degree_in(param) > 0:
        raise KrError("substitution value involves the parameter itself")
    images = {v: im.substitute({param: value}) for v, im in obj.images.items()}
    if isinstance(obj, RingMap):
        out = RingMap(table, images)
    elif isinstance(obj, Derivation):
        out = Derivation(table, images, obj.relation)
    else:
        raise KrError("can only substitute parameters in maps and derivations")
    if check_ideal is not None:
        gens = [g if isinstance(g, Polynomial) else table.constant(g) for g in check_ideal]
        for gpoly in gens:
            if not member(out.apply(gpoly) if isinstance(out, RingMap) else out.apply(gpoly),
                          gens):
                raise KrError("substituted object does not preserve the ideal")
    return out
