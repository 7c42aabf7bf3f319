"""Ring endomorphisms as first-class values.

A RingMap stores one image polynomial per non-parameter variable (parameters
are symbolic constants and always map to themselves).  Composition, inverse
pair verification modulo ideals, Jacobians, exact division, quotient-ring
normal forms and the automorphism-extension construction all live here.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .coeff import Eisenstein
from .errors import ExtensionError, KrError, UnverifiedPairError
from .groebner import GREVLEX, member, reduce
from .poly import Polynomial, VarTable, grevlex_key


class RingMap:
    """Endomorphism of a polynomial ring given by per-variable images."""

    __slots__ = ("table", "images", "claimed_inverse")

    def __init__(self, table: VarTable, images: Mapping[str, Polynomial],
                 claimed_inverse: "RingMap | None" = None):
        imgs: dict[str, Polynomial] = {}
        for v in table.non_params():
            im = images.get(v)
            if im is None:
                im = table.var(v)
            elif not isinstance(im, Polynomial):
                im = table.constant(im)
            if im.table != table:
                im = im.transport(table)
            if table.is_laurent(v) and not im.is_unit_monomial():
                # a Laurent variable must stay invertible under the map
                raise KrError(f"image of Laurent variable {v!r} must be a unit monomial")
            imgs[v] = im
        for v in images:
            if table.is_param(v):
                raise KrError(f"parameters cannot be remapped (got image for {v!r})")
            table.index(v)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "claimed_inverse", claimed_inverse)

    def __setattr__(self, name, value):
        raise AttributeError("RingMap is immutable")

    @staticmethod
    def identity(table: VarTable) -> "RingMap":
        return RingMap(table, {})

    def with_inverse(self, inv: "RingMap") -> "RingMap":
        return RingMap(self.table, self.images, claimed_inverse=inv)

    def apply(self, f: Polynomial) -> Polynomial:
        if f.table != self.table:
            f = f.transport(self.table)
        return f.substitute(self.images)

    __call__ = apply

    def image_of(self, name: str) -> Polynomial:
        if self.table.is_param(name):
            return self.table.var(name)
        return self.images[name]

    def is_identity(self) -> bool:
        return all(self.images[v] == self.table.var(v) for v in self.table.non_params())

    def __eq__(self, other):
        if not isinstance(other, RingMap):
            return NotImplemented
        return self.table == other.table and self.images == other.images

    def __hash__(self):
        return hash((self.table, frozenset(self.images.items())))

    def __repr__(self):
        moved = {v: str(im) for v, im in self.images.items()
                 if im != self.table.var(v)}
        return f"RingMap({moved})"


def compose(outer: RingMap, inner: RingMap) -> RingMap:
    """The map f -> outer(inner(f)); apply(compose(a, b), f) == a(b(f))."""
    if outer.table != inner.table:
        raise KrError("cannot compose maps over different tables")
    images = {v: outer.apply(inner.images[v]) for v in inner.table.non_params()}
    return RingMap(outer.table, images)


def _fixes_mod(m: RingMap, ideal: Sequence[Polynomial]) -> bool:
    for v in m.table.non_params():
        diff = m.images[v] - m.table.var(v)
        if diff.is_zero():
            continue
        if not ideal:
            return False
        if not member(diff, list(ideal)):
            return False
    return True


def verify_inverse_pair(m: RingMap, mod_first: Sequence[Polynomial] = (),
                        mod_second: Sequence[Polynomial] = ()) -> bool:
    """Check that m and its claimed inverse compose to the identity.

    compose(m, inverse) must fix every variable modulo mod_first, and
    compose(inverse, m) modulo mod_second; empty ideals demand exact identity.
    """
    inv = m.claimed_inverse
    if inv is None:
        raise KrError("map has no claimed inverse")
    return (_fixes_mod(compose(m, inv), mod_first)
            and _fixes_mod(compose(inv, m), mod_second))


def jacobian(m: RingMap, variables: Iterable[str]) -> tuple[list[list[Polynomial]], Polynomial]:
    """Matrix of partials of the images over the chosen variables, plus its determinant."""
    vs = list(variables)
    for v in vs:
        m.table.index(v)
    matrix = [[m.image_of(vi).diff(vj) for vj in vs] for vi in vs]
    return matrix, determinant(matrix, m.table)


def determinant(matrix: list[list[Polynomial]], table: VarTable) -> Polynomial:
    """Exact determinant by cofactor expansion along the first row."""
    n = len(matrix)
    if n == 0:
        return table.one()
    if n == 1:
        return matrix[0][0]
    det = table.zero()
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        cof = entry * determinant(minor, table)
        det = det + cof if j % 2 == 0 else det - cof
    return det


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial | None:
    """Return q with f == q*g if g divides f exactly, else None.

    Laurent monomial content is stripped from both sides first (monomials in
    Laurent variables are units), so the result may legitimately carry
    negative exponents.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if f.table != g.table:
        raise KrError("operands over different tables")
    table = f.table

    def strip(p: Polynomial) -> tuple[Polynomial, tuple[int, ...]]:
        shift = [0] * table.arity
        for i, lau in enumerate(table.laurent):
            if lau:
                shift[i] = min(e[i] for e in p.terms)
        if all(s == 0 for s in shift):
            return p, tuple(shift)
        unit = Polynomial(table, {tuple(-s for s in shift): Eisenstein(1)})
        return p * unit, tuple(shift)

    fs, fshift = strip(f)
    gs, gshift = strip(g)
    gm, gc = gs.leading_term(grevlex_key)

    key_cache: dict[tuple[int, ...], tuple] = {}

    def key(exps):
        k = key_cache.get(exps)
        if k is None:
            k = grevlex_key(exps)
            key_cache[exps] = k
        return k

    quot_terms: dict = {}
    work = dict(fs.terms)
    while work:
        wm = max(work, key=key)
        wc = work[wm]
        if not all(a <= b for a, b in zip(gm, wm)):
            return None
        q_exps = tuple(b - a for a, b in zip(gm, wm))
        q_c = wc / gc
        quot_terms[q_exps] = q_c
        for ge, gcoef in gs.terms.items():
            e = tuple(a + b for a, b in zip(q_exps, ge))
            got = work.get(e)
            got = -q_c * gcoef if got is None else got - q_c * gcoef
            if got:
                work[e] = got
            else:
                work.pop(e, None)
    quot = Polynomial(table, quot_terms)
    # reassemble: f = (quot * t^{fshift - gshift}) * g
    delta = tuple(a - b for a, b in zip(fshift, gshift))
    if any(delta):
        quot = quot * Polynomial(table, {delta: Eisenstein(1)})
    assert quot * g == f
    return quot


def divisible(f: Polynomial, g: Polynomial) -> bool:
    return exact_divide(f, g) is not None


def congruent_mod_x_power(m: RingMap, k: int, x_name: str = "x") -> bool:
    """True iff every image differs from its variable by a multiple of x^k."""
    xk = m.table.var(x_name) ** k
    for v in m.table.non_params():
        diff = m.images[v] - m.table.var(v)
        if diff.is_zero():
            continue
        if exact_divide(diff, xk) is None:
            return False
    return True


def fixes_ideal(m: RingMap, gens: Sequence[Polynomial]) -> bool:
    """True iff the image of every generator lies back in the ideal."""
    return all(member(m.apply(g), list(gens)) for g in gens)


def in_structure_group(m: RingMap) -> bool:
    """Membership in the group preserving (x) and (x^2, z^2 + t^3 + x).

    Requires a claimed inverse; both directions must preserve both ideals.
    """
    inv = m.claimed_inverse
    if inv is None:
        raise KrError("structure-group check requires a claimed inverse")
    t = m.table
    ix = [t.var("x")]
    big = [t.var("x") ** 2, t.var("z") ** 2 + t.var("t") ** 3 + t.var("x")]
    return (fixes_ideal(m, ix) and fixes_ideal(m, big)
            and fixes_ideal(inv, ix) and fixes_ideal(inv, big))


class QuotientRelation:
    """A relation of the shape x^2*y + r(z, t) + x*F(x, z, t), rewrite monomial x^2*y.

    The coefficient of x^2*y must be 1 and no other term may involve y; the
    quotient ring then has unique rewrite normal forms (each rewrite strictly
    lowers the y-degree).
    """

    __slots__ = ("table", "relation", "body", "_ix", "_iy")

    def __init__(self, relation: Polynomial, x_name: str = "x", y_name: str = "y"):
        table = relation.table
        ix, iy = table.index(x_name), table.index(y_name)
        head = [0] * table.arity
        head[ix], head[iy] = 2, 1
        head = tuple(head)
        if relation.terms.get(head) != Eisenstein(1):
            raise KrError("relation must have x^2*y with coefficient 1")
        rest = dict(relation.terms)
        del rest[head]
        for exps in rest:
            if exps[iy] != 0:
                raise KrError("relation tail must not involve y")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "relation", relation)
        # x^2*y rewrites to -(r + x*F)
        object.__setattr__(self, "body", -Polynomial(table, rest))
        object.__setattr__(self, "_ix", ix)
        object.__setattr__(self, "_iy", iy)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientRelation is immutable")

    @property
    def tail(self) -> Polynomial:
        """r + x*F, i.e. relation - x^2*y."""
        return -self.body

    def __eq__(self, other):
        if not isinstance(other, QuotientRelation):
            return NotImplemented
        return self.relation == other.relation

    def __hash__(self):
        return hash(self.relation)

    def __repr__(self):
        return f"QuotientRelation({self.relation})"


def normal_form(f: Polynomial, rel: QuotientRelation) -> Polynomial:
    """Unique rewrite-irreducible representative of f modulo the relation.

    Rewrites every monomial divisible by x^2*y via x^2*y -> -(r + x*F) until
    none remains; terminates because each rewrite lowers y-degree by one.
    """
    if f.table != rel.table:
        f = f.transport(rel.table)
    ix, iy = rel._ix, rel._iy
    table = rel.table
    work = f
    while True:
        keep = {}
        fire: list[tuple[tuple[int, ...], Eisenstein]] = []
        for exps, c in work.terms.items():
            if exps[ix] >= 2 and exps[iy] >= 1:
                fire.append((exps, c))
            else:
                keep[exps] = c
        if not fire:
            return work
        work = Polynomial(table, keep)
        for exps, c in fire:
            stub = list(exps)
            stub[ix] -= 2
            stub[iy] -= 1
            work = work + Polynomial(table, {tuple(stub): c}) * rel.body


class Extension:
    """Result of extending a base automorphism to the quotient ring.

    map     -- the extended endomorphism (y gets (y*factor - defect)/lam^2)
    factor  -- the unit-like multiplier with map(relation) == factor*relation
    defect  -- the x^2 cofactor of the decomposition
    """

    __slots__ = ("map", "factor", "defect")

    def __init__(self, mp: RingMap, factor: Polynomial, defect: Polynomial):
        object.__setattr__(self, "map", mp)
        object.__setattr__(self, "factor", factor)
        object.__setattr__(self, "defect", defect)

    def __setattr__(self, name, value):
        raise AttributeError("Extension is immutable")


def extend_to_quotient_automorphism(phi: RingMap, rel: QuotientRelation,
                                    lam: Polynomial) -> Extension:
    """Extend an automorphism of the base ring to the quotient by the relation.

    phi must not touch y, must scale x by the unit lam, and must carry the
    tail r + x*F into the ideal (r + x*F, x^2).  The decomposition
    phi(tail) = tail*f + x^2*g is computed by sequential division and then
    canonicalized so that f contains no monomial divisible by x^2 (the factor
    is unique modulo x^2; the extension itself changes only by a multiple of
    the relation).  The returned map satisfies map(relation) == f*relation.
    """
    table = rel.table
    if lam.table != table:
        lam = lam.transport(table)
    if not lam.is_unit_monomial():
        raise ExtensionError("x-scaling factor must be a nonzero unit")
    x = table.var(table.names[rel._ix])
    y = table.var(table.names[rel._iy])
    phi_images = {}
    for v, im in phi.images.items():
        phi_images[v] = im.transport(table) if im.table != table else im
    if table.names[rel._iy] in phi_images:
        img_y = phi_images.pop(table.names[rel._iy])
        if img_y != y:
            raise ExtensionError("base map must not move y")
    for im in phi_images.values():
        if im.degree_in(table.names[rel._iy]) > 0:
            raise ExtensionError("base map images must not involve y")
    if phi_images.get(table.names[rel._ix], x) != lam * x:
        raise ExtensionError("base map must scale x by the given unit")

    tail = rel.tail
    moved = tail.substitute(phi_images)
    rem, (cof_f, cof_g) = reduce(moved, [tail, x ** 2])
    if not rem.is_zero():
        raise ExtensionError(
            "map does not preserve the ideal (tail, x^2); not in the structure group")
    # canonicalize: strip x^2-divisible part of f into g
    low = {}
    high = {}
    for exps, c in cof_f.terms.items():
        (low if exps[rel._ix] < 2 else high)[exps] = c
    f0 = Polynomial(table, low)
    if high:
        u = exact_divide(Polynomial(table, high), x ** 2)
        assert u is not None
        cof_g = cof_g + tail * u
    lam_inv2 = lam.unit_inverse() ** 2
    images = dict(phi_images)
    images[table.names[rel._iy]] = (y * f0 - cof_g) * lam_inv2
    extended = RingMap(table, images)
    if extended.apply(rel.relation) != f0 * rel.relation:
        raise AssertionError("extension postcondition violated")
    return Extension(extended, f0, cof_g)
