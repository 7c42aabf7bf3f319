"""Multivariate division, Buchberger's algorithm and ideal membership.

Everything runs over Q(w) with exact arithmetic.  Inputs must carry no
negative exponents: Laurent callers clear denominators first (member() does
this automatically for the polynomial being tested, and strips negative
monomial content from generators, which does not change the ideal in the
Laurent ring).

The default order is graded reverse lexicographic; lex is available for
elimination experiments.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import GroebnerBudgetError, KrError, LaurentInputError
from .poly import Polynomial, VarTable, grevlex_key, lex_key


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: grevlex or lex, optionally with a variable permutation."""

    kind: str = "grevlex"
    perm: tuple[int, ...] | None = None

    def key(self, exps: tuple[int, ...]):
        if self.perm is not None:
            exps = tuple(exps[i] for i in self.perm)
        if self.kind == "grevlex":
            return grevlex_key(exps)
        if self.kind == "lex":
            return lex_key(exps)
        raise KrError(f"unknown order kind {self.kind!r}")


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def _require_polynomial(f: Polynomial, what: str):
    for exps in f.terms:
        if any(e < 0 for e in exps):
            raise LaurentInputError(
                f"{what} carries negative exponents; clear Laurent denominators first")


def _divides(m: tuple[int, ...], n: tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(m, n))


def _mono_quot(table: VarTable, n, m, coeff) -> Polynomial:
    return Polynomial(table, {tuple(a - b for a, b in zip(n, m)): coeff})


def reduce(f: Polynomial, gens: list[Polynomial],
           order: MonomialOrder = GREVLEX) -> tuple[Polynomial, list[Polynomial]]:
    """Division with remainder: f = sum(cofactor_i * gens_i) + remainder.

    No remainder monomial is divisible by any generator's leading monomial.
    The representation identity is asserted on every call.
    """
    _require_polynomial(f, "dividend")
    table = f.table
    lead = []
    for g in gens:
        if g.table != table:
            raise KrError("divisor over a different table")
        if g.is_zero():
            raise ZeroDivisionError("zero divisor in reduce()")
        _require_polynomial(g, "divisor")
        lead.append(g.leading_term(order.key))

    keyfn = order.key
    key_cache: dict[tuple[int, ...], tuple] = {}

    def key(exps):
        k = key_cache.get(exps)
        if k is None:
            k = keyfn(exps)
            key_cache[exps] = k
        return k

    work = dict(f.terms)
    cof_terms: list[dict] = [{} for _ in gens]
    rem_terms: dict = {}
    while work:
        lt_exps = max(work, key=key)
        lt_c = work[lt_exps]
        for i, (gm, gc) in enumerate(lead):
            if _divides(gm, lt_exps):
                q_exps = tuple(a - b for a, b in zip(lt_exps, gm))
                q_c = lt_c / gc
                prev = cof_terms[i].get(q_exps)
                prev = q_c if prev is None else prev + q_c
                if prev:
                    cof_terms[i][q_exps] = prev
                else:
                    cof_terms[i].pop(q_exps, None)
                for ge, gcoef in gens[i].terms.items():
                    e = tuple(a + b for a, b in zip(q_exps, ge))
                    got = work.get(e)
                    got = -q_c * gcoef if got is None else got - q_c * gcoef
                    if got:
                        work[e] = got
                    else:
                        work.pop(e, None)
                break
        else:
            rem_terms[lt_exps] = lt_c
            del work[lt_exps]
    rem = Polynomial(table, rem_terms)
    cofs = [Polynomial(table, t) for t in cof_terms]
    recombined = rem
    for c, g in zip(cofs, gens):
        recombined = recombined + c * g
    assert recombined == f, "division identity violated"
    return rem, cofs


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic Groebner basis; membership = zero remainder on reduce."""

    generators: tuple[Polynomial, ...]
    order: MonomialOrder

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        rem, _ = reduce(f, list(self.generators), self.order)
        return rem.is_zero()

    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant() \
            and not self.generators[0].is_zero()


def _spoly(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    fm, fc = f.leading_term(order.key)
    gm, gc = g.leading_term(order.key)
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    uf = _mono_quot(f.table, lcm, fm, fc.inverse())
    ug = _mono_quot(g.table, lcm, gm, gc.inverse())
    return uf * f - ug * g


def buchberger(gens: list[Polynomial], order: MonomialOrder = GREVLEX,
               max_pairs: int = 50_000) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    Uses the coprime-leading-monomial criterion; the instances this library
    meets are tiny, so nothing fancier is warranted.  Raises
    GroebnerBudgetError if the pair budget is exhausted.
    """
    basis = []
    table = None
    for g in gens:
        if g.is_zero():
            continue
        _require_polynomial(g, "generator")
        if table is None:
            table = g.table
        elif g.table != table:
            raise KrError("generators over different tables")
        basis.append(g.monic(order.key))
    if not basis:
        raise KrError("cannot take a Groebner basis of the zero ideal")

    def lm(i):
        return basis[i].leading_term(order.key)[0]

    heap: list = []
    counter = 0

    def push_pairs(j):
        nonlocal counter
        for i in range(j):
            lcm = tuple(max(a, b) for a, b in zip(lm(i), lm(j)))
            heapq.heappush(heap, (order.key(lcm), counter, i, j))
            counter += 1

    for j in range(len(basis)):
        push_pairs(j)

    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        processed += 1
        if processed > max_pairs:
            raise GroebnerBudgetError(f"pair budget {max_pairs} exhausted")
        mi, mj = lm(i), lm(j)
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        s = _spoly(basis[i], basis[j], order)
        if s.is_zero():
            continue
        rem, _ = reduce(s, basis, order)
        if not rem.is_zero():
            basis.append(rem.monic(order.key))
            push_pairs(len(basis) - 1)

    # minimalize: drop generators whose leading monomial another one divides
    minimal = []
    for i, g in enumerate(basis):
        gm = g.leading_term(order.key)[0]
        keep = True
        for j, h in enumerate(basis):
            if i == j:
                continue
            hm = h.leading_term(order.key)[0]
            if _divides(hm, gm) and (hm != gm or j < i):
                keep = False
                break
        if keep:
            minimal.append(g)

    # fully reduce each survivor against the others
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        if others:
            rem, _ = reduce(g, others, order)
            g = rem.monic(order.key)
        if not g.is_zero():
            reduced.append(g)
    reduced.sort(key=lambda p: order.key(p.leading_term(order.key)[0]))
    return GroebnerBasis(tuple(reduced), order)


def clear_laurent(f: Polynomial) -> Polynomial:
    """Multiply by the smallest Laurent monomial making all exponents >= 0."""
    if f.is_zero():
        return f
    table = f.table
    shift = [0] * table.arity
    for exps in f.terms:
        for i, e in enumerate(exps):
            if e < shift[i]:
                shift[i] = e
    if all(s == 0 for s in shift):
        return f
    mono = Polynomial(table, {tuple(-s for s in shift): f.table.constant(1).constant_value()})
    return f * mono


def member(f: Polynomial, gens: list[Polynomial],
           order: MonomialOrder = GREVLEX) -> bool:
    """Ideal membership via a Groebner basis.

    Laurent inputs are cleared by unit monomial multiplication, which is the
    membership notion in the localized ring (adequate for the principal prime
    ideals this library tests; all shipped claims live in genuine polynomial
    rings after clearing).
    """
    cleared = [clear_laurent(g) for g in gens if not g.is_zero()]
    if not cleared:
        return f.is_zero()
    basis = buchberger(cleared, order)
    return basis.contains(clear_laurent(f))


def smooth_everywhere(f: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
    """Jacobian criterion: V(f) is smooth iff 1 lies in (f, all partials)."""
    gens = [f] + [f.diff(v) for v in f.table.non_params()]
    basis = buchberger([g for g in gens if not g.is_zero()], order)
    return basis.is_unit_ideal()


def singular_at(f: Polynomial, point: dict[str, Polynomial]) -> bool:
    """True iff f and all its partials vanish at the point.

    Point coordinates may be constants or parameter expressions; vanishing
    means vanishing identically as polynomials in the parameters, so a
    parametric point encodes singularity along a whole family.
    """
    for v in f.table.non_params():
        if v not in point:
            raise KrError(f"point does not assign variable {v!r}")
    for g in [f] + [f.diff(v) for v in f.table.non_params()]:
        if not g.substitute(point).is_zero():
            return False
    return True


def singular_locus_check(f: Polynomial, mode: str,
                         point: dict[str, Polynomial] | None = None) -> bool:
    """Dispatch for the three singularity queries used by the claim suite."""
    if mode == "smooth_everywhere":
        return smooth_everywhere(f)
    if mode in ("singular_at_point", "singular_along_param_point"):
        if point is None:
            raise KrError("point mode requires a point")
        return singular_at(f, point)
    raise KrError(f"unknown singularity mode {mode!r}")
