"""Polynomial engine: arithmetic, substitution, calculus, grading."""

import random
from fractions import Fraction

import pytest

from krcubic.coeff import Eisenstein
from krcubic.errors import (EmptyConeError, KrError, NegativeExponentError,
                            NonUnitError, TableMismatchError)
from krcubic.poly import Polynomial, VarTable

from conftest import (cubic_poly, companion_poly, random_nonzero_poly,
                      random_poly, random_table)


def vars_of(table, *names):
    return tuple(table.var(n) for n in names)


def test_product_expansion_matches_hand_computation(ring4):
    x, y, z, t = vars_of(ring4, "x", "y", "z", "t")
    P = cubic_poly(ring4)
    got = (1 + x) * P
    expected = (x ** 2 * y + x ** 3 * y + z ** 2 + x * z ** 2 + x + x ** 2
                + t ** 3 + x * t ** 3)
    assert got == expected
    assert len(got.terms) == 8


def test_additive_identity(ring4):
    P = cubic_poly(ring4)
    assert P + ring4.zero() == P
    assert P - P == ring4.zero()


def test_binomial_square(cylinder_ring):
    x, z, v = vars_of(cylinder_ring, "x", "z", "v")
    assert (z + x * v) ** 2 == z ** 2 + 2 * x * z * v + x ** 2 * v ** 2


def test_table_mismatch_rejected(ring4, ring3):
    with pytest.raises(TableMismatchError):
        cubic_poly(ring4) + ring3.var("x")


def test_negative_power_of_non_unit_rejected(ring4):
    with pytest.raises((NonUnitError, NegativeExponentError)):
        (ring4.var("x") + 1) ** -1
    with pytest.raises(NegativeExponentError):
        ring4.var("t") ** -1


def test_substitution_reproduces_pullback_identities(ring4):
    x, y, z, t = vars_of(ring4, "x", "y", "z", "t")
    P, Q = cubic_poly(ring4), companion_poly(ring4)
    assert Q.substitute({"y": (1 + x) * y}) == (1 + x) * P
    assert P.substitute({"y": (1 - x) * y - x - z ** 2 - t ** 3}) == (1 - x) * Q


def test_substitution_on_cylinder_pair(cylinder_ring):
    x, y, z, t, v = vars_of(cylinder_ring, "x", "y", "z", "t", "v")
    cousin = x * y + z ** 2 + x + t ** 3
    images = {"y": x * y - x * v ** 2 - 2 * z * v, "z": z + x * v}
    assert cousin.substitute(images) == cubic_poly(cylinder_ring)


def test_substitution_needs_unit_image_for_negative_exponent(cylinder_ring):
    t, z = vars_of(cylinder_ring, "t", "z")
    f = t ** -3
    assert f.substitute({"t": 2 * t}) == Fraction(1, 8) * t ** -3
    with pytest.raises(NonUnitError):
        f.substitute({"t": t + z})


def test_partial_derivatives(ring4):
    x, y, z, t = vars_of(ring4, "x", "y", "z", "t")
    P = cubic_poly(ring4)
    assert P.diff("y") == x ** 2
    assert P.diff("x") == 2 * x * y + 1
    assert P.diff("z") == 2 * z
    assert P.diff("t") == 3 * t ** 2


def test_laurent_derivative(cylinder_ring):
    t = cylinder_ring.var("t")
    assert (t ** -3).diff("t") == -3 * t ** -4


def test_unknown_variable_rejected(ring4):
    with pytest.raises(KrError):
        cubic_poly(ring4).diff("nope")


def param_ring():
    return VarTable(["x", "y", "z", "t", "y0"], params=["y0"])


def test_lowest_part_of_cubic_fiber():
    T = param_ring()
    x, y, z, t, y0 = (T.var(n) for n in ["x", "y", "z", "t", "y0"])
    W = x ** 2 * y + z ** 2 + t ** 3  # cubic minus x
    cone = W.lowest_homogeneous_part({"x": 0, "y": y0, "z": 0, "t": 0})
    assert cone == z ** 2 + y0 * x ** 2


def test_lowest_part_of_companion_fiber():
    T = param_ring()
    x, y, z, t, y0 = (T.var(n) for n in ["x", "y", "z", "t", "y0"])
    W = companion_poly(T) - x
    cone = W.lowest_homogeneous_part({"x": 0, "y": y0, "z": 0, "t": 0})
    assert cone == z ** 2 + (y0 + 1) * x ** 2


def test_lowest_part_of_homogeneous_input(ring4):
    f = ring4.var("x") ** 2 * ring4.var("y")
    assert f.lowest_homogeneous_part() == f


def test_empty_cone_reported(ring4):
    with pytest.raises(EmptyConeError):
        ring4.zero().lowest_homogeneous_part({"x": 1})


def test_weighted_homogeneity(ring4):
    x, y, z, t = vars_of(ring4, "x", "y", "z", "t")
    P = cubic_poly(ring4)
    assert (z ** 2 + t ** 3 + x).is_weighted_homogeneous({"x": 6, "z": 3, "t": 2}, 6)
    assert P.is_weighted_homogeneous({"x": 6, "y": -6, "z": 3, "t": 2}, 6)
    assert not P.is_weighted_homogeneous({"x": 1, "y": 1, "z": 1, "t": 1}, 3)


def test_transport_by_name(ring3, ring4):
    f = ring3.var("z") ** 2 + ring3.var("t") ** 3 + ring3.var("x")
    g = f.transport(ring4)
    assert g.table == ring4
    assert g == ring4.var("z") ** 2 + ring4.var("t") ** 3 + ring4.var("x")
    with pytest.raises(KrError):
        cubic_poly(ring4).transport(ring3)  # y does not exist downstairs


# -- structural properties on random data -------------------------------------

def test_substitution_is_a_ring_homomorphism():
    rng = random.Random(101)
    T = VarTable(["x", "z", "t"])
    for _ in range(60):
        f = random_poly(rng, T, max_terms=3, max_deg=2)
        g = random_poly(rng, T, max_terms=3, max_deg=2)
        sigma = {"x": random_poly(rng, T, max_terms=2, max_deg=2),
                 "z": random_poly(rng, T, max_terms=2, max_deg=2)}
        lhs = (f * g + g).substitute(sigma)
        rhs = f.substitute(sigma) * g.substitute(sigma) + g.substitute(sigma)
        assert lhs == rhs


def test_leibniz_rule_on_random_inputs():
    rng = random.Random(102)
    T = VarTable(["x", "z", "t"], laurent=["t"])
    for _ in range(60):
        f = random_poly(rng, T)
        g = random_poly(rng, T)
        for v in T.names:
            assert (f * g).diff(v) == f * g.diff(v) + g * f.diff(v)


def test_mixed_partials_commute():
    rng = random.Random(103)
    T = VarTable(["x", "z", "t"])
    for _ in range(60):
        f = random_poly(rng, T, max_deg=4)
        assert f.diff("x").diff("z") == f.diff("z").diff("x")
        assert f.diff("z").diff("t") == f.diff("t").diff("z")


def test_translation_round_trip():
    rng = random.Random(104)
    T = VarTable(["x", "z", "t"])
    for _ in range(40):
        f = random_poly(rng, T)
        center = {"x": T.constant(rng.randint(-3, 3)),
                  "z": T.constant(rng.randint(-3, 3))}
        back = {v: -c for v, c in center.items()}
        assert f.translate(center).translate(back) == f


def test_homogeneous_components_reassemble():
    rng = random.Random(105)
    T = VarTable(["x", "z", "t", "c0"], params=["c0"])
    for _ in range(40):
        f = random_nonzero_poly(rng, T)
        comps = f.homogeneous_components()
        total = T.zero()
        for d, part in comps.items():
            for exps in part.terms:
                assert part.weighted_degree_of_term(exps) == d
            total = total + part
        assert total == f


def test_random_tables_stay_consistent():
    rng = random.Random(106)
    for _ in range(30):
        T = random_table(rng)
        f = random_poly(rng, T)
        g = random_poly(rng, T)
        assert f + g == g + f
        assert (f - g) + g == f
