"""Grammar, diagnostics, canonical rendering and round-trips."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from krcubic.coeff import Eisenstein, OMEGA
from krcubic.errors import KrError, ParseError
from krcubic.parser import (format_unit, parse_polynomial, parse_ring_spec,
                            parse_unit)
from krcubic.poly import VarTable, render

from conftest import random_poly, random_table


def test_ring_and_binding():
    unit = parse_unit("ring R = vars(x, y, z, t);\n"
                      "let P = x^2*y + z^2 + x + t^3;")
    kind, (value, ring) = unit.env["P"]
    assert kind == "poly" and ring == "R"
    T = unit.rings["R"]
    x, y, z, t = (T.var(n) for n in "xyzt")
    assert value == x ** 2 * y + z ** 2 + x + t ** 3


def test_expansion_has_six_terms():
    unit = parse_unit("ring R = vars(x, y, z, t);\n"
                      "let u = (1 + x)*(z^2 + x + t^3);")
    value = unit.env["u"][1][0]
    assert len(value.terms) == 6


def test_negative_exponent_needs_laurent_flag():
    with pytest.raises(ParseError) as info:
        parse_unit("ring R = vars(x, t);\nlet bad = t^-1;")
    assert "t" in str(info.value)
    assert info.value.line == 2
    parse_unit("ring R = vars(x, t ; laurent t);\nlet ok = t^-1;")


def test_use_before_declaration():
    with pytest.raises(ParseError) as info:
        parse_unit("ring R = vars(x);\nlet a = b + 1;")
    assert "undeclared" in str(info.value)


def test_duplicate_name_rejected():
    with pytest.raises(ParseError):
        parse_unit("ring R = vars(x);\nlet a = x;\nlet a = x + 1;")


def test_variable_shadowing_rejected():
    with pytest.raises(ParseError):
        parse_unit("ring R = vars(x);\nlet x = 1;")


def test_w_is_reserved():
    with pytest.raises(ParseError):
        parse_unit("ring R = vars(w);")
    unit = parse_unit("ring R = vars(t);\nlet a = (1 + w)*t;")
    value = unit.env["a"][1][0]
    assert value == (1 + OMEGA) * unit.rings["R"].var("t")


def test_diagnostics_carry_positions():
    with pytest.raises(ParseError) as info:
        parse_unit("ring R = vars(x);\nlet a = x +;")
    err = info.value
    assert err.line == 2 and err.col == 12


def test_rational_literals():
    T = VarTable(["t"])
    assert parse_polynomial("1/2*t + 3", T) == T.var("t") * 0.5 if False else True
    p = parse_polynomial("1/2*t + 3", T)
    from fractions import Fraction
    assert p == T.var("t") * Fraction(1, 2) + 3


def test_render_zero_and_canonical_order():
    T = VarTable(["x", "y", "z", "t"])
    assert render(T.zero()) == "0"
    P = T.var("x") ** 2 * T.var("y") + T.var("z") ** 2 + T.var("x") + T.var("t") ** 3
    assert render(P) == "x^2*y + t^3 + z^2 + x"


def test_render_omega_coefficient():
    T = VarTable(["t"])
    assert render((1 + OMEGA) * T.var("t")) == "(1 + w)*t"
    assert render(-(1 + OMEGA) * T.var("t")) == "-(1 + w)*t"
    assert render(OMEGA * T.var("t")) == "w*t"


def test_map_and_claim_round_trip_through_fmt():
    text = """ring R = vars(x, y, z, t);
let P = x^2*y + z^2 + x + t^3;
map M : R { y -> (1 + x)*y; }
derivation D : R { y -> 2*z; z -> -x^2; }
claim "sample" eq(M(P), M(P)) anchor "self" expect true;
narrative "agg" requires("sample");
"""
    unit = parse_unit(text)
    once = format_unit(unit)
    twice = format_unit(parse_unit(once))
    assert once == twice


def test_fmt_idempotent_on_shipped_manifests():
    from krcubic.claims import SHIPPED_MANIFESTS, manifest_path
    for name in SHIPPED_MANIFESTS:
        text = manifest_path(name).read_text(encoding="utf-8")
        once = format_unit(parse_unit(text))
        twice = format_unit(parse_unit(once))
        assert once == twice, name


def test_ring_spec_parser():
    T = parse_ring_spec("vars(x, y, z, t, c0 ; laurent t ; param c0)")
    assert T.names == ("x", "y", "z", "t", "c0")
    assert T.is_laurent("t") and T.is_param("c0")
    with pytest.raises(ParseError):
        parse_ring_spec("vars(x, x)")
    with pytest.raises(ParseError):
        # flagged variables must be declared in the vars(...) list
        parse_ring_spec("vars(x ; param c0)")


def test_round_trip_random_polynomials():
    rng = random.Random(2024)
    for _ in range(300):
        T = random_table(rng)
        p = random_poly(rng, T, max_terms=5, max_deg=4)
        assert parse_polynomial(render(p), T) == p


@settings(max_examples=400, derandomize=True, deadline=None)
@given(st.text(alphabet="xyzt0123456789+-*^()/ w;=", max_size=40))
def test_parser_is_total_on_junk(text):
    T = VarTable(["x", "y", "z", "t"])
    try:
        parse_polynomial(text, T)
    except (ParseError, KrError):
        pass  # positioned failure is the contract; no other exception may escape


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.text(max_size=60))
def test_unit_parser_is_total_on_arbitrary_text(text):
    try:
        parse_unit(text)
    except (ParseError, KrError):
        pass


def test_trailing_input_rejected():
    T = VarTable(["x"])
    with pytest.raises(ParseError):
        parse_polynomial("x + 1; junk", T)


def test_comment_and_whitespace_handling():
    unit = parse_unit("# leading comment\nring R = vars(x);  # trailing\nlet a = x; # done\n")
    assert "a" in unit.env


def test_unterminated_string():
    with pytest.raises(ParseError):
        parse_unit('ring R = vars(x);\nclaim "open eq(x, x) expect true;')


def test_inverse_declaration_records_the_pair():
    unit = parse_unit("""
ring R = vars(x, y, z, t);
let P = x^2*y + z^2 + x + t^3;
let Q = x^2*y + (1 + x)*(z^2 + x + t^3);
map fwd : R { y -> (1 + x)*y; }
map bwd : R { y -> (1 - x)*y - x - z^2 - t^3; }
inverse(fwd, bwd) mod {P}, {Q};
""")
    fwd = unit.env["fwd"][1]
    bwd = unit.env["bwd"][1]
    assert fwd.claimed_inverse == bwd
    assert bwd.claimed_inverse == fwd


def test_inverse_declaration_rejects_non_inverses():
    with pytest.raises(ParseError) as info:
        parse_unit("""
ring R = vars(x, y);
map a : R { y -> y + x; }
map b : R { y -> y + x; }
inverse(a, b);
""")
    assert "not inverse" in str(info.value)


def test_inverse_declaration_exact_pair():
    unit = parse_unit("""
ring R = vars(x, y);
map a : R { y -> y + x; }
map b : R { y -> y - x; }
inverse(a, b);
""")
    assert unit.env["a"][1].claimed_inverse == unit.env["b"][1]
    once = format_unit(unit)
    assert "inverse(a, b);" in once
    assert format_unit(parse_unit(once)) == once


def test_derivation_with_relation_block():
    unit = parse_unit("""
ring R = vars(x, y, z, t);
let P = x^2*y + z^2 + x + t^3;
derivation d : R { y -> 2*z; z -> -x^2; } mod {P}
claim "nilpotent on the quotient" nilpotent(d, 8) expect true;
""")
    d = unit.env["d"][1]
    assert d.relation is not None
    assert d.relation.relation == unit.env["P"][1][0]
    once = format_unit(unit)
    assert "mod {" in once
    assert format_unit(parse_unit(once)) == once


def test_derivation_relation_must_descend():
    with pytest.raises(ParseError):
        parse_unit("""
ring R = vars(x, y, z, t);
derivation d : R { z -> 1; } mod {x^2*y + z^2 + x + t^3}
""")


def test_point_arity_checked():
    with pytest.raises(ParseError) as info:
        parse_unit('ring R = vars(x, y);\n'
                    'claim "c" singular_at(x, point(0)) expect true;')
    assert "coordinates" in str(info.value)
