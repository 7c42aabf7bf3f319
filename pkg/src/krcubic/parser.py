"""Text grammar for rings, polynomials, maps, derivations and claims.

File extension .krv, UTF-8, '#' line comments.  The polynomial grammar is

    poly   := '-'? term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' sint)?
    base   := rational | 'w' | ident | ident '(' args ')' | '(' poly ')'
    rational := int ('/' int)?

with explicit '*' everywhere.  'w' is the reserved literal for the primitive
cube root of unity, so rings may not declare a variable named w (spell the
extra cylinder variable v instead).  Applying a bound map or derivation is
written NAME(poly); the built-in functions are quot(f, g) for exact division,
nf(f, rel) for the quotient normal form, theta(MAP, r) for the generator
invariant, and jacdet(MAP, v1, ...) for Jacobian determinants.

Declarations:

    ring NAME = vars(id, ... ; laurent id, ... ; param id, ...);
    let NAME = poly;
    map NAME : RING { id -> poly; ... }
    map NAME = extend(BASE, relation, unit);
    map NAME = compose(OUTER, INNER);
    map NAME = subst_param(MAP, param, value) [preserving {g1, ...}];
    derivation NAME : RING { id -> poly; ... } [mod {relation}]
    derivation NAME = conjugate(D, FWD, BWD, {g1, ...}, {g1, ...});
    claim "label" KIND(...) [anchor "text"] expect true|false;
    narrative "label" requires("label1", ...);

The first error aborts the unit with a 1-based line/column diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coeff import Eisenstein, OMEGA
from .errors import KrError, ParseError
from .poly import Polynomial, VarTable, render
from .morphism import (QuotientRelation, RingMap, compose,
                       extend_to_quotient_automorphism, jacobian, normal_form)
from .derivation import Derivation, conjugate, substitute_parameter

KEYWORDS = {
    "ring", "vars", "laurent", "param", "let", "map", "derivation", "claim",
    "narrative", "requires", "anchor", "expect", "true", "false", "mod",
    "inverse", "point", "weights", "preserving", "w",
    "eq", "divides", "member", "nilpotent", "cone_class", "smooth_at_all",
    "singular_at", "inverse_pair", "quasi_homogeneous", "graph_variable",
    "laurent_free",
    "nf", "quot", "theta", "jacdet", "extend", "compose", "subst_param",
    "conjugate",
}

CLAIM_KINDS = (
    "eq", "divides", "member", "nilpotent", "cone_class", "smooth_at_all",
    "singular_at", "inverse_pair", "quasi_homogeneous", "graph_variable",
    "laurent_free",
)

_PUNCT = ("->", "(", ")", "{", "}", ",", ";", ":", "^", "*", "+", "-", "/", "=")


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, string, punct, eof
    text: str
    line: int
    col: int
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col, start = line, col, i
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise ParseError("unterminated string", start_line, start_col, start)
            tokens.append(Token("string", text[i + 1:j], start_line, start_col, start))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], start_line, start_col, start))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], start_line, start_col, start))
            col += j - i
            i = j
            continue
        if text.startswith("->", i):
            tokens.append(Token("punct", "->", start_line, start_col, start))
            i += 2
            col += 2
            continue
        if ch in "(){},;:^*+-/=":
            tokens.append(Token("punct", ch, start_line, start_col, start))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col, i)
    tokens.append(Token("eof", "", line, col, n))
    return tokens


# ---------------------------------------------------------------------------
# expression AST (claim arguments stay lazy; everything else folds eagerly)

@dataclass(frozen=True)
class Lit:
    value: Polynomial

    def render(self, prec: int = 0) -> str:
        text = render(self.value)
        needs = (" + " in text or " - " in text or text.startswith("-")) \
            if prec >= 1 else False
        if prec >= 2 and len(self.value.terms) == 1:
            # single term that is itself a product still needs parens under ^
            needs = needs or "*" in text or "^" in text
        return f"({text})" if needs else text


@dataclass(frozen=True)
class Apply:
    name: str
    arg: "Node"

    def render(self, prec: int = 0) -> str:
        return f"{self.name}({self.arg.render(0)})"


@dataclass(frozen=True)
class Builtin:
    fn: str
    args: tuple
    names: tuple[str, ...] = ()

    def render(self, prec: int = 0) -> str:
        parts = list(self.names) + [a.render(0) for a in self.args]
        return f"{self.fn}({', '.join(parts)})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def render(self, prec: int = 0) -> str:
        own = 1 if self.op in "+-" else 2
        lhs = self.left.render(own if self.op != "-" else own)
        rhs = self.right.render(own + (1 if self.op == "-" else 0))
        text = f"{lhs} {self.op} {rhs}" if self.op in "+-" else f"{lhs}{self.op}{rhs}"
        return f"({text})" if prec > own else text


@dataclass(frozen=True)
class Negate:
    arg: "Node"

    def render(self, prec: int = 0) -> str:
        text = f"-{self.arg.render(2)}"
        return f"({text})" if prec >= 1 else text


Node = "Lit | Apply | Builtin | BinOp | Negate"


def eval_node(node, env: dict, table: VarTable) -> Polynomial:
    """Evaluate a claim-argument expression against the unit environment."""
    if isinstance(node, Lit):
        return node.value
    if isinstance(node, Negate):
        return -eval_node(node.arg, env, table)
    if isinstance(node, BinOp):
        a = eval_node(node.left, env, table)
        b = eval_node(node.right, env, table)
        return {"+": a + b, "-": a - b, "*": a * b}[node.op]
    if isinstance(node, Apply):
        kind, obj = env[node.name]
        arg = eval_node(node.arg, env, table)
        if kind in ("map", "derivation"):
            return obj.apply(arg)
        raise KrError(f"{node.name!r} is a {kind}, not applicable")
    if isinstance(node, Builtin):
        if node.fn == "quot":
            from .morphism import exact_divide
            num = eval_node(node.args[0], env, table)
            den = eval_node(node.args[1], env, table)
            q = exact_divide(num, den)
            if q is None:
                raise KrError("quot(): not exactly divisible")
            return q
        if node.fn == "nf":
            f = eval_node(node.args[0], env, table)
            rel = QuotientRelation(eval_node(node.args[1], env, table))
            return normal_form(f, rel)
        if node.fn == "theta":
            from .derivation import theta_extract
            kind, obj = env[node.names[0]]
            if kind != "map":
                raise KrError(f"theta() needs a map, got {kind}")
            return theta_extract(obj, eval_node(node.args[0], env, table))
        if node.fn == "jacdet":
            kind, obj = env[node.names[0]]
            if kind != "map":
                raise KrError(f"jacdet() needs a map, got {kind}")
            _, det = jacobian(obj, node.names[1:])
            return det
    raise KrError(f"cannot evaluate node {node!r}")


def _fold(node):
    """Collapse constant subtrees into Lit; leaves lazy nodes intact."""
    if isinstance(node, Negate) and isinstance(node.arg, Lit):
        return Lit(-node.arg.value)
    if isinstance(node, BinOp) and isinstance(node.left, Lit) and isinstance(node.right, Lit):
        a, b = node.left.value, node.right.value
        return Lit({"+": a + b, "-": a - b, "*": a * b}[node.op])
    return node


# ---------------------------------------------------------------------------
# declarations

@dataclass
class RingDecl:
    name: str
    table: VarTable


@dataclass
class LetDecl:
    name: str
    ring: str
    value: Polynomial


@dataclass
class MapDecl:
    name: str
    ring: str
    value: RingMap
    ctor: tuple | None = None  # for fmt: ('extend', base, rel, lam) etc.


@dataclass
class DerivDecl:
    name: str
    ring: str
    value: Derivation
    ctor: tuple | None = None


@dataclass
class InverseDecl:
    first: str
    second: str
    mod_first: list
    mod_second: list


@dataclass
class ClaimDecl:
    label: str
    kind: str
    ring: str
    payload: dict
    expect: bool
    anchor: str | None


@dataclass
class NarrativeDecl:
    label: str
    requires: tuple[str, ...]


@dataclass
class SourceUnit:
    items: list = field(default_factory=list)
    env: dict = field(default_factory=dict)   # name -> (kind, object)
    rings: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    narratives: list = field(default_factory=list)


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.unit = SourceUnit()
        self.current_ring: str | None = None

    # -- token helpers -------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None, expected=()):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col, tok.pos, expected)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == text:
            return self.next()
        if tok.kind == "ident" and tok.text == text:
            return self.next()
        self.error(f"found {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                   tok, expected=(text,))

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok.kind in ("punct", "ident") and tok.text == text:
            self.next()
            return True
        return False

    def ident(self, what="identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.error(f"expected {what}", tok, expected=(what,))
        return self.next()

    def string(self) -> str:
        tok = self.peek()
        if tok.kind != "string":
            self.error("expected a string literal", tok, expected=("string",))
        return self.next().text

    def integer(self) -> int:
        neg = self.accept("-")
        tok = self.peek()
        if tok.kind != "int":
            self.error("expected an integer", tok, expected=("integer",))
        self.next()
        val = int(tok.text)
        return -val if neg else val

    # -- name table ----------------------------------------------------------

    def declare(self, name_tok: Token, kind: str, obj):
        name = name_tok.text
        if name in KEYWORDS:
            self.error(f"{name!r} is a reserved word", name_tok)
        if name in self.unit.env or name in self.unit.rings:
            self.error(f"duplicate name {name!r}", name_tok)
        if self.current_ring is not None and name in self.table()._index:
            self.error(f"{name!r} collides with a ring variable", name_tok)
        if kind == "ring":
            self.unit.rings[name] = obj
        else:
            self.unit.env[name] = (kind, obj)

    def table(self) -> VarTable:
        if self.current_ring is None:
            self.error("no ring declared yet")
        return self.unit.rings[self.current_ring]

    def lookup(self, tok: Token) -> tuple[str, object]:
        entry = self.unit.env.get(tok.text)
        if entry is None:
            self.error(f"use of undeclared name {tok.text!r}", tok)
        return entry

    # -- expressions ----------------------------------------------------------

    def parse_expr(self):
        negate = self.accept("-")
        node = self.parse_term()
        if negate:
            node = _fold(Negate(node))
        while True:
            if self.accept("+"):
                node = _fold(BinOp("+", node, self.parse_term()))
            elif self.accept("-"):
                node = _fold(BinOp("-", node, self.parse_term()))
            else:
                return node

    def parse_term(self):
        node = self.parse_factor()
        while self.accept("*"):
            rhs = self.parse_factor()
            try:
                node = _fold(BinOp("*", node, rhs))
            except KrError as exc:
                self.error(str(exc))
        return node

    def parse_factor(self):
        tok = self.peek()
        node = self.parse_base()
        if self.accept("^"):
            k = self.integer()
            if isinstance(node, Lit):
                try:
                    return Lit(node.value ** k)
                except KrError as exc:
                    self.error(str(exc), tok)
            self.error("can only raise plain polynomials to powers", tok)
        return node

    def parse_base(self):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            num = int(tok.text)
            if self.accept("/"):
                den_tok = self.peek()
                if den_tok.kind != "int":
                    self.error("expected a denominator", den_tok, expected=("integer",))
                self.next()
                if int(den_tok.text) == 0:
                    self.error("zero denominator", den_tok)
                return Lit(self.table().constant(Fraction(num, int(den_tok.text))))
            return Lit(self.table().constant(num))
        if tok.kind == "punct" and tok.text == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind != "ident":
            self.error("expected a polynomial", tok,
                       expected=("number", "identifier", "("))
        name = tok.text
        if name == "w":
            self.next()
            return Lit(self.table().constant(OMEGA))
        if name in ("quot", "nf", "theta", "jacdet"):
            self.next()
            return self.parse_builtin(name, tok)
        self.next()
        table = self.table()
        if name in table._index:
            return Lit(table.var(name))
        kind, obj = self.lookup(tok)
        if kind == "poly":
            value, ring = obj
            if ring != self.current_ring:
                try:
                    value = value.transport(table)
                except KrError as exc:
                    self.error(str(exc), tok)
            return Lit(value)
        if kind in ("map", "derivation"):
            if not self.accept("("):
                self.error(f"{name!r} is a {kind}; apply it as {name}(...)", tok)
            arg = self.parse_expr()
            self.expect(")")
            return Apply(name, arg)
        self.error(f"{name!r} cannot appear in an expression", tok)

    def parse_builtin(self, fn: str, tok: Token):
        self.expect("(")
        if fn in ("quot", "nf"):
            a = self.parse_expr()
            self.expect(",")
            b = self.parse_expr()
            self.expect(")")
            if fn == "nf" and isinstance(b, Lit):
                try:
                    QuotientRelation(b.value)
                except KrError as exc:
                    self.error(str(exc), tok)
            return Builtin(fn, (a, b))
        if fn == "theta":
            mtok = self.ident("map name")
            kind, _ = self.lookup(mtok)
            if kind != "map":
                self.error(f"theta() needs a map, {mtok.text!r} is a {kind}", mtok)
            self.expect(",")
            r = self.parse_expr()
            self.expect(")")
            return Builtin("theta", (r,), (mtok.text,))
        if fn == "jacdet":
            mtok = self.ident("map name")
            kind, _ = self.lookup(mtok)
            if kind != "map":
                self.error(f"jacdet() needs a map, {mtok.text!r} is a {kind}", mtok)
            names = [mtok.text]
            table = self.table()
            while self.accept(","):
                vtok = self.ident("variable")
                if vtok.text not in table._index:
                    self.error(f"unknown variable {vtok.text!r}", vtok)
                names.append(vtok.text)
            self.expect(")")
            if len(names) < 2:
                self.error("jacdet() needs at least one variable", tok)
            return Builtin("jacdet", (), tuple(names))
        raise AssertionError(fn)

    def eval_expr(self, node, tok: Token | None = None) -> Polynomial:
        try:
            return eval_node(node, self.unit.env, self.table())
        except KrError as exc:
            self.error(str(exc), tok)

    def parse_poly(self, tok: Token | None = None) -> Polynomial:
        """Parse an expression and evaluate it immediately."""
        start = self.peek()
        node = self.parse_expr()
        return self.eval_expr(node, tok or start)

    # -- declarations ----------------------------------------------------------

    def parse_unit(self) -> SourceUnit:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "ident":
                self.error("expected a declaration", tok,
                           expected=("ring", "let", "map", "derivation", "claim"))
            handler = {
                "ring": self.parse_ring,
                "let": self.parse_let,
                "map": self.parse_map,
                "derivation": self.parse_derivation,
                "inverse": self.parse_inverse,
                "claim": self.parse_claim,
                "narrative": self.parse_narrative,
            }.get(tok.text)
            if handler is None:
                self.error(f"unknown declaration {tok.text!r}", tok,
                           expected=("ring", "let", "map", "derivation", "claim"))
            handler()
        return self.unit

    def _idlist(self) -> list[Token]:
        out = [self.ident("variable name")]
        while self.accept(","):
            out.append(self.ident("variable name"))
        return out

    def parse_ring(self):
        self.expect("ring")
        name = self.ident("ring name")
        self.expect("=")
        self.expect("vars")
        self.expect("(")
        var_toks = self._idlist()
        laurent: list[str] = []
        params: list[str] = []
        while self.accept(";"):
            section = self.ident("'laurent' or 'param'")
            if section.text == "laurent":
                laurent.extend(t.text for t in self._idlist())
            elif section.text == "param":
                params.extend(t.text for t in self._idlist())
            else:
                self.error("expected 'laurent' or 'param'", section,
                           expected=("laurent", "param"))
        self.expect(")")
        self.expect(";")
        names = []
        for tok in var_toks:
            if tok.text == "w" or tok.text in KEYWORDS:
                self.error(f"{tok.text!r} is reserved and cannot be a variable", tok)
            if tok.text in names:
                self.error(f"duplicate variable {tok.text!r}", tok)
            names.append(tok.text)
        for flagged in laurent + params:
            if flagged not in names:
                self.error(f"flagged variable {flagged!r} is not in vars(...)")
        table = VarTable(names, laurent=laurent, params=params)
        self.declare(name, "ring", table)
        self.unit.items.append(RingDecl(name.text, table))
        self.current_ring = name.text

    def parse_let(self):
        self.expect("let")
        name = self.ident("name")
        self.expect("=")
        value = self.parse_poly()
        self.expect(";")
        self.declare(name, "poly", (value, self.current_ring))
        self.unit.items.append(LetDecl(name.text, self.current_ring, value))

    def _parse_image_block(self) -> dict[str, Polynomial]:
        self.expect("{")
        images: dict[str, Polynomial] = {}
        table = self.table()
        while not self.accept("}"):
            vtok = self.ident("variable name")
            if vtok.text not in table._index:
                self.error(f"unknown variable {vtok.text!r}", vtok)
            if vtok.text in images:
                self.error(f"duplicate image for {vtok.text!r}", vtok)
            if table.is_param(vtok.text):
                self.error(f"{vtok.text!r} is a parameter and cannot be remapped", vtok)
            self.expect("->")
            images[vtok.text] = self.parse_poly(vtok)
            self.expect(";")
        return images

    def _ring_annotation(self):
        """Optional ': RINGNAME' switching the current ring."""
        if self.accept(":"):
            rtok = self.ident("ring name")
            if rtok.text not in self.unit.rings:
                self.error(f"unknown ring {rtok.text!r}", rtok)
            self.current_ring = rtok.text

    def parse_map(self):
        self.expect("map")
        name = self.ident("map name")
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "=":
            self.next()
            self.parse_map_ctor(name)
            return
        self._ring_annotation()
        images = self._parse_image_block()
        self.accept(";")
        try:
            value = RingMap(self.table(), images)
        except KrError as exc:
            self.error(str(exc), tok)
        self.declare(name, "map", value)
        self.unit.items.append(MapDecl(name.text, self.current_ring, value))

    def _polyset(self) -> list[Polynomial]:
        self.expect("{")
        out = [self.parse_poly()]
        while self.accept(","):
            out.append(self.parse_poly())
        self.expect("}")
        return out

    def parse_map_ctor(self, name: Token):
        fn = self.ident("constructor")
        if fn.text == "extend":
            self.expect("(")
            base = self.ident("map name")
            kind, phi = self.lookup(base)
            if kind != "map":
                self.error(f"extend() needs a map, {base.text!r} is a {kind}", base)
            self.expect(",")
            rel_poly = self.parse_poly()
            self.expect(",")
            lam = self.parse_poly()
            self.expect(")")
            self.expect(";")
            try:
                ext = extend_to_quotient_automorphism(phi, QuotientRelation(rel_poly), lam)
            except KrError as exc:
                self.error(str(exc), fn)
            self.declare(name, "map", ext.map)
            self.unit.items.append(MapDecl(name.text, self.current_ring, ext.map,
                                           ctor=("extend", base.text, rel_poly, lam)))
            return
        if fn.text == "compose":
            self.expect("(")
            outer = self.ident("map name")
            self.expect(",")
            inner = self.ident("map name")
            self.expect(")")
            self.expect(";")
            ko, mo = self.lookup(outer)
            ki, mi = self.lookup(inner)
            if ko != "map" or ki != "map":
                self.error("compose() needs two maps", fn)
            try:
                value = compose(mo, mi)
            except KrError as exc:
                self.error(str(exc), fn)
            self.declare(name, "map", value)
            self.unit.items.append(MapDecl(name.text, self.current_ring, value,
                                           ctor=("compose", outer.text, inner.text)))
            return
        if fn.text == "subst_param":
            self.expect("(")
            mtok = self.ident("map name")
            kind, mp = self.lookup(mtok)
            if kind != "map":
                self.error(f"subst_param() needs a map, {mtok.text!r} is a {kind}", mtok)
            self.expect(",")
            ptok = self.ident("parameter name")
            self.expect(",")
            value = self.parse_poly()
            self.expect(")")
            preserving = None
            if self.accept("preserving"):
                preserving = self._polyset()
            self.expect(";")
            try:
                out = substitute_parameter(mp, ptok.text, value, check_ideal=preserving)
            except KrError as exc:
                self.error(str(exc), fn)
            self.declare(name, "map", out)
            self.unit.items.append(MapDecl(
                name.text, self.current_ring, out,
                ctor=("subst_param", mtok.text, ptok.text, value, preserving)))
            return
        self.error(f"unknown map constructor {fn.text!r}", fn,
                   expected=("extend", "compose", "subst_param"))

    def parse_derivation(self):
        self.expect("derivation")
        name = self.ident("derivation name")
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "=":
            self.next()
            fn = self.ident("constructor")
            if fn.text != "conjugate":
                self.error(f"unknown derivation constructor {fn.text!r}", fn,
                           expected=("conjugate",))
            self.expect("(")
            dtok = self.ident("derivation name")
            kd, d = self.lookup(dtok)
            if kd != "derivation":
                self.error(f"conjugate() needs a derivation, {dtok.text!r} is a {kd}", dtok)
            self.expect(",")
            ftok = self.ident("map name")
            kf, fwd = self.lookup(ftok)
            self.expect(",")
            btok = self.ident("map name")
            kb, bwd = self.lookup(btok)
            if kf != "map" or kb != "map":
                self.error("conjugate() needs two maps", fn)
            self.expect(",")
            mod1 = self._polyset()
            self.expect(",")
            mod2 = self._polyset()
            self.expect(")")
            self.expect(";")
            try:
                value = conjugate(d, fwd, bwd, mod1, mod2)
            except KrError as exc:
                self.error(str(exc), fn)
            self.declare(name, "derivation", value)
            self.unit.items.append(DerivDecl(
                name.text, self.current_ring, value,
                ctor=("conjugate", dtok.text, ftok.text, btok.text, mod1, mod2)))
            return
        self._ring_annotation()
        images = self._parse_image_block()
        relation = None
        if self.accept("mod"):
            self.expect("{")
            rel_poly = self.parse_poly()
            self.expect("}")
            try:
                relation = QuotientRelation(rel_poly)
            except KrError as exc:
                self.error(str(exc), tok)
        self.accept(";")
        try:
            value = Derivation(self.table(), images, relation)
        except KrError as exc:
            self.error(str(exc), tok)
        self.declare(name, "derivation", value)
        self.unit.items.append(DerivDecl(name.text, self.current_ring, value))

    def parse_inverse(self):
        """inverse(A, B) mod {gens}, {gens}; records a verified inverse pair.

        compose(A, B) must fix every variable modulo the first ideal and
        compose(B, A) modulo the second; on success both map bindings carry
        each other as claimed inverses.
        """
        self.expect("inverse")
        start = self.peek()
        self.expect("(")
        atok = self.ident("map name")
        self.expect(",")
        btok = self.ident("map name")
        self.expect(")")
        ka, ma = self.lookup(atok)
        kb, mb = self.lookup(btok)
        if ka != "map" or kb != "map":
            self.error("inverse() needs two maps", start)
        mod1: list[Polynomial] = []
        mod2: list[Polynomial] = []
        if self.accept("mod"):
            mod1 = self._polyset()
            self.expect(",")
            mod2 = self._polyset()
        self.expect(";")
        from .morphism import verify_inverse_pair
        try:
            ok = verify_inverse_pair(ma.with_inverse(mb), mod1, mod2)
        except KrError as exc:
            self.error(str(exc), start)
        if not ok:
            self.error(f"{atok.text!r} and {btok.text!r} are not inverse "
                       f"modulo the declared ideals", start)
        self.unit.env[atok.text] = ("map", ma.with_inverse(mb))
        self.unit.env[btok.text] = ("map", mb.with_inverse(ma))
        self.unit.items.append(InverseDecl(atok.text, btok.text, mod1, mod2))

    # -- claims ----------------------------------------------------------------

    def _point(self) -> dict[str, Polynomial]:
        self.expect("point")
        self.expect("(")
        coords = [self.parse_poly()]
        while self.accept(","):
            coords.append(self.parse_poly())
        self.expect(")")
        table = self.table()
        targets = table.non_params()
        if len(coords) != len(targets):
            self.error(f"point needs {len(targets)} coordinates, got {len(coords)}")
        return dict(zip(targets, coords))

    def parse_claim(self):
        self.expect("claim")
        label = self.string()
        if any(c.label == label for c in self.unit.claims):
            self.error(f"duplicate claim label {label!r}")
        kind_tok = self.ident("claim kind")
        kind = kind_tok.text
        if kind not in CLAIM_KINDS:
            self.error(f"unknown claim kind {kind!r}", kind_tok, expected=CLAIM_KINDS)
        payload = self.parse_claim_payload(kind, kind_tok)
        anchor = None
        if self.accept("anchor"):
            anchor = self.string()
        self.expect("expect")
        exp_tok = self.ident("'true' or 'false'")
        if exp_tok.text not in ("true", "false"):
            self.error("expectation must be true or false", exp_tok,
                       expected=("true", "false"))
        self.expect(";")
        decl = ClaimDecl(label, kind, self.current_ring, payload,
                         exp_tok.text == "true", anchor)
        self.unit.claims.append(decl)
        self.unit.items.append(decl)

    def parse_claim_payload(self, kind: str, tok: Token) -> dict:
        self.expect("(")
        if kind == "eq":
            lhs = self.parse_expr()
            self.expect(",")
            rhs = self.parse_expr()
            self.expect(")")
            return {"lhs": lhs, "rhs": rhs}
        if kind == "divides":
            f = self.parse_expr()
            self.expect(",")
            g = self.parse_expr()
            self.expect(")")
            return {"f": f, "g": g}
        if kind == "member":
            f = self.parse_expr()
            self.expect(",")
            gens = self._polyset()
            self.expect(")")
            return {"f": f, "gens": gens}
        if kind == "nilpotent":
            dtok = self.ident("derivation name")
            kd, d = self.lookup(dtok)
            if kd != "derivation":
                self.error(f"nilpotent() needs a derivation, {dtok.text!r} is a {kd}", dtok)
            self.expect(",")
            bound_tok = self.peek()
            bound = self.integer()
            if bound < 1:
                self.error("bound must be positive", bound_tok)
            relation = None
            if self.accept(","):
                rel_poly = self.parse_poly()
                try:
                    relation = QuotientRelation(rel_poly)
                except KrError as exc:
                    self.error(str(exc), dtok)
            self.expect(")")
            return {"derivation": dtok.text, "bound": bound, "relation": relation}
        if kind == "cone_class":
            f = self.parse_expr()
            self.expect(",")
            point = self._point()
            self.expect(",")
            tag_tok = self.ident("cone tag")
            from .geometry import CONE_TAGS
            if tag_tok.text not in CONE_TAGS:
                self.error(f"unknown cone tag {tag_tok.text!r}", tag_tok,
                           expected=CONE_TAGS)
            spec = {}
            table = self.table()
            while self.accept(","):
                ptok = self.ident("parameter name")
                if ptok.text not in table._index or not table.is_param(ptok.text):
                    self.error(f"{ptok.text!r} is not a parameter", ptok)
                self.expect("->")
                val = self.parse_poly(ptok)
                if not val.is_constant():
                    self.error("specialization values must be constants", ptok)
                spec[ptok.text] = val.constant_value()
            self.expect(")")
            return {"f": f, "point": point, "tag": tag_tok.text, "spec": spec}
        if kind == "smooth_at_all":
            f = self.parse_expr()
            self.expect(")")
            return {"f": f}
        if kind == "singular_at":
            f = self.parse_expr()
            self.expect(",")
            point = self._point()
            self.expect(")")
            return {"f": f, "point": point}
        if kind == "inverse_pair":
            m1 = self.ident("map name")
            self.expect(",")
            m2 = self.ident("map name")
            for mtok in (m1, m2):
                kmap, _ = self.lookup(mtok)
                if kmap != "map":
                    self.error(f"inverse_pair() needs maps, {mtok.text!r} is a {kmap}", mtok)
            mod1: list[Polynomial] = []
            mod2: list[Polynomial] = []
            if self.accept(","):
                mod1 = self._polyset()
                self.expect(",")
                mod2 = self._polyset()
            self.expect(")")
            return {"m1": m1.text, "m2": m2.text, "mod1": mod1, "mod2": mod2}
        if kind == "quasi_homogeneous":
            f = self.parse_expr()
            self.expect(",")
            self.expect("weights")
            self.expect("(")
            weights = {}
            table = self.table()
            while True:
                vtok = self.ident("variable name")
                if vtok.text not in table._index:
                    self.error(f"unknown variable {vtok.text!r}", vtok)
                self.expect("->")
                weights[vtok.text] = self.integer()
                if not self.accept(","):
                    break
            self.expect(")")
            self.expect(",")
            degree = self.integer()
            self.expect(")")
            return {"f": f, "weights": weights, "degree": degree}
        if kind == "graph_variable":
            f = self.parse_expr()
            self.expect(",")
            vtok = self.ident("variable name")
            if vtok.text not in self.table()._index:
                self.error(f"unknown variable {vtok.text!r}", vtok)
            self.expect(")")
            return {"f": f, "var": vtok.text}
        if kind == "laurent_free":
            dtok = self.ident("derivation or map name")
            kd, _ = self.lookup(dtok)
            if kd not in ("derivation", "map"):
                self.error(f"laurent_free() needs a derivation or map", dtok)
            self.expect(",")
            vtok = self.ident("variable name")
            if vtok.text not in self.table()._index:
                self.error(f"unknown variable {vtok.text!r}", vtok)
            self.expect(")")
            return {"name": dtok.text, "var": vtok.text}
        raise AssertionError(kind)

    def parse_narrative(self):
        self.expect("narrative")
        label = self.string()
        self.expect("requires")
        self.expect("(")
        requires = [self.string()]
        while self.accept(","):
            requires.append(self.string())
        self.expect(")")
        self.expect(";")
        known = {c.label for c in self.unit.claims}
        known.update(n.label for n in self.unit.narratives)
        for req in requires:
            if req not in known:
                self.error(f"narrative references unknown claim {req!r}")
        decl = NarrativeDecl(label, tuple(requires))
        self.unit.narratives.append(decl)
        self.unit.items.append(decl)


def parse_unit(text: str) -> SourceUnit:
    return Parser(text).parse_unit()


def parse_polynomial(text: str, table: VarTable) -> Polynomial:
    """Parse a single polynomial expression over an existing table."""
    parser = Parser(text)
    parser.unit.rings["_R"] = table
    parser.current_ring = "_R"
    value = parser.parse_poly()
    tok = parser.peek()
    if tok.kind != "eof":
        parser.error("trailing input after polynomial", tok)
    return value


def parse_ring_spec(text: str) -> VarTable:
    """Parse 'vars(x, y ; laurent y ; param c)' used by the CLI."""
    parser = Parser("ring _R = " + text + ";")
    parser.parse_ring()
    if parser.peek().kind != "eof":
        parser.error("trailing input after ring spec")
    return parser.unit.rings["_R"]


# ---------------------------------------------------------------------------
# canonical formatting (the `fmt` subcommand); idempotent by construction

def _fmt_polyset(gens) -> str:
    return "{" + ", ".join(render(g) for g in gens) + "}"


def format_unit(unit: SourceUnit) -> str:
    out = []
    ring_of = {}
    for item in unit.items:
        if isinstance(item, RingDecl):
            t = item.table
            sections = [", ".join(t.names)]
            lau = [v for v, f in zip(t.names, t.laurent) if f]
            par = [v for v, wgt in zip(t.names, t.weights) if wgt == 0]
            if lau:
                sections.append("laurent " + ", ".join(lau))
            if par:
                sections.append("param " + ", ".join(par))
            out.append(f"ring {item.name} = vars({' ; '.join(sections)});")
            ring_of[item.name] = t
        elif isinstance(item, LetDecl):
            out.append(f"let {item.name} = {render(item.value)};")
        elif isinstance(item, MapDecl):
            if item.ctor is not None:
                out.append(_fmt_map_ctor(item))
                continue
            body = _fmt_images(item.value.table, item.value.images)
            out.append(f"map {item.name} : {item.ring} {body}")
        elif isinstance(item, DerivDecl):
            if item.ctor is not None:
                c = item.ctor
                out.append(
                    f"derivation {item.name} = conjugate({c[1]}, {c[2]}, {c[3]}, "
                    f"{_fmt_polyset(c[4])}, {_fmt_polyset(c[5])});")
                continue
            images = {v: im for v, im in item.value.images.items()}
            body = _fmt_images(item.value.table, images, identity_is_zero=True)
            tail = f" mod {{{render(item.value.relation.relation)}}}" if item.value.relation else ""
            out.append(f"derivation {item.name} : {item.ring} {body}{tail}")
        elif isinstance(item, InverseDecl):
            tail = ""
            if item.mod_first or item.mod_second:
                tail = f" mod {_fmt_polyset(item.mod_first)}, {_fmt_polyset(item.mod_second)}"
            out.append(f"inverse({item.first}, {item.second}){tail};")
        elif isinstance(item, ClaimDecl):
            out.append(_fmt_claim(item))
        elif isinstance(item, NarrativeDecl):
            reqs = ", ".join(f'"{r}"' for r in item.requires)
            out.append(f'narrative "{item.label}" requires({reqs});')
    return "\n".join(out) + "\n"


def _fmt_images(table: VarTable, images: dict, identity_is_zero=False) -> str:
    lines = []
    for v in table.names:
        im = images.get(v)
        if im is None:
            continue
        if not identity_is_zero and im == table.var(v):
            continue
        lines.append(f"  {v} -> {render(im)};")
    if not lines:
        return "{ }"
    return "{\n" + "\n".join(lines) + "\n}"


def _fmt_map_ctor(item: MapDecl) -> str:
    c = item.ctor
    if c[0] == "extend":
        return (f"map {item.name} = extend({c[1]}, {render(c[2])}, {render(c[3])});")
    if c[0] == "compose":
        return f"map {item.name} = compose({c[1]}, {c[2]});"
    if c[0] == "subst_param":
        tail = f" preserving {_fmt_polyset(c[4])}" if c[4] is not None else ""
        return (f"map {item.name} = subst_param({c[1]}, {c[2]}, {render(c[3])}){tail};")
    raise AssertionError(c)


def _fmt_point(point: dict) -> str:
    return "point(" + ", ".join(render(v) for v in point.values()) + ")"


def _fmt_claim(c: ClaimDecl) -> str:
    p = c.payload
    if c.kind == "eq":
        body = f"eq({p['lhs'].render()}, {p['rhs'].render()})"
    elif c.kind == "divides":
        body = f"divides({p['f'].render()}, {p['g'].render()})"
    elif c.kind == "member":
        body = f"member({p['f'].render()}, {_fmt_polyset(p['gens'])})"
    elif c.kind == "nilpotent":
        tail = f", {render(p['relation'].relation)}" if p["relation"] else ""
        body = f"nilpotent({p['derivation']}, {p['bound']}{tail})"
    elif c.kind == "cone_class":
        spec = "".join(f", {k} -> {v}" for k, v in p["spec"].items())
        body = (f"cone_class({p['f'].render()}, {_fmt_point(p['point'])}, "
                f"{p['tag']}{spec})")
    elif c.kind == "smooth_at_all":
        body = f"smooth_at_all({p['f'].render()})"
    elif c.kind == "singular_at":
        body = f"singular_at({p['f'].render()}, {_fmt_point(p['point'])})"
    elif c.kind == "inverse_pair":
        tail = ""
        if p["mod1"] or p["mod2"]:
            tail = f", {_fmt_polyset(p['mod1'])}, {_fmt_polyset(p['mod2'])}"
        body = f"inverse_pair({p['m1']}, {p['m2']}{tail})"
    elif c.kind == "quasi_homogeneous":
        ws = ", ".join(f"{v} -> {k}" for v, k in p["weights"].items())
        body = f"quasi_homogeneous({p['f'].render()}, weights({ws}), {p['degree']})"
    elif c.kind == "graph_variable":
        body = f"graph_variable({p['f'].render()}, {p['var']})"
    elif c.kind == "laurent_free":
        body = f"laurent_free({p['name']}, {p['var']})"
    else:
        raise AssertionError(c.kind)
    anchor = f'\n  anchor "{c.anchor}"' if c.anchor else ""
    return (f'claim "{c.label}"\n  {body}{anchor}\n'
            f'  expect {"true" if c.expect else "false"};')
