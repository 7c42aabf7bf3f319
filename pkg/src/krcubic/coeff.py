"""Exact arithmetic in the Eisenstein rationals Q(w), w a primitive cube root of unity.

Elements are stored as a + b*w with rational a, b and the defining relation
w^2 = -1 - w.  Every constant needed by the geometry lives here: rationals,
-1, w itself, and the primitive sixth root 1 + w = -w^2.  Representations are
unique, so structural equality is mathematical equality and there is no
normalization step beyond what Fraction already does.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedOrderError

RatLike = "int | Fraction"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational value: {x!r}")


class Eisenstein:
    """An element a + b*w of Q(w), exact and immutable."""

    __slots__ = ("re", "om")

    def __init__(self, re=0, om=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "om", _frac(om))

    def __setattr__(self, name, value):
        raise AttributeError("Eisenstein values are immutable")

    @staticmethod
    def of(value) -> "Eisenstein":
        """Coerce an int, Fraction or Eisenstein into the field."""
        if isinstance(value, Eisenstein):
            return value
        return Eisenstein(_frac(value))

    # -- predicates ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.om)

    def is_rational(self) -> bool:
        return self.om == 0

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _try(value):
        if isinstance(value, Eisenstein):
            return value
        if isinstance(value, (int, Fraction)):
            return Eisenstein(value)
        return None

    def __add__(self, other):
        other = Eisenstein._try(other)
        if other is None:
            return NotImplemented
        return Eisenstein(self.re + other.re, self.om + other.om)

    __radd__ = __add__

    def __sub__(self, other):
        other = Eisenstein._try(other)
        if other is None:
            return NotImplemented
        return Eisenstein(self.re - other.re, self.om - other.om)

    def __rsub__(self, other):
        other = Eisenstein._try(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Eisenstein(-self.re, -self.om)

    def __mul__(self, other):
        # (a + b*w)(c + d*w) = ac + (ad + bc)w + bd*w^2,  w^2 = -1 - w
        other = Eisenstein._try(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.om, other.re, other.om
        bd = b * d
        return Eisenstein(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def inverse(self) -> "Eisenstein":
        """Multiplicative inverse via the conjugate a - b - b*w and norm a^2 - ab + b^2."""
        a, b = self.re, self.om
        norm = a * a - a * b + b * b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        return Eisenstein((a - b) / norm, -b / norm)

    def __truediv__(self, other):
        return self * Eisenstein.of(other).inverse()

    def __rtruediv__(self, other):
        return Eisenstein.of(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = ONE
        while k:
            if k & 1:
                acc = acc * base
            k >>= 1
            if k:
                base = base * base
        return acc

    # -- equality and display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Eisenstein.of(other)
        if not isinstance(other, Eisenstein):
            return NotImplemented
        return self.re == other.re and self.om == other.om

    def __hash__(self):
        if self.om == 0:
            return hash(self.re)
        return hash((self.re, self.om))

    def __repr__(self):
        return f"Eisenstein({self.re!r}, {self.om!r})"

    def __str__(self):
        return render_coeff(self)


ZERO = Eisenstein(0)
ONE = Eisenstein(1)
OMEGA = Eisenstein(0, 1)
# -w^2 = 1 + w is a primitive sixth root of unity.
ZETA6 = Eisenstein(1, 1)


def root_of_unity(k: int, n: int) -> Eisenstein:
    """Return zeta_n^k expressed in Q(w); n must be one of 1, 2, 3, 6."""
    bases = {1: ONE, 2: Eisenstein(-1), 3: OMEGA, 6: ZETA6}
    if n not in bases:
        raise UnsupportedOrderError(f"order {n} does not divide 6")
    return bases[n] ** (k % n)


def _render_frac(q: Fraction) -> str:
    return str(q)  # Fraction prints p or p/q with q > 0


def render_coeff(c: Eisenstein) -> str:
    """Human form: '5', '-1/2', 'w', '2*w', '(1 + w)' styles (no outer parens here)."""
    a, b = c.re, c.om
    if b == 0:
        return _render_frac(a)
    if a == 0:
        if b == 1:
            return "w"
        if b == -1:
            return "-w"
        return f"{_render_frac(b)}*w"
    sign = " - " if b < 0 else " + "
    mag = -b if b < 0 else b
    wpart = "w" if mag == 1 else f"{_render_frac(mag)}*w"
    return f"{_render_frac(a)}{sign}{wpart}"
