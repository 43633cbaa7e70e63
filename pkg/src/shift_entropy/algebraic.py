"""Exact arithmetic in a simple real algebraic number field Q(theta).

Elements are coefficient vectors over the power basis of a monic minimal
polynomial.  Equality is decided exactly; signs are certified by interval
evaluation at increasing precision, which always terminates for nonzero
elements.  This is what lets named constants such as the golden ratio
produce exactly periodic kneading data.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath


class NumberField:
    """Q(theta) for a real root theta of a monic irreducible polynomial.

    ``poly`` lists coefficients from the constant term upward and must be
    monic.  ``bracket`` is a rational interval isolating the chosen root.
    """

    def __init__(self, name, poly, bracket):
        self.name = name
        self.poly = tuple(Fraction(c) for c in poly)
        if self.poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.degree = len(self.poly) - 1
        self.bracket = (Fraction(bracket[0]), Fraction(bracket[1]))

    def _eval_poly(self, x):
        acc = Fraction(0)
        for c in reversed(self.poly):
            acc = acc * x + c
        return acc

    @lru_cache(maxsize=16)
    def root_interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval of width below 2**-bits containing theta."""
        lo, hi = self.bracket
        s_lo = self._eval_poly(lo) > 0
        eps = Fraction(1, 2**bits)
        while hi - lo > eps:
            mid = (lo + hi) / 2
            # Limit denominators so the rationals stay small.
            mid = Fraction(math.floor(mid * 2 ** (bits + 2)), 2 ** (bits + 2))
            if mid <= lo or mid >= hi:
                break
            if (self._eval_poly(mid) > 0) == s_lo:
                lo = mid
            else:
                hi = mid
        return lo, hi

    def theta(self) -> "AlgebraicReal":
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return AlgebraicReal(self, coeffs)

    def __repr__(self):
        return f"NumberField({self.name})"


def _reduce(field: NumberField, coeffs: list) -> tuple:
    d = field.degree
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[i]
        if c:
            for j in range(d):
                coeffs[i - d + j] -= c * field.poly[j]
        coeffs[i] = Fraction(0)
    coeffs += [Fraction(0)] * (d - len(coeffs))
    return tuple(coeffs[:d])


class AlgebraicReal:
    """Element of a :class:`NumberField`, with exact field arithmetic."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = _reduce(field, [Fraction(c) for c in coeffs])

    def _coerce(self, other):
        if isinstance(other, AlgebraicReal):
            if other.field is not self.field:
                raise TypeError("elements of different number fields")
            return other
        if isinstance(other, (int, Rational)):
            return AlgebraicReal(self.field, [Fraction(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicReal(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return AlgebraicReal(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicReal":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = self.field.degree
        # Columns of the multiplication-by-self matrix in the power basis.
        cols = []
        basis = [Fraction(1)] + [Fraction(0)] * (d - 1)
        e = AlgebraicReal(self.field, basis)
        for _ in range(d):
            cols.append((self * e).coeffs)
            e = e * self.field.theta()
        rows = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            pv = rows[c][c]
            rows[c] = [x / pv for x in rows[c]]
            for r in range(d):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return AlgebraicReal(self.field, [rows[i][d] for i in range(d)])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval enclosing the value."""
        lo, hi = self.field.root_interval(bits)
        v_lo = v_hi = Fraction(0)
        for c in reversed(self.coeffs):
            # Horner step with interval multiplication by [lo, hi].
            cands = (v_lo * lo, v_lo * hi, v_hi * lo, v_hi * hi)
            v_lo, v_hi = min(cands) + c, max(cands) + c
        return v_lo, v_hi

    def sign(self) -> int:
        if self.is_zero():
            return 0
        bits = 64
        while True:
            lo, hi = self.interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.name, self.coeffs))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self) -> int:
        n = math.floor(self.to_mpf(64))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def __ceil__(self) -> int:
        n = math.floor(self)
        return n if self == n else n + 1

    def to_mpf(self, bits: int = 128):
        lo, hi = self.interval(bits + 8)
        with mpmath.workprec(bits):
            return mpmath.mpf(lo.numerator) / lo.denominator

    def __float__(self):
        return float(self.to_mpf(64))

    def __repr__(self):
        return f"AlgebraicReal({self.field.name}, {float(self):.17g})"


GOLDEN_FIELD = NumberField("golden", (-1, -1, 1), (1, 2))
PLASTIC_FIELD = NumberField("plastic", (-1, -1, 0, 1), (1, 2))

GOLDEN = GOLDEN_FIELD.theta()
PLASTIC = PLASTIC_FIELD.theta()

NAMED_CONSTANTS = {"golden": GOLDEN, "plastic": PLASTIC}


def is_exact(x) -> bool:
    """True for values whose comparisons are decided exactly."""
    return isinstance(x, (int, Fraction, AlgebraicReal))
