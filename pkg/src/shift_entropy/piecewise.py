"""Piecewise affine interval maps and their inverse-branch expansions.

A system is a partition ``0 = a_0 < ... < a_k = 1`` with one affine branch
``f_j(x) = s_j x + c_j`` per piece.  Forward orbits (``T``, itineraries)
are computed exactly when all inputs are exact numbers and in mpmath
otherwise.  The clamped inverse branches used for expansions are
contracting, so they are evaluated in plain floats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import mpmath

from .algebraic import AlgebraicReal, is_exact
from .errors import SingularOrbit, SingularPoint
from .strings import EPString, Word, common_alphabet, compare

DEFAULT_PRECISION = 128
DEFAULT_SINGULAR_TOL = 1e-30


def sign(x) -> int:
    if isinstance(x, AlgebraicReal):
        return x.sign()
    return (x > 0) - (x < 0)


def to_float(x) -> float:
    return float(x)


def to_mpf(x, bits: int = DEFAULT_PRECISION):
    """Convert any supported real to an mpf at ``bits`` of precision."""
    with mpmath.workprec(bits):
        if isinstance(x, AlgebraicReal):
            return x.to_mpf(bits)
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


@dataclass(frozen=True)
class PiecewiseAffineSystem:
    """Affine branches ``f_j(x) = slopes[j] * x + intercepts[j]`` on ``(a_j, a_{j+1})``."""

    breakpoints: tuple
    slopes: tuple
    intercepts: tuple

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        object.__setattr__(self, "slopes", tuple(self.slopes))
        object.__setattr__(self, "intercepts", tuple(self.intercepts))
        k = len(self.slopes)
        if k < 1 or len(self.intercepts) != k or len(self.breakpoints) != k + 1:
            raise ValueError("need k slopes, k intercepts and k+1 breakpoints")
        if self.breakpoints[0] != 0 or self.breakpoints[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(sign(s) == 0 for s in self.slopes):
            raise ValueError("slopes must be nonzero")

    @property
    def k(self) -> int:
        return len(self.slopes)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(sign(s) for s in self.slopes)

    @cached_property
    def is_exact(self) -> bool:
        return all(is_exact(x) for x in self.breakpoints + self.slopes + self.intercepts)

    @cached_property
    def _floats(self):
        return (
            tuple(map(to_float, self.breakpoints)),
            tuple(map(to_float, self.slopes)),
            tuple(map(to_float, self.intercepts)),
        )

    def branch(self, j: int, x):
        return self.slopes[j] * x + self.intercepts[j]

    def image(self, j: int) -> tuple[float, float]:
        """Closure of ``J_j`` as a float interval."""
        a, s, c = self._floats
        y0, y1 = s[j] * a[j] + c[j], s[j] * a[j + 1] + c[j]
        return min(y0, y1), max(y0, y1)

    def invariant_problems(self, slack: float = 1e-12) -> list[str]:
        """Violations of ``J_j`` inside ``[0, 1]`` and of the covering condition."""
        problems = []
        images = [self.image(j) for j in range(self.k)]
        for j, (lo, hi) in enumerate(images):
            if lo < -slack or hi > 1 + slack:
                problems.append(f"J_{j} = [{lo}, {hi}] leaves [0, 1]")
        reach = 0.0
        for lo, hi in sorted(images):
            if lo > reach + slack:
                break
            reach = max(reach, hi)
        if reach < 1 - slack:
            problems.append("images of the branches do not cover [0, 1]")
        return problems

    def to_record(self) -> str:
        """Text record: ``k``, breakpoints, and one ``branch slope intercept`` line per branch."""
        lines = [f"k {self.k}", "breakpoints " + " ".join(_fmt(a) for a in self.breakpoints)]
        lines += [f"branch {_fmt(s)} {_fmt(c)}" for s, c in zip(self.slopes, self.intercepts)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text: str) -> "PiecewiseAffineSystem":
        k, breaks, slopes, intercepts = None, None, [], []
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            key, vals = parts[0], parts[1:]
            if key == "k":
                k = int(vals[0])
            elif key == "breakpoints":
                breaks = [_parse(v) for v in vals]
            elif key == "branch":
                slopes.append(_parse(vals[0]))
                intercepts.append(_parse(vals[1]))
            else:
                raise ValueError(f"unknown record field {key!r}")
        if breaks is None or k != len(slopes):
            raise ValueError("incomplete system record")
        return cls(tuple(breaks), tuple(slopes), tuple(intercepts))


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    return repr(float(x))


def _parse(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


class Validity(str, enum.Enum):
    VALID_BY_SLOPE = "valid_by_slope"
    UNKNOWN = "unknown"


class Membership(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Enclosure:
    """Interval ``[lo, hi]`` certified to contain a limit value."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


@dataclass(frozen=True)
class ClusterPair:
    """Limits of the two monotone subsequences when contraction fails."""

    y_up: float
    y_down: float
    non_contractive: bool = True


def phi_bar_branch(sys: PiecewiseAffineSystem, j: int, t: float) -> float:
    """Clamped inverse of branch ``j`` evaluated at ``j + t``."""
    a, s, c = sys._floats
    lo_pt, hi_pt = a[j], a[j + 1]
    if s[j] > 0:
        if t <= s[j] * lo_pt + c[j]:
            return lo_pt
        if t >= s[j] * hi_pt + c[j]:
            return hi_pt
    else:
        if t >= s[j] * lo_pt + c[j]:
            return lo_pt
        if t <= s[j] * hi_pt + c[j]:
            return hi_pt
    return (t - c[j]) / s[j]


def phi_bar_n(sys: PiecewiseAffineSystem, w: Sequence[int], t: float) -> float:
    """Composite ``phi_bar(w_0 + phi_bar(w_1 + ... phi_bar(w_{n-1} + t)))``."""
    if len(w) == 0:
        raise ValueError("word must be nonempty")
    val = t
    for z in reversed(w):
        val = phi_bar_branch(sys, z, val)
    return val


def contraction_horizon(min_slope: float, tol: float, cap: int) -> int:
    if min_slope <= 1:
        return cap
    return min(cap, max(1, math.ceil(math.log(1 / tol) / math.log(min_slope))))


def phi_bar_infty(
    sys: PiecewiseAffineSystem,
    x: EPString,
    tol: float = 1e-12,
    n_max: int = 400,
    cap: int = 10**6,
) -> Union[Enclosure, ClusterPair]:
    """Limit of ``phi_bar_n`` along ``x``.

    With every ``|s_j| > 1`` this returns an :class:`Enclosure` of width at
    most ``tol``.  Otherwise the last values of the two monotone
    subsequences up to ``n_max`` are returned as a :class:`ClusterPair`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    min_slope = min(abs(s) for s in sys._floats[1])
    if min_slope > 1:
        n = contraction_horizon(min_slope, tol, cap)
        w = x.prefix(n)
        y0, y1 = phi_bar_n(sys, w, 0.0), phi_bar_n(sys, w, 1.0)
        return Enclosure(min(y0, y1), max(y0, y1))
    a = sys._floats[0]
    x0 = x[0]
    y_up, y_down = a[x0], a[x0 + 1]
    delta = 1
    for n in range(1, n_max + 1):
        delta *= sys.signs[x[n - 1]]
        val = phi_bar_n(sys, x.prefix(n), 0.0)
        if delta > 0:
            y_up = val
        else:
            y_down = val
    return ClusterPair(min(y_up, y_down), max(y_up, y_down))


def validity_check(sys: PiecewiseAffineSystem) -> Validity:
    """Slope criterion; never claims invalidity."""
    if min(abs(s) for s in sys._floats[1]) > 1:
        return Validity.VALID_BY_SLOPE
    return Validity.UNKNOWN


class _Arith:
    """Exact arithmetic when possible, mpmath with a hit tolerance otherwise."""

    def __init__(self, sys: PiecewiseAffineSystem, extra=(), bits=DEFAULT_PRECISION, tol=DEFAULT_SINGULAR_TOL):
        self.exact = sys.is_exact and all(is_exact(v) for v in extra)
        self.bits = bits
        if self.exact:
            self.breaks = sys.breakpoints
            self.slopes = sys.slopes
            self.intercepts = sys.intercepts
        else:
            with mpmath.workprec(bits):
                self.breaks = tuple(to_mpf(v, bits) for v in sys.breakpoints)
                self.slopes = tuple(to_mpf(v, bits) for v in sys.slopes)
                self.intercepts = tuple(to_mpf(v, bits) for v in sys.intercepts)
                self.tol = mpmath.mpf(tol)

    def value(self, x):
        return x if self.exact else to_mpf(x, self.bits)

    def hit(self, x) -> Optional[int]:
        """Index of the breakpoint that ``x`` lands on, if any."""
        for m, a in enumerate(self.breaks):
            if (x == a) if self.exact else abs(x - a) < self.tol:
                return m
        return None

    def piece(self, x) -> int:
        for j in range(len(self.slopes)):
            if x < self.breaks[j + 1]:
                return j
        return len(self.slopes) - 1

    def apply(self, j, x):
        if self.exact:
            return self.slopes[j] * x + self.intercepts[j]
        with mpmath.workprec(self.bits):
            return self.slopes[j] * x + self.intercepts[j]


def apply_T(sys: PiecewiseAffineSystem, x, precision_bits=DEFAULT_PRECISION, singular_tol=DEFAULT_SINGULAR_TOL):
    """One step of the map.  Float input gives float output."""
    ar = _Arith(sys, (x,), precision_bits, singular_tol)
    xv = ar.value(x)
    if ar.hit(xv) is not None or not (0 < xv < 1):
        raise SingularPoint(f"{x} is a breakpoint or outside (0, 1)")
    y = ar.apply(ar.piece(xv), xv)
    return float(y) if isinstance(x, float) else y


def itinerary(sys: PiecewiseAffineSystem, x, n: int, precision_bits=DEFAULT_PRECISION, singular_tol=DEFAULT_SINGULAR_TOL) -> Word:
    """First ``n`` coding symbols of ``x``; raises :class:`SingularOrbit` on a hit."""
    if isinstance(x, float):
        x = str(x)  # decimal meaning, so 0.3 is 3/10 rather than its binary neighbour
    if isinstance(x, str):
        x = Fraction(x)
    ar = _Arith(sys, (x,), precision_bits, singular_tol)
    xv = ar.value(x)
    out = []
    for m in range(n):
        if ar.hit(xv) is not None:
            raise SingularOrbit(m)
        j = ar.piece(xv)
        out.append(j)
        xv = ar.apply(j, xv)
    return tuple(out)


class Exactness(str, enum.Enum):
    EXACT = "exact"
    PROBABLE = "probably_periodic"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class TrackedCoding:
    """Result of one-sided orbit tracking from a partition endpoint."""

    word: Word
    string: Optional[EPString]
    exactness: Exactness

    def prefix(self, n: int) -> Word:
        if self.string is not None:
            return self.string.prefix(n)
        return self.word[:n]


def track_endpoint(
    sys: PiecewiseAffineSystem,
    j: int,
    side: str,
    n: int,
    precision_bits: int = DEFAULT_PRECISION,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> TrackedCoding:
    """Virtual itinerary at ``a_j`` from above (``lower``) or ``a_{j+1}`` from below (``upper``).

    On a breakpoint hit the approach side picks the symbol.  Revisiting a
    hit state closes a period; that is exact in exact arithmetic and only
    probable in floating point.
    """
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    ar = _Arith(sys, (), precision_bits, singular_tol)
    k = sys.k
    if side == "lower":
        x, s = ar.breaks[j], 1
    else:
        x, s = ar.breaks[j + 1], -1
    seen: dict = {}
    word: list[int] = []
    for i in range(n):
        m = ar.hit(x)
        if m is not None:
            x = ar.breaks[m]
            sym = min(m, k - 1) if s > 0 else max(m - 1, 0)
            key = (m, s)
        else:
            sym = ar.piece(x)
            key = (x, s) if ar.exact else None
        if key is not None:
            if key in seen:
                start = seen[key]
                string = EPString(tuple(word[:start]), tuple(word[start:]), k)
                status = Exactness.EXACT if ar.exact else Exactness.PROBABLE
                return TrackedCoding(string.prefix(n), string, status)
            seen[key] = i
        word.append(sym)
        x = ar.apply(sym, x)
        s *= sys.signs[sym]
    return TrackedCoding(tuple(word), None, Exactness.TRUNCATED)


def virtual_itinerary(sys: PiecewiseAffineSystem, j: int, side: str, n: int, **kw) -> Word:
    """First ``n`` symbols of the virtual itinerary ``u^j`` or ``v^j``."""
    return track_endpoint(sys, j, side, n, **kw).prefix(n)


def _word_compare(x: Sequence[int], y: Sequence[int], signs) -> int:
    sgn = 1
    for a, b in zip(x, y):
        if a != b:
            return sgn if a > b else -sgn
        sgn *= signs[a]
    return 0


def membership(sys: PiecewiseAffineSystem, x: EPString, n: int = 64, **kw) -> Membership:
    """Check ``u^{x_m} < s^m x < v^{x_m}`` over all distinct shifts of ``x``."""
    bounds = {}
    result = Membership.INSIDE
    for s in x.shifts():
        j = s[0]
        if j not in bounds:
            bounds[j] = (track_endpoint(sys, j, "lower", n, **kw), track_endpoint(sys, j, "upper", n, **kw))
        for bound, want in zip(bounds[j], (1, -1)):
            if bound.string is not None:
                c = compare(*common_alphabet(s, bound.string), sys.signs)
            else:
                c = _word_compare(s.prefix(n), bound.word, sys.signs)
            if c == 0:
                result = Membership.BOUNDARY
            elif c != want:
                return Membership.OUTSIDE
    return result
