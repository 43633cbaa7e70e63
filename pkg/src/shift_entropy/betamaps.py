"""The family of maps ``x -> beta x + alpha mod 1``."""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
import mpmath

from .algebraic import is_exact
from .errors import BadParams, NotPeriodic, SymbolOverflow, SymbolUnderflow
from .piecewise import (
    DEFAULT_PRECISION,
    DEFAULT_SINGULAR_TOL,
    Enclosure,
    Exactness,
    PiecewiseAffineSystem,
    TrackedCoding,
    contraction_horizon,
    track_endpoint,
)
from .strings import EPString


@dataclass(frozen=True)
class AlphaBetaParams:
    """Parameters ``(alpha, beta)`` with derived branch count and ``gamma``.

    Values may be ints, Fractions, algebraic constants or floats.  ``k`` is
    ``ceil(alpha + beta)`` (at least 2), so an integer ``alpha + beta``
    gives ``gamma = 1``.
    """

    alpha: object
    beta: object

    def __post_init__(self):
        for name in ("alpha", "beta"):
            if isinstance(getattr(self, name), int):
                object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not 0 <= self.alpha <= 1:
            raise BadParams(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.beta < 1:
            raise BadParams(f"beta must be at least 1, got {self.beta}")

    @cached_property
    def k(self) -> int:
        return max(2, math.ceil(self.alpha + self.beta))

    @cached_property
    def gamma(self):
        return self.alpha + self.beta - self.k + 1

    @property
    def is_exact(self) -> bool:
        return is_exact(self.alpha) and is_exact(self.beta)

    def breakpoints(self) -> tuple:
        inner = tuple((j - self.alpha) / self.beta for j in range(1, self.k))
        return (0,) + inner + (1,)


def make_system(p: AlphaBetaParams) -> PiecewiseAffineSystem:
    """The k increasing branches ``f_j(x) = beta x + alpha - j``."""
    if not p.alpha < 1:
        raise BadParams("alpha = 1 puts a breakpoint at 0; use phi_bar_ab directly")
    k = p.k
    return PiecewiseAffineSystem(
        p.breakpoints(),
        (p.beta,) * k,
        tuple(p.alpha - j for j in range(k)),
    )


def phi_bar_ab(p: AlphaBetaParams, t: float) -> float:
    """Closed form of the clamped inverse on ``[0, k]``."""
    alpha, beta = float(p.alpha), float(p.beta)
    if t <= alpha:
        return 0.0
    if t >= alpha + beta:
        return 1.0
    return (t - alpha) / beta


def _chain(alpha: float, beta: float, word, t: float) -> float:
    hi = alpha + beta
    for s in reversed(word):
        t += s
        t = 0.0 if t <= alpha else 1.0 if t >= hi else (t - alpha) / beta
    return t


def _periodic_enclosure(alpha: float, beta: float, per, tol: float, cap: int) -> tuple[float, float]:
    """Enclosure of the fixed point of ``t -> phi_bar_p(per + t)``.

    The period map is increasing with slope at most ``beta**-p`` so
    ``t - F(t)`` is increasing.  First try the unclamped affine fixed point
    and certify a small bracket around it; fall back to iterating on
    ``[0, 1]``.
    """
    p = len(per)
    if beta > 1:
        inv = 1.0 / beta
        acc, scale = 0.0, inv
        for s in per:
            acc += (s - alpha) * scale
            scale *= inv
        denom = 1.0 - beta ** (-p)
        if denom > 0:
            c = acc / denom
            eps = max(tol / 4, 1e-15)
            lo, hi = max(0.0, c - eps), min(1.0, c + eps)
            f_lo, f_hi = _chain(alpha, beta, per, lo), _chain(alpha, beta, per, hi)
            if f_lo >= lo and f_hi <= hi:
                return f_lo, f_hi
    lo, hi = 0.0, 1.0
    steps = 0
    while hi - lo > tol and steps < cap:
        lo, hi = _chain(alpha, beta, per, lo), _chain(alpha, beta, per, hi)
        steps += p
    return lo, hi


def phi_infty_ab(alpha: float, beta: float, x: EPString, tol: float = 1e-12, cap: int = 10**6) -> Enclosure:
    """Enclosure of the expansion value of ``x`` for parameters ``(alpha, beta)``.

    Width is at most ``tol`` unless ``beta`` is so close to 1 that ``cap``
    symbols do not suffice; callers inspect ``width``.
    """
    alpha, beta = float(alpha), float(beta)
    pre_tol = tol
    if x.pre and beta > 1:
        # The preperiod contracts the period enclosure further.
        pre_tol = tol * beta ** min(len(x.pre), 600)
    lo, hi = _periodic_enclosure(alpha, beta, x.per, min(pre_tol, 0.5), cap)
    if x.pre:
        lo, hi = _chain(alpha, beta, x.pre, lo), _chain(alpha, beta, x.pre, hi)
    return Enclosure(lo, hi)


def phi_infty_prefix(alpha: float, beta: float, x: EPString, tol: float = 1e-12, cap: int = 10**6) -> Enclosure:
    """Same value by direct truncation with seeds 0 and 1 (reference route)."""
    n = contraction_horizon(float(beta), tol, cap)
    w = x.prefix(n)
    return Enclosure(_chain(alpha, beta, w, 0.0), _chain(alpha, beta, w, 1.0))


@dataclass(frozen=True)
class KneadingPair:
    """Orbit codings of 0 and 1, with how each was obtained."""

    u: TrackedCoding
    v: TrackedCoding

    @property
    def both_periodic(self) -> bool:
        return self.u.string is not None and self.v.string is not None

    @property
    def exact(self) -> bool:
        return self.u.exactness == self.v.exactness == Exactness.EXACT


def orbit_codings(
    p: AlphaBetaParams,
    n: int = 64,
    precision_bits: int = DEFAULT_PRECISION,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> KneadingPair:
    """Codings ``u`` of the orbit of 0 from above and ``v`` of 1 from below."""
    if not p.alpha < 1:
        raise BadParams("orbit codings need alpha in [0, 1)")
    with mpmath.workprec(precision_bits):
        sys = make_system(p)
    kw = dict(precision_bits=precision_bits, singular_tol=singular_tol)
    return KneadingPair(
        track_endpoint(sys, 0, "lower", n, **kw),
        track_endpoint(sys, p.k - 1, "upper", n, **kw),
    )


@dataclass(frozen=True)
class StarStrings:
    u_star: EPString
    v_star: EPString
    u_changed: bool
    v_changed: bool


def star_u(u: EPString, v: EPString) -> EPString:
    """``a' v`` where ``a`` is the period of ``u`` with its last letter lowered."""
    if not u.is_periodic:
        raise NotPeriodic("u must be purely periodic")
    a = u.per
    if a[-1] < 1:
        raise SymbolUnderflow("last letter of the period of u is 0")
    return _concat(a[:-1] + (a[-1] - 1,), v)


def star_v(u: EPString, v: EPString) -> EPString:
    """``b' u`` where ``b`` is the period of ``v`` with its last letter raised."""
    if not v.is_periodic:
        raise NotPeriodic("v must be purely periodic")
    b = v.per
    if b[-1] + 1 >= v.k:
        raise SymbolOverflow("last letter of the period of v is already k-1")
    return _concat(b[:-1] + (b[-1] + 1,), u)


def _concat(word, x: EPString) -> EPString:
    return EPString(tuple(word) + x.pre, x.per, x.k)


def star_strings(u: EPString, v: EPString) -> StarStrings:
    """Extremal alternative expansions; a side whose precondition fails is kept."""
    k = max(u.k, v.k)
    u, v = u.with_alphabet(k), v.with_alphabet(k)
    u_ok = u.is_periodic and len(u.per) > 1 and u.per[-1] >= 1
    v_ok = v.is_periodic and len(v.per) > 1 and v.per[-1] <= k - 2
    return StarStrings(
        _concat(u.per[:-1] + (u.per[-1] - 1,), v) if u_ok else u,
        _concat(v.per[:-1] + (v.per[-1] + 1,), u) if v_ok else v,
        u_ok,
        v_ok,
    )


def kneading_closed_form(alpha, beta, x: EPString):
    """Unclamped expansion value of ``x`` as an exact-arithmetic expression.

    Valid whenever no clamp is active along the expansion, which holds at
    genuine solutions of the kneading equations.  Works with mpmath values,
    so it is the residual used for Newton polishing.
    """
    inv = 1 / beta
    acc, scale = 0, 1
    for s in x.per:
        scale *= inv
        acc += (s - alpha) * scale
    t = acc / (1 - scale)
    for s in reversed(x.pre):
        t = (s + t - alpha) * inv
    return t


def polish(u: EPString, v: EPString, alpha: float, beta: float, bits: int = DEFAULT_PRECISION):
    """Newton-refine ``(alpha, beta)`` on the kneading equations of ``(s u, s v)``.

    Returns mpf values or ``None`` when Newton fails to converge.
    """
    k = v[0] + 1
    su, sv = u.shift(), v.shift()
    with mpmath.workprec(bits + 16):
        def residual(a, b):
            return [
                kneading_closed_form(a, b, su) - a,
                kneading_closed_form(a, b, sv) - (a + b - k + 1),
            ]
        # At degenerate roots Newton converges only linearly, hence the step budget.
        try:
            a, b = mpmath.findroot(
                residual, (mpmath.mpf(alpha), mpmath.mpf(beta)),
                tol=mpmath.mpf(2) ** (-2 * bits), maxsteps=2 * bits, verify=False,
            )
        except (ValueError, ZeroDivisionError):
            return None
        if max(abs(r) for r in residual(a, b)) > mpmath.mpf(2) ** (-bits):
            return None
        if abs(a - alpha) > 1e-6 or abs(b - beta) > 1e-6:
            return None
        return a, b
