"""Alternating fixed-point computation of (alpha_bar, beta_bar) and the entropy.

Given admissible kneading-type data ``(u, v)`` over ``k`` symbols, the
solver alternates two one-dimensional root problems:

* gamma step: with ``alpha`` fixed, find ``gamma`` with
  ``phi(s v) = gamma`` where ``beta = gamma - alpha + k - 1``;
* alpha step: with ``gamma`` fixed, find ``alpha`` with ``phi(s u) = alpha``.

Both residuals are non-increasing in the unknown, so bisection applies.
Signs are accepted only when the enclosure of the residual excludes zero.
The entropy of ``Sigma(u, v)`` is ``log2(beta_bar)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .betamaps import AlphaBetaParams, phi_infty_ab, polish
from .errors import BracketFailure, ConditionViolation
from .graph import build_graph, has_zero_entropy
from .piecewise import Enclosure
from .strings import EPString, check_conditions, common_alphabet, compare

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
DEFAULT_HORIZON_CAP = 10**6
# Below this distance from 1 the slope no longer contracts usefully.
BETA_ONE_GAP = 1e-9
# Switch to direct bisection when successive decrements of beta shrink
# by less than this factor (the alternating scheme is then sublinear).
SLOW_AFTER = 4
SLOW_RATIO = 0.5


@dataclass(frozen=True)
class TraceStep:
    n: int
    alpha: float
    beta: float
    gamma: float
    residual: float


@dataclass(frozen=True)
class EntropyReport:
    alpha_bar: Optional[float]
    beta_bar: float
    gamma_bar: Optional[float]
    entropy_log2: float
    k: int
    flags: tuple[str, ...] = ()
    trace: tuple[TraceStep, ...] = field(default=())

    @property
    def converged(self) -> bool:
        return "max_iter_exceeded" not in self.flags

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        d["trace"] = [asdict(t) for t in self.trace]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _is_constant(x: EPString, symbol: int) -> bool:
    return not x.pre and x.per == (symbol,)


def eval_sigma(x: EPString, p: AlphaBetaParams, tol: float = DEFAULT_TOL, cap: int = DEFAULT_HORIZON_CAP) -> Enclosure:
    """Enclosure of the expansion value of ``x`` under ``p``."""
    return phi_infty_ab(float(p.alpha), float(p.beta), x, tol, cap)


def _enclosure_sign(evaluate: Callable[[float], Enclosure], target: float, width: float) -> tuple[int, float]:
    """Sign of ``phi - target``; 0 when no enclosure down to float resolution separates them."""
    w = width
    while True:
        enc = evaluate(w)
        if enc.lo > target:
            return 1, enc.mid - target
        if enc.hi < target:
            return -1, enc.mid - target
        if w < 1e-17 or enc.width <= 0:
            return 0, enc.mid - target
        # Refine: tighter width means a longer horizon.
        w = min(w, enc.width) / 4


def _bisect(sign_at: Callable[[float], tuple[int, float]], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Root of a non-increasing function; endpoint signs are taken as given."""
    residual = math.nan
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s, residual = sign_at(mid)
        if s == 0:
            return mid, residual
        if s > 0:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return mid, sign_at(mid)[1]


def _check_bracket(sign_at, lo_pt, hi_pt, beta_at, slack: float = 1e-9) -> None:
    # Only endpoints with a contracting slope can be evaluated reliably.
    # Residuals within ``slack`` of zero are rounding noise near convergence.
    for pt, bad in ((lo_pt, -1), (hi_pt, 1)):
        if beta_at(pt) > 1 + 1e-6:
            s, res = sign_at(pt)
            if s == bad and abs(res) > slack:
                raise BracketFailure(f"residual has the wrong sign at {pt}")


def solve_gamma_step(
    alpha: float,
    v: EPString,
    k: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_HORIZON_CAP,
) -> tuple[float, float]:
    """Solve ``phi(s v) = gamma`` at fixed ``alpha``.  Returns ``(gamma, residual)``."""
    k = v[0] + 1 if k is None else k
    sv = v.shift()
    if _is_constant(sv, k - 1):
        return 1.0, 0.0

    def beta_at(g):
        return g - alpha + k - 1

    def sign_at(g):
        return _enclosure_sign(lambda w: phi_infty_ab(alpha, beta_at(g), sv, w, cap), g, tol / 8)

    lo = alpha if k == 2 else 0.0
    _check_bracket(sign_at, lo, 1.0, beta_at)
    return _bisect(sign_at, lo, 1.0, tol / 4)


def solve_alpha_step(
    gamma: float,
    u: EPString,
    k: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_HORIZON_CAP,
    lower: float = 0.0,
) -> tuple[float, float]:
    """Solve ``phi(s u) = alpha`` at fixed ``gamma``.  Returns ``(alpha, residual)``."""
    k = u.k if k is None else k
    su = u.shift()
    if _is_constant(su, 0):
        return 0.0, 0.0
    if _is_constant(su, k - 1):
        return 1.0, 0.0

    def beta_at(a):
        return gamma - a + k - 1

    def sign_at(a):
        return _enclosure_sign(lambda w: phi_infty_ab(a, beta_at(a), su, w, cap), a, tol / 8)

    hi = gamma if k == 2 else 1.0
    _check_bracket(sign_at, lower, hi, beta_at)
    return _bisect(sign_at, lower, hi, tol / 4)


def _final(alpha, beta, k, flags, trace) -> EntropyReport:
    flags = list(flags)
    if beta - 1 < BETA_ONE_GAP:
        flags.append("beta_bar_is_one")
        h = 0.0
    else:
        h = math.log2(beta)
    gamma = alpha + beta - k + 1
    return EntropyReport(alpha, beta, gamma, h, k, tuple(flags), tuple(trace))


def compute_bar(
    u: EPString,
    v: EPString,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    horizon_cap: int = DEFAULT_HORIZON_CAP,
) -> EntropyReport:
    """Run the alternating algorithm and return ``(alpha_bar, beta_bar)`` with the entropy."""
    u, v = common_alphabet(u, v)
    report = check_conditions(u, v)
    if not report.admissible:
        raise ConditionViolation("; ".join(report.violations), report)
    k = report.k
    su, sv = u.shift(), v.shift()
    if k == 2 and compare(sv, su) < 0:
        return EntropyReport(None, 1.0, None, 0.0, k, ("k2_reversed",))
    if _is_constant(sv, 0):
        return _final(0.0, float(k - 1), k, ["sigma_v_zero"], [])
    if _is_constant(su, k - 1):
        return _final(1.0, float(k), k, ["sigma_u_top"], [])
    # With zero entropy the iteration only creeps towards beta = 1, where
    # expansions stop contracting, so settle that case combinatorially.
    if has_zero_entropy(build_graph(u, v)):
        return EntropyReport(None, 1.0, None, 0.0, k, ("zero_entropy", "beta_bar_is_one"))

    alpha, beta, gamma = 0.0, float(k), 1.0
    trace = [TraceStep(0, alpha, beta, gamma, 0.0)]
    flags = []
    prev_drop = math.inf
    for it in range(max_iter):
        beta_before = beta
        gamma, res = solve_gamma_step(alpha, v, k, tol, horizon_cap)
        beta = gamma - alpha + k - 1
        trace.append(TraceStep(2 * it + 1, alpha, beta, gamma, res))
        if _is_constant(su, 0):
            break
        alpha, res = solve_alpha_step(gamma, u, k, tol, horizon_cap, lower=alpha)
        beta = gamma - alpha + k - 1
        trace.append(TraceStep(2 * it + 2, alpha, beta, gamma, res))
        drop = beta_before - beta
        if abs(drop) < tol or beta - 1 < BETA_ONE_GAP:
            break
        if it >= SLOW_AFTER and drop > SLOW_RATIO * prev_drop:
            alpha, gamma, res = _finish_by_bisection(u, v, k, alpha, gamma, tol, horizon_cap)
            beta = gamma - alpha + k - 1
            trace.append(TraceStep(2 * it + 3, alpha, beta, gamma, res))
            flags.append("accelerated")
            break
        prev_drop = drop
    else:
        flags.append("max_iter_exceeded")
    return _final(alpha, beta, k, flags, trace)


def _finish_by_bisection(u, v, k, alpha_lo, gamma_hi, tol, cap):
    """Locate alpha_bar directly once the alternating sequence crawls.

    Along the curve where the gamma equation holds, the alpha residual is
    positive below the unique fixed point and negative above it, so the
    fixed point can be bisected for.  ``alpha_lo`` is a proven lower bound.
    """
    su = u.shift()

    def sign_at(a):
        g, _ = solve_gamma_step(a, v, k, tol, cap)
        b = g - a + k - 1
        if b - 1 < BETA_ONE_GAP:
            return -1, math.nan
        return _enclosure_sign(lambda w: phi_infty_ab(a, b, su, w, cap), a, tol / 8)

    hi = gamma_hi if k == 2 else 1.0
    alpha, res = _bisect(sign_at, alpha_lo, hi, tol / 4)
    gamma, _ = solve_gamma_step(alpha, v, k, tol, cap)
    # The residual is flat near such fixed points, so bisection alone only
    # gets about sqrt(tol).  Newton on the unclamped equations does better.
    a, b = alpha, gamma - alpha + k - 1
    polished = False
    for _ in range(4):
        refined = polish(u, v, a, b)
        if refined is None:
            break
        na, nb = float(refined[0]), float(refined[1])
        if na < alpha_lo - tol or kneading_gap(u, v, na, nb, tol) > 4 * tol:
            break
        step = abs(nb - b)
        a, b, polished = na, nb, True
        if step < tol:
            break
    if polished:
        return a, a + b - k + 1, 0.0
    return alpha, gamma, res


def kneading_gap(u: EPString, v: EPString, alpha: float, beta: float, tol: float = DEFAULT_TOL) -> float:
    """Largest distance of ``phi(s u)`` from ``alpha`` and ``phi(s v)`` from ``gamma``."""
    k = v[0] + 1
    gamma = alpha + beta - k + 1
    gap = 0.0
    for x, target in ((u.shift(), alpha), (v.shift(), gamma)):
        enc = phi_infty_ab(alpha, beta, x, tol)
        gap = max(gap, enc.lo - target, target - enc.hi)
    return gap


def verify_uniqueness(
    u: EPString,
    v: EPString,
    report: EntropyReport,
    probes: int = 64,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    slack: float = 4.0,
) -> bool:
    """Falsification probe: the report solves the equations and nearby curve points do not."""
    u, v = common_alphabet(u, v)
    if report.alpha_bar is None or report.beta_bar <= 1:
        return False
    threshold = slack * tol
    if kneading_gap(u, v, report.alpha_bar, report.beta_bar, tol) > threshold:
        return False
    k = report.k
    gamma = report.alpha_bar + report.beta_bar - k + 1
    rng = np.random.default_rng(seed)
    hi = min(1.0, gamma) if k == 2 else 1.0
    for a in rng.uniform(0.0, hi, size=probes):
        if abs(a - report.alpha_bar) < 1e-3:
            continue
        b = gamma - a + k - 1
        if b <= 1 + 1e-6:
            continue
        if kneading_gap(u, v, a, b, tol) <= threshold:
            return False
    return True
