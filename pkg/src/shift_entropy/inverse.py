"""Deciding whether admissible data ``(u, v)`` are the kneading data of some ``beta x + alpha``.

The solver first computes ``(alpha_bar, beta_bar)`` for ``(u, v)`` and the
growth rate ``beta_hat`` of the smaller shift ``Sigma(u, u_hat)``, where
``u_hat`` is the supremum of the shifts of ``u``.  A strict gap between the
two growth rates settles the question.  Equal rates require knowing whether
the candidate orbits of 0 and 1 are periodic, which is certified by Newton
polishing followed by high-precision orbit tracking.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .betamaps import AlphaBetaParams, KneadingPair, orbit_codings, phi_infty_ab, polish, star_strings
from .errors import ConditionViolation, Undetermined
from .piecewise import DEFAULT_PRECISION, DEFAULT_SINGULAR_TOL, Exactness
from .solver import DEFAULT_TOL, EntropyReport, compute_bar
from .strings import EPString, check_conditions, common_alphabet, compare, sup_shift

# Growth rates closer than this multiple of ``tol`` count as equal.
EQUAL_FACTOR = 100
# The kneading data of a matched pair are checked to at least this many symbols.
MIN_HORIZON = 64
# Newton only gains half the digits at a degenerate root, so polish well
# beyond the precision used for orbit tracking.
POLISH_BITS = 3 * DEFAULT_PRECISION


class Verdict(str, enum.Enum):
    MATCHED = "matched"
    NOT_REPRESENTABLE = "not_representable"
    UNDETERMINED = "undetermined"


class Case(str, enum.Enum):
    T41_CASE1 = "T41_case1"
    T41_CASE2 = "T41_case2"
    T41_CASE3 = "T41_case3"
    T42_LESS = "T42_less"
    T42_GREATER = "T42_greater"
    T42_INAPPLICABLE = "T42_inapplicable"


@dataclass(frozen=True)
class InverseDecision:
    verdict: Verdict
    alpha_bar: Optional[float]
    beta_bar: float
    beta_hat: float
    case: Case
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "alpha_bar": self.alpha_bar,
            "beta_bar": self.beta_bar,
            "beta_hat": self.beta_hat,
            "case": self.case.value,
            "evidence": self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _hat_report(u: EPString, tol: float) -> tuple[EPString, EntropyReport]:
    u_hat = sup_shift(u)
    if u.per == (0,) and not u.pre:
        # Sigma(0^inf, 0^inf) is a single point.
        return u_hat, EntropyReport(0.0, 1.0, None, 0.0, 2, ("u_zero",))
    return u_hat, compute_bar(u, u_hat, tol)


def beta_hat(u: EPString, tol: float = DEFAULT_TOL) -> float:
    """Growth rate of ``Sigma(u, u_hat)``."""
    if u[0] != 0:
        raise ConditionViolation("u_0 != 0", None)
    for n, s in enumerate(u.shifts()):
        if compare(s, u) < 0:
            raise ConditionViolation(f"s^{n}u < u", None)
    return _hat_report(u, tol)[1].beta_bar


@dataclass(frozen=True)
class KneadingResiduals:
    """Expansion values of all distinct shifts of ``u`` and ``v``.

    ``u_gap`` is the distance of the largest ``u``-value from 1 and
    ``v_gap`` that of the smallest ``v``-value from 0.  Both positive
    certifies that ``u`` and ``v`` are the true codings.
    """

    u_values: tuple[tuple[float, float], ...]
    v_values: tuple[tuple[float, float], ...]
    u_gap: float
    v_gap: float
    tol: float

    @property
    def u_reaches_one(self) -> bool:
        return self.u_gap <= self.tol

    @property
    def v_reaches_zero(self) -> bool:
        return self.v_gap <= self.tol

    @property
    def certified(self) -> bool:
        return not (self.u_reaches_one or self.v_reaches_zero)


def kneading_residuals(u: EPString, v: EPString, alpha: float, beta: float, tol: float = 1e-9) -> KneadingResiduals:
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    u, v = common_alphabet(u, v)
    us = [phi_infty_ab(alpha, beta, s, tol * 1e-3) for s in u.shifts()]
    vs = [phi_infty_ab(alpha, beta, s, tol * 1e-3) for s in v.shifts()]
    return KneadingResiduals(
        tuple((e.lo, e.hi) for e in us),
        tuple((e.lo, e.hi) for e in vs),
        1 - max(e.hi for e in us),
        min(e.lo for e in vs),
        tol,
    )


def _codings_at(alpha, beta, n: int) -> Optional[KneadingPair]:
    """Orbit codings at Newton-polished parameters, or None if they cannot be formed."""
    try:
        p = AlphaBetaParams(alpha, beta)
        if not p.alpha < 1:
            return None
        return orbit_codings(p, n, DEFAULT_PRECISION, DEFAULT_SINGULAR_TOL)
    except ValueError:
        return None


def _polished(u, v, report: EntropyReport):
    if report.alpha_bar is None or report.beta_bar <= 1:
        return None
    return polish(u, v, report.alpha_bar, report.beta_bar, POLISH_BITS)


def _coding_summary(pair: Optional[KneadingPair]) -> dict:
    if pair is None:
        return {"available": False}
    out = {"available": True}
    for name, c in (("u", pair.u), ("v", pair.v)):
        out[name] = str(c.string) if c.string is not None else "".join(map(str, c.word))
        out[f"{name}_exactness"] = c.exactness.value
    return out


def _is_periodic(c) -> Optional[bool]:
    if c.string is None:
        return None if c.exactness == Exactness.TRUNCATED else False
    return True


def decide(u: EPString, v: EPString, tol: float = DEFAULT_TOL) -> InverseDecision:
    """Decide whether ``(u, v)`` are the kneading data at ``(alpha_bar, beta_bar)``."""
    u, v = common_alphabet(u, v)
    report = check_conditions(u, v)
    if not report.admissible:
        raise ConditionViolation("; ".join(report.violations), report)
    bar = compute_bar(u, v, tol)
    u_hat, hat = _hat_report(u, tol)
    b_bar, b_hat = bar.beta_bar, hat.beta_bar
    evidence = {
        "u_hat": str(u_hat),
        "strict_condition": report.strict,
        "entropy_flags": list(bar.flags),
    }
    horizon = max(MIN_HORIZON, 4 * max(len(u.pre) + len(u.per), len(v.pre) + len(v.per)))

    def result(verdict, case, alpha=None, beta=None):
        alpha = bar.alpha_bar if alpha is None else alpha
        beta = b_bar if beta is None else beta
        return InverseDecision(verdict, alpha, beta, b_hat, case, evidence)

    def confirmed(case):
        # A matched verdict must reproduce u and v from the parameters.
        refined = _polished(u, v, bar)
        evidence["polished"] = refined is not None
        a, b = refined if refined is not None else (bar.alpha_bar, b_bar)
        codes = _codings_at(a, b, horizon)
        evidence["codings"] = _coding_summary(codes)
        ok = codes is not None and codes.u.prefix(horizon) == u.prefix(horizon) and codes.v.prefix(horizon) == v.prefix(horizon)
        evidence["verified_to"] = horizon if ok else 0
        if not ok:
            return result(Verdict.UNDETERMINED, case)
        return result(Verdict.MATCHED, case, float(a), float(b))

    gap_tol = EQUAL_FACTOR * tol
    if "k2_reversed" in bar.flags or b_bar - 1 < gap_tol:
        # Zero entropy pairs are not kneading data of a map with beta > 1.
        evidence["reason"] = "beta_bar equals 1"
        return result(Verdict.UNDETERMINED, Case.T42_INAPPLICABLE)
    if b_hat < b_bar - gap_tol:
        evidence["comparison"] = "less"
        return confirmed(Case.T41_CASE1)

    evidence["comparison"] = "equal" if abs(b_hat - b_bar) <= gap_tol else "greater"
    refined = _polished(u, v, bar)
    codes = _codings_at(*refined, horizon) if refined is not None else None
    evidence["codings"] = _coding_summary(codes)
    if codes is not None:
        pu, pv = _is_periodic(codes.u), _is_periodic(codes.v)
        evidence["periodic"] = {"u": pu, "v": pv}
        if pu and pv:
            return result(Verdict.NOT_REPRESENTABLE, Case.T41_CASE3, float(refined[0]), float(refined[1]))
        if pu is False or pv is False:
            return confirmed(Case.T41_CASE2)
    return _compare_with_u_star(u, v, hat, result, confirmed, evidence)


def _compare_with_u_star(u, v, hat: EntropyReport, result, confirmed, evidence) -> InverseDecision:
    """Fallback ordering test against the extremal expansion of 1 for ``Sigma(u, u_hat)``."""
    evidence["t42_statement_threshold"] = "h(Sigma(u, u_hat)) > 1"
    evidence["t42_statement_threshold_met"] = hat.entropy_log2 > 1
    b_t = hat.beta_bar
    if hat.alpha_bar is None or not b_t > 1:
        return result(Verdict.UNDETERMINED, Case.T42_INAPPLICABLE)
    u_hat = sup_shift(u)
    refined = polish(u, u_hat, hat.alpha_bar, b_t, POLISH_BITS) or (hat.alpha_bar, b_t)
    codes = _codings_at(*refined, MIN_HORIZON)
    if codes is None:
        return result(Verdict.UNDETERMINED, Case.T42_INAPPLICABLE)
    if codes.u.string is not None and codes.v.string is not None:
        u_star = star_strings(codes.u.string, codes.v.string).v_star
        evidence["u_star"] = str(u_star)
        c = compare(*common_alphabet(u_star, v))
    else:
        w = codes.v.prefix(MIN_HORIZON)
        evidence["u_star"] = "".join(map(str, w))
        ref = v.prefix(len(w))
        c = (w > ref) - (w < ref)
    if c < 0:
        return confirmed(Case.T42_LESS)
    if c > 0:
        return result(Verdict.NOT_REPRESENTABLE, Case.T42_GREATER)
    raise Undetermined("u_star cannot be ordered against v at this precision")
