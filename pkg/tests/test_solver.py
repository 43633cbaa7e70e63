import json
import math

import pytest

from shift_entropy.betamaps import AlphaBetaParams
from shift_entropy.errors import ConditionViolation
from shift_entropy.graph import build_graph, graph_entropy
from shift_entropy.solver import (
    compute_bar,
    eval_sigma,
    kneading_gap,
    solve_alpha_step,
    solve_gamma_step,
    verify_uniqueness,
)
from shift_entropy.strings import compare, parse_string

from conftest import GOLDEN_ROOT, PLASTIC_ROOT, pair, periodic_pairs

P = parse_string
TOL = 1e-12


def test_eval_sigma_examples():
    assert eval_sigma(P("(01)"), AlphaBetaParams(0, GOLDEN_ROOT)).contains(1 / GOLDEN_ROOT, 1e-12)
    assert eval_sigma(P("(0)"), AlphaBetaParams(0, 1.7)).contains(0.0)
    assert eval_sigma(P("(1)"), AlphaBetaParams(0, 2)).contains(1.0)


def test_gamma_step_examples():
    gamma, res = solve_gamma_step(0.0, P("(10)"))
    assert gamma == pytest.approx(1 / GOLDEN_ROOT, abs=1e-11)
    assert abs(res) <= TOL
    assert solve_gamma_step(0.0, P("(1)"))[0] == 1.0


def test_gamma_step_for_plastic_v_bounds_the_answer():
    gamma, _ = solve_gamma_step(0.0, P("(110)"))
    # First half-step from alpha=0 overshoots the final beta from above.
    assert 1 + gamma > PLASTIC_ROOT


def test_alpha_step_examples():
    assert solve_alpha_step(1.0, P("(0)")) == (0.0, 0.0)
    gamma_bar = 1 / (1 + PLASTIC_ROOT) + PLASTIC_ROOT - 1
    alpha, res = solve_alpha_step(gamma_bar, P("(01)"))
    assert alpha == pytest.approx(1 / (1 + PLASTIC_ROOT), abs=1e-10)
    assert solve_alpha_step(1.0, P("0(1)"))[0] == 1.0


def test_compute_bar_plastic():
    r = compute_bar(*pair("(01)", "(110)"))
    assert r.beta_bar == pytest.approx(PLASTIC_ROOT, abs=1e-10)
    assert r.alpha_bar == pytest.approx(1 / (1 + PLASTIC_ROOT), abs=1e-10)
    assert r.entropy_log2 == pytest.approx(math.log2(PLASTIC_ROOT), abs=1e-10)
    assert r.converged and r.k == 2


@pytest.mark.parametrize("k", [2, 3, 4])
def test_compute_bar_full_shift(k):
    r = compute_bar(*pair("(0)", f"({k - 1})"))
    assert (r.alpha_bar, r.beta_bar) == (0.0, float(k))
    assert r.entropy_log2 == pytest.approx(math.log2(k))


def test_compute_bar_golden():
    r = compute_bar(*pair("(0)", "(10)"))
    assert r.alpha_bar == 0.0
    assert r.beta_bar == pytest.approx(GOLDEN_ROOT, abs=1e-11)


def test_special_cases():
    r = compute_bar(*pair("(0)", "2(0)"))
    assert (r.alpha_bar, r.beta_bar, r.flags) == (0.0, 2.0, ("sigma_v_zero",))
    r = compute_bar(*pair("0(1)", "(1)"))
    assert (r.alpha_bar, r.beta_bar, r.flags) == (1.0, 2.0, ("sigma_u_top",))
    r = compute_bar(*pair("(01)", "(10)"))
    assert r.entropy_log2 == 0.0 and "k2_reversed" in r.flags and r.alpha_bar is None
    r = compute_bar(*pair("(0011)", "(1100)"))
    assert r.entropy_log2 == 0.0 and "zero_entropy" in r.flags


def test_inadmissible_input_raises():
    with pytest.raises(ConditionViolation):
        compute_bar(*pair("(10)", "(110)"))


def test_report_json_schema():
    data = json.loads(compute_bar(*pair("(0)", "(10)")).to_json())
    assert set(data) >= {"alpha_bar", "beta_bar", "gamma_bar", "entropy_log2", "k", "flags", "trace"}
    assert set(data["trace"][0]) == {"n", "alpha", "beta", "gamma", "residual"}


def test_verify_uniqueness_examples():
    u, v = pair("(01)", "(110)")
    r = compute_bar(u, v)
    assert verify_uniqueness(u, v, r)
    full = pair("(0)", "(1)")
    assert verify_uniqueness(*full, compute_bar(*full))
    bumped = type(r)(r.alpha_bar, r.beta_bar + 0.01, r.gamma_bar, r.entropy_log2, r.k)
    assert not verify_uniqueness(u, v, bumped)


def test_accelerated_star_pair_reaches_plastic():
    r = compute_bar(*pair("0(011)", "11(10)"))
    assert "accelerated" in r.flags
    assert r.beta_bar == pytest.approx(PLASTIC_ROOT, abs=1e-10)


@pytest.fixture(scope="module")
def reports():
    return {(u, v): compute_bar(u, v) for u, v in periodic_pairs(2, 4) + periodic_pairs(3, 3)}


def test_trace_is_monotone(reports):
    for r in reports.values():
        for a, b in zip(r.trace, r.trace[1:]):
            assert b.alpha >= a.alpha - TOL
            assert b.beta <= a.beta + TOL


def test_fixed_point_residuals(reports):
    for (u, v), r in reports.items():
        if r.alpha_bar is None or r.beta_bar <= 1 + 1e-6:
            continue
        assert kneading_gap(u, v, r.alpha_bar, r.beta_bar) <= 4 * TOL


def test_report_invariants(reports):
    for r in reports.values():
        assert 1.0 <= r.beta_bar <= r.k
        if r.gamma_bar is not None:
            assert -TOL <= r.gamma_bar <= 1 + TOL
            assert r.gamma_bar == pytest.approx(r.alpha_bar + r.beta_bar - r.k + 1, abs=1e-15)
        if "beta_bar_is_one" in r.flags or "k2_reversed" in r.flags:
            assert r.entropy_log2 == 0.0
        else:
            assert r.entropy_log2 == pytest.approx(math.log2(r.beta_bar), abs=1e-15)


def test_entropy_equals_graph_oracle(reports):
    for (u, v), r in reports.items():
        assert abs(graph_entropy(build_graph(u, v)) - r.entropy_log2) <= 1e-9


def test_monotone_in_the_data(reports):
    # If u <= u' and v' <= v then beta' <= beta and alpha' >= alpha.
    checked = 0
    items = list(reports.items())
    for (u, v), r in items:
        for (u2, v2), r2 in items:
            if (u, v) == (u2, v2) or u.k != u2.k or r.alpha_bar is None or r2.alpha_bar is None:
                continue
            if compare(u, u2) <= 0 and compare(v2, v) <= 0:
                assert r2.beta_bar <= r.beta_bar + TOL
                assert r2.alpha_bar >= r.alpha_bar - TOL
                checked += 1
    assert checked >= 20
