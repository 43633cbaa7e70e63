import itertools
from fractions import Fraction

import pytest

from shift_entropy.strings import EPString, check_conditions, common_alphabet, parse_string

# Admissible eventually periodic pairs used across the suite.
FULL_SHIFTS = [("(0)", f"({k - 1})") for k in range(2, 6)]
GOLDEN_PAIR = ("(0)", "(10)")
PLASTIC_PAIR = ("(01)", "(110)")
BASE_PAIRS = FULL_SHIFTS + [
    GOLDEN_PAIR,
    PLASTIC_PAIR,
    ("(001)", "(210)"),
    ("(01)", "(2)"),
    ("(0)", "(110)"),
    ("(001)", "(1)"),
    ("(011)", "(1)"),
    ("(01)", "(2101)"),
    ("(012)", "(3)"),
    ("(0011)", "(110)"),
    ("(01)", "(1110)"),
]
STAR_PAIRS = [
    ("0(011)", "11(10)"),
    ("00(021)", "21(100)"),
    ("00(2101)", "2102(01)"),
    ("00(101)", "1(1100)"),
    ("0(0111)", "111(10)"),
    ("(0)", "11(0)"),
    ("000(1)", "(1)"),
]
CORPUS = BASE_PAIRS + STAR_PAIRS


def pair(u_text, v_text):
    return common_alphabet(parse_string(u_text), parse_string(v_text))


def poly_root(coeffs, lo, hi, bits=80):
    """Root of an integer polynomial (constant term first) by exact bisection."""

    def f(x):
        return sum(c * x**i for i, c in enumerate(coeffs))

    lo, hi = Fraction(lo), Fraction(hi)
    s_lo = f(lo) > 0
    for _ in range(bits):
        mid = (lo + hi) / 2
        if (f(mid) > 0) == s_lo:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


PLASTIC_ROOT = poly_root([-1, -1, 0, 1], 1, 2)
GOLDEN_ROOT = poly_root([-1, -1, 1], 1, 2)


def brute_count(u: EPString, v: EPString, n: int) -> int:
    """Words whose every suffix lies between the matching prefixes of u and v."""
    k = v[0] + 1
    return sum(
        all(u.prefix(n - i) <= w[i:] <= v.prefix(n - i) for i in range(n))
        for w in itertools.product(range(k), repeat=n)
    )


def periodic_pairs(k, max_len):
    """All admissible purely periodic pairs over k symbols with short periods."""
    words = [w for n in range(1, max_len + 1) for w in itertools.product(range(k), repeat=n)]
    us = {EPString((), w, k) for w in words if w[0] == 0}
    vs = {EPString((), w, k) for w in words if w[0] == k - 1}
    out = []
    for u in sorted(us):
        for v in sorted(vs):
            if check_conditions(u, v).admissible:
                out.append((u, v))
    return out


# Acceptance reporting: tests marked ``criterion`` get one summary line each.
_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    key = mark.args[0]
    prev = _RESULTS.get(key, (mark.args[1], True))
    ok = prev[1] and not rep.failed
    _RESULTS[key] = (mark.args[1], ok)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS):
        title, ok = _RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}")
