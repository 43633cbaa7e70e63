import itertools

import pytest
from hypothesis import given, settings, strategies as st

from shift_entropy.errors import AlphabetMismatch, EmptyPeriod, ParseError
from shift_entropy.strings import (
    EPString,
    canonical_parts,
    check_conditions,
    compare,
    drop_first,
    drop_last,
    format_string,
    horizon,
    parse_string,
    shift,
    sup_shift,
)

P = parse_string


def words(k, min_size=0, max_size=4):
    return st.lists(st.integers(0, k - 1), min_size=min_size, max_size=max_size).map(tuple)


def ep_strings(k=3, max_pre=3, max_per=4):
    return st.builds(lambda pre, per: EPString(pre, per, k), words(k, 0, max_pre), words(k, 1, max_per))


@pytest.mark.parametrize("w, expected", [((0, 1, 1, 0), (0, 1, 1)), ((0,), ()), ((1, 1, 0), (1, 1))])
def test_drop_last(w, expected):
    assert drop_last(w) == expected


@pytest.mark.parametrize("w, expected", [((0, 1, 1, 0), (1, 1, 0)), ((0,), ()), ((0, 1), (1,))])
def test_drop_first(w, expected):
    assert drop_first(w) == expected


def test_drop_on_empty_word_raises():
    with pytest.raises(Exception):
        drop_last(())


@pytest.mark.parametrize(
    "pre, per, want",
    [
        ((), (0, 1, 0, 1), ((), (0, 1))),
        # 01(10) spells 011010..., already canonical.
        ((0, 1), (1, 0), ((0, 1), (1, 0))),
        ((1, 0), (1, 0), ((), (1, 0))),
        ((2,), (0,), ((2,), (0,))),
    ],
)
def test_canonical_parts(pre, per, want):
    assert canonical_parts(pre, per) == want


def test_empty_period_rejected():
    with pytest.raises(EmptyPeriod):
        EPString((0,), ())


def test_shift_examples():
    assert shift(P("(01)"), 1) == P("(10)")
    assert shift(P("001(10)"), 3) == P("(10)")
    assert shift(P("001(10)"), 4) == P("(01)")
    assert shift(P("(00110111)"), 8) == P("(00110111)")


def test_compare_examples():
    assert compare(P("(01)"), P("(110)")) == -1
    assert compare(P("(10)"), P("(100110)")) == 1
    x = P("2(01)")
    assert compare(x, x) == 0


def test_compare_with_signs_flips_after_decreasing_symbol():
    # After a shared symbol 1 with negative sign the order reverses.
    x, y = EPString((1, 0), (0,), 2), EPString((1, 1), (0,), 2)
    assert compare(x, y) == -1
    assert compare(x, y, signs=(1, -1)) == 1


def test_compare_rejects_mixed_alphabets():
    with pytest.raises(AlphabetMismatch):
        compare(EPString((), (0,), 2), EPString((), (0,), 3))


def test_sup_shift_examples():
    assert sup_shift(P("(00110111)")) == P("(11100110)")
    assert sup_shift(P("(0)")) == P("(0)")
    assert sup_shift(P("(10)")) == P("(10)")


def test_horizon_is_preperiod_plus_lcm():
    assert horizon(P("02(001)"), P("(10)")) == 2 + 6


def test_check_conditions_examples():
    assert check_conditions(P("(01)"), P("(110)")).strict
    full = check_conditions(P("(0)"), P("(1)"))
    assert full.weak and full.admissible
    bad = check_conditions(P("(01)"), P("(10)"))
    assert bad.weak and not bad.strict
    assert "s^1v = u" in bad.violations
    assert not check_conditions(P("(10)"), P("(110)")).admissible


@pytest.mark.parametrize("text", ["(01)", "2(0)", "0(011)", "1,10(3,0)"])
def test_parse_format_round_trip(text):
    x = P(text)
    assert P(format_string(x), x.k) == x


def test_parse_errors():
    with pytest.raises(ParseError):
        P("01")
    with pytest.raises(ParseError):
        P("(0a)")


def test_large_alphabet_uses_commas():
    x = P("(10,0)")
    assert x.k == 11
    assert format_string(x) == "(10,0)"


@settings(max_examples=1000, deadline=None)
@given(ep_strings(), ep_strings(), ep_strings())
def test_compare_is_total_order(x, y, z):
    for signs in ((1, 1, 1), (1, -1, 1)):
        c = compare(x, y, signs)
        assert compare(y, x, signs) == -c
        assert (c == 0) == (x == y)
        if c <= 0 and compare(y, z, signs) <= 0:
            assert compare(x, z, signs) <= 0


@settings(max_examples=300, deadline=None)
@given(ep_strings(), st.integers(0, 8), st.integers(0, 8))
def test_shift_composes(x, m, n):
    assert shift(x, m + n) == shift(shift(x, m), n)


@settings(max_examples=300, deadline=None)
@given(words(3, 0, 4), words(3, 1, 4), st.integers(0, 4))
def test_canonicalize_idempotent_and_value_preserving(pre, per, unroll):
    x = EPString(pre, per, 3)
    assert EPString(x.pre, x.per, 3) == x
    # Unrolling part of the period changes the representation but not the string.
    tail = tuple(per[i % len(per)] for i in range(unroll))
    rot = per[unroll % len(per):] + per[:unroll % len(per)]
    y = EPString(pre + tail, rot + rot, 3)
    assert y == x
    n = len(pre) + len(tail) + 2 * len(per)
    assert y.prefix(n) == tuple(
        (pre[i] if i < len(pre) else per[(i - len(pre)) % len(per)]) for i in range(n)
    )


@settings(max_examples=300, deadline=None)
@given(ep_strings(), ep_strings())
def test_compare_matches_brute_force_prefixes(x, y):
    n = horizon(x, y) + 1
    a, b = x.prefix(n), y.prefix(n)
    assert compare(x, y) == (a > b) - (a < b)


@settings(max_examples=300, deadline=None)
@given(ep_strings())
def test_sup_shift_is_attained_and_maximal(x):
    s = sup_shift(x)
    assert any(shift(x, n) == s for n in range(x.n_shifts))
    assert all(compare(shift(x, j), s) <= 0 for j in range(3 * x.n_shifts))


def test_check_conditions_matches_brute_force_on_short_pairs():
    # Sandwich condition by comparing long prefixes of every shift.
    for u_per, v_per in itertools.product(
        [w for n in (1, 2, 3) for w in itertools.product((0, 1), repeat=n) if w[0] == 0],
        [w for n in (1, 2, 3) for w in itertools.product((0, 1), repeat=n) if w[0] == 1],
    ):
        u, v = EPString((), u_per, 2), EPString((), v_per, 2)
        n = 24
        pu, pv = u.prefix(n + 6), v.prefix(n + 6)
        ok = all(pu[:n] <= pu[i:i + n] <= pv[:n] for i in range(6)) and all(
            pu[:n] <= pv[i:i + n] <= pv[:n] for i in range(6)
        )
        assert check_conditions(u, v).weak == ok
