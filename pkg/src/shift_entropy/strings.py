"""Finite words and eventually periodic strings over ``{0, ..., k-1}``.

Words are plain tuples of ints.  Infinite strings are restricted to the
eventually periodic ones and represented by :class:`EPString`, which is
always kept in canonical form so that equality of values is equality of
infinite strings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Optional, Sequence

from .errors import AlphabetMismatch, EmptyPeriod, EmptyWord, ParseError

Word = tuple


def drop_last(w: Sequence[int]) -> Word:
    """Return ``w`` without its last symbol."""
    if len(w) == 0:
        raise EmptyWord("cannot drop a symbol from the empty word")
    return tuple(w[:-1])


def drop_first(w: Sequence[int]) -> Word:
    """Return ``w`` without its first symbol."""
    if len(w) == 0:
        raise EmptyWord("cannot drop a symbol from the empty word")
    return tuple(w[1:])


def _minimal_period(per: Word) -> Word:
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per[:d] * (n // d) == per:
            return per[:d]
    return per


def canonical_parts(pre: Iterable[int], per: Iterable[int]) -> tuple[Word, Word]:
    """Canonical ``(preperiod, period)`` for the string ``pre per per ...``."""
    pre, per = tuple(pre), tuple(per)
    if not per:
        raise EmptyPeriod("period word must be nonempty")
    per = _minimal_period(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


@total_ordering
@dataclass(frozen=True)
class EPString:
    """Eventually periodic string ``pre (per)^inf`` in canonical form.

    Parameters
    ----------
    pre : sequence of int
        Preperiod word, possibly empty.
    per : sequence of int
        Period word, nonempty.
    k : int, optional
        Alphabet size.  Defaults to one more than the largest symbol.

    The natural ordering (``<``) is lexicographic; use :func:`compare`
    for the signed order.
    """

    pre: Word
    per: Word
    k: int = field(default=0)

    def __post_init__(self):
        pre, per = canonical_parts(self.pre, self.per)
        symbols = pre + per
        if any(not isinstance(s, int) or s < 0 for s in symbols):
            raise ValueError("symbols must be non-negative integers")
        top = max(symbols) + 1
        k = self.k or max(top, 2)
        if top > k:
            raise AlphabetMismatch(f"symbol {top - 1} outside alphabet of size {k}")
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)
        object.__setattr__(self, "k", k)

    @classmethod
    def periodic(cls, per: Sequence[int], k: int = 0) -> "EPString":
        return cls((), tuple(per), k)

    @classmethod
    def parse(cls, text: str, k: int = 0) -> "EPString":
        return parse_string(text, k)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError("negative index into an infinite string")
        m = len(self.pre)
        if i < m:
            return self.pre[i]
        return self.per[(i - m) % len(self.per)]

    def prefix(self, n: int) -> Word:
        return tuple(self[i] for i in range(n))

    @property
    def is_periodic(self) -> bool:
        return not self.pre

    @property
    def n_shifts(self) -> int:
        """Number of distinct shifts of this string."""
        return len(self.pre) + len(self.per)

    def shift(self, n: int = 1) -> "EPString":
        return shift(self, n)

    def shifts(self) -> list["EPString"]:
        """All distinct shifts, in order ``n = 0, 1, ...``."""
        return [shift(self, n) for n in range(self.n_shifts)]

    def with_alphabet(self, k: int) -> "EPString":
        """Embed into the alphabet of size ``k`` by symbol identity."""
        return EPString(self.pre, self.per, k)

    def __lt__(self, other: "EPString") -> bool:
        return compare(self, other) < 0

    def __str__(self) -> str:
        return format_string(self)


def shift(x: EPString, n: int = 1) -> EPString:
    """Return ``sigma^n x`` exactly."""
    if n < 0:
        raise ValueError("shift amount must be non-negative")
    m = len(x.pre)
    if n <= m:
        return EPString(x.pre[n:], x.per, x.k)
    r = (n - m) % len(x.per)
    return EPString((), x.per[r:] + x.per[:r], x.k)


def _check_alphabet(x: EPString, y: EPString) -> None:
    if x.k != y.k:
        raise AlphabetMismatch(f"alphabets of size {x.k} and {y.k} mixed")


def horizon(x: EPString, y: EPString) -> int:
    """Position bound within which two different strings must disagree."""
    return max(len(x.pre), len(y.pre)) + math.lcm(len(x.per), len(y.per))


def compare(x: EPString, y: EPString, signs: Optional[Sequence[int]] = None) -> int:
    """Compare ``x`` and ``y`` in the signed order.

    Returns -1, 0 or 1.  ``signs[j]`` is +1 when branch ``j`` is increasing
    and -1 otherwise; ``None`` means all +1, i.e. lexicographic order.
    The comparison is exact.
    """
    _check_alphabet(x, y)
    sign = 1
    for i in range(horizon(x, y)):
        a, b = x[i], y[i]
        if a != b:
            return sign if a > b else -sign
        if signs is not None:
            sign *= signs[a]
    return 0


def sup_shift(u: EPString) -> EPString:
    """Lexicographic supremum of all shifts of ``u``."""
    return max(u.shifts())


def common_alphabet(*xs: EPString) -> tuple[EPString, ...]:
    """Embed all strings into the largest of their alphabets."""
    k = max(x.k for x in xs)
    return tuple(x.with_alphabet(k) for x in xs)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the admissibility checks on a pair ``(u, v)``.

    ``weak`` is the closed sandwich ``u <= s^n u <= v``, ``u <= s^n v <= v``.
    ``strict`` additionally asks ``s^n u < v`` and ``u < s^n v``.
    ``k2_ordered`` is ``s u <= s v`` and only meaningful for ``k == 2``.
    """

    k: int
    weak: bool
    strict: bool
    u_starts_zero: bool
    v_starts_top: bool
    k2_ordered: Optional[bool]
    violations: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return self.weak and self.u_starts_zero and self.v_starts_top


def check_conditions(u: EPString, v: EPString) -> ConditionReport:
    """Check the sandwich inequalities over all distinct shifts."""
    u, v = common_alphabet(u, v)
    k = v[0] + 1
    violations = []
    weak = strict = True
    for n, s in enumerate(u.shifts()):
        if compare(s, u) < 0:
            weak = strict = False
            violations.append(f"s^{n}u < u")
        c = compare(s, v)
        if c > 0:
            weak = strict = False
            violations.append(f"s^{n}u > v")
        elif c == 0:
            strict = False
            violations.append(f"s^{n}u = v")
    for n, s in enumerate(v.shifts()):
        if compare(s, v) > 0:
            weak = strict = False
            violations.append(f"s^{n}v > v")
        c = compare(s, u)
        if c < 0:
            weak = strict = False
            violations.append(f"s^{n}v < u")
        elif c == 0:
            strict = False
            violations.append(f"s^{n}v = u")
    u_zero = u[0] == 0
    if not u_zero:
        violations.append("u_0 != 0")
    if max(u.pre + u.per) >= k:
        violations.append("u uses symbols above v_0")
        weak = strict = False
    v_top = k >= 2
    if not v_top:
        violations.append("v_0 must be at least 1")
    k2 = compare(u.shift(), v.shift()) <= 0 if k == 2 else None
    return ConditionReport(k, weak, strict, u_zero, v_top, k2, tuple(violations))


_STRING_RE = re.compile(r"^\s*([0-9,\s]*)\(([0-9,\s]+)\)\s*$")


def _parse_word(text: str, commas: bool) -> Word:
    text = text.strip()
    if not text:
        return ()
    if commas:
        parts = [p.strip() for p in text.split(",")]
        if any(not p.isdigit() for p in parts):
            raise ParseError(f"bad symbol list {text!r}")
        return tuple(int(p) for p in parts)
    if not text.isdigit():
        raise ParseError(f"bad digit word {text!r}")
    return tuple(int(c) for c in text)


def parse_string(text: str, k: int = 0) -> EPString:
    """Parse ``PRE(PER)``; symbols are digits unless commas are present."""
    m = _STRING_RE.match(text)
    if m is None:
        raise ParseError(f"expected PRE(PER), got {text!r}")
    commas = "," in text
    pre = _parse_word(m.group(1).rstrip(","), commas)
    per = _parse_word(m.group(2), commas)
    if not per:
        raise EmptyPeriod("period word must be nonempty")
    return EPString(pre, per, k)


def format_word(w: Sequence[int], k: int) -> str:
    if k <= 10:
        return "".join(str(s) for s in w)
    return ",".join(str(s) for s in w)


def format_string(x: EPString) -> str:
    pre = format_word(x.pre, x.k)
    per = format_word(x.per, x.k)
    if x.k > 10 and pre:
        pre += ","
    return f"{pre}({per})"
