"""Follower-set graphs of ``Sigma(u, v)`` and their entropy.

A vertex ``[p, q]`` records the lengths of the longest suffixes of the word
read so far that are prefixes of ``u`` and of ``v``.  The follower set of
that word depends only on the tails ``(s^p u, s^q v)``, so collapsing on
those exact tails yields a finite graph for eventually periodic data.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConditionViolation
from .strings import EPString, Word, check_conditions, common_alphabet, format_word

log = logging.getLogger(__name__)


def _is_prefix(w: Sequence[int], x: EPString) -> bool:
    return all(x[i] == s for i, s in enumerate(w))


def longest_u_suffix(w: Sequence[int], u: EPString) -> Word:
    """Longest suffix of ``w`` that is a prefix of ``u``."""
    w = tuple(w)
    for start in range(len(w) + 1):
        if _is_prefix(w[start:], u):
            return w[start:]
    return ()


longest_v_suffix = longest_u_suffix


def in_block_set(w: Sequence[int], x: EPString) -> bool:
    """Whether ``w`` is a nonempty prefix of ``x`` or one foreign letter then a prefix of ``x``."""
    if not w:
        return False
    return _is_prefix(w, x) or (w[0] != x[0] and _is_prefix(w[1:], x))


@dataclass(frozen=True)
class Parsing:
    factors: tuple[Word, ...]

    def word(self) -> Word:
        return tuple(s for f in self.factors for s in f)


def _parse(w: Sequence[int], x: EPString) -> Parsing:
    w = tuple(w)
    factors = []
    i = 0
    while i < len(w):
        n = max(n for n in range(1, len(w) - i + 1) if in_block_set(w[i:i + n], x) or n == 1)
        factors.append(w[i:i + n])
        i += n
    return Parsing(tuple(factors))


def u_parsing(w: Sequence[int], u: EPString) -> Parsing:
    """Greedy factorisation of ``w`` into maximal blocks relative to ``u``."""
    return _parse(w, u)


def v_parsing(w: Sequence[int], v: EPString) -> Parsing:
    return _parse(w, v)


@dataclass(frozen=True)
class FollowerVertex:
    p: int
    q: int
    class_id: int

    @property
    def level(self) -> int:
        return max(self.p, self.q)

    @property
    def branch(self) -> str:
        if self.p == self.q:
            return "root"
        # p tracks the lower string u, q the upper string v.
        return "lower" if self.p > self.q else "upper"

    @property
    def label(self) -> str:
        return f"[{self.p},{self.q}]"


@dataclass(frozen=True)
class FollowerGraph:
    """Labeled graph over follower-set vertices; vertex 0 is the root."""

    u: EPString
    v: EPString
    vertices: tuple[FollowerVertex, ...]
    edges: tuple[tuple[int, int, int], ...]
    truncation_level: Optional[int] = None

    root = 0

    @property
    def k(self) -> int:
        return self.v[0] + 1

    @property
    def mode(self) -> str:
        return "collapse" if self.truncation_level is None else "truncate"

    def out_edges(self, i: int) -> list[tuple[int, int]]:
        return [(label, dst) for src, label, dst in self.edges if src == i]

    def successor(self, i: int, label: int) -> Optional[int]:
        for lab, dst in self.out_edges(i):
            if lab == label:
                return dst
        return None

    def follow(self, word: Iterable[int], start: int = 0) -> Optional[int]:
        """Vertex reached by reading ``word`` from ``start``; None if it leaves the graph."""
        i = start
        for s in word:
            i = self.successor(i, s)
            if i is None:
                return None
        return i

    def adjacency(self) -> np.ndarray:
        n = len(self.vertices)
        a = np.zeros((n, n))
        for src, _, dst in self.edges:
            a[src, dst] += 1
        return a

    def is_right_resolving(self) -> bool:
        seen = set()
        for src, label, _ in self.edges:
            if (src, label) in seen:
                return False
            seen.add((src, label))
        return True

    def reachable(self, start: int = 0) -> list[int]:
        seen = {start}
        todo = deque([start])
        while todo:
            i = todo.popleft()
            for _, j in self.out_edges(i):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return sorted(seen)

    def census(self) -> dict:
        branches = [v.branch for v in self.vertices]
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "upper": branches.count("upper"),
            "lower": branches.count("lower"),
        }

    def to_dot(self) -> str:
        return "\n".join(_dot_lines(self)) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dict(self) -> dict:
        return {
            "u": str(self.u),
            "v": str(self.v),
            "k": self.k,
            "mode": self.mode,
            "truncation_level": self.truncation_level,
            "root": self.root,
            "vertices": [
                {"id": i, "p": v.p, "q": v.q, "class_id": v.class_id, "level": v.level}
                for i, v in enumerate(self.vertices)
            ],
            "edges": [{"from": s, "label": l, "to": d} for s, l, d in self.edges],
            "adjacency": self.adjacency().astype(int).tolist(),
            "census": self.census(),
        }


def _dot_lines(g: FollowerGraph):
    yield "digraph follower {"
    yield "  rankdir=LR;"
    for i, v in enumerate(g.vertices):
        shape = "doublecircle" if i == g.root else "circle"
        yield f'  n{i} [label="{v.label} #{v.class_id}", shape={shape}];'
    for src, label, dst in g.edges:
        yield f'  n{src} -> n{dst} [label="{format_word((label,), g.k)}"];'
    yield "}"


def _transitions(uu: EPString, vv: EPString):
    """Out-edges of the vertex with tails ``(uu, vv)`` as ``(label, dp, dq)``.

    ``dp``/``dq`` is +1 to extend the matched prefix or ``None`` to reset it.
    """
    a, b = uu[0], vv[0]
    if a == b:
        return [(a, 1, 1)]
    if a > b:
        raise ConditionViolation("empty follower set: lower tail exceeds upper tail")
    edges = [(a, 1, None), (b, None, 1)]
    edges += [(j, None, None) for j in range(a + 1, b)]
    return sorted(edges)


def build_graph(u: EPString, v: EPString, mode: str = "collapse", K: Optional[int] = None) -> FollowerGraph:
    """Build the follower-set graph.

    ``mode="collapse"`` merges vertices with equal tail pairs and is finite
    for eventually periodic input.  ``mode="truncate"`` keeps every
    ``[p, q]`` with ``max(p, q) <= K`` unmerged.
    """
    u, v = common_alphabet(u, v)
    report = check_conditions(u, v)
    if not report.admissible:
        raise ConditionViolation("; ".join(report.violations) or "inadmissible pair", report)
    if mode == "truncate":
        if K is None or K < 0:
            raise ValueError("truncate mode needs a level K >= 0")
        return _build(u, v, K)
    if mode != "collapse":
        raise ValueError(f"unknown mode {mode!r}")
    return _build(u, v, None)


def _build(u: EPString, v: EPString, K: Optional[int]) -> FollowerGraph:
    index: dict = {}
    reps: list[tuple[int, int]] = []
    edges = []

    def key(p, q):
        return (u.shift(p), v.shift(q)) if K is None else (p, q)

    def vertex(p, q):
        kk = key(p, q)
        if kk not in index:
            index[kk] = len(reps)
            reps.append((p, q))
            todo.append(index[kk])
        return index[kk]

    todo: deque = deque()
    vertex(0, 0)
    while todo:
        i = todo.popleft()
        p, q = reps[i]
        for label, dp, dq in _transitions(u.shift(p), v.shift(q)):
            np_, nq = (p + 1 if dp else 0), (q + 1 if dq else 0)
            if K is not None and max(np_, nq) > K:
                continue
            edges.append((i, label, vertex(np_, nq)))
    vertices = tuple(FollowerVertex(p, q, i) for i, (p, q) in enumerate(reps))
    return FollowerGraph(u, v, vertices, tuple(sorted(edges)), K)


def perron_root(a: np.ndarray, tol: float = 1e-13, max_iter: int = 2_000_000) -> tuple[float, float]:
    """Two-sided Collatz-Wielandt bracket on the spectral radius of an irreducible matrix.

    Iterates on ``a + I`` (primitive, same Perron vector) until the bracket
    is narrower than ``tol``.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    b = a + np.eye(n)
    x = np.ones(n)
    lo, hi = 0.0, math.inf
    for _ in range(max_iter):
        y = b @ x
        ratios = y / x
        lo, hi = max(lo, ratios.min() - 1), min(hi, ratios.max() - 1)
        if hi - lo < tol:
            break
        x = y / y.max()
    else:
        log.warning("Perron bracket [%g, %g] did not reach tol %g", lo, hi, tol)
    return lo, hi


def strong_components(a: np.ndarray) -> list[list[int]]:
    """Strongly connected components that carry at least one cycle."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    _, labels = connected_components(csr_matrix(a), directed=True, connection="strong")
    comps = []
    for c in range(labels.max() + 1 if n else 0):
        idx = [i for i in range(n) if labels[i] == c]
        if len(idx) > 1 or a[idx[0], idx[0]] > 0:
            comps.append(idx)
    return comps


def matrix_entropy(a: np.ndarray, tol: float = 1e-12) -> float:
    """``log2`` of the spectral radius, taken over cyclic components; 0 if acyclic."""
    best = 0.0
    for idx in strong_components(a):
        lo, hi = perron_root(a[np.ix_(idx, idx)], tol)
        best = max(best, math.log2(max(0.5 * (lo + hi), 1.0)))
    return best


def graph_entropy(g: FollowerGraph, tol: float = 1e-12) -> float:
    """Entropy of the part of ``g`` reachable from the root."""
    idx = g.reachable(g.root)
    return matrix_entropy(g.adjacency()[np.ix_(idx, idx)], tol)


def has_zero_entropy(g: FollowerGraph) -> bool:
    """Exact test: every cyclic component reachable from the root is a single cycle."""
    idx = g.reachable(g.root)
    a = g.adjacency()[np.ix_(idx, idx)]
    for comp in strong_components(a):
        if a[np.ix_(comp, comp)].sum() > len(comp):
            return False
    return True


def component_entropy(g: FollowerGraph, vertex: int, tol: float = 1e-12) -> float:
    """Entropy of the strongly connected component containing ``vertex``."""
    a = g.adjacency()
    for idx in strong_components(a):
        if vertex in idx:
            return matrix_entropy(a[np.ix_(idx, idx)], tol)
    return 0.0


def two_cycle_entropy(p: int, q: int, tol: float = 1e-15) -> float:
    """``log2`` of the largest root of ``x**-p + x**-q = 1``."""
    if p < 1 or q < 1:
        raise ValueError("cycle lengths must be positive")
    lo, hi = 1.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid ** -p + mid ** -q > 1:
            lo = mid
        else:
            hi = mid
    return math.log2(0.5 * (lo + hi))


def word_count(g: FollowerGraph, n: int) -> int:
    """Exact number of length-``n`` paths starting at the root."""
    counts = {g.root: 1}
    out = {}
    for src, _, dst in g.edges:
        out.setdefault(src, []).append(dst)
    for _ in range(n):
        nxt: dict = {}
        for i, c in counts.items():
            for j in out.get(i, ()):
                nxt[j] = nxt.get(j, 0) + c
        counts = nxt
    return sum(counts.values())
