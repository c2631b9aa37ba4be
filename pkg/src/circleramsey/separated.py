"""(n, eps)-separated sets: certification, greedy and exact maximisation, packing bounds.

Separation is strict: a pair is separated when some iterate index ``i < n``
has ``d(f^i x, f^i y) > eps``.  The recorded index is always the least one.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .circle import as_fraction, circle_dist, measure, reduce
from .dynamics import PLCircleMap, bowen_ball, iterate

log = logging.getLogger(__name__)

__all__ = [
    "GrowthBoundWarning",
    "UnsupportedParameters",
    "SeparationGraph",
    "SeparatedSetReport",
    "least_sep_index",
    "build_separation_graph",
    "is_separated",
    "greedy_max_separated",
    "max_separated_exact",
    "packing_upper_bound",
    "grid",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_NODE_BUDGET = 10**7
THIRD = Fraction(1, 3)
_INT64_SAFE = 1 << 61


class GrowthBoundWarning(UserWarning):
    """A certified (n, eps)-separated set with eps >= 1/3 has more than 3^n points."""


class UnsupportedParameters(ValueError):
    pass


def grid(denominator: int) -> list[Fraction]:
    """The candidate grid ``{i / D : 0 <= i < D}``."""
    if denominator < 1:
        raise ValueError("grid denominator must be positive")
    return [Fraction(i, denominator) for i in range(denominator)]


@dataclass(frozen=True)
class SeparatedSetReport:
    points: tuple[Fraction, ...]
    n: int
    eps: Fraction
    certified: bool
    method: str  # greedy | exact | external
    witnesses: tuple[tuple[int, int, int, Fraction], ...] | None = None
    maximal: bool | None = None
    # summaries that stay available when the full witness table is skipped
    index_counts: tuple[int, ...] = ()
    witness_range: tuple[Fraction, Fraction] | None = None
    first_failure: tuple[int, int] | None = None

    def __post_init__(self):
        if self.certified and self.eps >= THIRD and self.size > 3**self.n:
            msg = (
                f"certified ({self.n}, {self.eps})-separated set of size {self.size} "
                f"exceeds 3^{self.n} = {3**self.n}"
            )
            log.error(msg)
            warnings.warn(msg, GrowthBoundWarning, stacklevel=3)

    @property
    def size(self) -> int:
        return len(self.points)


def least_sep_index(f: PLCircleMap, x, y, n: int, eps) -> int | None:
    x, y, eps = reduce(x), reduce(y), as_fraction(eps)
    if x == y:
        raise ValueError("least_sep_index needs two distinct points")
    ox, oy = iterate(f, x, n), iterate(f, y, n)
    for i, (a, b) in enumerate(zip(ox.points, oy.points)):
        if circle_dist(a, b) > eps:
            return i
    return None


def _check_distinct(points):
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise distinct")


def _orbits(f, points, n):
    return [iterate(f, x, n).points for x in points]


def _integer_orbits(orbits, n, eps):
    """Encode orbits on a common denominator, or None when int64 would overflow."""
    if not orbits:
        return None
    D = 1
    for orb in orbits:
        for q in orb:
            D = math.lcm(D, q.denominator)
            if D > _INT64_SAFE:
                return None
    if D * max(eps.numerator, eps.denominator) >= _INT64_SAFE:
        return None
    arr = np.empty((n, len(orbits)), dtype=np.int64)
    for j, orb in enumerate(orbits):
        for s, q in enumerate(orb):
            arr[s, j] = q.numerator * (D // q.denominator)
    return arr, D


@dataclass(frozen=True)
class SeparationGraph:
    """Pair table over a finite point set.

    ``least[i, j]`` is the least separating index of vertices i and j, or -1
    when the pair is not (n, eps)-separated.
    """

    vertices: tuple[Fraction, ...]
    n: int
    eps: Fraction
    least: np.ndarray = field(repr=False)
    orbits: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    def __len__(self):
        return len(self.vertices)

    def edge(self, i: int, j: int) -> tuple[int, Fraction] | None:
        """``(least_index, witness_dist)`` for a separated pair, else None."""
        s = int(self.least[i, j])
        if s < 0:
            return None
        return s, circle_dist(self.orbits[i][s], self.orbits[j][s])


def _least_matrix(orbits, n, eps):
    enc = _integer_orbits(orbits, n, eps)
    if enc is not None:
        arr, D = enc
        return _kernels.least_index_matrix(arr, D, eps.numerator, eps.denominator)
    N = len(orbits)
    least = np.full((N, N), -1, dtype=np.int16)
    for a in range(N):
        for b in range(a + 1, N):
            for s in range(n):
                if circle_dist(orbits[a][s], orbits[b][s]) > eps:
                    least[a, b] = least[b, a] = s
                    break
    return least


def build_separation_graph(f: PLCircleMap, points: Sequence, n: int, eps) -> SeparationGraph:
    if n < 1:
        raise ValueError("n must be positive")
    eps = as_fraction(eps)
    pts = tuple(reduce(x) for x in points)
    _check_distinct(pts)
    orbits = tuple(_orbits(f, pts, n))
    return SeparationGraph(pts, n, eps, _least_matrix(orbits, n, eps), orbits)


def _report_from_graph(graph, idx, method, maximal=None):
    sub = graph.least[np.ix_(idx, idx)] if idx else np.zeros((0, 0), dtype=np.int16)
    iu = np.triu_indices(len(idx), 1)
    vals = sub[iu]
    certified = bool((vals >= 0).all())
    witnesses = []
    for a, b in zip(*iu):
        i, j = idx[a], idx[b]
        e = graph.edge(i, j)
        if e is not None:
            witnesses.append((int(a), int(b), e[0], e[1]))
    failure = None
    if not certified:
        k = int(np.argmax(vals < 0))
        failure = (int(iu[0][k]), int(iu[1][k]))
    counts = tuple(int((vals == s).sum()) for s in range(graph.n))
    dists = [w[3] for w in witnesses]
    return SeparatedSetReport(
        points=tuple(graph.vertices[i] for i in idx),
        n=graph.n,
        eps=graph.eps,
        certified=certified,
        method=method,
        witnesses=tuple(witnesses),
        maximal=maximal,
        index_counts=counts,
        witness_range=(min(dists), max(dists)) if dists else None,
        first_failure=failure,
    )


def is_separated(
    f: PLCircleMap, points: Sequence, n: int, eps, *, witnesses: bool = True
) -> SeparatedSetReport:
    """Certify (or refute) that ``points`` is (n, eps)-separated.

    With ``witnesses=False`` the pair table is scanned but not stored; the
    report then carries only the index histogram, the witness distance range
    and the first failing pair.  Use this for sets of many thousands of points.
    """
    eps = as_fraction(eps)
    pts = tuple(reduce(x) for x in points)
    _check_distinct(pts)
    if witnesses:
        graph = build_separation_graph(f, pts, n, eps)
        return _report_from_graph(graph, list(range(len(pts))), "external")

    orbits = _orbits(f, pts, n)
    enc = _integer_orbits(orbits, n, eps)
    if enc is None:
        # exact fallback for large denominators
        graph = SeparationGraph(pts, n, eps, _least_matrix(orbits, n, eps), tuple(orbits))
        rep = _report_from_graph(graph, list(range(len(pts))), "external")
        return SeparatedSetReport(
            rep.points, n, eps, rep.certified, "external", None, None,
            rep.index_counts, rep.witness_range, rep.first_failure,
        )
    arr, D = enc
    unsep, a, b, wmin, wmax, hist = _kernels.separation_summary(
        arr, D, eps.numerator, eps.denominator
    )
    wrange = (Fraction(int(wmin), D), Fraction(int(wmax), D)) if wmax >= 0 else None
    return SeparatedSetReport(
        points=pts,
        n=n,
        eps=eps,
        certified=unsep == 0,
        method="external",
        witnesses=None,
        index_counts=tuple(int(h) for h in hist),
        witness_range=wrange,
        first_failure=None if unsep == 0 else (int(a), int(b)),
    )


def greedy_max_separated(f: PLCircleMap, candidates: Sequence, n: int, eps) -> SeparatedSetReport:
    """Keep each candidate, in order, iff it is separated from everything kept so far."""
    eps = as_fraction(eps)
    pts = [reduce(x) for x in candidates]
    _check_distinct(pts)
    orbits = _orbits(f, pts, n)
    kept: list[int] = []
    for j, oj in enumerate(orbits):
        if all(any(circle_dist(a, b) > eps for a, b in zip(orbits[k], oj)) for k in kept):
            kept.append(j)
    graph = SeparationGraph(
        tuple(pts[k] for k in kept),
        n,
        eps,
        _least_matrix([orbits[k] for k in kept], n, eps),
        tuple(orbits[k] for k in kept),
    )
    return _report_from_graph(graph, list(range(len(kept))), "greedy")


class _BudgetExceeded(Exception):
    pass


def _color_bound(P: int, adj: list[int]) -> list[tuple[int, int]]:
    """Greedy colouring of the vertex set P; returns (vertex, colour) by increasing colour."""
    order = []
    color = 0
    while P:
        color += 1
        Q = P
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            order.append((v, color))
            P &= ~low
            Q &= ~low & ~adj[v]
    return order


def max_separated_exact(graph: SeparationGraph, node_budget: int = DEFAULT_NODE_BUDGET) -> SeparatedSetReport:
    """Maximum clique of the separation relation by colour-bounded branch and bound.

    Among maximum cliques the lexicographically smallest sorted index set is
    returned.  If the node budget runs out the best clique found so far is
    reported with ``maximal=False``.
    """
    N = len(graph)
    if N == 0:
        return _report_from_graph(graph, [], "exact", maximal=True)
    sep = graph.least >= 0
    adj = [0] * N
    for i in range(N):
        for j in np.flatnonzero(sep[i]):
            adj[i] |= 1 << int(j)

    nodes = 0
    best: list[int] = [0]
    R: list[int] = []

    def tick():
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded

    def expand(P: int):
        tick()
        for v, c in reversed(_color_bound(P, adj)):
            if len(R) + c <= len(best):
                return
            R.append(v)
            newP = P & adj[v]
            if newP:
                expand(newP)
            elif len(R) > len(best):
                best[:] = R
            R.pop()
            P &= ~(1 << v)

    def lex_first(P: int, target: int) -> list[int] | None:
        # DFS in increasing vertex order; the first hit is lexicographically least
        tick()
        if len(R) == target:
            return list(R)
        while P:
            if len(R) + P.bit_count() < target:
                return None
            if len(R) + max((c for _, c in _color_bound(P, adj)), default=0) < target:
                return None
            low = P & -P
            v = low.bit_length() - 1
            P &= ~low
            R.append(v)
            hit = lex_first(P & adj[v], target)
            R.pop()
            if hit is not None:
                return hit
        return None

    everyone = (1 << N) - 1
    try:
        expand(everyone)
        R.clear()
        clique = lex_first(everyone, len(best))
        assert clique is not None
        maximal = True
    except _BudgetExceeded:
        log.warning("clique search stopped after %d nodes; result is not proven maximum", node_budget)
        clique = sorted(best)
        maximal = False
    return _report_from_graph(graph, sorted(clique), "exact", maximal=maximal)


def _six_power(p) -> int | None:
    if p is None or p < 6:
        return None
    ell = 0
    while p % 6 == 0:
        p //= 6
        ell += 1
    return ell if p == 1 else None


def packing_upper_bound(f: PLCircleMap, n: int, eps) -> int:
    """Upper bound on an (n, eps)-separated set for ``f = x -> 6^l x`` and eps = 1/3.

    Disjoint Bowen balls of radius eps/2 all have the same exact measure, so
    at most ``floor(1 / measure)`` of them fit.
    """
    eps = as_fraction(eps)
    if _six_power(f.times_p) is None:
        raise UnsupportedParameters(f"packing bound needs a map x -> 6^l x, got {f.to_json()}")
    if eps != THIRD:
        raise UnsupportedParameters(f"packing bound needs eps = 1/3, got {eps}")
    mu = measure(bowen_ball(f, 0, n, eps / 2))
    return math.floor(1 / mu)
