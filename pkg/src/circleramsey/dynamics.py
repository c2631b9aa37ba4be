"""Piecewise-linear circle maps, exact preimages, Bowen metric and Bowen balls."""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circle import (
    FULL,
    ArcUnion,
    arc_intersect,
    as_fraction,
    circle_dist,
    contains,
    from_intervals,
    open_ball,
    reduce,
)

__all__ = [
    "MapValidationError",
    "NonMonotoneBreakpoints",
    "NonIntegerDegree",
    "BadDomain",
    "PLCircleMap",
    "OrbitSegment",
    "make_times_p",
    "make_pl",
    "iterate",
    "preimage",
    "bowen_dist",
    "bowen_ball",
]


class MapValidationError(ValueError):
    pass


class NonMonotoneBreakpoints(MapValidationError):
    pass


class NonIntegerDegree(MapValidationError):
    pass


class BadDomain(MapValidationError):
    pass


@dataclass(frozen=True)
class PLCircleMap:
    """Circle map ``x -> F(x) mod 1`` for a piecewise-linear rational lift F.

    ``breakpoints`` are the nodes ``(t_i, F(t_i))`` with ``t_0 = 0`` and
    ``t_k = 1``; ``F(1) - F(0)`` is the (integer) degree.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        bps = self.breakpoints
        if len(bps) < 2:
            raise BadDomain("a lift needs at least two breakpoints")
        ts = [t for t, _ in bps]
        if ts[0] != 0 or ts[-1] != 1:
            raise BadDomain(f"breakpoints must start at t=0 and end at t=1, got {ts[0]}..{ts[-1]}")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise NonMonotoneBreakpoints("breakpoint abscissae must be strictly increasing")
        deg = bps[-1][1] - bps[0][1]
        if deg.denominator != 1:
            raise NonIntegerDegree(f"F(1) - F(0) = {deg} is not an integer")
        object.__setattr__(self, "_ts", ts)

    @property
    def degree(self) -> int:
        return int(self.breakpoints[-1][1] - self.breakpoints[0][1])

    @property
    def times_p(self) -> int | None:
        """``p`` if this is exactly the map ``x -> p x``, else None."""
        (t0, v0), *rest = self.breakpoints
        if len(rest) == 1 and v0 == 0 and rest[0][1].denominator == 1:
            return int(rest[0][1])
        return None

    def pieces(self):
        bps = self.breakpoints
        return zip(bps, bps[1:])

    def lift(self, x) -> Fraction:
        """F(x) for x in [0, 1]."""
        x = as_fraction(x)
        i = min(bisect_right(self._ts, x), len(self._ts) - 1)
        (t0, v0), (t1, v1) = self.breakpoints[i - 1], self.breakpoints[i]
        return v0 + (v1 - v0) * (x - t0) / (t1 - t0)

    def __call__(self, x) -> Fraction:
        p = self.times_p
        if p is not None:
            return reduce(p * as_fraction(x))
        return reduce(self.lift(reduce(x)))

    def to_json(self) -> dict:
        p = self.times_p
        if p is not None and p > 0:
            return {"type": "times_p", "p": p}
        return {"type": "pl", "lift": [[_fmt(t), _fmt(v)] for t, v in self.breakpoints]}


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def make_times_p(p: int) -> PLCircleMap:
    """The degree-p linear map ``x -> p x mod 1``."""
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    return PLCircleMap(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(p))))


def make_pl(breakpoints: Sequence[tuple]) -> PLCircleMap:
    bps = tuple((as_fraction(t), as_fraction(v)) for t, v in breakpoints)
    return PLCircleMap(bps)


@dataclass(frozen=True)
class OrbitSegment:
    base: Fraction
    points: tuple[Fraction, ...]

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def iterate(f: PLCircleMap, x, n: int) -> OrbitSegment:
    """The first ``n`` orbit points ``x, f(x), ..., f^{n-1}(x)``."""
    if n < 1:
        raise ValueError("orbit length must be at least 1")
    x = reduce(x)
    pts = [x]
    for _ in range(n - 1):
        pts.append(f(pts[-1]))
    return OrbitSegment(x, tuple(pts))


def preimage(f: PLCircleMap, A: ArcUnion) -> ArcUnion:
    """Exact ``{x : f(x) in A}`` as a canonical ArcUnion.

    A constant piece whose value lies in A contributes its whole open domain;
    the preimage of an open set is open, so the piece is glued to its
    neighbours through its end points.
    """
    if A.full_circle:
        return FULL
    if not A.arcs:
        return A
    arcs = [(a.start, a.end) for a in A.arcs]
    intervals = []
    glue = [t for t, _ in f.breakpoints[:-1] if contains(A, f(t))]
    for (t0, v0), (t1, v1) in f.pieces():
        if v0 == v1:
            if contains(A, v0):
                intervals.append((t0, t1))
            continue
        slope = (v1 - v0) / (t1 - t0)
        lo_v, hi_v = min(v0, v1), max(v0, v1)
        for s, e in arcs:
            for k in range(math.floor(lo_v - e), math.ceil(hi_v - s) + 1):
                lo, hi = max(s + k, lo_v), min(e + k, hi_v)
                if lo >= hi:
                    continue
                a = t0 + (lo - v0) / slope
                b = t0 + (hi - v0) / slope
                intervals.append((a, b) if a < b else (b, a))
    return from_intervals(intervals, glue)


def bowen_dist(f: PLCircleMap, x, y, n: int) -> Fraction:
    """``d_n(x, y) = max_{i<n} d(f^i x, f^i y)``."""
    ox, oy = iterate(f, x, n), iterate(f, y, n)
    return max(circle_dist(a, b) for a, b in zip(ox.points, oy.points))


def bowen_ball(f: PLCircleMap, x, n: int, eps) -> ArcUnion:
    """Open Bowen ball ``{y : d(f^i x, f^i y) < eps for all i < n}``.

    Built from the far end of the orbit inwards,
    ``B_k(z) = B(z, eps) & f^{-1} B_{k-1}(f z)``, which keeps the working
    set as small as the answer instead of pulling back i-fold preimages.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    orbit = iterate(f, x, n)
    ball = open_ball(orbit[n - 1], eps)
    for z in reversed(orbit.points[:-1]):
        ball = arc_intersect(open_ball(z, eps), preimage(f, ball))
    return ball
