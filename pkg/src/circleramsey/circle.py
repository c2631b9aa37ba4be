"""Exact arithmetic on the circle T = R/Z.

Points are :class:`fractions.Fraction` values in ``[0, 1)``. Open sets are
:class:`ArcUnion` values: a canonical, sorted tuple of pairwise disjoint open
arcs, or the distinguished full circle.

An :class:`Arc` is stored as ``(start, length)`` so that wrap-around past 0
needs no special casing.  ``length == 1`` is allowed and denotes the circle
with the single point ``start`` removed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Arc",
    "ArcUnion",
    "DenominatorGrowthError",
    "EMPTY",
    "FULL",
    "arc_intersect",
    "arc_translate",
    "as_fraction",
    "check_size",
    "circle_dist",
    "complement",
    "contains",
    "from_intervals",
    "is_subset",
    "measure",
    "open_ball",
    "reduce",
    "set_digit_limit",
]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

# decimal digits of numerator + denominator allowed in any single value
_DIGIT_LIMIT = 10**6
_BIT_LIMIT = int(_DIGIT_LIMIT * 3.3219280948873626) + 1


class DenominatorGrowthError(ArithmeticError):
    """A rational value exceeded the configured size guard."""


def set_digit_limit(digits: int) -> int:
    """Set the size guard (total decimal digits per value); returns the old limit."""
    global _DIGIT_LIMIT, _BIT_LIMIT
    if digits < 1:
        raise ValueError("digit limit must be positive")
    old = _DIGIT_LIMIT
    _DIGIT_LIMIT = digits
    _BIT_LIMIT = int(digits * 3.3219280948873626) + 1
    return old


def check_size(q: Fraction) -> Fraction:
    bits = q.numerator.bit_length() + q.denominator.bit_length()
    if bits > _BIT_LIMIT:
        raise DenominatorGrowthError(
            f"rational with ~{int(bits / 3.3219280948873626)} digits exceeds "
            f"the limit of {_DIGIT_LIMIT} digits"
        )
    return q


def as_fraction(x) -> Fraction:
    """Coerce ints and Fractions; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def reduce(x) -> Fraction:
    """Canonical representative of ``x`` mod 1, in ``[0, 1)``."""
    x = as_fraction(x)
    return check_size(x - (x.numerator // x.denominator))


def circle_dist(x, y) -> Fraction:
    """The metric ``min(|x - y|, 1 - |x - y|)`` on T."""
    t = reduce(as_fraction(x) - as_fraction(y))
    return t if t <= HALF else ONE - t


@dataclass(frozen=True, order=True)
class Arc:
    """Open arc running counterclockwise from ``start`` for ``length``."""

    start: Fraction
    length: Fraction

    def __post_init__(self):
        if not (ZERO <= self.start < ONE):
            raise ValueError(f"arc start {self.start} not in [0, 1)")
        if not (ZERO < self.length <= ONE):
            raise ValueError(f"arc length {self.length} not in (0, 1]")

    @property
    def end(self) -> Fraction:
        """Lifted end point; may exceed 1 for wrapping arcs."""
        return self.start + self.length

    @property
    def wraps(self) -> bool:
        return self.end > ONE

    def midpoint(self) -> Fraction:
        return reduce(self.start + self.length / 2)

    def __contains__(self, x) -> bool:
        t = reduce(as_fraction(x) - self.start)
        return ZERO < t < self.length

    def __str__(self):
        return f"({self.start}, {self.end})"


@dataclass(frozen=True)
class ArcUnion:
    """Open subset of T made of finitely many disjoint open arcs.

    Build instances through :func:`from_intervals` or the set operations so
    the canonical-form invariant holds: arcs sorted by start, pairwise
    disjoint, and each arc a maximal connected component.
    """

    arcs: tuple[Arc, ...] = ()
    full_circle: bool = False

    def __post_init__(self):
        if self.full_circle and self.arcs:
            raise ValueError("full_circle excludes an explicit arc list")

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __contains__(self, x) -> bool:
        return contains(self, x)

    @property
    def is_empty(self) -> bool:
        return not self.full_circle and not self.arcs

    def __str__(self):
        if self.full_circle:
            return "T"
        if not self.arcs:
            return "{}"
        return " u ".join(str(a) for a in self.arcs)


EMPTY = ArcUnion()
FULL = ArcUnion(full_circle=True)


def _components(A: ArcUnion) -> list[tuple[Fraction, Fraction]]:
    return [(a.start, a.end) for a in A.arcs]


def from_intervals(
    intervals: Iterable[tuple[Fraction, Fraction]],
    glue_points: Iterable[Fraction] = (),
) -> ArcUnion:
    """Canonical ArcUnion for the image in T of open real intervals.

    ``intervals`` are ``(lo, hi)`` pairs on the real line, projected mod 1.
    Two intervals that merely touch stay separate components unless the
    shared end point (mod 1) is listed in ``glue_points``, i.e. known to be
    a member of the set.
    """
    glue = {reduce(p) for p in glue_points}
    pieces = []
    for lo, hi in intervals:
        lo, hi = as_fraction(lo), as_fraction(hi)
        if hi <= lo:
            continue
        if hi - lo > ONE:
            return FULL
        s = reduce(lo)
        pieces.append((s, s + (hi - lo)))
    if not pieces:
        return EMPTY
    pieces.sort()

    merged: list[list[Fraction]] = []
    for lo, hi in pieces:
        if merged:
            last = merged[-1]
            if lo < last[1] or (lo == last[1] and reduce(lo) in glue):
                if hi > last[1]:
                    last[1] = hi
                continue
        merged.append([lo, hi])

    # the last component may run past 1 into the first ones
    while len(merged) > 1:
        first, last = merged[0], merged[-1]
        f_lo, f_hi = first[0] + 1, first[1] + 1
        if f_lo < last[1] or (f_lo == last[1] and reduce(f_lo) in glue):
            last[1] = max(last[1], f_hi)
            merged.pop(0)
        else:
            break

    out = []
    for lo, hi in merged:
        length = hi - lo
        if length > ONE or (length == ONE and reduce(lo) in glue):
            return FULL
        out.append(Arc(check_size(lo), check_size(length)))
    out.sort()
    return ArcUnion(tuple(out))


def open_ball(c, r) -> ArcUnion:
    """``{y : d(c, y) < r}``."""
    c, r = reduce(c), as_fraction(r)
    if r <= 0:
        raise ValueError(f"ball radius must be positive, got {r}")
    if r > HALF:
        return FULL
    if r == HALF:
        return ArcUnion((Arc(reduce(c + HALF), ONE),))
    return ArcUnion((Arc(reduce(c - r), 2 * r),))


def measure(A: ArcUnion) -> Fraction:
    if A.full_circle:
        return ONE
    return sum((a.length for a in A.arcs), ZERO)


def contains(A: ArcUnion, x) -> bool:
    if A.full_circle:
        return True
    return any(x in a for a in A.arcs)


def arc_translate(A: ArcUnion, t) -> ArcUnion:
    """Rigid rotation ``A + t``."""
    t = reduce(t)
    if A.full_circle or not A.arcs or t == 0:
        return A
    arcs = sorted(Arc(reduce(a.start + t), a.length) for a in A.arcs)
    return ArcUnion(tuple(arcs))


def _intersect_sorted(xs: Sequence[tuple], ys: Sequence[tuple]) -> list[tuple]:
    # two-pointer sweep over sorted lists of pairwise disjoint open intervals
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo < hi:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def arc_intersect(A: ArcUnion, B: ArcUnion) -> ArcUnion:
    """Exact intersection of two canonical ArcUnions."""
    if A.full_circle:
        return B
    if B.full_circle:
        return A
    if not A.arcs or not B.arcs:
        return EMPTY
    xs = _components(A)
    base = _components(B)
    # A is pinned to its lift with starts in [0, 1); B is unrolled over
    # three sheets, so every component of the intersection shows up once.
    ys = [(lo + k, hi + k) for k in (-1, 0, 1) for lo, hi in base]
    pieces = _intersect_sorted(xs, ys)
    arcs = sorted(Arc(reduce(lo), hi - lo) for lo, hi in pieces)
    return ArcUnion(tuple(arcs))


def complement(A: ArcUnion) -> ArcUnion:
    """Interior of the set complement.

    Differs from ``T \\ A`` only by the finitely many arc end points.
    """
    if A.full_circle:
        return EMPTY
    if not A.arcs:
        return FULL
    comps = _components(A)
    gaps = []
    for (_, hi), (lo, _) in zip(comps, comps[1:] + [(comps[0][0] + 1, None)]):
        if lo > hi:
            gaps.append((hi, lo))
    return from_intervals(gaps)


def is_subset(A: ArcUnion, B: ArcUnion) -> bool:
    return arc_intersect(A, B) == A
