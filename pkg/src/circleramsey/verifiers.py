"""Executable checks of the exact statements behind the 3^n bound.

Each ``verify_*`` function returns a :class:`VerificationReport` whose
``details`` hold the exact per-instance values that decided the verdict.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .circle import (
    ArcUnion,
    arc_intersect,
    arc_translate,
    as_fraction,
    circle_dist,
    measure,
    open_ball,
    reduce,
)
from .dynamics import PLCircleMap, bowen_ball, bowen_dist, iterate, make_times_p, preimage
from .separated import (
    SeparatedSetReport,
    _six_power,
    grid,
    is_separated,
    packing_upper_bound,
)

__all__ = [
    "CLAIMS",
    "VerificationReport",
    "ShadowResult",
    "TransferResult",
    "EmptyIntersection",
    "NoSlack",
    "verify_translation",
    "verify_component_ratio",
    "verify_ball_measure",
    "verify_grid_separated",
    "verify_capacity_circle",
    "min_expansion_p",
    "shadow_orbit",
    "shadow_many",
    "transfer_separated",
]

CLAIMS = (
    "translation_equivariance",
    "component_ratio",
    "ball_measure",
    "circle_capacity",
    "grid_separated",
)

SIXTH = Fraction(1, 6)
THIRD = Fraction(1, 3)


class EmptyIntersection(RuntimeError):
    def __init__(self, p, index):
        super().__init__(f"no point shadows the targets with p = {p} (empty after target {index})")
        self.p = p


class NoSlack(ValueError):
    pass


@dataclass(frozen=True)
class VerificationReport:
    claim_id: str
    parameters: dict
    verdict: str  # pass | fail | unsupported
    details: list = field(default_factory=list)
    seed: int | None = None
    exceptions: list = field(default_factory=list)

    def __post_init__(self):
        if self.claim_id not in CLAIMS:
            raise ValueError(f"unknown claim {self.claim_id!r}")
        if self.verdict not in ("pass", "fail", "unsupported"):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def capacity_value(self) -> int | None:
        if self.claim_id != "circle_capacity":
            return None
        return self.parameters["capacity"]

    @property
    def capacity_label(self) -> str:
        return f"C_d(T,{self.parameters['eps']})={self.parameters['capacity']}"


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def verify_translation(p: int, n: int, eps, sample_points: Sequence) -> VerificationReport:
    """Bowen balls of ``x -> p x`` are translates of the ball at 0."""
    f = make_times_p(p)
    eps = as_fraction(eps)
    at_zero = bowen_ball(f, 0, n, eps)
    details = []
    for x in sample_points:
        x = reduce(x)
        direct = bowen_ball(f, x, n, eps)
        shifted = arc_translate(at_zero, x)
        details.append({"x": x, "equal": direct == shifted, "measure": measure(direct)})
    return VerificationReport(
        "translation_equivariance",
        {"p": p, "n": n, "eps": eps},
        _verdict(all(d["equal"] for d in details)),
        details,
    )


def verify_component_ratio(p: int, n: int) -> VerificationReport:
    """Each component J of ``B_n(0, 1/6)`` loses exactly two thirds of its measure at step n+1.

    The endpoint hypothesis ``f^n(a) = f^n(b) = 0`` is checked per component;
    components where it fails are listed in ``exceptions`` and do not count
    toward the verdict.
    """
    if _six_power(p) is None:
        return VerificationReport("component_ratio", {"p": p, "n": n}, "unsupported")
    f = make_times_p(p)
    ball = bowen_ball(f, 0, n, SIXTH)
    nxt = bowen_ball(f, 0, n + 1, SIXTH)
    details, exceptions = [], []
    for J in ball.arcs:
        a, b = J.start, reduce(J.end)
        hyp = iterate(f, a, n + 1)[n] == 0 and iterate(f, b, n + 1)[n] == 0
        inside = measure(arc_intersect(nxt, ArcUnion((J,))))
        row = {
            "a": a,
            "b": b,
            "hypothesis": hyp,
            "measure_J": J.length,
            "measure_next": inside,
            "ratio_ok": inside * 3 == J.length,
        }
        details.append(row)
        if not hyp:
            exceptions.append(row)
    ok = all(d["ratio_ok"] for d in details if d["hypothesis"])
    return VerificationReport(
        "component_ratio",
        {"p": p, "n": n, "components": len(details)},
        _verdict(ok),
        details,
        exceptions=exceptions,
    )


def verify_ball_measure(p: int, n: int) -> VerificationReport:
    """``mu(B_k(0, 1/6)) = 3^-k`` for k = 1..n, plus the packing bound 3^n."""
    if _six_power(p) is None:
        return VerificationReport("ball_measure", {"p": p, "n": n}, "unsupported")
    f = make_times_p(p)
    details = []
    prev = None
    for k in range(1, n + 1):
        mu = measure(bowen_ball(f, 0, k, SIXTH))
        details.append({
            "n": k,
            "measure": mu,
            "exact": mu == Fraction(1, 3**k),
            "chain": prev is None or mu * 3 == prev,
        })
        prev = mu
    bound = packing_upper_bound(f, n, THIRD)
    ok = all(d["exact"] and d["chain"] for d in details) and bound == 3**n
    return VerificationReport(
        "ball_measure",
        {"p": p, "n": n, "measure": prev, "packing_bound": bound},
        _verdict(ok),
        details,
    )


def verify_grid_separated(r: int) -> VerificationReport:
    """``{i / 2^r}`` is (r, 1/3)-separated under the doubling map."""
    rep = is_separated(make_times_p(2), grid(2**r), r, THIRD, witnesses=False)
    lo, hi = rep.witness_range if rep.witness_range else (None, None)
    return VerificationReport(
        "grid_separated",
        {"r": r, "size": rep.size, "min_witness": lo, "max_witness": hi},
        _verdict(rep.certified),
        [{"index": s, "pairs": c} for s, c in enumerate(rep.index_counts)],
        exceptions=[] if rep.certified else [{"pair": rep.first_failure}],
    )


def _min_pair_units(a: int, b: int, c: int, D: int) -> int:
    def d(u, v):
        t = (u - v) % D
        return min(t, D - t)

    return min(d(a, b), d(a, c), d(b, c))


def verify_capacity_circle(num_random_triples: int = 10**5, seed: int = 0) -> VerificationReport:
    """No three points of T are pairwise more than 1/3 apart; ``{0, 1/2}`` shows two are.

    Triples are drawn on random common denominators and compared in integer
    units, which is exact.  Adversarial triples (equally spaced ones and
    small perturbations of them) are always included.
    """
    rng = random.Random(seed)
    triples: list[tuple[Fraction, Fraction, Fraction]] = [
        (Fraction(0), Fraction(1, 3), Fraction(2, 3)),
    ]
    for _ in range(50):
        x = Fraction(rng.randrange(10**6), 10**6)
        wiggle = Fraction(rng.choice((-1, 1)), rng.randrange(10, 10**9))
        triples.append((x, reduce(x + THIRD), reduce(x + 2 * THIRD)))
        triples.append((x, reduce(x + THIRD + wiggle), reduce(x + 2 * THIRD)))

    worst = Fraction(0)
    worst_triple = None
    counterexamples = []
    for t in triples:
        m = min(circle_dist(u, v) for u, v in combinations(t, 2))
        if m > THIRD:
            counterexamples.append({"triple": t, "min_dist": m})
        if m > worst:
            worst, worst_triple = m, t
    for _ in range(num_random_triples):
        D = rng.randrange(2, 10**9)
        a, b, c = (rng.randrange(D) for _ in range(3))
        m = Fraction(_min_pair_units(a, b, c, D), D)
        if m > THIRD:
            counterexamples.append({"triple": (Fraction(a, D), Fraction(b, D), Fraction(c, D)), "min_dist": m})
        if m > worst:
            worst, worst_triple = m, (Fraction(a, D), Fraction(b, D), Fraction(c, D))

    pair_dist = circle_dist(0, Fraction(1, 2))
    ok = not counterexamples and pair_dist > THIRD
    return VerificationReport(
        "circle_capacity",
        {
            "eps": THIRD,
            "capacity": 2,
            "triples": len(triples) + num_random_triples,
            "largest_min_dist": worst,
        },
        _verdict(ok),
        [
            {"witness_pair": (Fraction(0), Fraction(1, 2)), "dist": pair_dist},
            {"extremal_triple": worst_triple, "min_dist": worst},
        ],
        seed=seed,
        exceptions=counterexamples,
    )


def min_expansion_p(delta) -> int:
    """Smallest p with ``p * 2 delta >= 1``.

    For every p' >= p an open arc of length 2 delta maps onto T minus at
    most one point, so its preimage hits any nonempty open set.
    """
    delta = as_fraction(delta)
    if not (0 < delta < Fraction(1, 2)):
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    return math.ceil(1 / (2 * delta))


@dataclass(frozen=True)
class ShadowResult:
    y: Fraction
    p: int
    deviations: tuple[Fraction, ...]
    region: ArcUnion = field(repr=False, compare=False)


def shadow_orbit(targets: Sequence, delta, p: int | None = None) -> ShadowResult:
    """A point whose ``x -> p x`` orbit stays within delta of each target in turn.

    The admissible set ``I_0 & f^-1 I_1 & ... & f^-(n-1) I_(n-1)`` is built
    exactly; the midpoint of its largest component is returned.
    """
    delta = as_fraction(delta)
    targets = [reduce(x) for x in targets]
    if not targets:
        raise ValueError("need at least one target")
    if p is None:
        p = min_expansion_p(delta)
    f = make_times_p(p)
    region = open_ball(targets[-1], delta)
    for j in range(len(targets) - 2, -1, -1):
        region = arc_intersect(open_ball(targets[j], delta), preimage(f, region))
        if region.is_empty:
            raise EmptyIntersection(p, j)
    if region.full_circle:
        y = targets[0]
    else:
        best = max(region.arcs, key=lambda a: a.length)  # first of the longest
        y = best.midpoint()
    orbit = iterate(f, y, len(targets))
    devs = tuple(circle_dist(a, b) for a, b in zip(orbit.points, targets))
    if not all(d < delta for d in devs):
        raise AssertionError(f"shadow point {y} misses a target: {devs}")
    return ShadowResult(y, p, devs, region)


def shadow_many(orbit_targets: Sequence[Sequence], delta, p: int | None = None) -> list[ShadowResult]:
    return [shadow_orbit(t, delta, p) for t in orbit_targets]


@dataclass(frozen=True)
class TransferResult:
    p: int
    points: tuple[Fraction, ...]
    delta: Fraction | None
    report: SeparatedSetReport = field(repr=False)


def transfer_separated(g: PLCircleMap, points: Sequence, n: int, eps) -> TransferResult:
    """Move an (n, eps)-separated set of g to one of the same size for some ``x -> p x``.

    With ``d_min`` the smallest pairwise Bowen distance, every g-orbit is
    shadowed within ``delta / 2`` where ``delta = (d_min - eps) / 2``, using
    the least admissible p.  The image set is certified from scratch.
    """
    eps = as_fraction(eps)
    pts = [reduce(x) for x in points]
    if len(pts) < 2:
        f = make_times_p(1)
        return TransferResult(1, tuple(pts), None, is_separated(f, pts, n, eps))
    d_min = min(bowen_dist(g, x, y, n) for x, y in combinations(pts, 2))
    if d_min == eps:
        raise NoSlack(f"closest pair sits exactly at eps = {eps}; no room to shadow")
    if d_min < eps:
        raise ValueError(f"input set is not ({n}, {eps})-separated for g (d_min = {d_min})")
    delta = (d_min - eps) / 2
    p = min_expansion_p(delta / 2)
    shadows = [shadow_orbit(iterate(g, x, n).points, delta / 2, p) for x in pts]
    ys = tuple(s.y for s in shadows)
    report = is_separated(make_times_p(p), ys, n, eps)
    if not report.certified:
        raise AssertionError(f"transferred set failed certification at pair {report.first_failure}")
    return TransferResult(p, ys, delta, report)
