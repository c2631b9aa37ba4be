"""Acceptance suite: one test (or small group) per criterion, each printing PASS/FAIL.

The summary lines appear in the "acceptance criteria" section at the end of
the pytest run.
"""
import json
import random
import time
from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest

from circleramsey import formats
from circleramsey.circle import circle_dist, measure
from circleramsey.coloring import doubling_coloring, emit_certificate, find_mono_clique, verify_certificate
from circleramsey.dynamics import bowen_ball, bowen_dist, iterate, make_pl, make_times_p
from circleramsey.separated import (
    GrowthBoundWarning,
    SeparatedSetReport,
    build_separation_graph,
    greedy_max_separated,
    grid,
    is_separated,
    max_separated_exact,
)
from circleramsey.verifiers import (
    min_expansion_p,
    shadow_orbit,
    transfer_separated,
    verify_capacity_circle,
    verify_component_ratio,
)

from conftest import PRODUCED, exhaustive_max_clique, growth_violations

THIRD = F(1, 3)
SIXTH = F(1, 6)
f2 = make_times_p(2)


def line(num, ok, text):
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {text}")


@pytest.mark.criterion(1, "Bowen ball measure is exactly 3^-n (p=6, n<=8; p=36, n<=4), under 10 s")
def test_c1_ball_measure():
    start = time.perf_counter()
    wrong = []
    for p, top in ((6, 8), (36, 4)):
        f = make_times_p(p)
        for n in range(1, top + 1):
            mu = measure(bowen_ball(f, 0, n, SIXTH))
            if mu != F(1, 3**n):
                wrong.append((p, n, mu))
    elapsed = time.perf_counter() - start
    line(1, not wrong and elapsed < 10, f"{12 - len(wrong)}/12 exact, {elapsed:.2f}s")
    assert not wrong
    assert elapsed < 10


@pytest.mark.criterion(2, "every component J of B_n(0,1/6), p=6, n<=6: endpoint hypothesis and ratio 1/3")
def test_c2_component_ratio():
    bad, total = [], 0
    for n in range(1, 7):
        rep = verify_component_ratio(6, n)
        total += len(rep.details)
        assert len(rep.details) == 2**n - 1
        bad += [(n, r) for r in rep.details if not (r["hypothesis"] and r["ratio_ok"])]
        bad += [(n, e) for e in rep.exceptions]
        assert rep.passed
    line(2, not bad, f"{total} components checked, {len(bad)} reported failures")
    assert not bad


@pytest.mark.criterion(3, "doubling colouring of K_{2^r} has no monochromatic triangle, r<=10; r=10 under 60 s")
def test_c3_no_mono_triangle():
    results = {}
    for r in range(1, 11):
        start = time.perf_counter()
        hit = find_mono_clique(doubling_coloring(r), 3)
        results[r] = (hit, time.perf_counter() - start)
    ok = all(hit is None for hit, _ in results.values()) and results[10][1] < 60
    line(3, ok, f"r=10 (K_1024) in {results[10][1]:.2f}s")
    assert all(hit is None for hit, _ in results.values())
    assert results[10][1] < 60


@pytest.mark.criterion(4, "A_r is certified (r,1/3)-separated under x -> 2x for r<=14")
def test_c4_dyadic_grids_certified():
    for r in range(1, 15):
        rep = is_separated(f2, grid(2**r), r, THIRD, witnesses=r <= 6)
        assert rep.certified and rep.size == 2**r
        assert all(c == 0 for c in rep.index_counts[r:])
        # the closed-form index: i - j = 2^s * odd is exactly 1/2 apart at step r - s - 1
        if r <= 6:
            for i, j, s, w in rep.witnesses:
                v = ((j - i) & -(j - i)).bit_length() - 1
                orb = iterate(f2, F(i, 2**r), r), iterate(f2, F(j, 2**r), r)
                assert circle_dist(orb[0][r - v - 1], orb[1][r - v - 1]) == F(1, 2)
                assert s <= r - v - 1
    line(4, True, "A_1..A_14 certified; s_{f_2}(r,1/3) >= 2^r")


@pytest.mark.criterion(4, "witness distance at the least separating index is exactly 1/2 for every pair, r<=14")
def test_c4_least_index_witness_is_one_half():
    # stated literally; fails from r = 3 on (e.g. d(0, 3/8) = 3/8 > 1/3 already at index 0)
    off = {}
    for r in range(1, 15):
        rep = is_separated(f2, grid(2**r), r, THIRD, witnesses=False)
        lo, hi = rep.witness_range
        if (lo, hi) != (F(1, 2), F(1, 2)):
            off[r] = (lo, hi)
    line(4, not off, f"least-index witness range differs from [1/2, 1/2] for r in {sorted(off)}")
    assert not off, {r: (str(a), str(b)) for r, (a, b) in off.items()}


@pytest.mark.criterion(5, "R(3,r) > 2^r certificates emitted and re-verified independently, r<=10")
def test_c5_certificates():
    capacity = verify_capacity_circle(10**4, seed=5)
    claims = []
    for r in range(1, 11):
        c = doubling_coloring(r)
        cert = emit_certificate(c, 2, capacity)
        # re-verify from serialized form only
        c2 = formats.coloring_from_json(json.loads(formats.dumps(formats.coloring_to_json(c))))
        cert2 = formats.certificate_from_json(json.loads(formats.dumps(formats.certificate_to_json(cert))))
        assert verify_certificate(cert2, c2)
        # independent triangle count: trace(A^3) = 0 for every colour class
        # (float64 products of 0/1 matrices this small are exact integers)
        for col in range(r):
            A = (c2.colors == col).astype(np.float64)
            assert float(np.sum((A @ A) * A)) == 0
        assert cert2.claim == f"R(3,{r}) > {2**r}"
        claims.append(cert2)
    known = {2: 6, 3: 17}
    assert all(claims[r - 1].vertices < known[r] for r in known)
    line(5, True, "; ".join(c.claim for c in claims[:3]) + " ... " + claims[-1].claim)


def random_points(rng, size):
    pts = set()
    while len(pts) < size:
        den = rng.randrange(1, 200)
        pts.add(F(rng.randrange(den), den))
    return sorted(pts)


@pytest.mark.criterion(6, "exact maximum separated set equals exhaustive enumeration on 200 seeded sets")
def test_c6_exact_vs_enumeration():
    mismatches = []
    for seed in range(200):
        rng = random.Random(1000 + seed)
        f = make_times_p(rng.choice((2, 6)))
        pts = random_points(rng, rng.randrange(1, 19))
        n, eps = rng.randrange(1, 5), rng.choice((THIRD, F(1, 4), F(1, 5)))
        g = build_separation_graph(f, pts, n, eps)
        rep = max_separated_exact(g)
        expected = [pts[i] for i in exhaustive_max_clique(g.least >= 0)]
        if list(rep.points) != expected or not rep.maximal:
            mismatches.append(seed)
    line(6, not mismatches, f"{200 - len(mismatches)}/200 agree")
    assert not mismatches


@pytest.mark.criterion(7, "shadowing: 100 seeded instances, all deviations < delta, no empty intersection")
def test_c7_shadowing():
    worst = F(0)
    failures = 0
    for seed in range(100):
        rng = random.Random(2000 + seed)
        delta = rng.choice((F(1, 10), F(1, 24), F(1, 100)))
        targets = random_points(rng, 1) + [F(rng.randrange(997), 997) for _ in range(rng.randrange(0, 6))]
        res = shadow_orbit(targets, delta, min_expansion_p(delta))
        orbit = iterate(make_times_p(res.p), res.y, len(targets)).points
        devs = [circle_dist(a, b) for a, b in zip(orbit, targets)]
        failures += any(d >= delta for d in devs) or list(res.deviations) != devs
        worst = max(worst, max(d / delta for d in devs))
    line(7, failures == 0, f"max deviation/delta = {float(worst):.3f}")
    assert failures == 0


def random_pl_map(rng):
    k = rng.randrange(1, 5)
    ts = sorted({F(rng.randrange(1, 24), 24) for _ in range(k)})
    v0 = F(rng.randrange(24), 24)
    vals = [v0] + [F(rng.randrange(-48, 72), 24) for _ in ts]
    deg = rng.choice((1, 2, 3, 4, -1, -2))
    return make_pl(list(zip([F(0)] + ts + [F(1)], vals + [v0 + deg])))


@pytest.mark.criterion(8, "transfer: 20 PL maps g, greedy sets of size 2-8 become f_p-separated of equal size")
def test_c8_transfer():
    rng = random.Random(3000)
    done = []
    while len(done) < 20:
        g = random_pl_map(rng)
        n, eps = rng.randrange(1, 4), rng.choice((THIRD, F(1, 4), F(1, 5)))
        S = list(greedy_max_separated(g, grid(48), n, eps).points)[:8]
        if len(S) < 2:
            continue
        res = transfer_separated(g, S, n, eps)
        fp = make_times_p(res.p)
        assert res.report.certified and len(res.points) == len(S)
        assert all(bowen_dist(fp, a, b, n) > eps for a, b in combinations(res.points, 2))
        done.append((len(S), res.p))
    line(8, True, f"sizes {sorted({s for s, _ in done})}, p up to {max(p for _, p in done)}")
    assert {s for s, _ in done} - set(range(2, 9)) == set()


@pytest.mark.criterion(9, "circle capacity at 1/3 is 2: 10^5 seeded triples, extremal triple, pair (0,1/2)")
def test_c9_capacity():
    rep = verify_capacity_circle(10**5, seed=0)
    assert rep.parameters["triples"] >= 10**5 + 1
    pair = rep.details[0]
    assert pair["witness_pair"] == (0, F(1, 2)) and pair["dist"] > THIRD
    ext = min(circle_dist(a, b) for a, b in combinations((F(0), THIRD, F(2, 3)), 2))
    line(9, rep.passed and ext <= THIRD, f"largest min pair distance {rep.parameters['largest_min_dist']}")
    assert rep.passed and rep.exceptions == []
    assert ext == THIRD


@pytest.mark.criterion(10, "every certified separated set with eps = 1/3 has size <= 3^n; violations fail loudly")
def test_c10_growth_bound():
    # produce a spread of sets here; the session-wide record covers every other test too
    for p in (2, 3, 6):
        for n in (1, 2, 3):
            greedy_max_separated(make_times_p(p), grid(p**n * 2), n, THIRD)
            max_separated_exact(build_separation_graph(make_times_p(p), grid(p**n), n, THIRD))
    with pytest.raises(GrowthBoundWarning):
        SeparatedSetReport(tuple(F(k, 4) for k in range(4)), 1, THIRD, True, "external")
    checked = [r for r in PRODUCED if r[2] >= THIRD]
    bad = growth_violations()
    line(10, not bad, f"{len(checked)} sets so far, largest ratio size/3^n = "
         f"{max(s / 3**n for s, n, _, _ in checked):.3f}")
    assert checked and not bad
