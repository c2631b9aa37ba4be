from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circleramsey.circle import (
    FULL,
    arc_intersect,
    arc_translate,
    circle_dist,
    contains,
    from_intervals,
    is_subset,
    measure,
    open_ball,
)
from circleramsey.dynamics import (
    BadDomain,
    NonIntegerDegree,
    NonMonotoneBreakpoints,
    bowen_ball,
    bowen_dist,
    iterate,
    make_pl,
    make_times_p,
    preimage,
)

from conftest import arc_unions, points, probe_points

SIXTH = F(1, 6)


@st.composite
def pl_maps(draw):
    k = draw(st.integers(1, 4))
    ts = sorted(set(draw(st.lists(st.fractions(0, 1, max_denominator=12), min_size=k, max_size=k))) - {0, 1})
    ts = [F(0)] + ts + [F(1)]
    v0 = draw(st.fractions(-1, 1, max_denominator=12))
    vals = [v0] + [draw(st.fractions(-3, 3, max_denominator=12)) for _ in ts[1:-1]]
    vals.append(v0 + draw(st.integers(-3, 4)))
    return make_pl(list(zip(ts, vals)))


def test_times_p_examples():
    assert make_times_p(2)(F(1, 4)) == F(1, 2)
    assert make_times_p(6)(SIXTH) == 0
    ident = make_times_p(1)
    assert all(ident(F(k, 17)) == F(k, 17) for k in range(17))
    with pytest.raises(ValueError):
        make_times_p(0)


def test_make_pl_examples():
    ident = make_pl([(0, 0), (1, 1)])
    assert ident.degree == 1 and ident(F(3, 7)) == F(3, 7)
    const = make_pl([(0, F(1, 3)), (1, F(1, 3))])
    assert const.degree == 0 and const(F(5, 9)) == F(1, 3)
    tent = make_pl([(0, 0), (F(1, 2), 1), (1, 1)])
    assert tent.degree == 1 and tent(F(1, 4)) == F(1, 2)


@pytest.mark.parametrize("bps, err", [
    ([(0, 0), (F(1, 2), 1), (F(1, 2), 2), (1, 2)], NonMonotoneBreakpoints),
    ([(0, 0), (1, F(3, 2))], NonIntegerDegree),
    ([(F(1, 10), 0), (1, 1)], BadDomain),
    ([(0, 0), (F(9, 10), 1)], BadDomain),
])
def test_make_pl_errors(bps, err):
    with pytest.raises(err):
        make_pl(bps)


def test_iterate_examples():
    assert iterate(make_times_p(2), F(1, 8), 4).points == (F(1, 8), F(1, 4), F(1, 2), 0)
    assert iterate(make_times_p(6), SIXTH, 2).points == (SIXTH, 0)
    assert iterate(make_times_p(1), F(2, 5), 3).points == (F(2, 5),) * 3


def test_preimage_examples():
    f6 = make_times_p(6)
    pre = preimage(f6, open_ball(0, SIXTH))
    # hand-solved: 6x in (-1/6, 1/6) + k  <=>  x in ((k - 1/6)/6, (k + 1/6)/6)
    expected = from_intervals([((k - SIXTH) / 6, (k + SIXTH) / 6) for k in range(6)])
    assert pre == expected and len(pre) == 6 and measure(pre) == F(1, 3)
    assert preimage(make_times_p(2), FULL) == FULL
    A = from_intervals([(F(1, 5), F(1, 3)), (F(7, 8), F(9, 8))])
    assert preimage(make_times_p(1), A) == A


def test_preimage_constant_piece_is_open():
    # constant on [1/3, 2/3] at 1/2, surrounding pieces cross 1/2
    f = make_pl([(0, 0), (F(1, 3), F(1, 2)), (F(2, 3), F(1, 2)), (1, 1)])
    pre = preimage(f, open_ball(F(1, 2), F(1, 10)))
    lo, hi = F(1, 3) - F(1, 15), F(2, 3) + F(1, 15)
    assert pre == from_intervals([(lo, hi)])
    assert preimage(make_pl([(0, F(1, 3)), (1, F(1, 3))]), open_ball(F(1, 3), F(1, 100))) == FULL


@given(pl_maps(), arc_unions(max_arcs=3))
@settings(max_examples=120, deadline=None)
def test_preimage_pointwise(f, A):
    pre = preimage(f, A)
    for x in probe_points(pre, extra=[t for t, _ in f.breakpoints]):
        assert contains(pre, x) == contains(A, f(x))


def test_bowen_dist_examples():
    f2 = make_times_p(2)
    assert bowen_dist(f2, 0, F(1, 4), 2) == F(1, 2)
    assert bowen_dist(f2, 0, F(1, 8), 2) == F(1, 4)
    assert bowen_dist(make_pl([(0, 0), (F(1, 2), 1), (1, 1)]), F(2, 9), F(2, 9), 5) == 0


@given(pl_maps(), points, points, points, st.integers(1, 4))
@settings(deadline=None)
def test_bowen_dist_properties(f, x, y, z, n):
    assert bowen_dist(f, x, y, 1) == circle_dist(x, y)
    assert bowen_dist(f, x, y, n) <= bowen_dist(f, x, y, n + 1)
    assert bowen_dist(f, x, y, n) == bowen_dist(f, y, x, n)
    assert bowen_dist(f, x, z, n) <= bowen_dist(f, x, y, n) + bowen_dist(f, y, z, n)


def test_bowen_ball_examples():
    f6 = make_times_p(6)
    for p in (2, 3, 6, 7, 36):
        assert bowen_ball(make_times_p(p), 0, 1, SIXTH) == open_ball(0, SIXTH)
    b2 = bowen_ball(f6, 0, 2, SIXTH)
    expected = from_intervals([(-F(1, 36), F(1, 36)), (F(5, 36), SIXTH), (-SIXTH, -F(5, 36))])
    assert b2 == expected and len(b2) == 3 and measure(b2) == F(1, 9)
    assert bowen_ball(f6, F(1, 2), 2, SIXTH) == arc_translate(b2, F(1, 2))


def forward_bowen_ball(f, x, n, eps):
    """Intersect the i-fold preimages of the balls around f^i(x) one step at a time."""
    orbit = iterate(f, x, n).points
    ball = open_ball(orbit[0], eps)
    for i in range(1, n):
        pulled = open_ball(orbit[i], eps)
        for _ in range(i):
            pulled = preimage(f, pulled)
        ball = arc_intersect(ball, pulled)
    return ball


@given(pl_maps(), points, st.integers(1, 3), st.sampled_from([F(1, 10), SIXTH, F(1, 4), F(1, 3)]))
@settings(max_examples=60, deadline=None)
def test_bowen_ball_matches_forward_construction_and_pointwise(f, x, n, eps):
    ball = bowen_ball(f, x, n, eps)
    assert ball == forward_bowen_ball(f, x, n, eps)
    assert x in ball
    for y in probe_points(ball)[::3]:
        assert contains(ball, y) == (bowen_dist(f, x, y, n) < eps)


@given(pl_maps(), points, st.integers(1, 3), st.sampled_from([F(1, 7), F(1, 4)]))
@settings(max_examples=40, deadline=None)
def test_bowen_balls_nest(f, x, n, eps):
    assert is_subset(bowen_ball(f, x, n + 1, eps), bowen_ball(f, x, n, eps))


@given(st.sampled_from([2, 3, 5, 6]), points, st.integers(1, 3), st.sampled_from([F(1, 5), SIXTH, F(2, 7)]))
@settings(max_examples=60, deadline=None)
def test_times_p_balls_are_translates(p, x, n, eps):
    f = make_times_p(p)
    assert bowen_ball(f, x, n, eps) == arc_translate(bowen_ball(f, 0, n, eps), x)


def cell_count_measure(p, n):
    """Measure of B_n(0, 1/6) for x -> p x with 6 | p, by testing the midpoint of every grid cell.

    All component end points lie on the grid 1/(6 p^(n-1)), so each open cell is
    entirely inside or entirely outside the ball.
    """
    D = 6 * p ** (n - 1)
    inside = 0
    for k in range(D):
        num, den = 2 * k + 1, 2 * D
        ok = True
        for _ in range(n):
            t = num % den
            if 6 * min(t, den - t) >= den:
                ok = False
                break
            num *= p
        inside += ok
    return F(inside, D)


@pytest.mark.parametrize("p, n", [(6, 1), (6, 2), (6, 3), (6, 4), (6, 5), (36, 1), (36, 2), (36, 3)])
def test_ball_measure_against_cell_count(p, n):
    mu = measure(bowen_ball(make_times_p(p), 0, n, SIXTH))
    assert mu == cell_count_measure(p, n) == F(1, 3**n)
