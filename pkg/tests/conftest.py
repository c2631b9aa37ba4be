from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from circleramsey.circle import circle_dist, from_intervals, reduce
from circleramsey.separated import SeparatedSetReport

THIRD = Fraction(1, 3)

# Every separated-set report built during the session, as (size, n, eps, method).
PRODUCED: list[tuple[int, int, Fraction, str]] = []
_recording = {"on": True}
_original_post_init = SeparatedSetReport.__post_init__


def _recording_post_init(self):
    _original_post_init(self)
    if self.certified and _recording["on"]:
        PRODUCED.append((self.size, self.n, self.eps, self.method))


SeparatedSetReport.__post_init__ = _recording_post_init


def growth_violations():
    return [r for r in PRODUCED if r[2] >= THIRD and r[0] > 3 ** r[1]]


@pytest.fixture
def unrecorded_reports():
    """For tests that build an oversized report on purpose."""
    _recording["on"] = False
    yield
    _recording["on"] = True


CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and (rep.when == "call" or rep.failed):
        num, title = mark.args
        CRITERIA.setdefault(num, []).append((title, "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for num in sorted(CRITERIA):
            for title, verdict in CRITERIA[num]:
                terminalreporter.write_line(f"criterion {num:>2}: {verdict}  {title}")
    bad = growth_violations()
    terminalreporter.section("growth bound")
    terminalreporter.write_line(
        f"{sum(1 for r in PRODUCED if r[2] >= THIRD)} certified sets with eps >= 1/3 checked against 3^n; "
        f"{len(bad)} violation(s)"
    )


def pytest_sessionfinish(session, exitstatus):
    if growth_violations() and session.exitstatus == 0:
        session.exitstatus = 1

points = st.fractions(min_value=0, max_value=1, max_denominator=72).map(reduce)
shifts = st.fractions(min_value=-3, max_value=3, max_denominator=72)
radii = st.fractions(min_value=0, max_value=Fraction(3, 5), max_denominator=48).filter(lambda r: r > 0)


@st.composite
def arc_unions(draw, max_arcs=5):
    raw = draw(st.lists(
        st.tuples(points, st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=48)),
        max_size=max_arcs,
    ))
    glue = draw(st.lists(points, max_size=3))
    return from_intervals([(s, s + length) for s, length in raw], glue)


def probe_points(*unions, extra=()):
    """Arc end points, points just off them, and a fixed grid: where set operations break."""
    out = set(Fraction(k, 97) for k in range(97)) | {reduce(x) for x in extra}
    tiny = Fraction(1, 10**6)
    for A in unions:
        for a in A.arcs:
            for e in (a.start, a.end):
                out |= {reduce(e), reduce(e - tiny), reduce(e + tiny)}
    return sorted(out)


def exhaustive_max_clique(adj: np.ndarray) -> list[int]:
    """Lexicographically least maximum clique by enumerating every vertex subset."""
    N = len(adj)
    if N == 0:
        return []
    nbr = np.array([sum(1 << j for j in range(N) if adj[i, j]) for i in range(N)], dtype=np.int64)
    ok = np.zeros(1 << N, dtype=bool)
    ok[0] = True
    for b in range(N):
        lo, hi = 1 << b, 1 << (b + 1)
        rest = np.arange(0, lo, dtype=np.int64)
        ok[lo:hi] = ok[rest] & ((rest & ~nbr[b]) == 0)
    masks = np.flatnonzero(ok)
    sizes = np.array([bin(int(m)).count("1") for m in masks])
    best = masks[sizes == sizes.max()]
    return min([j for j in range(N) if int(m) >> j & 1] for m in best)


def brute_sep_matrix(f, pts, n, eps):
    """Least separating index by direct orbit iteration, -1 for none."""
    N = len(pts)
    orbs = []
    for x in pts:
        o = [x]
        for _ in range(n - 1):
            o.append(f(o[-1]))
        orbs.append(o)
    out = np.full((N, N), -1, dtype=int)
    for a in range(N):
        for b in range(N):
            if a != b:
                for s in range(n):
                    if circle_dist(orbs[a][s], orbs[b][s]) > eps:
                        out[a, b] = s
                        break
    return out


@pytest.fixture
def third():
    return Fraction(1, 3)
