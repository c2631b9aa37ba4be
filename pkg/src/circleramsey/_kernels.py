"""Integer pair-scan kernels.

Orbits of points on a common grid ``i / D`` are passed as an ``(n, N)``
int64 array of numerators.  Comparisons stay exact: ``d / D > en / ed`` is
tested as ``d * ed > en * D``; callers guarantee these products fit in int64.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def least_index_matrix(orb, D, en, ed):
    n, N = orb.shape
    out = np.full((N, N), -1, dtype=np.int16)
    for a in range(N):
        for b in range(a + 1, N):
            for s in range(n):
                d = abs(orb[s, a] - orb[s, b])
                d = min(d, D - d)
                if d * ed > en * D:
                    out[a, b] = s
                    out[b, a] = s
                    break
    return out


@njit(cache=True)
def separation_summary(orb, D, en, ed):
    """Scan all pairs without storing them.

    Returns ``(unseparated, bad_a, bad_b, wmin, wmax, hist)`` where
    ``bad_a, bad_b`` is the first unseparated pair (or -1, -1), ``wmin`` and
    ``wmax`` bound the witness distance numerators at the least index, and
    ``hist[s]`` counts pairs whose least separating index is ``s``.
    """
    n, N = orb.shape
    unsep = 0
    bad_a = -1
    bad_b = -1
    wmin = D
    wmax = -1
    hist = np.zeros(n, dtype=np.int64)
    for a in range(N):
        for b in range(a + 1, N):
            found = False
            for s in range(n):
                d = abs(orb[s, a] - orb[s, b])
                d = min(d, D - d)
                if d * ed > en * D:
                    hist[s] += 1
                    if d < wmin:
                        wmin = d
                    if d > wmax:
                        wmax = d
                    found = True
                    break
            if not found:
                if unsep == 0:
                    bad_a = a
                    bad_b = b
                unsep += 1
    return unsep, bad_a, bad_b, wmin, wmax, hist
