"""Edge colourings of complete graphs built from orbit separation, and Ramsey certificates.

An edge ``{x, y}`` of a separated set is coloured by the least iterate index
at which the two orbits are more than eps apart.  If no colour class holds a
clique on ``k + 1`` vertices, the colouring witnesses ``R(k+1, n) > m``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .circle import as_fraction
from .dynamics import PLCircleMap, make_times_p
from .separated import build_separation_graph, grid

__all__ = [
    "EdgeColoring",
    "RamseyCertificate",
    "NotSeparatedPair",
    "MonochromaticCliqueExists",
    "UnverifiedCapacity",
    "DigestMismatch",
    "color_complete_graph",
    "doubling_coloring",
    "find_mono_clique",
    "emit_certificate",
    "verify_certificate",
    "color_class_dimacs",
]


class NotSeparatedPair(ValueError):
    def __init__(self, i, j):
        super().__init__(f"vertices {i} and {j} are not separated; no colour exists for their edge")
        self.pair = (i, j)


class MonochromaticCliqueExists(ValueError):
    def __init__(self, witness, color):
        super().__init__(f"colour {color} contains the clique {witness}")
        self.witness = witness
        self.color = color


class UnverifiedCapacity(ValueError):
    pass


class DigestMismatch(ValueError):
    pass


def _label(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


class EdgeColoring:
    """Colouring of the complete graph on ``vertices`` with colours ``0..num_colors-1``.

    ``colors`` is a symmetric integer matrix with -1 on the diagonal.
    """

    def __init__(self, vertices: Sequence, num_colors: int, colors: np.ndarray):
        colors = np.asarray(colors, dtype=np.int16)
        m = len(vertices)
        if colors.shape != (m, m):
            raise ValueError(f"colour matrix has shape {colors.shape}, expected {(m, m)}")
        if not np.array_equal(colors, colors.T):
            raise ValueError("colour matrix must be symmetric")
        off = colors[~np.eye(m, dtype=bool)]
        if off.size and (off.min() < 0 or off.max() >= num_colors):
            raise ValueError(f"every edge needs a colour in [0, {num_colors - 1}]")
        colors = colors.copy()
        np.fill_diagonal(colors, -1)
        colors.setflags(write=False)
        self.vertices = tuple(vertices)
        self.num_colors = num_colors
        self.colors = colors

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return (
            self.num_colors == other.num_colors
            and self.vertices == other.vertices
            and np.array_equal(self.colors, other.colors)
        )

    def __repr__(self):
        return f"EdgeColoring(m={len(self)}, num_colors={self.num_colors})"

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("no edge from a vertex to itself")
        return int(self.colors[i, j])

    def edges(self):
        iu = np.triu_indices(len(self), 1)
        return zip(iu[0].tolist(), iu[1].tolist(), self.colors[iu].tolist())

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(b"edge-coloring-v1\n")
        h.update(f"{self.num_colors}\n".encode())
        h.update("\n".join(_label(v) for v in self.vertices).encode())
        h.update(b"\n")
        h.update(self.colors[np.triu_indices(len(self), 1)].astype("<i2").tobytes())
        return h.hexdigest()

    def recolored(self, i: int, j: int, c: int) -> "EdgeColoring":
        colors = self.colors.copy()
        colors[i, j] = colors[j, i] = c
        return EdgeColoring(self.vertices, self.num_colors, colors)


def color_complete_graph(f: PLCircleMap, points: Sequence, n: int, eps) -> EdgeColoring:
    """Colour each pair by its least separating index; the set is re-checked first."""
    graph = build_separation_graph(f, points, n, as_fraction(eps))
    bad = np.argwhere(np.triu(graph.least < 0, 1))
    if len(bad):
        i, j = bad[0]
        raise NotSeparatedPair(int(i), int(j))
    return EdgeColoring(graph.vertices, n, graph.least)


def doubling_coloring(r: int) -> EdgeColoring:
    """The r-colouring of ``K_{2^r}`` on ``{i / 2^r}`` from the doubling map with eps = 1/3."""
    if r < 1:
        raise ValueError("r must be positive")
    return color_complete_graph(make_times_p(2), grid(2**r), r, Fraction(1, 3))


def _bits(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _class_adjacency(coloring: EdgeColoring, c: int) -> list[int]:
    return [_bits(row) for row in coloring.colors == c]


def _triangle(adj: list[int]) -> list[int] | None:
    for i, ai in enumerate(adj):
        higher = ai >> (i + 1) << (i + 1)
        while higher:
            low = higher & -higher
            j = low.bit_length() - 1
            common = ai & adj[j]
            if common:
                k = (common & -common).bit_length() - 1
                return sorted((i, j, k))
            higher ^= low
    return None


def _clique(adj: list[int], k: int) -> list[int] | None:
    def extend(R, P):
        if len(R) == k:
            return R
        while P and len(R) + P.bit_count() >= k:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            hit = extend(R + [v], P & adj[v])
            if hit is not None:
                return hit
        return None

    return extend([], (1 << len(adj)) - 1)


def find_mono_clique(coloring: EdgeColoring, k: int) -> list[int] | None:
    """Vertex indices of some monochromatic ``K_k``, or None."""
    hit = _find_mono_clique(coloring, k)
    return None if hit is None else hit[0]


def _find_mono_clique(coloring, k):
    if k < 3:
        raise ValueError("clique size must be at least 3")
    if len(coloring) < k:
        return None
    for c in range(coloring.num_colors):
        adj = _class_adjacency(coloring, c)
        hit = _triangle(adj) if k == 3 else _clique(adj, k)
        if hit is not None:
            return sorted(hit), c
    return None


@dataclass(frozen=True)
class RamseyCertificate:
    k_plus_1: int
    colors: int
    vertices: int
    digest: str
    capacity: str

    @property
    def claim(self) -> str:
        return f"R({self.k_plus_1},{self.colors}) > {self.vertices}"


def emit_certificate(coloring: EdgeColoring, k: int, capacity) -> RamseyCertificate:
    """Certify ``R(k+1, n) > m`` from a colouring with no monochromatic ``K_{k+1}``.

    ``capacity`` is a passing circle-capacity verification report; the
    certificate records the capacity fact it relies on.
    """
    if capacity is None or getattr(capacity, "verdict", None) != "pass":
        raise UnverifiedCapacity("capacity claim has not been verified")
    value = capacity.capacity_value
    if value != k:
        raise UnverifiedCapacity(f"verified capacity is {value}, certificate asks for k = {k}")
    hit = _find_mono_clique(coloring, k + 1)
    if hit is not None:
        raise MonochromaticCliqueExists(*hit)
    return RamseyCertificate(
        k_plus_1=k + 1,
        colors=coloring.num_colors,
        vertices=len(coloring),
        digest=coloring.digest(),
        capacity=capacity.capacity_label,
    )


def verify_certificate(cert: RamseyCertificate, coloring: EdgeColoring) -> bool:
    """Re-check a certificate from scratch against the colouring it names."""
    if cert.digest != coloring.digest():
        raise DigestMismatch("certificate digest does not match the colouring")
    if cert.vertices != len(coloring) or cert.colors != coloring.num_colors:
        return False
    if cert.k_plus_1 < 3:
        return False
    return find_mono_clique(coloring, cert.k_plus_1) is None


def color_class_dimacs(coloring: EdgeColoring, c: int) -> str:
    """One colour class as a DIMACS ``p edge`` graph (1-based vertices)."""
    edges = [(i, j) for i, j, col in coloring.edges() if col == c]
    lines = [f"c colour class {c} of a {coloring.num_colors}-colouring of K_{len(coloring)}"]
    lines.append(f"p edge {len(coloring)} {len(edges)}")
    lines.extend(f"e {i + 1} {j + 1}" for i, j in edges)
    return "\n".join(lines) + "\n"
