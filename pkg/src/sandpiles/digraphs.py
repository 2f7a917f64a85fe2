"""Generalized de Bruijn, Kautz, and consecutive-d digraphs on Z_n.

Graphs are multidigraphs stored as dense n x n multiplicity matrices
(loops and parallel edges are expected: for d >= n every consecutive-d
constructor necessarily repeats targets).  Laplacians, spanning-tree
counts, and sandpile/critical groups are derived through the exact linear
algebra layer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import AbelianGroup
from .exact_linalg import IntMatrix, determinant, smith_group


@dataclass(frozen=True)
class Digraph:
    """Multidigraph on vertices {0, ..., n-1} with multiplicity adjacency."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if len(self.adjacency) != self.n or any(len(r) != self.n for r in self.adjacency):
            raise ValueError("adjacency must be n x n")
        if any(x < 0 for r in self.adjacency for x in r):
            raise ValueError("edge multiplicities must be nonnegative")

    def out_degree(self, v: int) -> int:
        return sum(self.adjacency[v])

    def in_degree(self, v: int) -> int:
        return sum(row[v] for row in self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(sum(row) for row in self.adjacency)


def build_consecutive_d(d: int, n: int, q: int, r: int) -> Digraph:
    """The consecutive-d digraph: edges v -> q*v + r + i (mod n), 0 <= i < d."""
    if n < 1:
        raise ValueError("need n >= 1")
    if d < 0:
        raise ValueError("need d >= 0")
    if q % n == 0:
        raise ValueError(f"multiplier q = {q} is 0 mod n = {n}")
    adj = [[0] * n for _ in range(n)]
    for v in range(n):
        base = (q * v + r) % n
        for i in range(d):
            adj[v][(base + i) % n] += 1
    return Digraph(n, tuple(tuple(row) for row in adj))


def de_bruijn(n: int, d: int) -> Digraph:
    """Generalized de Bruijn digraph DB(n, d): edges v -> d*v + i (mod n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if d < 0:
        raise ValueError("need d >= 0")
    adj = [[0] * n for _ in range(n)]
    for v in range(n):
        for i in range(d):
            adj[v][(d * v + i) % n] += 1
    return Digraph(n, tuple(tuple(row) for row in adj))


def kautz(n: int, d: int) -> Digraph:
    """Generalized Kautz digraph Ktz(n, d): edges v -> -d*(v+1) + i (mod n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if d < 0:
        raise ValueError("need d >= 0")
    adj = [[0] * n for _ in range(n)]
    for v in range(n):
        for i in range(d):
            adj[v][(-d * (v + 1) + i) % n] += 1
    return Digraph(n, tuple(tuple(row) for row in adj))


def laplacian(G: Digraph, reduce_at: int | None = None) -> IntMatrix:
    """Laplacian D - A (out-degree diagonal), optionally with one vertex
    row and column deleted."""
    n = G.n
    rows = []
    for v in range(n):
        deg = G.out_degree(v)
        row = [-x for x in G.adjacency[v]]
        row[v] += deg
        rows.append(row)
    if reduce_at is None:
        return IntMatrix.from_rows(rows)
    if not (0 <= reduce_at < n):
        raise ValueError(f"vertex {reduce_at} outside 0..{n - 1}")
    reduced = [
        [x for j, x in enumerate(row) if j != reduce_at]
        for v, row in enumerate(rows)
        if v != reduce_at
    ]
    if not reduced:
        return IntMatrix.zeros(0, 0)
    return IntMatrix.from_rows(reduced)


def is_eulerian(G: Digraph) -> bool:
    """True when every vertex has equal in- and out-degree."""
    return all(G.in_degree(v) == G.out_degree(v) for v in range(G.n))


def spanning_tree_count(G: Digraph, root: int) -> int:
    """Number of directed spanning trees rooted at ``root`` (Matrix Tree)."""
    return determinant(laplacian(G, reduce_at=root))


def sandpile_group_snf(G: Digraph, root: int) -> AbelianGroup:
    """Sandpile group at ``root``: torsion of the reduced-Laplacian cokernel.

    For Eulerian graphs the result is independent of the root and equals the
    critical group.
    """
    _, torsion = smith_group(laplacian(G, reduce_at=root))
    return torsion


def critical_group_snf(G: Digraph) -> AbelianGroup:
    """Critical group: torsion of the full-Laplacian cokernel."""
    _, torsion = smith_group(laplacian(G))
    return torsion
