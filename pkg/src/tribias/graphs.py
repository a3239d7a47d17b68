"""Undirected multigraphs and exact friendship-bias computations.

Everything in this module is deterministic and exact: bias values are
``fractions.Fraction`` objects, never floats.  Self-loops are stored the
usual way (the adjacency entry ``A[i][i]`` is twice the number of loops at
``i``) so that the degree of a vertex is always its adjacency row sum.

Triangle counts on multigraphs use multiplicity products over ordered
distinct triples, halved: a pair of parallel edges closed by a third edge
counts as two triangles.  The bias of a vertex compares the
degree-weighted average of its neighbours' attribute values with its own
attribute value; the ``j == i`` self-loop term is included in the
neighbour sum, which matters only when loops are present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GraphInputError, InvariantError

__all__ = [
    "Multigraph",
    "BiasReport",
    "vertex_stats",
    "triangle_counts",
    "wedge_counts",
    "attribute_bias",
    "degree_bias",
    "wedge_bias",
    "triangle_bias",
    "total_attribute_bias",
    "random_neighbor_weights",
    "attribute_bias_covariance",
    "count_triangles",
    "has_triangle",
    "parse_edge_list",
    "format_edge_list",
]


class Multigraph:
    """Immutable undirected multigraph on vertices ``0 .. n-1``.

    Edges may carry integer multiplicities; ``(u, u)`` entries are
    self-loops.  Instances are frozen after construction; all operations
    on them are pure functions, safe to share across threads.
    """

    __slots__ = ("n", "_adj", "_degrees")

    def __init__(self, n: int, edges: Iterable[tuple] = ()):
        if n < 0:
            raise GraphInputError(f"vertex count must be non-negative, got {n}")
        self.n = n
        adj: list[dict[int, int]] = [dict() for _ in range(n)]
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                mult = 1
            else:
                u, v, mult = edge
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge {edge} out of range for n={n}")
            if mult < 0:
                raise GraphInputError(f"negative multiplicity in edge {edge}")
            if mult == 0:
                continue
            if u == v:
                # one self-loop contributes 2 to the adjacency diagonal
                adj[u][u] = adj[u].get(u, 0) + 2 * mult
            else:
                adj[u][v] = adj[u].get(v, 0) + mult
                adj[v][u] = adj[v].get(u, 0) + mult
        self._adj = adj
        self._degrees = tuple(sum(row.values()) for row in adj)

    @classmethod
    def complete(cls, n: int) -> "Multigraph":
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    # -- read-only accessors -------------------------------------------------

    def degree(self, i: int) -> int:
        return self._degrees[i]

    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    def multiplicity(self, u: int, v: int) -> int:
        """Adjacency entry A_uv (the diagonal is twice the loop count)."""
        return self._adj[u].get(v, 0)

    def neighbors(self, i: int):
        """Iterate ``(j, A_ij)`` pairs, including the diagonal entry."""
        return self._adj[i].items()

    def edge_count(self) -> int:
        """Number of edges counted with multiplicity (loops count once)."""
        return sum(self._degrees) // 2

    def edges(self):
        """Yield ``(u, v, mult)`` with ``u <= v``; loops report loop count."""
        for u, row in enumerate(self._adj):
            for v, m in sorted(row.items()):
                if v > u:
                    yield (u, v, m)
                elif v == u:
                    yield (u, u, m // 2)

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self.n == other.n
            and self._adj == other._adj
        )

    def __hash__(self):
        return hash((self.n, tuple(tuple(sorted(r.items())) for r in self._adj)))

    def __repr__(self):
        return f"Multigraph(n={self.n}, edges={list(self.edges())!r})"


@dataclass(frozen=True)
class BiasReport:
    """Per-vertex and average friendship bias for one attribute."""

    per_vertex: tuple[Fraction, ...]
    average: Fraction
    attribute_kind: str

    @property
    def total(self) -> Fraction:
        return self.average * len(self.per_vertex)


def triangle_counts(g: Multigraph) -> list[int]:
    """Number of triangles at each vertex, with multiplicity products.

    ``t[i]`` is half the sum of ``A_ij * A_jk * A_ki`` over ordered pairs of
    distinct ``j, k`` both distinct from ``i``.
    """
    t = [0] * g.n
    adj = g._adj
    for i in range(g.n):
        row_i = adj[i]
        acc = 0
        for j, m_ij in row_i.items():
            if j == i:
                continue
            row_j = adj[j]
            # intersect the smaller neighbourhood against the larger
            if len(row_j) <= len(row_i):
                small, other = row_j, row_i
            else:
                small, other = row_i, row_j
            s = 0
            for k, m_a in small.items():
                if k == i or k == j:
                    continue
                m_b = other.get(k)
                if m_b:
                    s += m_a * m_b
            acc += m_ij * s
        if acc % 2:
            raise InvariantError("odd ordered-triangle sum")
        t[i] = acc // 2
    return t


def wedge_counts(g: Multigraph) -> list[int]:
    """Number of wedges centred anywhere that contain each vertex: d(d-1)/2."""
    return [d * (d - 1) // 2 for d in g.degrees()]


def vertex_stats(g: Multigraph) -> tuple[list[int], list[int], list[int]]:
    """Return (degrees, triangle counts, wedge counts) for all vertices."""
    return list(g.degrees()), triangle_counts(g), wedge_counts(g)


def count_triangles(g: Multigraph) -> int:
    """Total number of triangles, multiplicity-weighted.

    Equals one third of the sum of the per-vertex counts.
    """
    total = sum(triangle_counts(g))
    if total % 3:
        raise InvariantError("per-vertex triangle counts do not sum to 3k")
    return total // 3


def has_triangle(g: Multigraph) -> bool:
    """True when some three distinct vertices are mutually adjacent."""
    adj = g._adj
    for u in range(g.n):
        row_u = adj[u]
        for v, _ in row_u.items():
            if v <= u:
                continue
            row_v = adj[v]
            small, other = (row_u, row_v) if len(row_u) < len(row_v) else (row_v, row_u)
            for k in small:
                if k != u and k != v and k in other:
                    return True
    return False


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def attribute_bias(g: Multigraph, x: Sequence, kind: str = "custom") -> BiasReport:
    """Friendship bias of an arbitrary vertex attribute.

    The bias of vertex ``i`` is the average attribute over its incident
    edge-ends minus its own attribute; vertices of degree zero contribute
    zero.  Exact rational arithmetic throughout.
    """
    if len(x) != g.n:
        raise GraphInputError(
            f"attribute vector has length {len(x)}, expected {g.n}"
        )
    vals = [_as_fraction(v) for v in x]
    per_vertex = []
    for i in range(g.n):
        d = g.degree(i)
        if d == 0:
            per_vertex.append(Fraction(0))
            continue
        s = Fraction(0)
        for j, m in g.neighbors(i):
            s += m * vals[j]
        per_vertex.append(s / d - vals[i])
    n = g.n
    average = sum(per_vertex, Fraction(0)) / n if n else Fraction(0)
    return BiasReport(tuple(per_vertex), average, kind)


def degree_bias(g: Multigraph) -> BiasReport:
    return attribute_bias(g, g.degrees(), kind="degree")


def wedge_bias(g: Multigraph) -> BiasReport:
    return attribute_bias(g, wedge_counts(g), kind="wedge")


def triangle_bias(g: Multigraph) -> BiasReport:
    return attribute_bias(g, triangle_counts(g), kind="triangle")


def total_attribute_bias(g: Multigraph, x: Sequence[int]) -> Fraction:
    """Sum over vertices of the attribute bias, for integer attributes.

    Same value as ``attribute_bias(g, x).total`` but computed over a common
    denominator, which is much faster on the small graphs the exhaustive
    sweeps grind through.
    """
    if len(x) != g.n:
        raise GraphInputError(
            f"attribute vector has length {len(x)}, expected {g.n}"
        )
    degs = g.degrees()
    lcm = 1
    for d in degs:
        if d:
            lcm = lcm * d // math.gcd(lcm, d)
    num = 0
    for i in range(g.n):
        d = degs[i]
        if d == 0:
            continue
        s = 0
        for j, m in g.neighbors(i):
            s += m * x[j]
        num += (s - d * x[i]) * (lcm // d)
    return Fraction(num, lcm)


def total_triangle_bias(g: Multigraph) -> Fraction:
    return total_attribute_bias(g, triangle_counts(g))


def random_neighbor_weights(g: Multigraph) -> tuple[Fraction, ...]:
    """Expected number of times each vertex is named when every vertex
    picks one of its edge-ends uniformly at random.

    ``weights[i]`` sums ``A_ij / d_j`` over neighbours ``j`` of positive
    degree.  For a graph without isolated vertices the weights sum to the
    number of vertices.
    """
    out = []
    for i in range(g.n):
        s = Fraction(0)
        for j, m in g.neighbors(i):
            dj = g.degree(j)
            if dj:
                s += Fraction(m, dj)
        out.append(s)
    return tuple(out)


def attribute_bias_covariance(g: Multigraph, x: Sequence) -> Fraction:
    """Average bias expressed as a covariance with the random-neighbour
    weights of a uniformly chosen vertex.

    Equals ``attribute_bias(g, x).average`` exactly on graphs without
    isolated vertices.
    """
    if len(x) != g.n:
        raise GraphInputError(
            f"attribute vector has length {len(x)}, expected {g.n}"
        )
    if g.n == 0:
        return Fraction(0)
    vals = [_as_fraction(v) for v in x]
    w = random_neighbor_weights(g)
    n = g.n
    mean_prod = sum((vals[i] * w[i] for i in range(n)), Fraction(0)) / n
    mean_x = sum(vals, Fraction(0)) / n
    mean_w = sum(w, Fraction(0)) / n
    return mean_prod - mean_x * mean_w


# -- edge-list text format ---------------------------------------------------
#
# One edge per line: "u v [multiplicity]" with 0-based integer ids; "u u"
# is one self-loop.  '#' starts a comment.  An optional header line
# "n <count>" fixes the vertex count (otherwise max id + 1 is used).


def parse_edge_list(text: str) -> Multigraph:
    n_declared = None
    edges: list[tuple[int, int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if n_declared is not None or edges:
                raise GraphInputError(
                    f"line {lineno}: header 'n <count>' must come first"
                )
            if len(parts) != 2:
                raise GraphInputError(f"line {lineno}: malformed header {line!r}")
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise GraphInputError(
                    f"line {lineno}: bad vertex count {parts[1]!r}"
                ) from None
            continue
        if len(parts) not in (2, 3):
            raise GraphInputError(f"line {lineno}: expected 'u v [mult]', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            mult = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer field in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphInputError(f"line {lineno}: negative vertex id in {line!r}")
        if mult < 0:
            raise GraphInputError(f"line {lineno}: negative multiplicity in {line!r}")
        max_id = max(max_id, u, v)
        edges.append((u, v, mult))
    n = n_declared if n_declared is not None else max_id + 1
    if max_id >= n:
        raise GraphInputError(
            f"vertex id {max_id} exceeds declared vertex count {n}"
        )
    return Multigraph(n, edges)


def format_edge_list(g: Multigraph) -> str:
    lines = [f"n {g.n}"]
    for u, v, m in g.edges():
        lines.append(f"{u} {v} {m}" if m != 1 else f"{u} {v}")
    return "\n".join(lines) + "\n"
