"""Partially completed star-graphs: construction, closed-form triangle
bias, gluing, and exhaustive enumeration.

A partially completed star-graph has a hub (vertex 0) joined to every
vertex of a ring, plus a proper nonempty subset of the ring edges.  It is
described by the number of tadpoles (ring vertices with no ring edge),
the number of isolated triangles, and the widths of the bands of adjacent
triangles.  The whole module works in exact rational arithmetic.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import GraphInputError
from .graphs import Multigraph, total_triangle_bias, triangle_counts

__all__ = [
    "PartialStarSpec",
    "build_partial_star",
    "partial_star_bias",
    "merge_at",
    "glue_partial_stars",
    "GlueBreakdown",
    "glue_breakdown",
    "iter_partial_stars",
    "low_bias_catalogue",
    "vertex_orbit_representatives",
    "glue_vertex_by_role",
]


@dataclass(frozen=True)
class PartialStarSpec:
    """Symbolic description: tadpole count, isolated-triangle count, and
    the multiset of band widths (each width >= 2, stored sorted
    descending).

    A width-1 "band" is the same thing as an isolated triangle and is
    normalised into ``isolated`` with a warning.
    """

    tadpoles: int
    isolated: int
    bands: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tadpoles < 0 or self.isolated < 0:
            raise GraphInputError("tadpole and isolated-triangle counts must be >= 0")
        bands = []
        isolated = self.isolated
        for w in self.bands:
            if w < 1:
                raise GraphInputError(f"band width must be >= 1, got {w}")
            if w == 1:
                warnings.warn(
                    "band of width 1 normalised to an isolated triangle",
                    stacklevel=3,
                )
                isolated += 1
            else:
                bands.append(int(w))
        object.__setattr__(self, "bands", tuple(sorted(bands, reverse=True)))
        object.__setattr__(self, "isolated", isolated)
        if self.triangles < 1:
            raise GraphInputError("a partially completed star-graph needs a triangle")

    @property
    def triangles(self) -> int:
        return self.isolated + sum(self.bands)

    @property
    def ring_size(self) -> int:
        """Number of non-hub vertices."""
        return self.tadpoles + 2 * self.isolated + sum(w + 1 for w in self.bands)

    @property
    def total_vertices(self) -> int:
        return self.ring_size + 1

    @classmethod
    def parse(cls, text: str) -> "PartialStarSpec":
        """Parse the CLI syntax ``pcs:t=<int>,iso=<int>,bands=<k1>+<k2>+...``."""
        body = text.strip()
        if body.startswith("pcs:"):
            body = body[len("pcs:"):]
        fields = {"t": 0, "iso": 0, "bands": ()}
        if body:
            for part in body.split(","):
                if "=" not in part:
                    raise GraphInputError(f"bad spec field {part!r} in {text!r}")
                key, value = part.split("=", 1)
                key = key.strip()
                value = value.strip()
                if key in ("t", "iso"):
                    if not re.fullmatch(r"\d+", value):
                        raise GraphInputError(f"bad integer {value!r} in {text!r}")
                    fields[key] = int(value)
                elif key == "bands":
                    if not re.fullmatch(r"\d+(\+\d+)*", value):
                        raise GraphInputError(f"bad band list {value!r} in {text!r}")
                    fields["bands"] = tuple(int(v) for v in value.split("+"))
                else:
                    raise GraphInputError(f"unknown spec field {key!r} in {text!r}")
        return cls(fields["t"], fields["iso"], fields["bands"])

    def __str__(self):
        parts = [f"t={self.tadpoles}", f"iso={self.isolated}"]
        if self.bands:
            parts.append("bands=" + "+".join(str(w) for w in self.bands))
        return "pcs:" + ",".join(parts)


def _structures(spec: PartialStarSpec, order: str) -> list[tuple[str, int]]:
    bands = [("band", w) for w in spec.bands]
    isos = [("iso", 0)] * spec.isolated
    tads = [("tad", 0)] * spec.tadpoles
    if order == "bands_first":
        return bands + isos + tads
    if order == "tadpoles_first":
        return tads + isos + bands[::-1]
    raise GraphInputError(f"unknown layout order {order!r}")


def build_partial_star(spec: PartialStarSpec, order: str = "bands_first") -> Multigraph:
    """Realise a spec as a concrete graph with the hub at vertex 0.

    Structures are laid out consecutively along the ring; between two
    structures (and across the ring's wrap-around) no ring edge is placed,
    so the ring edge set is always a proper subset.  The bias depends only
    on the spec, not on the layout; ``order`` exists to let tests check
    precisely that.
    """
    n = spec.ring_size
    edges = [(0, i) for i in range(1, n + 1)]
    pos = 1
    for kind, width in _structures(spec, order):
        if kind == "band":
            for j in range(width):
                edges.append((pos + j, pos + j + 1))
            pos += width + 1
        elif kind == "iso":
            edges.append((pos, pos + 1))
            pos += 2
        else:
            pos += 1
    return Multigraph(n + 1, edges)


def partial_star_bias(spec: PartialStarSpec) -> tuple[Fraction, Fraction]:
    """Closed-form (total, average) triangle bias of a spec.

    The total is the hub's bias plus a per-structure contribution: each
    band of width w contributes k(w+2)/3 - 2w/3, each isolated triangle
    k - 1, and each tadpole k, where k is the total triangle count.
    """
    k = spec.triangles
    n = spec.ring_size
    total = Fraction(2 * k, n) - k
    for w in spec.bands:
        total += Fraction(k * (w + 2), 3) - Fraction(2 * w, 3)
    total += spec.isolated * (k - 1)
    total += spec.tadpoles * k
    return total, total / (n + 1)


def merge_at(ga: Multigraph, va: int, gb: Multigraph, vb: int) -> Multigraph:
    """Merge two graphs by identifying one vertex of each.

    Vertices of ``ga`` keep their labels; ``vb`` becomes ``va`` and the
    remaining vertices of ``gb`` are appended in order.  Edge multisets
    are united (multiplicities add).
    """
    if not (0 <= va < ga.n and 0 <= vb < gb.n):
        raise GraphInputError("merge vertex out of range")
    relabel = {}
    nxt = ga.n
    for v in range(gb.n):
        if v == vb:
            relabel[v] = va
        else:
            relabel[v] = nxt
            nxt += 1
    edges = list(ga.edges())
    for u, v, m in gb.edges():
        edges.append((relabel[u], relabel[v], m))
    return Multigraph(ga.n + gb.n - 1, edges)


def glue_partial_stars(ga: Multigraph, va: int, gb: Multigraph, vb: int) -> Multigraph:
    """Glue two built star-graphs at non-hub vertices.

    The hub is vertex 0 in graphs produced by :func:`build_partial_star`;
    gluing at a hub is rejected because the bias guarantee only covers
    non-hub gluings.
    """
    if va == 0 or vb == 0:
        raise GraphInputError("gluing at the hub vertex is not allowed")
    return merge_at(ga, va, gb, vb)


@dataclass(frozen=True)
class GlueBreakdown:
    """Exact decomposition of the glued graph's total triangle bias.

    ``total_after`` is the sum of the old totals and three local terms:
    the gain at the two hubs, the (non-positive) term from the hubs'
    triangle counts entering the merged vertex's larger degree, and the
    remaining change at the merged vertex and its ring neighbours.
    """

    total_before_a: Fraction
    total_before_b: Fraction
    center_term: Fraction
    hub_term: Fraction
    local_term: Fraction
    total_after: Fraction
    contacts_a: int
    contacts_b: int
    contact_triangles_a: tuple[int, ...]
    contact_triangles_b: tuple[int, ...]


def _glue_site(spec: PartialStarSpec, v: int) -> tuple[int, tuple[int, ...]]:
    """Ring-neighbour count of ``v`` and their triangle counts, from the
    canonical layout."""
    g = build_partial_star(spec)
    if not (1 <= v <= spec.ring_size):
        raise GraphInputError(f"vertex {v} is not a non-hub vertex of {spec}")
    t = triangle_counts(g)
    ring_neighbors = sorted(j for j, _ in g.neighbors(v) if j != 0 and j != v)
    return len(ring_neighbors), tuple(t[j] for j in ring_neighbors)


def glue_breakdown(
    spec_a: PartialStarSpec, va: int, spec_b: PartialStarSpec, vb: int
) -> GlueBreakdown:
    if va == 0 or vb == 0:
        raise GraphInputError("gluing at the hub vertex is not allowed")
    c1, tri_a = _glue_site(spec_a, va)
    c2, tri_b = _glue_site(spec_b, vb)
    n1, n2 = spec_a.ring_size, spec_b.ring_size
    k1, k2 = spec_a.triangles, spec_b.triangles
    ob1 = partial_star_bias(spec_a)[0]
    ob2 = partial_star_bias(spec_b)[0]

    a1 = tri_a[0] if c1 >= 1 else 0
    a2 = tri_a[1] if c1 == 2 else 0
    b1 = tri_b[0] if c2 >= 1 else 0
    b2 = tri_b[1] if c2 == 2 else 0

    center = Fraction(c2, n1) + Fraction(c1, n2)
    denom = c1 + c2 + 2
    hub = -(
        Fraction(k1 * (c2 + 1), (c1 + 1) * denom)
        + Fraction(k2 * (c1 + 1), (c2 + 1) * denom)
    )
    local = Fraction(0)
    if c1 >= 1:
        local += Fraction(c2, a1 + 1) - Fraction(a1 * (c2 + 1), (c1 + 1) * denom)
    if c1 == 2:
        local += Fraction(c2, a2 + 1) - Fraction(a2 * (c2 + 1), (c1 + 1) * denom)
    if c2 >= 1:
        local += Fraction(c1, b1 + 1) - Fraction(b1 * (c1 + 1), (c2 + 1) * denom)
    if c2 == 2:
        local += Fraction(c1, b2 + 1) - Fraction(b2 * (c1 + 1), (c2 + 1) * denom)

    return GlueBreakdown(
        total_before_a=ob1,
        total_before_b=ob2,
        center_term=center,
        hub_term=hub,
        local_term=local,
        total_after=ob1 + ob2 + center + hub + local,
        contacts_a=c1,
        contacts_b=c2,
        contact_triangles_a=tri_a,
        contact_triangles_b=tri_b,
    )


def iter_partial_stars(max_total_vertices: int) -> Iterator[PartialStarSpec]:
    """Every spec with at most ``max_total_vertices`` vertices, once each.

    Band multisets are canonical (sorted descending), so no spec repeats.
    Specs come out grouped by total vertex count, smallest first.
    """
    if max_total_vertices < 3:
        raise GraphInputError("max_total_vertices must be at least 3")
    budget = max_total_vertices - 1  # ring vertices available

    def band_multisets(limit: int, max_width: int):
        # non-increasing widths >= 2; a width-w band occupies w+1 ring vertices
        yield ()
        for w in range(min(max_width, limit - 1), 1, -1):
            for rest in band_multisets(limit - (w + 1), w):
                yield (w,) + rest

    found = []
    for bands in band_multisets(budget, budget):
        used = sum(w + 1 for w in bands)
        for iso in range((budget - used) // 2 + 1):
            for tad in range(budget - used - 2 * iso + 1):
                if iso + sum(bands) >= 1:
                    found.append(PartialStarSpec(tad, iso, bands))
    found.sort(key=lambda s: (s.total_vertices, s.tadpoles, s.isolated, s.bands))
    yield from found


def low_bias_catalogue(
    max_total_vertices: int,
) -> list[tuple[PartialStarSpec, Fraction]]:
    """All enumerated specs whose total bias is strictly below 3/2."""
    out = []
    for spec in iter_partial_stars(max_total_vertices):
        total, _ = partial_star_bias(spec)
        if total < Fraction(3, 2):
            out.append((spec, total))
    return out


def vertex_orbit_representatives(spec: PartialStarSpec) -> list[tuple[int, int]]:
    """Non-hub vertices up to the layout's structural symmetries.

    Returns ``(vertex_id, orbit_size)`` pairs covering every non-hub
    vertex exactly once across orbits: tadpoles are interchangeable,
    the two vertices of an isolated triangle (and isolated triangles
    among themselves) are interchangeable, and every band maps onto any
    band of the same width directly or mirrored.  Orbit sizes sum to the
    ring size, and any bias-like quantity of a glued graph is constant
    on an orbit because the identifications are graph automorphisms.
    """
    reps: list[tuple[int, int]] = []
    pos = 1
    seen_widths: set[int] = set()
    width_count = {w: spec.bands.count(w) for w in set(spec.bands)}
    for kind, width in _structures(spec, "bands_first"):
        if kind == "band":
            if width not in seen_widths:
                seen_widths.add(width)
                for off in range(0, width // 2 + 1):
                    size = width_count[width] * (1 if 2 * off == width else 2)
                    reps.append((pos + off, size))
            pos += width + 1
        elif kind == "iso":
            pos += 2
        else:
            pos += 1
    if spec.isolated:
        first_iso = 1 + sum(w + 1 for w in spec.bands)
        reps.append((first_iso, 2 * spec.isolated))
    if spec.tadpoles:
        first_tad = 1 + sum(w + 1 for w in spec.bands) + 2 * spec.isolated
        reps.append((first_tad, spec.tadpoles))
    return reps


def glue_vertex_by_role(spec: PartialStarSpec, selector: str) -> int:
    """Resolve a CLI vertex selector to a vertex id in the canonical layout.

    Selectors: ``end`` (band end), ``mid`` (band interior), ``tadpole``,
    ``iso`` (isolated-triangle vertex); an optional ``:<index>`` picks the
    i-th such vertex in layout order (default 0).
    """
    m = re.fullmatch(r"(end|mid|tadpole|iso)(?::(\d+))?", selector.strip())
    if not m:
        raise GraphInputError(f"bad glue-vertex selector {selector!r}")
    role, idx_text = m.group(1), m.group(2)
    idx = int(idx_text) if idx_text else 0
    candidates = []
    pos = 1
    for kind, width in _structures(spec, "bands_first"):
        if kind == "band":
            if role == "end":
                candidates.extend([pos, pos + width])
            elif role == "mid":
                candidates.extend(range(pos + 1, pos + width))
            pos += width + 1
        elif kind == "iso":
            if role == "iso":
                candidates.extend([pos, pos + 1])
            pos += 2
        else:
            if role == "tadpole":
                candidates.append(pos)
            pos += 1
    if idx >= len(candidates):
        raise GraphInputError(
            f"{spec} has {len(candidates)} vertices of role {role!r}, "
            f"index {idx} out of range"
        )
    return candidates[idx]
