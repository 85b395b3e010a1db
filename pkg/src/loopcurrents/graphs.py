"""Finite multigraphs, connectivity, cycle space and even-subgraph enumeration.

Edge subsets ("configurations") are plain integer bitmasks: bit ``i`` of a
mask refers to ``graph.edges[i]``.  Set algebra is ``& | ^``, cardinality is
``int.bit_count()``.  Edge indices are assigned in input order and never
reordered, so masks are stable identifiers for a given graph.

All types here are immutable values; they can be shared freely between
threads and used as dict keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CapExceededError, GraphStructureError

# Refuse full 2^|E| sweeps above this many edges.
EDGE_ENUMERATION_CAP = 24
# Refuse spanning the cycle space above this dimension.
CYCLE_DIMENSION_CAP = 20


@dataclass(frozen=True)
class Marks:
    """The two distinguished vertices used by connection events."""

    a: int
    b: int


@dataclass(frozen=True)
class Graph:
    """A finite multigraph. Parallel edges and self-loops are allowed."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    marks: Marks | None = None

    def __post_init__(self):
        for idx, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphStructureError(
                    f"edge {idx}=({u},{v}) has an endpoint outside 0..{self.vertex_count - 1}"
                )
        if self.marks is not None:
            for name, vtx in (("a", self.marks.a), ("b", self.marks.b)):
                if not 0 <= vtx < self.vertex_count:
                    raise GraphStructureError(f"mark {name}={vtx} is not a vertex")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.edges)) - 1

    def edge_mask(self, indices: Iterable[int]) -> int:
        mask = 0
        for i in indices:
            if not 0 <= i < len(self.edges):
                raise GraphStructureError(f"edge index {i} out of range")
            mask |= 1 << i
        return mask

    def to_json_dict(self) -> dict:
        out: dict = {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}
        if self.marks is not None:
            out["marks"] = {"a": self.marks.a, "b": self.marks.b}
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "Graph":
        marks = None
        if "marks" in data and data["marks"] is not None:
            marks = Marks(int(data["marks"]["a"]), int(data["marks"]["b"]))
        edges = tuple((int(u), int(v)) for u, v in data["edges"])
        return cls(int(data["vertices"]), edges, marks)


def graph_to_json(g: Graph) -> str:
    return json.dumps(g.to_json_dict())


def graph_from_json(text: str) -> Graph:
    return Graph.from_json_dict(json.loads(text))


def edges_of_mask(mask: int) -> Iterator[int]:
    """Yield the edge indices present in a bitmask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_hex(mask: int) -> str:
    return hex(mask)


def mask_from_hex(text: str) -> int:
    return int(text, 16)


# ---------------------------------------------------------------------------
# Construction helpers


def segment_edge_ranges(lengths: Iterable[int]) -> list[range]:
    """Edge-index ranges occupied by each segment of a generalized theta graph."""
    ranges = []
    start = 0
    for length in lengths:
        ranges.append(range(start, start + length))
        start += length
    return ranges


def generalized_theta(
    segment_lengths: Iterable[int], marked_segments: tuple[int, int] | None = None
) -> Graph:
    """Two hub vertices joined by internally disjoint paths of the given lengths.

    Hubs are vertices 0 and 1.  Edges are laid out segment by segment, each
    segment running hub 0 -> internal vertices -> hub 1, so
    :func:`segment_edge_ranges` recovers the edge indices of every path.

    If ``marked_segments=(i, j)`` is given, those two segments must have even
    length and the marks a, b are placed at their midpoints.
    """
    lengths = list(segment_lengths)
    if len(lengths) < 2:
        raise GraphStructureError("a generalized theta graph needs at least 2 segments")
    if any(l < 1 for l in lengths):
        raise GraphStructureError("segment lengths must be positive")

    edges: list[tuple[int, int]] = []
    next_vertex = 2
    midpoints: dict[int, int] = {}
    for seg, length in enumerate(lengths):
        prev = 0
        for step in range(length - 1):
            edges.append((prev, next_vertex))
            if step + 1 == length // 2 and length % 2 == 0:
                midpoints[seg] = next_vertex
            prev = next_vertex
            next_vertex += 1
        edges.append((prev, 1))

    marks = None
    if marked_segments is not None:
        i, j = marked_segments
        for seg in (i, j):
            if not 0 <= seg < len(lengths):
                raise GraphStructureError(f"marked segment {seg} does not exist")
            if lengths[seg] % 2 != 0:
                raise GraphStructureError(
                    f"marked segment {seg} has odd length {lengths[seg]}; midpoint marks need even length"
                )
        marks = Marks(midpoints[i], midpoints[j])
    return Graph(next_vertex, tuple(edges), marks)


def counter_family(n: int, m: int) -> Graph:
    """The four-path family used for monotonicity counterexamples.

    Paths of lengths (n, n, m, m); m must be even.  Marks a, b sit at the
    midpoints of the two m-paths.  Segment order: n-up, n-down, m-up, m-down.
    """
    return generalized_theta([n, n, m, m], marked_segments=(2, 3))


def complete_graph(n: int) -> Graph:
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# Connectivity


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(self, u: int, v: int) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[ru] = rv
        return True


def is_connected(g: Graph, mask: int, u: int, v: int) -> bool:
    """True iff u and v lie in the same component of the spanning subgraph (V, mask)."""
    if not (0 <= u < g.vertex_count and 0 <= v < g.vertex_count):
        raise GraphStructureError(f"vertex pair ({u},{v}) out of range")
    if u == v:
        return True
    dsu = _DSU(g.vertex_count)
    for i in edges_of_mask(mask):
        a, b = g.edges[i]
        dsu.union(a, b)
        if dsu.find(u) == dsu.find(v):
            return True
    return False


def component_count(g: Graph, mask: int) -> int:
    """Number of components of (V, mask), isolated vertices included."""
    dsu = _DSU(g.vertex_count)
    merges = 0
    for i in edges_of_mask(mask):
        u, v = g.edges[i]
        if dsu.union(u, v):
            merges += 1
    return g.vertex_count - merges


def component_labels(g: Graph, mask: int) -> tuple[int, ...]:
    """Per-vertex component representative of (V, mask).

    Two vertices are connected iff their labels agree; handy when many
    connection queries hit the same configuration.
    """
    dsu = _DSU(g.vertex_count)
    for i in edges_of_mask(mask):
        u, v = g.edges[i]
        dsu.union(u, v)
    return tuple(dsu.find(v) for v in range(g.vertex_count))


# ---------------------------------------------------------------------------
# Cycle space


@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a spanning forest, one per non-forest edge.

    The elements are independent under symmetric difference and span the
    cycle space, so XOR-combinations enumerate every even subgraph exactly
    once.
    """

    elements: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.elements)


def cycle_space_basis(g: Graph, mask: int | None = None) -> CycleBasis:
    """Cycle basis of the spanning subgraph (V, mask); the whole graph by default.

    Dimension is |mask| - |V| + #components.  Each element is an even mask:
    a non-forest edge plus the forest path between its endpoints.
    """
    if mask is None:
        mask = g.full_mask
    # BFS forest over the open edges; parent_edge[v] = edge index into v.
    adj: dict[int, list[tuple[int, int]]] = {}
    for i in edges_of_mask(mask):
        u, v = g.edges[i]
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))

    parent_edge = [-1] * g.vertex_count
    depth = [-1] * g.vertex_count
    tree_mask = 0
    for root in range(g.vertex_count):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        if root not in adj:
            continue
        queue = [root]
        while queue:
            u = queue.pop()
            for v, i in adj.get(u, ()):
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    parent_edge[v] = i
                    tree_mask |= 1 << i
                    queue.append(v)

    elements = []
    for i in edges_of_mask(mask & ~tree_mask):
        u, v = g.edges[i]
        cycle = 1 << i
        # climb to the common ancestor
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            e = parent_edge[u]
            cycle ^= 1 << e
            a, b = g.edges[e]
            u = b if a == u else a
        elements.append(cycle)
    return CycleBasis(tuple(elements))


def cycle_dimension(g: Graph, mask: int | None = None) -> int:
    if mask is None:
        mask = g.full_mask
    return mask.bit_count() - g.vertex_count + component_count(g, mask)


def even_subgraph_count(g: Graph, mask: int | None = None) -> int:
    """|even subgraphs of (V, mask)| = 2^(|mask| - |V| + #components)."""
    return 1 << cycle_dimension(g, mask)


def span_masks(elements: tuple[int, ...]) -> Iterator[int]:
    """All XOR-combinations of the given masks, in Gray-code order."""
    current = 0
    yield 0
    for i in range(1, 1 << len(elements)):
        current ^= elements[(i & -i).bit_length() - 1]
        yield current


def even_subgraphs(
    g: Graph, mask: int | None = None, cap: int = CYCLE_DIMENSION_CAP
) -> Iterator[int]:
    """Enumerate the even subgraphs of (V, mask) without duplicates."""
    basis = cycle_space_basis(g, mask)
    if basis.dimension > cap:
        raise CapExceededError("even-subgraph span", basis.dimension, cap)
    return span_masks(basis.elements)


# ---------------------------------------------------------------------------
# Cyclic (non-bridge) edges


def cyclic_edges(g: Graph, mask: int) -> int:
    """Edges of ``mask`` that lie on some cycle of (V, mask).

    These are exactly the non-bridges: e is cyclic iff its endpoints stay
    connected after removing it (self-loops and doubled parallel edges are
    always cyclic).
    """
    out = 0
    for i in edges_of_mask(mask):
        u, v = g.edges[i]
        if u == v or is_connected(g, mask ^ (1 << i), u, v):
            out |= 1 << i
    return out
