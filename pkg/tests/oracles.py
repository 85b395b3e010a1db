"""Independent brute-force oracles used to validate the library's routes.

Everything here is deliberately written along different algorithmic paths
than the package (degree filtering instead of cycle-basis spans, BFS
instead of union-find, Moebius inversion instead of pair iteration), so an
agreement is meaningful.
"""

from fractions import Fraction

from loopcurrents.graphs import Graph, edges_of_mask
from loopcurrents.measures import Dist


def degrees(g: Graph, mask: int) -> list[int]:
    deg = [0] * g.vertex_count
    for i in edges_of_mask(mask):
        u, v = g.edges[i]
        deg[u] += 1
        deg[v] += 1
    return deg


def brute_even_subgraphs(g: Graph) -> list[int]:
    """All subsets with every vertex degree even, by direct filtering."""
    out = []
    for mask in range(1 << g.edge_count):
        if all(d % 2 == 0 for d in degrees(g, mask)):
            out.append(mask)
    return out


def brute_even_subsets_of(g: Graph, omega: int) -> list[int]:
    out = []
    sub = omega
    while True:
        if all(d % 2 == 0 for d in degrees(g, sub)):
            out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & omega
    return out


def bfs_connected(g: Graph, mask: int, u: int, v: int) -> bool:
    adj: dict[int, set[int]] = {}
    for i in edges_of_mask(mask):
        a, b = g.edges[i]
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen = {u}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            for y in adj.get(w, ()):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return v in seen


def brute_cyclic_edges(g: Graph, omega: int) -> int:
    """An edge is cyclic iff it lies in some even subgraph of omega."""
    out = 0
    for sub in brute_even_subsets_of(g, omega):
        out |= sub
    return out


def brute_union(d1: Dist, d2: Dist) -> dict[int, Fraction]:
    """Union law via Moebius inversion of P(sample subset of S).

    P(union = w) = sum over S subset of w of (-1)^(|w|-|S|) F1(S) F2(S)
    where Fi(S) = P_i(sample subset of S).
    """
    n = d1.graph.edge_count
    p1 = d1.probabilities()
    p2 = d2.probabilities()

    def cumulative(p):
        out = {}
        for s in range(1 << n):
            out[s] = sum((w for m, w in p.items() if m & ~s == 0), Fraction(0))
        return out

    f1 = cumulative(p1)
    f2 = cumulative(p2)
    result = {}
    for w in range(1 << n):
        total = Fraction(0)
        sub = w
        while True:
            sign = -1 if (w ^ sub).bit_count() % 2 else 1
            total += sign * f1[sub] * f2[sub]
            if sub == 0:
                break
            sub = (sub - 1) & w
        if total:
            result[w] = total
    return result
