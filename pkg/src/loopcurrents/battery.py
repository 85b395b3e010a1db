"""Standard graph batteries and parameter sets for verification runs.

The random members are generated from a fixed seed so the battery is the
same in every run and in every report.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .graphs import Graph, complete_graph, counter_family, generalized_theta

STANDARD_X = (
    Fraction(1, 10),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(9, 10),
)

# Pythagorean generators for exact single-current work: t=1/2 -> x=4/5,
# t=1/3 -> x=3/5, t=1/4 -> x=8/17, t=1/10 -> x=20/101.
STANDARD_T = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))

RANDOM_BATTERY_SEED = 20220919
RANDOM_BATTERY_SIZE = 20


def k5_minus_edge() -> Graph:
    k5 = complete_graph(5)
    return Graph(5, k5.edges[:-1])


def random_multigraph(rng: random.Random, max_edges: int = 10) -> Graph:
    """A random loopless multigraph with at most ``max_edges`` edges."""
    vertices = rng.randint(4, 7)
    edge_count = rng.randint(5, max_edges)
    edges = []
    for _ in range(edge_count):
        u = rng.randrange(vertices)
        v = rng.randrange(vertices)
        while v == u:
            v = rng.randrange(vertices)
        edges.append((min(u, v), max(u, v)))
    return Graph(vertices, tuple(edges))


def verification_battery(extra: list[tuple[str, Graph]] | None = None) -> list[tuple[str, Graph]]:
    """Named graphs for the exact identity suites: small families plus
    complete graphs plus seeded random multigraphs with at most 10 edges."""
    battery: list[tuple[str, Graph]] = [
        ("theta[1,1,1]", generalized_theta([1, 1, 1])),
        ("theta[2,3,2]", generalized_theta([2, 3, 2])),
        ("counter(2,2)", counter_family(2, 2)),
        ("K4", complete_graph(4)),
        ("K5-e", k5_minus_edge()),
    ]
    rng = random.Random(RANDOM_BATTERY_SEED)
    for i in range(RANDOM_BATTERY_SIZE):
        battery.append((f"random-{i:02d}", random_multigraph(rng)))
    if extra:
        battery.extend(extra)
    return battery


def scan_battery() -> list[tuple[str, Graph]]:
    """Small graphs (|E| <= 8) for the domination-scan columns."""
    return [
        ("theta[1,1,1]", generalized_theta([1, 1, 1])),
        ("theta[1,2,2]", generalized_theta([1, 2, 2])),
        ("K4", complete_graph(4)),
        ("counter(2,2)", counter_family(2, 2)),
    ]
