"""Closed-form evaluators for the two generalized-theta families.

Two graph families drive every counterexample in this package:

* the three-path theta graph with segment lengths (n, m, l), used for the
  FKG counterexamples through the events "all edges of one n+m loop open";
* the four-path "counter" family with segment lengths (n, n, m, m), marks
  a and b at the midpoints of the two m-paths, used for the monotonicity
  counterexamples through the connection event {a <-> b}.

Every closed form here is also validated against an exhaustive-enumeration
oracle from the measures module on small instances; a disagreement would be
reported as a formula discrepancy rather than silently trusting either
side (see :func:`closed_form_discrepancies`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import GraphStructureError, ParametrizationError
from .events import all_open
from .graphs import Graph, counter_family, generalized_theta, is_connected, segment_edge_ranges
from .intervals import Interval, RoundedInterval, sqrt_interval
from .rationals import Polynomial, RationalFunction


@dataclass(frozen=True)
class CounterSpec:
    """Parameters (n, m) of the four-path family; m even so midpoints exist."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise GraphStructureError("segment lengths must be positive")
        if self.m % 2:
            raise GraphStructureError(f"m={self.m} must be even to place midpoint marks")

    @property
    def half_m(self) -> int:
        return self.m // 2

    def graph(self) -> Graph:
        return counter_family(self.n, self.m)


# ---------------------------------------------------------------------------
# Partition functions


def partition_polynomial(lengths) -> Polynomial:
    """Loop-model normalizer of a generalized theta graph.

    Even subgraphs are exactly the unions of an even number of full paths,
    so Z = sum over even-size path subsets S of x^(total length of S).
    """
    lengths = list(lengths)
    terms = []
    for k in range(0, len(lengths) + 1, 2):
        for subset in combinations(lengths, k):
            terms.append((sum(subset), Fraction(1)))
    return Polynomial(terms)


def theta_partition(n: int, m: int, l: int | None = None) -> Polynomial:
    """Z for the three-path theta graph; l defaults to n."""
    return partition_polynomial([n, m, n if l is None else l])


def counter_partition(n: int, m: int) -> Polynomial:
    """Z for the four-path family: 1 + x^2n + x^2m + 4x^(n+m) + x^(2n+2m)."""
    return partition_polynomial([n, n, m, m])


# ---------------------------------------------------------------------------
# Connection probabilities on the counter family


def loop_conn(n: int, m: int) -> RationalFunction:
    """Loop-model probability of {a <-> b}: (x^2m + x^(2m+2n)) / Z.

    Only the both-m-paths subgraph and the full subgraph connect the two
    midpoints.
    """
    CounterSpec(n, m)
    num = Polynomial.monomial(2 * m) + Polynomial.monomial(2 * m + 2 * n)
    return RationalFunction(num, counter_partition(n, m))


def double_loop_conn(n: int, m: int) -> RationalFunction:
    """Double-loop probability of {a <-> b} on the counter family.

    Numerator: 2x^2m Z - x^4m + 2x^(2n+2m) Z - x^(4n+4m) - 2x^(2n+4m)
    + 8x^(2n+2m), all over Z^2.
    """
    CounterSpec(n, m)
    z = counter_partition(n, m)
    mono = Polynomial.monomial
    num = (
        2 * mono(2 * m) * z
        - mono(4 * m)
        + 2 * mono(2 * n + 2 * m) * z
        - mono(4 * n + 4 * m)
        - 2 * mono(2 * n + 4 * m)
        + 8 * mono(2 * n + 2 * m)
    )
    return RationalFunction(num, z * z)


def single_current_conn_terms(n: int, m: int, x, p):
    """Single-current probability of {a <-> b}, generic over the scalar type.

    ``x`` weights the loop layer, ``p`` the percolation layer; both may be
    Fractions (Pythagorean mode) or certified intervals.  Conditioning on the
    loop-model configuration:

    * empty loop: a and b connect only through fully opened half-m segments;
      with at least three of the four open they connect, with exactly two
      they connect directly (two arrangements) or through an outer n-path
      (the other two arrangements);
    * both n-paths open: each midpoint needs one of its half-segments;
    * one n-path and one m-path open (4 ways): the marked midpoint of the
      closed m-path needs one of its half-segments;
    * both m-paths open, or everything open: connected outright.
    """
    spec = CounterSpec(n, m)
    h = spec.half_m
    reach = 2 * p**h - p ** (2 * h)  # one midpoint reaches a hub
    outer = 2 * p**n - p ** (2 * n)  # hubs joined by some outer path
    empty_case = (
        4 * p ** (3 * h) * (1 - p**h)
        + p ** (4 * h)
        + p ** (2 * h) * (1 - p**h) ** 2 * (2 + 2 * outer)
    )
    numerator = (
        empty_case
        + x ** (2 * n) * reach**2
        + x ** (2 * m)
        + 4 * x ** (n + m) * reach
        + x ** (2 * n + 2 * m)
    )
    z = counter_partition(n, m)(x)
    return numerator / z


def single_current_conn_exact(n: int, m: int, t: Fraction) -> Fraction:
    """Evaluate the single-current connection probability at x = 2t/(1+t^2)."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ParametrizationError(f"t={t} outside (0,1)")
    x = 2 * t / (1 + t * t)
    p = 2 * t * t / (1 + t * t)
    return single_current_conn_terms(n, m, x, p)


def single_current_conn_interval(n: int, m: int, x: Fraction, bits: int = 128) -> Interval:
    """Certified enclosure of the same probability at generic rational x.

    Evaluated in directed-rounding interval arithmetic at ``bits`` working
    precision (the sqrt is the only inexact input; rounding keeps the huge
    powers cheap).  The returned enclosure always contains the true value.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ParametrizationError(f"x={x} outside (0,1)")
    root = sqrt_interval(1 - x * x, bits)
    p = RoundedInterval.point(1, bits) - RoundedInterval.from_interval(root, bits)
    out = single_current_conn_terms(n, m, RoundedInterval.point(x, bits), p)
    return out.as_interval()


# ---------------------------------------------------------------------------
# FKG gap closed forms on the three-path theta graph (n = l)


def single_current_loop_event_weights(n: int, m: int, x, p):
    """Z-scaled single-current weights of the one-loop and both-loops events.

    Returns (Z*P(one n+m loop fully open), Z*P(both loops fully open)),
    generic over the scalar type.  Conditioning on the four loop-model
    configurations of the theta graph with segments (n, m, n):

        Z P(X) = p^(n+m) + x^(n+m) + x^(n+m) p^n + x^2n p^m
        Z P(both) = p^(2n+m) + 2 x^(n+m) p^n + x^2n p^m
    """
    single = p ** (n + m) + x ** (n + m) + x ** (n + m) * p**n + x ** (2 * n) * p**m
    both = p ** (2 * n + m) + 2 * x ** (n + m) * p**n + x ** (2 * n) * p**m
    return single, both


def single_current_fkg_gap(n: int, m: int, t: Fraction) -> Fraction:
    """Exact P(X1 and X2) - P(X1)P(X2) for the single current at Pythagorean t."""
    t = Fraction(t)
    x = 2 * t / (1 + t * t)
    p = 2 * t * t / (1 + t * t)
    z = theta_partition(n, m)(x)
    single, both = single_current_loop_event_weights(n, m, x, p)
    return both / z - (single / z) ** 2


def double_loop_event_polynomials(n: int, m: int) -> tuple[Polynomial, Polynomial]:
    """Z^2-scaled double-loop weights of the one-loop and both-loops events.

    Summing the pair table over the four even subgraphs of the theta graph:

        Z^2 P(X1) = 2x^(n+m) + 3x^(2(n+m)) + 4x^(3n+m)
        Z^2 P(X1 and X2) = 2x^(2(n+m)) + 4x^(3n+m)
    """
    mono = Polynomial.monomial
    one_loop = 2 * mono(n + m) + 3 * mono(2 * (n + m)) + 4 * mono(3 * n + m)
    both = 2 * mono(2 * (n + m)) + 4 * mono(3 * n + m)
    return one_loop, both


def double_loop_fkg_difference(n: int, m: int) -> Polynomial:
    """The polynomial (Z^2 P(X1))^2 - (Z^2 P(X1 and X2)) Z^2.

    Positive values certify an FKG violation for the double loop model
    (divide by Z^4 to recover P(X1)P(X2) - P(X1 and X2) Z^2, and Z >= 1).
    For n > m the trailing term is 2 x^(2n+2m); at n = m the x^(3n+m) and
    x^(2n+2m) terms collide and the difference is negative instead.
    """
    one_loop, both = double_loop_event_polynomials(n, m)
    z = theta_partition(n, m)
    return one_loop * one_loop - both * z * z


def double_loop_fkg_gap(n: int, m: int, x: Fraction) -> Fraction:
    """Exact P(X1 and X2) - P(X1)P(X2) for the double loop model."""
    x = Fraction(x)
    one_loop, both = double_loop_event_polynomials(n, m)
    z = theta_partition(n, m)(x)
    return both(x) / z**2 - (one_loop(x) / z**2) ** 2


def loop_fkg_gap(n: int, m: int, x: Fraction) -> Fraction:
    """Exact loop-model FKG gap for the two loop events: -(x^(n+m)/Z)^2.

    The two events are disjoint on even subgraphs (all three segments open
    has odd hub degree), so the gap is minus the product of the single-loop
    probabilities.
    """
    x = Fraction(x)
    z = theta_partition(n, m)(x)
    p1 = x ** (n + m) / z
    return -(p1 * p1)


# ---------------------------------------------------------------------------
# Cyclic-edge count formulas on the three-path theta graph (l, m, n)


def cyclic_count_cluster_form(l: int, m: int, n: int) -> RationalFunction:
    """Random-cluster probability that the cyclic part is the (l+m)-cycle.

    2 x^(l+m) (1 - x^n) / Z with Z = 1 + x^(n+l) + x^(n+m) + x^(l+m).
    """
    mono = Polynomial.monomial
    num = 2 * mono(l + m) * (Polynomial.constant(1) - mono(n))
    return RationalFunction(num, partition_polynomial([l, m, n]))


def cyclic_count_double_current_form(l: int, m: int, n: int) -> RationalFunction:
    """Double-current probability that the cyclic part is the (l+m)-cycle.

    (x^(2(l+m)) + 2x^(l+m) + x^(2(l+m))) (1 - x^2n) / Z^2.
    """
    mono = Polynomial.monomial
    z = partition_polynomial([l, m, n])
    num = (mono(2 * (l + m)) + 2 * mono(l + m) + mono(2 * (l + m))) * (
        Polynomial.constant(1) - mono(2 * n)
    )
    return RationalFunction(num, z * z)


def cyclic_count_ratio(l: int, m: int, n: int) -> RationalFunction:
    """Ratio of the two cyclic-count probabilities: Z / ((1+x^n)(1+x^(l+m))).

    Differs from 1 on (0,1), which separates the loop structure of the
    random cluster model from the double current even though single-edge
    cyclic probabilities agree.
    """
    mono = Polynomial.monomial
    z = partition_polynomial([l, m, n])
    num = z * 2 * mono(l + m)
    den = (Polynomial.constant(1) + mono(n)) * (2 * mono(l + m)) * (
        Polynomial.constant(1) + mono(l + m)
    )
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# Event helpers and mechanical tables


def theta_graph(n: int, m: int, l: int | None = None) -> Graph:
    return generalized_theta([n, m, n if l is None else l])


def theta_loop_events(n: int, m: int, l: int | None = None):
    """The two all-open loop events on the theta graph (segments n, m, l).

    The first loop uses segments 0 and 1 (lengths n, m), the second
    segments 1 and 2 (lengths m, l); they share the middle segment.
    """
    g = theta_graph(n, m, l)
    ranges = segment_edge_ranges([n, m, n if l is None else l])
    first = all_open(g, list(ranges[0]) + list(ranges[1]))
    second = all_open(g, list(ranges[1]) + list(ranges[2]))
    return g, first, second


_THETA_PATH_SUBSETS = ((), (0, 1), (1, 2), (0, 2))  # empty, first loop, second loop, outer
_COUNTER_PATH_SUBSETS = (
    (),
    (2, 3),  # both m-paths
    (0, 2),
    (0, 3),
    (1, 2),
    (1, 3),  # one n-path plus one m-path
    (0, 1),  # both n-paths
    (0, 1, 2, 3),
)

THETA_CONFIG_LABELS = ("empty", "loop(n+m) first", "loop(m+l) second", "loop(n+l) outer")
COUNTER_CONFIG_LABELS = (
    "empty",
    "2m",
    "n-up + m-up",
    "n-up + m-down",
    "n-down + m-up",
    "n-down + m-down",
    "2n",
    "2n + 2m",
)


def _path_subset_masks(lengths, subsets) -> list[int]:
    ranges = segment_edge_ranges(lengths)
    masks = []
    for subset in subsets:
        mask = 0
        for seg in subset:
            for e in ranges[seg]:
                mask |= 1 << e
        masks.append(mask)
    return masks


def theta_even_masks(n: int, m: int, l: int | None = None) -> list[int]:
    """The four even subgraphs of the theta graph, in canonical table order."""
    return _path_subset_masks([n, m, n if l is None else l], _THETA_PATH_SUBSETS)


def counter_even_masks(n: int, m: int) -> list[int]:
    """The eight even subgraphs of the counter family, in canonical table order."""
    return _path_subset_masks([n, n, m, m], _COUNTER_PATH_SUBSETS)


def counter_even_table(n: int, m: int) -> list[dict]:
    """The eight even subgraphs with edge counts, weights and connectivity.

    Regenerates the counterexample bookkeeping mechanically: each row holds
    the canonical label, the number of edges, the weight exponent (weight is
    x^edges) and whether the marks a, b are connected in the subgraph.
    """
    g = counter_family(n, m)
    rows = []
    for label, mask in zip(COUNTER_CONFIG_LABELS, counter_even_masks(n, m)):
        rows.append(
            {
                "label": label,
                "mask": mask,
                "edges": mask.bit_count(),
                "weight_exponent": mask.bit_count(),
                "connects_marks": is_connected(g, mask, g.marks.a, g.marks.b),
            }
        )
    return rows


def theta_pair_event_table(n: int, m: int, which: str) -> list[list[bool]]:
    """4x4 grid over ordered pairs of theta even subgraphs.

    ``which`` is "first" for the event that the first n+m loop is fully open
    in the union, or "both" for both loops (all segments) open.
    """
    g, first, second = theta_loop_events(n, m)
    masks = theta_even_masks(n, m)
    if which == "first":
        def cell(u): return first.holds(u)
    elif which == "both":
        def cell(u): return first.holds(u) and second.holds(u)
    else:
        raise ValueError("which must be 'first' or 'both'")
    return [[cell(a | b) for b in masks] for a in masks]


def counter_pair_connect_table(n: int, m: int) -> list[list[bool]]:
    """8x8 grid: is {a <-> b} satisfied in the union of each even-subgraph pair."""
    g = counter_family(n, m)
    masks = counter_even_masks(n, m)
    return [
        [is_connected(g, a | b, g.marks.a, g.marks.b) for b in masks] for a in masks
    ]


# ---------------------------------------------------------------------------
# Formula-vs-enumeration discrepancy reporting


def closed_form_discrepancies(n: int, m: int, t: Fraction, x: Fraction) -> list[dict]:
    """Compare every closed form against the exhaustive-enumeration oracle.

    Runs at enumeration scale (small n, m).  Returns one record per
    mismatch; an empty list certifies agreement at the sampled parameters.
    """
    from .events import connect, cyclic_count, statistic_dist
    from .measures import (
        CurrentParams,
        double_current,
        double_loop,
        loop_o1,
        prob,
        random_cluster,
        single_current,
    )

    out = []
    t = Fraction(t)
    x = Fraction(x)

    def record(name, formula, enumerated):
        if formula != enumerated:
            out.append(
                {"form": name, "formula": str(formula), "enumeration": str(enumerated)}
            )

    cg = counter_family(n, m)
    ab = connect(cg)
    record("loop_conn", loop_conn(n, m)(x), prob(loop_o1(cg, x), ab))
    record("double_loop_conn", double_loop_conn(n, m)(x), prob(double_loop(cg, x), ab))

    params = CurrentParams.from_t(t)
    record(
        "single_current_conn",
        single_current_conn_exact(n, m, t),
        prob(single_current(cg, params), ab),
    )

    tg, first, second = theta_loop_events(n, m)
    xp = params.x
    z = theta_partition(n, m)(xp)
    single_w, both_w = single_current_loop_event_weights(
        n, m, xp, params.single_current_p
    )
    sc = single_current(tg, params)
    record("single_current_loop_event", single_w / z, prob(sc, first))
    record("single_current_both_loops", both_w / z, prob(sc, intersect_all_open(first, second)))

    one_loop, both = double_loop_event_polynomials(n, m)
    dl = double_loop(tg, x)
    z2 = theta_partition(n, m)(x) ** 2
    record("double_loop_loop_event", one_loop(x) / z2, prob(dl, first))
    record("double_loop_both_loops", both(x) / z2, prob(dl, intersect_all_open(first, second)))

    # cyclic-count forms: the third segment length must differ from the
    # first two, otherwise several cycles share the size l+m and the
    # closed form (which counts only the (l,m)-cycle) undercounts.
    third = n + m + 1
    tg2 = generalized_theta([n, m, third])
    stat = cyclic_count(tg2)
    target = n + m
    dist_cluster = statistic_dist(random_cluster(tg2, x), stat)
    dist_double = statistic_dist(double_current(tg2, x), stat)
    record(
        "cyclic_count_cluster",
        cyclic_count_cluster_form(n, m, third)(x),
        dist_cluster.get(target, Fraction(0)),
    )
    record(
        "cyclic_count_double_current",
        cyclic_count_double_current_form(n, m, third)(x),
        dist_double.get(target, Fraction(0)),
    )
    return out


def intersect_all_open(first, second):
    """Intersection event of two all-open events (union of required masks)."""
    return all_open(first.graph, first.data[0] | second.data[0])
