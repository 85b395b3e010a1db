"""Exact finitely-supported distributions over edge configurations.

A :class:`Dist` stores unnormalized weights together with the normalizer Z,
so quantities like "Z times the probability of an event" stay representable
as single exact rationals.  All constructors and combinators are exact; no
floating point enters this module.

The model constructors follow the union-coupling definitions:

* loop model: weight x^|g| on every even subgraph g;
* random cluster (q=2): loop union Bernoulli(x);
* single random current: loop union Bernoulli(p), p = 1 - sqrt(1-x^2),
  which is rational exactly when x = 2t/(1+t^2) for rational t;
* doubles: two independent copies of the base model, unioned, or
  equivalently the double loop model union Bernoulli at the doubled
  parameter (x^2 for currents, x(2-x) for clusters).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import (
    CapExceededError,
    GraphMismatchError,
    LoopCurrentsError,
    ParametrizationError,
)
from .graphs import (
    CYCLE_DIMENSION_CAP,
    EDGE_ENUMERATION_CAP,
    Graph,
    cycle_space_basis,
    even_subgraph_count,
    even_subgraphs,
    span_masks,
)
from .rationals import format_rational, parse_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Dist:
    """Exact distribution over edge masks: P(mask) = weights[mask] / z."""

    graph: Graph
    weights: dict[int, Fraction]
    z: Fraction

    def __post_init__(self):
        if self.z <= 0:
            raise LoopCurrentsError(f"normalizer Z={self.z} must be positive")

    @classmethod
    def from_weights(
        cls, graph: Graph, weights: dict[int, Fraction], z: Fraction | None = None
    ) -> "Dist":
        """Build a distribution, dropping zero weights and checking the mass.

        If ``z`` is given, the sum of weights must equal it exactly; this is
        how identities like "the weights of this construction add up to Z^2"
        get verified at construction time.
        """
        clean: dict[int, Fraction] = {}
        full = graph.full_mask
        total = ZERO
        for mask, w in weights.items():
            if mask & ~full:
                raise LoopCurrentsError(f"mask {hex(mask)} has bits outside the graph's edges")
            if w < 0:
                raise LoopCurrentsError(f"negative weight {w} at {hex(mask)}")
            if w:
                clean[mask] = w
                total += w
        if z is None:
            z = total
        elif total != z:
            raise LoopCurrentsError(f"weights sum to {total}, expected Z={z}")
        return cls(graph, clean, z)

    @property
    def support(self) -> Iterable[int]:
        return self.weights.keys()

    def weight(self, mask: int) -> Fraction:
        return self.weights.get(mask, ZERO)

    def prob_of_mask(self, mask: int) -> Fraction:
        return self.weights.get(mask, ZERO) / self.z

    def probabilities(self) -> dict[int, Fraction]:
        return {mask: w / self.z for mask, w in self.weights.items()}

    def normalized(self) -> "Dist":
        return Dist(self.graph, {m: w / self.z for m, w in self.weights.items()}, ONE)

    def same_law(self, other: "Dist") -> bool:
        """Exact equality as probability measures (Z conventions may differ)."""
        if self.graph.edges != other.graph.edges:
            return False
        if set(self.weights) != set(other.weights):
            return False
        return all(w / self.z == other.weights[m] / other.z for m, w in self.weights.items())

    def total_variation(self, other: "Dist") -> Fraction:
        masks = set(self.weights) | set(other.weights)
        return sum((abs(self.prob_of_mask(m) - other.prob_of_mask(m)) for m in masks), ZERO) / 2

    # serialization -----------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "z": format_rational(self.z),
            "weights": [
                [hex(mask), format_rational(w)] for mask, w in sorted(self.weights.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, graph: Graph, data: dict) -> "Dist":
        weights = {int(mask, 16): parse_rational(w) for mask, w in data["weights"]}
        return cls.from_weights(graph, weights, parse_rational(data["z"]))

    @classmethod
    def from_json(cls, graph: Graph, text: str) -> "Dist":
        return cls.from_json_dict(graph, json.loads(text))


def point_mass(graph: Graph, mask: int) -> Dist:
    return Dist.from_weights(graph, {mask: ONE})


# ---------------------------------------------------------------------------
# Parameters


@dataclass(frozen=True)
class CurrentParams:
    """Edge-weight parameter x, optionally with its Pythagorean generator t.

    With x = 2t/(1+t^2) for rational t in (0,1), sqrt(1-x^2) = (1-t^2)/(1+t^2)
    is rational, so the single-current Bernoulli parameter
    p = x^2/(1+sqrt(1-x^2)) = 1 - sqrt(1-x^2) is an exact rational.
    """

    x: Fraction
    t: Fraction | None = None

    def __post_init__(self):
        if not 0 <= self.x < 1:
            raise ParametrizationError(f"x={self.x} outside [0,1)")
        if self.t is not None:
            if not 0 <= self.t < 1:
                raise ParametrizationError(f"t={self.t} outside [0,1)")
            expected = 2 * self.t / (1 + self.t * self.t)
            if expected != self.x:
                raise ParametrizationError(f"t={self.t} generates x={expected}, not {self.x}")

    @classmethod
    def from_t(cls, t) -> "CurrentParams":
        t = Fraction(t)
        return cls(2 * t / (1 + t * t), t)

    @classmethod
    def from_x(cls, x) -> "CurrentParams":
        return cls(Fraction(x))

    @property
    def single_current_p(self) -> Fraction:
        """p = 1 - sqrt(1-x^2), exact; requires the Pythagorean form."""
        if self.t is None:
            raise ParametrizationError(
                "exact single-current p needs x = 2t/(1+t^2); construct via CurrentParams.from_t "
                "(certified interval evaluation is available for closed forms at generic x)"
            )
        tt = self.t * self.t
        return 2 * tt / (1 + tt)


# ---------------------------------------------------------------------------
# Basic constructors


def bernoulli(graph: Graph, p: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Independent edge percolation: weight p^|w| (1-p)^(|E|-|w|), Z = 1."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise LoopCurrentsError(f"p={p} outside [0,1]")
    n = graph.edge_count
    if p == 0:
        return point_mass(graph, 0)
    if p == 1:
        return point_mass(graph, graph.full_mask)
    if n > cap:
        raise CapExceededError("Bernoulli support", n, cap)
    by_count = [p**k * (1 - p) ** (n - k) for k in range(n + 1)]
    weights = {mask: by_count[mask.bit_count()] for mask in range(1 << n)}
    return Dist(graph, weights, ONE)


def loop_o1(graph: Graph, x: Fraction, cap: int = CYCLE_DIMENSION_CAP) -> Dist:
    """Loop model: weight x^|g| on every even subgraph g, Z = sum of weights."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise LoopCurrentsError(f"x={x} outside [0,1)")
    if x == 0:
        return point_mass(graph, 0)
    weights: dict[int, Fraction] = {}
    powers: dict[int, Fraction] = {}
    for g in even_subgraphs(graph, cap=cap):
        k = g.bit_count()
        if k not in powers:
            powers[k] = x**k
        weights[g] = powers[k]
    return Dist.from_weights(graph, weights)


# ---------------------------------------------------------------------------
# Union couplings


def union(d1: Dist, d2: Dist, renormalize: bool = False) -> Dist:
    """Distribution of the union of independent samples from d1 and d2.

    Iterates support pairs; the result has Z = Z1*Z2 unless ``renormalize``.
    """
    _require_same_graph(d1, d2)
    acc: dict[int, Fraction] = {}
    for m1, w1 in d1.weights.items():
        for m2, w2 in d2.weights.items():
            m = m1 | m2
            acc[m] = acc.get(m, ZERO) + w1 * w2
    out = Dist.from_weights(d1.graph, acc, d1.z * d2.z)
    return out.normalized() if renormalize else out


def union_bernoulli(d: Dist, p: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Union of d with independent Bernoulli(p) percolation.

    Same measure as ``union(d, bernoulli(graph, p))`` (asserted by tests) but
    computed with a subset-sum transform over the 2^|E| lattice, which keeps
    the doubled models usable inside exhaustive verification batteries:

        P(w) = (1-p)^(|E|-|w|) * sum_{A subset of w} d(A) p^(|w|-|A|)

    obtained by summing the Bernoulli layer over each residual w \\ A.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise LoopCurrentsError(f"p={p} outside [0,1]")
    if p == 0:
        return Dist(d.graph, dict(d.weights), d.z)
    if p == 1:
        return Dist(d.graph, {d.graph.full_mask: d.z}, d.z)
    n = d.graph.edge_count
    if n > cap:
        raise CapExceededError("Bernoulli union lattice", n, cap)

    size = 1 << n
    table: list[Fraction] = [ZERO] * size
    inv_p = 1 / p
    for mask, w in d.weights.items():
        table[mask] += w * inv_p ** mask.bit_count()
    # in-place subset-sum (zeta) transform
    for bit in range(n):
        step = 1 << bit
        for mask in range(size):
            if mask & step:
                low = table[mask ^ step]
                if low:
                    table[mask] += low
    q = 1 - p
    scale = [p**k * q ** (n - k) for k in range(n + 1)]
    weights = {
        mask: table[mask] * scale[mask.bit_count()] for mask in range(size) if table[mask]
    }
    return Dist.from_weights(d.graph, weights, d.z)


def random_cluster(graph: Graph, x: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """FK-Ising (q=2) random cluster model: loop union Bernoulli(x)."""
    x = Fraction(x)
    return union_bernoulli(loop_o1(graph, x), x, cap=cap)


def single_current(graph: Graph, params: CurrentParams, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Traced sourceless single random current: loop union Bernoulli(p(x))."""
    return union_bernoulli(loop_o1(graph, params.x), params.single_current_p, cap=cap)


def double_loop(graph: Graph, x: Fraction) -> Dist:
    """Union of two independent loop-model samples."""
    d = loop_o1(graph, Fraction(x))
    return union(d, d)


def double_current(graph: Graph, x: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Traced sourceless double random current: double loop union Bernoulli(x^2)."""
    x = Fraction(x)
    return union_bernoulli(double_loop(graph, x), x * x, cap=cap)


def double_cluster(graph: Graph, x: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Union of two independent random cluster samples: double loop union Bernoulli(x(2-x))."""
    x = Fraction(x)
    return union_bernoulli(double_loop(graph, x), x * (2 - x), cap=cap)


def double_current_lis(graph: Graph, x: Fraction, cap: int = EDGE_ENUMERATION_CAP) -> Dist:
    """Double random current built from its even-subgraph counting formula.

    For each configuration w:

        P(w) = |even(w)| / Z^2 * sum_{g even, g subset of w}
               x^|g| * x^(2|w \\ g|) * (1-x^2)^(|E|-|w|)

    This is an independent route to the same measure as
    :func:`double_current`; the two are compared exactly in tests.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise LoopCurrentsError(f"x={x} outside [0,1)")
    n = graph.edge_count
    if n > cap:
        raise CapExceededError("double-current lattice", n, cap)
    if x == 0:
        return point_mass(graph, 0)

    evens = list(even_subgraphs(graph))
    z = sum((x ** g.bit_count() for g in evens), ZERO)
    x2 = x * x
    one_minus = 1 - x2
    xpow = [x**k for k in range(n + 1)]
    x2pow = [x2**k for k in range(n + 1)]
    qpow = [one_minus**k for k in range(n + 1)]

    weights: dict[int, Fraction] = {}
    for mask in range(1 << n):
        inner = ZERO
        for g in evens:
            if g & ~mask:
                continue
            inner += xpow[g.bit_count()] * x2pow[(mask & ~g).bit_count()]
        if not inner:
            continue
        count = even_subgraph_count(graph, mask)
        weights[mask] = count * inner * qpow[n - mask.bit_count()]
    return Dist.from_weights(graph, weights, z * z)


def push_uniform_even(d: Dist, cap: int = CYCLE_DIMENSION_CAP) -> Dist:
    """Pick a configuration from d, then a uniform even subgraph of it.

    P_out(h) = sum over w containing h of P(w) / |even(w)|.
    """
    acc: dict[int, Fraction] = {}
    for mask, w in d.weights.items():
        basis = cycle_space_basis(d.graph, mask)
        if basis.dimension > cap:
            raise CapExceededError("even subgraphs of a support element", basis.dimension, cap)
        share = w / (1 << basis.dimension)
        for h in span_masks(basis.elements):
            acc[h] = acc.get(h, ZERO) + share
    return Dist.from_weights(d.graph, acc, d.z)


# ---------------------------------------------------------------------------
# Probabilities


def prob(d: Dist, event) -> Fraction:
    """Exact probability of an event (see events module) under d."""
    if event.graph.edges != d.graph.edges:
        raise GraphMismatchError("event and distribution live on different graphs")
    total = ZERO
    for mask, w in d.weights.items():
        if event.holds(mask):
            total += w
    return total / d.z


def expectation(d: Dist, value: Callable[[int], Fraction]) -> Fraction:
    total = ZERO
    for mask, w in d.weights.items():
        total += w * value(mask)
    return total / d.z


def _require_same_graph(d1: Dist, d2: Dist):
    if d1.graph.edges != d2.graph.edges or d1.graph.vertex_count != d2.graph.vertex_count:
        raise GraphMismatchError("distributions live on different graphs")
