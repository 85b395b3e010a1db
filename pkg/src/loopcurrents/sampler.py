"""Monte Carlo samplers for graphs beyond enumeration scale.

Samplers are statistical cross-check tools only: certification always goes
through the exact modules.  The RNG is Philox (counter-based, splittable),
so streams are reproducible from (seed, config) and worker seeds can be
derived without correlation.  Acceptance ratios use double precision; the
exact stationary law is established separately via the exact transition
matrix (see :func:`loop_chain_transition_matrix`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import CapExceededError, LoopCurrentsError
from .graphs import CYCLE_DIMENSION_CAP, Graph, cycle_space_basis, span_masks
from .measures import CurrentParams, Dist, loop_o1

RNG_ALGORITHM = "philox4x64"


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    sweeps: int
    burn_in: int = 0

    def __post_init__(self):
        if self.sweeps < 0 or self.burn_in < 0:
            raise LoopCurrentsError("sweeps and burn_in must be non-negative")


def make_rng(seed: int, worker: int = 0) -> np.random.Generator:
    """Philox generator; distinct workers get independent derived streams."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(worker,))
    return np.random.Generator(np.random.Philox(seq))


# ---------------------------------------------------------------------------
# Loop model


def sample_loop_exact(g: Graph, x: Fraction, rng: np.random.Generator) -> int:
    """Draw one even subgraph by inverse CDF over the full span (dim <= cap)."""
    d = loop_o1(g, x)
    masks = sorted(d.weights)
    probs = np.array([float(d.weights[m] / d.z) for m in masks])
    idx = int(rng.choice(len(masks), p=probs / probs.sum()))
    return masks[idx]


def loop_chain(
    g: Graph, x: Fraction, cfg: SamplerConfig, samples: int, thin: int = 1
) -> Iterator[int]:
    """Single-cycle-flip Glauber chain over even subgraphs.

    One sweep proposes ``dim`` basis-cycle toggles; a toggle from w to
    w ^ c is accepted with min(1, x^(|w^c| - |w|)).  The chain state is
    always even, and the basis spans the cycle space so it is irreducible.
    Yields ``samples`` states, ``thin`` sweeps apart, after burn-in.
    """
    basis = cycle_space_basis(g)
    if basis.dimension > CYCLE_DIMENSION_CAP:
        raise CapExceededError("cycle basis", basis.dimension, CYCLE_DIMENSION_CAP)
    if basis.dimension == 0:
        for _ in range(samples):
            yield 0
        return
    xf = float(x)
    rng = make_rng(cfg.seed)
    elements = basis.elements
    dim = len(elements)
    state = 0

    def sweep_batch(n_sweeps: int):
        nonlocal state
        total = n_sweeps * dim
        picks = rng.integers(0, dim, size=total)
        coins = rng.random(total)
        for i in range(total):
            cyc = elements[picks[i]]
            new = state ^ cyc
            delta = new.bit_count() - state.bit_count()
            if delta <= 0 or coins[i] < xf**delta:
                state = new

    sweep_batch(cfg.burn_in)
    for _ in range(samples):
        sweep_batch(thin)
        yield state


def sample_loop_mcmc(g: Graph, x: Fraction, cfg: SamplerConfig) -> int:
    """Final state of the cycle-flip chain after burn-in plus sweeps."""
    last = 0
    for last in loop_chain(g, x, cfg, samples=1, thin=cfg.sweeps):
        pass
    return last


def loop_chain_transition_matrix(g: Graph, x: Fraction):
    """Exact one-proposal transition matrix of the cycle-flip chain.

    Returns (states, T) with T[i][j] a Fraction.  Used to verify detailed
    balance against the stationary weights x^|state| symbolically.
    """
    basis = cycle_space_basis(g)
    states = sorted(span_masks(basis.elements))
    index = {s: i for i, s in enumerate(states)}
    dim = max(len(basis.elements), 1)
    x = Fraction(x)
    size = len(states)
    T = [[Fraction(0)] * size for _ in range(size)]
    for s in states:
        i = index[s]
        stay = Fraction(0)
        for c in basis.elements:
            new = s ^ c
            delta = new.bit_count() - s.bit_count()
            accept = min(Fraction(1), x**delta) if delta > 0 else Fraction(1)
            T[i][index[new]] += Fraction(1, dim) * accept
            stay += Fraction(1, dim) * (1 - accept)
        T[i][i] += stay
    return states, T


# ---------------------------------------------------------------------------
# Coupled models

COUPLED_MODELS = (
    "loop",
    "double_loop",
    "random_cluster",
    "single_current",
    "double_current",
    "double_cluster",
    "uniform_even_of_double_current",
)


def _bernoulli_mask(g: Graph, p: float, rng: np.random.Generator) -> int:
    mask = 0
    coins = rng.random(g.edge_count)
    for i in range(g.edge_count):
        if coins[i] < p:
            mask |= 1 << i
    return mask


def _uniform_even_of(g: Graph, mask: int, rng: np.random.Generator) -> int:
    """Uniform even subgraph of (V, mask): random XOR of its cycle basis."""
    basis = cycle_space_basis(g, mask)
    out = 0
    if basis.dimension:
        bits = rng.integers(0, 2, size=basis.dimension)
        for i, c in enumerate(basis.elements):
            if bits[i]:
                out ^= c
    return out


def sample_coupled(
    model: str,
    g: Graph,
    x: Fraction,
    rng: np.random.Generator,
    params: CurrentParams | None = None,
) -> int:
    """One draw from a union-coupled model via its definition.

    Loop layers are drawn exactly (inverse CDF over the span); Bernoulli
    layers use the double-precision parameter.  The pushforward model draws
    a double current and then a uniform even subgraph of it.
    """
    x = Fraction(x)
    if model == "loop":
        return sample_loop_exact(g, x, rng)
    if model == "double_loop":
        return sample_loop_exact(g, x, rng) | sample_loop_exact(g, x, rng)
    if model == "random_cluster":
        return sample_loop_exact(g, x, rng) | _bernoulli_mask(g, float(x), rng)
    if model == "single_current":
        if params is None or params.t is None:
            raise LoopCurrentsError("single_current sampling needs Pythagorean params")
        p = float(params.single_current_p)
        return sample_loop_exact(g, x, rng) | _bernoulli_mask(g, p, rng)
    if model == "double_current":
        double = sample_loop_exact(g, x, rng) | sample_loop_exact(g, x, rng)
        return double | _bernoulli_mask(g, float(x) ** 2, rng)
    if model == "double_cluster":
        double = sample_loop_exact(g, x, rng) | sample_loop_exact(g, x, rng)
        return double | _bernoulli_mask(g, float(x * (2 - x)), rng)
    if model == "uniform_even_of_double_current":
        omega = sample_coupled("double_current", g, x, rng)
        return _uniform_even_of(g, omega, rng)
    raise LoopCurrentsError(f"unknown model tag {model!r}; choose from {COUPLED_MODELS}")


def sample_stream(
    model: str,
    g: Graph,
    x: Fraction,
    cfg: SamplerConfig,
    count: int,
    params: CurrentParams | None = None,
) -> list[int]:
    rng = make_rng(cfg.seed)
    return [sample_coupled(model, g, x, rng, params) for _ in range(count)]


# ---------------------------------------------------------------------------
# Goodness of fit and dump format


def empirical_counts(masks: Iterable[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for m in masks:
        counts[m] = counts.get(m, 0) + 1
    return counts


def chi_square_statistic(counts: dict[int, int], dist: Dist) -> tuple[float, int]:
    """Pearson chi-square of observed counts against the exact distribution.

    Outcomes outside the exact support are a hard failure (probability 0).
    Returns (statistic, degrees of freedom).
    """
    n = sum(counts.values())
    for mask in counts:
        if mask not in dist.weights:
            raise LoopCurrentsError(
                f"sampled configuration {hex(mask)} has probability zero under the exact law"
            )
    stat = 0.0
    for mask, w in dist.weights.items():
        expected = float(w / dist.z) * n
        observed = counts.get(mask, 0)
        stat += (observed - expected) ** 2 / expected
    return stat, len(dist.weights) - 1


def write_sample_dump(path, model: str, g: Graph, x: Fraction, cfg: SamplerConfig, masks):
    """One hex bitmask per line with a header recording seed and config."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# model={model} rng={RNG_ALGORITHM} seed={cfg.seed}\n")
        fh.write(f"# sweeps={cfg.sweeps} burn_in={cfg.burn_in} x={x} edges={g.edge_count}\n")
        for m in masks:
            fh.write(hex(m) + "\n")
