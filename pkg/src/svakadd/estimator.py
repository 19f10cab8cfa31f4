"""The k-additive surrogate estimator: weighted without-replacement
coalition sampling, forced inclusion of the empty and grand coalition,
one weighted least-squares fit, and extraction of the singleton slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import coalitions
from .games import Game
from .transform import InteractionBasis, InteractionVector
from .wls import SampleSet, SolverOptions, build_problem, shapley_kernel_weight, solve


@dataclass
class EstimatorConfig:
    k: int
    budget: int
    seed: int = 0
    solver: SolverOptions = field(default_factory=SolverOptions)
    return_interactions: bool = False


@dataclass
class EstimateResult:
    """Shapley estimates plus the bookkeeping the harness records."""

    estimates: np.ndarray
    evaluations: int
    underdetermined: bool = False
    interactions: InteractionVector | None = None


class StratumSampler:
    """Uniform without-replacement draws of fixed-size subsets of a universe.

    Draws are rejection-sampled against the already-drawn set; once more
    than half the stratum is drawn, the remaining members are enumerated
    and sampled directly so time near exhaustion stays bounded.
    """

    def __init__(self, universe: int, size: int, rng: np.random.Generator):
        self.positions = [j for j in range(universe.bit_length()) if universe >> j & 1]
        self.size = size
        self.total = coalitions.binomial(len(self.positions), size)
        self.drawn: set[int] = set()
        self._rng = rng

    @property
    def exhausted(self) -> bool:
        return len(self.drawn) >= self.total

    def draw(self) -> int:
        if self.exhausted:
            raise ValueError("stratum exhausted")
        if len(self.drawn) * 2 < self.total:
            while True:
                picked = self._rng.choice(len(self.positions), size=self.size, replace=False)
                mask = coalitions.mask_from_bits(self.positions[j] for j in picked)
                if mask not in self.drawn:
                    break
        else:
            remaining = [
                coalitions.mask_from_bits(bits)
                for bits in combinations(self.positions, self.size)
            ]
            remaining = [m for m in remaining if m not in self.drawn]
            mask = remaining[int(self._rng.integers(len(remaining)))]
        self.drawn.add(mask)
        return mask


def initial_distribution(n: int) -> np.ndarray:
    """Stratum probabilities: mass of size a is C(n, a) * w*_a, normalized.

    Entry ``a`` of the returned vector (length n + 1) is the probability
    that a draw lands in stratum a; entries 0 and n are zero because the
    empty and grand coalition are forced, never sampled.  Within a stratum
    every coalition is equally likely, so the per-coalition probability is
    the stratum mass divided by C(n, a).
    """
    if n < 2:
        raise ValueError("sampling distribution needs n >= 2")
    masses = np.zeros(n + 1)
    for a in range(1, n):
        masses[a] = coalitions.binomial(n, a) * shapley_kernel_weight(n, a)
    return masses / masses.sum()


class CoalitionSampler:
    """Without-replacement sampler over all proper coalitions.

    The initial per-coalition probability is proportional to the kernel
    weight w*_A; since that weight depends only on |A|, the draw is
    realized as stratum-proportional-to-remaining-mass followed by a
    uniform undrawn member, which is identical to zeroing the drawn
    coalition's probability and renormalizing.
    """

    def __init__(self, n: int, rng: np.random.Generator):
        if n < 2:
            raise ValueError("sampler needs n >= 2")
        self.n = n
        self._rng = rng
        full = coalitions.grand_coalition(n)
        self._strata = {a: StratumSampler(full, a, rng) for a in range(1, n)}
        self._weights = {a: shapley_kernel_weight(n, a) for a in range(1, n)}

    @property
    def remaining(self) -> int:
        return sum(s.total - len(s.drawn) for s in self._strata.values())

    def draw(self) -> int:
        sizes = [a for a, s in self._strata.items() if not s.exhausted]
        if not sizes:
            raise ValueError("sampling distribution exhausted")
        masses = np.array(
            [(self._strata[a].total - len(self._strata[a].drawn)) * self._weights[a]
             for a in sizes]
        )
        a = sizes[int(self._rng.choice(len(sizes), p=masses / masses.sum()))]
        return self._strata[a].draw()


def run_svakadd(game: Game, cfg: EstimatorConfig) -> EstimateResult:
    """One full estimator run: sample, evaluate, fit, extract.

    The empty and grand coalition are evaluated first and charged against
    the budget, then budget - 2 distinct proper coalitions are drawn.  The
    total number of distinct evaluations is exactly the budget.
    """
    n = game.n
    if not 1 <= cfg.k <= n:
        raise ValueError(f"degree k={cfg.k} out of range for n={n}")
    if not 2 <= cfg.budget <= (1 << n):
        raise ValueError(f"budget must lie in [2, 2^{n}], got {cfg.budget}")

    rng = np.random.default_rng(cfg.seed)
    sampler = CoalitionSampler(n, rng)
    masks = [0, coalitions.grand_coalition(n)]
    for _ in range(cfg.budget - 2):
        masks.append(sampler.draw())
    values = np.array([game.eval(m) for m in masks])

    basis = InteractionBasis.build(n, cfg.k)
    samples = SampleSet(n, masks, values)
    fit = solve(build_problem(samples, basis, cfg.solver), cfg.solver)
    return EstimateResult(
        estimates=fit.interactions.shapley(),
        evaluations=len(masks),
        underdetermined=fit.underdetermined,
        interactions=fit.interactions if cfg.return_interactions else None,
    )
