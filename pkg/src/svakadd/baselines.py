"""Competing estimators: permutation sampling, size-stratified sampling,
and the kernel-weighted least-squares method.

All three charge their budget in distinct coalition evaluations, exactly
like the surrogate estimator, so error-versus-budget comparisons are
like-for-like.  Revisiting an already-evaluated coalition is free.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import coalitions
from .estimator import EstimateResult, StratumSampler, initial_distribution
from .games import Game
from .transform import InteractionBasis
from .wls import SampleSet, SolverOptions, build_problem, solve


@dataclass
class BaselineConfig:
    method: str
    budget: int
    seed: int = 0
    solver: SolverOptions = field(default_factory=SolverOptions)
    kernelshap_with_replacement: bool = True

    _MINIMUMS = {"permutation": None, "stratified": 2, "kernelshap": None}

    def validate(self, n: int) -> None:
        if self.method not in self._MINIMUMS:
            raise ValueError(f"unknown baseline method {self.method!r}")
        minimum = {"permutation": n, "stratified": 2, "kernelshap": n + 3}[self.method]
        if self.budget < minimum:
            raise ValueError(
                f"{self.method} needs a budget of at least {minimum}, got {self.budget}"
            )
        if self.budget > (1 << n):
            raise ValueError(f"budget must not exceed 2^{n}, got {self.budget}")


def permutation_sampling(game: Game, cfg: BaselineConfig) -> EstimateResult:
    """Mean marginal contributions along uniformly random player orders.

    Each walk evaluates the prefix chain empty -> grand; a walk whose new
    distinct evaluations would overrun the budget is not started, so only
    complete walks contribute marginals.  Cached prefixes are free, which
    is how later walks get the empty set (and shared prefixes) at no cost.
    """
    n = game.n
    cfg.validate(n)
    rng = np.random.default_rng(cfg.seed)
    seen: set[int] = set()
    sums = np.zeros(n)
    counts = np.zeros(n, dtype=np.intp)

    while True:
        order = rng.permutation(n)
        prefixes = [0]
        for player in order:
            prefixes.append(prefixes[-1] | (1 << int(player)))
        new_needed = sum(1 for m in prefixes if m not in seen)
        if len(seen) + new_needed > cfg.budget:
            break
        if new_needed == 0 and len(seen) >= cfg.budget:
            break
        previous = game.eval(0)
        seen.add(0)
        for player, mask in zip(order, prefixes[1:]):
            value = game.eval(mask)
            seen.add(mask)
            sums[player] += value - previous
            counts[player] += 1
            previous = value

    estimates = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    return EstimateResult(estimates=estimates, evaluations=len(seen))


def stratified_sampling(game: Game, cfg: BaselineConfig) -> EstimateResult:
    """Per-player, per-size strata of marginal contributions.

    The budget is spread evenly by visiting all n*n strata once per round
    in seeded random order, drawing without replacement inside each
    stratum.  The run stops at the first draw whose evaluations would
    overrun the distinct-evaluation budget; a player's estimate averages
    its stratum means, with empty strata contributing zero.
    """
    n = game.n
    cfg.validate(n)
    rng = np.random.default_rng(cfg.seed)
    full = coalitions.grand_coalition(n)
    samplers: dict[tuple[int, int], StratumSampler] = {}
    sums = np.zeros((n, n))
    counts = np.zeros((n, n), dtype=np.intp)
    seen: set[int] = set()
    strata = [(i, s) for i in range(n) for s in range(n)]

    stopped = False
    while not stopped:
        active = []
        for key in strata:
            sampler = samplers.get(key)
            if sampler is None or not sampler.exhausted:
                active.append(key)
        if not active:
            break
        for idx in rng.permutation(len(active)):
            i, s = active[int(idx)]
            sampler = samplers.get((i, s))
            if sampler is None:
                sampler = StratumSampler(full & ~(1 << i), s, rng)
                samplers[(i, s)] = sampler
            if sampler.exhausted:
                continue
            without = sampler.draw()
            with_i = without | (1 << i)
            cost = (without not in seen) + (with_i not in seen)
            if len(seen) + cost > cfg.budget:
                stopped = True
                break
            base = game.eval(without)
            seen.add(without)
            joined = game.eval(with_i)
            seen.add(with_i)
            sums[i, s] += joined - base
            counts[i, s] += 1

    means = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    estimates = means.sum(axis=1) / n
    return EstimateResult(estimates=estimates, evaluations=len(seen))


def kernelshap(game: Game, cfg: BaselineConfig) -> EstimateResult:
    """Kernel-weighted linear fit over with-replacement coalition draws.

    Sizes are drawn proportionally to C(n, a) * w*_a and members uniformly
    within the size, then duplicates are folded into multiplicity-scaled
    row weights.  The fit reuses the degree-1 basis of the WLS engine with
    the efficiency constraint, so estimates always sum to nu(N) - nu(empty).
    """
    n = game.n
    cfg.validate(n)
    rng = np.random.default_rng(cfg.seed)
    full = coalitions.grand_coalition(n)
    probs = initial_distribution(n)

    draws: Counter[int] = Counter()
    order: list[int] = []
    for _ in range(cfg.budget - 2):
        a = int(rng.choice(n + 1, p=probs))
        picked = rng.choice(n, size=a, replace=False)
        mask = coalitions.mask_from_bits(int(j) for j in picked)
        if mask not in draws:
            order.append(mask)
        draws[mask] += 1

    masks = [0, full] + order
    values = np.array([game.eval(m) for m in masks])
    multiplicities = [1.0, 1.0] + [float(draws[m]) for m in order]

    basis = InteractionBasis.build(n, 1)
    samples = SampleSet(n, masks, values)
    problem = build_problem(samples, basis, cfg.solver, multiplicities=multiplicities)
    fit = solve(problem, cfg.solver)
    return EstimateResult(
        estimates=fit.interactions.shapley(),
        evaluations=len(masks),
        underdetermined=fit.underdetermined,
    )
