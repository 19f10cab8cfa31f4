"""Ground truth: exhaustive Shapley values, interaction indices, and MSE."""

from __future__ import annotations

import warnings
from fractions import Fraction
from math import factorial

import numpy as np

from . import coalitions
from .games import Game


def _check_exact_feasible(n: int, override: bool) -> None:
    coalitions.check_player_count(n, override=override)
    if n > coalitions.MAX_PLAYERS and not override:  # pragma: no cover
        raise ValueError(f"exact computation capped at n <= {coalitions.MAX_PLAYERS}")
    if n > coalitions.EXACT_WARN_PLAYERS:
        warnings.warn(
            f"exact sweep over 2^{n} coalitions; this will take a while",
            stacklevel=3,
        )


def exact_shapley(game: Game, override_cap: bool = False) -> np.ndarray:
    """Shapley values by a single pass over all 2^n coalitions.

    Each payoff nu(A) is scattered into every player's total with the
    closed-form coefficients 1/(n C(n-1, |A|-1)) when the player is in A
    and -1/(n C(n-1, |A|)) when it is not; this is the per-player marginal
    sum of the defining formula regrouped by coalition.
    """
    n = game.n
    _check_exact_feasible(n, override_cap)
    size = 1 << n
    values = np.empty(size)
    for mask in coalitions.enumerate_all(n):
        values[mask] = game.eval(mask)

    sizes = np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(np.intp)
    w_in = np.zeros(n + 1)
    w_out = np.zeros(n + 1)
    for a in range(1, n + 1):
        w_in[a] = 1.0 / (n * coalitions.binomial(n - 1, a - 1))
    for a in range(n):
        w_out[a] = 1.0 / (n * coalitions.binomial(n - 1, a))

    weighted_in = values * w_in[sizes]
    weighted_out = values * w_out[sizes]
    idx = np.arange(size, dtype=np.uint64)
    phi = np.empty(n)
    for i in range(n):
        member = (idx >> np.uint64(i)) & np.uint64(1) == 1
        phi[i] = weighted_in[member].sum() - weighted_out[~member].sum()
    return phi


def _interaction_weight(n: int, a: int, s: int) -> float:
    # (n - a - s)! a! / (n - s + 1)! as an exact rational, then a double.
    return float(Fraction(factorial(n - a - s) * factorial(a), factorial(n - s + 1)))


def _interaction(game: Game, subset: int) -> float:
    # Direct summation; also valid for subset == 0, where it yields the
    # intercept-like term that the payoff reconstruction identity needs.
    n = game.n
    s = subset.bit_count()
    complement = coalitions.grand_coalition(n) & ~subset
    weights = [_interaction_weight(n, a, s) for a in range(n - s + 1)]

    inner_terms = [(sub, -1.0 if (s - sub.bit_count()) % 2 else 1.0)
                   for sub in coalitions.subsets_of(subset)]
    total = 0.0
    for outer in coalitions.subsets_of(complement):
        inner = 0.0
        for sub, sign in inner_terms:
            inner += sign * game.eval(outer | sub)
        total += weights[outer.bit_count()] * inner
    return total


def exact_interaction(game: Game, subset: int, override_cap: bool = False) -> float:
    """Shapley interaction index of a nonempty subset, by direct summation.

    I(S) = sum_{A subseteq N \\ S} w_{|A|} sum_{A' subseteq S}
    (-1)^{|S| - |A'|} nu(A | A'), with w depending on |A| and |S| only.
    Singletons reduce to the Shapley value.
    """
    _check_exact_feasible(game.n, override_cap)
    coalitions.check_coalition(subset, game.n)
    if subset == 0:
        raise ValueError("interaction index requires a nonempty subset")
    return _interaction(game, subset)


def exact_interactions_all(game: Game, max_size: int | None = None) -> dict[int, float]:
    """Interaction indices of every subset up to ``max_size``, empty set included.

    With ``max_size=None`` the full 2^n map is computed, which is exactly
    what the payoff-reconstruction identity consumes.
    """
    n = game.n
    _check_exact_feasible(n, override=False)
    limit = n if max_size is None else max_size
    out: dict[int, float] = {}
    for s in range(limit + 1):
        for subset in coalitions.enumerate_size(n, s):
            out[subset] = _interaction(game, subset)
    return out


def mse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """Mean over players of the squared estimation error."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"length mismatch: {estimate.shape} vs {truth.shape}")
    diff = estimate - truth
    return float(diff @ diff) / len(truth)
