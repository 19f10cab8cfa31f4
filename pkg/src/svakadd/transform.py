"""The linear map between interaction indices and coalition payoffs.

The map is built from the Bernoulli-number sequence eta_r and the derived
coefficients gamma_r^s.  Truncating the interaction space at subsets of
size <= k gives the k-additive surrogate representation whose singleton
coefficients are Shapley estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from . import coalitions

MAX_BERNOULLI = 64


@lru_cache(maxsize=None)
def bernoulli_eta_fraction(r: int) -> Fraction:
    """eta_r as an exact rational: eta_0 = 1, then the standard recurrence

    eta_r = -sum_{l=0}^{r-1} eta_l / (r - l + 1) * C(r, l).
    """
    if r < 0:
        raise ValueError(f"eta index must be >= 0, got {r}")
    if r > MAX_BERNOULLI:
        raise ValueError(f"eta index capped at {MAX_BERNOULLI}, got {r}")
    if r == 0:
        return Fraction(1)
    total = Fraction(0)
    for l in range(r):
        total += bernoulli_eta_fraction(l) * coalitions.binomial(r, l) / (r - l + 1)
    return -total


def bernoulli_eta(r: int) -> float:
    """eta_r as a double."""
    return float(bernoulli_eta_fraction(r))


@lru_cache(maxsize=None)
def gamma_fraction(r: int, s: int) -> Fraction:
    """gamma_r^s = sum_{l=0}^{r} C(r, l) * eta_{s-l}, exact rational.

    ``r`` is the overlap |A & B| and ``s`` the subset size |B|; r <= s.
    """
    if not 0 <= r <= s:
        raise ValueError(f"gamma requires 0 <= r <= s, got r={r}, s={s}")
    total = Fraction(0)
    for l in range(r + 1):
        total += coalitions.binomial(r, l) * bernoulli_eta_fraction(s - l)
    return total


def gamma_coeff(r: int, s: int) -> float:
    """gamma_r^s as a double."""
    return float(gamma_fraction(r, s))


@lru_cache(maxsize=None)
def gamma_table(n: int) -> np.ndarray:
    """Dense (n+1) x (n+1) table of gamma_r^s doubles, entry [r, s].

    Entries with r > s are never read and are left at zero.
    """
    table = np.zeros((n + 1, n + 1))
    for s in range(n + 1):
        for r in range(s + 1):
            table[r, s] = gamma_coeff(r, s)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class InteractionBasis:
    """All subsets B with |B| <= k in size-major lexicographic order.

    The order is: the empty set, then singletons {1}..{n}, then pairs
    {1,2}, {1,3}, ..., and so on.  The singleton block is therefore the
    contiguous slice [1 : n+1], which is what makes Shapley extraction a
    plain slice of the solved coefficient vector.
    """

    n: int
    k: int
    subsets: tuple[int, ...]

    @classmethod
    def build(cls, n: int, k: int) -> "InteractionBasis":
        coalitions.check_player_count(n, override=True)
        if not 1 <= k <= n:
            raise ValueError(f"additivity degree must satisfy 1 <= k <= n, got k={k}")
        masks = []
        for size in range(k + 1):
            for bits in combinations(range(n), size):
                masks.append(coalitions.mask_from_bits(bits))
        return cls(n=n, k=k, subsets=tuple(masks))

    @property
    def dimension(self) -> int:
        return len(self.subsets)

    def subset_sizes(self) -> np.ndarray:
        return np.array([m.bit_count() for m in self.subsets], dtype=np.intp)

    def design_rows(self, masks: Sequence[int]) -> np.ndarray:
        """Design-matrix block: entry [A, B] = gamma_{|A & B|}^{|B|}."""
        gamma = gamma_table(self.n)
        basis = np.asarray(self.subsets, dtype=np.uint64)
        rows = np.asarray(list(masks), dtype=np.uint64).reshape(-1, 1)
        overlap = np.bitwise_count(rows & basis).astype(np.intp)
        sizes = np.bitwise_count(basis).astype(np.intp)
        return gamma[overlap, sizes]

    def labels(self) -> list[str]:
        """Serialization labels: "empty" or comma-joined 1-indexed players."""
        out = []
        for mask in self.subsets:
            if mask == 0:
                out.append("empty")
            else:
                out.append(",".join(str(p) for p in coalitions.players_of(mask)))
        return out


@dataclass
class InteractionVector:
    """Coefficients I^k(B) aligned with an InteractionBasis."""

    basis: InteractionBasis
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.basis.dimension,):
            raise ValueError(
                f"coefficient vector has length {self.coeffs.shape}, "
                f"basis dimension is {self.basis.dimension}"
            )

    def shapley(self) -> np.ndarray:
        """The singleton slice, in player order: the Shapley estimates."""
        return self.coeffs[1 : self.basis.n + 1].copy()

    def write_csv(self, stream: TextIO) -> None:
        for label, value in zip(self.basis.labels(), self.coeffs):
            stream.write(f"{label},{float(value)!r}\n")


def kadd_eval(interactions: InteractionVector, coalition: int) -> float:
    """Surrogate payoff: nu_k(A) = sum_B gamma_{|A & B|}^{|B|} I^k(B)."""
    coalitions.check_coalition(coalition, interactions.basis.n)
    row = interactions.basis.design_rows([coalition])[0]
    return float(row @ interactions.coeffs)


def kadd_eval_many(interactions: InteractionVector, masks: Sequence[int]) -> np.ndarray:
    """Vectorized ``kadd_eval`` over many coalitions."""
    rows = interactions.basis.design_rows(masks)
    return rows @ interactions.coeffs


def reconstruct_values(full_interactions: Mapping[int, float], n: int) -> np.ndarray:
    """Payoffs of the game whose interaction indices are given for all B.

    Returns the dense table nu(A) = sum_{B subseteq N} gamma_{|A & B|}^{|B|} I(B)
    indexed by coalition bit pattern.  Every one of the 2^n subsets must be
    present in the map.
    """
    coalitions.check_player_count(n)
    size = 1 << n
    if len(full_interactions) != size or any(
        m not in full_interactions for m in range(size)
    ):
        raise ValueError("incomplete interaction map: need every subset of N")
    basis = InteractionBasis.build(n, n)
    coeffs = np.array([full_interactions[m] for m in basis.subsets])
    values = np.empty(size)
    # Chunked so the (A, B) overlap block never exceeds a few million entries.
    chunk = max(1, (1 << 22) // size)
    for start in range(0, size, chunk):
        masks = range(start, min(start + chunk, size))
        values[start : start + len(masks)] = basis.design_rows(masks) @ coeffs
    return values


def efficiency_row(basis: InteractionBasis) -> np.ndarray:
    """Constraint-row entries gamma_{|B|}^{|B|} - gamma_0^{|B|} per subset.

    By the gamma table this is 0 for the empty set, 1 for singletons and 0
    for every larger subset, i.e. the constraint reads sum_i I_i = nu(N) - nu(0).
    """
    gamma = gamma_table(basis.n)
    sizes = basis.subset_sizes()
    return gamma[sizes, sizes] - gamma[np.zeros_like(sizes), sizes]
