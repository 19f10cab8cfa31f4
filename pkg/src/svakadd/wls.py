"""Design-matrix construction and the constrained weighted least-squares fit.

Two ways of honoring the efficiency constraint are provided: the penalty
trick (the empty and grand coalition rows enter the objective with a very
large weight) and exact elimination (those rows are removed and the
constraint system is enforced through a null-space reduction of the normal
equations).  The penalty route leaves ~1/penalty_weight of constraint
slack; elimination is exact to rounding and is what the acceptance suite
uses when it needs to separate constraint error from sampling error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import coalitions
from .transform import InteractionBasis, InteractionVector, efficiency_row


@dataclass
class SampleSet:
    """The ordered set of distinct evaluated coalitions and their payoffs."""

    n: int
    coalitions: list[int]
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if len(self.coalitions) != len(self.values):
            raise ValueError("coalitions and values must align")
        if len(set(self.coalitions)) != len(self.coalitions):
            raise ValueError("sample set contains duplicate coalitions")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample set contains non-finite values")
        for mask in self.coalitions:
            coalitions.check_coalition(mask, self.n)

    @property
    def size(self) -> int:
        return len(self.coalitions)

    @property
    def contains_empty_and_grand(self) -> bool:
        full = coalitions.grand_coalition(self.n)
        return 0 in self.coalitions and full in self.coalitions


@dataclass
class SolverOptions:
    constraint_mode: str = "penalty"
    penalty_weight: float = 1e6
    rank_tolerance: float = 1e-10
    regularization: float = 0.0

    def __post_init__(self) -> None:
        if self.constraint_mode not in ("penalty", "eliminate"):
            raise ValueError(f"unknown constraint mode {self.constraint_mode!r}")
        if self.penalty_weight <= 0:
            raise ValueError("penalty weight must be positive")
        if self.rank_tolerance < 0 or self.regularization < 0:
            raise ValueError("tolerances must be nonnegative")


@dataclass
class WlsProblem:
    """Weighted rows plus (in eliminate mode) exact equality constraints."""

    basis: InteractionBasis
    design: np.ndarray
    weights: np.ndarray
    targets: np.ndarray
    constraints: np.ndarray | None = None
    constraint_values: np.ndarray | None = None

    def __post_init__(self) -> None:
        t, d = self.design.shape
        if self.weights.shape != (t,) or self.targets.shape != (t,):
            raise ValueError("inconsistent problem dimensions")
        if np.any(self.weights <= 0):
            raise ValueError("row weights must be positive")
        if d != self.basis.dimension:
            raise ValueError("design width does not match basis dimension")


@dataclass
class FitResult:
    interactions: InteractionVector
    underdetermined: bool
    rank: int


def shapley_kernel_weight(n: int, a: int) -> float:
    """Per-coalition objective weight 1 / C(n-2, |A|-1) for proper coalitions.

    The empty and grand coalition are excluded here; they are handled by the
    penalty weight or by exact constraints instead.
    """
    if a <= 0 or a >= n:
        raise ValueError(f"kernel weight undefined for |A|={a} with n={n}")
    return 1.0 / coalitions.binomial(n - 2, a - 1)


def min_budget(basis: InteractionBasis) -> int:
    """Smallest sample count that admits a unique fit: the basis dimension."""
    return basis.dimension


def build_problem(
    samples: SampleSet,
    basis: InteractionBasis,
    opts: SolverOptions,
    multiplicities: Sequence[float] | None = None,
) -> WlsProblem:
    """Assemble design, weights and targets (plus constraints when eliminating).

    ``multiplicities`` scales individual row weights; with-replacement
    samplers use it to fold duplicate draws into a single weighted row.
    """
    if samples.n != basis.n:
        raise ValueError("sample set and basis disagree on player count")
    if not samples.contains_empty_and_grand:
        raise ValueError(
            "sample set must contain the empty and grand coalition "
            f"({opts.constraint_mode} mode needs their values)"
        )
    if samples.size < 2:
        raise ValueError("need at least two sampled coalitions")
    mult = np.ones(samples.size) if multiplicities is None else np.asarray(
        multiplicities, dtype=float
    )
    if mult.shape != (samples.size,) or np.any(mult <= 0):
        raise ValueError("multiplicities must be positive and align with samples")

    n = samples.n
    full = coalitions.grand_coalition(n)
    nu_empty = samples.values[samples.coalitions.index(0)]
    nu_full = samples.values[samples.coalitions.index(full)]

    if opts.constraint_mode == "penalty":
        design = basis.design_rows(samples.coalitions)
        weights = np.empty(samples.size)
        for row, mask in enumerate(samples.coalitions):
            if mask == 0 or mask == full:
                weights[row] = opts.penalty_weight
            else:
                weights[row] = shapley_kernel_weight(n, mask.bit_count()) * mult[row]
        return WlsProblem(basis, design, weights, samples.values.copy())

    keep = [i for i, m in enumerate(samples.coalitions) if m != 0 and m != full]
    proper = [samples.coalitions[i] for i in keep]
    design = basis.design_rows(proper) if proper else np.zeros((0, basis.dimension))
    weights = np.array(
        [shapley_kernel_weight(n, m.bit_count()) * mult[i] for i, m in zip(keep, proper)]
    )
    targets = samples.values[keep]
    # Efficiency plus the empty-coalition anchor pin both boundary payoffs.
    constraints = np.vstack([efficiency_row(basis), basis.design_rows([0])[0]])
    constraint_values = np.array([nu_full - nu_empty, nu_empty])
    return WlsProblem(basis, design, weights, targets, constraints, constraint_values)


def _spectral_solve(
    matrix: np.ndarray, rhs: np.ndarray, rel_tol: float
) -> tuple[np.ndarray, int]:
    """Solve a PSD system, falling back to the minimum-norm solution.

    Eigenvalues below ``rel_tol`` times the largest are treated as zero;
    the returned rank counts the ones kept.
    """
    if matrix.shape[0] == 0:
        return np.zeros(0), 0
    eigvals, eigvecs = np.linalg.eigh(matrix)
    top = eigvals[-1]
    cutoff = rel_tol * top if top > 0 else 0.0
    keep = eigvals > cutoff
    if not np.any(keep):
        return np.zeros(matrix.shape[0]), 0
    basis_kept = eigvecs[:, keep]
    solution = basis_kept @ ((basis_kept.T @ rhs) / eigvals[keep])
    return solution, int(np.count_nonzero(keep))


def solve(problem: WlsProblem, opts: SolverOptions) -> FitResult:
    """Weighted least-squares minimizer of the assembled problem.

    Rank-deficient systems do not fail: they yield the minimum-norm
    solution flagged as underdetermined so harness curves can start below
    the identifiability budget without crashing.
    """
    design, weights, targets = problem.design, problem.weights, problem.targets
    if not (
        np.all(np.isfinite(design))
        and np.all(np.isfinite(weights))
        and np.all(np.isfinite(targets))
    ):
        raise ValueError("non-finite problem inputs")
    d = problem.basis.dimension
    gram = (design * weights[:, None]).T @ design
    rhs = design.T @ (weights * targets)

    if problem.constraints is None:
        if opts.regularization > 0:
            gram = gram + opts.regularization * np.eye(d)
        coeffs, rank = _spectral_solve(gram, rhs, opts.rank_tolerance)
        return FitResult(
            InteractionVector(problem.basis, coeffs),
            underdetermined=rank < d,
            rank=rank,
        )

    cons, cons_vals = problem.constraints, problem.constraint_values
    # Null-space reduction: coeffs = particular + Z y with C @ particular = d
    # and C @ Z = 0; the reduced normal equations in y stay PSD.
    particular, *_ = np.linalg.lstsq(cons, cons_vals, rcond=None)
    _, svals, vt = np.linalg.svd(cons)
    cons_rank = int(np.count_nonzero(svals > svals[0] * 1e-12)) if len(svals) else 0
    null_basis = vt[cons_rank:].T
    reduced_gram = null_basis.T @ gram @ null_basis
    if opts.regularization > 0:
        reduced_gram = reduced_gram + opts.regularization * np.eye(reduced_gram.shape[0])
    reduced_rhs = null_basis.T @ (rhs - gram @ particular)
    y, rank = _spectral_solve(reduced_gram, reduced_rhs, opts.rank_tolerance)
    coeffs = particular + null_basis @ y
    free = d - cons_rank
    return FitResult(
        InteractionVector(problem.basis, coeffs),
        underdetermined=rank < free,
        rank=rank + cons_rank,
    )
