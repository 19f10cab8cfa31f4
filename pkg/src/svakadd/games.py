"""Concrete value functions: synthetic fixtures, dense tables, external
oracle processes, and the total-correlation game over tabular data.

Every game caches coalition values and counts distinct evaluations, which
is the budget currency of the whole toolkit: estimators pay once per
distinct coalition regardless of how often they revisit it.
"""

from __future__ import annotations

import math
import shlex
import subprocess
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import coalitions, transform


class GameEvalError(RuntimeError):
    """A value-function evaluation failed (oracle protocol, broken child)."""


class Game:
    """Base class: thread-safe cache plus distinct-evaluation counter."""

    def __init__(self, n: int, name: str, override_cap: bool = False):
        self.n = coalitions.check_player_count(n, override=override_cap)
        self.name = name
        self._cache: dict[int, float] = {}
        self._lock = threading.Lock()

    def eval(self, coalition: int) -> float:
        coalitions.check_coalition(coalition, self.n)
        with self._lock:
            if coalition in self._cache:
                return self._cache[coalition]
        value = float(self._evaluate(coalition))
        if not math.isfinite(value):
            raise GameEvalError(
                f"game {self.name!r} returned non-finite value {value} "
                f"for coalition {coalitions.to_bitstring(coalition, self.n)}"
            )
        with self._lock:
            if coalition not in self._cache:
                self._cache[coalition] = value
            return self._cache[coalition]

    @property
    def eval_count(self) -> int:
        """Distinct coalitions evaluated so far."""
        with self._lock:
            return len(self._cache)

    def _evaluate(self, coalition: int) -> float:
        raise NotImplementedError

    def close(self) -> None:  # oracle games override
        pass

    def __enter__(self) -> "Game":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name!r} n={self.n}>"


class SyntheticGame(Game):
    """Closed-form game defined by a python callable on bit patterns."""

    def __init__(self, n: int, fn: Callable[[int], float], name: str):
        super().__init__(n, name)
        self._fn = fn

    def _evaluate(self, coalition: int) -> float:
        return self._fn(coalition)


def make_additive(weights: Sequence[float]) -> SyntheticGame:
    """nu(A) = sum of per-player weights over A; Shapley value is exactly c."""
    c = [float(w) for w in weights]
    if not c:
        raise ValueError("additive game needs at least one weight")
    name = "additive:c=" + ",".join(repr(w) for w in c)

    def fn(mask: int) -> float:
        total = 0.0
        j = 0
        while mask:
            if mask & 1:
                total += c[j]
            mask >>= 1
            j += 1
        return total

    return SyntheticGame(len(c), fn, name)


def make_unanimity(n: int, members: int) -> SyntheticGame:
    """nu(A) = 1 iff the fixed coalition S is contained in A."""
    coalitions.check_coalition(members, n)
    if members == 0:
        raise ValueError("unanimity game needs a nonempty carrier coalition")
    label = ",".join(str(p) for p in coalitions.players_of(members))
    return SyntheticGame(
        n, lambda mask: 1.0 if mask & members == members else 0.0,
        f"unanimity:n={n},S={label}",
    )


def make_glove(n: int, left: int) -> SyntheticGame:
    """nu(A) = min(|A & left|, |A without left|): matched glove pairs."""
    coalitions.check_coalition(left, n)
    full = coalitions.grand_coalition(n)
    if left == 0 or left == full:
        raise ValueError("glove game needs a proper nonempty left-glove set")
    label = ",".join(str(p) for p in coalitions.players_of(left))
    return SyntheticGame(
        n,
        lambda mask: float(min((mask & left).bit_count(), (mask & ~left & full).bit_count())),
        f"glove:n={n},left={label}",
    )


class NormalizedGame(Game):
    """Wrapper with nu'(A) = nu(A) - nu(empty); nu'(empty) is exactly 0."""

    def __init__(self, inner: Game):
        super().__init__(inner.n, f"normalized({inner.name})", override_cap=True)
        self.inner = inner
        self.shift = inner.eval(0)

    def eval(self, coalition: int) -> float:
        if coalition == 0:
            return 0.0
        return self.inner.eval(coalition) - self.shift

    @property
    def eval_count(self) -> int:
        return self.inner.eval_count

    def _evaluate(self, coalition: int) -> float:  # pragma: no cover
        raise AssertionError("NormalizedGame delegates eval entirely")

    def close(self) -> None:
        self.inner.close()


def normalize(game: Game) -> NormalizedGame:
    return NormalizedGame(game)


class ValueTableGame(Game):
    """Dense table of all 2^n payoffs indexed by coalition bit pattern."""

    def __init__(self, n: int, values: np.ndarray, name: str = "table"):
        super().__init__(n, name)
        values = np.asarray(values, dtype=float)
        if values.shape != (1 << n,):
            raise ValueError(f"value table must have exactly 2^{n} entries")
        if not np.all(np.isfinite(values)):
            raise ValueError("value table contains non-finite entries")
        self.values = values

    def _evaluate(self, coalition: int) -> float:
        return float(self.values[coalition])


def random_value_table(n: int, seed: int, low: float = -1.0, high: float = 1.0) -> ValueTableGame:
    """Uniform random payoffs, the stock fixture for solver exactness tests."""
    rng = np.random.default_rng(seed)
    values = rng.uniform(low, high, size=1 << coalitions.check_player_count(n))
    return ValueTableGame(n, values, name=f"random:n={n},seed={seed}")


def random_kadditive_table(
    n: int, k: int, seed: int
) -> tuple[ValueTableGame, transform.InteractionVector]:
    """Random game whose interactions vanish above order k, plus its generator.

    Singleton coefficients of the returned interaction vector are the exact
    Shapley values of the game.
    """
    basis = transform.InteractionBasis.build(n, k)
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, size=basis.dimension)
    iv = transform.InteractionVector(basis, coeffs)
    values = transform.kadd_eval_many(iv, range(1 << n))
    return ValueTableGame(n, values, name=f"kadd:n={n},k={k},seed={seed}"), iv


def save_value_table(game: Game, path: str | Path) -> None:
    """Materialize any game to the table file format (evaluates all of it)."""
    n = game.n
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"n={n}\n")
        for mask in coalitions.enumerate_all(n):
            f.write(f"{coalitions.to_bitstring(mask, n)},{game.eval(mask)!r}\n")


def load_value_table(path: str | Path) -> ValueTableGame:
    """Parse the table file format.

    Line 1 is ``n=<int>``; then exactly 2^n lines ``<bitstring>,<value>``
    in any order; ``#``-prefixed lines are comments.
    """
    n = None
    values: np.ndarray | None = None
    filled: set[int] = set()
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if n is None:
                if not line.startswith("n="):
                    raise ValueError(f"{path}:{lineno}: expected 'n=<int>' header")
                n = coalitions.check_player_count(int(line[2:]))
                values = np.empty(1 << n)
                continue
            bits, sep, text = line.partition(",")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected '<bitstring>,<value>'")
            mask, width = coalitions.from_bitstring(bits)
            if width != n:
                raise ValueError(
                    f"{path}:{lineno}: bitstring length {width} inconsistent with n={n}"
                )
            if mask in filled:
                raise ValueError(f"{path}:{lineno}: duplicate coalition {bits}")
            value = float(text)
            if not math.isfinite(value):
                raise ValueError(f"{path}:{lineno}: non-finite value {text}")
            values[mask] = value
            filled.add(mask)
    if n is None:
        raise ValueError(f"{path}: empty table file")
    if len(filled) != 1 << n:
        raise ValueError(
            f"{path}: incomplete table, {len(filled)} of {1 << n} coalitions present"
        )
    return ValueTableGame(n, values, name=f"table:{path}")


class OracleGame(Game):
    """Game backed by a child process speaking the line protocol.

    One request is in flight at a time: the parent writes a coalition
    bitstring line, the child answers with one decimal real line.  Replies
    are cached, so repeat queries cost no child round-trip.
    """

    def __init__(self, n: int, command: Sequence[str], name: str | None = None):
        super().__init__(n, name or f"oracle:{' '.join(command)}")
        self.command = list(command)
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise GameEvalError(f"cannot spawn oracle {self.command!r}: {exc}") from exc
        self._proto_lock = threading.Lock()

    def _evaluate(self, coalition: int) -> float:
        query = coalitions.to_bitstring(coalition, self.n)
        with self._proto_lock:
            if self._proc.poll() is not None:
                raise GameEvalError(
                    f"oracle exited with code {self._proc.returncode} mid-session"
                )
            try:
                assert self._proc.stdin is not None and self._proc.stdout is not None
                self._proc.stdin.write(query + "\n")
                self._proc.stdin.flush()
                reply = self._proc.stdout.readline()
            except (BrokenPipeError, OSError) as exc:
                raise GameEvalError(f"oracle pipe failure: {exc}") from exc
            if reply == "":
                raise GameEvalError("oracle closed its output stream mid-session")
            try:
                return float(reply.strip())
            except ValueError as exc:
                raise GameEvalError(f"non-numeric oracle reply {reply.strip()!r}") from exc

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                if self._proc.stdin is not None:
                    self._proc.stdin.close()
                self._proc.wait(timeout=10)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
                self._proc.wait()
        if self._proc.returncode not in (0, None):
            raise GameEvalError(f"oracle exited with code {self._proc.returncode}")


def open_oracle(command: str | Sequence[str], n: int) -> OracleGame:
    """Spawn an oracle child; ``command`` may be a shell-style string."""
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    if not argv:
        raise ValueError("empty oracle command")
    return OracleGame(n, argv)


@dataclass(frozen=True)
class DataMatrix:
    """Discrete category codes, one row per datapoint, one column per feature."""

    codes: np.ndarray

    def __post_init__(self) -> None:
        if self.codes.ndim != 2 or self.codes.shape[0] < 1:
            raise ValueError("data matrix needs shape (m >= 1, n)")

    @property
    def rows(self) -> int:
        return self.codes.shape[0]

    @property
    def cols(self) -> int:
        return self.codes.shape[1]


def discretize(raw: np.ndarray, bins: int = 4) -> DataMatrix:
    """Per-column equal-width binning into ``bins`` categories.

    Columns with at most ``bins`` distinct values are kept as-is (recoded to
    dense category codes); constant columns collapse to a single category.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2:
        raise ValueError("expected a 2-D numeric table")
    if not np.all(np.isfinite(raw)):
        raise ValueError("non-numeric or non-finite cells in data table")
    codes = np.empty(raw.shape, dtype=np.int64)
    for j in range(raw.shape[1]):
        col = raw[:, j]
        uniq = np.unique(col)
        if len(uniq) <= bins:
            codes[:, j] = np.searchsorted(uniq, col)
            continue
        lo, hi = col.min(), col.max()
        edges = np.linspace(lo, hi, bins + 1)[1:-1]
        codes[:, j] = np.searchsorted(edges, col, side="left")
    return DataMatrix(codes)


def load_data_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """CSV ingestion: header row of feature names, then numeric cells."""
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = _csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric cell") from exc
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    return [h.strip() for h in header], data


def _entropy_of_columns(codes: np.ndarray, cols: Sequence[int], base: float | None) -> float:
    _, counts = np.unique(codes[:, list(cols)], axis=0, return_counts=True)
    m = codes.shape[0]
    h = math.log(m) - float(counts @ np.log(counts)) / m
    if base is not None:
        h /= math.log(base)
    return h


class TotalCorrelationGame(Game):
    """nu(S) = sum_{i in S} H(X_i) - H(X_S) with empirical Shannon entropies.

    Natural log by default; the base only rescales values.  Singletons are
    exactly zero because both terms run through the same entropy routine.
    """

    def __init__(self, data: DataMatrix, base: float | None = None, name: str = "totalcorr"):
        super().__init__(data.cols, name)
        self.data = data
        self.base = base
        self._single = [
            _entropy_of_columns(data.codes, [j], base) for j in range(data.cols)
        ]

    def _evaluate(self, coalition: int) -> float:
        if coalition == 0:
            return 0.0
        cols = [j for j in range(self.n) if coalition >> j & 1]
        joint = _entropy_of_columns(self.data.codes, cols, self.base)
        return sum(self._single[j] for j in cols) - joint


def total_correlation_game(data: DataMatrix, base: float | None = None) -> TotalCorrelationGame:
    return TotalCorrelationGame(data, base=base)
