"""Coalition bit patterns and the combinatorics shared by every other module.

A coalition over ``n`` players is an ``int`` whose bit ``j`` encodes
membership of player ``j + 1``: players are 1-indexed everywhere a human
sees them (file formats, CLI output) and 0-indexed as bits internally.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Iterator

# 2^24 table entries is ~134 MB of float64; anything larger is not a
# desk-scale exhaustive game.
MAX_PLAYERS = 24
EXACT_WARN_PLAYERS = 20
MAX_BINOMIAL_N = 64


def check_player_count(n: int, override: bool = False) -> int:
    """Validate a player count, returning it unchanged.

    The default cap of ``MAX_PLAYERS`` can be lifted with ``override`` for
    callers that knowingly want huge coalitions (no dense table will fit).
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"player count must be an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"player count must be >= 1, got {n}")
    if n > MAX_PLAYERS and not override:
        raise ValueError(
            f"player count {n} exceeds the cap of {MAX_PLAYERS}; "
            "pass override=True (CLI: --force-n) to proceed anyway"
        )
    return n


def grand_coalition(n: int) -> int:
    """Bit pattern with the low ``n`` bits set: every player present."""
    check_player_count(n, override=True)
    return (1 << n) - 1


def coalition_size(coalition: int) -> int:
    """Number of players in the coalition (population count)."""
    return coalition.bit_count()


def check_coalition(coalition: int, n: int) -> int:
    """Validate that ``coalition`` only uses the low ``n`` bits."""
    if coalition < 0 or coalition >> n:
        raise ValueError(f"coalition {coalition:#b} is not valid for n={n}")
    return coalition


def enumerate_all(n: int) -> Iterator[int]:
    """Yield all 2^n coalitions in ascending integer order of the pattern."""
    check_player_count(n, override=True)
    return iter(range(1 << n))


def enumerate_size(n: int, s: int) -> Iterator[int]:
    """Yield the C(n, s) coalitions of exactly ``s`` players, each once."""
    check_player_count(n, override=True)
    if s < 0 or s > n:
        raise ValueError(f"coalition size {s} out of range for n={n}")
    return (mask_from_bits(bits) for bits in combinations(range(n), s))


def binomial(a: int, b: int) -> int:
    """Exact integer C(a, b); 0 when b < 0 or b > a.

    Arguments above ``MAX_BINOMIAL_N`` are rejected rather than silently
    returning astronomically large coefficients.
    """
    if a < 0:
        raise ValueError(f"binomial requires a >= 0, got a={a}")
    if a > MAX_BINOMIAL_N:
        raise ValueError(f"binomial capped at a <= {MAX_BINOMIAL_N}, got a={a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def mask_from_bits(bits: Iterable[int]) -> int:
    """Coalition from 0-indexed bit positions."""
    mask = 0
    for j in bits:
        mask |= 1 << j
    return mask


def mask_from_players(players: Iterable[int], n: int | None = None) -> int:
    """Coalition from 1-indexed player labels, optionally range-checked."""
    mask = 0
    for p in players:
        if p < 1 or (n is not None and p > n):
            raise ValueError(f"player label {p} out of range" + (f" 1..{n}" if n else ""))
        mask |= 1 << (p - 1)
    return mask


def players_of(coalition: int) -> tuple[int, ...]:
    """1-indexed player labels of a coalition, ascending."""
    out = []
    j = 0
    m = coalition
    while m:
        if m & 1:
            out.append(j + 1)
        m >>= 1
        j += 1
    return tuple(out)


def to_bitstring(coalition: int, n: int) -> str:
    """Text form: character ``j`` (left to right) is player ``j + 1``."""
    check_coalition(coalition, n)
    return "".join("1" if coalition >> j & 1 else "0" for j in range(n))


def from_bitstring(text: str) -> tuple[int, int]:
    """Parse the text form, returning ``(coalition, n)``; n is the length."""
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"not a coalition bitstring: {text!r}")
    mask = 0
    for j, ch in enumerate(text):
        if ch == "1":
            mask |= 1 << j
    return mask, len(text)


def subsets_of(mask: int) -> Iterator[int]:
    """Yield every subset of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
