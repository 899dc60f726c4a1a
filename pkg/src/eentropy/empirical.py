"""k-th order empirical entropy from context successor counts."""
from __future__ import annotations

from dataclasses import dataclass

from .core import EmptyString, OrderTooLarge, SymbolString, xlog2x_sum


@dataclass(frozen=True)
class CountTable:
    context: tuple[int, ...]
    successor_counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.successor_counts)

    def h0_bits(self) -> float:
        """Total (not per-symbol) zeroth order entropy of the successor string."""
        return xlog2x_sum(self.successor_counts, self.total)


@dataclass(frozen=True)
class ContextStats:
    k: int
    tables: dict[tuple[int, ...], CountTable]
    total_followed: int

    def __getitem__(self, context) -> CountTable:
        return self.tables[tuple(context)]


def context_stats(x: SymbolString, k: int) -> ContextStats:
    """Successor counts for every length-k context of ``x``.

    Each position i >= k contributes one (x[i-k:i], x[i]) pair, so a context
    that occurs only as the suffix of ``x`` has no successors and no table.
    For k = 0 there is a single table under the empty context.
    """
    if k < 0:
        raise ValueError("order must be non-negative")
    if k > x.n:
        raise OrderTooLarge(f"order {k} exceeds string length {x.n}")
    size = x.alphabet.size
    data = x.data
    raw: dict[tuple[int, ...], list[int]] = {}
    if k == 0:
        raw[()] = list(x.counts())
    else:
        for i in range(k, len(data)):
            ctx = data[i - k:i]
            row = raw.get(ctx)
            if row is None:
                row = raw[ctx] = [0] * size
            row[data[i]] += 1
    tables = {ctx: CountTable(ctx, tuple(row)) for ctx, row in raw.items()}
    return ContextStats(k, tables, sum(t.total for t in tables.values()))


def empirical_entropy_k(x: SymbolString, k: int) -> float:
    """H_k(x) in bits per symbol.

    Normalised by n, not by the number of followed positions; when no
    position is followed (k == n) the value is 0.
    """
    if x.n == 0:
        raise EmptyString("empirical entropy of the empty string is undefined")
    stats = context_stats(x, k)
    return sum(t.h0_bits() for t in stats.tables.values()) / x.n


def entropy_profile(x: SymbolString, k_max: int) -> list[tuple[int, float]]:
    if x.n == 0:
        raise EmptyString("empirical entropy of the empty string is undefined")
    if k_max > x.n:
        raise OrderTooLarge(f"order {k_max} exceeds string length {x.n}")
    return [(k, empirical_entropy_k(x, k)) for k in range(k_max + 1)]
