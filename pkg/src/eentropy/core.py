"""Alphabets, symbol strings and the small helpers shared by every module.

All information quantities in this package are measured in bits.
"""
from __future__ import annotations

import math
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field


class EntropyToolkitError(Exception):
    """Base class for all errors raised by the package."""


class UnknownSymbol(EntropyToolkitError, ValueError):
    def __init__(self, position: int, symbol):
        self.position = position
        self.symbol = symbol
        super().__init__(f"symbol {symbol!r} at position {position} is not in the alphabet")


class EmptyString(EntropyToolkitError, ValueError):
    pass


class OrderTooLarge(EntropyToolkitError, ValueError):
    pass


class LengthMismatch(EntropyToolkitError, ValueError):
    pass


class AlphabetMismatch(EntropyToolkitError, ValueError):
    pass


class _Separator:
    """Sentinel token used to join two strings into a pair representation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SEP"

    def __reduce__(self):
        return (_Separator, ())


SEPARATOR = _Separator()


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of distinct symbols.

    Symbols are opaque hashable tokens; for byte input they are the
    integer byte values 0..255.
    """

    symbols: tuple[Hashable, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("an alphabet needs at least one symbol")
        index = {s: i for i, s in enumerate(symbols)}
        if len(index) != len(symbols):
            raise ValueError("alphabet symbols must be pairwise distinct")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def index(self, symbol) -> int:
        return self._index[symbol]

    @property
    def bits_per_symbol(self) -> int:
        """Width of a fixed-length literal code for one symbol."""
        return ceil_log2(self.size)

    def is_bytes(self) -> bool:
        return all(isinstance(s, int) and 0 <= s < 256 for s in self.symbols)

    def with_separator(self) -> Alphabet:
        if SEPARATOR in self._index:
            return self
        return Alphabet(self.symbols + (SEPARATOR,))

    def union(self, other: Alphabet) -> Alphabet:
        extra = tuple(s for s in other.symbols if s not in self._index)
        return Alphabet(self.symbols + extra) if extra else self


@dataclass(frozen=True)
class SymbolString:
    """A finite string over an alphabet, stored as a tuple of symbol indices."""

    alphabet: Alphabet
    data: tuple[int, ...]

    def __post_init__(self):
        data = tuple(int(i) for i in self.data)
        size = self.alphabet.size
        for pos, i in enumerate(data):
            if not 0 <= i < size:
                raise UnknownSymbol(pos, i)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return len(self.data)

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SymbolString(self.alphabet, self.data[item])
        return self.data[item]

    def symbols(self) -> list:
        return [self.alphabet.symbols[i] for i in self.data]

    def to_bytes(self) -> bytes:
        """Render back to bytes; only valid for byte alphabets."""
        return bytes(self.symbols())

    def counts(self) -> list[int]:
        out = [0] * self.alphabet.size
        for i in self.data:
            out[i] += 1
        return out

    def concat(self, *others: SymbolString) -> SymbolString:
        data = list(self.data)
        for other in others:
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch("cannot concatenate strings over different alphabets")
            data.extend(other.data)
        return SymbolString(self.alphabet, tuple(data))

    def over(self, alphabet: Alphabet) -> SymbolString:
        """Re-express this string over a larger alphabet containing its symbols."""
        if alphabet == self.alphabet:
            return self
        mapping = [alphabet.index(s) for s in self.alphabet.symbols]
        return SymbolString(alphabet, tuple(mapping[i] for i in self.data))

    def __repr__(self) -> str:
        if self.alphabet.is_bytes() and self.n <= 40:
            return f"SymbolString({self.to_bytes()!r}, |Σ|={self.alphabet.size})"
        return f"SymbolString(n={self.n}, |Σ|={self.alphabet.size})"


def parse_string(raw: bytes | str, alphabet: Alphabet) -> SymbolString:
    """Map raw bytes to alphabet indices.

    Raises UnknownSymbol(position, byte) for the first byte outside the
    alphabet.
    """
    if isinstance(raw, str):
        raw = raw.encode("latin-1")
    data = []
    for pos, b in enumerate(raw):
        try:
            data.append(alphabet.index(b))
        except KeyError:
            raise UnknownSymbol(pos, bytes([b])) from None
    return SymbolString(alphabet, tuple(data))


PLACEHOLDER_SYMBOL = 0


def infer_alphabet(*raws: bytes | str) -> Alphabet:
    """Distinct bytes in first-occurrence order across all inputs.

    Empty input yields the one-symbol placeholder alphabet ``(0,)``.
    """
    seen: dict[int, None] = {}
    for raw in raws:
        if isinstance(raw, str):
            raw = raw.encode("latin-1")
        for b in raw:
            seen.setdefault(b, None)
    if not seen:
        return Alphabet((PLACEHOLDER_SYMBOL,))
    return Alphabet(tuple(seen))


def from_text(text: bytes | str, alphabet: Alphabet | None = None) -> SymbolString:
    """Convenience: parse with a given alphabet, or infer one from the text."""
    if alphabet is None:
        alphabet = infer_alphabet(text)
    return parse_string(text, alphabet)


def ceil_log2(m: int) -> int:
    """Smallest b with 2**b >= m (0 for m <= 1)."""
    if m <= 1:
        return 0
    return (m - 1).bit_length()


def count_width(n: int) -> int:
    """Bits for a count in 0..n."""
    return ceil_log2(n + 1)


def elias_gamma_length(m: int) -> int:
    if m < 1:
        raise ValueError("Elias gamma codes positive integers only")
    return 2 * (m.bit_length() - 1) + 1


def xlog2x_sum(counts: Iterable[int], total: int | None = None) -> float:
    """Sum of c*log2(total/c) over nonzero counts (0*log(1/0) = 0)."""
    counts = [c for c in counts if c > 0]
    if total is None:
        total = sum(counts)
    if total == 0:
        return 0.0
    log_total = math.log2(total)
    return sum(c * (log_total - math.log2(c)) for c in counts)


def entropy_bits(probs: Sequence[float]) -> float:
    """Shannon entropy of a probability vector, in bits."""
    return sum(-p * math.log2(p) for p in probs if p > 0)
