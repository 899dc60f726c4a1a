"""Canonical static Huffman coder with an explicit header/payload split, and
an adapter for external stdin-to-stdout compression programs.

Blob layout (big-endian bit order, header and payload each zero-padded to a
byte boundary)::

    magic           16 bits   b"H\\x01" (second byte is the format version)
    |Σ| - 1          8 bits
    symbols          8 bits each, in alphabet order
    n               Elias-gamma(n)
    counts          |Σ| fields of ceil(log2(n+1)) bits, in alphabet order
    -- pad --
    payload         canonical Huffman codewords, sum_i n_i * len_i bits
    -- pad --

Code lengths are derived from the counts alone, so the header is enough to
rebuild the decoder. When a single symbol occurs the payload is empty.
"""
from __future__ import annotations

import heapq
import shlex
import subprocess
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    EntropyToolkitError,
    Alphabet,
    SymbolString,
    count_width,
    elias_gamma_length,
)

MAGIC = b"H\x01"
TABLE_BITS = 16


class EmptyInput(EntropyToolkitError, ValueError):
    pass


class CorruptHeader(EntropyToolkitError, ValueError):
    pass


class TruncatedPayload(EntropyToolkitError, ValueError):
    pass


class ExternalProcessFailure(EntropyToolkitError, RuntimeError):
    def __init__(self, returncode: int | None, stderr: str, command: str = ""):
        self.returncode = returncode
        self.stderr = stderr
        self.command = command
        super().__init__(f"external compressor {command!r} failed (exit {returncode}): {stderr.strip()}")


class _BitWriter:
    def __init__(self):
        self._parts: list[str] = []
        self.nbits = 0

    def write(self, value: int, width: int):
        if width:
            self._parts.append(format(value, f"0{width}b"))
            self.nbits += width

    def write_bits(self, bits: str):
        self._parts.append(bits)
        self.nbits += len(bits)

    def write_gamma(self, m: int):
        b = m.bit_length()
        self.write(0, b - 1)
        self.write(m, b)

    def to_bytes(self) -> bytes:
        bits = "".join(self._parts)
        pad = -len(bits) % 8
        bits += "0" * pad
        return int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""


class _BitReader:
    def __init__(self, data: bytes):
        self.bits = "".join(format(b, "08b") for b in data)
        self.pos = 0

    def read(self, width: int) -> int:
        if self.pos + width > len(self.bits):
            raise CorruptHeader("header ends early")
        if width == 0:
            return 0
        v = int(self.bits[self.pos:self.pos + width], 2)
        self.pos += width
        return v

    def read_gamma(self) -> int:
        zeros = 0
        while True:
            if self.pos >= len(self.bits):
                raise CorruptHeader("unterminated Elias-gamma field")
            if self.bits[self.pos] == "1":
                break
            zeros += 1
            self.pos += 1
        return self.read(zeros + 1)


def huffman_code_lengths(counts: Sequence[int]) -> list[int]:
    """Optimal prefix-code lengths for the nonzero counts (0 for unused symbols).

    Merges break ties by (weight, smallest symbol index in the subtree), so
    results are deterministic. A lone used symbol gets length 0.
    """
    used = [i for i, c in enumerate(counts) if c > 0]
    lengths = [0] * len(counts)
    if len(used) <= 1:
        return lengths
    heap = [(counts[i], i, [i]) for i in used]
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, k1, s1 = heapq.heappop(heap)
        w2, k2, s2 = heapq.heappop(heap)
        for i in s1:
            lengths[i] += 1
        for i in s2:
            lengths[i] += 1
        heapq.heappush(heap, (w1 + w2, min(k1, k2), s1 + s2))
    return lengths


def canonical_codes(lengths: Sequence[int]) -> dict[int, str]:
    """Canonical codewords: shorter codes first, then lower symbol index."""
    order = sorted((l, i) for i, l in enumerate(lengths) if l > 0)
    codes: dict[int, str] = {}
    code = 0
    prev = 0
    for length, i in order:
        code <<= length - prev
        codes[i] = format(code, f"0{length}b")
        code += 1
        prev = length
    return codes


@dataclass(frozen=True)
class CompressedBlob:
    header_bytes: bytes
    payload_bytes: bytes
    header_bits: int
    payload_bits: int

    @property
    def total_bits(self) -> int:
        return self.header_bits + self.payload_bits

    def to_bytes(self) -> bytes:
        return self.header_bytes + self.payload_bytes

    @classmethod
    def from_bytes(cls, data: bytes) -> CompressedBlob:
        """Split a blob file back into header and payload."""
        alphabet, counts, header_bits = _parse_header(data)
        header_len = (header_bits + 7) // 8
        lengths = huffman_code_lengths(counts)
        payload_bits = sum(c * l for c, l in zip(counts, lengths))
        return cls(data[:header_len], data[header_len:], header_bits, payload_bits)


def _parse_header(data: bytes) -> tuple[Alphabet, list[int], int]:
    if len(data) < 3 or data[:2] != MAGIC:
        raise CorruptHeader("missing blob magic")
    r = _BitReader(data)
    r.pos = 16
    size = r.read(8) + 1
    symbols = tuple(r.read(8) for _ in range(size))
    if len(set(symbols)) != size:
        raise CorruptHeader("repeated symbol in header")
    n = r.read_gamma()
    width = count_width(n)
    counts = [r.read(width) for _ in range(size)]
    if sum(counts) != n:
        raise CorruptHeader(f"counts sum to {sum(counts)}, header says n={n}")
    return Alphabet(symbols), counts, r.pos


def header_bit_length(alphabet_size: int, n: int) -> int:
    return 16 + 8 + 8 * alphabet_size + elias_gamma_length(n) + alphabet_size * count_width(n)


def huffman_compress(x: SymbolString) -> CompressedBlob:
    if x.n == 0:
        raise EmptyInput("cannot compress the empty string")
    alphabet = x.alphabet
    if not alphabet.is_bytes():
        raise ValueError("the blob format stores byte symbols only")
    counts = x.counts()
    w = _BitWriter()
    w.write_bits("".join(format(b, "08b") for b in MAGIC))
    w.write(alphabet.size - 1, 8)
    for s in alphabet.symbols:
        w.write(s, 8)
    w.write_gamma(x.n)
    width = count_width(x.n)
    for c in counts:
        w.write(c, width)
    header_bits = w.nbits

    codes = canonical_codes(huffman_code_lengths(counts))
    p = _BitWriter()
    if codes:
        table = [codes.get(i, "") for i in range(alphabet.size)]
        p.write_bits("".join(table[i] for i in x.data))
    return CompressedBlob(w.to_bytes(), p.to_bytes(), header_bits, p.nbits)


def huffman_decompress(blob: CompressedBlob | bytes) -> SymbolString:
    data = blob.to_bytes() if isinstance(blob, CompressedBlob) else bytes(blob)
    alphabet, counts, header_bits = _parse_header(data)
    n = sum(counts)
    payload = data[(header_bits + 7) // 8:]
    lengths = huffman_code_lengths(counts)
    used = [i for i, c in enumerate(counts) if c > 0]
    if len(used) == 1:
        return SymbolString(alphabet, (used[0],) * n)
    payload_bits = sum(c * l for c, l in zip(counts, lengths))
    if len(payload) * 8 < payload_bits:
        raise TruncatedPayload(f"payload holds {len(payload) * 8} bits, need {payload_bits}")
    bits = "".join(format(b, "08b") for b in payload)
    codes = canonical_codes(lengths)
    maxlen = max(lengths)
    if maxlen > TABLE_BITS:
        return SymbolString(alphabet, tuple(_decode_slow(bits, codes, n)))
    bits += "0" * maxlen
    # canonical codes make a flat lookup on the next maxlen bits exact
    table: list[tuple[int, int]] = [(0, 0)] * (1 << maxlen)
    for sym, code in codes.items():
        shift = maxlen - len(code)
        start = int(code, 2) << shift
        entry = (sym, len(code))
        for j in range(start, start + (1 << shift)):
            table[j] = entry
    out = []
    pos = 0
    append = out.append
    for _ in range(n):
        sym, length = table[int(bits[pos:pos + maxlen], 2)]
        append(sym)
        pos += length
    return SymbolString(alphabet, tuple(out))


def _decode_slow(bits: str, codes: dict[int, str], n: int) -> list[int]:
    lookup = {code: sym for sym, code in codes.items()}
    out = []
    cur = ""
    for b in bits:
        if len(out) == n:
            break
        cur += b
        sym = lookup.get(cur)
        if sym is not None:
            out.append(sym)
            cur = ""
    return out


class Codelength(NamedTuple):
    total_bits: float
    header_bits: float | None
    payload_bits: float | None


@dataclass(frozen=True)
class CompressorHandle:
    """Either the built-in Huffman coder or an external command line.

    ``command`` is split with shell quoting rules and run without a shell;
    the program reads stdin and writes the compressed stream to stdout.
    """

    kind: str = "builtin"
    command: str | None = None
    deterministic: bool = True
    check_determinism: bool = False
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in ("builtin", "external"):
            raise ValueError(f"unknown compressor kind {self.kind!r}")
        if self.kind == "external" and not self.command:
            raise ValueError("external compressors need a command")

    @classmethod
    def parse(cls, text: str) -> CompressorHandle:
        """``builtin`` or ``external:<command template>``."""
        if text == "builtin":
            return cls()
        if text.startswith("external:"):
            return cls("external", text[len("external:"):].strip())
        raise ValueError(f"unknown compressor {text!r}")

    @property
    def name(self) -> str:
        return "builtin" if self.kind == "builtin" else f"external:{self.command}"


BUILTIN = CompressorHandle()


def external_compress(command: str, data: bytes, *, check_determinism: bool = False, timeout: float = 60.0) -> int:
    """Run ``command`` on ``data`` and return the compressed byte length."""
    argv = shlex.split(command)

    def run() -> bytes:
        try:
            proc = subprocess.run(argv, input=data, capture_output=True, timeout=timeout, check=False)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ExternalProcessFailure(None, str(exc), command) from exc
        if proc.returncode != 0:
            raise ExternalProcessFailure(proc.returncode, proc.stderr.decode(errors="replace"), command)
        return proc.stdout

    out = run()
    if check_determinism and run() != out:
        raise ExternalProcessFailure(0, "output differs between two invocations", command)
    return len(out)


def codelength(handle: CompressorHandle, x: SymbolString) -> Codelength:
    """Compressed size of ``x`` in bits.

    For the built-in coder total = header + payload (exact bit counts,
    before padding). External programs only report 8 * output bytes.
    """
    if handle.kind == "builtin":
        blob = huffman_compress(x)
        return Codelength(float(blob.total_bits), float(blob.header_bits), float(blob.payload_bits))
    nbytes = external_compress(
        handle.command, x.to_bytes(), check_determinism=handle.check_determinism, timeout=handle.timeout
    )
    return Codelength(8.0 * nbytes, None, None)
