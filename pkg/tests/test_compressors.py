import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from eentropy import (
    BUILTIN,
    CompressedBlob,
    CompressorHandle,
    CorruptHeader,
    EmptyInput,
    ExternalProcessFailure,
    TruncatedPayload,
    codelength,
    empirical_entropy_k,
    external_compress,
    from_text,
    huffman_compress,
    huffman_decompress,
    infer_alphabet,
    parse_string,
)
from eentropy.compressors import canonical_codes, header_bit_length, huffman_code_lengths
from oracles import huffman_lengths_bruteforce


def test_single_symbol_payload_empty():
    blob = huffman_compress(from_text("aaaa"))
    assert blob.payload_bits == 0
    assert blob.payload_bytes == b""
    # 16 magic + 8 size + 8 symbol + gamma(4)=5 + one 3-bit count
    assert blob.header_bits == 40
    assert huffman_decompress(blob).to_bytes() == b"aaaa"


def test_two_equiprobable_symbols():
    blob = huffman_compress(from_text("10101010"))
    assert blob.payload_bits == 8
    assert blob.header_bits == 16 + 8 + 16 + 7 + 2 * 4


def test_two_symbols_unequal():
    assert huffman_compress(from_text("aab")).payload_bits == 3


def test_header_parses_in_isolation():
    blob = huffman_compress(from_text("banana bandana"))
    again = CompressedBlob.from_bytes(blob.to_bytes())
    assert again == blob
    assert header_bit_length(5, 14) == blob.header_bits


def test_empty_input():
    with pytest.raises(EmptyInput):
        huffman_compress(from_text(""))


def test_roundtrip_banana_and_random_bytes():
    assert huffman_decompress(huffman_compress(from_text("banana"))).to_bytes() == b"banana"
    raw = random.Random(3).randbytes(10_000)
    assert huffman_decompress(huffman_compress(from_text(raw))).to_bytes() == raw


def test_truncated_payload():
    data = huffman_compress(from_text("abcdefgh" * 20)).to_bytes()
    with pytest.raises(TruncatedPayload):
        huffman_decompress(data[:-5])


def test_corrupt_header():
    with pytest.raises(CorruptHeader):
        huffman_decompress(b"not a blob at all")
    good = bytearray(huffman_compress(from_text("abcabc")).to_bytes())
    good[-3] ^= 0xFF  # inside the count fields
    with pytest.raises((CorruptHeader, TruncatedPayload)):
        huffman_decompress(bytes(good[:6]))


def test_canonical_codes_prefix_free_and_ordered():
    lengths = huffman_code_lengths([5, 9, 12, 13, 16, 45])
    codes = canonical_codes(lengths)
    words = list(codes.values())
    for a in words:
        for b in words:
            assert a == b or not b.startswith(a)
    assert sum(2 ** -len(w) for w in words) == 1.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1000), min_size=1, max_size=40))
def test_code_lengths_optimal(counts):
    lengths = huffman_code_lengths(counts)
    assert sum(c * l for c, l in zip(counts, lengths)) == huffman_lengths_bruteforce(counts)


@settings(max_examples=150, deadline=None)
@given(st.binary(min_size=1, max_size=3000))
def test_roundtrip_and_redundancy_bound(raw):
    x = parse_string(raw, infer_alphabet(raw))
    blob = huffman_compress(x)
    assert huffman_decompress(blob.to_bytes()).to_bytes() == raw
    h0 = empirical_entropy_k(x, 0)
    rate = blob.payload_bits / x.n
    assert h0 - 1e-12 <= rate < h0 + 1


@settings(max_examples=100, deadline=None)
@given(st.binary(min_size=1, max_size=300), st.binary(min_size=1, max_size=300))
def test_header_symmetry(a, b):
    alphabet = infer_alphabet(a, b)
    x, y = parse_string(a, alphabet), parse_string(b, alphabet)
    assert huffman_compress(x.concat(y)).header_bytes == huffman_compress(y.concat(x)).header_bytes


def test_deterministic_blobs():
    x = from_text(random.Random(9).randbytes(2000))
    assert huffman_compress(x).to_bytes() == huffman_compress(x).to_bytes()


def test_long_codes_use_slow_decoder():
    # Fibonacci counts force a maximally skewed tree deeper than the lookup table
    fib = [1, 1]
    while len(fib) < 20:
        fib.append(fib[-1] + fib[-2])
    raw = b"".join(bytes([i]) * c for i, c in enumerate(fib))
    x = from_text(raw)
    assert max(huffman_code_lengths(x.counts())) > 16
    assert huffman_decompress(huffman_compress(x)).to_bytes() == raw


def test_codelength_builtin():
    total, header, payload = codelength(BUILTIN, from_text("10101010"))
    assert payload == 8
    assert total == header + 8


def test_codelength_identity_external():
    x = from_text("hello world")
    total, header, payload = codelength(CompressorHandle("external", "cat"), x)
    assert total == 8 * x.n
    assert header is None and payload is None


def test_external_missing_command():
    with pytest.raises(ExternalProcessFailure):
        codelength(CompressorHandle("external", "definitely-not-a-real-binary-xyz"), from_text("ab"))


def test_external_nonzero_exit():
    with pytest.raises(ExternalProcessFailure) as info:
        external_compress("sh -c 'exit 3'", b"data")
    assert info.value.returncode == 3


def test_external_gzip_deterministic():
    data = b"abracadabra" * 100
    n1 = external_compress("gzip -n -9", data, check_determinism=True)
    assert 0 < n1 < len(data)


def test_handle_parse():
    assert CompressorHandle.parse("builtin") == BUILTIN
    h = CompressorHandle.parse("external:gzip -9 -n")
    assert h.kind == "external" and h.command == "gzip -9 -n"
    with pytest.raises(ValueError):
        CompressorHandle.parse("zstd")
