"""
Compression distances
=====================

The built-in Huffman coder splits its output into a header (the model) and a
payload (the entropy part), so NCD can be read term by term. External
compressors only report totals.
"""

import random
import shutil

from eentropy import (
    BUILTIN,
    CompressorHandle,
    SymbolString,
    from_text,
    huffman_compress,
    ncd,
    ncd_decomposed,
    nid_empirical,
)

x = from_text("10" * 5000)
blob = huffman_compress(x)
print(f"header {blob.header_bits} bits, payload {blob.payload_bits} bits")

# A frequency-only coder cannot see that xx repeats x: the payload doubles,
# so ncd(x, x) stays close to 1.
parts = ncd_decomposed(x, x)
print("ncd(x,x) with Huffman:", round(parts.value, 4), parts.as_dict())

if shutil.which("gzip"):
    gzip = CompressorHandle("external", "gzip -n -9")
    rng = random.Random(1)
    r = SymbolString(x.alphabet, tuple(rng.randrange(2) for _ in range(x.n)))
    print("gzip ncd(x,x) =", round(ncd(gzip, x, x), 4), " ncd(x,random) =", round(ncd(gzip, x, r), 4))

# The two-part codelengths of model selection in place of compressed sizes.
fams = ["bernoulli", "markov-1", "singleton"]
a = from_text("10" * 64, x.alphabet)
b = from_text("01" * 64, x.alphabet)
rng = random.Random(7)
noise = SymbolString(x.alphabet, tuple(rng.randrange(2) for _ in range(128)))
print("nid((10)^64, (01)^64) =", round(nid_empirical(a, b, fams).value, 4))
print("nid((10)^64, random)  =", round(nid_empirical(a, noise, fams).value, 4))
print("Huffman ncd on the same pairs:", round(ncd(BUILTIN, a, b), 4), round(ncd(BUILTIN, a, noise), 4))
