"""
k-th order empirical entropy
============================

H_k(x) is the per-symbol entropy left once the previous k symbols are known,
measured from the string itself.
"""

from eentropy import context_stats, entropy_profile, from_text

# A periodic string looks random to a zeroth order model and fully
# predictable once one symbol of context is available.
parity = from_text("10" * 16)
for k, h in entropy_profile(parity, 3):
    print(f"parity   H_{k} = {h:.4f} bits/symbol")

# The successor strings x_w behind H_1. Context "0" ends the string, so its
# final occurrence has no successor.
x = from_text("10101010")
stats = context_stats(x, 1)
for ctx, table in stats.tables.items():
    w = bytes(x.alphabet.symbols[i] for i in ctx).decode()
    counts = {chr(x.alphabet.symbols[i]): c for i, c in enumerate(table.successor_counts)}
    print(f"context {w!r}: |x_w| = {table.total}, successor counts {counts}")

# English-like text: each extra order of context lowers the estimate, until
# contexts become too sparse to say anything (roughly |Σ|^k > n).
text = from_text(
    b"the quick brown fox jumps over the lazy dog and the dog sleeps while the fox runs "
    b"into the forest where the trees are tall and the river runs quietly past the stones"
)
for k, h in entropy_profile(text, 5):
    print(f"text     H_{k} = {h:.4f}")
