"""
Two-part model selection
========================

For each candidate family we fit by maximum likelihood and add the bits
needed to describe the fitted model (alpha) to the entropy it leaves. The
selected model minimises that sum among candidates for which x is typical.
"""

import random

from eentropy import SymbolString, from_text, select_model, select_model_joint

families = ["bernoulli", "markov-1", "markov-2", "singleton", "uniform"]


def show(title, result):
    print(f"\n{title}: winner {result.winner.family.name}, {result.two_part_bits:.1f} bits")
    for c in result.candidates:
        m = c.model
        print(f"  {m.family.name:10s} alpha={m.alpha_bits:7.1f} H={m.entropy_bits:9.2f} gap={c.gap_bits:.1e}")


parity = from_text("10" * 2048)
show("(10)^2048 with all families", select_model(parity, families))
show("(10)^2048 Bernoulli only", select_model(parity, ["bernoulli"]))

# A fair coin string: no family beats writing it down literally.
rng = random.Random(0)
coin = SymbolString(parity.alphabet, tuple(rng.randrange(2) for _ in range(256)))
show("256 coin flips", select_model(coin, families))

# Joint selection for a pair. The separator form adds a symbol to the
# alphabet; the boundary form concatenates and pays for the split point.
x = from_text("10" * 64, parity.alphabet)
y = from_text("01" * 64, parity.alphabet)
show("pair (10)^64,(01)^64 separator", select_model_joint(x, y, families))
show("pair (10)^64,(01)^64 boundary", select_model_joint(x, y, families, pair_mode="boundary"))
