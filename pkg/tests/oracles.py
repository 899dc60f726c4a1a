"""Independent reference computations used as test oracles.

Nothing here imports the package's counting or coding code.
"""
import itertools
import math


def h0_per_symbol(s):
    """(1/n) sum n_i log2(n / n_i) evaluated literally."""
    n = len(s)
    if n == 0:
        return 0.0
    return sum(s.count(c) * math.log2(n / s.count(c)) for c in set(s)) / n


def x_w(x, w):
    """Characters immediately following each occurrence of w in x (string search)."""
    out = []
    start = 0
    while True:
        i = x.find(w, start)
        if i < 0:
            return "".join(out)
        if i + len(w) < len(x):
            out.append(x[i + len(w)])
        start = i + 1


def hk_bruteforce(x, k, alphabet):
    """H_k(x) by enumerating every w in alphabet^k and materialising x_w."""
    n = len(x)
    if k == 0:
        return h0_per_symbol(x)
    total = 0.0
    for w in itertools.product(alphabet, repeat=k):
        xw = x_w(x, "".join(w))
        total += len(xw) * h0_per_symbol(xw)
    return total / n


def binary_entropy(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def e_h_arithmetic(p):
    """e_H from a nested-list joint table, plain Python."""
    def h(v):
        return -sum(q * math.log2(q) for q in v if q > 0)
    px = [sum(row) for row in p]
    py = [sum(col) for col in zip(*p)]
    hx, hy = h(px), h(py)
    hxy = h([q for row in p for q in row])
    return 1 - (hx + hy - hxy) / max(hx, hy)


def binomial_atypical_mass(p1, n, eps):
    """Atypical probability of a binary i.i.d. source, summing over the
    number of ones with exact binomial coefficients."""
    h = n * binary_entropy(p1)
    mass = 0.0
    for ones in range(n + 1):
        nll = -(ones * math.log2(p1) + (n - ones) * math.log2(1 - p1))
        if abs(h - nll) > eps * n + 1e-9:
            mass += math.comb(n, ones) * p1 ** ones * (1 - p1) ** (n - ones)
    return mass


def huffman_lengths_bruteforce(counts):
    """Optimal total codelength by textbook Huffman merging of weights only."""
    import heapq
    w = [c for c in counts if c > 0]
    if len(w) <= 1:
        return 0
    heapq.heapify(w)
    cost = 0
    while len(w) > 1:
        a, b = heapq.heappop(w), heapq.heappop(w)
        cost += a + b
        heapq.heappush(w, a + b)
    return cost
