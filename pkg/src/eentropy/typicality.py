"""Exhaustive checks of epsilon-typicality for small sources.

A string y is epsilon-typical for the source X when
``|H(X) - log2 1/P(X=y)| <= epsilon * n`` (entropies in bits, epsilon per
symbol). The cardinality bounds ``(1-eps) B^(H-eps*n) <= |S| <= B^(H+eps*n)``
are evaluated twice: with everything in bits (B = 2) and with the entropy
converted to base-|Σ| units (B = |Σ|). For a binary alphabet they coincide.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import EntropyToolkitError, LengthMismatch, SymbolString
from .models import FittedModel, bernoulli_model, neg_log2_prob

DEFAULT_ENUMERATION_CAP = 2 ** 24
# comparisons against eps*n get this much room so exact boundary cases are
# classified the same way by enumeration and by the closed form
BOUNDARY_ATOL = 1e-9


class EnumerationTooLarge(EntropyToolkitError, ValueError):
    pass


def is_typical(model: FittedModel, y: SymbolString, epsilon: float) -> bool:
    if y.n != model.n:
        raise LengthMismatch(f"model is over length {model.n}, got length {y.n}")
    nll = neg_log2_prob(model, y)
    if math.isinf(nll):
        return False
    return abs(model.entropy_bits - nll) <= epsilon * model.n + BOUNDARY_ATOL


def enumerate_neg_log2_probs(model: FittedModel, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """-log2 P(y) for every y in Σ^n, lexicographic order (first symbol most
    significant). Zero-probability strings get ``inf``."""
    size, n = model.alphabet.size, model.n
    total = size ** n
    if total > cap:
        raise EnumerationTooLarge(f"|Σ|^n = {size}^{n} exceeds the enumeration cap {cap}")
    codes = np.arange(total, dtype=np.int64)
    digits = [(codes // size ** (n - 1 - pos)) % size for pos in range(n)]
    kind = model.family.kind
    if kind == "uniform":
        return np.full(total, n * math.log2(size))
    if kind == "singleton":
        out = np.full(total, np.inf)
        out[_code_of(model.params["data"], size)] = 0.0
        return out
    if kind == "bernoulli":
        cost = _neg_log2(np.asarray(model.params["probs"], dtype=float))
        out = np.zeros(total)
        for d in digits:
            out += cost[d]
        return out
    k = model.family.order
    table = np.full((size ** k, size), np.inf)
    for ctx, row in model.params["transitions"].items():
        row = np.asarray(row, dtype=float)
        table[_code_of(ctx, size)] = _neg_log2(row / row.sum())
    out = np.zeros(total)
    for pos, sym in enumerate(model.params["prefix"]):
        out[digits[pos] != sym] = np.inf
    for pos in range(k, n):
        ctx = np.zeros(total, dtype=np.int64)
        for d in digits[pos - k:pos]:
            ctx = ctx * size + d
        out += table[ctx, digits[pos]]
    return out


def _neg_log2(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.where(p > 0, -np.log2(np.where(p > 0, p, 1.0)), np.inf)


def _code_of(data: Sequence[int], size: int) -> int:
    code = 0
    for d in data:
        code = code * size + d
    return code


@dataclass(frozen=True)
class CardinalityBounds:
    base: float
    exponent_entropy: float
    lower_bound: float
    upper_bound: float
    lower_holds: bool
    upper_holds: bool


@dataclass(frozen=True)
class TypicalSetReport:
    model: FittedModel
    n: int
    epsilon: float
    typical_count: int
    total_probability_typical: float
    total_probability: float
    bounds_bits: CardinalityBounds
    bounds_symbols: CardinalityBounds | None

    @property
    def atypical_probability(self) -> float:
        return max(0.0, self.total_probability - self.total_probability_typical)

    @property
    def lower_bound(self) -> float:
        return self.bounds_bits.lower_bound

    @property
    def upper_bound(self) -> float:
        return self.bounds_bits.upper_bound

    @property
    def bounds_hold(self) -> tuple[bool, bool]:
        return self.bounds_bits.lower_holds, self.bounds_bits.upper_holds

    def summary(self) -> dict[str, Any]:
        out = {
            "family": self.model.family.name,
            "alphabet_size": self.model.alphabet.size,
            "n": self.n,
            "epsilon": self.epsilon,
            "entropy_bits": self.model.entropy_bits,
            "typical_count": self.typical_count,
            "strings_total": self.model.alphabet.size ** self.n,
            "total_probability_typical": self.total_probability_typical,
            "atypical_probability": self.atypical_probability,
            "total_probability": self.total_probability,
            "bounds": {"bits": self.bounds_bits.__dict__},
        }
        if self.model.family.kind == "bernoulli":
            out["probabilities"] = list(self.model.params["probs"])
        out["bounds"]["symbols"] = None if self.bounds_symbols is None else self.bounds_symbols.__dict__
        return out


def _bounds(count: int, base: float, h: float, epsilon: float, n: int) -> CardinalityBounds:
    lower = (1 - epsilon) * base ** (h - epsilon * n)
    upper = base ** (h + epsilon * n)
    # relative slack: the bound is an exact power, count an exact integer
    return CardinalityBounds(base, h, lower, upper, count >= lower * (1 - 1e-12), count <= upper * (1 + 1e-12))


def typical_set_report(
    model: FittedModel, epsilon: float, cap: int = DEFAULT_ENUMERATION_CAP
) -> TypicalSetReport:
    """Enumerate Σ^n, count the epsilon-typical strings and their probability,
    and evaluate both readings of the cardinality bounds. The lower bound is
    only promised for large n, so a failing lower bound is reported, not
    raised."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    nll = enumerate_neg_log2_probs(model, cap)
    n = model.n
    finite = np.isfinite(nll)
    probs = np.where(finite, np.exp2(-np.where(finite, nll, 0.0)), 0.0)
    typical = finite & (np.abs(model.entropy_bits - nll) <= epsilon * n + BOUNDARY_ATOL)
    count = int(typical.sum())
    size = model.alphabet.size
    bits = _bounds(count, 2.0, model.entropy_bits, epsilon, n)
    symbols = None
    if size > 1:
        symbols = _bounds(count, float(size), model.entropy_bits / math.log2(size), epsilon, n)
    return TypicalSetReport(
        model, n, epsilon, count, float(probs[typical].sum()), float(probs.sum()), bits, symbols
    )


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def atypical_mass_closed_form(probs: Sequence[float], n: int, epsilon: float) -> float:
    """Exact atypical probability of an i.i.d. source by summing over symbol
    count vectors (the binomial tail for two symbols)."""
    probs = [float(p) for p in probs]
    h = n * sum(-p * math.log2(p) for p in probs if p > 0)
    mass = 0.0
    for counts in _compositions(n, len(probs)):
        if any(c and p == 0 for c, p in zip(counts, probs)):
            continue
        nll = -sum(c * math.log2(p) for c, p in zip(counts, probs) if c)
        if abs(h - nll) <= epsilon * n + BOUNDARY_ATOL:
            continue
        coef = math.factorial(n)
        for c in counts:
            coef //= math.factorial(c)
        mass += coef * math.prod(p ** c for p, c in zip(probs, counts))
    return mass


def atypical_mass_curve(
    source: FittedModel | Sequence[float],
    n_list: Iterable[int],
    epsilon: float,
    method: str = "closed-form",
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[tuple[int, float]]:
    """Atypical probability at each length for an i.i.d. source.

    ``source`` is a Bernoulli model or its symbol probabilities. ``method``
    is ``closed-form`` or ``enumerate``. No monotonicity is imposed on the
    result.
    """
    if isinstance(source, FittedModel):
        if source.family.kind not in ("bernoulli", "uniform"):
            raise ValueError("atypical mass curves need an i.i.d. (Bernoulli or uniform) source")
        size = source.alphabet.size
        probs = source.params["probs"] if source.family.kind == "bernoulli" else [1.0 / size] * size
    else:
        probs = list(source)
    out = []
    for n in n_list:
        if method == "closed-form":
            out.append((n, atypical_mass_closed_form(probs, n, epsilon)))
        elif method == "enumerate":
            out.append((n, typical_set_report(bernoulli_model(probs, n), epsilon, cap).atypical_probability))
        else:
            raise ValueError(f"unknown method {method!r}")
    return out
