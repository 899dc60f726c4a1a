"""Computable source families and two-part model selection.

A fitted model carries three numbers:

* ``alpha_bits``: length of an explicit, decodable description of the model
  (the computable stand-in for the model's Kolmogorov complexity),
* ``entropy_bits``: entropy of the induced variable over strings of length n,
* ``nll_bits``: -log2 of the probability the model gives the data.

Model description layout (all widths in bits)::

    family tag                      2
    Markov order k                  Elias-gamma(k)
    Bernoulli counts                (|Σ|-1) * ceil(log2(n+1))
    Markov, per realised context    k*ceil(log2|Σ|) + (|Σ|-1) * ceil(log2(n+1))
    Markov literal prefix           k * ceil(log2|Σ|)
    Singleton literal string        n * ceil(log2|Σ|)
"""
from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from typing import Any

from .core import (
    SEPARATOR,
    EmptyString,
    EntropyToolkitError,
    LengthMismatch,
    AlphabetMismatch,
    OrderTooLarge,
    Alphabet,
    SymbolString,
    count_width,
    elias_gamma_length,
    entropy_bits as _entropy_of,
    xlog2x_sum,
)
from .empirical import context_stats

TAG_BITS = 2
DEFAULT_EPSILON = 0.01
# absolute slack added to the typicality band so float noise in gaps
# never changes which candidates are kept
GAP_ATOL = 1e-9
TIE_ATOL = 1e-9


class EmptyFamilyList(EntropyToolkitError, ValueError):
    pass


class UnknownFamily(EntropyToolkitError, ValueError):
    pass


@dataclass(frozen=True)
class Family:
    kind: str
    order: int = 0

    KINDS = ("bernoulli", "markov", "singleton", "uniform")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise UnknownFamily(self.kind)
        if self.kind == "markov" and self.order < 1:
            raise UnknownFamily("Markov families need order >= 1")
        if self.kind != "markov" and self.order != 0:
            raise UnknownFamily(f"{self.kind} takes no order")

    @property
    def name(self) -> str:
        return f"markov-{self.order}" if self.kind == "markov" else self.kind

    @property
    def rank(self) -> tuple[int, int]:
        """Complexity rank used to break exact cost ties."""
        return {
            "bernoulli": (0, 0),
            "markov": (1, self.order),
            "singleton": (2, 0),
            "uniform": (3, 0),
        }[self.kind]

    @classmethod
    def parse(cls, text: str) -> Family:
        t = text.strip().lower()
        m = re.fullmatch(r"markov[-_:]?(\d+)", t)
        if m:
            return cls("markov", int(m.group(1)))
        if t in ("bernoulli", "markov-0", "markov0"):
            return cls("bernoulli")
        if t in ("singleton", "uniform"):
            return cls(t)
        raise UnknownFamily(f"unknown family {text!r}")

    def __str__(self) -> str:
        return self.name


BERNOULLI = Family("bernoulli")
SINGLETON = Family("singleton")
UNIFORM = Family("uniform")


def markov(k: int) -> Family:
    return Family("markov", k)


def parse_families(families: str | Iterable[str | Family]) -> list[Family]:
    """Parse ``"bernoulli,markov-1..3,singleton"`` style lists."""
    if isinstance(families, str):
        items = [s for s in re.split(r"[,\s]+", families) if s]
    else:
        items = list(families)
    out: list[Family] = []
    for item in items:
        if isinstance(item, Family):
            out.append(item)
            continue
        m = re.fullmatch(r"markov[-_:]?(\d+)\.\.(\d+)", item.strip().lower())
        if m:
            out.extend(markov(k) for k in range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(Family.parse(item))
    return out


@dataclass(frozen=True)
class FittedModel:
    family: Family
    alphabet: Alphabet
    n: int
    params: dict[str, Any] = field(compare=False)
    alpha_bits: float = 0.0
    entropy_bits: float = 0.0
    nll_bits: float = 0.0

    @property
    def two_part_bits(self) -> float:
        return self.alpha_bits + self.entropy_bits

    @property
    def gap_bits(self) -> float:
        return abs(self.entropy_bits - self.nll_bits)

    def probabilities(self) -> list[float]:
        """Symbol probabilities of a Bernoulli model."""
        if self.family.kind != "bernoulli":
            raise TypeError("only Bernoulli models have a single symbol distribution")
        return list(self.params["probs"])

    def summary(self) -> dict[str, Any]:
        return {
            "family": self.family.name,
            "n": self.n,
            "alphabet_size": self.alphabet.size,
            "alpha_bits": self.alpha_bits,
            "entropy_bits": self.entropy_bits,
            "nll_bits": self.nll_bits,
            "gap_bits": self.gap_bits,
            "two_part_bits": self.two_part_bits,
        }


def model_codelength(model: FittedModel) -> float:
    """Bits of the model description (see module docstring for the layout)."""
    fam = model.family
    size = model.alphabet.size
    sym = model.alphabet.bits_per_symbol
    cw = count_width(model.n)
    bits = TAG_BITS
    if fam.kind == "bernoulli":
        bits += (size - 1) * cw
    elif fam.kind == "markov":
        k = fam.order
        bits += elias_gamma_length(k)
        bits += len(model.params["transitions"]) * (k * sym + (size - 1) * cw)
        bits += k * sym
    elif fam.kind == "singleton":
        bits += model.n * sym
    return float(bits)


def neg_log2_prob(model: FittedModel, y: SymbolString) -> float:
    """-log2 P(X = y); ``inf`` when the model gives y probability zero."""
    if y.n != model.n:
        raise LengthMismatch(f"model is over length {model.n}, got length {y.n}")
    if y.alphabet != model.alphabet:
        raise AlphabetMismatch("string and model use different alphabets")
    kind = model.family.kind
    if kind == "uniform":
        return model.n * math.log2(model.alphabet.size)
    if kind == "singleton":
        return 0.0 if y.data == model.params["data"] else math.inf
    if kind == "bernoulli":
        probs = model.params["probs"]
        total = 0.0
        for i, c in enumerate(y.counts()):
            if c:
                if probs[i] <= 0:
                    return math.inf
                total -= c * math.log2(probs[i])
        return total
    k = model.family.order
    if y.data[:k] != model.params["prefix"]:
        return math.inf
    transitions = model.params["transitions"]
    totals = model.params["totals"]
    total = 0.0
    data = y.data
    for i in range(k, len(data)):
        ctx = data[i - k:i]
        row = transitions.get(ctx)
        if row is None or row[data[i]] == 0:
            return math.inf
        total += math.log2(totals[ctx]) - math.log2(row[data[i]])
    return total


def fit(x: SymbolString, family: Family | str) -> FittedModel:
    """Maximum-likelihood fit of ``family`` to ``x``."""
    if isinstance(family, str):
        family = Family.parse(family)
    n = x.n
    if n == 0:
        raise EmptyString("cannot fit a model to the empty string")
    kind = family.kind
    if kind == "bernoulli":
        counts = x.counts()
        params = {"counts": tuple(counts), "probs": tuple(c / n for c in counts)}
        entropy = xlog2x_sum(counts, n)
    elif kind == "markov":
        k = family.order
        if k >= n:
            raise OrderTooLarge(f"Markov order {k} needs a string longer than {n}")
        stats = context_stats(x, k)
        transitions = {ctx: t.successor_counts for ctx, t in sorted(stats.tables.items())}
        params = {
            "prefix": x.data[:k],
            "transitions": transitions,
            "totals": {ctx: sum(row) for ctx, row in transitions.items()},
        }
        entropy = sum(t.h0_bits() for t in stats.tables.values())
    elif kind == "singleton":
        params = {"data": x.data}
        entropy = 0.0
    else:
        params = {}
        entropy = n * math.log2(x.alphabet.size)
    model = FittedModel(family, x.alphabet, n, params, entropy_bits=entropy)
    return replace(
        model,
        alpha_bits=model_codelength(model),
        nll_bits=neg_log2_prob(model, x),
    )


def bernoulli_model(probs: Sequence[float], n: int, alphabet: Alphabet | None = None) -> FittedModel:
    """A Bernoulli source with given symbol probabilities (not fitted to data)."""
    probs = tuple(float(p) for p in probs)
    if any(p < 0 for p in probs) or not math.isclose(sum(probs), 1.0, abs_tol=1e-9):
        raise ValueError("probabilities must be non-negative and sum to 1")
    if alphabet is None:
        alphabet = Alphabet(tuple(range(len(probs))))
    if alphabet.size != len(probs):
        raise ValueError("need one probability per alphabet symbol")
    model = FittedModel(BERNOULLI, alphabet, n, {"probs": probs}, entropy_bits=n * _entropy_of(probs))
    return replace(model, alpha_bits=model_codelength(model), nll_bits=math.nan)


def uniform_model(alphabet: Alphabet | int, n: int) -> FittedModel:
    if isinstance(alphabet, int):
        alphabet = Alphabet(tuple(range(alphabet)))
    model = FittedModel(UNIFORM, alphabet, n, {}, entropy_bits=n * math.log2(alphabet.size))
    return replace(model, alpha_bits=model_codelength(model), nll_bits=math.nan)


@dataclass(frozen=True)
class Candidate:
    model: FittedModel
    gap_bits: float
    two_part_bits: float
    kept: bool

    def summary(self) -> dict[str, Any]:
        out = self.model.summary()
        out["kept"] = self.kept
        return out


@dataclass(frozen=True)
class SelectionResult:
    winner: FittedModel
    two_part_bits: float
    typicality_gap_bits: float
    candidates: tuple[Candidate, ...]
    epsilon: float
    n: int
    skipped: tuple[str, ...] = ()

    def summary(self) -> dict[str, Any]:
        return {
            "winner": self.winner.family.name,
            "two_part_bits": self.two_part_bits,
            "alpha_bits": self.winner.alpha_bits,
            "entropy_bits": self.winner.entropy_bits,
            "typicality_gap_bits": self.typicality_gap_bits,
            "epsilon": self.epsilon,
            "n": self.n,
            "candidates": [c.summary() for c in self.candidates],
            "skipped": list(self.skipped),
        }


def _choose(models: list[FittedModel], epsilon: float, n: int, skipped=()) -> SelectionResult:
    min_gap = min(m.gap_bits for m in models)
    band = min_gap + epsilon * n + GAP_ATOL
    candidates = tuple(Candidate(m, m.gap_bits, m.two_part_bits, m.gap_bits <= band) for m in models)
    kept = [c for c in candidates if c.kept]
    best = min(c.two_part_bits for c in kept)
    tied = [c for c in kept if c.two_part_bits <= best + TIE_ATOL]
    win = min(tied, key=lambda c: (c.model.family.rank, c.model.alpha_bits))
    return SelectionResult(
        winner=win.model,
        two_part_bits=win.model.alpha_bits + win.model.entropy_bits,
        typicality_gap_bits=win.gap_bits,
        candidates=candidates,
        epsilon=epsilon,
        n=n,
        skipped=tuple(skipped),
    )


def select_model(
    x: SymbolString,
    families: Iterable[Family | str],
    epsilon: float = DEFAULT_EPSILON,
) -> SelectionResult:
    """Two-part selection: keep candidates whose typicality gap is within
    ``epsilon * n`` of the smallest gap, then minimise alpha + entropy.

    Exact cost ties go to the simpler family (Bernoulli < Markov(1) < ... <
    Singleton < Uniform), then to the shorter model description. Markov
    orders that do not fit the string length are skipped and listed.
    """
    families = parse_families(families)
    if not families:
        raise EmptyFamilyList("need at least one family")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if x.n == 0:
        raise EmptyString("cannot select a model for the empty string")
    models, skipped = [], []
    for fam in dict.fromkeys(families):
        if fam.kind == "markov" and fam.order >= x.n:
            skipped.append(fam.name)
            continue
        models.append(fit(x, fam))
    if not models:
        raise OrderTooLarge(f"no family in {[f.name for f in families]} fits a string of length {x.n}")
    return _choose(models, epsilon, x.n, skipped)


PAIR_MODES = ("separator", "boundary")


def pair_string(x: SymbolString, y: SymbolString, mode: str = "separator") -> tuple[SymbolString, int]:
    """Single-string representation of the pair (x, y).

    Returns the string and the extra description bits the representation
    needs (the split point, in ``boundary`` mode).
    """
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch("x and y must share an alphabet")
    if mode == "separator":
        ext = x.alphabet.with_separator()
        sep = ext.index(SEPARATOR)
        data = x.over(ext).data + (sep,) + y.over(ext).data
        return SymbolString(ext, data), 0
    if mode == "boundary":
        joined = x.concat(y)
        return joined, count_width(joined.n)
    raise ValueError(f"unknown pair mode {mode!r}; expected one of {PAIR_MODES}")


def select_model_joint(
    x: SymbolString,
    y: SymbolString,
    families: Iterable[Family | str],
    epsilon: float = DEFAULT_EPSILON,
    pair_mode: str = "separator",
) -> SelectionResult:
    """Two-part selection for the pair (x, y), in the given order.

    ``separator`` joins x and y with an extra alphabet symbol. ``boundary``
    concatenates them over the shared alphabet and charges the split point
    (ceil(log2(n+1)) bits) to every candidate's model description.
    """
    pair, overhead = pair_string(x, y, pair_mode)
    result = select_model(pair, families, epsilon)
    if not overhead:
        return result
    models = [replace(c.model, alpha_bits=c.model.alpha_bits + overhead) for c in result.candidates]
    return _choose(models, epsilon, pair.n, result.skipped)
