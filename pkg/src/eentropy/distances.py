"""Compression and entropy based distances, distance matrices and metric audits."""
from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .compressors import BUILTIN, CompressorHandle, codelength, huffman_compress
from .core import Alphabet, EntropyToolkitError, LengthMismatch, SymbolString
from .models import DEFAULT_EPSILON, Family, parse_families, select_model, select_model_joint

IDENTITY_ATOL = 1e-12


class DegenerateJoint(EntropyToolkitError, ValueError):
    pass


class CorpusError(EntropyToolkitError, ValueError):
    pass


def _with_separator_byte(x: SymbolString, y: SymbolString):
    """Re-express x and y over their alphabet plus the lowest unused byte value."""
    free = [b for b in range(256) if b not in x.alphabet]
    if not free:
        raise ValueError("no byte value left to act as a separator")
    ext = Alphabet(x.alphabet.symbols + (free[0],))
    sep = SymbolString(ext, (ext.size - 1,))
    return x.over(ext), y.over(ext), sep


def ncd(handle: CompressorHandle, x: SymbolString, y: SymbolString, separator: bool = False) -> float:
    """(|Z(xy)| - min(|Z(x)|, |Z(y)|)) / max(|Z(x)|, |Z(y)|), unclamped.

    With ``separator`` the pair is x + sep + y, sep being a byte value absent
    from the alphabet; all three strings are then coded over the extended
    alphabet.
    """
    if x.n == 0 or y.n == 0:
        raise ValueError("ncd needs nonempty strings")
    if separator:
        x, y, sep = _with_separator_byte(x, y)
        xy = x.concat(sep, y)
    else:
        xy = x.concat(y)
    zx = codelength(handle, x).total_bits
    zy = codelength(handle, y).total_bits
    zxy = codelength(handle, xy).total_bits
    return (zxy - min(zx, zy)) / max(zx, zy)


@dataclass(frozen=True)
class NCDParts:
    value: float
    alpha_x: int
    alpha_y: int
    alpha_xy: int
    h_x: int
    h_y: int
    h_xy: int

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def ncd_decomposed(x: SymbolString, y: SymbolString) -> NCDParts:
    """NCD under the built-in Huffman coder, split into header (model) and
    payload (entropy) bits for x, y and the concatenation xy."""
    bx, by, bxy = huffman_compress(x), huffman_compress(y), huffman_compress(x.concat(y))
    zx = bx.header_bits + bx.payload_bits
    zy = by.header_bits + by.payload_bits
    zxy = bxy.header_bits + bxy.payload_bits
    value = (zxy - min(zx, zy)) / max(zx, zy)
    return NCDParts(value, bx.header_bits, by.header_bits, bxy.header_bits,
                    bx.payload_bits, by.payload_bits, bxy.payload_bits)


@dataclass(frozen=True)
class NIDParts:
    value: float
    single_x: float
    single_y: float
    joint: float
    winner_x: str
    winner_y: str
    winner_joint: str

    def as_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


NID_PAIR_MODES = ("boundary", "separator", "product")


def nid_empirical(
    x: SymbolString,
    y: SymbolString,
    families: Iterable[Family | str],
    epsilon: float = DEFAULT_EPSILON,
    pair_mode: str = "boundary",
) -> NIDParts:
    """Normalised information distance with two-part codelengths in place of
    Kolmogorov complexities.

    The joint cost is the smaller of the (x, y) and (y, x) selections, so the
    value is exactly symmetric. ``product`` uses the sum of the single costs
    as the joint (independence control; the value is then always 1).
    """
    families = parse_families(families)
    sx = select_model(x, families, epsilon)
    sy = select_model(y, families, epsilon)
    if pair_mode == "product":
        joint, winner = sx.two_part_bits + sy.two_part_bits, "product"
    else:
        a = select_model_joint(x, y, families, epsilon, pair_mode)
        b = select_model_joint(y, x, families, epsilon, pair_mode)
        best = min((a, b), key=lambda r: r.two_part_bits)
        joint, winner = best.two_part_bits, best.winner.family.name
    lo, hi = sorted((sx.two_part_bits, sy.two_part_bits))
    return NIDParts((joint - lo) / hi, sx.two_part_bits, sy.two_part_bits, joint,
                    sx.winner.family.name, sy.winner.family.name, winner)


@dataclass(frozen=True)
class JointTable:
    p: np.ndarray
    outcomes_x: tuple = ()
    outcomes_y: tuple = ()

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2:
            raise ValueError("joint table must be 2-dimensional")
        if np.any(p < 0) or not np.isfinite(p).all():
            raise ValueError("joint probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"joint probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "p", p)
        if not self.outcomes_x:
            object.__setattr__(self, "outcomes_x", tuple(range(p.shape[0])))
        if not self.outcomes_y:
            object.__setattr__(self, "outcomes_y", tuple(range(p.shape[1])))

    @classmethod
    def from_pairs(cls, x: Sequence, y: Sequence) -> JointTable:
        if len(x) != len(y):
            raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
        if not len(x):
            raise ValueError("need at least one aligned pair")
        xs = tuple(dict.fromkeys(x))
        ys = tuple(dict.fromkeys(y))
        ix = {v: i for i, v in enumerate(xs)}
        iy = {v: i for i, v in enumerate(ys)}
        counts = np.zeros((len(xs), len(ys)))
        for a, b in zip(x, y):
            counts[ix[a], iy[b]] += 1
        return cls(counts / len(x), xs, ys)

    def marginal_x(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.p.sum(axis=0)


def _h(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


@dataclass(frozen=True)
class EHResult:
    value: float
    h_x: float
    h_y: float
    h_xy: float
    mutual_information: float
    value_via_mi: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def e_h_parts(joint: JointTable) -> EHResult:
    hx, hy, hxy = _h(joint.marginal_x()), _h(joint.marginal_y()), _h(joint.p.ravel())
    hi, lo = max(hx, hy), min(hx, hy)
    if hi <= 0:
        raise DegenerateJoint("both marginals are deterministic")
    mi = hx + hy - hxy
    direct = (hxy - lo) / hi
    via_mi = 1.0 - mi / hi
    if abs(direct - via_mi) > IDENTITY_ATOL:
        raise ArithmeticError(f"e_H forms disagree: {direct!r} vs {via_mi!r}")
    return EHResult(direct, hx, hy, hxy, mi, via_mi)


def e_h(joint: JointTable) -> float:
    """1 - I(X;Y) / max(H(X), H(Y)) for an explicit joint distribution."""
    return e_h_parts(joint).value


def e_h_from_strings(x: SymbolString | Sequence, y: SymbolString | Sequence) -> float:
    """e_H of the empirical joint distribution of positionwise symbol pairs."""
    xs = x.data if isinstance(x, SymbolString) else tuple(x)
    ys = y.data if isinstance(y, SymbolString) else tuple(y)
    return e_h(JointTable.from_pairs(xs, ys))


@dataclass
class DistanceMatrix:
    labels: list[str]
    values: np.ndarray
    method: dict[str, Any]
    raw: np.ndarray | None = None
    details: dict[str, Any] = field(default_factory=dict)
    errors: list[dict[str, str]] = field(default_factory=list)
    audit: dict[str, Any] | None = None

    def to_phylip(self, digits: int = 6) -> str:
        lines = [str(len(self.labels))]
        for label, row in zip(self.labels, self.values):
            name = label[:10].ljust(10)
            lines.append(name + " " + " ".join(_fmt(v, digits) for v in row))
        return "\n".join(lines) + "\n"

    def to_csv(self, digits: int = 6) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + list(self.labels))
        for label, row in zip(self.labels, self.values):
            w.writerow([label] + [_fmt(v, digits) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "labels": list(self.labels),
            "values": _jsonable(self.values),
            "method": self.method,
            "raw": None if self.raw is None else _jsonable(self.raw),
            "details": self.details,
            "errors": self.errors,
            "audit": self.audit,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt(v: float, digits: int) -> str:
    if not math.isfinite(v):
        return "nan"
    return f"{v:.{digits}f}"


def _jsonable(a: np.ndarray):
    return [[None if not math.isfinite(v) else float(v) for v in row] for row in a]


def distance_matrix(
    corpus: Sequence[tuple[str, SymbolString]],
    method: str = "ncd",
    *,
    handle: CompressorHandle = BUILTIN,
    families: Iterable[Family | str] = ("bernoulli", "markov-1", "markov-2", "singleton"),
    epsilon: float = DEFAULT_EPSILON,
    pair_mode: str = "boundary",
    separator: bool = False,
    workers: int = 1,
) -> DistanceMatrix:
    """All pairwise distances over a labelled corpus.

    ``method`` is ``ncd``, ``nid-empirical`` or ``e-h``. Asymmetric raw
    values are averaged with their transpose; the raw matrix is kept. Pair
    failures are recorded in ``errors`` and leave NaN in the matrix.
    """
    if len(corpus) < 2:
        raise CorpusError("a distance matrix needs at least two corpus items")
    labels = [label for label, _ in corpus]
    if len(set(labels)) != len(labels):
        raise CorpusError("corpus labels must be unique")
    families = parse_families(families)
    meta: dict[str, Any] = {"distance": method}
    pair_fn: Callable[[SymbolString, SymbolString], tuple[float, Any]]
    if method == "ncd":
        meta.update(compressor=handle.name, separator=separator)

        def pair_fn(a, b):
            return ncd(handle, a, b, separator), None
    elif method == "nid-empirical":
        meta.update(families=[f.name for f in families], epsilon=epsilon, pair_mode=pair_mode)

        def pair_fn(a, b):
            parts = nid_empirical(a, b, families, epsilon, pair_mode)
            return parts.value, parts.as_dict()
    elif method == "e-h":
        def pair_fn(a, b):
            r = e_h_parts(JointTable.from_pairs(a.data, b.data))
            return r.value, r.as_dict()
    else:
        raise ValueError(f"unknown distance method {method!r}")

    m = len(corpus)
    jobs = [(i, j) for i in range(m) for j in range(m)]

    def run(ij):
        i, j = ij
        try:
            return ij, pair_fn(corpus[i][1], corpus[j][1]), None
        except EntropyToolkitError as exc:
            return ij, (math.nan, None), f"{type(exc).__name__}: {exc}"

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(ij) for ij in jobs]

    raw = np.full((m, m), math.nan)
    details: dict[str, Any] = {}
    errors = []
    for (i, j), (value, detail), err in results:
        raw[i, j] = value
        if detail is not None:
            details[f"{labels[i]}|{labels[j]}"] = detail
        if err is not None:
            errors.append({"x": labels[i], "y": labels[j], "error": err})
    symmetric = bool(np.array_equal(raw, raw.T, equal_nan=True))
    values = raw if symmetric else (raw + raw.T) / 2
    meta["symmetrized"] = not symmetric
    return DistanceMatrix(labels, values, meta, None if symmetric else raw, details, errors)


@dataclass(frozen=True)
class AuditReport:
    slack: float
    out_of_range: int
    asymmetric: int
    triangle: int
    identity: int
    non_finite: int
    worst: dict[str, float]

    @property
    def violations(self) -> int:
        return self.out_of_range + self.asymmetric + self.triangle + self.identity + self.non_finite

    def as_dict(self) -> dict[str, Any]:
        out = dict(self.__dict__)
        out["violations"] = self.violations
        return out


def audit_metric(matrix: DistanceMatrix | np.ndarray, slack: float = 0.0) -> AuditReport:
    """Count violations of range [0, 1], symmetry, triangle inequality and
    d(x, x) = 0, each allowed ``slack``. Never raises on bad values.

    Symmetry and triangle checks use the raw values when a matrix was
    symmetrised."""
    if isinstance(matrix, DistanceMatrix):
        d = matrix.raw if matrix.raw is not None else matrix.values
    else:
        d = np.asarray(matrix, dtype=float)
    m = d.shape[0]
    finite = np.isfinite(d)
    with np.errstate(invalid="ignore"):
        out_of_range = int(((d < -slack) | (d > 1 + slack))[finite].sum())
        asym = np.abs(d - d.T)
        asymmetric = int((asym > slack)[np.triu(finite & finite.T, 1)].sum())
        diag = np.diag(d)
        identity = int((diag > slack)[np.isfinite(diag)].sum())
        # excess[i, j, k] = d[i, k] - d[i, j] - d[j, k]
        excess = d[:, None, :] - (d[:, :, None] + d[None, :, :])
    idx = np.arange(m)
    distinct = (idx[:, None, None] != idx[None, :, None]) & (idx[None, :, None] != idx[None, None, :]) & (
        idx[:, None, None] != idx[None, None, :]
    )
    valid = distinct & np.isfinite(excess)
    triangle = int((excess[valid] > slack).sum())
    worst = {
        "min": float(np.nanmin(d)) if finite.any() else math.nan,
        "max": float(np.nanmax(d)) if finite.any() else math.nan,
        "asymmetry": float(np.nanmax(asym)) if finite.any() else math.nan,
        "triangle_excess": float(excess[valid].max()) if valid.any() else 0.0,
    }
    return AuditReport(slack, out_of_range, asymmetric, triangle, identity, int((~finite).sum()), worst)
