"""Command-line interface.

Exit codes: 0 success, 1 some corpus items or pairs failed, 2 usage,
configuration or input errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Any

from . import __version__
from .compressors import (
    CompressedBlob,
    CompressorHandle,
    huffman_compress,
    huffman_decompress,
)
from .core import Alphabet, EntropyToolkitError, SymbolString, infer_alphabet, parse_string
from .distances import JointTable, audit_metric, distance_matrix, e_h_parts
from .empirical import entropy_profile
from .models import DEFAULT_EPSILON, bernoulli_model, fit, parse_families, select_model, uniform_model
from .typicality import atypical_mass_curve, typical_set_report

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2

DEFAULTS: dict[str, Any] = {
    "k_max": 2,
    "epsilon": DEFAULT_EPSILON,
    "families": None,
    "compressor": "builtin",
    "format": None,
    "seed": 0,
    "separator_mode": False,
    "alphabet_mode": "infer-global",
    "slack": 1e-9,
    "workers": 1,
}


class UsageError(Exception):
    pass


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _write_output(path: str | None, data: str | bytes) -> None:
    """Write once, atomically (temp file + rename)."""
    raw = data.encode() if isinstance(data, str) else data
    if path in (None, "-"):
        sys.stdout.buffer.write(raw)
        sys.stdout.buffer.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    with os.fdopen(fd, "wb") as fh:
        fh.write(raw)
    os.replace(tmp, target)


def _effective_config(args: argparse.Namespace) -> dict[str, Any]:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["families"] is None:
        cfg["families"] = f"bernoulli,markov-1..{cfg['k_max']},singleton,uniform" if cfg["k_max"] >= 1 else "bernoulli,singleton,uniform"
    if isinstance(cfg["families"], list):
        cfg["families"] = ",".join(cfg["families"])
    if cfg["epsilon"] < 0:
        raise UsageError("epsilon must be non-negative")
    if cfg["k_max"] < 0:
        raise UsageError("k-max must be non-negative")
    try:
        families = parse_families(cfg["families"])
    except EntropyToolkitError as exc:
        raise UsageError(f"bad --families: {exc}") from None
    cfg["families"] = [f.name for f in families]
    return cfg


def _envelope(command: str, cfg: dict[str, Any], result: Any) -> str:
    doc = {
        "tool": {"name": "eentropy", "version": __version__},
        "command": command,
        "config": cfg,
        "result": result,
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


def _string_from(path: str) -> SymbolString:
    raw = _read_input(path)
    return parse_string(raw, infer_alphabet(raw))


def cmd_entropy(args, cfg) -> int:
    x = _string_from(args.input)
    rows = entropy_profile(x, cfg["k_max"])
    fmt = cfg["format"] or "csv"
    if fmt == "json":
        result = {"input": args.input, "n": x.n, "alphabet_size": x.alphabet.size,
                  "profile": [{"k": k, "h_k": h} for k, h in rows]}
        _write_output(args.output, _envelope("entropy", cfg, result))
    elif fmt == "csv":
        lines = ["k,h_k"] + [f"{k},{h!r}" for k, h in rows]
        _write_output(args.output, "\n".join(lines) + "\n")
    else:
        raise UsageError(f"entropy supports --format csv or json, not {fmt}")
    return EXIT_OK


def cmd_select(args, cfg) -> int:
    x = _string_from(args.input)
    result = select_model(x, cfg["families"], cfg["epsilon"])
    summary = result.summary()
    summary["input"] = args.input
    _write_output(args.output, _envelope("select", cfg, summary))
    return EXIT_OK


def load_manifest(path: str) -> list[tuple[str, Path]]:
    p = Path(path)
    if p.is_dir():
        return [(f.name, f) for f in sorted(p.iterdir()) if f.is_file() and not f.name.startswith(".")]
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    entries = []
    for row in csv.reader(text.splitlines()):
        if not row or row[0].startswith("#"):
            continue
        if len(row) != 2:
            raise UsageError(f"manifest rows need exactly two columns (label, path): {row}")
        label, file = (c.strip() for c in row)
        if label == "label" and file == "path":
            continue
        fp = Path(file)
        entries.append((label, fp if fp.is_absolute() else p.parent / fp))
    labels = [label for label, _ in entries]
    if len(set(labels)) != len(labels):
        raise UsageError("manifest labels must be unique")
    return entries


def cmd_matrix(args, cfg) -> int:
    entries = load_manifest(args.manifest)
    loaded, failures = [], []
    for label, path in entries:
        try:
            loaded.append((label, path.read_bytes()))
        except OSError as exc:
            failures.append({"label": label, "path": str(path), "error": exc.strerror})
    for f in failures:
        print(f"error: {f['label']}: {f['path']}: {f['error']}", file=sys.stderr)
    if len(loaded) < 2:
        raise UsageError("need at least two readable corpus entries")
    if cfg["alphabet_mode"] == "infer-global":
        alphabet = infer_alphabet(*(raw for _, raw in loaded))
        corpus = [(label, parse_string(raw, alphabet)) for label, raw in loaded]
    elif cfg["alphabet_mode"] == "infer-per-file":
        # pairs need one alphabet, so each file's inferred symbols are merged
        # in manifest order; per-file order only matters for single-item use
        alphabet: Alphabet | None = None
        for _, raw in loaded:
            a = infer_alphabet(raw)
            alphabet = a if alphabet is None else alphabet.union(a)
        corpus = [(label, parse_string(raw, alphabet)) for label, raw in loaded]
    else:
        raise UsageError(f"unknown alphabet mode {cfg['alphabet_mode']!r}")

    method = args.method
    try:
        handle = CompressorHandle.parse(cfg["compressor"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    matrix = distance_matrix(
        corpus,
        method,
        handle=handle,
        families=cfg["families"],
        epsilon=cfg["epsilon"],
        pair_mode="separator" if cfg["separator_mode"] else "boundary",
        separator=cfg["separator_mode"],
        workers=cfg["workers"],
    )
    matrix.method["tool_version"] = __version__
    report = audit_metric(matrix, cfg["slack"]).as_dict()
    matrix.audit = report
    fmt = cfg["format"] or "phylip"
    if fmt == "phylip":
        text = matrix.to_phylip()
    elif fmt == "csv":
        text = matrix.to_csv()
    elif fmt == "json":
        doc = json.loads(matrix.to_json())
        doc["manifest_errors"] = failures
        text = _envelope("matrix", cfg, doc)
    else:
        raise UsageError(f"unknown format {fmt!r}")
    _write_output(args.output, text)
    if fmt != "json":
        audit = {"audit": report, "errors": matrix.errors, "manifest_errors": failures, "method": matrix.method}
        sys.stderr.write(json.dumps(audit, sort_keys=True, default=_json_default) + "\n")
    return EXIT_PARTIAL if failures or matrix.errors else EXIT_OK


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad probability list {text!r}") from None


def cmd_typical(args, cfg) -> int:
    kind = args.model
    if kind == "bernoulli":
        if not args.probs or args.n is None:
            raise UsageError("--model bernoulli needs --probs and --n")
        model = bernoulli_model(_parse_probs(args.probs), args.n)
    elif kind == "uniform":
        if args.n is None:
            raise UsageError("--model uniform needs --n")
        model = uniform_model(args.alphabet_size, args.n)
    elif kind == "fit":
        if not args.input:
            raise UsageError("--model fit needs --input")
        family = args.family or "bernoulli"
        model = fit(_string_from(args.input), family)
    else:
        raise UsageError(f"unknown model {kind!r}")
    report = typical_set_report(model, cfg["epsilon"])
    result = report.summary()
    if args.n_list:
        if model.family.kind not in ("bernoulli", "uniform"):
            raise UsageError("--n-list needs an i.i.d. model")
        ns = [int(v) for v in args.n_list.split(",")]
        result["atypical_curve"] = [
            {"n": n, "closed_form": a, "enumerated": b}
            for (n, a), (_, b) in zip(
                atypical_mass_curve(model, ns, cfg["epsilon"]),
                atypical_mass_curve(model, ns, cfg["epsilon"], method="enumerate"),
            )
        ]
    _write_output(args.output, _envelope("typical", cfg, result))
    return EXIT_OK


def cmd_compress(args, cfg) -> int:
    x = _string_from(args.input)
    blob = huffman_compress(x)
    if args.split:
        info = {"header_bits": blob.header_bits, "payload_bits": blob.payload_bits, "total_bits": blob.total_bits,
                "bytes": len(blob.to_bytes()), "n": x.n}
        line = " ".join(f"{k}={v}" for k, v in info.items())
        print(line, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    _write_output(args.output, blob.to_bytes())
    return EXIT_OK


def cmd_decompress(args, cfg) -> int:
    data = _read_input(args.input)
    CompressedBlob.from_bytes(data)
    _write_output(args.output, huffman_decompress(data).to_bytes())
    return EXIT_OK


def _load_table(path: str) -> JointTable:
    text = _read_input(path).decode()
    try:
        doc = json.loads(text)
    except ValueError:
        rows = [r for r in csv.reader(text.splitlines()) if r]
        try:
            doc = [[float(v) for v in r] for r in rows]
        except ValueError:
            raise UsageError(f"{path}: joint table must be JSON or numeric CSV") from None
    if isinstance(doc, dict):
        doc = doc.get("p")
    try:
        return JointTable(doc)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_eh(args, cfg) -> int:
    if args.table:
        table = _load_table(args.table)
        source: dict[str, Any] = {"table": args.table}
    else:
        if not (args.x and args.y):
            raise UsageError("eh needs two input files or --table")
        table = JointTable.from_pairs(_read_input(args.x), _read_input(args.y))
        source = {"x": args.x, "y": args.y}
    parts = e_h_parts(table)
    result = {"source": source, **parts.as_dict()}
    _write_output(args.output, _envelope("eh", cfg, result))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option defaults (same keys as the flags)")
    common.add_argument("--k-max", type=int, dest="k_max")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--families", help="e.g. bernoulli,markov-1..3,singleton")
    common.add_argument("--compressor", help="builtin or external:'<command>'")
    common.add_argument("--format", choices=["json", "csv", "phylip"])
    common.add_argument("--output", "-o", help="output file (default stdout)")
    common.add_argument("--seed", type=int, help="recorded in the effective config")

    parser = argparse.ArgumentParser(prog="eentropy", description="Empirical entropy and compression distances.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="k-th order empirical entropy profile")
    p.add_argument("input", help="file or - for stdin")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("select", parents=[common], help="two-part model selection")
    p.add_argument("input")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("matrix", parents=[common], help="pairwise distance matrix over a corpus")
    p.add_argument("manifest", help="CSV of label,path or a directory")
    p.add_argument("--method", choices=["ncd", "nid-empirical", "e-h"], default="ncd")
    p.add_argument("--separator-mode", action="store_const", const=True, dest="separator_mode")
    p.add_argument("--alphabet-mode", choices=["infer-global", "infer-per-file"], dest="alphabet_mode")
    p.add_argument("--slack", type=float)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("typical", parents=[common], help="typical-set report by enumeration")
    p.add_argument("--model", choices=["bernoulli", "uniform", "fit"], default="bernoulli")
    p.add_argument("--probs", help="comma-separated symbol probabilities")
    p.add_argument("--n", type=int)
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--input", help="data to fit when --model fit")
    p.add_argument("--family", help="family to fit when --model fit")
    p.add_argument("--n-list", help="comma-separated lengths for the atypical mass curve")
    p.set_defaults(func=cmd_typical)

    p = sub.add_parser("compress", parents=[common], help="Huffman-compress a file to a blob")
    p.add_argument("input")
    p.add_argument("--split", action="store_true", help="print header/payload bit counts")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", parents=[common], help="restore a file from a blob")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("eh", parents=[common], help="mutual-information distance e_H")
    p.add_argument("x", nargs="?")
    p.add_argument("y", nargs="?")
    p.add_argument("--table", help="joint table as JSON (nested list or {'p': ...}) or CSV")
    p.set_defaults(func=cmd_eh)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EntropyToolkitError as exc:
        where = getattr(args, "input", None) or getattr(args, "manifest", None)
        prefix = f"{where}: " if where else ""
        print(f"error: {prefix}{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
