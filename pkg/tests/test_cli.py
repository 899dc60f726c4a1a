"""CLI contract: golden outputs, byte stability and exit codes.

Regenerate goldens with ``EENTROPY_UPDATE_GOLDEN=1 pytest tests/test_cli.py``.
"""
import json
import os
from pathlib import Path

import pytest

from eentropy import __version__
from eentropy.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("EENTROPY_UPDATE_GOLDEN") == "1"

GOLDEN_CASES = {
    "entropy_short.csv": ["entropy", "short.txt", "--k-max", "1"],
    "entropy_parity.json": ["entropy", "corpus/parity.txt", "--k-max", "3", "--format", "json"],
    "select_parity.json": ["select", "corpus/parity.txt", "--families", "bernoulli,markov-1,markov-2"],
    "select_const.json": ["select", "corpus/const.txt"],
    "select_config.json": ["select", "corpus/mixed.txt", "--config", "config.json"],
    "matrix_ncd.phylip": ["matrix", "manifest.csv", "--method", "ncd"],
    "matrix_ncd.csv": ["matrix", "manifest.csv", "--method", "ncd", "--format", "csv"],
    "matrix_nid.json": ["matrix", "manifest.csv", "--method", "nid-empirical", "--format", "json",
                        "--families", "bernoulli,markov-1..2,singleton"],
    "matrix_dir_eh.csv": ["matrix", "aligned", "--method", "e-h", "--format", "csv"],
    "typical_biased.json": ["typical", "--probs", "0.7,0.3", "--n", "12", "--epsilon", "0.2", "--n-list", "8,12,16"],
    "typical_fair.json": ["typical", "--probs", "0.5,0.5", "--n", "10", "--epsilon", "0.1"],
    "eh_table.json": ["eh", "--table", "table.json"],
    "eh_strings.json": ["eh", "corpus/mixed.txt", "corpus/mixed.txt"],
}


def run(argv, capsysbinary):
    code = main(argv)
    out, err = capsysbinary.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def in_fixtures(monkeypatch):
    monkeypatch.chdir(FIXTURES)


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, capsysbinary):
    code, out, _ = run(GOLDEN_CASES[name], capsysbinary)
    assert code == 0
    path = GOLDEN / name
    if UPDATE:
        path.write_bytes(out)
    assert out == path.read_bytes()
    code2, out2, _ = run(GOLDEN_CASES[name], capsysbinary)
    assert (code2, out2) == (code, out)


def test_json_envelope_has_version_and_config(capsysbinary):
    _, out, _ = run(GOLDEN_CASES["select_parity.json"], capsysbinary)
    doc = json.loads(out)
    assert doc["tool"]["version"] == __version__
    assert doc["config"]["epsilon"] == 0.01
    assert doc["result"]["winner"] == "markov-1"


def test_entropy_rows(capsysbinary):
    _, out, _ = run(["entropy", "short.txt", "--k-max", "1"], capsysbinary)
    assert out.decode().splitlines() == ["k,h_k", "0,1.0", "1,0.0"]


def test_select_constant_winner_bernoulli(capsysbinary):
    _, out, _ = run(["select", "corpus/const.txt"], capsysbinary)
    result = json.loads(out)["result"]
    assert result["winner"] == "bernoulli"
    assert result["entropy_bits"] == 0


def test_phylip_layout(capsysbinary):
    _, out, _ = run(["matrix", "manifest.csv"], capsysbinary)
    lines = out.decode().splitlines()
    assert lines[0] == "3"
    assert [l[:10] for l in lines[1:]] == ["parity    ", "coin      ", "mixed     "]
    rows = [[float(v) for v in l[11:].split()] for l in lines[1:]]
    assert all(rows[i][j] == rows[j][i] for i in range(3) for j in range(3))


def test_matrix_audit_on_stderr(capsysbinary):
    _, _, err = run(["matrix", "manifest.csv"], capsysbinary)
    audit = json.loads(err)
    assert audit["audit"]["asymmetric"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["entropy", "empty.txt"],
        ["entropy", "short.txt", "--k-max", "9"],
        ["entropy", "no-such-file.txt"],
        ["select", "short.txt", "--families", "bernoulli,ppm"],
        ["select", "short.txt", "--config", "bad_config.json"],
        ["select", "short.txt", "--epsilon", "-1"],
        ["decompress", "short.txt"],
        ["eh", "corpus/const.txt", "corpus/const.txt"],
        ["typical", "--probs", "0.5,0.5", "--n", "40"],
    ],
)
def test_usage_errors_exit_2(argv, capsysbinary):
    code, _, err = run(argv, capsysbinary)
    assert code == 2
    assert err.startswith(b"error:")


def test_argparse_errors_exit_2(capsysbinary):
    with pytest.raises(SystemExit) as info:
        main(["bogus-command"])
    assert info.value.code == 2


def test_missing_manifest_entry_exit_1(capsysbinary):
    code, out, err = run(["matrix", "manifest_missing.csv"], capsysbinary)
    assert code == 1
    assert b"ghost" in err
    assert out.decode().splitlines()[0] == "2"


def test_compress_decompress_roundtrip(tmp_path, capsysbinary):
    blob, restored = tmp_path / "x.blob", tmp_path / "x.out"
    code, out, _ = run(["compress", "corpus/coin.txt", "-o", str(blob), "--split"], capsysbinary)
    assert code == 0
    fields = dict(kv.split("=") for kv in out.decode().split())
    assert int(fields["total_bits"]) == int(fields["header_bits"]) + int(fields["payload_bits"])
    assert run(["decompress", str(blob), "-o", str(restored)], capsysbinary)[0] == 0
    assert restored.read_bytes() == (FIXTURES / "corpus/coin.txt").read_bytes()


def test_compress_split_parity_numbers(tmp_path, capsysbinary):
    _, out, _ = run(["compress", "short.txt", "-o", str(tmp_path / "b"), "--split"], capsysbinary)
    assert out.decode().split() == ["header_bits=55", "payload_bits=8", "total_bits=63", "bytes=8", "n=8"]


def test_stdin_dash(monkeypatch, capsysbinary):
    import io
    import sys

    class FakeStdin:
        buffer = io.BytesIO(b"0101010101")

    monkeypatch.setattr(sys, "stdin", FakeStdin)
    code, out, _ = run(["entropy", "-", "--k-max", "1"], capsysbinary)
    assert code == 0
    assert out.decode().splitlines()[2] == "1,0.0"


def test_external_compressor_matrix(capsysbinary):
    code, out, _ = run(["matrix", "manifest.csv", "--compressor", "external:gzip -n -9"], capsysbinary)
    assert code == 0
    assert out.decode().splitlines()[0] == "3"


def test_e_h_matrix_unequal_lengths_is_partial(capsysbinary):
    code, out, err = run(["matrix", "corpus", "--method", "e-h", "--format", "csv"], capsysbinary)
    assert code == 1
    assert b"LengthMismatch" in err
