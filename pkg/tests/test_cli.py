import json

import pytest

from sandpiles import cli
from sandpiles.abelian import from_cyclic_orders
from sandpiles.verify import VerificationFailure


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if captured.out.strip() else None
    return code, doc, captured.err


def test_no_arguments_is_usage_error(capsys):
    assert cli.run([]) == 2
    assert cli.run(["frobnicate"]) == 2


def test_db_document(capsys):
    code, doc, err = run_cli(capsys, "db", "4", "3")
    assert code == 0
    assert doc["command"] == "db"
    assert doc["family"] == "de_bruijn"
    assert (doc["n"], doc["d"]) == (4, 3)
    assert doc["sandpile"] == {"invariant_factors": ["4"], "order": "4"}
    assert doc["sand_dune"] == {"invariant_factors": ["2", "8"], "order": "16"}
    assert doc["spanning_trees"] == "4"
    assert doc["agrees"] is True
    assert doc["method"] == "closed_form+snf"
    assert isinstance(doc["elapsed_ms"], int)


def test_kautz_document(capsys):
    code, doc, err = run_cli(capsys, "kautz", "3", "2")
    assert code == 0
    assert doc["family"] == "kautz"
    assert doc["sandpile"]["invariant_factors"] == ["3"]
    assert doc["agrees"] is True


def test_root_option(capsys):
    for root in ("0", "1", "3"):
        code, doc, _ = run_cli(capsys, "db", "6", "2", "--root", root)
        assert code == 0 and doc["agrees"] is True


def test_consecutive_matches_db(capsys):
    _, doc_db, _ = run_cli(capsys, "db", "6", "2")
    code, doc, _ = run_cli(capsys, "consecutive", "2", "6", "2", "0")
    assert code == 0
    assert doc["method"] == "snf"
    assert doc["sandpile"] == doc_db["sandpile"]


def test_consecutive_rejects_degenerate_multiplier(capsys):
    code, doc, err = run_cli(capsys, "consecutive", "2", "4", "8", "0")
    assert code == 2
    assert doc is None
    assert "error:" in err


def test_snf_file(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text("2 2\n2 4\n4 2\n")
    code, doc, _ = run_cli(capsys, "snf", str(path))
    assert code == 0
    assert doc["invariant_factors"] == ["2", "6"]
    assert (doc["rows"], doc["cols"], doc["rank"]) == (2, 2, 2)


def test_snf_missing_and_malformed_files(tmp_path, capsys):
    code, doc, err = run_cli(capsys, "snf", str(tmp_path / "absent.txt"))
    assert code == 2 and doc is None and "error:" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 2\n")
    code, doc, err = run_cli(capsys, "snf", str(bad))
    assert code == 2 and doc is None and "error:" in err


def test_circulant_routes(capsys):
    code, doc, err = run_cli(capsys, "circulant", "--n", "4", "--q", "3", "--restricted")
    assert code == 0
    assert doc["method"] == "closed_form"
    assert doc["group"]["invariant_factors"] == ["2", "8"]
    code, doc, _ = run_cli(
        capsys, "circulant", "--n", "4", "--q", "4", "--restricted", "--mod-x"
    )
    assert code == 0
    assert doc["method"] == "torsion_counts"
    code, doc, _ = run_cli(
        capsys, "circulant", "--n", "4", "--q", "3", "--restricted", "--brute"
    )
    assert code == 0
    assert doc["method"] == "brute"
    assert doc["group"]["invariant_factors"] == ["2", "8"]


def test_circulant_full_group_and_fallback(capsys):
    # Full group carries the F_q^* factor on top of the restricted one.
    code, doc, _ = run_cli(capsys, "circulant", "--n", "3", "--q", "4")
    assert code == 0
    restricted = from_cyclic_orders([3, 3])  # C'(3, 4): two fixed cosets
    assert doc["group"]["order"] == str(restricted.order * 3)
    # Mixed modulus over a proper extension: quotient falls back to brute.
    code, doc, err = run_cli(
        capsys, "circulant", "--n", "6", "--q", "4", "--restricted", "--mod-x"
    )
    assert code == 0
    assert doc["method"] == "brute"
    assert "enumerating" in err


def test_circulant_closed_refusal_and_cap(capsys):
    code, doc, err = run_cli(
        capsys, "circulant", "--n", "6", "--q", "4", "--restricted", "--mod-x", "--closed"
    )
    assert code == 2 and doc is None and "error:" in err
    code, doc, err = run_cli(
        capsys, "circulant", "--n", "6", "--q", "4", "--mod-x", "--brute", "--cap", "64"
    )
    assert code == 2 and doc is None and "64" in err
    code, _, _ = run_cli(capsys, "circulant", "--n", "4", "--q", "6")
    assert code == 2
    code, _, _ = run_cli(capsys, "circulant", "--n", "4", "--q", "4", "--brute", "--closed")
    assert code == 2


def test_family_disagreement_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "sandpile_group", lambda n, d: from_cyclic_orders([999]))
    code, doc, err = run_cli(capsys, "db", "4", "3")
    assert code == 1
    assert doc["agrees"] is False
    assert "disagreement" in err


def test_verify_small_sweep(capsys):
    code, doc, err = run_cli(
        capsys,
        "verify",
        "--n-max", "6",
        "--d-max", "3",
        "--q-max", "3",
        "--brute-cap", "1024",
    )
    assert code == 0
    assert doc["passed"] is True
    assert doc["total_comparisons"] == sum(doc["checks"].values()) > 0
    assert err  # progress chatter goes to stderr, not into the JSON


def test_verify_failure_path(capsys, monkeypatch):
    def explode(config, progress=None):
        raise VerificationFailure("synthetic mismatch for the failure path")

    monkeypatch.setattr(cli, "run_all", explode)
    code, doc, err = run_cli(capsys, "verify", "--n-max", "4")
    assert code == 1
    assert doc["passed"] is False
    assert "synthetic mismatch" in doc["failure"]
    assert "verification failed" in err


def test_documents_are_deterministic(capsys):
    _, first, _ = run_cli(capsys, "db", "8", "3")
    _, second, _ = run_cli(capsys, "db", "8", "3")
    first.pop("elapsed_ms")
    second.pop("elapsed_ms")
    assert first == second


def test_stdout_is_exactly_one_json_document(capsys):
    code = cli.run(["circulant", "--n", "9", "--q", "3", "--restricted"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)  # would fail if anything else leaked to stdout
    assert doc["group"]["invariant_factors"] == ["3", "3", "3", "3", "9", "9"]
