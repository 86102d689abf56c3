"""CLI behavior: formats, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from conftest import record_json_line
from octicount.cli import run


@pytest.fixture(scope="module")
def store(tmp_path_factory, _model_lines=None):
    # A small store: three quartics and three octics from the model builder.
    from conftest import model_tower_records

    records, _ = model_tower_records("8T23", 1, 500)
    path = tmp_path_factory.mktemp("store") / "in.jsonl"
    path.write_text("\n".join(record_json_line(r) for r in records) + "\n")
    out = tmp_path_factory.mktemp("store") / "store.jsonl"
    rc = run(["ingest", "--in", str(path), "--out", str(out)])
    assert rc == 0
    return str(out)


class TestExitCodes:
    def test_missing_required_flag_is_usage_error(self, capsys):
        assert run(["count"]) == 2
        capsys.readouterr()

    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 2
        capsys.readouterr()

    def test_bad_store_is_data_error(self, capsys, tmp_path):
        missing = str(tmp_path / "none.jsonl")
        assert run(["query", "--store", missing]) == 1
        capsys.readouterr()


class TestMalleAlpha:
    def test_8T23(self, capsys):
        assert run(["malle-alpha", "--label", "8T23"]) == 0
        assert capsys.readouterr().out.strip() == "1/3"

    def test_8T44(self, capsys):
        assert run(["malle-alpha", "--label", "8T44"]) == 0
        assert capsys.readouterr().out.strip() == "1"


class TestVerifySplittingCli:
    def test_json_payload(self, capsys):
        rc = run(["verify-splitting", "--group", "8T23", "--json", "-"])
        out = capsys.readouterr().out
        assert rc == 0
        payload = json.loads(out)
        assert set(payload) == {
            "splitting.lemma_splitting.8T23",
            "splitting.lemma_vpn.8T23",
        }
        assert all(v["status"] == "pass" for v in payload.values())

    def test_full_run_reports_documented_failure(self, capsys):
        # The 8T40 report carries the honest index-set failure, so the full
        # suite exits nonzero while all valuation subchecks pass.
        rc = run(["verify-splitting", "--json", "-"])
        payload = json.loads(capsys.readouterr().out)
        assert rc == 1
        parts = payload["splitting.lemma_81.8T40"]["details"]["parts"]
        assert parts["part1_valuation"] == "pass"
        assert parts["part2_valuation"] == "pass"
        assert parts["index_set"] == "fail"

    def test_deterministic_output(self, capsys):
        run(["verify-splitting", "--group", "8T23", "--json", "-"])
        first = capsys.readouterr().out
        run(["verify-splitting", "--group", "8T23", "--json", "-"])
        assert capsys.readouterr().out == first


class TestDataPipeline:
    def test_query_json(self, store, capsys):
        rc = run(["query", "--store", store, "--degree", "8", "--json", "-"])
        assert rc == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows and all(r["degree"] == 8 for r in rows)

    def test_query_csv_header(self, store, capsys):
        rc = run(["query", "--store", store, "--degree", "4", "--csv"])
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("label,")

    def test_audit_zero_violations(self, store, capsys):
        rc = run(["audit", "--store", store, "--json", "-"])
        payload = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert payload["status"] == "pass"

    def test_count_checkpoints(self, store, capsys):
        rc = run(["count", "--store", store, "--galois", "8T23",
                  "--checkpoints", "1000:100000000000:5", "--json", "-"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["counts"] == sorted(payload["counts"])

    def test_tail(self, store, capsys):
        rc = run(["tail", "--store", store, "--Z", "1", "--X", "1000000000"])
        assert rc == 0
        int(capsys.readouterr().out.strip())

    def test_constant_and_fit(self, store, capsys):
        rc = run(["constant", "--store", store, "--max-disc", "10000000",
                  "--prime-bound", "1000", "--json", "-"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] > 0 and payload["error_bound"] >= 0
        rc = run(["fit", "--store", store, "--max-disc", "10000000",
                  "--prime-bound", "1000", "--galois", "8T23", "--json", "-"])
        assert rc == 0
        fit = json.loads(capsys.readouterr().out)
        assert "sup_ratio" in fit and "slope" in fit
        assert fit["provenance"]

    def test_byte_identical_runs(self, store, capsys):
        args = ["audit", "--store", store, "--json", "-"]
        run(args)
        first = capsys.readouterr().out
        run(args)
        assert capsys.readouterr().out == first
