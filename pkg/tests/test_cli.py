"""Tests for the command-line surface and its exit-code contract."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from answersum.cli import main

from stub_scorer import StubScorer

DATA = Path(__file__).resolve().parents[1] / "src" / "answersum" / "data"
FIXTURES = Path(__file__).parent / "fixtures"

UNIT = str(DATA / "unit_12answers.json")
MINI_BENCH = str(DATA / "benchmark_mini.json")


@pytest.fixture()
def runner():
    return CliRunner()


class TestSummarizeCommand:
    def test_fixture_unit_prints_golden_lines(self, runner):
        result = runner.invoke(main, ["summarize", UNIT])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        golden = json.loads((DATA / "golden_summary.json").read_text())
        expected_ids = [s["id"] for s in golden["sentences"]]
        assert [line.split("\t")[0] for line in lines] == expected_ids
        assert all("\t" in line for line in lines)

    def test_out_matches_frozen_golden_file(self, runner, tmp_path):
        out = tmp_path / "summary.json"
        result = runner.invoke(main, ["summarize", UNIT, "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_bytes() == (DATA / "golden_summary.json").read_bytes()

    def test_byte_identical_across_runs(self, runner, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            runner.invoke(main, ["summarize", UNIT, "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_missing_file_exit_1(self, runner):
        result = runner.invoke(main, ["summarize", "/nonexistent/unit.json"])
        assert result.exit_code == 1
        assert "/nonexistent/unit.json" in result.stderr

    def test_remote_without_endpoint_exit_1(self, runner):
        result = runner.invoke(main, ["summarize", UNIT, "--scorer", "remote"])
        assert result.exit_code == 1
        assert "endpoint" in result.stderr.lower()

    def test_remote_against_stub(self, runner):
        with StubScorer(embed_dim=40) as stub:
            result = runner.invoke(
                main, ["summarize", UNIT, "--scorer", "remote",
                       "--endpoint", stub.endpoint]
            )
            routes = [path for path, _ in stub.requests]
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 5
        # one batched /score and one batched /embed per unit
        assert routes.count("/score") == 1
        assert routes.count("/embed") == 1

    def test_endpoint_from_environment(self, runner):
        with StubScorer(embed_dim=40) as stub:
            result = runner.invoke(
                main, ["summarize", UNIT, "--scorer", "remote"],
                env={"ANSWERSUM_ENDPOINT": stub.endpoint},
            )
        assert result.exit_code == 0

    def test_remote_protocol_error_exit_2(self, runner):
        with StubScorer(score_fn=lambda q, s: [2.0] * len(s)) as stub:
            result = runner.invoke(
                main, ["summarize", UNIT, "--scorer", "remote",
                       "--endpoint", stub.endpoint]
            )
        assert result.exit_code == 2
        assert "usefulness" in result.stderr

    def test_query_override(self, runner):
        result = runner.invoke(
            main, ["summarize", UNIT, "how to remove entries from a map"]
        )
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 5

    @pytest.mark.parametrize("command", ["summarize", "evaluate"])
    def test_help_lists_module_defaults(self, runner, command):
        result = runner.invoke(main, [command, "--help"])
        for fragment in ("0.85", "0.0001", "0.8", "5", "30"):
            assert fragment in result.output


class TestEvaluateCommand:
    def test_full_mode_prints_metric_table(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main, ["evaluate", MINI_BENCH, "--out", str(out)]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert "ROUGE-1" in lines[0] and "ROUGE-L" in lines[0]
        assert len(lines) == 5  # header + rule + three metric rows
        report = json.loads(out.read_text())
        assert set(report["aggregate"]) == {"rouge1", "rouge2", "rougeL"}
        assert len(report["per_query"]) == 2

    def test_ablation_structure_via_summaries(self, runner, tmp_path):
        paths = {}
        for mode in ("stage12", "full"):
            path = tmp_path / f"{mode}.json"
            result = runner.invoke(
                main, ["evaluate", MINI_BENCH, "--ablation", mode,
                       "--summaries-out", str(path)]
            )
            assert result.exit_code == 0
            paths[mode] = json.loads(path.read_text())["summaries"]
        for stage12, full in zip(paths["stage12"], paths["full"]):
            ranking = [
                r["id"]
                for r in sorted(
                    (r for r in stage12["stage_trace"]
                     if r["centrality"] is not None),
                    key=lambda r: (-r["centrality"], r["id"]),
                )
            ]
            positions = [ranking.index(s["id"]) for s in full["sentences"]]
            assert positions == sorted(positions)

    def test_stage1_ordering_is_usefulness(self, runner, tmp_path):
        path = tmp_path / "stage1.json"
        result = runner.invoke(
            main, ["evaluate", MINI_BENCH, "--ablation", "stage1",
                   "--summaries-out", str(path)]
        )
        assert result.exit_code == 0
        for summary in json.loads(path.read_text())["summaries"]:
            ranked = sorted(
                summary["stage_trace"],
                key=lambda r: (-r["usefulness"], r["id"]),
            )
            expected = [r["id"] for r in ranked[: len(summary["sentences"])]]
            assert [s["id"] for s in summary["sentences"]] == expected

    def test_malformed_benchmark_names_entry(self, runner, tmp_path):
        data = json.loads((DATA / "benchmark_mini.json").read_text())
        data["entries"][1]["references"][0] = ["too", "short"]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        result = runner.invoke(main, ["evaluate", str(bad)])
        assert result.exit_code == 1
        assert "entry 1" in result.stderr

    def test_jobs_flag_preserves_order(self, runner, tmp_path):
        single = tmp_path / "single.json"
        parallel = tmp_path / "parallel.json"
        runner.invoke(main, ["evaluate", MINI_BENCH, "--out", str(single)])
        runner.invoke(main, ["evaluate", MINI_BENCH, "--jobs", "4",
                             "--out", str(parallel)])
        assert single.read_bytes() == parallel.read_bytes()


class TestExtractUnitsCommand:
    def test_fixture_dumps(self, runner, tmp_path):
        out = tmp_path / "units.json"
        result = runner.invoke(
            main, ["extract-units", str(FIXTURES / "Posts.xml"),
                   str(FIXTURES / "PostLinks.xml"), "--out", str(out)]
        )
        assert result.exit_code == 0
        assert "units_kept: 1" in result.output
        assert "units_dropped_answer_count: 1" in result.output
        assert "answers_dropped_no_vote: 1" in result.output
        payload = json.loads(out.read_text())
        assert len(payload["units"]) == 1
        assert len(payload["units"][0]["answers"]) == 12

    def test_empty_dumps(self, runner, tmp_path):
        posts = tmp_path / "Posts.xml"
        links = tmp_path / "PostLinks.xml"
        posts.write_text("<posts></posts>")
        links.write_text("<postlinks></postlinks>")
        out = tmp_path / "units.json"
        result = runner.invoke(
            main, ["extract-units", str(posts), str(links), "--out", str(out)]
        )
        assert result.exit_code == 0
        assert "wrote 0 units" in result.output

    def test_nonexistent_path_exit_1(self, runner, tmp_path):
        result = runner.invoke(
            main, ["extract-units", "/no/such/Posts.xml",
                   str(FIXTURES / "PostLinks.xml"),
                   "--out", str(tmp_path / "u.json")]
        )
        assert result.exit_code == 1


class TestBuildTripletsCommand:
    def test_same_seed_byte_identical(self, runner, tmp_path):
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            result = runner.invoke(
                main, ["build-triplets", str(FIXTURES / "Posts.xml"),
                       str(FIXTURES / "PostLinks.xml"), "--seed", "42",
                       "--out", str(out)]
            )
            assert result.exit_code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert len(outs[0].splitlines()) == 3

    def test_no_valid_negative_warns(self, runner, tmp_path):
        posts = tmp_path / "Posts.xml"
        posts.write_text(
            "<posts>"
            '<row Id="1" PostTypeId="1" Title="First java question title" '
            'Body="b" Tags="&lt;java&gt;" Score="1" />'
            '<row Id="2" PostTypeId="1" Title="Second java question title" '
            'Body="b" Tags="&lt;java&gt;" Score="1" />'
            "</posts>"
        )
        links = tmp_path / "PostLinks.xml"
        links.write_text(
            '<postlinks><row Id="1" PostId="2" RelatedPostId="1" '
            'LinkTypeId="3" /></postlinks>'
        )
        out = tmp_path / "t.jsonl"
        result = runner.invoke(
            main, ["build-triplets", str(posts), str(links), "--out", str(out)]
        )
        assert result.exit_code == 0
        assert out.read_text() == ""
        assert "triplets_skipped_no_negative: 1" in result.output
        assert "wrote 0 triplets" in result.output
