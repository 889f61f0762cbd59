"""Test the command-line front end."""
import json

import pytest

from stylescope.cli import run
from stylescope.services import corpus_service


@pytest.fixture
def five_word_lexicon_file(tmp_path):
    path = tmp_path / "five.txt"
    path.write_text("the\nof\nand\nto\nin\n", encoding="utf-8")
    return path


@pytest.fixture
def author_tables(tmp_path, author_a, author_b, synthetic):
    """Three count tables over the five-word lexicon."""
    gamma = synthetic("gamma", (0.04, 0.04, 0.04, 0.04, 0.04), seed=33)
    return [
        corpus_service.save_counts(coll, tmp_path / f"{coll.label}.csv")
        for coll in (author_a, author_b, gamma)
    ]


def run_json(capsys, argv):
    code = run([str(a) for a in argv])
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


class TestUsage:
    """Test argument handling and exit codes."""

    def test_no_command(self, capsys):
        """A missing subcommand is a usage error."""
        assert run([]) == 2

    def test_stats_without_input(self, capsys):
        """stats needs --collection."""
        assert run(["stats"]) == 2
        assert "--collection" in capsys.readouterr().err

    def test_bootstrap_requires_seed(self, capsys, toy_table):
        """Stochastic commands refuse to run without a seed."""
        assert run(["bootstrap", "--a", str(toy_table), "--b", str(toy_table)]) == 2

    def test_missing_file_is_data_error(self, capsys, tmp_path):
        """Unreadable input exits 1 with the file named."""
        code = run(["stats", "--collection", str(tmp_path / "nope.csv")])
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_lexicon_mismatch_is_data_error(self, capsys, toy_table):
        """A table counted against another lexicon exits 1."""
        assert run(["stats", "--collection", str(toy_table)]) == 1
        assert "Lexicon mismatch" in capsys.readouterr().err


class TestStats:
    """Test the variability commands."""

    def test_toy_stats(self, capsys, toy_table, toy_lexicon_file):
        """The toy table reports V4 = 1.0575."""
        report = run_json(
            capsys, ["stats", "--collection", toy_table, "--lexicon", toy_lexicon_file]
        )
        assert report["V4"] == pytest.approx(1.0575, abs=1e-4)
        assert report["df"] == 2
        assert report["K"] == 2

    def test_table_format(self, capsys, toy_table, toy_lexicon_file):
        """Table output lists the collection and its statistics."""
        code = run(
            ["stats", "--collection", str(toy_table), "--lexicon", str(toy_lexicon_file),
             "--format", "table"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "V4" in out
        assert "1.05" in out
        assert out.splitlines()[3].startswith("toy")

    def test_output_file(self, capsys, tmp_path, toy_table, toy_lexicon_file):
        """--output writes the report instead of printing it."""
        target = tmp_path / "report.json"
        code = run(
            ["stats", "--collection", str(toy_table), "--lexicon", str(toy_lexicon_file),
             "--output", str(target)]
        )
        assert code == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["chisq"] == pytest.approx(2.1150, abs=1e-4)

    def test_first_n(self, capsys, author_tables, five_word_lexicon_file):
        """--first keeps the leading documents."""
        report = run_json(
            capsys,
            ["stats", "--collection", author_tables[0], "--first", 10,
             "--lexicon", five_word_lexicon_file],
        )
        assert report["K"] == 10
        assert report["label"] == "alpha10"

    def test_cells(self, capsys, toy_table, toy_lexicon_file):
        """cells reports small-cell fractions."""
        stats = run_json(
            capsys, ["cells", "--collection", toy_table, "--lexicon", toy_lexicon_file]
        )
        assert stats["frac_expected_below_1"] == pytest.approx(2 / 6)

    def test_merge_label_follows_output_file(
        self, capsys, tmp_path, author_tables, five_word_lexicon_file
    ):
        """Without --label the merged table reloads under the label it reported."""
        out = tmp_path / "pair.csv"
        reports = run_json(
            capsys,
            ["merge", "--collection", author_tables[0], author_tables[1],
             "--out", out, "--lexicon", five_word_lexicon_file],
        )
        assert reports[2]["label"] == "pair"
        reloaded = run_json(
            capsys, ["stats", "--collection", out, "--lexicon", five_word_lexicon_file]
        )
        assert reloaded["label"] == "pair"
        assert reloaded["K"] == reports[2]["K"]
        assert reloaded["V4"] == pytest.approx(reports[2]["V4"], rel=1e-12)

    def test_merge(self, capsys, tmp_path, author_tables, five_word_lexicon_file):
        """merge reports each part and the combination, and can save it."""
        out = tmp_path / "merged.csv"
        reports = run_json(
            capsys,
            ["merge", "--collection", author_tables[0], author_tables[1], "--label", "both",
             "--out", out, "--lexicon", five_word_lexicon_file],
        )
        assert [r["label"] for r in reports] == ["alpha", "beta", "both"]
        assert reports[2]["K"] == reports[0]["K"] + reports[1]["K"]
        assert reports[2]["V4"] > max(reports[0]["V4"], reports[1]["V4"])
        assert out.exists()


class TestIngest:
    """Test the ingest command."""

    def test_directory(self, capsys, tmp_path, toy_lexicon_file):
        """A directory of texts becomes one count table and an exclusion log."""
        texts = tmp_path / "texts"
        texts.mkdir()
        (texts / "a.txt").write_text("the of the end " * 5, encoding="utf-8")
        (texts / "b.txt").write_text("of the " * 6, encoding="utf-8")
        (texts / "c.txt").write_text("tiny", encoding="utf-8")
        table = tmp_path / "out" / "court.csv"
        argv = ["ingest", str(texts), "--out", str(table), "--min-words", "5",
                "--lexicon", str(toy_lexicon_file)]
        summary = run_json(capsys, argv)
        assert summary["K"] == 2
        assert summary["excluded"] == 1
        lines = table.read_text().splitlines()
        assert len(lines) == 3
        assert (tmp_path / "out" / "court.exclusions.json").exists()

        first_bytes = table.read_bytes()
        run_json(capsys, argv)
        assert table.read_bytes() == first_bytes

    def test_chunked_text(self, capsys, tmp_path, toy_lexicon_file):
        """--chunk-size splits a single text into units."""
        path = tmp_path / "walden.txt"
        path.write_text("the of pond " * 100, encoding="utf-8")
        summary = run_json(
            capsys,
            ["ingest", path, "--chunk-size", 30, "--min-words", 1,
             "--out", tmp_path / "walden.csv", "--lexicon", toy_lexicon_file],
        )
        assert summary["label"] == "walden"
        assert summary["K"] == 10


class TestBootstrapCommand:
    """Test the bootstrap command."""

    def test_byte_identical_reruns(self, capsys, author_tables, five_word_lexicon_file):
        """The same seed reproduces the same report."""
        argv = ["bootstrap", "--a", str(author_tables[0]), "--b", str(author_tables[0]),
                "--sample-size", "20", "--replicates", "50", "--seed", "7",
                "--lexicon", str(five_word_lexicon_file)]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        assert capsys.readouterr().out == first
        report = json.loads(first)
        assert report["n_pairs"] == 2500
        assert report["params"]["seed"] == 7

    def test_table_lists_both_directions(self, capsys, author_tables, five_word_lexicon_file):
        """The table shows P(A > B), P(B > A) and ties."""
        code = run(["bootstrap", "--a", str(author_tables[0]), "--b", str(author_tables[1]),
                    "--sample-size", "20", "--replicates", "30", "--seed", "3",
                    "--format", "table", "--lexicon", str(five_word_lexicon_file)])
        out = capsys.readouterr().out
        assert code == 0
        assert "P(alpha > beta)" in out
        assert "P(beta > alpha)" in out
        assert "P(tie)" in out

    def test_invalid_sample_size(self, capsys, author_tables, five_word_lexicon_file):
        """A sample size below two is a data error."""
        code = run(["bootstrap", "--a", str(author_tables[0]), "--b", str(author_tables[1]),
                    "--sample-size", "1", "--seed", "7",
                    "--lexicon", str(five_word_lexicon_file)])
        assert code == 1

    def test_within_requires_collection(self, capsys, five_word_lexicon_file):
        """--within without --collection is a usage error."""
        assert run(["bootstrap", "--within", "session", "--seed", "1"]) == 2


class TestClassifyCommands:
    """Test the classify subcommands."""

    def test_crossval(self, capsys, author_tables, five_word_lexicon_file):
        """A single pairing reports per-side tallies."""
        report = run_json(
            capsys,
            ["classify", "crossval", "--a", author_tables[0], "--b", author_tables[1],
             "--lexicon", five_word_lexicon_file],
        )
        assert report["classifier"] == "naive_bayes"
        assert report["success_a"] > 0.9 * report["total_a"]
        rate = report["success_a"] / report["total_a"]
        assert report["ratio_a"] == f"{report['success_a']}/{report['total_a']} = {rate:.3f}"
        assert report["ratio_b"].startswith(f"{report['success_b']}/60 = ")

    def test_crossval_pairs(self, capsys, author_tables, five_word_lexicon_file):
        """--pairs runs every pairing."""
        results = run_json(
            capsys,
            ["classify", "crossval", "--pairs", *author_tables, "--method", "linear",
             "--lexicon", five_word_lexicon_file],
        )
        assert [(r["a"], r["b"]) for r in results] == [
            ("alpha", "beta"), ("alpha", "gamma"), ("beta", "gamma")
        ]
        assert all(r["report"]["classifier"] == "linear" for r in results)

    def test_predict_and_reuse_model(self, capsys, tmp_path, author_tables, five_word_lexicon_file):
        """A saved model predicts the same labels as a freshly trained one."""
        model_path = tmp_path / "model.json"
        fresh = run_json(
            capsys,
            ["classify", "predict", "--a", author_tables[0], "--b", author_tables[1],
             "--collection", author_tables[1], "--method", "linear",
             "--save-model", model_path, "--lexicon", five_word_lexicon_file],
        )
        saved = json.loads(model_path.read_text())
        assert saved["method"] == "linear"
        assert len(saved["linear_model"]["beta"]) == 6
        reused = run_json(
            capsys,
            ["classify", "predict", "--model", model_path, "--collection", author_tables[1],
             "--lexicon", five_word_lexicon_file],
        )
        assert reused == fresh
        assert sum(p["label"] == "beta" for p in fresh) > 0.9 * len(fresh)

    def test_outlier(self, capsys, author_tables, five_word_lexicon_file):
        """Every document gets a distinct rank."""
        report = run_json(
            capsys,
            ["classify", "outlier", "--collection", author_tables[2],
             "--lexicon", five_word_lexicon_file],
        )
        ranks = sorted(e["rank"] for e in report["per_doc"])
        assert ranks == list(range(1, len(ranks) + 1))
        assert report["score"] is None

    def test_planted(self, capsys, author_tables, five_word_lexicon_file):
        """Planted foreign documents score high."""
        report = run_json(
            capsys,
            ["classify", "planted", "--test", author_tables[1], "--decoy", author_tables[0],
             "--plantings", 3, "--lexicon", five_word_lexicon_file],
        )
        assert report["n"] == 61
        assert report["mean_score"] >= 90


class TestSynthAndTrend:
    """Test the synth and trend commands."""

    def test_synth(self, capsys, tmp_path, five_word_lexicon_file):
        """synth reports per-run V4 and can emit a corpus."""
        report = run_json(
            capsys,
            ["synth", "--docs", 30, "--words", 500, "--runs", 3, "--seed", 11,
             "--emit", tmp_path / "corpus", "--lexicon", five_word_lexicon_file],
        )
        assert set(report) == {"mean_v4", "sd_v4", "per_run"}
        assert len(report["per_run"]) == 3
        assert (tmp_path / "corpus" / "manifest.json").exists()
        assert (tmp_path / "corpus" / "synth.csv").exists()

    def test_synth_requires_seed(self, capsys):
        """No seed, no run."""
        assert run(["synth", "--runs", "1"]) == 2

    def test_trend_points(self, capsys, tmp_path):
        """A points file gives a per-decade slope."""
        points = tmp_path / "points.csv"
        points.write_text("x,y\n1855,2.0\n1865,2.05\n1875,2.1\n", encoding="utf-8")
        report = run_json(capsys, ["trend", "--points", points])
        assert report["slope_per_decade"] == pytest.approx(0.05)
        assert report["fit"]["n_points"] == 3
        assert report["series"] is None

    def test_trend_degenerate(self, capsys, tmp_path):
        """Fewer than three points exits 1."""
        points = tmp_path / "points.csv"
        points.write_text("x,y\n1855,2.0\n1865,2.05\n", encoding="utf-8")
        assert run(["trend", "--points", str(points)]) == 1
