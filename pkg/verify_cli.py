import json
import sys

import pytest

from conftest import complete, cycle, path, wheel_with_chord
from src.cli import main
from src.models import ExtractionResult, OracleBudget
from src.pipeline.bench import TSV_COLUMNS, bench_grid
from src.shared.config import Settings, get_settings
from src.shared.db import bench_rows, get_engine
from src.shared.errors import ExitCode


@pytest.fixture
def write_graph(tmp_path):
    def _write(name, G):
        target = tmp_path / name
        target.write_text(G.to_edge_list(), encoding="utf-8")
        return str(target)
    return _write


@pytest.fixture
def fresh_settings(monkeypatch):
    get_settings.cache_clear()
    yield monkeypatch
    get_settings.cache_clear()


def edge_lines(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


# --- gen ---
def test_gen_wheel(capsys):
    assert main(["gen", "--kind", "wheel", "--k", "4", "--n", "10"]) == ExitCode.OK
    out = capsys.readouterr().out
    assert out.startswith("# gen kind=wheel k=4 n=10")
    assert len(edge_lines(out)) == 25


def test_gen_to_file(tmp_path):
    target = tmp_path / "c12.txt"
    assert main(["gen", "--kind", "wheel-plus-one", "--k", "2", "--n", "12", "--seed", "3", "--out", str(target)]) == 0
    assert len(edge_lines(target.read_text())) == 13
    assert not (tmp_path / "c12.txt.partial").exists()


def test_gen_rejects_bad_spec():
    assert main(["gen", "--kind", "random-fixed-edges", "--k", "2", "--n", "5"]) == ExitCode.USAGE


# --- extract / verify ---
def test_extract_wheel_with_chord(write_graph, capsys):
    source = write_graph("wheel.txt", wheel_with_chord())
    assert main(["extract", "--k", "3", "--in", source]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["branch"] == "large-good-set"
    assert report["subgraph"] == [0, 1, 2, 3]
    assert report["report_version"] == 1


def test_extract_hypothesis_violation(write_graph):
    source = write_graph("k4.txt", complete(4))
    assert main(["extract", "--k", "3", "--in", source]) == ExitCode.HYPOTHESIS


def test_extract_then_verify(write_graph, tmp_path):
    source = write_graph("wheel.txt", wheel_with_chord())
    report_path = tmp_path / "report.json"
    assert main(["extract", "--k", "3", "--in", source, "--report", str(report_path)]) == ExitCode.OK
    assert main(["verify", "--k", "3", "--in", source, "--report-in", str(report_path)]) == ExitCode.OK

    result = ExtractionResult.from_report(report_path.read_text())
    forged = result.model_copy(update={"subgraph": [0, 1, 2, 3, 5]})
    forged_path = tmp_path / "forged.json"
    forged_path.write_text(forged.to_report())
    assert main(["verify", "--k", "3", "--in", source, "--report-in", str(forged_path)]) == ExitCode.FAILURE


def test_verify_rejects_malformed_report(write_graph, tmp_path):
    source = write_graph("wheel.txt", wheel_with_chord())
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 3}')
    assert main(["verify", "--k", "3", "--in", source, "--report-in", str(bad)]) == ExitCode.PRECONDITION


def test_extract_from_generator(capsys):
    code = main(["extract", "--k", "2", "--gen-kind", "wheel-plus-one", "--n", "12", "--seed", "3"])
    assert code == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["n"] == 12


def test_extract_greedy_chain(write_graph, capsys):
    source = write_graph("k6.txt", complete(6))
    assert main(["extract", "--k", "2", "--in", source, "--strategy", "greedy-chain"]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["branch"] == "greedy-chain"


def test_labelled_input_reports_label_map(tmp_path, capsys):
    G = wheel_with_chord()
    source = tmp_path / "labelled.txt"
    source.write_text("".join(f"v{u} v{w}\n" for u, w in G.edges()), encoding="utf-8")
    expected = [f"v{i}" for i in range(6)]

    assert main(["extract", "--k", "3", "--in", str(source)]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["labels"] == expected
    assert [report["labels"][v] for v in report["subgraph"]] == ["v0", "v1", "v2", "v3"]

    for command in ("kcore", "goodsets", "oracle"):
        assert main([command, "--k", "3", "--in", str(source)]) == ExitCode.OK
        assert json.loads(capsys.readouterr().out)["labels"] == expected, command


def test_numeric_input_has_no_label_map(write_graph, capsys):
    source = write_graph("c5.txt", cycle(5))
    assert main(["goodsets", "--k", "2", "--in", source]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["labels"] is None


# --- Errors ---
def test_missing_input_is_io_error(tmp_path):
    assert main(["extract", "--k", "2", "--in", str(tmp_path / "absent.txt")]) == ExitCode.IO


def test_malformed_input(tmp_path):
    source = tmp_path / "bad.txt"
    source.write_text("a b c\n")
    assert main(["kcore", "--k", "2", "--in", str(source)]) == ExitCode.PRECONDITION


def test_two_sources_is_usage_error(write_graph):
    source = write_graph("c5.txt", cycle(5))
    assert main(["kcore", "--k", "2", "--in", source, "--gen-kind", "wheel", "--n", "6"]) == ExitCode.USAGE


def test_missing_k_exits_through_argparse():
    with pytest.raises(SystemExit) as e:
        main(["extract"])
    assert e.value.code == 2


# --- Inspection commands ---
def test_kcore_command(write_graph, capsys):
    source = write_graph("c6.txt", cycle(6))
    assert main(["kcore", "--k", "3", "--in", source]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["order"] == 0


def test_goodsets_command(write_graph, capsys):
    source = write_graph("c5.txt", cycle(5))
    assert main(["goodsets", "--k", "2", "--in", source, "--emit-traces"]) == ExitCode.OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 1
    assert payload["sets"][0]["vertices"] == [0, 1, 2, 3, 4]
    assert payload["sets"][0]["trace"][0].startswith("seed ")


def test_cover_command(write_graph, capsys):
    source = write_graph("p3.txt", path(3))
    assert main(["cover", "--k", "2", "--in", source, "--trials", "20", "--seed", "5"]) == ExitCode.OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["S"] == [0, 2]
    assert payload["certificate"] == ["S: 0 2", "peel: 0 1 2"]
    assert payload["check"]["passed"]
    assert payload["check"]["seed"] == 5


def test_oracle_command(write_graph, capsys):
    source = write_graph("k5.txt", complete(5))
    assert main(["oracle", "--k", "3", "--in", source]) == ExitCode.OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["minimum"] == [0, 1, 2, 3]
    assert payload["good_sets"] == []


def test_oracle_over_budget(write_graph):
    source = write_graph("c13.txt", cycle(13))
    assert main(["oracle", "--k", "2", "--in", source, "--max-vertices", "12"]) == ExitCode.PRECONDITION


# --- Settings ---
def test_settings_from_environment(fresh_settings):
    fresh_settings.setenv("MINDEG_ORACLE_MAX_VERTICES", "8")
    fresh_settings.setenv("MINDEG_SEED", "17")
    settings = get_settings()
    assert settings.oracle_max_vertices == 8
    budget = OracleBudget.from_settings(trial_count=5, seed=None)
    assert (budget.max_vertices, budget.trial_count, budget.seed) == (8, 5, 17)


def test_settings_read_dotenv_file(fresh_settings, tmp_path):
    env_file = tmp_path / ".env"
    env_file.write_text("MINDEG_SEED=23\nMINDEG_ORACLE_TRIALS=7\n")
    for key in ("MINDEG_SEED", "MINDEG_ORACLE_TRIALS"):
        fresh_settings.setenv(key, "")
        fresh_settings.delenv(key)
    settings = Settings.from_env(env_file=str(env_file))
    assert (settings.seed, settings.oracle_trials) == (23, 7)


# --- bench ---
def test_bench_small_grid(tmp_path, capsys):
    db = tmp_path / "bench.db"
    assert main(["bench", "--grid", "small", "--db", str(db), "--seed", "1"]) == ExitCode.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == list(TSV_COLUMNS)
    assert len(lines) == 1 + len(bench_grid("small", 1))

    rows = bench_rows(get_engine(str(db)), grid="small")
    assert len(rows) == len(bench_grid("small", 1))
    assert all(row.verified for row in rows)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
