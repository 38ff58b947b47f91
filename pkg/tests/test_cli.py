import json
import tempfile
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobmorrey import cli
from sobmorrey.cli import ConfigError, main, parse_config
from sobmorrey.reporting import atomic_write, csv_text, fmt, json_text, read_csv

PS_FLAGS = ["--d", "2", "--p", "1.5", "--q", "2", "--q1", "1.5"]


def test_parse_example():
    cfg = parse_config(["cex-fit", *PS_FLAGS, "--r", "2.5,3,4,6", "--n", "30:44"])
    assert (cfg.command, cfg.params, cfg.n, cfg.r) == (
        "cex-fit", ("2", "1.5", "2", "1.5"), (30, 44), ("2.5", "3", "4", "6"))
    assert cfg.mode == "counterexample" and cfg.seed == 42 and cfg.format == "csv"


def test_flags_override_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# comment line\ncommand = validate\nd = 2  # trailing\np = 1.5\nq = 2\nq1 = 1.5\n")
    assert parse_config(["--config", str(conf)]).d == "2"
    assert parse_config(["--config", str(conf), "--d", "3", "--p", "2", "--q", "3", "--q1", "2.5"]).d == "3"


@pytest.mark.parametrize("argv, code, key", [
    (["validate", "--d", "1", "--p", "1.5", "--q", "2", "--q1", "1.5"], "DimensionTooSmall", None),
    (["validate", "--p", "1.5", "--q", "2", "--q1", "1.5"], "MissingRequired", "d"),
    ([], "MissingRequired", "command"),
    (["validate", "--d", "x", "--p", "1.5", "--q", "2", "--q1", "1.5"], "TypeMismatch", "d"),
    (["validate", *PS_FLAGS, "--bogus", "1"], "UnknownKey", "bogus"),
    (["sigma", *PS_FLAGS, "--n", "14:10"], "TypeMismatch", "n"),
    (["verify-holder", *PS_FLAGS, "--r", "2"], "ROutOfRange", "r"),
    (["cex-fit", *PS_FLAGS, "--format", "xml"], "TypeMismatch", "format"),
    (["verify-lemma1", *PS_FLAGS, "--seeds", "0"], "TypeMismatch", "seeds"),
])
def test_config_errors(argv, code, key):
    try:
        parse_config(argv)
    except ConfigError as exc:
        assert exc.code == code and (key is None or exc.key == key)
    except Exception as exc:  # parameter validation keeps its own error type
        assert code in str(exc)
    else:
        pytest.fail("no error raised")


def test_unknown_config_key(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("command = validate\ncolour = blue\n")
    with pytest.raises(ConfigError) as err:
        parse_config(["--config", str(conf)])
    assert (err.value.code, err.value.key) == ("UnknownKey", "colour")


def test_env_var_sets_default_out(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert parse_config(["validate", *PS_FLAGS]).out == str(tmp_path / "env")
    assert parse_config(["validate", *PS_FLAGS, "--out", "x"]).out == "x"


configs = st.builds(
    cli.RunConfig,
    command=st.sampled_from(["validate", "sigma", "cex-norms", "cex-fit"]),
    d=st.just("2"), p=st.sampled_from(["1.5", "3/2"]), q=st.just("2"),
    q1=st.sampled_from(["1.5", "1.25", "7/4"]),
    mode=st.just("counterexample"),
    n=st.tuples(st.integers(5, 20), st.integers(0, 20)).map(lambda t: (t[0], t[0] + t[1])),
    r=st.lists(st.sampled_from(["2.5", "3", "7/2", "6", "0.75"]), min_size=1, max_size=4).map(tuple),
    seed=st.integers(0, 10 ** 6), seeds=st.integers(1, 200),
    cells=st.integers(0, 512), padding=st.integers(0, 64),
    out=st.sampled_from(["results", "out/a", "/tmp/x y"]), format=st.sampled_from(["csv", "json"]),
)


@settings(max_examples=100, deadline=None)
@given(configs)
def test_config_round_trip(cfg):
    text = cfg.to_text()
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "c.conf"
        path.write_text(text)
        back = parse_config([], config_file=path)
    assert back == cfg
    assert back.to_text() == text


def test_fmt_and_writers(tmp_path):
    assert [fmt(True), fmt(0.1), fmt(3), fmt(float("nan"))] == ["true", "0.10000000000000001", "3", "nan"]
    assert csv_text(("a", "b"), [(1, 0.5), {"a": 2, "b": True}]) == "a,b\n1,0.5\n2,true\n"
    assert json_text({"x": 0.1, "y": [float("inf")]}) == '{\n  "x": 0.10000000000000001,\n  "y": [\n    Infinity\n  ]\n}\n'
    path = tmp_path / "deep" / "t.csv"
    atomic_write(path, "a,b\n1,2\n")
    assert read_csv(path) == [{"a": "1", "b": "2"}]
    assert list(path.parent.iterdir()) == [path]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cex_fit_run(capsys, tmp_path):
    code, out, err = run_cli(capsys, "cex-fit", *PS_FLAGS, "--r", "2.5,3,4,6", "--n", "30:44",
                             "--out", str(tmp_path))
    assert code == 0
    assert "seed = 42" in err
    assert out.count("PASS") == len(out.splitlines())
    rows = read_csv(tmp_path / "cex_fit.csv")
    assert [r["verdict"] for r in rows] == ["BlowUp", "Bounded", "Bounded", "Bounded"]
    assert list(rows[0]) == ["r", "slope", "predicted", "error", "verdict", "agrees"]
    report = json.loads((tmp_path / "cex_fit.report.json").read_text())
    assert report["passed"] and report["config"]["seed"] == "42"
    names = [c["name"] for c in report["checks"]]
    assert len(names) == len(set(names))


def test_failing_check_exits_one(capsys, tmp_path):
    # r just below the threshold: slope below the verdict tolerance, so the verdict disagrees
    code, out, _ = run_cli(capsys, "cex-fit", *PS_FLAGS, "--r", "2.99", "--out", str(tmp_path))
    assert code == 1
    assert "FAIL cex-fit verdicts_agree" in out


def test_config_and_range_errors_exit_two(capsys, tmp_path):
    assert run_cli(capsys, "validate", "--d", "1", "--p", "1.5", "--q", "2", "--q1", "1.5")[0] == 2
    assert run_cli(capsys, "verify-holder", *PS_FLAGS, "--r", "7", "--out", str(tmp_path))[0] == 2
    assert run_cli(capsys, "cex-fit", *PS_FLAGS, "--n", "30:32", "--out", str(tmp_path))[0] == 2
    code, _, err = run_cli(capsys, "validate", *PS_FLAGS, "--colour", "blue")
    assert code == 2 and "UnknownKey" in err


def test_unwritable_output_exits_three(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    assert run_cli(capsys, "validate", *PS_FLAGS, "--out", str(blocker / "sub"))[0] == 3
    assert run_cli(capsys, "report", "--out", str(tmp_path / "missing"))[0] == 3


def test_json_format_and_report(capsys, tmp_path):
    out = str(tmp_path)
    assert run_cli(capsys, "validate", *PS_FLAGS, "--out", out, "--format", "json")[0] == 0
    data = json.loads((tmp_path / "validate.json").read_text())
    assert data["columns"][0] == "r" and len(data["rows"]) == 4
    assert run_cli(capsys, "sigma", *PS_FLAGS, "--n", "10:12", "--out", out)[0] == 0
    assert run_cli(capsys, "verify-lemma1", *PS_FLAGS, "--seeds", "2", "--cells", "64",
                   "--padding", "8", "--out", out)[0] == 0
    assert run_cli(capsys, "report", "--out", out)[0] == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert set(summary["reports"]) == {"validate", "sigma", "verify-lemma1"}
    assert summary["passed"]
    assert any(name.startswith("sigma") for name in summary["tables"])


def test_outputs_are_deterministic(capsys, tmp_path):
    args = ("verify-maximal", "--seeds", "2", "--cells", "32", "--padding", "8", "--out", str(tmp_path))
    run_cli(capsys, *args)
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    run_cli(capsys, *args)
    assert first == {p.name: p.read_bytes() for p in tmp_path.iterdir()}
