import json
from pathlib import Path

import pytest
import yaml

from wrpcodes.cache import function_key
from wrpcodes.cli import main, parse_descriptor
from wrpcodes.errors import ConfigError
from wrpcodes.field import make_field
from wrpcodes.plateaued import eval_descriptor

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

EX3 = {"field": {"p": 5, "m": 2},
       "f": [{"coeff": "t^0", "exp": 2}],
       "g": [{"coeff": "t^1", "exp": 2}, {"coeff": "-t^1", "exp": 6}],
       "tasks": ["classify", "build", "enumerate", "predict", "puncture", "certify"],
       "mode": "ENUMERATE"}


def _write(tmp_path, d, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(d))
    return str(path)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_descriptor():
    assert parse_descriptor("t^0:2, -t^1:6") == [{"coeff": "t^0", "exp": 2}, {"coeff": "-t^1", "exp": 6}]
    assert parse_descriptor("3:2") == [{"coeff": 3, "exp": 2}]
    with pytest.raises(ConfigError):
        parse_descriptor("t^0")


def test_f25_text_report(capsys):
    code, out, _ = _run(["build", "--config", str(CONFIGS / "f25_quadratic.yaml")], capsys)
    assert code == 0
    assert "[104,4,80]" in out
    assert "[26,4,20] griesmer: optimal" in out
    assert "status: ok" in out


def test_json_schema_and_reproducible(tmp_path, capsys):
    cfg = _write(tmp_path, EX3)
    runs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert _run(["build", "--config", cfg, "--format", "json", "--out", str(out), "--cache", str(tmp_path / "c")],
                    capsys)[0] == 0
        runs.append(out.read_bytes())
    # cold then warm cache, byte-identical bodies
    assert runs[0] == runs[1]
    payload = json.loads(runs[0])
    assert payload["schema"] == 1 and payload["status"] == "ok"
    assert payload["enumerate"]["distribution"] == [[0, 1], [80, 520], [100, 104]]
    assert payload["predict"]["agrees_with_enumeration"] is True


def test_report_rerenders_saved_json(tmp_path, capsys):
    cfg = _write(tmp_path, EX3)
    saved = tmp_path / "r.json"
    _run(["build", "--config", cfg, "--format", "json", "--out", str(saved)], capsys)
    code, out, _ = _run(["report", str(saved), "--format", "text"], capsys)
    assert code == 0 and "[26,4,20] griesmer: optimal" in out
    bad = tmp_path / "old.json"
    bad.write_text(json.dumps({"schema": 0}))
    assert _run(["report", str(bad)], capsys)[0] == 3


def test_csv_output(tmp_path, capsys):
    cfg = _write(tmp_path, EX3)
    code, out, _ = _run(["build", "--config", cfg, "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "section,weight,frequency"
    assert "enumerate,80,520" in lines and "puncture,25,104" in lines


def test_per_task_files(tmp_path, capsys):
    cfg = _write(tmp_path, EX3)
    outdir = tmp_path / "reports"
    assert _run(["build", "--config", cfg, "--out", str(outdir), "--format", "json"], capsys)[0] == 0
    names = {p.name for p in outdir.iterdir()}
    assert names == {f"{t}.json" for t in EX3["tasks"]} | {"report.json"}
    part = json.loads((outdir / "predict.json").read_text())
    assert "predict" in part and "enumerate" not in part


def test_unsupported_index_is_config_error(tmp_path, capsys):
    # p = 13: a quadratic g has l_g = 2, not (p - 1)/2 = 6
    d = {"field": {"p": 13, "m": 2}, "f": [{"coeff": 1, "exp": 2}], "g": [{"coeff": 1, "exp": 2}],
         "tasks": ["classify", "predict"]}
    code, _, err = _run(["build", "--config", _write(tmp_path, d)], capsys)
    assert code == 3 and "config error" in err


def test_bad_config_is_config_error(tmp_path, capsys):
    for bad in ({**EX3, "tasks": ["predict"]}, {**EX3, "colour": 1}, {**EX3, "field": {"p": 9, "m": 1}},
                {**EX3, "cache_recheck": 2}):
        assert _run(["build", "--config", _write(tmp_path, bad)], capsys)[0] == 3
    assert _run(["build", "--config", str(tmp_path / "missing.yaml")], capsys)[0] == 3


def test_corrupted_g_descriptor_fails_the_run(tmp_path, capsys):
    # move the second monomial to exponent 3: the function is no longer plateaued
    d = {**EX3, "g": [{"coeff": "t^1", "exp": 2}, {"coeff": "-t^1", "exp": 3}]}
    code, _, err = _run(["build", "--config", _write(tmp_path, d)], capsys)
    assert code == 2 and "check failed" in err


def test_corrupted_cache_is_a_mismatch(tmp_path, capsys):
    cfg = _write(tmp_path, EX3)
    cache = tmp_path / "cache"
    assert _run(["build", "--config", cfg, "--cache", str(cache)], capsys)[0] == 0
    F = make_field(5, 2)
    key = function_key(eval_descriptor(F, [("t^1", 2), ("-t^1", 6)]))
    path = cache / key[:2] / f"{key}.json"
    entry = json.loads(path.read_text())
    entry["profile"]["s"] = 1
    path.write_text(json.dumps(entry))
    code, _, err = _run(["build", "--config", cfg, "--cache", str(cache), "--recheck", "1"], capsys)
    assert code == 2 and "cached profile differs" in err


def test_classify_and_search_commands(capsys):
    code, out, _ = _run(["classify", "--p", "5", "--m", "2", "--f", "t^0:2", "--g", "t^1:2, -t^1:6"], capsys)
    assert code == 0
    cl = json.loads(out)["classify"]
    assert cl["f"]["profile"]["epsilon"] == -1 and cl["g"]["profile"]["l"] == 2
    code, out, _ = _run(["search", "--p", "5", "--m", "2", "--slot", "2:all", "--slot", "6:all",
                         "--s", "1", "--all-pairs"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["schema"] == 1 and len(payload["hits"]) == 24
    status = {r["branch"]: r["status"] for r in payload["branches_report"]}
    assert status["even/half"] == "EXERCISED" and status["even-balanced/half"] == "UNEXERCISED"


def test_search_too_large_is_config_error(capsys):
    code, _, err = _run(["search", "--p", "5", "--m", "3", "--slot", "2:all", "--slot", "6:all",
                         "--slot", "26:all"], capsys)
    assert code == 3


def test_verify_lemmas_command(capsys):
    code, out, _ = _run(["verify-lemmas", "--format", "text"], capsys)
    assert code == 0 and "p=17 = -16" in out
