import json
import subprocess
import sys

import pytest

import pcv.oracle
from pcv.cli import EXIT_DISAGREE, EXIT_ERROR, EXIT_FOUND, EXIT_OK, RunConfig, main, parse_goal_selector
from pcv.verdict import REPORT_SCHEMA, consistent


@pytest.fixture
def paths(corpus):
    return {name: str(corpus / name) for name in (
        "private.spl", "private.dom", "no-email.dom", "budget.wf", "budget.dom", "permissive.spl", "deny-approve.spl",
    )}


def test_goal_selector():
    assert parse_goal_selector("redundancy=Private:query") == ("redundancy", "Private:query")
    assert parse_goal_selector("inapplicability") == ("inapplicability", "")
    with pytest.raises(Exception):
        parse_goal_selector("redundancy")
    with pytest.raises(Exception):
        parse_goal_selector("bogus")


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(["p.spl"], "d.dom", [])
    with pytest.raises(ValueError):
        RunConfig(["p.spl"], "d.dom", [("wf-consistency", "")])


def test_exit_ok(paths, capsys):
    code = main(["check", "--policy", paths["private.spl"], "--domain", paths["private.dom"],
                 "--goal", "inapplicability", "--goal", "monotonic-deny", "--goal", "monotonic-allow"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("NoInconsistency") == 3


def test_exit_found(paths, capsys):
    code = main(["check", "--policy", paths["private.spl"], "--domain", paths["no-email.dom"],
                 "--goal", "inapplicability"])
    assert code == EXIT_FOUND
    assert "InconsistencyFound" in capsys.readouterr().out


def test_workflow_goal(paths, capsys):
    base = ["check", "--workflow", paths["budget.wf"], "--domain", paths["budget.dom"], "--goal", "wf-consistency"]
    assert main(base + ["--policy", paths["permissive.spl"], "--oracle-check"]) == EXIT_OK
    assert "a0" in capsys.readouterr().out
    assert main(base + ["--policy", paths["deny-approve.spl"], "--assume", "open"]) == EXIT_FOUND


def test_exit_error_on_missing_file(paths, capsys):
    code = main(["check", "--policy", "/nonexistent.spl", "--domain", paths["private.dom"], "--goal", "inapplicability"])
    assert code == EXIT_ERROR
    assert "/nonexistent.spl" in capsys.readouterr().err


def test_exit_error_on_bad_policy(tmp_path, paths, capsys):
    bad = tmp_path / "bad.spl"
    bad.write_text("policy P() {\n ?Q: true :: event.nope = 1 }")
    code = main(["check", "--policy", str(bad), "--domain", paths["private.dom"], "--goal", "inapplicability"])
    assert code == EXIT_ERROR
    assert f"{bad}:2:" in capsys.readouterr().err


def test_usage_errors_exit_two(paths):
    with pytest.raises(SystemExit) as info:
        main(["check", "--policy", paths["private.spl"], "--domain", paths["private.dom"]])
    assert info.value.code == 2


def test_exit_disagree(paths, capsys, monkeypatch):
    monkeypatch.setattr(pcv.oracle, "oracle_goal", lambda *a, **k: consistent(search="witness"))
    code = main(["check", "--policy", paths["private.spl"], "--domain", paths["no-email.dom"],
                 "--goal", "inapplicability", "--oracle-check"])
    assert code == EXIT_DISAGREE
    err = capsys.readouterr().err
    assert "disagree" in err and '"oracle"' in err


def test_structured_output_is_deterministic(paths, capsys):
    argv = ["check", "--policy", paths["private.spl"], "--domain", paths["private.dom"], "--format", "structured",
            "--goal", "inapplicability", "--goal", "redundancy=query"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["schema"] == REPORT_SCHEMA
    assert [r["goal"] for r in doc["reports"]] == ["inapplicability", "redundancy"]


def test_dump_rules(paths, capsys):
    code = main(["check", "--policy", paths["private.spl"], "--workflow", paths["budget.wf"],
                 "--domain", paths["budget.dom"], "--dump-rules"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("private @ private(") and "t1_test @ t1_test(E, G)" in out


def test_console_script(paths):
    out = subprocess.run([sys.executable, "-m", "pcv.cli", "check", "--policy", paths["private.spl"],
                          "--domain", paths["no-email.dom"], "--goal", "inapplicability", "--format", "structured"],
                         capture_output=True, text=True)
    assert out.returncode == EXIT_FOUND
    assert json.loads(out.stdout)["reports"][0]["verdict"]["kind"] == "InconsistencyFound"
