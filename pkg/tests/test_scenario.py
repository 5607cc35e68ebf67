# pylint: disable=missing-function-docstring,missing-module-docstring,redefined-outer-name
import json

import pytest
from click.testing import CliRunner

from common import read_json, scenario_text
from xmod.core import ParseError
from xmod.cstar.scenario import SAMPLES, parse_scenario, report_frame, run
from xmod.cstar.scenario._cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_samples_pass(runner, name):
    rr = runner.invoke(main, ["run", name])
    assert rr.exit_code == 0, rr.output
    doc = json.loads(rr.stdout)
    assert doc["passed"] is True
    assert all(t["status"] == "pass" for t in doc["tasks"])


def test_sample_documents_are_valid():
    for path in SAMPLES.values():
        doc = read_json(path)
        assert set(doc) <= {"declare", "tasks", "description"}
        assert doc["tasks"]


def test_output_is_deterministic(runner):
    a = runner.invoke(main, ["run", "z4z2"])
    b = runner.invoke(main, ["run", "z4z2"])
    assert a.exit_code == b.exit_code == 0
    assert a.stdout == b.stdout


def test_jobs_keep_task_order(runner):
    serial = runner.invoke(main, ["run", "morita"])
    threaded = runner.invoke(main, ["run", "-j", "2", "morita"])
    assert threaded.exit_code == 0
    assert serial.stdout == threaded.stdout


def test_config_recorded(runner):
    rr = runner.invoke(main, ["run", "--tol", "1e-8", "--seed", "3", "s3a3"])
    cfg = json.loads(rr.stdout)["config"]
    assert cfg == {"tol_alg": 1e-8, "seed": 3, "max_dim": 1024}


def test_max_dim_is_enforced(runner):
    rr = runner.invoke(main, ["run", "--max-dim", "4", "induced"])
    assert rr.exit_code in (1, 2)


def test_text_output(runner):
    rr = runner.invoke(main, ["run", "-o", "text", "s3a3"])
    assert rr.exit_code == 0
    assert "PASS" in rr.stdout
    assert "coequalizer" in rr.stdout


def test_timing(runner):
    rr = runner.invoke(main, ["run", "--timing", "pontryagin"])
    for t in json.loads(rr.stdout)["tasks"]:
        assert t["seconds"] >= 0


def test_failing_expectation(runner, test_data_dir):
    rr = runner.invoke(main, ["run", str(test_data_dir / "failing_expectation.json")])
    assert rr.exit_code == 1
    doc = json.loads(rr.stdout)
    right, wrong = doc["tasks"]
    assert right["status"] == "pass"
    assert wrong["status"] == "fail"
    assert [e["key"] for e in wrong["expectations"]] == ["dim"]


@pytest.mark.parametrize("fname", ["unresolved.json", "not_full.json", "cyclic_reference.json", "bad_args.json"])
def test_bad_scenarios(runner, test_data_dir, fname):
    rr = runner.invoke(main, ["run", "-o", "text", str(test_data_dir / fname)])
    assert rr.exit_code == 2
    assert "Error" in rr.output


def test_missing_file(runner, test_data_dir):
    rr = runner.invoke(main, ["run", str(test_data_dir / "no-such-file.json")])
    assert rr.exit_code == 2


def test_stdin(runner):
    rr = runner.invoke(main, ["run", "-"], input=SAMPLES["pontryagin"].read_text(encoding="utf8"))
    assert rr.exit_code == 0
    assert json.loads(rr.stdout)["source"] == "<stdin>"


def test_check_command(runner, test_data_dir):
    rr = runner.invoke(main, ["check", "s3a3"])
    assert rr.exit_code == 0
    assert "crossed_module xm" in rr.stdout
    assert "4 task(s)" in rr.stdout
    rr = runner.invoke(main, ["check", str(test_data_dir / "not_full.json")])
    assert rr.exit_code == 2


def test_samples_command(runner):
    rr = runner.invoke(main, ["samples"])
    assert rr.exit_code == 0
    for name in SAMPLES:
        assert name in rr.stdout
    rr = runner.invoke(main, ["samples", "--show", "s3a3"])
    assert json.loads(rr.stdout)["declare"]["xm"]["kind"] == "normal_subgroup"
    rr = runner.invoke(main, ["samples", "--show", "nope"])
    assert rr.exit_code != 0


def test_parse_error_lines(test_data_dir):
    with pytest.raises(ParseError) as e:
        parse_scenario((test_data_dir / "unresolved.json").read_text(encoding="utf8"))
    assert e.value.line == 6
    assert e.value.witness == "missing"

    with pytest.raises(ParseError) as e:
        parse_scenario('{\n  "declare": {},\n  "tasks": [\n')
    assert e.value.line is not None

    with pytest.raises(ParseError) as e:
        parse_scenario('{"declare": {}, "extra": 1}')
    assert "extra" in str(e.value)


def test_parse_error_names_declaration():
    text = scenario_text(
        {
            "Z3": {"type": "group", "builtin": "cyclic", "args": [3]},
            "bad": {"type": "crossed_module", "kind": "normal_subgroup", "group": "Z3", "subgroup": [1]},
        },
        [],
    )
    with pytest.raises(ParseError) as e:
        parse_scenario(text)
    assert e.value.declaration == "bad"
    line = next(i for i, s in enumerate(text.splitlines(), 1) if "\"bad\"" in s)
    assert e.value.to_dict()["line"] == line


def test_unknown_verb():
    with pytest.raises(ParseError) as e:
        parse_scenario(scenario_text({}, [{"verb": "explode", "args": {}}]))
    assert e.value.witness == "explode"


def test_wrong_kind_is_an_error_result():
    text = scenario_text(
        {
            "Z2": {"type": "group", "builtin": "cyclic", "args": [2]},
            "C": {"type": "algebra", "kind": "line"},
        },
        [{"name": "oops", "verb": "cstar", "args": {"cm": "C"}}],
    )
    report = run(parse_scenario(text))
    assert report.exit_code == 1
    (res,) = report.results
    assert res.status == "error"
    assert res.error is not None and res.error["error"] == "ParseError"


def test_report_frame():
    text = scenario_text(
        {
            "S3": {"type": "group", "builtin": "symmetric", "args": [3]},
            "CS3": {"type": "algebra", "kind": "group_algebra", "group": "S3"},
        },
        [{"name": "cs3", "verb": "blocks", "args": {"algebra": "CS3"}, "expect": {"blocks": [2, 1, 1]}}],
    )
    report = run(parse_scenario(text), jobs=2)
    xx = report_frame(report)
    assert list(xx.index) == ["cs3"]
    assert xx.loc["cs3", "status"] == "pass"
    assert xx.loc["cs3", "blocks"] == "1 1 2"
    assert xx.loc["cs3", "dim"] == 6


def test_task_fields_must_be_objects(runner, test_data_dir):
    rr = runner.invoke(main, ["run", str(test_data_dir / "bad_args.json")])
    assert rr.exit_code == 2
    # the error line goes to stderr after the document
    err = json.loads(rr.stdout[: rr.stdout.rindex("}") + 1])["error"]
    assert err["error"] == "ParseError"
    assert err["line"] == 4
    assert err["witness"] == "args"

    with pytest.raises(ParseError) as e:
        parse_scenario(scenario_text({}, [{"verb": "check", "args": {}, "expect": [1]}]))
    assert e.value.witness == "expect"
