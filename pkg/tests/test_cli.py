import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from src.cli import handlers, serialization
from src.core import coherence, concave
from src.core.models import SureWin

GOLDEN = Path(__file__).parent / "golden"
CASES = sorted(p.stem for p in GOLDEN.glob("*.json"))


def load_case(name: str) -> dict:
    return json.loads((GOLDEN / f"{name}.json").read_text())


def test_every_command_has_a_golden_case():
    assert set(CASES) == set(handlers.HANDLERS)


@pytest.mark.parametrize("name", CASES)
def test_golden_output(name):
    case = load_case(name)
    document, code = handlers.run(name, case["input"])
    assert code == handlers.EXIT_OK
    expected = {
        "check": "not_requested",
        "command": name,
        "payload": case["output"]["payload"],
        "schema_version": "1",
        "verdict": case["output"]["verdict"],
    }
    assert serialization.dumps(document) == json.dumps(expected, sort_keys=True, ensure_ascii=False)


@pytest.mark.parametrize("name", CASES)
def test_check_keeps_the_verdict(name):
    case = load_case(name)
    plain, _ = handlers.run(name, case["input"])
    checked, code = handlers.run(name, case["input"], check=True)
    assert code == handlers.EXIT_OK
    assert checked["check"] == "verified"
    assert {**checked, "check": "not_requested"} == plain


@pytest.mark.parametrize("name", CASES)
def test_output_is_byte_stable(name):
    case = load_case(name)
    first = serialization.dumps(handlers.run(name, case["input"])[0])
    second = serialization.dumps(handlers.run(name, case["input"])[0])
    assert first == second
    assert serialization.dumps(json.loads(first)) == first


def test_invalid_rational_reports_its_path():
    document, code = handlers.run("price", {"states": ["a", "b"], "generators": [], "claim": ["1", "x"]})
    assert code == handlers.EXIT_INPUT
    assert document == {"error": {"kind": "input", "message": "invalid rational at claim[1]"}}


def test_unknown_field_is_a_schema_error():
    document, code = handlers.run("sure-win", {"states": ["a"], "generators": [], "bogus": 1})
    assert code == handlers.EXIT_INPUT
    assert document["error"]["kind"] == "schema"


def test_float_is_rejected():
    document, code = handlers.run("sure-win", {"states": ["a"], "generators": [[0.5]]})
    assert code == handlers.EXIT_INPUT


def test_unsupported_schema_version():
    document, code = handlers.run("sure-win", {"schema_version": "7", "states": ["a"]})
    assert code == handlers.EXIT_INPUT
    assert "schema_version" in document["error"]["message"]


def test_negative_verdict_is_a_successful_run():
    case = load_case("extend")
    _, code = handlers.run("extend", case["input"], check=True)
    assert code == handlers.EXIT_OK


def test_corrupted_certificate_fails_check(monkeypatch):
    monkeypatch.setattr(coherence, "detect_sure_win", lambda cone: SureWin((Fraction(1, 2),)))
    document, code = handlers.run("sure-win", load_case("sure-win")["input"], check=True)
    assert code == handlers.EXIT_INVARIANT
    assert document["error"]["kind"] == "invariant"


def test_corrupted_certificate_passes_without_check(monkeypatch):
    monkeypatch.setattr(coherence, "detect_sure_win", lambda cone: SureWin((Fraction(1, 2),)))
    document, code = handlers.run("sure-win", load_case("sure-win")["input"])
    assert code == handlers.EXIT_OK
    assert document["payload"] == {"lambda": ["1/2"]}


def test_main_reads_a_file_and_writes_stdout(tmp_path, capsys):
    path = tmp_path / "price.json"
    path.write_text(json.dumps(load_case("price")["input"]))
    code = handlers.main(["price", "--input", str(path), "--check"])
    out = capsys.readouterr().out
    assert code == 0
    assert json.loads(out)["payload"]["value"] == "2"


def test_main_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(load_case("sure-win")["input"])))
    assert handlers.main(["sure-win", "--pretty"]) == 0
    assert capsys.readouterr().out.startswith("{\n")


def test_main_rejects_malformed_json(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("{not json"))
    assert handlers.main(["sure-win"]) == 1
    assert json.loads(capsys.readouterr().out)["error"]["kind"] == "input"


def test_price_interval_on_request():
    raw = {**load_case("price")["input"], "interval": True}
    document, code = handlers.run("price", raw, check=True)
    assert code == handlers.EXIT_OK
    assert document["payload"]["interval"] == {"lower": "2", "upper": "2"}
    assert "interval" not in handlers.run("price", load_case("price")["input"])[0]["payload"]


def test_common_extension_solves_the_bound_once(monkeypatch):
    calls = []
    solve = concave.coherence_bound

    def counting(problem):
        calls.append(problem)
        return solve(problem)

    monkeypatch.setattr(concave, "coherence_bound", counting)
    document, code = handlers.run("common-extension", load_case("common-extension")["input"])
    assert code == handlers.EXIT_OK
    assert "monotonicity" in document["payload"]
    assert len(calls) == 1


@pytest.mark.parametrize(
    "raw",
    [
        {"states": ["a"], "claim": {"0": "1"}},
        {"states": [], "claim": []},
        {"states": ["a"], "claim": ["1"], "interval": "yes"},
    ],
)
def test_shipped_schema_rejects(raw):
    document, code = handlers.run("price", raw)
    assert code == handlers.EXIT_INPUT
    assert document["error"]["kind"] == "schema"


@pytest.mark.parametrize("window", [0, 2, 5000])
def test_daniell_window_out_of_range(window):
    raw = {**load_case("daniell")["input"], "window": window}
    document, code = handlers.run("daniell", raw, check=True)
    assert code == handlers.EXIT_INPUT
    assert "window" in document["error"]["message"]
