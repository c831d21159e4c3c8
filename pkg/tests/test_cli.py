import io
import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from ptmom import _json, cli, states


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "bell.json"
    assert run("generate", "--kind", "max-entangled", "--d", "2", "--seed", "1", "-o", str(path))[0] == 0
    return path


def test_generate_then_certify(bell_file):
    code, text = run("certify", "-i", str(bell_file))
    assert code == cli.EXIT_OK
    assert json.loads(text)["verdict"] == "maximally_entangled"


def test_certify_not_max_entangled(tmp_path):
    path = tmp_path / "g.json"
    run("generate", "--kind", "ginibre", "--d", "2", "--seed", "4", "-o", str(path))
    code, text = run("certify", "-i", str(path))
    assert code == cli.EXIT_NOT_MAX_ENTANGLED
    assert json.loads(text)["verdict"] == "not_maximally_entangled"


def test_certify_tol_flag(bell_file):
    code, text = run("certify", "-i", str(bell_file), "--tol", "0")
    assert json.loads(text)["tolerance"] == 0


def test_certify_wrong_dimensions_is_state_error(tmp_path):
    path = tmp_path / "q.json"
    run("generate", "--kind", "max-entangled", "--d", "3", "-o", str(path))
    assert run("certify", "-i", str(path))[0] == cli.EXIT_BAD_STATE


def test_generate_is_deterministic():
    a = run("generate", "--kind", "haar-pure", "--da", "2", "--db", "3", "--seed", "9")
    b = run("generate", "--kind", "haar-pure", "--da", "2", "--db", "3", "--seed", "9")
    assert a == b and a[0] == 0


@pytest.mark.parametrize(
    "flags",
    [
        ["--kind", "bell"],
        ["--kind", "haar-pure", "--d", "3"],
        ["--kind", "ginibre", "--da", "2", "--db", "3", "--rank", "2"],
        ["--kind", "max-entangled", "--d", "3"],
        ["--kind", "separable", "--d", "2", "--rank", "3"],
    ],
)
def test_generate_kinds_produce_valid_files(flags):
    code, text = run("generate", *flags, "--seed", "2")
    assert code == 0
    s = states.state_from_json(text)
    assert s.d >= 4


def test_generate_output_round_trips_bit_for_bit():
    code, text = run("generate", "--kind", "ginibre", "--d", "3", "--seed", "5")
    s = states.state_from_json(text)
    assert_array_equal(s.rho, states.random_state("ginibre_mixed", 3, 3, seed=5).rho)
    assert states.state_to_json(s) + "\n" == text


def test_moments_of_maximally_mixed(tmp_path):
    path = tmp_path / "mm.json"
    states.save_state(states.BipartiteState(2, 2, np.eye(4) / 4), path)
    code, text = run("moments", "-i", str(path))
    assert code == 0
    assert json.loads(text) == [1, 0.25, 0.0625, 0.015625]
    code, text = run("moments", "-i", str(path), "--k", "2")
    assert json.loads(text) == [1, 0.25]
    assert run("moments", "-i", str(path), "--k", "5")[0] == cli.EXIT_USAGE


def test_reconstruct():
    code, text = run("reconstruct", "--moments", "1,1,0.25,0.25")
    assert code == 0
    doc = json.loads(text)
    assert doc["spectrum"] == pytest.approx([0.5, 0.5, 0.5, -0.5], abs=1e-7)
    assert doc["elementary"] == pytest.approx([1, 0, -0.25, -1 / 16], abs=1e-12)
    assert doc["characteristic_polynomial"] == pytest.approx([1, -1, 0, 0.25, -1 / 16], abs=1e-12)


@pytest.mark.parametrize("csv", ["1,0.5,2,3", "0.5,0.5", "1,nan"])
def test_reconstruct_unrealizable_moments(csv):
    assert run("reconstruct", "--moments", csv)[0] == cli.EXIT_USAGE


def test_check_rana(bell_file):
    code, text = run("check-rana", "-i", str(bell_file))
    assert code == 0
    assert json.loads(text) == {"in_interval": True, "negative_count": 1, "bound": 1, "holds": True}


def test_check_rana_violation_exit_code(monkeypatch, bell_file):
    # physical states never violate the bound, so feed a forged spectrum
    monkeypatch.setattr(states, "pt_spectrum", lambda s: np.array([0.7, 0.7, 0.2, -0.6]))
    code, text = run("check-rana", "-i", str(bell_file))
    assert code == cli.EXIT_RANA_VIOLATED
    assert json.loads(text)["holds"] is False


def test_selftest():
    code, text = run("selftest")
    assert code == 0
    assert json.loads(text)["passed"] is True


def test_selftest_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli.selftest, "run", lambda: [("broken", False, "boom")])
    assert run("selftest")[0] == cli.EXIT_SELFTEST_FAILED


@pytest.mark.parametrize(
    "text",
    [
        "garbage",
        '{"dim_a": 2, "dim_b": 2, "re": [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], "im": [[0, 1e-3, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}',
        '{"dim_a": 2, "dim_b": 2, "re": [[2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], "im": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}',
        '{"dim_a": 2, "dim_b": 2, "re": [[1.5, 0, 0, 0], [0, -0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], "im": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}',
    ],
)
@pytest.mark.parametrize("verb", ["moments", "certify", "check-rana"])
def test_bad_state_files(tmp_path, text, verb):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert run(verb, "-i", str(path))[0] == cli.EXIT_BAD_STATE


def test_missing_state_file(tmp_path):
    assert run("moments", "-i", str(tmp_path / "absent.json"))[0] == cli.EXIT_BAD_STATE


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["certify"],
        ["certify", "-i", "x.json", "--bogus"],
        ["moments", "-i", "x.json", "--tol", "1e-3"],
        ["generate", "--kind", "werner", "--d", "2"],
        ["generate", "--kind", "ginibre", "--d", "0"],
        ["generate", "--kind", "ginibre", "--seed", "-1", "--d", "2"],
        ["certify", "-i", "x.json", "--tol", "-1"],
        ["reconstruct", "--moments", "1,x"],
    ],
)
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        cli.run(argv)
    assert exc.value.code == cli.EXIT_USAGE


@pytest.mark.parametrize(
    "flags",
    [
        ["--kind", "ginibre"],
        ["--kind", "ginibre", "--d", "2", "--da", "2", "--db", "2"],
        ["--kind", "ginibre", "--da", "2"],
        ["--kind", "bell", "--d", "3"],
        ["--kind", "bell", "--rank", "2"],
        ["--kind", "haar-pure", "--d", "2", "--rank", "2"],
        ["--kind", "ginibre", "--d", "2", "--rank", "5"],
        ["--kind", "max-entangled", "--da", "2", "--db", "3"],
    ],
)
def test_generate_semantic_usage_errors(flags):
    assert run("generate", *flags)[0] == cli.EXIT_USAGE


def test_json_floats_round_trip():
    values = [0.1, 1 / 3, np.nextafter(1.0, 2.0), 1e-300, -2.5e17, 5e-324]
    assert json.loads(_json.dumps(values)) == values
    with pytest.raises(ValueError):
        _json.dumps([np.nan])
    with pytest.raises(TypeError):
        _json.dumps({1: object()})
    assert _json.dumps({"a": [True, None, 3, "x"]}) == '{"a": [true, null, 3, "x"]}'
