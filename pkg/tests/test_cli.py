import json
import subprocess
import sys

import pytest

from multipizza.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, load_multigerm, main
from multipizza.multipizza import Multipizza
from multipizza.pizza import Pizza


def write(tmp_path, name, functions, **extra):
    path = tmp_path / name
    path.write_text(json.dumps({"functions": functions, **extra}))
    return str(path)


@pytest.fixture
def triple(tmp_path):
    return write(tmp_path, "triple.json", ["x^2+y^4", "x", "x^3-y^2"])


@pytest.fixture
def pair_f(tmp_path):
    return write(tmp_path, "f.json", ["x^2-y^3", "y"])


@pytest.fixture
def pair_g(tmp_path):
    return write(tmp_path, "g.json", ["x^3-y^2", "y"])


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- pizza ------------------------------------------------------------------------------------

def test_pizza_of_third_function(capsys, triple):
    code, out, _ = run(capsys, "pizza", triple, "--function", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [s["Q"] for s in data["slices"]] == [["3", "inf"], ["inf", "3"], ["3", "2"]]
    assert [s["mu"] for s in data["slices"]] == [
        {"slope": "1", "intercept": "-3/2"}, {"slope": "1", "intercept": "-3/2"}, {"slope": "1/2", "intercept": "0"}]


def test_non_germ_is_an_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "pizza", write(tmp_path, "bad.json", ["x^2+1"]))
    assert code == EXIT_INPUT and "NonGermError" in err


def test_syntax_error_points_at_the_position(capsys, tmp_path):
    code, _, err = run(capsys, "pizza", write(tmp_path, "bad.json", ["x^2+*y"]))
    assert code == EXIT_INPUT
    assert "position 4" in err and "\n      ^" in err


def test_function_index_out_of_range(capsys, triple):
    code, _, err = run(capsys, "pizza", triple, "--function", "4")
    assert code == EXIT_INPUT and "--function" in err


def test_debug_zones_lists_four_zones(capsys, triple):
    code, _, err = run(capsys, "pizza", triple, "--function", "3", "--debug-zones")
    assert code == EXIT_OK
    assert [line.split(":")[0] for line in err.splitlines()] == ["zone 0", "zone 1", "zone 2", "zone 3"]


def test_pizza_out_file_round_trips(capsys, triple, tmp_path):
    out = tmp_path / "p.json"
    assert run(capsys, "pizza", triple, "--function", "3", "--out", str(out))[0] == EXIT_OK
    data = json.loads(out.read_text())
    assert Pizza.from_json(data).to_json() == data


# -- multipizza ---------------------------------------------------------------------------------

def test_multipizza_of_triple(capsys, triple):
    code, out, _ = run(capsys, "multipizza", triple)
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["slices"]) == 4
    assert data["abstract"]["betas"] == ["3/2", "3/2", "1", "1"]
    body = {k: v for k, v in data.items() if k != "abstract"}
    assert Multipizza.from_json(body).to_json() == body


def test_single_function_multipizza_wraps_the_pizza(capsys, tmp_path):
    path = write(tmp_path, "cusp.json", ["x^3-y^2"])
    pizza = json.loads(run(capsys, "pizza", path)[1])
    multi = json.loads(run(capsys, "multipizza", path)[1])
    for p, m in zip(pizza["slices"], multi["slices"]):
        assert m["columns"] == [{"Q": p["Q"], "mu": p["mu"], "sign": p["sign"]}]
        assert (m["beta"], m["support"]) == (p["beta"], p["support"])
    assert len(pizza["slices"]) == len(multi["slices"])


def test_unminimized_multipizza_is_a_refinement(capsys, triple, tmp_path):
    from multipizza.multipizza import abstract_multipizza, minimize_multipizza
    raw = json.loads(run(capsys, "multipizza", triple, "--no-minimize")[1])
    default = json.loads(run(capsys, "multipizza", triple)[1])
    raw.pop("abstract")
    merged = abstract_multipizza(minimize_multipizza(Multipizza.from_json(raw)))
    assert merged.to_json() == default["abstract"]


def test_output_is_byte_identical_across_runs(capsys, triple):
    first = run(capsys, "multipizza", triple)[1]
    second = run(capsys, "multipizza", triple)[1]
    assert first == second and first.endswith("\n")


# -- equiv --------------------------------------------------------------------------------------

def test_paired_cusps_are_not_equivalent(capsys, pair_f, pair_g):
    code, out, _ = run(capsys, "equiv", pair_f, pair_g)
    assert code == EXIT_FAIL
    data = json.loads(out)
    assert data["verdict"] == "NOT_EQUIVALENT" and data["failure"]["clause"] == "ii"
    assert data["options"] == {"allow_reversal": True, "permute_columns": False}


def test_file_is_equivalent_to_itself(capsys, triple):
    code, out, _ = run(capsys, "equiv", triple, triple)
    assert code == EXIT_OK and json.loads(out)["verdict"] == "EQUIVALENT"


def test_swapped_cusps_are_equivalent_by_reversal(capsys, tmp_path):
    a = write(tmp_path, "a.json", ["x^3-y^2"])
    b = write(tmp_path, "b.json", ["x^2-y^3"])
    code, out, _ = run(capsys, "equiv", a, b)
    assert code == EXIT_OK and json.loads(out)["alignment"]["reversed"] is True
    code, out, _ = run(capsys, "equiv", a, b, "--oriented")
    assert code == EXIT_FAIL and json.loads(out)["options"]["allow_reversal"] is False


def test_equiv_rejects_different_sizes(capsys, triple, pair_f):
    assert run(capsys, "equiv", triple, pair_f)[0] == EXIT_INPUT


# -- verify ---------------------------------------------------------------------------------------

def test_verify_triple(capsys, triple):
    code, out, _ = run(capsys, "verify", triple)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["exceedances"] == 0 and data["total"] == len(data["checks"])


def test_verify_catches_tampered_pizza(capsys, tmp_path):
    path = write(tmp_path, "cusp.json", ["x^3-y^2"])
    pizza = json.loads(run(capsys, "pizza", path)[1])
    pizza["slices"][2]["mu"] = {"slope": "2", "intercept": "0"}
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(pizza))
    code, out, _ = run(capsys, "verify", path, "--pizza", str(tampered))
    assert code == EXIT_FAIL and json.loads(out)["exceedances"] >= 5


@pytest.mark.parametrize("flags", [["--samples", "0"], ["--tolerance", "0"]])
def test_verify_usage_errors(capsys, triple, flags):
    assert run(capsys, "verify", triple, *flags)[0] == EXIT_INPUT


# -- input files -----------------------------------------------------------------------------------

def test_multigerm_file_options(tmp_path):
    path = write(tmp_path, "m.json", ["x", "y"], domain="plane",
                 options={"allow_reversal": False, "permute_columns": True, "truncation_budget": 30})
    mf = load_multigerm(path)
    assert mf.domain.kind.value == "plane" and not mf.allow_reversal and mf.permute_columns
    assert mf.truncation_budget == 30


@pytest.mark.parametrize("payload", [
    {"functions": []},
    {"functions": ["x"], "options": {"colour": 1}},
    {"functions": ["x"], "domain": "torus"},
    {"functions": ["x"], "options": {"truncation_budget": -1}},
    {"functions": [3]},
])
def test_malformed_files_are_input_errors(capsys, tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    assert run(capsys, "multipizza", str(path))[0] == EXIT_INPUT


def test_missing_and_invalid_json(capsys, tmp_path):
    assert run(capsys, "pizza", str(tmp_path / "absent.json"))[0] == EXIT_INPUT
    broken = tmp_path / "broken.json"
    broken.write_text("{functions: ")
    assert run(capsys, "pizza", str(broken))[0] == EXIT_INPUT


def test_module_entry_point(triple):
    done = subprocess.run([sys.executable, "-m", "multipizza", "multipizza", triple],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0 and json.loads(done.stdout)["abstract"]["betas"][0] == "3/2"


def test_log_level_from_environment(triple):
    import os
    env = dict(os.environ, MULTIPIZZA_LOG="info")
    done = subprocess.run([sys.executable, "-m", "multipizza", "verify", triple, "--samples", "1"],
                          capture_output=True, text=True, env=env, check=False)
    assert done.returncode == 0 and "INFO multipizza: verify:" in done.stderr
