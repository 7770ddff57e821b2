import json

import pytest

from cli.main import main

HEADER = {"format": "mahlerpairs", "version": 1, "constants": []}


@pytest.fixture
def write_doc(tmp_path):
    """Write a JSON document next to the test and return its path as a string."""

    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps({**HEADER, **document}), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def run(tmp_path):
    """Run the command line and return (exit code, result document)."""

    def invoke(*argv):
        out = tmp_path / "result.json"
        code = main([*argv, "--out", str(out)])
        return code, json.loads(out.read_text(encoding="utf-8"))

    return invoke


def _system(case, **matrices):
    return {"document": "system", "case": case, "matrices": matrices}


def _operator(case, kind, coeffs):
    return {"document": "operator", "case": case, "operator": kind, "coeffs": coeffs}


TWO_M = {"kind": "2M", "q1": "2", "q2": "3"}
UNIPOTENT = _system(TWO_M, B1=[["1", "0"], ["x**2 - x", "1"]], B2=[["1", "0"], ["x**3 - x", "1"]])


class TestCheck:
    def test_consistent_pair(self, write_doc, run):
        code, result = run("check", write_doc("pair.json", UNIPOTENT))
        assert code == 0
        assert result["verdict"] == "consistent"
        assert result["document"] == "result"
        assert result["data"]["dimension"] == 2

    def test_inconsistent_pair_reports_residual(self, write_doc, run):
        system = _system({"kind": "Q", "q": "2"}, A=[["0"]], B=[["x"]])
        code, result = run("check", write_doc("bad.json", system))
        assert code == 1
        assert result["verdict"] == "inconsistent"
        assert result["data"]["residual"] == [["x"]]

    def test_zero_denominator_is_an_input_error(self, write_doc, run):
        system = _system({"kind": "Q", "q": "2"}, A=[["1/0"]], B=[["1"]])
        code, result = run("check", write_doc("zero.json", system))
        assert code == 2
        assert result["verdict"] == "input-error"

    def test_wrong_matrix_names(self, write_doc, run):
        system = _system({"kind": "Q", "q": "2"}, B1=[["1"]], B2=[["1"]])
        code, _ = run("check", write_doc("names.json", system))
        assert code == 2

    def test_missing_file(self, tmp_path, run):
        code, result = run("check", str(tmp_path / "absent.json"))
        assert code == 2
        assert "cannot read" in result["data"]["error"]

    def test_reduced_form(self, write_doc, run):
        system = _system({"kind": "M", "q": "2"}, A=[["0", "0"], ["1", "0"]], B=[["1", "0"], ["0", "2"]])
        code, result = run("check", write_doc("reduced.json", system), "--reduced")
        assert code == 0
        assert result["verdict"] == "verified"


class TestBuild:
    def test_dilation_identity(self, write_doc, run):
        case = {"kind": "Q", "q": "2"}
        sigma = write_doc("sigma.json", _operator(case, "sigma1", ["-2", "1"]))
        delta = write_doc("delta.json", _operator(case, "delta", ["-1", "1"]))
        code, result = run("build", sigma, delta)
        assert code == 0
        assert result["data"]["dimension"] == 1
        assert result["data"]["system"]["matrices"] == {"A": [["1"]], "B": [["2"]]}

    def test_mixed_cases(self, write_doc, run):
        sigma = write_doc("sigma.json", _operator({"kind": "M", "q": "2"}, "sigma1", ["-x", "1"]))
        delta = write_doc("delta.json", _operator({"kind": "Q", "q": "2"}, "delta", ["-1", "1"]))
        code, _ = run("build", sigma, delta)
        assert code == 2


class TestShiftAndGauge:
    def test_shift_twice(self, write_doc, run):
        system = _system({"kind": "M", "q": "2"}, A=[["1"]], B=[["x"]])
        code, result = run("shift", write_doc("m.json", system), "--count", "2")
        assert code == 0
        assert result["data"]["system"]["matrices"]["B"] == [["x**4"]]

    def test_gauge_to_constants(self, write_doc, run):
        gauge = write_doc("g.json", {"document": "gauge", "gauge": [["1", "0"], ["-x", "1"]]})
        code, result = run("gauge", write_doc("pair.json", UNIPOTENT), gauge)
        assert code == 0
        assert result["data"]["system"]["matrices"]["B1"] == [["1", "0"], ["0", "1"]]


class TestReduce:
    def test_unipotent_pair(self, write_doc, run):
        code, result = run("reduce", write_doc("pair.json", UNIPOTENT))
        assert code == 0
        assert result["data"]["constants"]["B1"] == [["1", "0"], ["0", "1"]]
        assert result["data"]["ramification"] == 1

    def test_case_m_reports_log_gauge(self, write_doc, run):
        system = _system({"kind": "M", "q": "2"}, A=[["1"]], B=[["x"]])
        code, result = run("reduce", write_doc("m.json", system))
        assert code == 0
        assert result["data"]["constants"] == {"A": [["0"]], "B": [["1"]]}
        assert result["data"]["log_gauge"] == [[["1"]]]

    def test_unsupported_case(self, write_doc, run):
        system = _system({"kind": "Q", "q": "2"}, A=[["1"]], B=[["2"]])
        code, _ = run("reduce", write_doc("q.json", system))
        assert code == 2

    def test_inconsistent_pair(self, write_doc, run):
        system = _system(TWO_M, B1=[["x"]], B2=[["x"]])
        code, result = run("reduce", write_doc("bad.json", system))
        assert code == 1
        assert result["verdict"] == "inconsistent"


class TestSolveRational:
    def _seed(self, write_doc, coeffs, order):
        return write_doc("seed.json", {"document": "series", "valuation": 0, "order": order, "coeffs": coeffs})

    def test_powers_of_two_not_certified(self, write_doc, run):
        op = write_doc("op.json", _operator({"kind": "M", "q": "2"}, "sigma1", ["x", "-(1+x)", "1"]))
        seed = self._seed(write_doc, ["0", "1"], 1)
        code, result = run("solve-rational", op, "--seed", seed, "--order", "16", "--max-degree", "4", "--max-order", "32")
        assert code == 1
        assert result["verdict"] == "not-certified"

    def test_geometric_certified(self, write_doc, run):
        op = write_doc("op.json", _operator({"kind": "M", "q": "2"}, "sigma1", ["-1/(1 + x)", "1"]))
        code, result = run("solve-rational", op, "--seed", self._seed(write_doc, ["1"], 0))
        assert code == 0
        assert result["verdict"] == "certified"

    def test_invalid_budget(self, write_doc, run):
        op = write_doc("op.json", _operator({"kind": "M", "q": "2"}, "sigma1", ["-1/(1 + x)", "1"]))
        seed = self._seed(write_doc, ["1"], 0)
        code, result = run("solve-rational", op, "--seed", seed, "--order", "8", "--max-degree", "4")
        assert code == 2
        assert result["verdict"] == "input-error"

    def test_too_many_operators(self, write_doc):
        op = write_doc("op.json", _operator({"kind": "M", "q": "2"}, "sigma1", ["-x", "1"]))
        with pytest.raises(SystemExit):
            main(["solve-rational", op, op, op, "--seed", op])


class TestGen:
    ARGS = ["gen", "--case", "2M", "--q1", "2", "--q2", "3", "--n", "2", "--seed", "5"]

    def test_same_seed_same_bytes(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main([*self.ARGS, "--out", str(first)]) == 0
        assert main([*self.ARGS, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_generated_system_checks(self, tmp_path, run):
        code, result = run(*self.ARGS)
        assert code == 0
        path = tmp_path / "gen.json"
        path.write_text(json.dumps(result["data"]["system"]), encoding="utf-8")
        code, checked = run("check", str(path))
        assert code == 0
        assert checked["verdict"] == "consistent"

    def test_missing_parameter(self, run):
        code, _ = run("gen", "--case", "2M", "--q1", "2")
        assert code == 2

    def test_stdout(self, capsys):
        assert main(["gen", "--case", "M", "--q", "2", "--gauge-shape", "identity"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["command"] == "gen"
        assert result["data"]["system"]["matrices"]["A"] == [["0", "0"], ["0", "0"]]

    def test_help_names_reducible_gauge_shapes(self, capsys):
        with pytest.raises(SystemExit):
            main(["gen", "--help"])
        assert "reduce accepts only identity or lower gauges" in " ".join(capsys.readouterr().out.split())


class TestAutomaton:
    def _dfao(self, write_doc, transitions, outputs):
        return write_doc("dfao.json", {"document": "dfao", "base": 2, "transitions": transitions, "outputs": outputs})

    def test_powers_of_two(self, write_doc, run):
        code, result = run("automaton", self._dfao(write_doc, [[0, 1], [1, 2], [2, 2]], [0, 1, 0]))
        assert code == 0
        assert result["verdict"] == "verified"
        assert result["data"]["states"] == 3
        assert result["data"]["operator"]["operator"] == "sigma1"

    def test_empty_set_is_degenerate(self, write_doc, run):
        code, result = run("automaton", self._dfao(write_doc, [[0, 0]], [0]))
        assert code == 1
        assert result["verdict"] == "degenerate"

    def test_invalid_table(self, write_doc, run):
        code, _ = run("automaton", self._dfao(write_doc, [[0, 3]], [1]))
        assert code == 2
