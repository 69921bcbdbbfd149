import json

import pytest

import formats
import main
from automata import MaxPlusAutomaton
from conftest import B, MU_A, MU_B, machine_forever, machine_inc2, matrix
from semigroup_jsr import MatrixFamily


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        if isinstance(doc, str):
            path.write_text(doc)
        else:
            formats.write_json(doc, path)
        return str(path)
    write.dir = tmp_path
    return write


def cli(capsys, *argv):
    code = main.main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


class TestMatrixCommands:
    def test_rho(self, capsys, files):
        path = files("m.txt", "1 -i\n-i 0\n")
        assert cli(capsys, "rho", path)[:2] == (0, "1")

    def test_rho_structured(self, capsys, files):
        path = files("m.txt", "-i 1\n2 -i\n")
        code, out, _ = cli(capsys, "--format", "structured", "rho", path)
        assert code == 0 and json.loads(out) == {"rho": "3/2"}

    def test_growth(self, capsys, files):
        path = files("m.txt", "1 -i\n-i 0\n")
        code, out, _ = cli(capsys, "rho", path, "--growth", "2")
        assert out.splitlines() == ["1", "1: 1", "2: 1"]

    def test_critical_graph(self, capsys, files):
        path = files("id.txt", "0 -i\n-i 0\n")
        code, out, _ = cli(capsys, "critical-graph", path)
        lines = out.splitlines()
        assert lines[0] == "rho 0"
        assert "1 -> 1 0" in lines and "scc 2: {2} cyclicity 1" in lines

    def test_urk(self, capsys, files):
        path = files("m.txt", "-i 0\n0 -i\n")
        assert cli(capsys, "urk", path)[:2] == (0, "2")
        family = files("f.json", formats.family_to_json(MatrixFamily.of([matrix([0, 0], [0, 0])])))
        assert cli(capsys, "urk", family, "--exact")[:2] == (0, "1")
        assert cli(capsys, "urk", family, "--bound", "3")[:2] == (0, "1")

    def test_bad_matrix(self, capsys, files):
        path = files("m.txt", "1 2\n3\n")
        code, _, err = cli(capsys, "rho", path)
        assert code == 1 and err.startswith("error: ")


class TestSemigroupCommands:
    def test_exact(self, capsys, files):
        split = MatrixFamily.of([matrix([0, -1], [-1, -1]), matrix([-1, -1], [-1, 0])])
        path = files("split.json", formats.family_to_json(split))
        assert cli(capsys, "jsr", path, "--exact")[:2] == (0, "-1/2")
        code, out, _ = cli(capsys, "jsr", path, "--witness")
        assert out.splitlines()[0] == "-1/2" and out.splitlines()[1].startswith("witness g")

    def test_exact_needs_finite_entries(self, capsys, files):
        path = files("fig.json", formats.family_to_json(MatrixFamily.of([MU_A, MU_B])))
        code, _, err = cli(capsys, "jsr", path, "--exact")
        assert code == 1
        assert "exact JSR requires finite entries" in err

    def test_bound_and_certificate(self, capsys, files):
        path = files("fig.json", formats.family_to_json(MatrixFamily.of([MU_A, MU_B])))
        code, out, _ = cli(capsys, "jsr", path, "--bound", "2")
        assert out.splitlines()[0] == "<= 1/2"
        code, out, _ = cli(capsys, "jsr", path, "--certify-negative", "3")
        assert out == "no certificate up to length 3"
        nil = files("nil.json", formats.family_to_json(MatrixFamily.of([matrix([B, 0], [B, B])])))
        code, out, _ = cli(capsys, "--format", "structured", "jsr", nil, "--certify-negative", "2")
        assert json.loads(out) == {"certificate": [0], "value": "-inf"}

    def test_closure(self, capsys, files):
        path = files("z.json", formats.family_to_json(MatrixFamily.of([matrix([0, 0], [0, 0])])))
        code, out, _ = cli(capsys, "--format", "structured", "closure", path)
        assert json.loads(out)["size"] == 1
        code, out, _ = cli(capsys, "closure", path, "--orbit")
        assert out.splitlines()[0] == "states 1"


class TestMachineCommands:
    def test_compile_then_eval(self, capsys, files):
        machine = files("inc2.json", formats.machine_to_json(machine_inc2()))
        checker = str(files.dir / "checker.json")
        assert cli(capsys, "cm", "compile", machine, "--n", "0", "-o", checker)[0] == 0
        assert cli(capsys, "eval", "-a", checker, "-w", "c1p a c2p")[:2] == (0, "-1")
        code, out, _ = cli(capsys, "eval", "-a", checker, "-w", "c1p c2p")
        assert code == 0 and int(out) >= 0
        assert cli(capsys, "find-negative", "-a", checker, "-L", "3")[:2] == (0, "c1p a c2p -1")

    def test_encode_and_decode(self, capsys, files):
        machine = files("inc2.json", formats.machine_to_json(machine_inc2()))
        assert cli(capsys, "cm", "encode", machine, "--n1", "1")[:2] == (0, "a c1p a a c2p")
        code, out, _ = cli(capsys, "cm", "decode", "a c1m c2p b c1m")
        assert out.splitlines() == ["a^1 b^0 c1m", "a^0 b^0 c2p", "a^0 b^1 c1m"]

    def test_run(self, capsys, files):
        machine = files("forever.json", formats.machine_to_json(machine_forever()))
        code, out, _ = cli(capsys, "--format", "structured", "cm", "run", machine, "--max-steps", "3")
        doc = json.loads(out)
        assert doc["status"] == "out-of-budget"
        assert doc["configurations"][-1] == ["q0", 3, 0]
        code, _, err = cli(capsys, "cm", "encode", machine, "--max-steps", "3")
        assert code == 1 and "does not halt" in err

    def test_validate(self, capsys, files):
        good = files("inc2.json", formats.machine_to_json(machine_inc2()))
        assert cli(capsys, "cm", "validate", good)[:2] == (0, "ok")
        bad = files("bad.json", {"states": ["q0"], "init": "q0", "halt": "qh"})
        code, out, _ = cli(capsys, "cm", "validate", bad)
        assert code == 1 and "state qh" in out

    def test_pipeline(self, capsys, files):
        machine = files("inc2.json", formats.machine_to_json(machine_inc2()))
        gamma, gamma_hat = str(files.dir / "g7.json"), str(files.dir / "hat.json")
        assert cli(capsys, "cm", "pipeline", machine, "-o", gamma, "--hat-output", gamma_hat)[0] == 0
        g7, lifted = formats.load_family(gamma), formats.load_family(gamma_hat)
        assert len(g7) == 7 and lifted.dim == 2 * g7.dim + 1


class TestConstructCommands:
    def test_nfa_gamma(self, capsys, files):
        nfa = files("nfa.json", {"states": 1, "transitions": [[0, "a", 0]], "initial": [0], "final": [0]})
        family = str(files.dir / "gamma.json")
        assert cli(capsys, "construct", "nfa-gamma", nfa, "-o", family)[0] == 0
        code, out, _ = cli(capsys, "jsr", family, "--certify-negative", "3")
        assert out.startswith("negative: rho(W)/|W| = -inf")

    def test_hat_matrix(self, capsys, files):
        path = files("m.txt", "-1\n")
        code, out, _ = cli(capsys, "construct", "hat", path)
        assert json.loads(out) == [[-1, "-inf", "-inf"], ["-inf", -1, "-inf"], ["-inf", "-inf", 0]]

    def test_tilde_rejects_entries(self, capsys, files):
        path = files("m.txt", "2\n")
        assert cli(capsys, "construct", "tilde", path)[0] == 1


class TestUsage:
    def test_unknown_command(self, capsys):
        assert cli(capsys, "frobnicate")[0] == 2

    def test_missing_flag(self, capsys, files):
        path = files("f.json", formats.family_to_json(MatrixFamily.of([MU_A])))
        assert cli(capsys, "jsr", path)[0] == 2

    def test_oracle_needs_file(self, capsys):
        code, _, err = cli(capsys, "oracle", "rho")
        assert code == 2 and "needs a file" in err

    def test_oracle_random_family(self, capsys):
        code, out, _ = cli(capsys, "--seed", "3", "oracle", "random-family", "--dim", "2")
        assert code == 0 and json.loads(out)["dim"] == 2

    def test_oracle_min_word_bottom_ranking(self, capsys, files):
        a = MaxPlusAutomaton(("a", "b"), {"a": matrix([2]), "b": matrix([B])}, (0,), (0,))
        path = files("a.json", formats.automaton_to_json(a))
        assert cli(capsys, "oracle", "min-word", path, "-L", "2")[:2] == (0, "a 2")
        code, out, _ = cli(capsys, "oracle", "min-word", path, "-L", "2", "--bottom-negative")
        assert (code, out) == (0, "b -inf")
