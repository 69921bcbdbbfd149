import json

import pytest

from conftest import B, MU_A, machine_transfer, matrix
from constructions import Nfa
from formats import (FormatError, automaton_from_json, automaton_to_json, dump_value,
                     family_from_json, family_to_json, is_family_document, load_family,
                     load_matrix, machine_from_json, machine_to_json, matrix_from_json,
                     matrix_text, matrix_to_json, nfa_from_json, nfa_to_json, parse_matrix_text,
                     parse_value, read_json, write_json)
from oracle import random_automaton
from semigroup_jsr import MatrixFamily


class TestValues:
    def test_parse(self):
        assert parse_value("-i") is B
        assert parse_value("-inf") is B
        assert parse_value("17") == 17
        assert parse_value(-3) == -3

    def test_rejects(self):
        for bad in ["x", "1.5", True, None, 2.0]:
            with pytest.raises(FormatError):
                parse_value(bad)

    def test_dump(self):
        assert dump_value(B) == "-inf"
        assert dump_value(4) == 4


class TestMatrixText:
    def test_parse(self):
        text = "# diagonal matrix\n1 -i\n\n-inf 0\n"
        assert parse_matrix_text(text) == MU_A

    def test_render(self):
        assert matrix_text(MU_A) == "1 -inf\n-inf 0"
        assert parse_matrix_text(matrix_text(MU_A)) == MU_A

    def test_ragged(self):
        with pytest.raises(FormatError, match="row 2"):
            parse_matrix_text("1 2\n3\n")
        with pytest.raises(FormatError):
            parse_matrix_text("# nothing\n")

    def test_structured(self):
        assert matrix_from_json([[1, "-inf"], ["-inf", 0]]) == MU_A
        assert matrix_to_json(MU_A) == [[1, "-inf"], ["-inf", 0]]
        with pytest.raises(FormatError):
            matrix_from_json({"rows": []})


class TestDocuments:
    def test_automaton(self, max_count, rng):
        assert automaton_from_json(automaton_to_json(max_count)).mu == max_count.mu
        a = random_automaton(rng, ("x", "y", "z"), 3, -2, 2)
        again = automaton_from_json(json.loads(json.dumps(automaton_to_json(a))))
        assert again.mu == a.mu and again.initial == a.initial and again.final == a.final

    def test_automaton_dim_check(self, max_count):
        doc = automaton_to_json(max_count)
        doc["dim"] = 3
        with pytest.raises(FormatError, match="dim"):
            automaton_from_json(doc)

    def test_missing_field(self):
        with pytest.raises(FormatError, match="'generators'"):
            family_from_json({"dim": 2})
        with pytest.raises(FormatError):
            family_from_json({"generators": []})

    def test_family(self):
        family = MatrixFamily.of([MU_A, matrix([0, 0], [B, -1])])
        assert family_from_json(family_to_json(family)) == family

    def test_nfa(self):
        n = Nfa(2, frozenset({(0, "a", 1), (1, "b", 0)}), frozenset({0}), frozenset({1}))
        doc = nfa_to_json(n)
        assert doc["transitions"] == [[0, "a", 1], [1, "b", 0]]
        assert nfa_from_json(doc) == n
        with pytest.raises(FormatError):
            nfa_from_json({"states": 1, "transitions": [[0, "a"]], "initial": [], "final": []})

    def test_machine(self):
        machine = machine_transfer()
        assert machine_from_json(machine_to_json(machine)) == machine
        with pytest.raises(FormatError, match="t1_minus"):
            machine_from_json({"states": ["q"], "init": "q", "halt": "q", "t1_minus": [["q", "q"]]})


class TestFiles:
    def test_matrix_files(self, tmp_path):
        text_file = tmp_path / "m.txt"
        text_file.write_text("1 -i\n-i 0\n")
        json_file = tmp_path / "m.json"
        json_file.write_text(json.dumps(matrix_to_json(MU_A)))
        assert load_matrix(text_file) == load_matrix(json_file) == MU_A
        assert not is_family_document(text_file)

    def test_family_files(self, tmp_path):
        family = MatrixFamily.of([MU_A, MU_A])
        path = tmp_path / "family.json"
        write_json(family_to_json(family), path)
        assert is_family_document(path)
        assert load_family(path) == family

    def test_unreadable(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read"):
            load_matrix(tmp_path / "missing.txt")
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        with pytest.raises(FormatError, match="invalid JSON"):
            read_json(broken)
