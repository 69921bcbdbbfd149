"""
File formats shared by every CLI command.

  matrix     text: rows of whitespace-separated integers, `-i` / `-inf` for -inf
             structured: [[int | "-inf", ...], ...]
  automaton  {"alphabet", "dim", "mu": {symbol: matrix}, "initial", "final"}
  family     {"dim", "generators": [matrix, ...]}
  nfa        {"states": n, "transitions": [[p, "a", q], ...], "initial", "final"}
  machine    {"states", "t1_plus", "t2_plus", "t1_minus", "t2_minus", "init", "halt"}
"""

import json
from pathlib import Path
from typing import Any, List, Union

import config
from automata import MaxPlusAutomaton
from constructions import Nfa
from counter_machines import TwoCounterMachine
from semigroup_jsr import MatrixFamily
from tropical_core import BOTTOM, TropicalError, TropicalMatrix, TropicalValue


class FormatError(TropicalError):
    pass


# ── scalars & matrices ────────────────────────────────────────

def parse_value(token: Any) -> TropicalValue:
    if isinstance(token, bool):
        raise FormatError(f"not a tropical value: {token!r}")
    if isinstance(token, int):
        return token
    if isinstance(token, str):
        if token in config.BOTTOM_TOKENS:
            return BOTTOM
        try:
            return int(token)
        except ValueError:
            pass
    raise FormatError(f"not a tropical value: {token!r}")


def dump_value(v: TropicalValue) -> Union[int, str]:
    return config.BOTTOM_TEXT if v is BOTTOM else v


def _rectangular(rows: List[list], where: str) -> TropicalMatrix:
    if not rows:
        raise FormatError(f"{where}: empty matrix")
    width = len(rows[0])
    for k, row in enumerate(rows):
        if len(row) != width or not row:
            raise FormatError(f"{where}: row {k + 1} has {len(row)} entries, expected {width}")
    return TropicalMatrix.from_rows(rows)


def parse_matrix_text(text: str) -> TropicalMatrix:
    """Blank lines and lines starting with # are skipped."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([parse_value(tok) for tok in line.split()])
    return _rectangular(rows, "matrix text")


def matrix_text(m: TropicalMatrix) -> str:
    return "\n".join(" ".join(str(dump_value(v)) for v in row) for row in m.entries)


def matrix_from_json(obj: Any, where: str = "matrix") -> TropicalMatrix:
    if not isinstance(obj, list) or not all(isinstance(row, list) for row in obj):
        raise FormatError(f"{where}: expected a list of rows")
    return _rectangular([[parse_value(v) for v in row] for row in obj], where)


def matrix_to_json(m: TropicalMatrix) -> list:
    return [[dump_value(v) for v in row] for row in m.entries]


def vector_from_json(obj: Any, where: str) -> tuple:
    if not isinstance(obj, list):
        raise FormatError(f"{where}: expected a list")
    return tuple(parse_value(v) for v in obj)


# ── documents ─────────────────────────────────────────────────

def _field(obj: dict, key: str, kind: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{kind}: expected a JSON object")
    if key not in obj:
        raise FormatError(f"{kind}: missing field {key!r}")
    return obj[key]


def automaton_from_json(obj: Any) -> MaxPlusAutomaton:
    alphabet = _field(obj, "alphabet", "automaton")
    mu = _field(obj, "mu", "automaton")
    if not isinstance(mu, dict):
        raise FormatError("automaton: mu must map symbols to matrices")
    a = MaxPlusAutomaton(
        tuple(alphabet),
        {s: matrix_from_json(mu.get(s), f"mu[{s}]") for s in alphabet},
        vector_from_json(_field(obj, "initial", "automaton"), "initial"),
        vector_from_json(_field(obj, "final", "automaton"), "final"),
    )
    if "dim" in obj and obj["dim"] != a.dim:
        raise FormatError(f"automaton: dim is {obj['dim']} but the vectors have length {a.dim}")
    return a


def automaton_to_json(a: MaxPlusAutomaton) -> dict:
    return {
        "alphabet": list(a.alphabet),
        "dim": a.dim,
        "mu": {s: matrix_to_json(a.mu[s]) for s in a.alphabet},
        "initial": [dump_value(v) for v in a.initial],
        "final": [dump_value(v) for v in a.final],
    }


def family_from_json(obj: Any) -> MatrixFamily:
    generators = _field(obj, "generators", "family")
    if not isinstance(generators, list) or not generators:
        raise FormatError("family: generators must be a nonempty list")
    family = MatrixFamily(tuple(matrix_from_json(g, f"generator {i}") for i, g in enumerate(generators)))
    if "dim" in obj and obj["dim"] != family.dim:
        raise FormatError(f"family: dim is {obj['dim']} but generators are {family.dim}x{family.dim}")
    return family


def family_to_json(family: MatrixFamily) -> dict:
    return {"dim": family.dim, "generators": [matrix_to_json(g) for g in family.generators]}


def nfa_from_json(obj: Any) -> Nfa:
    transitions = _field(obj, "transitions", "nfa")
    try:
        triples = frozenset((int(p), str(s), int(q)) for p, s, q in transitions)
    except (TypeError, ValueError):
        raise FormatError("nfa: transitions must be [state, symbol, state] triples")
    return Nfa(int(_field(obj, "states", "nfa")), triples,
               frozenset(_field(obj, "initial", "nfa")), frozenset(_field(obj, "final", "nfa")))


def nfa_to_json(nfa: Nfa) -> dict:
    return {
        "states": nfa.states,
        "transitions": [list(t) for t in sorted(nfa.transitions)],
        "initial": sorted(nfa.initial),
        "final": sorted(nfa.final),
    }


def machine_from_json(obj: Any) -> TwoCounterMachine:
    def table(key, width):
        rows = obj.get(key, []) if isinstance(obj, dict) else []
        for row in rows:
            if not isinstance(row, list) or len(row) != width:
                raise FormatError(f"machine: {key} entries must have {width} states")
        return rows

    return TwoCounterMachine.build(
        _field(obj, "states", "machine"), _field(obj, "init", "machine"), _field(obj, "halt", "machine"),
        t1_plus=table("t1_plus", 2), t2_plus=table("t2_plus", 2),
        t1_minus=table("t1_minus", 3), t2_minus=table("t2_minus", 3))


def machine_to_json(machine: TwoCounterMachine) -> dict:
    return {
        "states": list(machine.states),
        "t1_plus": [list(t) for t in sorted(machine.t1_plus)],
        "t2_plus": [list(t) for t in sorted(machine.t2_plus)],
        "t1_minus": [list(t) for t in sorted(machine.t1_minus)],
        "t2_minus": [list(t) for t in sorted(machine.t2_minus)],
        "init": machine.q_init,
        "halt": machine.q_halt,
    }


# ── files ─────────────────────────────────────────────────────

def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}")


def read_json(path: Union[str, Path]) -> Any:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2)


def write_json(obj: Any, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def load_matrix(path: Union[str, Path]) -> TropicalMatrix:
    """A matrix file in either format; a leading [ selects the structured one."""
    text = read_text(path)
    if text.lstrip().startswith("["):
        try:
            return matrix_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})")
    return parse_matrix_text(text)


def load_automaton(path) -> MaxPlusAutomaton:
    return automaton_from_json(read_json(path))


def load_family(path) -> MatrixFamily:
    return family_from_json(read_json(path))


def load_nfa(path) -> Nfa:
    return nfa_from_json(read_json(path))


def load_machine(path) -> TwoCounterMachine:
    return machine_from_json(read_json(path))


def is_family_document(path) -> bool:
    text = read_text(path).lstrip()
    return text.startswith("{") and '"generators"' in text
