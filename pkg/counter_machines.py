"""
Two-counter machines: model, interpreter, execution words, and the compiler
into a max-plus checker automaton.

An execution from (n0, 0) through actions t1..tk is written

    a^n0  t1  a^n1 b^m1  t2  a^n2 b^m2  ...  tk

i.e. the counter values between consecutive actions, ending with the last
action.  The checker built for (M, n) is the union (max) of small gadgets and
computes -1 exactly on the encoding of the halting execution of M from (n, 0),
and a value >= 0 on every other nonempty word.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import config
from automata import MaxPlusAutomaton, gamma_of, weights
from constructions import hat_family, star_extend
from semigroup_jsr import MatrixFamily
from tropical_core import BOTTOM, TropicalError, TropicalMatrix

logger = logging.getLogger(__name__)

A, B = config.LETTER_A, config.LETTER_B
INC_1, INC_2, DEC_1, DEC_2 = config.INC_1, config.INC_2, config.DEC_1, config.DEC_2
ACTIONS = config.COUNTER_ACTIONS


class InvalidMachineError(TropicalError):
    """Attributes:
        violations: every broken machine invariant, one message each
    """

    def __init__(self, violations):
        super().__init__("invalid machine: " + "; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class TwoCounterMachine:
    """(Q, T1+, T2+, T1-, T2-, q_init, q_halt).

    A decrement triple (p, q, r) moves to q when the counter is 0 and to r,
    decrementing, otherwise.
    """
    states: Tuple[str, ...]
    t1_plus: FrozenSet[Tuple[str, str]]
    t2_plus: FrozenSet[Tuple[str, str]]
    t1_minus: FrozenSet[Tuple[str, str, str]]
    t2_minus: FrozenSet[Tuple[str, str, str]]
    q_init: str
    q_halt: str

    @classmethod
    def build(cls, states, init, halt, t1_plus=(), t2_plus=(), t1_minus=(), t2_minus=()):
        return cls(tuple(states), frozenset(map(tuple, t1_plus)), frozenset(map(tuple, t2_plus)),
                   frozenset(map(tuple, t1_minus)), frozenset(map(tuple, t2_minus)), init, halt)

    def tables(self):
        """(action letter, transitions) for the four tables."""
        return ((INC_1, self.t1_plus), (INC_2, self.t2_plus),
                (DEC_1, self.t1_minus), (DEC_2, self.t2_minus))

    def transition_from(self, q: str) -> Optional[Tuple[str, tuple]]:
        for action, table in self.tables():
            for t in sorted(table):
                if t[0] == q:
                    return action, t
        return None


@dataclass(frozen=True)
class Configuration:
    state: str
    c1: int
    c2: int

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise TropicalError(f"counters must be nonnegative, got ({self.c1}, {self.c2})")


@dataclass(frozen=True)
class Step:
    """One transition taken and the configuration it leads to."""
    action: str
    transition: tuple
    config: Configuration


@dataclass(frozen=True)
class ExecutionTrace:
    initial: Configuration
    steps: Tuple[Step, ...]

    @property
    def final(self) -> Configuration:
        return self.steps[-1].config if self.steps else self.initial

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class Halted:
    trace: ExecutionTrace


@dataclass(frozen=True)
class OutOfBudget:
    trace: ExecutionTrace


@dataclass(frozen=True)
class Stuck:
    config: Configuration
    trace: ExecutionTrace


RunResult = Union[Halted, OutOfBudget, Stuck]


# ── validation & execution ────────────────────────────────────

def validate(machine: TwoCounterMachine) -> List[str]:
    """Every violated machine invariant; an empty list means the machine is valid."""
    violations = []
    states = set(machine.states)
    if len(states) != len(machine.states):
        violations.append("state names are not distinct")
    for name, q in (("q_init", machine.q_init), ("q_halt", machine.q_halt)):
        if q not in states:
            violations.append(f"state {q}: {name} is not a declared state")

    sources: Dict[str, int] = {}
    for action, table in machine.tables():
        for t in sorted(table):
            for q in t:
                if q not in states:
                    violations.append(f"state {q}: used by {action} transition {t} but not declared")
            sources[t[0]] = sources.get(t[0], 0) + 1
    for q, count in sorted(sources.items()):
        if count > 1:
            violations.append(f"state {q}: source of {count} transitions (machine must be deterministic)")
    if machine.q_halt in sources:
        violations.append(f"state {machine.q_halt}: q_halt has an outgoing transition")
    for common in sorted(machine.t1_plus & machine.t2_plus):
        violations.append(f"state {common[0]}: {common} is in both T1+ and T2+")
    for common in sorted(machine.t1_minus & machine.t2_minus):
        violations.append(f"state {common[0]}: {common} is in both T1- and T2-")
    return violations


def require_valid(machine: TwoCounterMachine) -> None:
    violations = validate(machine)
    if violations:
        raise InvalidMachineError(violations)


def machine_step(machine: TwoCounterMachine, conf: Configuration) -> Optional[Step]:
    """The step taken from conf, or None when no transition leaves its state."""
    found = machine.transition_from(conf.state)
    if found is None:
        return None
    action, t = found
    c1, c2 = conf.c1, conf.c2
    if action == INC_1:
        return Step(action, t, Configuration(t[1], c1 + 1, c2))
    if action == INC_2:
        return Step(action, t, Configuration(t[1], c1, c2 + 1))
    if action == DEC_1:
        if c1 == 0:
            return Step(action, t, Configuration(t[1], 0, c2))
        return Step(action, t, Configuration(t[2], c1 - 1, c2))
    if c2 == 0:
        return Step(action, t, Configuration(t[1], c1, 0))
    return Step(action, t, Configuration(t[2], c1, c2 - 1))


def run(machine: TwoCounterMachine, n1: int, n2: int, max_steps: int) -> RunResult:
    require_valid(machine)
    start = Configuration(machine.q_init, n1, n2)
    conf = start
    steps = []
    while True:
        if conf.state == machine.q_halt:
            return Halted(ExecutionTrace(start, tuple(steps)))
        if len(steps) >= max_steps:
            return OutOfBudget(ExecutionTrace(start, tuple(steps)))
        step = machine_step(machine, conf)
        if step is None:
            return Stuck(conf, ExecutionTrace(start, tuple(steps)))
        steps.append(step)
        conf = step.config


# ── execution words ───────────────────────────────────────────

def encode_trace_word(trace: ExecutionTrace) -> Tuple[str, ...]:
    if not trace.steps:
        raise TropicalError("cannot encode an empty trace")
    word = [A] * trace.initial.c1 + [B] * trace.initial.c2
    for i, step in enumerate(trace.steps):
        word.append(step.action)
        if i + 1 < len(trace.steps):
            word += [A] * step.config.c1 + [B] * step.config.c2
    return tuple(word)


def decode_word(word: Sequence[str]) -> List[Tuple[int, int, str]]:
    """Split a word of shape (a^* b^* action)^+ into (a-count, b-count, action) blocks."""
    blocks = []
    na = nb = 0
    for s in word:
        if s == A:
            if nb:
                raise TropicalError("an a follows a b inside a block")
            na += 1
        elif s == B:
            nb += 1
        elif s in ACTIONS:
            blocks.append((na, nb, s))
            na = nb = 0
        else:
            raise TropicalError(f"unknown letter {s!r}")
    if na or nb or not blocks:
        raise TropicalError("an execution word must end with an action")
    return blocks


# ── checker automaton ─────────────────────────────────────────

class _AutomatonBuilder:
    """Named states and weighted transitions; parallel duplicates keep the max."""

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        self.index: Dict[str, int] = {}
        self.initial = set()
        self.final = set()
        self.edges: Dict[Tuple[int, str, int], int] = {}

    def state(self, name, initial=False, final=False):
        if name not in self.index:
            self.index[name] = len(self.index)
        if initial:
            self.initial.add(name)
        if final:
            self.final.add(name)
        return name

    def edge(self, src, symbols, dst, weight):
        for s in symbols:
            key = (self.index[src], s, self.index[dst])
            if key not in self.edges or weight > self.edges[key]:
                self.edges[key] = weight

    def loop(self, state, symbols, weight):
        self.edge(state, symbols, state, weight)

    def has_edge_from(self, src, symbol):
        i = self.index[src]
        return any(k[0] == i and k[1] == symbol for k in self.edges)

    def build(self) -> MaxPlusAutomaton:
        d = len(self.index)
        rows = {s: [[BOTTOM] * d for _ in range(d)] for s in self.alphabet}
        for (i, s, j), w in self.edges.items():
            rows[s][i][j] = w
        mu = {s: TropicalMatrix.from_rows(rows[s]) for s in self.alphabet}
        names = sorted(self.index, key=self.index.get)
        initial = tuple(0 if name in self.initial else BOTTOM for name in names)
        final = tuple(0 if name in self.final else BOTTOM for name in names)
        return MaxPlusAutomaton(self.alphabet, mu, initial, final)


def _shape_gadget(bld, hub, sink):
    """Value 0 on words outside a^* (action a^* b^*)^* action."""
    start = bld.state("shape.start", initial=True)
    bld.loop(start, [A], 0)
    bld.edge(start, [B], sink, 0)            # b inside the first block
    tail = bld.state("shape.tail", final=True)
    bld.edge(hub, [A, B], tail, 0)           # ends inside a block
    after_b = bld.state("shape.after_b")
    bld.edge(hub, [B], after_b, 0)
    bld.edge(after_b, [A], sink, 0)          # factor "ba"


def _path_gadget(bld, machine, sink):
    """Follows the control states; value 0 unless the path ends in q_halt."""
    def name(q, suffix=""):
        return f"path.{q}{suffix}"

    for q in machine.states:
        bld.state(name(q), initial=(q == machine.q_init), final=(q != machine.q_halt))

    dec_1 = {t[0]: t for t in machine.t1_minus}
    dec_2 = {t[0]: t for t in machine.t2_minus}
    for q in machine.states:
        if q in dec_1:
            _, zero, nonzero = dec_1[q]
            counted = bld.state(name(q, "^a"), final=True)
            bld.loop(name(q), [B], 0)
            bld.edge(name(q), [A], counted, 0)
            bld.loop(counted, [A, B], 0)
            bld.edge(name(q), [DEC_1], name(zero), 0)
            bld.edge(counted, [DEC_1], name(nonzero), 0)
        elif q in dec_2:
            _, zero, nonzero = dec_2[q]
            counted = bld.state(name(q, "^b"), final=True)
            bld.loop(name(q), [A], 0)
            bld.edge(name(q), [B], counted, 0)
            bld.loop(counted, [A, B], 0)
            bld.edge(name(q), [DEC_2], name(zero), 0)
            bld.edge(counted, [DEC_2], name(nonzero), 0)
        else:
            bld.loop(name(q), [A, B], 0)
    for p, q in machine.t1_plus:
        bld.edge(name(p), [INC_1], name(q), 0)
    for p, q in machine.t2_plus:
        bld.edge(name(p), [INC_2], name(q), 0)

    # complete the gadget into the shared sink
    for state in [s for s in bld.index if s.startswith("path.")]:
        for s in bld.alphabet:
            if not bld.has_edge_from(state, s):
                bld.edge(state, [s], sink, 0)


def _counter_gadget(bld, hub, sink, letter, other, inc, dec, others, tag):
    """-1 while every block of `letter` is updated correctly by the next action, >= 0 otherwise.

    For a block with n letters followed by an action and a block with n':
      inc     max(n - n', n' - n - 2)
      dec     n = 0: max(-2 - n', n' - 1);  n > 0: max(n - 2 - n', n' - n)
      others  max(n - n' - 1, n' - n - 1)
    """
    up = bld.state(f"{tag}.up", initial=True)
    down = bld.state(f"{tag}.down", initial=True)
    gate = bld.state(f"{tag}.gate", initial=True)
    zero = bld.state(f"{tag}.zero", initial=True)
    gated = bld.state(f"{tag}.gated")
    after_up = bld.state(f"{tag}.after_up")
    after_down = bld.state(f"{tag}.after_down")
    for s in (up, down, gate, zero):
        bld.edge(hub, ACTIONS, s, 0)

    # n - n'
    bld.loop(up, [letter], 1)
    bld.loop(up, [other], 0)
    bld.edge(up, [inc], after_down, 0)
    bld.edge(up, [dec], after_down, -2)
    bld.edge(up, others, after_down, -1)
    # n' - n
    bld.loop(down, [letter], -1)
    bld.loop(down, [other], 0)
    bld.edge(down, [inc], after_up, -2)
    bld.edge(down, others, after_up, -1)
    # decrement of a nonzero counter: at least one letter before the action
    bld.loop(gate, [other], 0)
    bld.edge(gate, [letter], gated, -1)
    bld.loop(gated, [letter], -1)
    bld.loop(gated, [other], 0)
    bld.edge(gated, [dec], after_up, 0)
    # decrement of a zero counter
    bld.loop(zero, [other], 0)
    bld.edge(zero, [dec], after_up, -1)

    bld.loop(after_down, [letter], -1)
    bld.loop(after_down, [other], 0)
    bld.loop(after_up, [letter], 1)
    bld.loop(after_up, [other], 0)
    # only blocks closed by a further action are constrained
    bld.edge(after_down, ACTIONS, sink, 0)
    bld.edge(after_up, ACTIONS, sink, 0)


def _init_gadget(bld, sink, n):
    """|m - n| - 1 on words a^m action ..."""
    up = bld.state("init.up", initial=True)
    bld.loop(up, [A], 1)
    bld.edge(up, ACTIONS, sink, -n - 1)
    down = bld.state("init.down", initial=True)
    bld.loop(down, [A], -1)
    bld.edge(down, ACTIONS, sink, n - 1)


def checker_weights(checker: MaxPlusAutomaton) -> set:
    """The finite weights used by a checker; within {-n-1, -2, -1, 0, 1, n-1}."""
    return weights(checker)


def path_gadget_size(machine: TwoCounterMachine) -> int:
    """|Q| plus one counted copy per decrementing state."""
    return len(machine.states) + len(machine.t1_minus) + len(machine.t2_minus)


def build_checker(machine: TwoCounterMachine, n: int) -> MaxPlusAutomaton:
    """Max-plus automaton with f(w) = -1 iff w encodes the halting run of M from (n, 0)."""
    require_valid(machine)
    if n < 0:
        raise TropicalError(f"initial counter value must be nonnegative, got {n}")
    bld = _AutomatonBuilder(config.CHECKER_ALPHABET)
    hub = bld.state("hub", initial=True)
    sink = bld.state("sink", final=True)
    bld.loop(hub, bld.alphabet, 0)
    bld.loop(sink, bld.alphabet, 0)

    _shape_gadget(bld, hub, sink)
    _path_gadget(bld, machine, sink)
    _counter_gadget(bld, hub, sink, A, B, INC_1, DEC_1, [INC_2, DEC_2], "count1")
    _counter_gadget(bld, hub, sink, B, A, INC_2, DEC_2, [INC_1, DEC_1], "count2")
    _init_gadget(bld, sink, n)

    checker = bld.build()
    logger.info("CHECKER: %d states for %d-state machine, n=%d",
                checker.dim, len(machine.states), n)
    return checker


def reduction_pipeline(machine: TwoCounterMachine, n: int) -> Tuple[MatrixFamily, MatrixFamily]:
    """(Gamma_7, hat(Gamma_7)): the JSR and ultimate-rank instances for (M, n)."""
    gamma7 = MatrixFamily(tuple(gamma_of(star_extend(build_checker(machine, n)))))
    return gamma7, hat_family(gamma7)
