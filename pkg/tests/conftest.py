import pytest

import config
from automata import MaxPlusAutomaton
from counter_machines import TwoCounterMachine
from oracle import make_rng
from tropical_core import BOTTOM, TropicalMatrix

B = BOTTOM


def matrix(*rows):
    return TropicalMatrix.from_rows(rows)


MU_A = matrix([1, B], [B, 0])
MU_B = matrix([0, B], [B, 1])


def max_count_automaton():
    """Two states, both initial and final; f(w) = max(|w|_a, |w|_b)."""
    return MaxPlusAutomaton(("a", "b"), {"a": MU_A, "b": MU_B}, (0, 0), (0, 0))


# ── fixture machines ──────────────────────────────────────────

def machine_inc2():
    """q0 -c1p-> q1 -c2p-> qh."""
    return TwoCounterMachine.build(["q0", "q1", "qh"], "q0", "qh",
                                   t1_plus=[("q0", "q1")], t2_plus=[("q1", "qh")])


def machine_drain():
    """Decrements counter 1 to zero, then halts."""
    return TwoCounterMachine.build(["q0", "qh"], "q0", "qh", t1_minus=[("q0", "qh", "q0")])


def machine_transfer():
    """Moves counter 1 onto counter 2, then halts."""
    return TwoCounterMachine.build(["q0", "q1", "qh"], "q0", "qh",
                                   t1_minus=[("q0", "qh", "q1")], t2_plus=[("q1", "q0")])


def machine_bump2():
    """q0 -c2p-> q1, then counter 2 is drained back to zero and the machine halts."""
    return TwoCounterMachine.build(["q0", "q1", "qh"], "q0", "qh",
                                   t2_plus=[("q0", "q1")], t2_minus=[("q1", "qh", "q1")])


def machine_forever():
    """Increments counter 1 forever."""
    return TwoCounterMachine.build(["q0", "qh"], "q0", "qh", t1_plus=[("q0", "q0")])


HALTING_MACHINES = {
    "inc2": machine_inc2,
    "drain": machine_drain,
    "transfer": machine_transfer,
    "bump2": machine_bump2,
}


@pytest.fixture
def max_count():
    return max_count_automaton()


@pytest.fixture
def rng():
    return make_rng(config.DEFAULT_SEED)


@pytest.fixture
def inc2():
    return machine_inc2()
