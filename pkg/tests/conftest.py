import pathlib

import pytest

from slsvm.tm import TuringMachine, parse_tm

DATA = pathlib.Path(__file__).parent / "data"


def load_machine(name: str) -> TuringMachine:
    return parse_tm((DATA / name).read_text(encoding="utf-8"))


# (fixture file, accepted input) pairs used by the acceptance criteria
CORPUS = [
    ("trivial.tm", "1"),
    ("m_acc.tm", "1"),
    ("successor.tm", "11"),
    ("parity.tm", "11"),
    ("astarbstar.tm", "ab"),
]


def sweeper(k: int) -> TuringMachine:
    """Machine that crosses the fixed tape X a a Y ``k`` times (k even,
    alternating directions) and then accepts.  Never writes a blank."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    states = {"qf"}
    delta = {}
    for i in range(1, k + 1):
        if i % 2:  # rightward pass
            r = f"R{i}"
            states.add(r)
            delta[(r, "a")] = (r, "a", "R")
            if i == 1:
                delta[(r, "X")] = (r, "X", "R")
            delta[(r, "Y")] = (f"L{i + 1}", "Y", "L")
        else:  # leftward pass
            left = f"L{i}"
            states.add(left)
            delta[(left, "a")] = (left, "a", "L")
            target = "qf" if i == k else f"R{i + 1}"
            delta[(left, "X")] = (target, "X", "R")
    return TuringMachine(
        states=frozenset(states),
        input_alphabet=frozenset({"X", "a", "Y"}),
        tape_alphabet=frozenset({"X", "a", "Y", "_"}),
        delta=delta,
        start="R1",
        blank="_",
        finals=frozenset({"qf"}),
    )


SWEEPER_INPUT = "XaaY"


@pytest.fixture
def m_acc():
    return load_machine("m_acc.tm")


@pytest.fixture
def looper():
    return load_machine("looper.tm")
