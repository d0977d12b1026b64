"""Deterministic single-tape Turing machines on a semi-infinite tape.

The simulator produces the full configuration history of a run; that
history is the ground truth every universal heuristic is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

ACCEPTED = "accepted"
STUCK = "stuck"
BUDGET_EXHAUSTED = "budget-exhausted"

LEFT = "L"
RIGHT = "R"

_RESERVED_CHARS = set("#|")


class TmError(Exception):
    pass


class TmSyntaxError(TmError):
    """Malformed machine description text; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TmValidationError(TmError):
    pass


class BoundaryViolation(TmError):
    """The head tried to move left from cell 0."""


@dataclass(frozen=True)
class TuringMachine:
    states: frozenset
    input_alphabet: frozenset
    tape_alphabet: frozenset
    delta: dict
    start: str
    blank: str
    finals: frozenset

    def writes_blank(self) -> bool:
        return any(write == self.blank for _, write, _ in self.delta.values())

    def rule(self, state: str, symbol: str):
        return self.delta.get((state, symbol))


@dataclass(frozen=True)
class TmConfiguration:
    """One machine snapshot: cells left of the head, the state, and the
    cells from the head rightward (trailing blanks trimmed, but never to
    an empty string)."""

    left: tuple
    state: str
    right: tuple

    def render(self) -> str:
        alpha = "".join(self.left) or "-"
        return f"{alpha} {self.state} {''.join(self.right)}"


def make_configuration(left, state, right, blank) -> TmConfiguration:
    right = list(right)
    while len(right) > 1 and right[-1] == blank:
        right.pop()
    if not right:
        right = [blank]
    return TmConfiguration(tuple(left), state, tuple(right))


@dataclass(frozen=True)
class History:
    configurations: tuple
    halt_status: str

    def render(self) -> str:
        return "".join(c.render() + "\n" for c in self.configurations)

    @property
    def final(self) -> TmConfiguration:
        return self.configurations[-1]


def parse_tm(text: str) -> TuringMachine:
    """Parse the line-based machine description format (``#`` starts a comment)."""
    fields = {}
    rules = []
    any_line = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        any_line = True
        if ":" not in line:
            raise TmSyntaxError("expected 'key: value'", lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "rule":
            if "->" not in value:
                raise TmSyntaxError("rule needs '->'", lineno)
            lhs, _, rhs = value.partition("->")
            lhs_parts = lhs.split()
            rhs_parts = rhs.split()
            if len(lhs_parts) != 2 or len(rhs_parts) != 3:
                raise TmSyntaxError("rule must be 'q X -> p Y L|R'", lineno)
            if rhs_parts[2] not in (LEFT, RIGHT):
                raise TmSyntaxError("move must be L or R", lineno)
            rules.append((lineno, tuple(lhs_parts), tuple(rhs_parts)))
        elif key in ("states", "input_alphabet", "tape_alphabet"):
            fields[key] = value.split()
        elif key in ("blank", "start"):
            if len(value.split()) != 1:
                raise TmSyntaxError(f"{key} takes one token", lineno)
            fields[key] = value
        elif key == "accept":
            fields[key] = value.split()
        else:
            raise TmSyntaxError(f"unknown key {key!r}", lineno)

    if not any_line:
        raise TmSyntaxError("empty machine description", 1)
    for key in ("states", "input_alphabet", "tape_alphabet", "blank", "start"):
        if key not in fields:
            raise TmSyntaxError(f"missing '{key}:' line", 1)

    states = frozenset(fields["states"])
    sigma = frozenset(fields["input_alphabet"])
    gamma = frozenset(fields["tape_alphabet"])
    blank = fields["blank"]
    start = fields["start"]
    finals = frozenset(fields.get("accept", []))

    for name in states | gamma:
        if _RESERVED_CHARS & set(name):
            raise TmValidationError(f"reserved character in name {name!r}")
    if states & gamma:
        raise TmValidationError("state and tape symbol names must not overlap")
    if not sigma <= gamma:
        raise TmValidationError("input alphabet must be within tape alphabet")
    if blank not in gamma:
        raise TmValidationError("blank must be a tape symbol")
    if blank in sigma:
        raise TmValidationError("blank must not be an input symbol")
    if start not in states:
        raise TmValidationError(f"unknown start state {start!r}")
    if not finals <= states:
        raise TmValidationError("accept states must be states")

    delta = {}
    for lineno, (q, x), (p, y, move) in rules:
        for st in (q, p):
            if st not in states:
                raise TmValidationError(f"line {lineno}: unknown state {st!r}")
        for sym in (x, y):
            if sym not in gamma:
                raise TmValidationError(f"line {lineno}: unknown symbol {sym!r}")
        if (q, x) in delta:
            raise TmValidationError(
                f"line {lineno}: nondeterministic rule for ({q}, {x})")
        delta[(q, x)] = (p, y, move)

    return TuringMachine(states, sigma, gamma, delta, start, blank, finals)


def pseudo_blank(tm: TuringMachine) -> str:
    name = tm.blank + "^"
    while name in tm.tape_alphabet or name in tm.states:
        name += "^"
    return name


def is_normalized(tm: TuringMachine) -> bool:
    return not tm.writes_blank()


def normalize(tm: TuringMachine) -> TuringMachine:
    """Rewrite the machine so it never writes its blank symbol.

    Writes of the blank go to a fresh pseudo-blank; every rule that reads
    the blank gets a twin reading the pseudo-blank.  Machines that already
    never write blanks are returned unchanged.
    """
    if is_normalized(tm):
        return tm
    hat = pseudo_blank(tm)
    delta = {}
    for (q, x), (p, y, move) in tm.delta.items():
        delta[(q, x)] = (p, hat if y == tm.blank else y, move)
    for (q, x), out in list(delta.items()):
        if x == tm.blank:
            delta[(q, hat)] = out
    return TuringMachine(
        tm.states,
        tm.input_alphabet,
        tm.tape_alphabet | {hat},
        delta,
        tm.start,
        tm.blank,
        tm.finals,
    )


def simulate(tm: TuringMachine, input_string: str, max_steps: int) -> History:
    """Run the machine, recording every configuration.

    Halts with ``accepted`` on entering a final state, ``stuck`` when no
    rule applies at a non-final state, ``budget-exhausted`` otherwise.
    """
    tape = list(input_string)
    for sym in tape:
        if sym not in tm.input_alphabet:
            raise TmValidationError(f"input symbol {sym!r} not in input alphabet")
    if not tape:
        tape = [tm.blank]
    head = 0
    state = tm.start
    configs = [make_configuration(tape[:head], state, tape[head:], tm.blank)]

    for _ in range(max_steps):
        if state in tm.finals:
            return History(tuple(configs), ACCEPTED)
        rule = tm.rule(state, tape[head])
        if rule is None:
            return History(tuple(configs), STUCK)
        state, write, move = rule
        tape[head] = write
        if move == LEFT:
            if head == 0:
                raise BoundaryViolation(
                    "head moved left from the initial position")
            head -= 1
        else:
            head += 1
            if head == len(tape):
                tape.append(tm.blank)
        configs.append(make_configuration(tape[:head], state, tape[head:], tm.blank))

    status = ACCEPTED if state in tm.finals else BUDGET_EXHAUSTED
    return History(tuple(configs), status)


def map_history(history: History, mapping: dict, blank: str) -> History:
    """Apply a symbol substitution (e.g. pseudo-blank back to blank) and
    re-canonicalize each configuration."""
    def remap(config: TmConfiguration) -> TmConfiguration:
        left = [mapping.get(s, s) for s in config.left]
        right = [mapping.get(s, s) for s in config.right]
        return make_configuration(left, config.state, right, blank)

    return History(tuple(remap(c) for c in history.configurations),
                   history.halt_status)
