"""Small-step interpreter for the shared control structure of stochastic
local search runs.

A run rewrites a program of statements over a five-slot state (problem,
current solutions, incumbent best, fitness/pheromones/weights, side data).
Everything heuristic-specific lives in a :class:`FunctionSuite`; the
interpreter owns only the control structure and records every rule
application in a trace.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union


class EngineError(Exception):
    pass


class UninitializedRead(EngineError):
    """A suite function read a state slot that was never assigned."""


class NoRuleApplies(EngineError):
    """No transition rule matches the current configuration."""


class _AbsentType:
    """Sentinel for state slots that have not been assigned yet."""

    _instance: Optional["_AbsentType"] = None

    def __new__(cls) -> "_AbsentType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"


ABSENT = _AbsentType()


def present(value: Any, name: str = "value") -> Any:
    """Return ``value``, raising if it is still :data:`ABSENT`."""
    if value is ABSENT:
        raise UninitializedRead(f"{name} read before initialization")
    return value


@dataclass(frozen=True)
class State:
    """The five relevant variables of a run.

    Updating a slot yields a new state equal to the old one everywhere else
    (substitution semantics).
    """

    prob: Any = ABSENT
    sols: Any = ABSENT
    best: Any = ABSENT
    fpw: Any = ABSENT
    extra: Any = ABSENT

    def updated(self, **changes: Any) -> "State":
        return dataclasses.replace(self, **changes)


# --- statements -------------------------------------------------------------

@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class SetProb:
    pexp: Any


@dataclass(frozen=True)
class Compute:
    pexp: Any


@dataclass(frozen=True)
class Atom:
    name: str


Stmt = Union[Seq, SetProb, Compute, Atom]

GENERATE = Atom("generate")
NEXT_GEN = Atom("nextGen")
EVALUATE = Atom("evaluate")
STOP = Atom("stop")


def seq(*stmts: Stmt) -> Stmt:
    """Right-associated sequence of statements."""
    if not stmts:
        raise ValueError("empty sequence")
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


def right_associate(stmt: Stmt) -> Stmt:
    """Normalize nested sequences to right-associated form."""
    if not isinstance(stmt, Seq):
        return stmt
    first = right_associate(stmt.first)
    second = right_associate(stmt.second)
    while isinstance(first, Seq):
        second = Seq(first.second, second)
        first = first.first
    return Seq(first, second)


def statement_head(stmt: Stmt) -> str:
    """Name of the leftmost atomic statement, i.e. the one executed next."""
    while isinstance(stmt, Seq):
        stmt = stmt.first
    if isinstance(stmt, SetProb):
        return "setProb"
    if isinstance(stmt, Compute):
        return "compute"
    return stmt.name


# --- configurations ---------------------------------------------------------

@dataclass(frozen=True)
class Running:
    stmt: Stmt
    state: State


@dataclass(frozen=True)
class Terminal:
    state: State


Configuration = Union[Running, Terminal]


@dataclass
class FunctionSuite:
    """The pluggable auxiliary functions of one heuristic instance.

    Every function except ``stop_criterion`` returns a ``(value, extra)``
    pair; the engine threads the returned extra into the next state.

    ``expansions`` maps a statement name to the sub-statement names it
    rewrites to (e.g. nextGen -> select, cross, mutate for a GA).
    ``instance_fns`` maps an instance statement name to ``(slot, fn)``,
    where ``slot`` is the state field the function's value lands in.
    """

    algorithm: str
    init: Callable[[str], Any]
    set_problem: Callable[[Any, State, Any], tuple]
    generate: Callable[[State, Any], tuple]
    aeval: Callable[[State, Any], tuple]
    beval: Callable[[State, Any], tuple]
    stop_criterion: Callable[[State], bool]
    next_gen: Optional[Callable[[State, Any], tuple]] = None
    instance_fns: dict = field(default_factory=dict)
    expansions: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    head: str
    fpw_digest: str


RunTrace = list  # of TraceEntry


@dataclass(frozen=True)
class BudgetExhausted:
    """Outcome of a run that did not reach a terminal configuration."""

    state: State


def _fpw_digest(fpw: Any) -> str:
    if isinstance(fpw, int) and not isinstance(fpw, bool):
        return str(fpw)
    return "-"


def _exec(stmt: Stmt, state: State, suite: FunctionSuite, rng: Any):
    """Apply exactly one rule.  Returns (done, stmt_or_none, state, rule)."""
    if isinstance(stmt, Seq):
        done, inner, state2, rule = _exec(stmt.first, state, suite, rng)
        if done:
            return False, stmt.second, state2, "comp2"
        return False, Seq(inner, stmt.second), state2, "comp1"

    if isinstance(stmt, Compute):
        extra = suite.init(suite.algorithm)
        s2 = state.updated(extra=extra)
        body = seq(SetProb(stmt.pexp), GENERATE, EVALUATE, STOP)
        return False, body, s2, "compute"

    if isinstance(stmt, SetProb):
        prob, extra = suite.set_problem(stmt.pexp, state, rng)
        return True, None, state.updated(prob=prob, extra=extra), "set problem"

    name = stmt.name

    if name == "generate":
        sols, extra = suite.generate(state, rng)
        return True, None, state.updated(sols=sols, extra=extra), "generate"

    if name == "nextGen":
        expansion = suite.expansions.get("nextGen")
        if expansion is not None:
            return False, seq(*(Atom(n) for n in expansion)), state, "next generation"
        if suite.next_gen is None:
            raise NoRuleApplies("nextGen has neither an expansion nor a function")
        sols, extra = suite.next_gen(state, rng)
        return True, None, state.updated(sols=sols, extra=extra), "next generation"

    if name == "evaluate":
        expansion = suite.expansions.get("evaluate")
        if expansion is not None:
            return False, seq(*(Atom(n) for n in expansion)), state, "evaluate"
        fpw, extra = suite.aeval(state, rng)
        s2 = state.updated(fpw=fpw, extra=extra)
        best, extra2 = suite.beval(s2, rng)
        return True, None, s2.updated(best=best, extra=extra2), "evaluate"

    if name == "stop":
        if suite.stop_criterion(state):
            return True, None, state, "stop^tt"
        return False, seq(NEXT_GEN, EVALUATE, STOP), state, "stop^ff"

    try:
        slot, fn = suite.instance_fns[name]
    except KeyError:
        raise NoRuleApplies(f"no rule registered for statement {name!r}") from None
    value, extra = fn(state, rng)
    return True, None, state.updated(**{slot: value, "extra": extra}), name


def step(config: Configuration, suite: FunctionSuite, rng: Any):
    """Apply one transition rule to a running configuration.

    Returns the successor configuration and the name of the applied rule.
    """
    if isinstance(config, Terminal):
        raise NoRuleApplies("terminal configurations admit no transitions")
    done, stmt, state, rule = _exec(config.stmt, config.state, suite, rng)
    if done:
        return Terminal(state), rule
    return Running(stmt, state), rule


def compute(pexp: Any, algorithm: str, suite: FunctionSuite, rng: Any,
            budget: int):
    """Run a full computation, up to ``budget`` rule applications.

    Returns ``(outcome, trace)`` where outcome is a :class:`Terminal`
    configuration or :class:`BudgetExhausted` carrying the last state.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    suite = dataclasses.replace(suite, algorithm=algorithm)
    config: Configuration = Running(Compute(pexp), State())
    trace: RunTrace = []
    for _ in range(budget):
        head = statement_head(config.stmt)
        config, rule = step(config, suite, rng)
        trace.append(TraceEntry(rule, head, _fpw_digest(config.state.fpw)))
        if isinstance(config, Terminal):
            return config, trace
    return BudgetExhausted(config.state), trace


def render_trace(trace: RunTrace) -> str:
    """One line per rule application: index, rule, statement head, FPW."""
    return "".join(
        f"{i}\t{e.rule}\t{e.head}\t{e.fpw_digest}\n" for i, e in enumerate(trace)
    )
