"""The universal genetic algorithm: a single-individual GA over tile
sequences whose run reconstructs the computation history of a Turing
machine on an input.

The individual is a list of tile indices.  Mutation only touches the last
tile (replace while wrong, append once right), fitness counts the tiles
correctly chained so far, and the run stops when the closing tile lands.
A memory-trimmed variant drops fully matched tiles from the front so the
individual's size tracks tape usage instead of step count.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from . import engine
from .engine import ABSENT, FunctionSuite, Terminal, present
from .mpcp import (MpcpError, TileSet, compile_tiles, concatenations,
                   is_viable_extension, tile_fits, SEPARATOR)
from .tm import ACCEPTED, History, TmConfiguration, TuringMachine, \
    make_configuration

STOCHASTIC = "stochastic"
DETERMINISTIC = "deterministic"
FULL_HISTORY = "full"
TRIMMED = "trimmed"

STALLED = "stalled"


class UgaError(Exception):
    pass


class ExhaustedBlacklist(UgaError):
    """Every candidate tile for the current position has been rejected."""


class MalformedSegment(UgaError):
    pass


@dataclass(frozen=True)
class UgaExtra:
    """Blacklist of tile indices plus the trimmed variant's bookkeeping."""

    blacklist: tuple
    dropped_top: int = 0     # top symbols removed from the front
    dropped_bottom: int = 0  # bottom symbols removed from the front
    complete: bool = False
    captured: Optional[TmConfiguration] = None

    @property
    def skip_offset(self) -> int:
        return self.dropped_bottom - self.dropped_top


@dataclass
class RunStats:
    generations: int = 0
    attempts_max: int = 0
    peak_len: int = 0
    _attempts: int = 0

    def render(self) -> str:
        return (f"generations={self.generations} "
                f"attempts_max={self.attempts_max} peak_len={self.peak_len}")


@dataclass
class UgaResult:
    status: str  # tm.ACCEPTED, tm.BUDGET_EXHAUSTED, or STALLED
    history: Optional[History]
    final_configuration: Optional[TmConfiguration]
    stats: RunStats
    solution: Optional[tuple] = None
    final_fitness: Optional[int] = None


class _Chain:
    """Incremental view of the validated prefix of the individual.

    Keeps the retained bottom concatenation and matched-top length so each
    evaluation costs O(tile) instead of O(individual).  ``shift`` is the
    difference between dropped top and bottom lengths (zero unless
    trimming is active).
    """

    def __init__(self, tile_set: TileSet):
        self.tile_set = tile_set
        self.prefix: list = []
        self.a_len = 0
        self.bottom: list = []
        self.shift = 0
        self.top_seps: list = []  # separator count inside each prefix tile's top
        self.total_seps = 0

    def reset(self, prefix) -> None:
        self.prefix = []
        self.a_len = 0
        self.bottom = []
        self.shift = 0
        self.top_seps = []
        self.total_seps = 0
        for idx in prefix:
            tile = self.tile_set.tiles[idx]
            fits, _ = tile_fits(self.a_len, self.bottom, tile, self.shift)
            if not fits:
                raise UgaError(f"tile {idx} does not fit the chain prefix")
            self.commit(idx)

    def sync(self, prefix) -> None:
        if self.prefix != list(prefix):
            self.reset(prefix)

    def check_last(self, idx: int):
        tile = self.tile_set.tiles[idx]
        return is_viable_extension(self.tile_set, self.a_len, self.bottom,
                                   tile, self.shift)

    def commit(self, idx: int) -> None:
        tile = self.tile_set.tiles[idx]
        self.prefix.append(idx)
        self.a_len += len(tile.top)
        self.bottom.extend(tile.bottom)
        seps = tile.top.count(SEPARATOR)
        self.top_seps.append(seps)
        self.total_seps += seps

    def drop_matched(self):
        """Drop front tiles whose top symbols have at least two separators
        to their right in the retained top concatenation."""
        dropped_top = 0
        dropped_bottom = 0
        while len(self.prefix) > 1 and self.total_seps - self.top_seps[0] >= 2:
            idx = self.prefix.pop(0)
            tile = self.tile_set.tiles[idx]
            self.a_len -= len(tile.top)
            del self.bottom[:len(tile.bottom)]
            self.shift += len(tile.top) - len(tile.bottom)
            self.total_seps -= self.top_seps.pop(0)
            dropped_top += len(tile.top)
            dropped_bottom += len(tile.bottom)
        return dropped_top, dropped_bottom

    def complete_segments(self):
        """Token segments lying strictly between separators of the
        retained bottom concatenation."""
        positions = [i for i, tok in enumerate(self.bottom)
                     if tok == SEPARATOR]
        for lo, hi in zip(positions, positions[1:]):
            yield self.bottom[lo + 1:hi]


def parse_segment(segment, states, finals, blank) -> TmConfiguration:
    """Parse one separator-delimited configuration string."""
    state_positions = [i for i, tok in enumerate(segment) if tok in states]
    if len(state_positions) != 1:
        raise MalformedSegment(
            f"segment {''.join(segment)!r} must contain exactly one state")
    pos = state_positions[0]
    return make_configuration(segment[:pos], segment[pos],
                              segment[pos + 1:], blank)


def decode_history(tile_set: TileSet, solution) -> History:
    """Read the machine's configuration history off a complete solution.

    Splits the bottom concatenation at separators and parses segments up
    to and including the first one carrying a final state.
    """
    tiles = [tile_set.tiles[i] for i in solution]
    top, bottom = concatenations(tiles)
    if top != bottom:
        raise UgaError("solution is not complete (top and bottom differ)")
    segments = []
    current: list = []
    for token in bottom[1:]:  # bottom always starts with a separator
        if token == SEPARATOR:
            segments.append(current)
            current = []
        else:
            current.append(token)
    configs = []
    for segment in segments:
        if not segment:
            continue
        config = parse_segment(segment, tile_set.states, tile_set.finals,
                               tile_set.blank)
        configs.append(config)
        if config.state in tile_set.finals:
            break
    return History(tuple(configs), ACCEPTED)


def universal_ga_suite(tm: TuringMachine, input_string: str,
                       mode: str = STOCHASTIC, variant: str = FULL_HISTORY,
                       stats: Optional[RunStats] = None) -> FunctionSuite:
    """Build the engine suite for simulating ``(tm, input_string)``."""
    if mode not in (STOCHASTIC, DETERMINISTIC):
        raise ValueError(f"unknown mode {mode!r}")
    if variant not in (FULL_HISTORY, TRIMMED):
        raise ValueError(f"unknown variant {variant!r}")
    tile_set = compile_tiles(tm, input_string)
    n = tile_set.count
    chain = _Chain(tile_set)
    stats = stats if stats is not None else RunStats()
    trimmed = variant == TRIMMED

    def init(_algorithm):
        return UgaExtra(blacklist=(True,) * n)

    def set_problem(pexp, state, rng):
        machine, word = pexp
        return compile_tiles(machine, word), state.extra

    def draw(eligible, rng):
        if mode == DETERMINISTIC:
            return eligible[0]
        return rng.choice(eligible)

    def generate(state, rng):
        extra = state.extra
        eligible = [i for i in range(1, n) if extra.blacklist[i]]
        i = draw(eligible, rng)
        blacklist = list(extra.blacklist)
        blacklist[i] = False
        chain.reset([0])
        stats._attempts = 0
        stats.peak_len = max(stats.peak_len, 2)
        return (0, i), replace(extra, blacklist=tuple(blacklist))

    def identity(state, rng):
        return state.sols, state.extra

    def mutate(state, rng):
        individual = list(present(state.sols, "Sols"))
        fpw = present(state.fpw, "FPW")
        extra = state.extra
        stats.generations += 1
        if fpw == len(individual):
            # every tile correct: trim (if enabled), then append
            if trimmed:
                chain.sync(individual)
                d_top, d_bot = chain.drop_matched()
                individual = list(chain.prefix)
                extra = replace(extra,
                                dropped_top=extra.dropped_top + d_top,
                                dropped_bottom=extra.dropped_bottom + d_bot)
            eligible = [i for i in range(1, n) if extra.blacklist[i]]
            if not eligible:
                raise ExhaustedBlacklist("no tile left to append")
            i = draw(eligible, rng)
            individual.append(i)
            blacklist = [True] * n
            blacklist[i] = False
        else:
            eligible = [i for i in range(1, n) if extra.blacklist[i]]
            if not eligible:
                raise ExhaustedBlacklist("no tile left to try at this position")
            i = draw(eligible, rng)
            individual[-1] = i
            blacklist = list(extra.blacklist)
            blacklist[i] = False
        stats.peak_len = max(stats.peak_len, len(individual))
        return tuple(individual), replace(extra, blacklist=tuple(blacklist))

    def capture(extra):
        if extra.captured is not None:
            return extra
        for segment in chain.complete_segments():
            try:
                config = parse_segment(segment, tile_set.states,
                                       tile_set.finals, tile_set.blank)
            except MalformedSegment:
                continue
            if config.state in tile_set.finals:
                return replace(extra, captured=config)
        return extra

    def aeval(state, rng):
        individual = present(state.sols, "Sols")
        extra = state.extra
        chain.sync(individual[:-1])
        viable, complete = chain.check_last(individual[-1])
        if viable:
            chain.commit(individual[-1])
            stats._attempts = 0
            extra = replace(extra, blacklist=(True,) * n, complete=complete)
            if trimmed:
                extra = capture(extra)
            fpw = len(individual)
        else:
            # count failed tries per position: at most n - 2 can fail
            # before the blacklist forces the unique viable tile
            stats._attempts += 1
            stats.attempts_max = max(stats.attempts_max, stats._attempts)
            fpw = len(individual) - 1
        if not trimmed and state.fpw is not ABSENT:
            # incremental form; equal to the length-based value above
            fpw = state.fpw + 1 if viable else state.fpw
        return fpw, extra

    def beval(state, rng):
        individual = present(state.sols, "Sols")
        fpw = present(state.fpw, "FPW")
        return tuple(individual[:fpw]), state.extra

    def stop(state):
        best = state.best
        if best is ABSENT or not best:
            return False
        fpw = present(state.fpw, "FPW")
        closing = best[-1] in state.prob.closing_indices
        if trimmed:
            return closing and state.extra.complete
        return len(best) == fpw and closing

    return FunctionSuite(
        algorithm="universal-ga",
        init=init,
        set_problem=set_problem,
        generate=generate,
        aeval=aeval,
        beval=beval,
        stop_criterion=stop,
        instance_fns={
            "select": ("sols", identity),
            "cross": ("sols", identity),
            "mutate": ("sols", mutate),
        },
        expansions={"nextGen": ("select", "cross", "mutate")},
    )


# engine rule applications per generation cycle (stop^ff, nextGen, select,
# cross, mutate, evaluate) and for the compute/setProb/generate/evaluate/stop
# prefix
RULES_PER_GENERATION = 6
PREFIX_RULES = 5


def run_universal(tm: TuringMachine, input_string: str,
                  mode: str = STOCHASTIC, variant: str = FULL_HISTORY,
                  budget: int = 10000, seed: int = 0) -> UgaResult:
    """Simulate ``(tm, input_string)`` with the universal GA.

    ``budget`` counts generations (mutation steps).  Returns the decoded
    history on success; a budget or stalled outcome otherwise.
    """
    import random

    stats = RunStats()
    suite = universal_ga_suite(tm, input_string, mode=mode, variant=variant,
                               stats=stats)
    rng = random.Random(seed)
    rule_budget = PREFIX_RULES + RULES_PER_GENERATION * budget
    try:
        outcome, _trace = engine.compute((tm, input_string), "universal-ga",
                                         suite, rng, rule_budget)
    except ExhaustedBlacklist:
        return UgaResult(STALLED, None, None, stats)

    if isinstance(outcome, Terminal):
        state = outcome.state
        if variant == TRIMMED:
            config = state.extra.captured
            history = History((config,), ACCEPTED) if config else None
            return UgaResult(ACCEPTED, history, config, stats,
                             solution=tuple(state.best),
                             final_fitness=state.fpw)
        history = decode_history(state.prob, state.best)
        return UgaResult(ACCEPTED, history, history.final, stats,
                         solution=tuple(state.best),
                         final_fitness=state.fpw)
    from .tm import BUDGET_EXHAUSTED
    state = outcome.state
    fitness = state.fpw if state.fpw is not engine.ABSENT else None
    return UgaResult(BUDGET_EXHAUSTED, None, None, stats,
                     final_fitness=fitness)
