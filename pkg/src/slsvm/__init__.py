"""Stochastic local search engine with universal Turing-machine emulation.

A small-step interpreter gives genetic, ant colony, and particle swarm
heuristics one shared control structure; compiling a Turing machine into
correspondence tiles lets each heuristic reconstruct the machine's
computation history, making the shared structure Turing complete.
"""

from .engine import (ABSENT, BudgetExhausted, EngineError, FunctionSuite,
                     NoRuleApplies, Running, State, Terminal, TraceEntry,
                     UninitializedRead, compute, render_trace, step)
from .mpcp import (MpcpError, MultipleExtensions, NoExtension, Tile, TileSet,
                   UnnormalizedMachine, brute_force_mpcp, compile_tiles,
                   expected_tile_count, is_complete_solution,
                   is_partial_solution, unique_extension)
from .swarm import (SwarmResult, SwarmStats, TileTree, aco_iteration,
                    aco_run_universal, pso_run_universal)
from .tm import (ACCEPTED, BUDGET_EXHAUSTED, STUCK, BoundaryViolation,
                 History, TmConfiguration, TmError, TmSyntaxError,
                 TmValidationError, TuringMachine, is_normalized,
                 map_history, normalize, parse_tm, pseudo_blank, simulate)
from .uga import (DETERMINISTIC, FULL_HISTORY, STALLED, STOCHASTIC, TRIMMED,
                  ExhaustedBlacklist, MalformedSegment, RunStats, UgaResult,
                  decode_history, run_universal, universal_ga_suite)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
