"""Command-line front end: compile, simulate, emulate, verify, demo.

Exit codes: 0 success/match, 1 budget exhausted, 2 invalid input,
3 stuck, 4 boundary violation, 5 mismatch.  Stats lines are prefixed
with ``#`` so history sections diff cleanly.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional

from . import engine, instances, swarm, tm, uga
from .mpcp import MpcpError, compile_tiles
from .tm import (ACCEPTED, BUDGET_EXHAUSTED, STUCK, BoundaryViolation,
                 TmError, TuringMachine, map_history, normalize, parse_tm,
                 pseudo_blank, simulate)

EXIT_OK = 0
EXIT_BUDGET = 1
EXIT_INVALID = 2
EXIT_STUCK = 3
EXIT_BOUNDARY = 4
EXIT_MISMATCH = 5

_MODES = {"det": uga.DETERMINISTIC, "deterministic": uga.DETERMINISTIC,
          "stoch": uga.STOCHASTIC, "stochastic": uga.STOCHASTIC}


def _load_machine(path: str) -> TuringMachine:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_tm(handle.read())


def _emit(out, text: str) -> None:
    out.write(text)


def cmd_compile(args, out, err) -> int:
    machine = normalize(_load_machine(args.file))
    tile_set = compile_tiles(machine, args.input)
    if not machine.finals:
        err.write("warning: machine has no accept states; "
                  "tile set has no closing tiles\n")
    _emit(out, tile_set.render())
    return EXIT_OK


def cmd_simulate(args, out, err) -> int:
    machine = _load_machine(args.file)
    history = simulate(machine, args.input, args.max_steps)
    _emit(out, history.render())
    if history.halt_status == ACCEPTED:
        return EXIT_OK
    if history.halt_status == STUCK:
        return EXIT_STUCK
    return EXIT_BUDGET


def _emulate(machine: TuringMachine, args):
    """Run the selected universal heuristic on the normalized machine.

    Returns ``(status, history, final_configuration, stats_text)`` with
    pseudo-blanks already mapped back to the machine's blank.
    """
    normalized = normalize(machine)
    mapping = {}
    if normalized is not machine:
        mapping = {pseudo_blank(machine): machine.blank}

    if args.heuristic == "ga":
        result = uga.run_universal(
            normalized, args.input, mode=_MODES[args.mode],
            variant=args.variant, budget=args.budget, seed=args.seed)
        history = result.history
        config = result.final_configuration
        stats_lines = [result.stats.render()]
    elif args.heuristic == "aco":
        result = swarm.aco_run_universal(
            normalized, args.input, ants=args.ants, budget=args.budget,
            seed=args.seed)
        history = result.history
        config = history.final if history else None
        stats = result.stats
        stats_lines = [f"iterations={stats.iterations}",
                       f"max_depth={stats.max_depth} nodes={stats.nodes}"]
    else:
        result = swarm.pso_run_universal(
            normalized, args.input, particles=args.particles,
            budget=args.budget, seed=args.seed)
        history = result.history
        config = history.final if history else None
        stats = result.stats
        stats_lines = [f"iterations={stats.iterations}",
                       f"max_depth={stats.max_depth}"]

    if mapping and history is not None:
        history = map_history(history, mapping, machine.blank)
        config = history.final
    return result.status, history, config, stats_lines


def cmd_emulate(args, out, err) -> int:
    machine = _load_machine(args.file)
    status, history, _config, stats_lines = _emulate(machine, args)
    if history is not None:
        _emit(out, history.render())
    _emit(out, f"# status={status}\n")
    for line in stats_lines:
        _emit(out, f"# {line}\n")
    return EXIT_OK if status == ACCEPTED else EXIT_BUDGET


def cmd_verify(args, out, err) -> int:
    machine = _load_machine(args.file)
    oracle = simulate(machine, args.input, args.budget)
    status, history, config, _stats = _emulate(machine, args)

    if oracle.halt_status == ACCEPTED and status == ACCEPTED:
        if args.heuristic == "ga" and args.variant == uga.TRIMMED:
            expected = oracle.final.render() + "\n"
            got = config.render() + "\n" if config else ""
        else:
            expected = oracle.render()
            got = history.render() if history else ""
        if args.corrupt:
            got = _corrupt(got)
        if got == expected:
            _emit(out, "MATCH\n")
            return EXIT_OK
        exp_lines = expected.splitlines()
        got_lines = got.splitlines()
        for i in range(max(len(exp_lines), len(got_lines))):
            left = exp_lines[i] if i < len(exp_lines) else "<missing>"
            right = got_lines[i] if i < len(got_lines) else "<missing>"
            if left != right:
                _emit(out, f"line {i + 1}: expected {left!r} got {right!r}\n")
                return EXIT_MISMATCH
        return EXIT_MISMATCH

    if oracle.halt_status != ACCEPTED and status != ACCEPTED:
        _emit(out, "BOTH-NONHALTING\n")
        return EXIT_OK

    side = "oracle" if oracle.halt_status == ACCEPTED else "emulation"
    _emit(out, f"line 1: only the {side} accepted "
               f"(oracle={oracle.halt_status} emulation={status})\n")
    return EXIT_MISMATCH


def _corrupt(text: str) -> str:
    """Negative-control hook: damage the first history line."""
    lines = text.splitlines(keepends=True)
    if not lines:
        return "corrupted\n"
    lines[0] = "corrupted " + lines[0]
    return "".join(lines)


def _write_trace(path: Optional[str], trace) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(engine.render_trace(trace))


def cmd_demo(args, out, err) -> int:
    rng = random.Random(args.seed)
    log: list = []
    if args.problem == "onemax":
        suite = instances.onemax_ga_suite(
            args.n, pop_size=args.pop, mut_rate=args.mut_rate,
            max_generations=args.iterations, log=log)
        pexp = args.n
        label, best_label = "gen", "fitness"
    elif args.problem == "gridpath":
        edges = _parse_edges(args.edges)
        suite = instances.gridpath_aco_suite(
            edges, ants=args.ants, iterations=args.iterations, log=log)
        pexp = edges
        label, best_label = "iter", "cost"
    else:
        suite = instances.sphere_pso_suite(
            args.dim, particles=args.particles, iterations=args.iterations,
            log=log)
        pexp = args.dim
        label, best_label = "iter", "value"

    rule_budget = 16 + 8 * (args.iterations + 2)
    outcome, trace = engine.compute(pexp, suite.algorithm, suite, rng,
                                    rule_budget)
    _write_trace(args.trace, trace)
    for step_index, best_value in log:
        _emit(out, f"{label} {step_index} best {best_value}\n")
    _emit(out, f"final {best_label}={log[-1][1]}\n")
    if isinstance(outcome, engine.BudgetExhausted):
        return EXIT_BUDGET
    return EXIT_OK


def _parse_edges(text: str):
    """Edge list syntax: ``u,v,cost`` triples separated by semicolons."""
    edges = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 3:
            raise ValueError(f"bad edge {chunk!r}, want u,v,cost")
        edges.append((parts[0], parts[1], float(parts[2])))
    return edges


DEFAULT_EDGES = "A,B,1;A,C,4;B,D,2;C,D,1"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slsvm",
        description="Stochastic local search engine with universal "
                    "Turing-machine emulation over correspondence tiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="dump the tile set for machine+input")
    p.add_argument("file")
    p.add_argument("input")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run the machine directly")
    p.add_argument("file")
    p.add_argument("input")
    p.add_argument("--max-steps", type=int, default=10000)
    p.set_defaults(func=cmd_simulate)

    for name in ("emulate", "verify"):
        p = sub.add_parser(
            name,
            help=("run a universal heuristic" if name == "emulate"
                  else "diff heuristic emulation against direct simulation"))
        p.add_argument("file")
        p.add_argument("input")
        p.add_argument("--heuristic", choices=("ga", "aco", "pso"),
                       default="ga")
        p.add_argument("--mode", choices=sorted(_MODES), default="stochastic")
        p.add_argument("--variant", choices=(uga.FULL_HISTORY, uga.TRIMMED),
                       default=uga.FULL_HISTORY)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--ants", type=int, default=4)
        p.add_argument("--particles", type=int, default=4)
        if name == "emulate":
            p.add_argument("--budget", type=int, required=True)
            p.set_defaults(func=cmd_emulate, corrupt=False)
        else:
            p.add_argument("--budget", type=int, default=10000)
            p.add_argument("--corrupt", action="store_true",
                           help="negative-control hook: damage the emulated "
                                "history before diffing")
            p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="run a classic heuristic instance")
    p.add_argument("problem", choices=("onemax", "gridpath", "sphere"))
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--pop", type=int, default=20)
    p.add_argument("--mut-rate", type=float, default=0.05)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--particles", type=int, default=6)
    p.add_argument("--ants", type=int, default=4)
    p.add_argument("--edges", default=DEFAULT_EDGES)
    p.add_argument("--iterations", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the engine rule trace to a file")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        return args.func(args, out, err)
    except BoundaryViolation as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BOUNDARY
    except (TmError, MpcpError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
