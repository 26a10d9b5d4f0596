"""Command line interface: ``errsharp <subcommand> ...`` (also ``python -m errsharp``)."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .automata import AutomatonError, classify_reference, extract_reference
from .experiment import (
    BREAK_COMPLETENESS,
    BREAK_SOUNDNESS,
    DEFAULT_BUDGET,
    ORACLES,
    ExperimentSpec,
    GenerationError,
    aggregate,
    error_alias_for,
    exit_code,
    generate_random_machine,
    mutate_reference,
    run_experiment,
)
from .learners import ALGORITHMS
from .obstree import ConfigurationError
from .serialization import automaton_to_json, dfa_to_dot, load_automaton, mealy_to_dot
from .testing import MoeParams, RwpmParams

EXIT_USAGE = 1


def _seeds(text: str) -> list:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}")
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def _add_error_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--error-output", action="append", dest="error_outputs", metavar="S",
                   help="output treated as an error; repeatable (default: err)")
    p.add_argument("--error-substring", action="store_true",
                   help="treat every output containing one of the --error-output strings as an error")


def _error_outputs(args) -> list:
    return args.error_outputs or ["err"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="errsharp", description="Error-aware active learning of Mealy machines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a system over one or more seeds and report")
    p.add_argument("--sul", required=True, help="Mealy machine (DOT or JSON)")
    p.add_argument("--reference", help="reference DFA (DOT or JSON)")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--oracle", default="exact", choices=ORACLES)
    _add_error_options(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="symbol budget per run (0 = unlimited)")
    p.add_argument("--seeds", type=_seeds, default=[0], help="comma-separated seeds (default: 0)")
    p.add_argument("--out", help="JSON lines report path (default: stdout)")
    p.add_argument("--csv", help="optional CSV table path")
    p.add_argument("--trace", action="store_true", help="include the applied rule sequence")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--expected-middle-length", type=int, default=5)
    p.add_argument("--min-middle-steps", type=int, default=1)
    p.add_argument("--max-tests", type=int, default=1000)
    p.add_argument("--gamma", type=float, default=0.2)
    p.add_argument("--activation-threshold", type=int, default=5)

    p = sub.add_parser("classify-reference", help="check a reference for soundness and completeness")
    p.add_argument("--sul", required=True)
    p.add_argument("--reference", required=True)
    _add_error_options(p)

    p = sub.add_parser("extract-reference", help="write the exact reference of a system")
    p.add_argument("--sul", required=True)
    p.add_argument("--out", required=True, help="output path (.json for JSON, otherwise DOT)")
    _add_error_options(p)

    p = sub.add_parser("mutate-reference", help="break soundness or completeness of a reference")
    p.add_argument("--sul", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--kind", required=True, choices=(BREAK_SOUNDNESS, BREAK_COMPLETENESS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--redirects", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_error_options(p)

    p = sub.add_parser("gen-random", help="generate a random e-persistent Mealy machine")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--inputs", type=int, required=True)
    p.add_argument("--error-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    return parser


def _write_automaton(a, path: str) -> None:
    if path.endswith(".json"):
        text = json.dumps(automaton_to_json(a), indent=2) + "\n"
    elif hasattr(a, "accepting"):
        text = dfa_to_dot(a)
    else:
        text = mealy_to_dot(a)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_learn(args) -> int:
    spec = ExperimentSpec(
        sul_path=args.sul,
        algorithm=args.algorithm,
        reference_path=args.reference,
        oracle=args.oracle,
        error_outputs=_error_outputs(args),
        error_substring=args.error_substring,
        seeds=args.seeds,
        budget=args.budget or None,
        rwpm=RwpmParams(args.expected_middle_length, args.min_middle_steps, args.max_tests),
        moe=MoeParams(args.gamma, args.activation_threshold),
        report_path=args.out,
        csv_path=args.csv,
        emit_rule_trace=args.trace,
        jobs=args.jobs,
    )
    reports = run_experiment(spec)
    if not args.out:
        for seed, r in zip(spec.seeds, reports):
            row = {"seed": seed, "algorithm": spec.algorithm}
            row.update(r.to_dict())
            print(json.dumps(row))
        print(json.dumps(aggregate(reports)))
    return exit_code(reports)


def _cmd_classify(args) -> int:
    sul = load_automaton(args.sul, "mealy")
    ref = load_automaton(args.reference, "dfa", inputs=sul.inputs)
    verdict = classify_reference(ref, sul, error_alias_for(sul, _error_outputs(args), args.error_substring))
    print(json.dumps({
        "sound": verdict.sound,
        "complete": verdict.complete,
        "sound_cex": list(verdict.sound_cex) if verdict.sound_cex is not None else None,
        "complete_cex": list(verdict.complete_cex) if verdict.complete_cex is not None else None,
    }))
    return 0


def _cmd_extract(args) -> int:
    sul = load_automaton(args.sul, "mealy")
    _write_automaton(extract_reference(sul, error_alias_for(sul, _error_outputs(args), args.error_substring)), args.out)
    return 0


def _cmd_mutate(args) -> int:
    sul = load_automaton(args.sul, "mealy")
    ref = load_automaton(args.reference, "dfa", inputs=sul.inputs)
    e = error_alias_for(sul, _error_outputs(args), args.error_substring)
    _write_automaton(mutate_reference(ref, args.kind, sul, e, args.seed, args.redirects), args.out)
    return 0


def _cmd_gen(args) -> int:
    _write_automaton(generate_random_machine(args.states, args.inputs, args.error_fraction, args.seed), args.out)
    return 0


COMMANDS = {
    "learn": _cmd_learn,
    "classify-reference": _cmd_classify,
    "extract-reference": _cmd_extract,
    "mutate-reference": _cmd_mutate,
    "gen-random": _cmd_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for Incorrect outcomes
        return EXIT_USAGE if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except (OSError, AutomatonError, ConfigurationError, GenerationError, ValueError) as exc:
        print(f"errsharp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
