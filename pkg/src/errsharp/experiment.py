"""Experiment driver plus the random-machine and reference-mutation helpers.

One experiment runs one (system, reference, algorithm, oracle) combination
over a list of seeds, each with its own teacher, and aggregates the symbol
counts.
"""
from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .automata import (
    AutomatonError,
    Dfa,
    ErrorAlias,
    MealyMachine,
    classify_reference,
    is_e_persistent,
    minimize_dfa,
    minimize_mealy,
)
from .learners import (
    BUDGET,
    CORRECT,
    INCORRECT,
    VIOLATION,
    LearnerConfig,
    RunReport,
    run_learner,
)
from .obstree import ConfigurationError
from .serialization import load_automaton
from .teacher import Exact, ExactOnL, MoE, RandomWp, Teacher
from .testing import ErrOnly, MoeParams, RwpmParams, Sound

ORACLES = ("exact", "exact-on-l", "rwpm", "moe")
DEFAULT_BUDGET = 10**6


class GenerationError(RuntimeError):
    """No machine or mutation satisfying the constraints was found within the retry limit."""


# ---------------------------------------------------------------------------
# random machines


def generate_random_machine(n_states: int, n_inputs: int, e_fraction: float, seed: int,
                            n_outputs: int = 2, max_tries: int = 500) -> MealyMachine:
    """A complete, reachable, minimal, e-persistent machine with one error sink "err".

    ``n_states`` counts the sink when ``e_fraction > 0``. Roughly
    ``e_fraction`` of the non-sink transitions are routed to the sink with
    output "err"; the rest carry outputs o0, o1, ... A spanning tree of
    non-error transitions keeps every state reachable.
    """
    if n_states < 1 or n_inputs < 1 or n_outputs < 1:
        raise ValueError("need at least one state, input and output")
    if not 0.0 <= e_fraction < 1.0:
        raise ValueError("e_fraction must lie in [0, 1)")
    with_sink = e_fraction > 0
    if with_sink and n_states < 2:
        raise ValueError("an error sink needs n_states >= 2")
    rng = np.random.default_rng(seed)
    inputs = tuple(f"i{k}" for k in range(n_inputs))
    outputs = tuple(f"o{k}" for k in range(n_outputs))
    live = n_states - 1 if with_sink else n_states
    sink = live
    slots = [(s, i) for s in range(live) for i in inputs]
    if live - 1 > len(slots) - (1 if with_sink else 0):
        raise ValueError("too few transitions to reach every state")
    for _ in range(max_tries):
        trans = {}
        for s in range(1, live):
            parents = [p for p in range(s) if any((p, i) not in trans for i in inputs)]
            p = parents[int(rng.integers(len(parents)))]
            free = [i for i in inputs if (p, i) not in trans]
            i = free[int(rng.integers(len(free)))]
            trans[(p, i)] = (s, outputs[int(rng.integers(n_outputs))])
        free = [key for key in slots if key not in trans]
        if with_sink:
            # a state with only error transitions would be equivalent to the sink,
            # so every state keeps at least one non-error transition
            reserved = set()
            for s in range(live):
                own = [key for key in free if key[0] == s]
                if len(own) == n_inputs:
                    reserved.add(own[int(rng.integers(len(own)))])
            candidates = [key for key in free if key not in reserved]
            n_err = min(len(candidates), max(1, round(e_fraction * len(slots))))
            if n_err == 0:
                raise GenerationError("no transition can be routed to the error sink")
            for k in rng.choice(len(candidates), size=n_err, replace=False):
                trans[candidates[int(k)]] = (sink, "err")
            for i in inputs:
                trans[(sink, i)] = (sink, "err")
        for key in slots:
            if key not in trans:
                trans[key] = (int(rng.integers(live)), outputs[int(rng.integers(n_outputs))])
        names = tuple(f"s{k}" for k in range(live)) + (("sink",) if with_sink else ())
        m = MealyMachine(names, 0, inputs, trans)
        if len(minimize_mealy(m)) == n_states:
            return m
    raise GenerationError(f"no minimal machine with {n_states} states after {max_tries} tries")


# ---------------------------------------------------------------------------
# reference mutation


BREAK_SOUNDNESS = "break_soundness"
BREAK_COMPLETENESS = "break_completeness"


def mutate_reference(l: Dfa, kind: str, sul: MealyMachine, e: ErrorAlias, seed: int,
                     n_redirects: int = 1, max_tries: int = 200) -> Dfa:
    """Redirect transitions of a sound and complete reference to break one property.

    ``break_completeness`` sends a transition that leaves the language to an
    accepting state, so the reference accepts a word the system answers with
    an error. ``break_soundness`` sends a transition between accepting states
    to the rejecting sink, so the reference rejects a word the system answers
    without error. The minimal state count is kept, which keeps every original
    state reachable.
    """
    if kind not in (BREAK_SOUNDNESS, BREAK_COMPLETENESS):
        raise ValueError(f"unknown mutation kind {kind!r}")
    verdict = classify_reference(l, sul, e)
    if not (verdict.sound and verdict.complete):
        raise ConfigurationError("mutation needs a reference that is sound and complete for the system")
    base = minimize_dfa(l)
    acc = sorted(base.accepting)
    rejecting = sorted(set(range(len(base.states))) - base.accepting)
    if kind == BREAK_COMPLETENESS:
        candidates = [(s, i) for s in acc for i in base.inputs if base.transitions[(s, i)] in rejecting]
        targets = acc
    else:
        candidates = [(s, i) for s in acc for i in base.inputs if base.transitions[(s, i)] in base.accepting]
        targets = rejecting
    if not candidates or not targets or len(candidates) < n_redirects:
        raise GenerationError(f"reference has no transitions suitable for {kind}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        picks = rng.choice(len(candidates), size=n_redirects, replace=False)
        trans = dict(base.transitions)
        for k in picks:
            trans[candidates[int(k)]] = targets[int(rng.integers(len(targets)))]
        mutant = Dfa(base.states, base.initial, base.accepting, base.inputs, trans)
        if len(minimize_dfa(mutant)) != len(base) or not mutant.is_e_persistent():
            continue
        verdict = classify_reference(mutant, sul, e)
        if kind == BREAK_COMPLETENESS and not verdict.complete:
            return mutant
        if kind == BREAK_SOUNDNESS and not verdict.sound:
            return mutant
    raise GenerationError(f"no {kind} mutation found after {max_tries} tries")


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentSpec:
    sul_path: str
    algorithm: str
    reference_path: Optional[str] = None
    oracle: str = "exact"
    error_outputs: Sequence[str] = ("err",)
    error_substring: bool = False
    seeds: Sequence[int] = (0,)
    budget: Optional[int] = DEFAULT_BUDGET
    rwpm: RwpmParams = field(default_factory=RwpmParams)
    moe: MoeParams = field(default_factory=MoeParams)
    report_path: Optional[str] = None
    csv_path: Optional[str] = None
    emit_rule_trace: bool = False
    jobs: int = 1


def make_oracle(kind: str, algorithm: str, reference: Optional[Dfa], e: ErrorAlias,
                rwpm: RwpmParams = RwpmParams(), moe: MoeParams = MoeParams()):
    """The equivalence oracle matching an algorithm's error knowledge.

    The baseline tests untruncated words, error-aware learners truncate after
    the first hypothesis error, and reference-based learners also use the
    sound truncation.
    """
    if kind not in ORACLES:
        raise ConfigurationError(f"unknown oracle {kind!r}; choose from {', '.join(ORACLES)}")
    uses_reference = algorithm in ("LsharpES", "LsharpESC")
    if kind == "exact":
        return Exact()
    if kind == "exact-on-l":
        if reference is None:
            raise ConfigurationError("exact-on-l needs a reference")
        return ExactOnL(minimize_dfa(reference))
    if algorithm == "Lsharp":
        return RandomWp(rwpm, None)
    if kind == "rwpm":
        filt = Sound(minimize_dfa(reference), e) if uses_reference else ErrOnly(e)
        return RandomWp(rwpm, filt)
    return MoE(rwpm, MoeParams(moe.gamma, moe.activation_threshold, dict(moe.confidences)),
               minimize_dfa(reference) if uses_reference else None)


def error_alias_for(sul: MealyMachine, outputs: Sequence[str], substring: bool) -> ErrorAlias:
    if substring:
        return ErrorAlias.from_substrings(outputs, sul.outputs)
    return ErrorAlias(outputs)


def _run_one(sul: MealyMachine, reference: Optional[Dfa], spec: ExperimentSpec, seed: int) -> RunReport:
    e = error_alias_for(sul, spec.error_outputs, spec.error_substring)
    rwpm = RwpmParams(spec.rwpm.expected_middle_length, spec.rwpm.min_middle_steps, spec.rwpm.max_tests, seed)
    oracle = make_oracle(spec.oracle, spec.algorithm, reference, e, rwpm, spec.moe)
    teacher = Teacher(sul, e, budget=spec.budget, rng_seed=seed)
    config = LearnerConfig(spec.algorithm, oracle, reference, trace_rules=spec.emit_rule_trace)
    return run_learner(config, teacher)


def _run_one_packed(args):
    return _run_one(*args)


def load_inputs(spec: ExperimentSpec) -> tuple:
    sul = load_automaton(spec.sul_path, "mealy")
    reference = None
    if spec.reference_path is not None:
        reference = load_automaton(spec.reference_path, "dfa", inputs=sul.inputs)
    # validates the algorithm/reference combination early
    LearnerConfig(spec.algorithm, Exact(), reference)
    return sul, reference


def run_experiment(spec: ExperimentSpec) -> list:
    """One report per seed, in seed order. Writes JSONL/CSV reports when paths are set."""
    sul, reference = load_inputs(spec)
    check_e_persistent(sul, error_alias_for(sul, spec.error_outputs, spec.error_substring))
    jobs = [(sul, reference, spec, seed) for seed in spec.seeds]
    if spec.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            reports = list(pool.map(_run_one_packed, jobs))
    else:
        reports = [_run_one(*job) for job in jobs]
    rows = report_rows(spec, sul, reports)
    if spec.report_path:
        with open(spec.report_path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row) + "\n")
    if spec.csv_path:
        write_csv(rows, spec.csv_path)
    return reports


def aggregate(reports: Sequence[RunReport]) -> dict:
    """Median and population standard deviation of the symbol counts, plus outcome counts."""
    def stats(values):
        values = list(values)
        if not values:
            return None, None
        return statistics.median(values), statistics.pstdev(values)

    outcomes = {name: 0 for name in (CORRECT, INCORRECT, VIOLATION, BUDGET)}
    for r in reports:
        outcomes[r.outcome] += 1
    total_median, total_std = stats(r.total_symbols for r in reports)
    learn_median, _ = stats(r.learn_symbols for r in reports)
    test_median, _ = stats(r.test_symbols for r in reports)
    return {
        "aggregate": True,
        "runs": len(reports),
        "outcomes": outcomes,
        "total_symbols_median": total_median,
        "total_symbols_std": total_std,
        "learn_symbols_median": learn_median,
        "test_symbols_median": test_median,
    }


def report_rows(spec: ExperimentSpec, sul: MealyMachine, reports: Sequence[RunReport]) -> list:
    rows = []
    for seed, r in zip(spec.seeds, reports):
        row = {"seed": seed, "model": spec.sul_path, "states": len(sul), "algorithm": spec.algorithm,
               "oracle": spec.oracle}
        row.update(r.to_dict())
        rows.append(row)
    agg = aggregate(reports)
    agg.update({"model": spec.sul_path, "states": len(sul), "algorithm": spec.algorithm, "oracle": spec.oracle})
    rows.append(agg)
    return rows


CSV_COLUMNS = ("Model", "States", "Algorithm", "Seed", "Learned", "Learned States", "Learn Symbols",
               "Conformance Symbols", "Total Symbols", "Total Symbols Median", "Total Symbols Std")


def write_csv(rows: Sequence[dict], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            if row.get("aggregate"):
                writer.writerow([row["model"], row["states"], row["algorithm"], "", "", "",
                                 row["learn_symbols_median"], row["test_symbols_median"], "",
                                 row["total_symbols_median"], row["total_symbols_std"]])
            else:
                writer.writerow([row["model"], row["states"], row["algorithm"], row["seed"],
                                 row["outcome"], row["learned_states"], row["learn_symbols"],
                                 row["test_symbols"], row["total_symbols"], "", ""])


def exit_code(reports: Sequence[RunReport]) -> int:
    """0 all correct, 3 any violation, else 2 any incorrect, else 4 budget exceeded."""
    outcomes = {r.outcome for r in reports}
    if VIOLATION in outcomes:
        return 3
    if INCORRECT in outcomes:
        return 2
    if BUDGET in outcomes:
        return 4
    return 0


def check_e_persistent(sul: MealyMachine, e: ErrorAlias) -> None:
    if not is_e_persistent(sul, e):
        raise AutomatonError("system is not e-persistent for the given error outputs")
