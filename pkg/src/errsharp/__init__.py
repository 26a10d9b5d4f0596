"""errsharp: error-aware active automata learning and conformance testing.

The hidden system is an e-persistent Mealy machine: once it outputs an
error, it outputs only errors. The learners exploit that, optionally with a
reference DFA of the words believed to be error-free.
"""
from .automata import (
    Dfa,
    ErrorAlias,
    MealyMachine,
    classify_reference,
    extract_reference,
    is_e_persistent,
    mealy_equivalence,
    minimize_dfa,
    minimize_mealy,
)
from .experiment import ExperimentSpec, generate_random_machine, mutate_reference, run_experiment
from .learners import ALGORITHMS, LearnerConfig, RunReport, learn, run_learner
from .obstree import ApartnessMode, ObservationTree
from .serialization import load_automaton, parse_automaton_dot
from .teacher import Exact, ExactOnL, MoE, RandomWp, Teacher

__all__ = [
    "ALGORITHMS", "ApartnessMode", "Dfa", "ErrorAlias", "Exact", "ExactOnL", "ExperimentSpec",
    "LearnerConfig", "MealyMachine", "MoE", "ObservationTree", "RandomWp", "RunReport", "Teacher",
    "classify_reference", "extract_reference", "generate_random_machine", "is_e_persistent", "learn",
    "load_automaton", "mealy_equivalence", "minimize_dfa", "minimize_mealy", "mutate_reference",
    "parse_automaton_dot", "run_experiment", "run_learner",
]
