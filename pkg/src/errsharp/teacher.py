"""Simulated teacher: cached output queries with symbol metering, a symbol
budget, and equivalence oracles (exact or conformance testing).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .automata import Dfa, ErrorAlias, MealyMachine, Word, mealy_equivalence
from .obstree import ObservationTree
from .testing import (
    ErrOnly,
    MoeParams,
    RwpmParams,
    Sound,
    TestSuite,
    moe_run,
    rwpm_stream,
)

LEARN = "learn"
TEST = "test"


class BudgetExceeded(RuntimeError):
    """The symbol budget is used up; no further queries are answered."""


@dataclass(frozen=True)
class Exact:
    """Idealized oracle: product comparison with the hidden machine, free of charge."""


@dataclass(frozen=True)
class ExactOnL:
    """Exact comparison restricted to the words of ``reference``."""

    reference: Dfa


@dataclass(frozen=True)
class RandomWp:
    """Randomized Wp-method testing with an optional truncation filter."""

    params: RwpmParams = RwpmParams()
    filter: object = None


@dataclass(frozen=True)
class MoE:
    """Mixture of experts over the error-truncated suite and, with a reference, the sound suite."""

    params: RwpmParams = RwpmParams()
    moe: MoeParams = field(default_factory=MoeParams)
    reference: Optional[Dfa] = None


class Teacher:
    def __init__(self, sul: MealyMachine, error_alias: ErrorAlias,
                 budget: Optional[int] = None, rng_seed: int = 0):
        self._sul = sul
        self.error_alias = error_alias
        self.inputs = tuple(sul.inputs)
        self.tree = ObservationTree(sul.inputs, error_alias)
        self.learn_symbols = 0
        self.test_symbols = 0
        self.budget = budget
        self.rng_seed = rng_seed
        self.executed_queries = 0
        self.eq_calls = 0
        self._reset_seen = False
        self._rng = np.random.default_rng(rng_seed)
        self._moe_state: dict = {}

    @property
    def total_symbols(self) -> int:
        return self.learn_symbols + self.test_symbols

    # -- output queries ----------------------------------------------------

    def _execute(self, word: Sequence[str], phase: str, stop_on_error: bool,
                 reference: Optional[Dfa] = None) -> list:
        if self.budget is not None and self.total_symbols >= self.budget:
            raise BudgetExceeded(f"symbol budget {self.budget} used up")
        sul = self._sul
        e = self.error_alias
        state = sul.initial
        r = reference.initial if reference is not None else None
        outs = []
        for symbol in word:
            if reference is not None:
                r = reference.transitions[(r, symbol)]
                if r not in reference.accepting:
                    break
            state, out = sul.transitions[(state, symbol)]
            outs.append(out)
            if stop_on_error and out in e:
                break
        cost = len(outs) + 1
        if phase == LEARN:
            self.learn_symbols += cost
        else:
            self.test_symbols += cost
        self.executed_queries += 1
        self._reset_seen = True
        self.tree.add_observation(word, outs)
        return outs

    def _cached(self, word: Sequence[str], stop_on_error: bool,
                reference: Optional[Dfa] = None) -> Optional[list]:
        t = self.tree
        e = self.error_alias
        node = 0
        r = reference.initial if reference is not None else None
        outs = []
        for symbol in word:
            if reference is not None:
                r = reference.transitions[(r, symbol)]
                if r not in reference.accepting:
                    break
            node = t.children[node].get(symbol)
            if node is None:
                return None
            out = t.in_output[node]
            outs.append(out)
            if stop_on_error and out in e:
                break
        if not outs and not self._reset_seen:
            return None
        return outs

    def oq_e(self, word: Sequence[str], phase: str = LEARN) -> list:
        """Run ``word`` from reset, stopping after the first error output."""
        word = tuple(word)
        hit = self._cached(word, True)
        return hit if hit is not None else self._execute(word, phase, True)

    def oq_s(self, word: Sequence[str], reference: Dfa, phase: str = LEARN) -> list:
        """As :meth:`oq_e`, but never execute an input that would leave ``reference``."""
        word = tuple(word)
        hit = self._cached(word, True, reference)
        return hit if hit is not None else self._execute(word, phase, True, reference)

    def oq(self, word: Sequence[str], phase: str = LEARN) -> list:
        """Untruncated output query (baseline learner)."""
        word = tuple(word)
        hit = self._cached(word, False)
        return hit if hit is not None else self._execute(word, phase, False)

    # -- equivalence -------------------------------------------------------

    def is_equivalent(self, h: MealyMachine, restrict: Optional[Dfa] = None) -> bool:
        """Driver-side check used to skip the final, confirming equivalence query."""
        return mealy_equivalence(h, self._sul, restrict, self.error_alias) is None

    def eq(self, h: MealyMachine, oracle) -> Optional[Word]:
        """None if the oracle accepts ``h``, else a counterexample word."""
        self.eq_calls += 1
        if isinstance(oracle, Exact):
            return mealy_equivalence(h, self._sul, None, self.error_alias)
        if isinstance(oracle, ExactOnL):
            return mealy_equivalence(h, self._sul, oracle.reference, self.error_alias)
        if isinstance(oracle, RandomWp):
            suite = self._suite("wp", 0, h, oracle.params, oracle.filter)
            return moe_run(self, h, [suite], MoeParams(), self._rng)
        if isinstance(oracle, MoE):
            suites = [self._suite("T_e", 0, h, oracle.params, ErrOnly(self.error_alias))]
            if oracle.reference is not None:
                suites.append(self._suite("T_S", 1, h, oracle.params, Sound(oracle.reference, self.error_alias)))
            # confidences live as long as this teacher, i.e. one learning run
            state = self._moe_state.get(id(oracle))
            if state is None:
                state = MoeParams(oracle.moe.gamma, oracle.moe.activation_threshold, dict(oracle.moe.confidences))
                self._moe_state[id(oracle)] = state
            return moe_run(self, h, suites, state, self._rng)
        raise TypeError(f"unknown oracle {oracle!r}")

    def _suite(self, name: str, index: int, h: MealyMachine, params: RwpmParams, filt) -> TestSuite:
        seed = int(np.random.SeedSequence([params.rng_seed, self.rng_seed, self.eq_calls, index]).generate_state(1)[0])
        stream_params = RwpmParams(params.expected_middle_length, params.min_middle_steps, params.max_tests, seed)
        words = rwpm_stream(h, stream_params, filt)
        if filt is None:
            run = lambda w: self.oq(w, TEST)  # noqa: E731
        elif isinstance(filt, ErrOnly):
            run = lambda w: self.oq_e(w, TEST)  # noqa: E731
        else:
            ref = filt.reference
            run = lambda w: self.oq_s(w, ref, TEST)  # noqa: E731
        return TestSuite(name, words, run)


def oq_e(teacher: Teacher, sigma: Sequence[str], phase: str = LEARN) -> list:
    return teacher.oq_e(sigma, phase)


def oq_s(teacher: Teacher, sigma: Sequence[str], l: Dfa, phase: str = LEARN) -> list:
    return teacher.oq_s(sigma, l, phase)


def eq(teacher: Teacher, h: MealyMachine, oracle) -> Optional[Word]:
    return teacher.eq(h, oracle)
