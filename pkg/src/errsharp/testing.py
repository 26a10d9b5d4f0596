"""Error-aware conformance testing: truncation filters, the T_L suite, a
randomized Wp-method word stream and a mixture-of-experts suite selector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence, TextIO

import numpy as np

from .automata import (
    Dfa,
    ErrorAlias,
    MealyMachine,
    Word,
    covers_and_separators,
    mealy_separating_family,
    mealy_state_cover,
)


@dataclass(frozen=True)
class RwpmParams:
    expected_middle_length: int = 5
    min_middle_steps: int = 1
    max_tests: Optional[int] = 1000
    rng_seed: int = 0

    def __post_init__(self):
        if self.min_middle_steps < 1 or self.expected_middle_length < self.min_middle_steps:
            raise ValueError("need 1 <= min_middle_steps <= expected_middle_length")


@dataclass
class MoeParams:
    gamma: float = 0.2
    activation_threshold: int = 5
    confidences: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


@dataclass(frozen=True)
class ErrOnly:
    """Truncate after the hypothesis' first error output."""

    e: ErrorAlias


@dataclass(frozen=True)
class Sound:
    """Truncate where the word leaves the reference, or after the first error."""

    reference: Dfa
    e: ErrorAlias


def f_e(h: MealyMachine, sigma: Sequence[str], e: ErrorAlias) -> Word:
    """Cut ``sigma`` right after the first position where ``h`` outputs an error."""
    state = h.initial
    for k, symbol in enumerate(sigma):
        state, out = h.transitions[(state, symbol)]
        if out in e:
            return tuple(sigma[: k + 1])
    return tuple(sigma)


def _reference_prefix_length(l: Dfa, sigma: Sequence[str]) -> int:
    """Length of the longest prefix of ``sigma`` inside the (prefix-closed) language."""
    state = l.initial
    if state not in l.accepting:
        return 0
    for k, symbol in enumerate(sigma):
        state = l.transitions[(state, symbol)]
        if state not in l.accepting:
            return k
    return len(sigma)


def f_s(h: MealyMachine, l: Dfa, sigma: Sequence[str], e: ErrorAlias) -> Word:
    """Cut at the reference boundary unless the hypothesis errors no later than that."""
    cut_e = len(f_e(h, sigma, e))
    cut_l = _reference_prefix_length(l, sigma)
    return tuple(sigma[: min(cut_e, cut_l)])


def apply_filter(h: MealyMachine, sigma: Sequence[str], filt) -> Word:
    if filt is None:
        return tuple(sigma)
    if isinstance(filt, ErrOnly):
        return f_e(h, sigma, filt.e)
    if isinstance(filt, Sound):
        return f_s(h, filt.reference, sigma, filt.e)
    raise TypeError(f"unknown filter {filt!r}")


def normalize_suite(words: Iterable[Sequence[str]]) -> set:
    """Drop the empty word and every proper prefix of another word."""
    unique = {tuple(w) for w in words if len(w) > 0}
    prefixes = set()
    for w in unique:
        for k in range(1, len(w)):
            prefixes.add(w[:k])
    return unique - prefixes


def build_t_l(l: Dfa) -> set:
    """Accepting-state cover, extended by at most one input, then by the target's separators."""
    data = covers_and_separators(l, accepting_only=True)
    words = []
    for p in data.state_cover.values():
        for step in [()] + [(i,) for i in l.inputs]:
            target = l.delta(p + step)
            suffixes = data.separating_family.get(target) or frozenset([()])
            for w in suffixes:
                words.append(p + step + w)
    return normalize_suite(words)


def _suffix_table(h: MealyMachine, e: Optional[ErrorAlias]) -> dict:
    family = mealy_separating_family(h, e)
    return {s: sorted(ws, key=lambda w: (len(w), [h.inputs.index(x) for x in w])) for s, ws in family.items()}


def rwpm_stream(h: MealyMachine, params: RwpmParams, filter=None) -> Iterator[Word]:
    """Randomized Wp-method words: cover prefix, geometric random middle, state suffix.

    Words that truncate to the empty word are skipped. The stream ends after
    ``params.max_tests`` emitted words (never, if that is None).
    """
    rng = np.random.default_rng(params.rng_seed)
    e = getattr(filter, "e", None)
    cover = mealy_state_cover(h)
    states = list(cover)
    suffixes = _suffix_table(h, e)
    inputs = h.inputs
    p = 1.0 / params.expected_middle_length
    emitted = 0
    misses = 0
    while params.max_tests is None or emitted < params.max_tests:
        start = states[int(rng.integers(len(states)))]
        steps = params.min_middle_steps + int(rng.geometric(p)) - 1
        middle = tuple(inputs[int(j)] for j in rng.integers(len(inputs), size=steps))
        target = h.delta(middle, start)
        options = suffixes.get(target) or [()]
        suffix = options[int(rng.integers(len(options)))]
        word = apply_filter(h, cover[start] + middle + suffix, filter)
        if not word:
            misses += 1
            if misses > 10_000:
                return
            continue
        misses = 0
        emitted += 1
        yield word


@dataclass
class TestSuite:
    """A named word stream plus the query used to execute its words."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    words: Iterator[Word]
    execute: Callable[[Word], list]


def moe_run(teacher, h: MealyMachine, suites: Sequence[TestSuite], params: MoeParams,
            rng: Optional[np.random.Generator] = None) -> Optional[Word]:
    """Draw test words from the suites until one disagrees with ``h``.

    Returns the executed word on the first mismatch, or None once every suite
    is exhausted. The finding suite's confidence is raised by one.
    """
    if not suites:
        raise ValueError("moe_run needs at least one suite")
    rng = rng if rng is not None else np.random.default_rng(0)
    norm = teacher.error_alias.normalize
    active = list(range(len(suites)))
    while active:
        if len(active) == 1:
            k = active[0]
        elif len(h) < params.activation_threshold or rng.random() < params.gamma:
            k = active[int(rng.integers(len(active)))]
        else:
            weights = np.array([params.confidences.get(suites[j].name, 1.0) for j in active], dtype=float)
            k = active[int(rng.choice(len(active), p=weights / weights.sum()))]
        suite = suites[k]
        word = next(suite.words, None)
        if word is None:
            active.remove(k)
            continue
        answer = suite.execute(word)
        expected = h.run(word[: len(answer)])
        if any(norm(a) != norm(b) for a, b in zip(answer, expected)):
            params.confidences[suite.name] = params.confidences.get(suite.name, 1.0) + 1
            return tuple(word[: len(answer)])
    return None


def write_suite(words: Iterable[Sequence[str]], fh: TextIO) -> None:
    """One word per line, inputs separated by spaces."""
    for w in sorted(words, key=lambda w: (len(w), w)):
        fh.write(" ".join(w) + "\n")


def read_suite(fh: TextIO) -> list:
    return [tuple(line.split()) for line in fh]
