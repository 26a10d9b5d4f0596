"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the package's own product constructions:
they enumerate words and simulate machines symbol by symbol.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Optional

import pytest

from errsharp.automata import Dfa, ErrorAlias, MealyMachine
from errsharp.toy import ERROR, INPUTS, small_tree, toy_hypothesis, toy_reference, toy_tls


def words_up_to(inputs, max_len: int) -> Iterator[tuple]:
    """All words over ``inputs`` of length 0..max_len, shortest first."""
    for n in range(max_len + 1):
        yield from itertools.product(inputs, repeat=n)


def simulate(m: MealyMachine, word) -> list:
    state, outs = m.initial, []
    for symbol in word:
        state, out = m.transitions[(state, symbol)]
        outs.append(out)
    return outs


def accepts(l: Dfa, word) -> bool:
    state = l.initial
    for symbol in word:
        state = l.transitions[(state, symbol)]
    return state in l.accepting


def brute_force_difference(m: MealyMachine, n: MealyMachine, max_len: int,
                           e: Optional[ErrorAlias] = None, restrict: Optional[Dfa] = None) -> Optional[tuple]:
    """Shortest word (up to ``max_len``) on which the two machines answer differently."""
    norm = (lambda o: e.normalize(o)) if e is not None else (lambda o: o)
    for w in words_up_to(m.inputs, max_len):
        if restrict is not None and not accepts(restrict, w):
            continue
        if [norm(o) for o in simulate(m, w)] != [norm(o) for o in simulate(n, w)]:
            return w
    return None


def brute_force_e_persistent(m: MealyMachine, e: ErrorAlias, max_len: int) -> bool:
    for w in words_up_to(m.inputs, max_len):
        outs = simulate(m, w)
        seen_error = False
        for o in outs:
            if seen_error and o not in e:
                return False
            seen_error = seen_error or o in e
    return True


@pytest.fixture
def tls():
    return toy_tls()


@pytest.fixture
def hyp():
    return toy_hypothesis()


@pytest.fixture
def refs():
    return {name: toy_reference(name) for name in ("L0", "L1", "L2")}


@pytest.fixture
def tree():
    return small_tree()


@pytest.fixture
def err():
    return ERROR


@pytest.fixture
def inputs():
    return INPUTS


def random_e_persistent(rng, n_states: int, n_inputs: int, error_prob: float = 0.4,
                        outputs=("a", "b")) -> MealyMachine:
    """Arbitrary (possibly non-minimal, possibly partly unreachable) e-persistent machine.

    State ``n_states - 1`` is an error sink; every error transition leads there.
    Independent of the package's own generator on purpose.
    """
    inputs = tuple(f"i{k}" for k in range(n_inputs))
    sink = n_states - 1
    trans = {}
    for s in range(n_states):
        for i in inputs:
            if s == sink or rng.random() < error_prob:
                trans[(s, i)] = (sink, "err")
            else:
                trans[(s, i)] = (int(rng.integers(max(1, n_states - 1))), outputs[int(rng.integers(len(outputs)))])
    names = tuple(f"s{k}" for k in range(n_states))
    return MealyMachine(names, 0, inputs, trans)


def random_dfa(rng, n_states: int, inputs, p_accept: float = 0.5) -> Dfa:
    trans = {(s, i): int(rng.integers(n_states)) for s in range(n_states) for i in inputs}
    acc = frozenset(s for s in range(n_states) if rng.random() < p_accept)
    return Dfa(tuple(f"r{k}" for k in range(n_states)), 0, acc, tuple(inputs), trans)
