"""Observation tree storage, frontier and the apartness relations."""
import itertools

import numpy as np
import pytest

from errsharp.automata import extract_reference
from errsharp.experiment import generate_random_machine
from errsharp.obstree import (
    ApartnessChecker,
    ApartnessMode,
    ConfigurationError,
    FrontierClass,
    ObservationConflict,
    ObservationTree,
    apart,
    classify_frontier,
    frontier,
    is_adequate,
)
from errsharp.teacher import Teacher
from errsharp.toy import ERROR, INPUTS

from conftest import accepts, words_up_to

Q0, Q1, Q2, Q3, Q4, Q5 = range(6)


# -- storage ---------------------------------------------------------------

def test_add_observation_chain_and_reuse():
    t = ObservationTree(INPUTS, ERROR)
    t.add_observation("hk", ["ok", "ok"])
    assert len(t) == 3
    t.add_observation("hkd", ["ok", "ok", "ok"])
    assert len(t) == 4
    with pytest.raises(ObservationConflict):
        t.add_observation("h", ["err"])


def test_partial_observation_stops_at_outputs():
    t = ObservationTree(INPUTS, ERROR)
    node = t.add_observation("hhk", ["ok", "err"])
    assert t.access(node) == ("h", "h")
    assert t.get("hhk") is None


# -- frontier --------------------------------------------------------------

def test_frontier_of_small_tree(tree):
    assert frontier(tree) == [Q3]
    assert Q2 not in frontier(tree)  # reached through an error output


def test_frontier_of_root_only():
    assert frontier(ObservationTree(INPUTS, ERROR)) == []


def test_baseline_frontier_keeps_error_children(tree):
    assert set(frontier(tree, error_aware=False)) == {Q2, Q3, Q5}


# -- apartness -------------------------------------------------------------

def test_plain_apartness_of_root_and_q1(tree):
    assert apart(tree, Q0, Q1) == ("h",)


def test_sound_apartness_of_root_and_q4(tree, refs):
    assert apart(tree, Q0, Q4, ApartnessMode.sound(refs["L1"])) == ("h",)
    # plain apartness has nothing to compare: q4 is a leaf
    assert apart(tree, Q0, Q4) is None


def test_apartness_is_irreflexive(tree, refs):
    for mode in (ApartnessMode.plain(), ApartnessMode.sound(refs["L1"]), ApartnessMode.sound_complete(refs["L1"])):
        for p in range(len(tree)):
            assert apart(tree, p, p, mode) is None


def test_reference_modes_need_a_reference():
    with pytest.raises(ConfigurationError):
        ApartnessMode("sound", None)


def test_reference_alphabet_must_match(tree):
    from errsharp.automata import make_dfa
    with pytest.raises(ConfigurationError):
        ApartnessChecker(tree, ApartnessMode.sound(make_dfa([], "a", ["a"], ["z"])))


# -- frontier classification and adequacy -----------------------------------

def test_q3_identified_with_q1(tree):
    classes = classify_frontier(tree)
    assert classes[Q3].identified == Q1
    assert apart(tree, Q3, Q0) == ("d",)


def test_frontier_class_kinds():
    assert FrontierClass(()).kind == "isolated"
    assert FrontierClass((0,)).identified == 0
    assert FrontierClass((0, 1)).kind == "undecided"


def test_root_only_is_not_adequate():
    t = ObservationTree(("a",), ERROR)
    assert not is_adequate(t)


def test_all_error_root_is_adequate():
    t = ObservationTree(INPUTS, ERROR)
    for i in INPUTS:
        t.add_observation((i,), ["err"])
    assert is_adequate(t)


def test_small_tree_missing_extensions(tree):
    checker = ApartnessChecker(tree, ApartnessMode.plain())
    assert not checker.is_adequate()
    assert set(checker.missing_extensions()) == {(Q0, "k"), (Q0, "c"), (Q1, "d"), (Q1, "c")}


def test_sound_adequacy_only_asks_for_reference_words(tree, refs):
    checker = ApartnessChecker(tree, ApartnessMode.sound(refs["L1"]))
    # h from q0 and k from q1 stay inside L1; everything else is outside
    assert set(checker.missing_extensions()) == set()


# -- brute-force apartness on trees grown from random systems --------------

def stored_words(t, node):
    """All words stored below ``node`` with their outputs, shortest first."""
    out = {}
    for w, c in t.subtree_edges(node):
        out[w] = t.in_output[c]
    return out


def brute_force_witness_length(t, p, q, mode):
    e = t.error_alias
    below_p, below_q = stored_words(t, p), stored_words(t, q)
    ref = mode.reference
    candidates = []
    for w in set(below_p) | set(below_q):
        op, oq = below_p.get(w), below_q.get(w)
        if op is not None and oq is not None and e.normalize(op) != e.normalize(oq):
            candidates.append(w)
            continue
        if ref is None:
            continue
        for out, other in ((op, q), (oq, p)):
            if out is None:
                continue
            inside = accepts(ref, t.access(other) + w)
            if out not in e and not inside:
                candidates.append(w)
            if mode.kind == "sound_complete" and out in e and inside:
                candidates.append(w)
    return min((len(w) for w in candidates), default=None)


def grown_tree(seed):
    rng = np.random.default_rng(seed)
    m = generate_random_machine(int(rng.integers(2, 6)), 2, 0.4, seed)
    teacher = Teacher(m, ERROR)
    for _ in range(25):
        teacher.oq_e(tuple(m.inputs[int(k)] for k in rng.integers(len(m.inputs), size=int(rng.integers(1, 6)))))
    return m, teacher.tree


@pytest.mark.parametrize("seed", range(15))
def test_apartness_against_brute_force(seed):
    m, t = grown_tree(seed)
    ref = extract_reference(m, ERROR)
    for mode in (ApartnessMode.plain(), ApartnessMode.sound(ref), ApartnessMode.sound_complete(ref)):
        checker = ApartnessChecker(t, mode)
        for p, q in itertools.combinations(range(len(t)), 2):
            w = checker.witness(p, q)
            expected = brute_force_witness_length(t, p, q, mode)
            assert (w is None) == (expected is None), (p, q, mode.kind)
            if w is not None:
                assert len(w) == expected
            assert checker.is_apart(p, q) == checker.is_apart(q, p)


@pytest.mark.parametrize("seed", range(10))
def test_weak_co_transitivity(seed):
    _, t = grown_tree(seed)
    checker = ApartnessChecker(t, ApartnessMode.plain())
    n = len(t)
    for p, q in itertools.combinations(range(n), 2):
        w = checker.witness(p, q)
        if w is None:
            continue
        for r in range(n):
            if t.get(w, r) is not None:
                assert checker.is_apart(r, p) or checker.is_apart(r, q)


@pytest.mark.parametrize("seed", range(10))
def test_tree_replays_on_system(seed):
    m, t = grown_tree(seed)
    for node in range(1, len(t)):
        w = t.access(node)
        assert m.run(w)[-1] == t.in_output[node]


@pytest.mark.parametrize("seed", range(10))
def test_sound_apartness_respects_system_states(seed):
    # a sound reference never separates two nodes that reach the same system state
    m, t = grown_tree(seed)
    checker = ApartnessChecker(t, ApartnessMode.sound(extract_reference(m, ERROR)))
    for p, q in itertools.combinations(range(len(t)), 2):
        if m.delta(t.access(p)) == m.delta(t.access(q)):
            assert not checker.is_apart(p, q)


def test_frontier_structure_after_promotions():
    _, t = grown_tree(4)
    checker = ApartnessChecker(t, ApartnessMode.plain())
    for f in checker.frontier():
        if checker.classify(f).isolated:
            t.promote(f)
    for f in t.frontier():
        assert f not in t.basis
        assert t.parent[f] in t.basis
        assert not t.is_error_edge(f)


def test_tree_dot_mentions_every_edge(tree):
    text = tree.to_dot()
    assert text.count("->") == len(tree) - 1
