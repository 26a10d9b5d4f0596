"""Acceptance criteria 1-7. Each test prints one PASS/FAIL line with its timing.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
under output capture) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import math
import statistics
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from errsharp.automata import Dfa, MealyMachine, dfa_product, extract_reference, mealy_equivalence
from errsharp.experiment import (
    BREAK_COMPLETENESS,
    BREAK_SOUNDNESS,
    generate_random_machine,
    make_oracle,
    mutate_reference,
)
from errsharp.learners import ALGORITHMS, CORRECT, INCORRECT, NEEDS_REFERENCE, VIOLATION, learn, mdeg
from errsharp.obstree import ApartnessMode, apart
from errsharp.teacher import Teacher
from errsharp.testing import RwpmParams, f_e, f_s, normalize_suite
from errsharp.toy import ERROR, small_tree, toy_hypothesis, toy_reference, toy_tls

from conftest import simulate, words_up_to


@contextmanager
def criterion(number: int, title: str, limit_s: float, request):
    """Time the block and print one PASS/FAIL line, whatever happens inside."""
    notes: list = []
    start = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if elapsed > limit_s:
            notes.append(f"over time limit {limit_s:g}s")
            ok = False
        verdict = "PASS" if ok else "FAIL"
        line = f"{verdict} criterion {number}: {title} ({elapsed:.2f}s)"
        if notes:
            line += " | " + "; ".join(notes)
        capman = request.config.pluginmanager.getplugin("capturemanager")
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + line)
        else:
            print(line)
    if elapsed > limit_s:
        pytest.fail(f"criterion {number} took {elapsed:.1f}s (limit {limit_s:g}s)")


# -- 1 ---------------------------------------------------------------------

def test_criterion_1_worked_examples(request):
    with criterion(1, "worked-example fidelity", 1.0, request) as notes:
        h, l1 = toy_hypothesis(), toy_reference("L1")
        suite = [tuple(w) for w in ("kh", "dh", "ch", "hhh", "hkh", "hdh", "hch")]
        failures = []

        got_e = {f_e(h, w, ERROR) for w in suite}
        if got_e != {tuple(w) for w in ("k", "d", "c", "hh", "hk", "hd", "hc")}:
            failures.append(f"f_e suite {sorted(got_e)}")

        got_s = normalize_suite(f_s(h, l1, w, ERROR) for w in suite)
        if got_s != {("h", "k")}:
            failures.append(f"f_s suite {sorted(got_s)}")

        t = small_tree()
        degrees = tuple(mdeg(t, 1, l1, l1.states.index(p)) for p in ("p1", "p0", "p2"))
        expected = (Fraction(1), Fraction(1, 2), Fraction(0))
        if degrees != expected:
            failures.append("mdeg(q1; p1,p0,p2) = (" + ", ".join(str(d) for d in degrees)
                            + ") expected (1, 1/2, 0)")

        witness = apart(t, 0, 4, ApartnessMode.sound(l1))
        if witness != ("h",):
            failures.append(f"S-apartness witness {witness}")

        notes.extend(failures)
        assert not failures, failures


# -- 2 ---------------------------------------------------------------------

def test_criterion_2_end_to_end_toy(request):
    with criterion(2, "all five algorithms learn the toy system", 1.0, request) as notes:
        m = toy_tls()
        exact_ref = extract_reference(m, ERROR)
        refs = {"ALsharpE": exact_ref, "LsharpES": toy_reference("L0"), "LsharpESC": exact_ref}
        for alg in ALGORITHMS:
            r = learn(m, ERROR, alg, refs.get(alg))
            notes.append(f"{alg}: {r.outcome}, {r.learned_states} states, {r.eq_count} EQ")
            assert r.outcome == CORRECT
            assert mealy_equivalence(r.learned, m, None, ERROR) is None
            assert r.eq_count <= 4
            if alg == "LsharpESC":
                assert r.eq_count <= 1


# -- 3 ---------------------------------------------------------------------

def random_pair(rng):
    """An e-persistent (H, M) pair: M is an equivalent copy of H, a small mutation of H, or unrelated."""
    n_inputs = int(rng.integers(1, 4))
    n_h = int(rng.integers(2, 7)) if n_inputs > 1 else int(rng.integers(1, 7))
    e_fraction = 0.4 if n_inputs > 1 and n_h > 1 else 0.0
    h = generate_random_machine(n_h, n_inputs, e_fraction, int(rng.integers(1 << 30)))
    roll = rng.random()
    if roll < 0.3:
        # equivalent but structurally different: clone a state and send some edges to the clone
        trans = dict(h.transitions)
        src = int(rng.integers(len(h)))
        clone = len(h)
        for i in h.inputs:
            trans[(clone, i)] = trans[(src, i)]
        for key, (tgt, out) in list(trans.items()):
            if tgt == src and rng.random() < 0.5:
                trans[key] = (clone, out)
        m = MealyMachine(h.states + ("clone",), h.initial, h.inputs, trans)
    elif roll < 0.65:
        trans = dict(h.transitions)
        sink = len(h) - 1 if e_fraction > 0 else None
        # let M answer normally where H errors: only visible at the truncation point
        revived = [k for k, (_, o) in trans.items() if o == "err" and k[0] != sink]
        if revived and rng.random() < 0.5:
            key = revived[int(rng.integers(len(revived)))]
            trans[key] = (int(rng.integers(len(h) - 1)), "o0")
            return h, MealyMachine(h.states, h.initial, h.inputs, trans)
        live = [k for k, (_, o) in trans.items() if o != "err"]
        for key in rng.choice(len(live), size=min(len(live), 1 + int(rng.integers(2))), replace=False):
            s, i = live[int(key)]
            # stay e-persistent: only rewrite transitions that start in a live state
            if rng.random() < 0.5 and e_fraction > 0:
                trans[(s, i)] = (len(h) - 1, "err")
            else:
                tgt = int(rng.integers(len(h) - (1 if e_fraction > 0 else 0)))
                trans[(s, i)] = (tgt, "o1" if trans[(s, i)][1] == "o0" else "o0")
        m = MealyMachine(h.states, h.initial, h.inputs, trans)
    else:
        n_m = min(6, max(1, n_h + int(rng.integers(-1, 2))))
        em = e_fraction if n_m > 1 else 0.0
        m = generate_random_machine(n_m, n_inputs, em, int(rng.integers(1 << 30)))
    return h, m


def agree_on(h, m, words) -> bool:
    norm = ERROR.normalize
    return all([norm(o) for o in simulate(h, w)] == [norm(o) for o in simulate(m, w)] for w in words)


def test_criterion_3_truncation_completeness(request):
    with criterion(3, "truncated suites are as strong as the full suite", 60.0, request) as notes:
        rng = np.random.default_rng(2024)
        violations = {"f_e": 0, "f_s": 0}
        verdicts = {True: 0, False: 0}
        for _ in range(200):
            h, m = random_pair(rng)
            full = list(words_up_to(h.inputs, len(h) + 2))
            full_verdict = agree_on(h, m, full)
            verdicts[full_verdict] += 1
            truncated = normalize_suite(f_e(h, w, ERROR) for w in full)
            if agree_on(h, m, truncated) != full_verdict:
                violations["f_e"] += 1
            # the union of both error-free languages is sound for H and for M
            sound = dfa_product(extract_reference(h, ERROR), extract_reference(m, ERROR), lambda a, b: a or b)
            truncated_s = normalize_suite(f_s(h, sound, w, ERROR) for w in full)
            if agree_on(h, m, truncated_s) != full_verdict:
                violations["f_s"] += 1
        notes.append(f"violations {violations}; pairs equivalent on T: {verdicts[True]}, distinguished: {verdicts[False]}")
        assert violations == {"f_e": 0, "f_s": 0}
        assert verdicts[True] > 0 and verdicts[False] > 0


# -- 4 ---------------------------------------------------------------------

def test_criterion_4_learner_properties(request):
    with criterion(4, "learner property suite on 100 random systems", 120.0, request) as notes:
        rng = np.random.default_rng(1)
        problems = []
        runs = 0
        for k in range(100):
            n = int(rng.integers(2, 11))
            n_inputs = int(rng.integers(1, 5))
            e_fraction = float(rng.choice([0.3, 0.5, 0.7])) if n_inputs > 1 else 0.0
            sul = generate_random_machine(n, n_inputs, e_fraction, k)
            ref = extract_reference(sul, ERROR)
            o = len(ref.accepting)
            for alg in ALGORITHMS:
                r = learn(sul, ERROR, alg, ref if alg in NEEDS_REFERENCE else None, record_norm=True)
                runs += 1
                norms = [v for _, v in r.norm_trace]
                increasing = all(b > a for a, b in zip(norms, norms[1:]))
                bound = n - o if alg == "LsharpESC" else n - 1
                if r.outcome != CORRECT or r.stalled or not increasing or r.eq_count > bound:
                    problems.append((k, alg, r.outcome, increasing, r.eq_count, bound))
        notes.append(f"{runs} runs, {len(problems)} problems")
        assert not problems, problems[:5]


# -- 5 ---------------------------------------------------------------------

def test_criterion_5_broken_references(request):
    with criterion(5, "outcomes with broken references on the toy system", 60.0, request) as notes:
        m = toy_tls()
        exact_ref = extract_reference(m, ERROR)
        esc, es, al = [], [], []
        for seed in range(30):
            incomplete = mutate_reference(exact_ref, BREAK_COMPLETENESS, m, ERROR, seed)
            unsound = mutate_reference(exact_ref, BREAK_SOUNDNESS, m, ERROR, seed)
            esc.append(learn(m, ERROR, "LsharpESC", incomplete).outcome)
            es.append(learn(m, ERROR, "LsharpES", unsound).outcome)
            al.append(learn(m, ERROR, "ALsharpE", incomplete).outcome)
            al.append(learn(m, ERROR, "ALsharpE", unsound).outcome)
        notes.append(f"LsharpESC violations {esc.count(VIOLATION)}/30")
        notes.append(f"LsharpES incorrect {es.count(INCORRECT)}/30, violations {es.count(VIOLATION)}")
        notes.append(f"ALsharpE correct {al.count(CORRECT)}/60")
        assert esc.count(VIOLATION) == 30
        assert es.count(INCORRECT) >= 1 and es.count(VIOLATION) == 0
        assert al.count(CORRECT) == 60


# -- 6 ---------------------------------------------------------------------

def test_criterion_6_symbol_direction(request):
    with criterion(6, "error-aware learners use fewer symbols", 600.0, request) as notes:
        rng = np.random.default_rng(6)
        totals = {"Lsharp": [], "LsharpE": [], "LsharpESC": []}
        outcomes = {a: {} for a in totals}
        for k in range(20):
            n = int(rng.integers(15, 26))
            sul = generate_random_machine(n, 5, 0.6, 1000 + k)
            ref = extract_reference(sul, ERROR)
            for alg in totals:
                oracle = make_oracle("moe", alg, ref, ERROR, RwpmParams(rng_seed=k))
                r = learn(sul, ERROR, alg, ref if alg == "LsharpESC" else None, oracle=oracle,
                          budget=10**6, rng_seed=k)
                totals[alg].append(r.total_symbols)
                outcomes[alg][r.outcome] = outcomes[alg].get(r.outcome, 0) + 1
        med = {a: statistics.median(v) for a, v in totals.items()}
        ratio_e = med["Lsharp"] / med["LsharpE"]
        ratio_sc = med["LsharpE"] / med["LsharpESC"]
        notes.append("medians " + ", ".join(f"{a}={v:g}" for a, v in med.items()))
        notes.append(f"ratios {ratio_e:.2f} and {ratio_sc:.2f}")
        notes.append(f"outcomes {outcomes}")
        assert ratio_e >= 1.5 and ratio_sc >= 1.5


# -- 7 ---------------------------------------------------------------------

SCRIPT = ["hkdd", "hkdd", "hh", "hhkd", "", "k", "kk", "hkc", "hk", "hkddd", "d", "hkdd", "hkdc", ""]


def metered_total(script):
    """Independent replay: a query costs len+1 unless an earlier answer covers it."""
    m = toy_tls()
    answered = []
    total = 0
    for word in script:
        outs = []
        for k in range(len(word)):
            outs.append(simulate(m, word[: k + 1])[-1])
            if outs[-1] in ERROR:
                break
        executed = word[: len(outs)]
        covered = any(prev.startswith(executed) for prev in answered)
        if not covered:
            total += len(executed) + 1
        answered.append(executed)
    return total


def run_script(script):
    t = Teacher(toy_tls(), ERROR)
    for word in script:
        t.oq_e(tuple(word))
    return t.total_symbols, t.learn_symbols, t.test_symbols


def test_criterion_7_teacher_metering(request):
    with criterion(7, "teacher metering", 1.0, request) as notes:
        expected = metered_total(SCRIPT)
        first = run_script(SCRIPT)
        second = run_script(SCRIPT)
        notes.append(f"total {first[0]} symbols, expected {expected}")
        assert first[0] == expected
        assert first == second


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
