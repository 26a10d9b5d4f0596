"""Output queries, caching, symbol metering, budget and equivalence oracles."""
import numpy as np
import pytest

from errsharp.automata import mealy_equivalence
from errsharp.experiment import generate_random_machine
from errsharp.teacher import LEARN, TEST, BudgetExceeded, Exact, ExactOnL, MoE, RandomWp, Teacher
from errsharp.testing import ErrOnly, RwpmParams
from errsharp.toy import ERROR

from conftest import accepts, simulate


def expected_answer(m, word, e, ref=None):
    """Reference implementation of a truncated query."""
    outs = []
    for k in range(len(word)):
        if ref is not None and not accepts(ref, word[: k + 1]):
            break
        outs.append(simulate(m, word[: k + 1])[-1])
        if outs[-1] in e:
            break
    return outs


def test_oq_e_stops_after_error(tls):
    t = Teacher(tls, ERROR)
    assert t.oq_e("hhkd") == ["ok", "err"]
    assert t.learn_symbols == 3


def test_empty_query_costs_one_symbol_once(tls):
    t = Teacher(tls, ERROR)
    assert t.oq_e("") == []
    assert t.total_symbols == 1
    assert t.oq_e("") == []
    assert t.total_symbols == 1


def test_cache_hit_is_free(tls):
    t = Teacher(tls, ERROR)
    first = t.oq_e("hkd")
    cost = t.total_symbols
    assert t.oq_e("hkd") == first and t.oq_e("hk") == first[:2]
    assert t.total_symbols == cost
    # an error answer covers every extension
    t.oq_e("hh")
    before = t.total_symbols
    assert t.oq_e("hhdkc") == ["ok", "err"]
    assert t.total_symbols == before


def test_oq_s_blocks_words_outside_reference(tls, refs):
    t = Teacher(tls, ERROR)
    assert t.oq_s("hhk", refs["L1"]) == ["ok"]
    assert t.oq_s("hkd", refs["L1"]) == ["ok", "ok", "ok"]
    assert t.oq_s("k", refs["L1"]) == []


def test_phases_are_metered_separately(tls):
    t = Teacher(tls, ERROR)
    t.oq_e("hk", LEARN)
    t.oq_e("d", TEST)
    assert (t.learn_symbols, t.test_symbols) == (3, 2)
    assert t.total_symbols == 5


def test_scripted_metering_matches_sum_over_misses():
    rng = np.random.default_rng(0)
    m = generate_random_machine(6, 3, 0.4, 1)
    for trial in range(5):
        t = Teacher(m, ERROR)
        answered = {}
        expected_total = 0
        for _ in range(200):
            word = tuple(m.inputs[int(k)] for k in rng.integers(3, size=int(rng.integers(0, 7))))
            ans = t.oq_e(word)
            assert ans == expected_answer(m, word, ERROR)
            executed = tuple(word[: len(ans)])
            # a miss: no earlier answer already covers this executed prefix
            covered = any(
                (len(prev) >= len(executed) and prev[: len(executed)] == executed)
                or (len(prev) < len(executed) and prev == executed[: len(prev)] and prev_err)
                for prev, prev_err in answered.items()
            ) or (not executed and answered)
            if not covered:
                expected_total += len(executed) + 1
            answered[executed] = bool(ans) and ans[-1] in ERROR
        assert t.total_symbols == expected_total


def test_metering_is_deterministic(tls):
    def script():
        t = Teacher(tls, ERROR, rng_seed=4)
        for w in ("hkdd", "hh", "", "kk", "hkdd", "hkc", "hkddd"):
            t.oq_e(w)
        return t.learn_symbols, t.test_symbols, t.executed_queries
    assert script() == script()


def test_budget_stops_queries(tls):
    t = Teacher(tls, ERROR, budget=6)
    t.oq_e("hkd")  # 4 symbols
    t.oq_e("hc")   # 3 symbols: total 7, overshoot by one query at most
    with pytest.raises(BudgetExceeded):
        t.oq_e("hkdd")
    assert t.total_symbols == 7
    # cached answers are still served
    assert t.oq_e("hk") == ["ok", "ok"]


def test_exact_oracle_is_free(tls, hyp):
    t = Teacher(tls, ERROR)
    assert t.eq(hyp, Exact()) == tuple("hk")
    assert t.eq(tls, Exact()) is None
    assert t.total_symbols == 0 and t.eq_calls == 2


def test_exact_on_reference(tls, hyp, refs):
    t = Teacher(tls, ERROR)
    cex = t.eq(hyp, ExactOnL(refs["L1"]))
    assert cex is not None and accepts(refs["L1"], cex)


def test_exact_oracle_agrees_with_equivalence():
    for seed in range(20):
        m = generate_random_machine(4, 2, 0.4, seed)
        n = generate_random_machine(4, 2, 0.4, seed + 100)
        t = Teacher(m, ERROR)
        assert (t.eq(n, Exact()) is None) == (mealy_equivalence(n, m, None, ERROR) is None)


def test_conformance_oracle_charges_test_phase(tls, hyp):
    t = Teacher(tls, ERROR, rng_seed=1)
    cex = t.eq(hyp, RandomWp(RwpmParams(max_tests=50), ErrOnly(ERROR)))
    assert cex is not None
    assert simulate(hyp, cex) != simulate(tls, cex)
    assert t.test_symbols > 0 and t.learn_symbols == 0


def test_conformance_accepts_the_system_itself(tls):
    t = Teacher(tls, ERROR, rng_seed=1)
    assert t.eq(tls, MoE(RwpmParams(max_tests=100))) is None


def test_tree_records_every_answer(tls):
    t = Teacher(tls, ERROR)
    for w in ("hkdd", "hh", "kd", "hkc"):
        t.oq_e(w)
    for node in range(1, len(t.tree)):
        assert simulate(tls, t.tree.access(node))[-1] == t.tree.in_output[node]


def test_answers_never_recover_after_error():
    for seed in range(10):
        m = generate_random_machine(5, 3, 0.5, seed)
        t = Teacher(m, ERROR)
        rng = np.random.default_rng(seed)
        for _ in range(30):
            word = tuple(m.inputs[int(k)] for k in rng.integers(3, size=6))
            ans = t.oq(word)
            seen = False
            for o in ans:
                assert not (seen and o not in ERROR)
                seen = seen or o in ERROR
