"""Rule-driven learners over the observation tree.

Five algorithms share one loop skeleton (:class:`_Run`): the baseline L#,
the error-aware L#_e, its adaptive variant AL#_e (reference used only as a
hint), L#_{e,S} (sound reference) and L#_{e,SC} (sound and complete
reference). Each loop iteration fires the first applicable rule in the
algorithm's fixed priority order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .automata import (
    Dfa,
    ErrorAlias,
    MealyMachine,
    Word,
    covers_and_separators,
    dfa_state_cover,
    minimize_dfa,
)
from .obstree import (
    ERROR_SINK,
    ApartnessChecker,
    ApartnessMode,
    ConfigurationError,
    ObservationTree,
)
from .teacher import BudgetExceeded, Exact, ExactOnL, MoE, RandomWp, Teacher
from .testing import build_t_l

ALGORITHMS = ("Lsharp", "LsharpE", "ALsharpE", "LsharpES", "LsharpESC")
NEEDS_REFERENCE = ("ALsharpE", "LsharpES", "LsharpESC")

CORRECT = "Correct"
INCORRECT = "Incorrect"
VIOLATION = "ViolationDetected"
BUDGET = "BudgetExceeded"


class AdequacyError(RuntimeError):
    """A hypothesis was requested while some frontier node is not identified."""


class LearnerStalled(RuntimeError):
    """A rule fired without changing the tree or the basis."""


@dataclass(frozen=True, eq=False)
class Hypothesis(MealyMachine):
    """A Mealy machine that remembers which tree node each state stands for.

    ``nodes[s]`` is the basis node of state ``s``, or ``ERROR_SINK`` for q_e.
    """

    nodes: tuple = ()


# ---------------------------------------------------------------------------
# configuration and report


@dataclass
class LearnerConfig:
    algorithm: str = "LsharpE"
    oracle: object = field(default_factory=Exact)
    reference: Optional[Dfa] = None
    max_eq: Optional[int] = None
    omit_final_eq: bool = True
    trace_rules: bool = False
    keep_hypotheses: bool = False
    record_norm: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.algorithm in NEEDS_REFERENCE and self.reference is None:
            raise ConfigurationError(f"{self.algorithm} needs a reference DFA")

    @property
    def mode(self) -> ApartnessMode:
        return mode_for(self.algorithm, self.reference)


def mode_for(algorithm: str, reference: Optional[Dfa]) -> ApartnessMode:
    if algorithm == "Lsharp":
        return ApartnessMode.plain(error_aware=False)
    if algorithm in ("LsharpE", "ALsharpE"):
        return ApartnessMode.plain()
    if algorithm == "LsharpES":
        return ApartnessMode.sound(reference)
    return ApartnessMode.sound_complete(reference)


@dataclass
class RunReport:
    learned: MealyMachine
    outcome: str
    eq_count: int
    learn_symbols: int
    test_symbols: int
    total_symbols: int
    learned_states: int
    rule_trace: Optional[list] = None
    violation_word: Optional[Word] = None
    hypotheses: Optional[list] = None
    norm_trace: Optional[list] = None
    cex_queries: list = field(default_factory=list)
    stalled: bool = False

    def to_dict(self) -> dict:
        row = {
            "outcome": self.outcome,
            "eq_count": self.eq_count,
            "learn_symbols": self.learn_symbols,
            "test_symbols": self.test_symbols,
            "total_symbols": self.total_symbols,
            "learned_states": self.learned_states,
        }
        if self.violation_word is not None:
            row["violation_word"] = list(self.violation_word)
        if self.rule_trace is not None:
            row["rule_trace"] = list(self.rule_trace)
        if self.stalled:
            row["stalled"] = True
        return row


# ---------------------------------------------------------------------------
# hypothesis construction and checks


def build_hypothesis_e(t: ObservationTree, mode: ApartnessMode = ApartnessMode(),
                       checker: Optional[ApartnessChecker] = None) -> Hypothesis:
    """Fold an adequate tree into a complete hypothesis.

    Error-aware modes add the all-error sink q_e: a transition goes there when
    its tree output is an error or it is unobserved. If some basis state
    already behaves as an error sink, q_e is merged into it. The error-unaware
    mode (baseline) builds every transition from observations.
    """
    checker = checker if checker is not None else ApartnessChecker(t, mode)
    if not checker.is_adequate():
        raise AdequacyError("basis is not adequate: unobserved basis transitions or undecided frontier")
    e = t.error_alias
    basis = list(t.basis)
    index = {b: k for k, b in enumerate(basis)}

    def target_of(child: int) -> int:
        if child in index:
            return index[child]
        return index[checker.classify(child).identified]

    trans = {}
    if not mode.error_aware:
        for b in basis:
            for i in t.inputs:
                c = t.children[b][i]
                trans[(index[b], i)] = (target_of(c), t.in_output[c])
        names = tuple(f"q{b}" for b in basis)
        return Hypothesis(names, 0, t.inputs, trans, nodes=tuple(basis))

    sink = len(basis)
    for b in basis:
        for i in t.inputs:
            c = t.children[b].get(i)
            if c is None:
                trans[(index[b], i)] = (sink, e.canonical)
            elif t.in_output[c] in e:
                trans[(index[b], i)] = (sink, t.in_output[c])
            else:
                trans[(index[b], i)] = (target_of(c), t.in_output[c])
    for i in t.inputs:
        trans[(sink, i)] = (sink, e.canonical)
    nodes = basis + [ERROR_SINK]

    # A non-initial basis state whose every transition is an error into q_e
    # is itself an error sink; let it absorb q_e. The initial state keeps its
    # own identity so that an all-error root still yields {q0, q_e}.
    absorber = next(
        (k for k in range(1, len(basis)) if all(trans[(k, i)][0] == sink for i in t.inputs)),
        None,
    )
    if absorber is not None:
        trans = {
            key: ((absorber if dst == sink else dst), out)
            for key, (dst, out) in trans.items() if key[0] != sink
        }
        nodes = basis
    else:
        reached = {0}
        stack = [0]
        while stack:
            s = stack.pop()
            for i in t.inputs:
                d = trans[(s, i)][0]
                if d not in reached:
                    reached.add(d)
                    stack.append(d)
        if sink not in reached:
            trans = {key: val for key, val in trans.items() if key[0] != sink}
            nodes = basis
    names = tuple("q_e" if n == ERROR_SINK else f"q{n}" for n in nodes)
    return Hypothesis(names, 0, t.inputs, trans, nodes=tuple(nodes))


def check_consistency(h: MealyMachine, t: ObservationTree, normalize: bool = True) -> Optional[Word]:
    """Shortest stored word on which ``h`` disagrees with the tree, if any."""
    norm = t.error_alias.normalize if normalize else (lambda o: o)
    queue = deque([(0, h.initial, ())])
    while queue:
        node, s, w = queue.popleft()
        kids = t.children[node]
        for i in t.inputs:
            c = kids.get(i)
            if c is None:
                continue
            s2, out = h.transitions[(s, i)]
            w2 = w + (i,)
            if norm(out) != norm(t.in_output[c]):
                return w2
            queue.append((c, s2, w2))
    return None


def check_soundness_hyp(l: Dfa, h: MealyMachine, e: ErrorAlias) -> Optional[Word]:
    """Shortest word outside ``l`` on which ``h`` ends with a non-error output."""
    start = (h.initial, l.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (s, r), w = queue.popleft()
        for i in h.inputs:
            s2, out = h.transitions[(s, i)]
            r2 = l.transitions[(r, i)]
            w2 = w + (i,)
            if r2 not in l.accepting and out not in e:
                return w2
            if (s2, r2) not in seen:
                seen.add((s2, r2))
                queue.append(((s2, r2), w2))
    return None


def conflict_prefix(h: Hypothesis, t: ObservationTree, checker: ApartnessChecker,
                    word: Sequence[str]) -> Optional[Word]:
    """Shortest prefix σ of ``word`` with δ^H(σ) apart from δ^T(σ)."""
    node = 0
    state = h.initial
    for k in range(len(word) + 1):
        if k > 0:
            node = t.children[node].get(word[k - 1])
            if node is None:
                return None
            state = h.transitions[(state, word[k - 1])][0]
        if checker.is_apart(h.nodes[state], node):
            return tuple(word[:k])
    return None


def _query_function(teacher: Teacher, mode: ApartnessMode) -> Callable[[Word], list]:
    if mode.uses_reference:
        ref = mode.reference
        return lambda w: teacher.oq_s(w, ref)
    if mode.error_aware:
        return teacher.oq_e
    return teacher.oq


def proc_counterex(t: ObservationTree, teacher: Teacher, h: Hypothesis, sigma: Sequence[str],
                   mode: ApartnessMode = ApartnessMode(),
                   checker: Optional[ApartnessChecker] = None,
                   query: Optional[Callable[[Word], list]] = None) -> int:
    """Binary-search a conflicting word down to a frontier node; returns the query count.

    Precondition: δ^H(sigma) and δ^T(sigma) are apart under ``mode``.
    """
    checker = checker if checker is not None else ApartnessChecker(t, mode)
    query = query if query is not None else _query_function(teacher, mode)
    frontier = set(checker.frontier())
    sigma = tuple(sigma)
    queries = 0
    for _ in range(4 * (len(sigma) + 8)):
        q = h.nodes[h.delta(sigma)]
        r = t.get(sigma)
        if r is None or t.in_basis(r) or r in frontier:
            return queries
        # rho: the prefix of sigma that leaves the basis
        node, k = 0, 0
        while t.in_basis(node):
            node = t.children[node][sigma[k]]
            k += 1
        if node not in frontier:
            return queries  # left the basis through an error edge
        half = (k + len(sigma)) // 2
        sigma1, sigma2 = sigma[:half], sigma[half:]
        q1 = h.nodes[h.delta(sigma1)]
        r1 = t.get(sigma1)
        eta = checker.witness(q, r)
        if eta is None or q1 == ERROR_SINK:
            return queries
        query(t.access(q1) + sigma2 + eta)
        queries += 1
        if checker.is_apart(q1, r1):
            sigma = sigma1
        else:
            sigma = t.access(q1) + sigma2
    raise LearnerStalled("counterexample processing did not converge")


# ---------------------------------------------------------------------------
# reference matching


def _agreement(t: ObservationTree, node: int, r: Dfa, q: int, e: ErrorAlias):
    """Walk the subtree of ``node`` alongside ``r`` from ``q``.

    Yields (word, agrees) per stored edge, where an edge agrees when it is an
    error exactly if the reference rejects.
    """
    queue = deque([(node, q, ())])
    while queue:
        x, s, w = queue.popleft()
        kids = t.children[x]
        for i in t.inputs:
            c = kids.get(i)
            if c is None:
                continue
            s2 = r.transitions[(s, i)]
            w2 = w + (i,)
            yield w2, (t.in_output[c] in e) == (s2 not in r.accepting)
            queue.append((c, s2, w2))


def mdeg(t: ObservationTree, b: int, r: Dfa, q: int, e: Optional[ErrorAlias] = None) -> Fraction:
    """Fraction of stored edges below ``b`` whose error status matches rejection from ``q``.

    An empty subtree gives 0. ``e`` defaults to the tree's error alias.
    """
    total = agree = 0
    for _, ok in _agreement(t, b, r, q, e if e is not None else t.error_alias):
        total += 1
        agree += ok
    return Fraction(agree, total) if total else Fraction(0)


def first_disagreement(t: ObservationTree, node: int, r: Dfa, q: int) -> Optional[Word]:
    """Shortest stored word below ``node`` that errors exactly where ``r`` accepts from ``q``."""
    for w, ok in _agreement(t, node, r, q, t.error_alias):
        if not ok:
            return w
    return None


# ---------------------------------------------------------------------------
# the run


class _Done(Exception):
    pass


class _Violation(Exception):
    def __init__(self, word: Word):
        super().__init__(" ".join(word))
        self.word = word


class _Run:
    def __init__(self, config: LearnerConfig, teacher: Teacher):
        self.config = config
        self.alg = config.algorithm
        self.teacher = teacher
        self.tree = teacher.tree
        self.ref = None
        if config.reference is not None:
            if set(config.reference.inputs) != set(teacher.inputs):
                raise ConfigurationError("reference alphabet differs from the SUL alphabet")
            self.ref = minimize_dfa(config.reference)
            if not self.ref.is_e_persistent():
                raise ConfigurationError("reference language must be prefix-closed")
        self.mode = mode_for(self.alg, self.ref)
        self.checker = ApartnessChecker(self.tree, self.mode)
        self.query = _query_function(teacher, self.mode)
        self.char = None
        self.cover_state: dict = {}
        if self.alg in ("ALsharpE", "LsharpES"):
            self.char = covers_and_separators(self.ref, accepting_only=False)
            self.cover_state = {w: s for s, w in self.char.state_cover.items()}
        self.oracle = config.oracle
        if self.mode.uses_reference and isinstance(self.oracle, Exact):
            self.oracle = ExactOnL(self.ref)
        self.hypothesis: Optional[Hypothesis] = None
        self.rule_trace: list = []
        self.hypotheses: list = []
        self.norm_trace: list = []
        self.cex_queries: list = []
        self._match_cache: dict = {}
        self._scanned = 1
        rules = {
            "Lsharp": ["promotion", "extension", "separation", "equivalence"],
            "LsharpE": ["promotion", "extension", "separation", "equivalence"],
            "ALsharpE": ["rebuilding", "prioritized_promotion", "promotion", "extension", "separation",
                         "match_separation", "match_refinement", "equivalence"],
            "LsharpES": ["rebuilding", "prioritized_promotion", "promotion", "extension", "separation",
                         "equivalence"],
            "LsharpESC": ["completeness_violation", "promotion", "extension", "separation", "equivalence"],
        }[self.alg]
        self.rules = [(name, getattr(self, "_rule_" + name)) for name in rules]

    # -- main loop ---------------------------------------------------------

    def run(self) -> None:
        if self.alg == "LsharpESC":
            self._seed_from_reference()
        if self.config.record_norm:
            self.norm_trace.append(("start", self.norm()))
        while True:
            before = (len(self.tree), len(self.tree.basis))
            for name, rule in self.rules:
                try:
                    applied = rule()
                except _Done:
                    if self.config.trace_rules:
                        self.rule_trace.append(name)
                    raise
                if applied:
                    break
            else:  # pragma: no cover - the equivalence rule always applies eventually
                raise LearnerStalled("no rule applicable")
            if self.config.trace_rules:
                self.rule_trace.append(name)
            if self.config.record_norm:
                self.norm_trace.append((name, self.norm()))
            # the tree and basis determine the next step, so no change means a loop
            if (len(self.tree), len(self.tree.basis)) == before:
                raise LearnerStalled(f"rule {name} made no progress")

    def _seed_from_reference(self) -> None:
        ref = self.ref
        index = {s: k for k, s in enumerate(ref.inputs)}
        for w in sorted(build_t_l(ref), key=lambda w: (len(w), [index[x] for x in w])):
            self.query(w)
        self._check_violation()
        cover = dfa_state_cover(ref, accepting_only=True)
        for w in sorted(cover.values(), key=lambda w: (len(w), [index[x] for x in w])):
            node = self.tree.get(w)
            if node is not None and not self.tree.is_error_edge(node):
                self.tree.promote(node)
        if self.config.trace_rules:
            self.rule_trace.append("seed_basis")

    # -- shared helpers ----------------------------------------------------

    def _frontier(self) -> list:
        return self.checker.frontier()

    def _check_violation(self) -> None:
        t = self.tree
        e = t.error_alias
        for node in range(self._scanned, len(t)):
            if t.in_output[node] in e and self.checker.in_reference(node):
                raise _Violation(t.access(node))
        self._scanned = len(t)

    def matches(self, b: int) -> frozenset:
        """Reference states of maximal matching degree for basis node ``b``."""
        key = b
        version = self.tree.version[b]
        hit = self._match_cache.get(key)
        if hit is not None and hit[0] == version:
            return hit[1]
        ref = self.ref
        scores = {q: mdeg(self.tree, b, ref, q) for q in range(len(ref.states))}
        best = max(scores.values())
        result = frozenset(q for q, v in scores.items() if v == best)
        self._match_cache[key] = (version, result)
        return result

    # -- rules -------------------------------------------------------------

    def _rule_completeness_violation(self) -> bool:
        self._check_violation()
        return False

    def _rule_promotion(self) -> bool:
        for f in self._frontier():
            if self.checker.classify(f).isolated:
                self.tree.promote(f)
                return True
        return False

    def _rule_prioritized_promotion(self) -> bool:
        for f in self._frontier():
            if self.tree.access(f) in self.cover_state and self.checker.classify(f).isolated:
                self.tree.promote(f)
                return True
        return False

    def _rule_extension(self) -> bool:
        for b, i in self.checker.missing_extensions():
            self.query(self.tree.access(b) + (i,))
            return True
        return False

    def _rule_separation(self) -> bool:
        t = self.tree
        for f in self._frontier():
            cands = self.checker.classify(f).candidates
            if len(cands) >= 2:
                w = self.checker.witness(cands[0], cands[1])
                self.query(t.access(f) + w)
                return True
        return False

    def _rule_rebuilding(self) -> bool:
        t = self.tree
        ref = self.ref
        sound = self.mode.uses_reference
        frontier = set(self._frontier())
        for q in list(t.basis):
            aq = t.access(q)
            for i in t.inputs:
                c = t.children[q].get(i)
                if c is not None and c not in frontier:
                    continue
                word_qi = aq + (i,)
                p1 = self.cover_state.get(word_qi)
                if p1 is None:
                    continue
                for q2 in list(t.basis):
                    if c is not None and self.checker.is_apart(q2, c):
                        continue
                    a2 = t.access(q2)
                    p2 = self.cover_state.get(a2)
                    if p2 is None or p2 == p1:
                        continue
                    sigma = self.char.sep(p1, p2)
                    progress1 = not t.determined(q, (i,) + sigma)
                    progress2 = not t.determined(q2, sigma)
                    if sound:
                        progress1 = progress1 and ref.accepts(word_qi + sigma)
                        progress2 = progress2 and ref.accepts(a2 + sigma)
                    if progress1 or progress2:
                        self.query(word_qi + sigma)
                        self.query(a2 + sigma)
                        return True
        return False

    def _rule_match_separation(self) -> bool:
        t = self.tree
        ref = self.ref
        frontier = set(self._frontier())
        basis = list(t.basis)
        for q in basis:
            for i in t.inputs:
                r = t.children[q].get(i)
                if r is None or r not in frontier:
                    continue
                for p in sorted(self.matches(q)):
                    if first_disagreement(t, q, ref, p) is not None:
                        continue
                    p2 = ref.transitions[(p, i)]
                    if any(p2 in self.matches(s) for s in basis):
                        continue
                    for q2 in basis:
                        if self.checker.is_apart(q2, r):
                            continue
                        sigma = first_disagreement(t, q2, ref, p2)
                        if sigma is None or t.determined(r, sigma):
                            continue
                        self.query(t.access(q) + (i,) + sigma)
                        return True
        return False

    def _rule_match_refinement(self) -> bool:
        t = self.tree
        for q in list(t.basis):
            ms = sorted(self.matches(q))
            for a in range(len(ms)):
                for b in range(a + 1, len(ms)):
                    sigma = self.char.sep(ms[a], ms[b])
                    if sigma and not t.determined(q, sigma):
                        self.query(t.access(q) + sigma)
                        return True
        return False

    def _rule_equivalence(self) -> bool:
        if not self.checker.is_adequate():
            return False
        t = self.tree
        h = build_hypothesis_e(t, self.mode, self.checker)
        self.hypothesis = h
        if self.config.keep_hypotheses:
            self.hypotheses.append(h)
        word = check_consistency(h, t, normalize=self.mode.error_aware)
        if word is None and self.mode.uses_reference:
            rho = check_soundness_hyp(self.ref, h, t.error_alias)
            if rho is not None:
                self.query(rho)
                word = rho
        if word is None:
            restrict = self.ref if self.mode.uses_reference else None
            if self.config.max_eq is not None and self.teacher.eq_calls >= self.config.max_eq:
                raise _Done()
            if self.config.omit_final_eq and self.teacher.is_equivalent(h, restrict):
                raise _Done()
            cex = self.teacher.eq(h, self.oracle)
            if cex is None:
                raise _Done()
            self.query(cex)
            word = cex
        sigma = conflict_prefix(h, t, self.checker, word)
        if sigma is None:
            raise LearnerStalled("counterexample does not conflict with the tree")
        self.cex_queries.append(proc_counterex(t, self.teacher, h, sigma, self.mode, self.checker, self.query))
        return True

    # -- instrumentation ---------------------------------------------------

    def norm(self) -> int:
        """The progress measure each non-terminating rule must raise."""
        t = self.tree
        ch = self.checker
        basis = list(t.basis)
        frontier = self._frontier()
        nb = len(basis)
        weighted = self.alg in ("ALsharpE", "LsharpES")
        total = nb * (nb + 1) if weighted else nb * (nb + 1) // 2
        total += sum(1 for b in basis for i in t.inputs if i in t.children[b])
        total += sum(1 for b in basis for f in frontier if ch.is_apart(b, f))
        if not weighted:
            return total
        ref = self.ref
        sep = self.char.sep
        for b in basis:
            pb = ch.ref_state(b) if self.mode.uses_reference else ref.delta(t.access(b))
            for f in frontier:
                pf = ch.ref_state(f) if self.mode.uses_reference else ref.delta(t.access(f))
                if pb == pf:
                    continue
                sigma = sep(pb, pf)
                if self.mode.uses_reference:
                    ok_b = not ref.accepts(t.access(b) + sigma) or t.determined(b, sigma)
                    ok_f = not ref.accepts(t.access(f) + sigma) or t.determined(f, sigma)
                else:
                    ok_b = t.determined(b, sigma)
                    ok_f = t.determined(f, sigma)
                total += ok_b and ok_f
        if self.alg == "ALsharpE":
            n_ref = len(ref.states)
            for b in basis:
                for p in range(n_ref):
                    for p2 in range(p + 1, n_ref):
                        total += t.determined(b, sep(p, p2))
            for x in basis + frontier:
                for p in range(n_ref):
                    total += first_disagreement(t, x, ref, p) is not None
        return total


def _fallback_machine(teacher: Teacher) -> MealyMachine:
    e = teacher.error_alias.canonical
    return MealyMachine(("q0",), 0, teacher.inputs, {(0, i): (0, e) for i in teacher.inputs})


def run_learner(config: LearnerConfig, teacher: Teacher) -> RunReport:
    """Learn the teacher's system with the configured algorithm and judge the result.

    The outcome is decided after the fact against the hidden system (full,
    error-normalized equivalence), except for a detected completeness
    violation or an exhausted budget.
    """
    run = _Run(config, teacher)
    outcome = None
    violation = None
    stalled = False
    try:
        run.run()
    except _Done:
        pass
    except _Violation as v:
        outcome, violation = VIOLATION, v.word
    except BudgetExceeded:
        outcome = BUDGET
    except LearnerStalled:
        stalled = True
    learned = run.hypothesis if run.hypothesis is not None else _fallback_machine(teacher)
    if outcome is None:
        outcome = CORRECT if teacher.is_equivalent(learned) else INCORRECT
    return RunReport(
        learned=learned,
        outcome=outcome,
        eq_count=teacher.eq_calls,
        learn_symbols=teacher.learn_symbols,
        test_symbols=teacher.test_symbols,
        total_symbols=teacher.total_symbols,
        learned_states=len(learned),
        rule_trace=run.rule_trace if config.trace_rules else None,
        violation_word=violation,
        hypotheses=run.hypotheses if config.keep_hypotheses else None,
        norm_trace=run.norm_trace if config.record_norm else None,
        cex_queries=run.cex_queries,
        stalled=stalled,
    )


def learn(sul: MealyMachine, error_alias: ErrorAlias, algorithm: str = "LsharpE",
          reference: Optional[Dfa] = None, oracle=None, budget: Optional[int] = None,
          rng_seed: int = 0, **options) -> RunReport:
    """Convenience wrapper: fresh teacher, one run."""
    teacher = Teacher(sul, error_alias, budget=budget, rng_seed=rng_seed)
    config = LearnerConfig(algorithm, oracle if oracle is not None else Exact(), reference, **options)
    return run_learner(config, teacher)


__all__ = [
    "ALGORITHMS", "AdequacyError", "Hypothesis", "LearnerConfig", "LearnerStalled", "RunReport",
    "build_hypothesis_e", "check_consistency", "check_soundness_hyp", "conflict_prefix",
    "first_disagreement", "learn", "mdeg", "mode_for", "proc_counterex", "run_learner",
    "CORRECT", "INCORRECT", "VIOLATION", "BUDGET", "MoE", "RandomWp",
]
