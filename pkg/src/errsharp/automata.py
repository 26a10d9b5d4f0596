"""Mealy machines, DFAs and the product/partition algorithms the learners build on.

Words are tuples of input symbols. States are integer indices into ``states``
(a tuple of display names).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

Word = tuple


class AutomatonError(ValueError):
    """Base class for malformed automata and failed preconditions."""


class NondeterminismError(AutomatonError):
    pass


class AlphabetMismatchError(AutomatonError):
    pass


class PartialityError(AutomatonError):
    """Raised when a word runs off a partial machine.

    ``prefix`` is the longest prefix along which the machine is defined.
    """

    def __init__(self, prefix: Word):
        super().__init__(f"transition undefined after prefix {' '.join(prefix) or '(empty)'}")
        self.prefix = tuple(prefix)


@dataclass(frozen=True)
class ErrorAlias:
    """The set of concrete outputs that all stand for the error output e."""

    outputs: frozenset

    def __init__(self, outputs: Iterable[str]):
        outs = frozenset(outputs)
        if not outs:
            raise ValueError("an error alias needs at least one output")
        object.__setattr__(self, "outputs", outs)

    @classmethod
    def of(cls, *outputs: str) -> "ErrorAlias":
        return cls(outputs)

    @classmethod
    def from_substrings(cls, patterns: Iterable[str], alphabet: Iterable[str]) -> "ErrorAlias":
        """Every output of ``alphabet`` containing one of ``patterns`` is an error."""
        patterns = list(patterns)
        return cls(o for o in alphabet if any(p in o for p in patterns))

    def __contains__(self, output: object) -> bool:
        return output in self.outputs

    @property
    def canonical(self) -> str:
        # The representative emitted by synthetic error sinks.
        return min(self.outputs)

    def normalize(self, output: str) -> str:
        return self.canonical if output in self.outputs else output


@dataclass(frozen=True, eq=False)
class MealyMachine:
    states: tuple
    initial: int
    inputs: tuple
    transitions: Mapping  # (state, input) -> (target, output)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def outputs(self) -> frozenset:
        return frozenset(o for _, o in self.transitions.values())

    def is_complete(self) -> bool:
        return all((s, i) in self.transitions for s in range(len(self.states)) for i in self.inputs)

    def step(self, state: int, symbol: str) -> tuple:
        return self.transitions[(state, symbol)]

    def run(self, word: Sequence[str], state: Optional[int] = None) -> list:
        cur = self.initial if state is None else state
        outs = []
        for k, symbol in enumerate(word):
            nxt = self.transitions.get((cur, symbol))
            if nxt is None:
                raise PartialityError(tuple(word[:k]))
            cur, out = nxt
            outs.append(out)
        return outs

    def delta(self, word: Sequence[str], state: Optional[int] = None) -> int:
        cur = self.initial if state is None else state
        for k, symbol in enumerate(word):
            nxt = self.transitions.get((cur, symbol))
            if nxt is None:
                raise PartialityError(tuple(word[:k]))
            cur = nxt[0]
        return cur


@dataclass(frozen=True, eq=False)
class Dfa:
    states: tuple
    initial: int
    accepting: frozenset
    inputs: tuple
    transitions: Mapping  # (state, input) -> target

    def __len__(self) -> int:
        return len(self.states)

    def step(self, state: int, symbol: str) -> int:
        return self.transitions[(state, symbol)]

    def delta(self, word: Sequence[str], state: Optional[int] = None) -> int:
        cur = self.initial if state is None else state
        for symbol in word:
            cur = self.transitions[(cur, symbol)]
        return cur

    def accepts(self, word: Sequence[str], state: Optional[int] = None) -> bool:
        return self.delta(word, state) in self.accepting

    def is_e_persistent(self) -> bool:
        """Rejected words stay rejected: non-accepting states only reach non-accepting states."""
        for s in reachable_dfa_states(self):
            if s in self.accepting:
                continue
            for i in self.inputs:
                if self.transitions[(s, i)] in self.accepting:
                    return False
        return True


@dataclass(frozen=True)
class ReferenceClass:
    sound: bool
    complete: bool
    sound_cex: Optional[Word] = None
    complete_cex: Optional[Word] = None


@dataclass
class CharacterizationData:
    state_cover: dict = field(default_factory=dict)        # state -> access word
    separating_family: dict = field(default_factory=dict)  # state -> frozenset of words
    sep_index: dict = field(default_factory=dict)          # frozenset({p, q}) -> word

    def sep(self, p: int, q: int) -> Optional[Word]:
        return self.sep_index.get(frozenset((p, q)))


def run_word(m: MealyMachine, sigma: Sequence[str]) -> list:
    return m.run(sigma)


def _require_same_inputs(a, b) -> None:
    if tuple(a.inputs) != tuple(b.inputs):
        if set(a.inputs) == set(b.inputs):
            return
        raise AlphabetMismatchError(f"alphabets differ: {list(a.inputs)} vs {list(b.inputs)}")


def reachable_mealy_states(m: MealyMachine) -> list:
    seen = {m.initial}
    order = [m.initial]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for i in m.inputs:
            nxt = m.transitions.get((s, i))
            if nxt is not None and nxt[0] not in seen:
                seen.add(nxt[0])
                order.append(nxt[0])
                queue.append(nxt[0])
    return order


def reachable_dfa_states(l: Dfa) -> list:
    seen = {l.initial}
    order = [l.initial]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for i in l.inputs:
            t = l.transitions[(s, i)]
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def is_e_persistent(m: MealyMachine, e: ErrorAlias) -> bool:
    """True iff every state entered through an error output emits only errors from then on."""
    reach = reachable_mealy_states(m)
    post_error = set()
    for s in reach:
        for i in m.inputs:
            tgt, out = m.transitions[(s, i)]
            if out in e:
                post_error.add(tgt)
    work = list(post_error)
    while work:
        s = work.pop()
        for i in m.inputs:
            tgt, out = m.transitions[(s, i)]
            if out not in e:
                return False
            if tgt not in post_error:
                post_error.add(tgt)
                work.append(tgt)
    return True


def classify_reference(l: Dfa, m: MealyMachine, e: ErrorAlias) -> ReferenceClass:
    """Check soundness and completeness of ``l`` for ``m`` on the synchronous product.

    Witnesses are shortest, ties broken by alphabet order. The empty word has no
    output and is never a witness.
    """
    _require_same_inputs(l, m)
    sound_cex = None
    complete_cex = None
    start = (l.initial, m.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue and (sound_cex is None or complete_cex is None):
        (r, s), word = queue.popleft()
        for i in m.inputs:
            r2 = l.transitions[(r, i)]
            s2, out = m.transitions[(s, i)]
            w2 = word + (i,)
            accepted = r2 in l.accepting
            if not accepted and out not in e and sound_cex is None:
                sound_cex = w2
            if accepted and out in e and complete_cex is None:
                complete_cex = w2
            if (r2, s2) not in seen:
                seen.add((r2, s2))
                queue.append(((r2, s2), w2))
    return ReferenceClass(sound_cex is None, complete_cex is None, sound_cex, complete_cex)


def extract_reference(m: MealyMachine, e: ErrorAlias) -> Dfa:
    """Minimal DFA of the words on which ``m`` does not (yet) produce an error."""
    if not is_e_persistent(m, e):
        raise AutomatonError("machine is not e-persistent")
    n = len(m.states)
    sink = n
    trans = {}
    for s in range(n):
        for i in m.inputs:
            tgt, out = m.transitions[(s, i)]
            trans[(s, i)] = sink if out in e else tgt
    for i in m.inputs:
        trans[(sink, i)] = sink
    raw = Dfa(tuple(m.states) + ("sink",), m.initial, frozenset(range(n)), tuple(m.inputs), trans)
    return minimize_dfa(raw)


def minimize_dfa(l: Dfa) -> Dfa:
    """Moore partition refinement over the reachable part; states renumbered in BFS order."""
    reach = reachable_dfa_states(l)
    block = {s: (1 if s in l.accepting else 0) for s in reach}
    n_blocks = len(set(block.values()))
    while True:
        sigs = {}
        new_block = {}
        for s in reach:
            sig = (block[s],) + tuple(block[l.transitions[(s, i)]] for i in l.inputs)
            new_block[s] = sigs.setdefault(sig, len(sigs))
        block = new_block
        if len(sigs) == n_blocks:
            break
        n_blocks = len(sigs)
    # renumber blocks in BFS order from the initial state
    order = []
    rep = {}
    for s in reach:
        if block[s] not in rep:
            rep[block[s]] = s
            order.append(block[s])
    index = {b: k for k, b in enumerate(order)}
    names = []
    trans = {}
    accepting = set()
    for b in order:
        s = rep[b]
        names.append(l.states[s])
        if s in l.accepting:
            accepting.add(index[b])
        for i in l.inputs:
            trans[(index[b], i)] = index[block[l.transitions[(s, i)]]]
    return Dfa(tuple(names), 0, frozenset(accepting), tuple(l.inputs), trans)


def minimize_mealy(m: MealyMachine, e: Optional[ErrorAlias] = None) -> MealyMachine:
    """Merge behaviourally equivalent states; with ``e``, all error outputs count as equal."""
    norm = e.normalize if e is not None else (lambda o: o)
    reach = reachable_mealy_states(m)
    block = {}
    sigs: dict = {}
    for s in reach:
        sig = tuple(norm(m.transitions[(s, i)][1]) for i in m.inputs)
        block[s] = sigs.setdefault(sig, len(sigs))
    n_blocks = len(sigs)
    while True:
        sigs = {}
        new_block = {}
        for s in reach:
            sig = (block[s],) + tuple(block[m.transitions[(s, i)][0]] for i in m.inputs)
            new_block[s] = sigs.setdefault(sig, len(sigs))
        block = new_block
        if len(sigs) == n_blocks:
            break
        n_blocks = len(sigs)
    order = []
    rep = {}
    for s in reach:
        if block[s] not in rep:
            rep[block[s]] = s
            order.append(block[s])
    index = {b: k for k, b in enumerate(order)}
    trans = {}
    for b in order:
        s = rep[b]
        for i in m.inputs:
            tgt, out = m.transitions[(s, i)]
            trans[(index[b], i)] = (index[block[tgt]], out)
    return MealyMachine(tuple(m.states[rep[b]] for b in order), 0, tuple(m.inputs), trans)


def mealy_equivalence(
    m: MealyMachine,
    n: MealyMachine,
    restrict: Optional[Dfa] = None,
    e: Optional[ErrorAlias] = None,
) -> Optional[Word]:
    """Shortest word on which ``m`` and ``n`` disagree, or None.

    With ``restrict`` only words of its (prefix-closed) language count. With ``e``
    all error outputs compare equal.
    """
    _require_same_inputs(m, n)
    if restrict is not None:
        _require_same_inputs(m, restrict)
        if restrict.initial not in restrict.accepting:
            return None
    norm = e.normalize if e is not None else (lambda o: o)
    r0 = restrict.initial if restrict is not None else None
    start = (m.initial, n.initial, r0)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (a, b, r), word = queue.popleft()
        for i in m.inputs:
            r2 = None
            if restrict is not None:
                r2 = restrict.transitions[(r, i)]
                if r2 not in restrict.accepting:
                    continue
            a2, oa = m.transitions[(a, i)]
            b2, ob = n.transitions[(b, i)]
            w2 = word + (i,)
            if norm(oa) != norm(ob):
                return w2
            key = (a2, b2, r2)
            if key not in seen:
                seen.add(key)
                queue.append((key, w2))
    return None


def dfa_product(a: Dfa, b: Dfa, combine: Callable[[bool, bool], bool]) -> Dfa:
    """Product automaton accepting where ``combine(acc_a, acc_b)`` holds, minimized."""
    _require_same_inputs(a, b)
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    queue = deque([start])
    trans = {}
    while queue:
        pair = queue.popleft()
        for i in a.inputs:
            nxt = (a.transitions[(pair[0], i)], b.transitions[(pair[1], i)])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans[(index[pair], i)] = index[nxt]
    accepting = frozenset(
        k for k, (x, y) in enumerate(order) if combine(x in a.accepting, y in b.accepting)
    )
    names = tuple(f"{a.states[x]}|{b.states[y]}" for x, y in order)
    return minimize_dfa(Dfa(names, 0, accepting, tuple(a.inputs), trans))


def _dfa_separator(l: Dfa, p: int, q: int) -> Optional[Word]:
    # BFS over state pairs; the first pair (in dequeue order) with different
    # acceptance yields the shortest, alphabet-first witness.
    start = (p, q)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (x, y), word = queue.popleft()
        if (x in l.accepting) != (y in l.accepting):
            return word
        for i in l.inputs:
            nxt = (l.transitions[(x, i)], l.transitions[(y, i)])
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (i,)))
    return None


def dfa_state_cover(l: Dfa, accepting_only: bool = False) -> dict:
    """Shortest access words, alphabet-first; optionally only through accepting states."""
    if accepting_only and l.initial not in l.accepting:
        return {}
    cover = {l.initial: ()}
    queue = deque([l.initial])
    while queue:
        s = queue.popleft()
        for i in l.inputs:
            t = l.transitions[(s, i)]
            if t in cover or (accepting_only and t not in l.accepting):
                continue
            cover[t] = cover[s] + (i,)
            queue.append(t)
    return cover


def covers_and_separators(l: Dfa, accepting_only: bool) -> CharacterizationData:
    """State cover plus a separating family built from pairwise shortest separators."""
    states = reachable_dfa_states(l)
    data = CharacterizationData()
    data.state_cover = dfa_state_cover(l, accepting_only)
    family = {s: set() for s in states}
    for a in range(len(states)):
        for b in range(a + 1, len(states)):
            p, q = states[a], states[b]
            w = _dfa_separator(l, p, q)
            if w is None:
                raise AutomatonError(
                    f"DFA is not minimal: states {l.states[p]} and {l.states[q]} are equivalent"
                )
            data.sep_index[frozenset((p, q))] = w
            family[p].add(w)
            family[q].add(w)
    data.separating_family = {s: frozenset(ws) for s, ws in family.items()}
    return data


def mealy_state_cover(m: MealyMachine) -> dict:
    cover = {m.initial: ()}
    queue = deque([m.initial])
    while queue:
        s = queue.popleft()
        for i in m.inputs:
            t = m.transitions[(s, i)][0]
            if t not in cover:
                cover[t] = cover[s] + (i,)
                queue.append(t)
    return cover


def mealy_separating_family(m: MealyMachine, e: Optional[ErrorAlias] = None) -> dict:
    """state -> set of shortest pairwise separating words (empty for equivalent pairs)."""
    norm = e.normalize if e is not None else (lambda o: o)
    states = reachable_mealy_states(m)
    family = {s: set() for s in states}
    for a in range(len(states)):
        for b in range(a + 1, len(states)):
            p, q = states[a], states[b]
            start = (p, q)
            seen = {start}
            queue = deque([(start, ())])
            found = None
            while queue and found is None:
                (x, y), word = queue.popleft()
                for i in m.inputs:
                    x2, ox = m.transitions[(x, i)]
                    y2, oy = m.transitions[(y, i)]
                    if norm(ox) != norm(oy):
                        found = word + (i,)
                        break
                    if (x2, y2) not in seen:
                        seen.add((x2, y2))
                        queue.append(((x2, y2), word + (i,)))
            if found is not None:
                family[p].add(found)
                family[q].add(found)
    return {s: frozenset(ws) for s, ws in family.items()}


def make_mealy(
    transitions: Iterable[tuple],
    initial: str,
    inputs: Optional[Sequence[str]] = None,
) -> MealyMachine:
    """Build a machine from ``(src, input, output, dst)`` tuples over named states."""
    names: list = []
    index: dict = {}

    def sid(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    sid(initial)
    trans = {}
    seen_inputs: list = []
    for src, i, out, dst in transitions:
        key = (sid(src), i)
        if key in trans:
            raise NondeterminismError(f"duplicate transition from {src} on {i}")
        trans[key] = (sid(dst), out)
        if i not in seen_inputs:
            seen_inputs.append(i)
    return MealyMachine(tuple(names), 0, tuple(inputs or seen_inputs), trans)


def make_dfa(
    transitions: Iterable[tuple],
    initial: str,
    accepting: Iterable[str],
    inputs: Sequence[str],
    states: Sequence[str] = (),
) -> Dfa:
    """Build a total DFA from ``(src, input, dst)`` tuples; gaps go to a fresh sink."""
    names: list = []
    index: dict = {}

    def sid(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    sid(initial)
    for s in states:
        sid(s)
    trans = {}
    for src, i, dst in transitions:
        key = (sid(src), i)
        if key in trans and trans[key] != sid(dst):
            raise NondeterminismError(f"duplicate transition from {src} on {i}")
        trans[key] = sid(dst)
    acc = {sid(a) for a in accepting}
    n = len(names)
    missing = [(s, i) for s in range(n) for i in inputs if (s, i) not in trans]
    if missing:
        sink_name = "sink"
        while sink_name in index:
            sink_name += "_"
        sink = sid(sink_name)
        for key in missing:
            trans[key] = sink
        for i in inputs:
            trans[(sink, i)] = sink
    return Dfa(tuple(names), 0, frozenset(acc), tuple(inputs), trans)
