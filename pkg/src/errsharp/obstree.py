"""Observation tree, basis/frontier bookkeeping and the apartness relations.

The tree stores raw outputs. Comparisons go through the error alias, so all
error outputs count as the same symbol unless the mode is error-unaware
(the baseline learner).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .automata import Dfa, ErrorAlias, Word

#: Node id standing for the synthetic all-error hypothesis state q_e.
ERROR_SINK = -1

PLAIN = "plain"
SOUND = "sound"
SOUND_COMPLETE = "sound_complete"


class ObservationConflict(RuntimeError):
    """Two answers disagree on a shared prefix: the system is not deterministic."""


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class ApartnessMode:
    kind: str = PLAIN
    reference: Optional[Dfa] = None
    error_aware: bool = True

    def __post_init__(self):
        if self.kind not in (PLAIN, SOUND, SOUND_COMPLETE):
            raise ConfigurationError(f"unknown apartness kind {self.kind!r}")
        if self.kind != PLAIN and self.reference is None:
            raise ConfigurationError(f"{self.kind} apartness needs a reference DFA")

    @classmethod
    def plain(cls, error_aware: bool = True) -> "ApartnessMode":
        return cls(PLAIN, None, error_aware)

    @classmethod
    def sound(cls, reference: Dfa) -> "ApartnessMode":
        return cls(SOUND, reference)

    @classmethod
    def sound_complete(cls, reference: Dfa) -> "ApartnessMode":
        return cls(SOUND_COMPLETE, reference)

    @property
    def uses_reference(self) -> bool:
        return self.kind != PLAIN


class ObservationTree:
    """Append-only tree of observed input/output words."""

    root = 0

    def __init__(self, inputs: Sequence[str], error_alias: ErrorAlias):
        self.inputs = tuple(inputs)
        self.error_alias = error_alias
        self.parent: list = [None]
        self.in_input: list = [None]
        self.in_output: list = [None]
        self.children: list = [{}]
        self.depth: list = [0]
        # bumped whenever something is added below a node; drives cache validity
        self.version: list = [0]
        self._stamp = 0
        self.basis: list = [0]
        self._basis_set = {0}

    def __len__(self) -> int:
        return len(self.parent)

    # -- structure ---------------------------------------------------------

    def _new_child(self, node: int, symbol: str, output: str) -> int:
        child = len(self.parent)
        self.parent.append(node)
        self.in_input.append(symbol)
        self.in_output.append(output)
        self.children.append({})
        self.depth.append(self.depth[node] + 1)
        self.version.append(0)
        self.children[node][symbol] = child
        self._stamp += 1
        anc = node
        while anc is not None:
            self.version[anc] = self._stamp
            anc = self.parent[anc]
        return child

    def add_observation(self, word: Sequence[str], outs: Sequence[str], start: int = 0) -> int:
        """Record ``outs`` as the answer to ``word`` (possibly a truncated answer)."""
        if len(outs) > len(word):
            raise ValueError("more outputs than inputs")
        node = start
        for k, out in enumerate(outs):
            symbol = word[k]
            child = self.children[node].get(symbol)
            if child is None:
                child = self._new_child(node, symbol, out)
            elif self.in_output[child] != out:
                raise ObservationConflict(
                    f"word {' '.join(word[:k + 1])}: stored output {self.in_output[child]!r}, new {out!r}"
                )
            node = child
        return node

    def child(self, node: int, symbol: str) -> Optional[int]:
        return self.children[node].get(symbol)

    def get(self, word: Sequence[str], node: int = 0) -> Optional[int]:
        for symbol in word:
            node = self.children[node].get(symbol)
            if node is None:
                return None
        return node

    def walk(self, word: Sequence[str], node: int = 0) -> tuple:
        """Follow ``word`` as far as stored; returns (last node reached, steps taken)."""
        for k, symbol in enumerate(word):
            nxt = self.children[node].get(symbol)
            if nxt is None:
                return node, k
            node = nxt
        return node, len(word)

    def outputs(self, word: Sequence[str], node: int = 0) -> Optional[list]:
        outs = []
        for symbol in word:
            node = self.children[node].get(symbol)
            if node is None:
                return None
            outs.append(self.in_output[node])
        return outs

    def access(self, node: int) -> Word:
        word = []
        while node:
            word.append(self.in_input[node])
            node = self.parent[node]
        return tuple(reversed(word))

    def is_error_edge(self, node: int) -> bool:
        """True if ``node`` was reached through an error output."""
        return node != 0 and self.in_output[node] in self.error_alias

    def determined(self, node: int, word: Sequence[str]) -> bool:
        """True if the tree fixes the answer to ``word`` from ``node``: fully stored or cut by an error."""
        for symbol in word:
            nxt = self.children[node].get(symbol)
            if nxt is None:
                return False
            if self.in_output[nxt] in self.error_alias:
                return True
            node = nxt
        return True

    def subtree_edges(self, node: int):
        """Yield (relative word, child node) for every edge below ``node`` in BFS order."""
        queue = deque([(node, ())])
        while queue:
            x, w = queue.popleft()
            kids = self.children[x]
            for symbol in self.inputs:
                c = kids.get(symbol)
                if c is not None:
                    w2 = w + (symbol,)
                    yield w2, c
                    queue.append((c, w2))

    # -- basis / frontier --------------------------------------------------

    def in_basis(self, node: int) -> bool:
        return node in self._basis_set

    def promote(self, node: int) -> None:
        if node in self._basis_set:
            return
        if self.parent[node] not in self._basis_set:
            raise ValueError("only children of basis nodes can be promoted")
        self.basis.append(node)
        self._basis_set.add(node)

    def frontier(self, error_aware: bool = True) -> list:
        result = []
        for b in self.basis:
            for symbol in self.inputs:
                c = self.children[b].get(symbol)
                if c is None or c in self._basis_set:
                    continue
                if error_aware and self.in_output[c] in self.error_alias:
                    continue
                result.append(c)
        result.sort()
        return result

    def to_dot(self, name: str = "tree") -> str:
        front = set(self.frontier())
        lines = [f"digraph {name} {{"]
        for n in range(len(self)):
            style = "doublecircle" if n in self._basis_set else ("box" if n in front else "circle")
            lines.append(f'    n{n} [label="q{n}", shape={style}];')
        for n in range(1, len(self)):
            label = f"{self.in_input[n]}/{self.in_output[n]}".replace('"', '\\"')
            lines.append(f'    n{self.parent[n]} -> n{n} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FrontierClass:
    """Basis nodes a frontier node is not apart from."""

    candidates: tuple

    @property
    def isolated(self) -> bool:
        return not self.candidates

    @property
    def identified(self) -> Optional[int]:
        return self.candidates[0] if len(self.candidates) == 1 else None

    @property
    def kind(self) -> str:
        if not self.candidates:
            return "isolated"
        return "identified" if len(self.candidates) == 1 else "undecided"


class ApartnessChecker:
    """Apartness queries over one tree under one mode, with caching.

    Positive answers are cached forever (apartness is monotone in the tree).
    Negative answers and witnesses are reused while neither subtree changed.
    """

    def __init__(self, tree: ObservationTree, mode: ApartnessMode):
        self.tree = tree
        self.mode = mode
        e = tree.error_alias
        self._norm = e.normalize if mode.error_aware else (lambda o: o)
        self._cache: dict = {}
        self._ref: list = []
        self.ref = mode.reference
        if mode.uses_reference and tuple(sorted(mode.reference.inputs)) != tuple(sorted(tree.inputs)):
            raise ConfigurationError("reference alphabet differs from the tree alphabet")

    def ref_state(self, node: int) -> int:
        """Reference state reached by access(node)."""
        ref = self.ref
        cache = self._ref
        if not cache:
            cache.append(ref.initial)
        t = self.tree
        while len(cache) <= node:
            k = len(cache)
            cache.append(ref.transitions[(cache[t.parent[k]], t.in_input[k])])
        return cache[node]

    def in_reference(self, node: int, symbol: Optional[str] = None) -> bool:
        """Is access(node)(·symbol) in the reference language?"""
        r = self.ref_state(node)
        if symbol is not None:
            r = self.ref.transitions[(r, symbol)]
        return r in self.ref.accepting

    def _version(self, node: int) -> int:
        return -2 if node == ERROR_SINK else self.tree.version[node]

    def witness(self, p: int, q: int) -> Optional[Word]:
        if p == q:
            return None
        key = (p, q)
        vp, vq = self._version(p), self._version(q)
        hit = self._cache.get(key)
        if hit is not None and hit[0] == vp and hit[1] == vq:
            return hit[2]
        w = self._search(p, q)
        self._cache[key] = (vp, vq, w)
        return w

    def is_apart(self, p: int, q: int) -> bool:
        if p == q:
            return False
        for key in ((p, q), (q, p)):
            hit = self._cache.get(key)
            if hit is not None and hit[2] is not None:
                return True
        return self.witness(p, q) is not None

    def _error_sink_witness(self, node: int) -> Optional[Word]:
        # q_e answers e to everything; any stored non-error output separates.
        t = self.tree
        e = t.error_alias
        for w, c in t.subtree_edges(node):
            if t.in_output[c] not in e:
                return w
        return None

    def _search(self, p: int, q: int) -> Optional[Word]:
        if p == ERROR_SINK:
            return self._error_sink_witness(q)
        if q == ERROR_SINK:
            return self._error_sink_witness(p)
        t = self.tree
        inputs = t.inputs
        children = t.children
        outs = t.in_output
        norm = self._norm
        if not self.mode.uses_reference:
            queue = deque([(p, q, ())])
            while queue:
                x, y, w = queue.popleft()
                kx, ky = children[x], children[y]
                if not kx or not ky:
                    continue
                for i in inputs:
                    cx = kx.get(i)
                    if cx is None:
                        continue
                    cy = ky.get(i)
                    if cy is None:
                        continue
                    if norm(outs[cx]) != norm(outs[cy]):
                        return w + (i,)
                    queue.append((cx, cy, w + (i,)))
            return None

        e = t.error_alias
        acc = self.ref.accepting
        rt = self.ref.transitions
        complete_clause = self.mode.kind == SOUND_COMPLETE
        queue = deque([(p, q, self.ref_state(p), self.ref_state(q), ())])
        empty: dict = {}
        while queue:
            x, y, rx, ry, w = queue.popleft()
            kx = children[x] if x is not None else empty
            ky = children[y] if y is not None else empty
            for i in inputs:
                cx = kx.get(i)
                cy = ky.get(i)
                if cx is None and cy is None:
                    continue
                w2 = w + (i,)
                rx2 = rt[(rx, i)]
                ry2 = rt[(ry, i)]
                if cx is not None and cy is not None and norm(outs[cx]) != norm(outs[cy]):
                    return w2
                if cx is not None:
                    err = outs[cx] in e
                    if not err and ry2 not in acc:
                        return w2
                    if complete_clause and err and ry2 in acc:
                        return w2
                if cy is not None:
                    err = outs[cy] in e
                    if not err and rx2 not in acc:
                        return w2
                    if complete_clause and err and rx2 in acc:
                        return w2
                queue.append((cx, cy, rx2, ry2, w2))
        return None

    # -- derived views -----------------------------------------------------

    def frontier(self) -> list:
        return self.tree.frontier(self.mode.error_aware)

    def classify(self, node: int) -> FrontierClass:
        return FrontierClass(tuple(b for b in self.tree.basis if not self.is_apart(node, b)))

    def classify_frontier(self) -> dict:
        return {f: self.classify(f) for f in self.frontier()}

    def missing_extensions(self) -> Iterable[tuple]:
        """(basis node, input) pairs whose child must still be observed."""
        t = self.tree
        for b in t.basis:
            kids = t.children[b]
            for i in t.inputs:
                if i in kids:
                    continue
                if self.mode.uses_reference and not self.in_reference(b, i):
                    continue
                yield b, i

    def is_adequate(self) -> bool:
        for _ in self.missing_extensions():
            return False
        return all(self.classify(f).identified is not None for f in self.frontier())


def frontier(t: ObservationTree, error_aware: bool = True) -> list:
    return t.frontier(error_aware)


def apart(t: ObservationTree, p: int, q: int, mode: ApartnessMode = ApartnessMode()) -> Optional[Word]:
    """Shortest witness that ``p`` and ``q`` are apart under ``mode``, or None."""
    return ApartnessChecker(t, mode).witness(p, q)


def classify_frontier(t: ObservationTree, mode: ApartnessMode = ApartnessMode()) -> dict:
    return ApartnessChecker(t, mode).classify_frontier()


def is_adequate(t: ObservationTree, mode: ApartnessMode = ApartnessMode()) -> bool:
    return ApartnessChecker(t, mode).is_adequate()
