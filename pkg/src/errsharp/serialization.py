"""DOT and JSON reading/writing for Mealy machines and DFAs.

DOT dialect: Mealy edges carry ``label="input/output"`` (split at the first
``/``), DFA edges carry ``label="a"`` or ``label="a, b"``, accepting DFA states
use ``shape=doublecircle``, and the initial state is the target of an edge
leaving a ``__start*`` pseudo node (or a node with ``start=true``).
"""
from __future__ import annotations

import json
import re
from typing import Optional, Sequence

from .automata import (
    AutomatonError,
    Dfa,
    MealyMachine,
    NondeterminismError,
    make_dfa,
)


class DotFormatError(AutomatonError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<dot>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


_TOKEN = re.compile(
    r'''
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<arrow>->|--)
  | (?P<punct>[{}\[\];,=:])
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<html><[^>]*>)
  | (?P<id>[A-Za-z_\u0080-￿][A-Za-z_0-9.\u0080-￿]*|-?(?:\.\d+|\d+(?:\.\d*)?))
    ''',
    re.VERBOSE | re.DOTALL,
)


def _tokenize(text: str, source: str):
    pos = 0
    line = 1
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DotFormatError(f"unexpected character {text[pos]!r}", line, source)
        kind = m.lastgroup
        value = m.group()
        if kind == "string":
            tokens.append(("id", re.sub(r'\\(["\\])', r"\1", value[1:-1]), line))
        elif kind == "html":
            tokens.append(("id", value[1:-1], line))
        elif kind in ("id", "arrow", "punct"):
            tokens.append((kind if kind != "punct" else value, value, line))
        line += value.count("\n")
        pos = m.end()
    return tokens


def _parse_statements(text: str, source: str):
    """Yield ('node', name, attrs, line) and ('edge', src, dst, attrs, line) statements."""
    toks = _tokenize(text, source)
    k = 0

    def peek(offset=0):
        return toks[k + offset] if k + offset < len(toks) else (None, None, toks[-1][2] if toks else 1)

    # header: [strict] (digraph|graph) [name] {
    while k < len(toks) and toks[k][0] == "id" and toks[k][1].lower() in ("strict", "digraph", "graph"):
        k += 1
    if k < len(toks) and toks[k][0] == "id":
        k += 1
    if peek()[0] != "{":
        raise DotFormatError("expected '{' after graph header", peek()[2], source)
    k += 1

    def attr_list():
        nonlocal k
        attrs = {}
        while peek()[0] == "[":
            k += 1
            while peek()[0] not in ("]", None):
                if peek()[0] == "id":
                    key = peek()[1]
                    k += 1
                    if peek()[0] == "=":
                        k += 1
                        if peek()[0] != "id":
                            raise DotFormatError("expected attribute value", peek()[2], source)
                        attrs[key] = peek()[1]
                        k += 1
                    else:
                        attrs[key] = "true"
                elif peek()[0] in (",", ";"):
                    k += 1
                else:
                    raise DotFormatError(f"unexpected token {peek()[1]!r} in attribute list", peek()[2], source)
            if peek()[0] != "]":
                raise DotFormatError("unterminated attribute list", peek()[2], source)
            k += 1
        return attrs

    stmts = []
    while True:
        kind, value, line = peek()
        if kind is None:
            raise DotFormatError("missing closing '}'", line, source)
        if kind == "}":
            break
        if kind == ";":
            k += 1
            continue
        if kind != "id":
            raise DotFormatError(f"unexpected token {value!r}", line, source)
        if value in ("node", "edge", "graph") and peek(1)[0] == "[":
            k += 1
            attr_list()
            continue
        if value == "subgraph":
            raise DotFormatError("subgraphs are not supported", line, source)
        k += 1
        if peek()[0] == "=":
            # graph attribute such as rankdir=LR
            k += 2
            continue
        if peek()[0] == ":":
            raise DotFormatError("ports are not supported", line, source)
        if peek()[0] == "arrow":
            chain = [value]
            while peek()[0] == "arrow":
                k += 1
                if peek()[0] != "id":
                    raise DotFormatError("expected node after '->'", peek()[2], source)
                chain.append(peek()[1])
                k += 1
            attrs = attr_list()
            for a, b in zip(chain, chain[1:]):
                stmts.append(("edge", a, b, attrs, line))
        else:
            stmts.append(("node", value, attr_list(), line))
    return stmts


def _is_pseudo_start(name: str) -> bool:
    return name.startswith("__start")


def parse_automaton_dot(text: str, kind: str = "mealy", inputs: Optional[Sequence[str]] = None,
                        source: str = "<dot>"):
    """Parse a DOT digraph into a MealyMachine (``kind="mealy"``) or a total Dfa (``kind="dfa"``).

    ``inputs`` fixes the alphabet and its order; otherwise symbols are taken in
    first-appearance order. Missing DFA transitions go to a fresh rejecting sink.
    """
    if kind not in ("mealy", "dfa"):
        raise ValueError(f"unknown automaton kind {kind!r}")
    stmts = _parse_statements(text, source)
    names: list = []
    index: dict = {}
    accepting = set()
    initial = None

    def sid(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    edges = []
    for st in stmts:
        if st[0] == "node":
            _, name, attrs, line = st
            if _is_pseudo_start(name):
                continue
            sid(name)
            if attrs.get("shape") == "doublecircle":
                accepting.add(name)
            if attrs.get("start", "").lower() == "true":
                initial = name
        else:
            _, a, b, attrs, line = st
            if _is_pseudo_start(a):
                if initial is not None and initial != b:
                    raise DotFormatError("more than one initial state", line, source)
                initial = b
                sid(b)
                continue
            sid(a)
            sid(b)
            edges.append((a, b, attrs.get("label", ""), line))
    if initial is None:
        raise DotFormatError("no initial state marker (__start edge or start=true)", None, source)

    alphabet: list = list(inputs) if inputs is not None else []
    if kind == "mealy":
        trans = {}
        for a, b, label, line in edges:
            if "/" not in label:
                raise DotFormatError(f"Mealy edge label {label!r} lacks '/'", line, source)
            i, out = label.split("/", 1)
            i, out = i.strip(), out.strip()
            if inputs is None and i not in alphabet:
                alphabet.append(i)
            elif inputs is not None and i not in alphabet:
                raise DotFormatError(f"input {i!r} not in the given alphabet", line, source)
            key = (index[a], i)
            if key in trans:
                raise NondeterminismError(f"{source}:{line}: duplicate transition from {a} on {i}")
            trans[key] = (index[b], out)
        # put the initial state first
        order = [index[initial]] + [s for s in range(len(names)) if s != index[initial]]
        remap = {old: new for new, old in enumerate(order)}
        trans = {(remap[s], i): (remap[t], o) for (s, i), (t, o) in trans.items()}
        return MealyMachine(tuple(names[s] for s in order), 0, tuple(alphabet), trans)

    triples = []
    for a, b, label, line in edges:
        symbols = [s.strip() for s in label.split(",") if s.strip()]
        if not symbols:
            raise DotFormatError("DFA edge without input label", line, source)
        for i in symbols:
            if inputs is None and i not in alphabet:
                alphabet.append(i)
            elif inputs is not None and i not in alphabet:
                raise DotFormatError(f"input {i!r} not in the given alphabet", line, source)
            triples.append((a, i, b, line))
    seen = {}
    for a, i, b, line in triples:
        if (a, i) in seen and seen[(a, i)] != b:
            raise NondeterminismError(f"{source}:{line}: duplicate transition from {a} on {i}")
        seen[(a, i)] = b
    others = [n for n in names if n != initial]
    return make_dfa([(a, i, b) for a, i, b, _ in triples], initial, accepting, alphabet, others)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def mealy_to_dot(m: MealyMachine, name: str = "mealy") -> str:
    lines = [f"digraph {name} {{"]
    for s, label in enumerate(m.states):
        lines.append(f"    {_quote(label)} [shape=circle];")
    for s in range(len(m.states)):
        for i in m.inputs:
            if (s, i) in m.transitions:
                t, o = m.transitions[(s, i)]
                lines.append(f"    {_quote(m.states[s])} -> {_quote(m.states[t])} [label={_quote(f'{i}/{o}')}];")
    lines.append('    __start0 [label="", shape=none];')
    lines.append(f"    __start0 -> {_quote(m.states[m.initial])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dfa_to_dot(l: Dfa, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{"]
    for s, label in enumerate(l.states):
        shape = "doublecircle" if s in l.accepting else "circle"
        lines.append(f"    {_quote(label)} [shape={shape}];")
    for s in range(len(l.states)):
        for i in l.inputs:
            lines.append(f"    {_quote(l.states[s])} -> {_quote(l.states[l.transitions[(s, i)]])} [label={_quote(i)}];")
    lines.append('    __start0 [label="", shape=none];')
    lines.append(f"    __start0 -> {_quote(l.states[l.initial])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def automaton_to_json(a) -> dict:
    if isinstance(a, MealyMachine):
        return {
            "kind": "mealy",
            "states": list(a.states),
            "initial": a.states[a.initial],
            "inputs": list(a.inputs),
            "transitions": [
                [a.states[s], i, o, a.states[t]]
                for (s, i), (t, o) in sorted(a.transitions.items(), key=lambda kv: (kv[0][0], a.inputs.index(kv[0][1])))
            ],
        }
    return {
        "kind": "dfa",
        "states": list(a.states),
        "initial": a.states[a.initial],
        "accepting": [a.states[s] for s in sorted(a.accepting)],
        "inputs": list(a.inputs),
        "transitions": [
            [a.states[s], i, a.states[t]]
            for (s, i), t in sorted(a.transitions.items(), key=lambda kv: (kv[0][0], a.inputs.index(kv[0][1])))
        ],
    }


def automaton_from_json(data) -> MealyMachine | Dfa:
    if isinstance(data, str):
        data = json.loads(data)
    names = list(data["states"])
    index = {n: k for k, n in enumerate(names)}
    if len(index) != len(names):
        raise AutomatonError("duplicate state names")
    inputs = tuple(data["inputs"])
    if data["kind"] == "mealy":
        trans = {}
        for src, i, out, dst in data["transitions"]:
            if (index[src], i) in trans:
                raise NondeterminismError(f"duplicate transition from {src} on {i}")
            trans[(index[src], i)] = (index[dst], out)
        return MealyMachine(tuple(names), index[data["initial"]], inputs, trans)
    if data["kind"] == "dfa":
        trans = {(index[s], i): index[t] for s, i, t in data["transitions"]}
        missing = [(s, i) for s in range(len(names)) for i in inputs if (s, i) not in trans]
        if missing:
            raise AutomatonError("JSON DFA must be total")
        return Dfa(tuple(names), index[data["initial"]], frozenset(index[a] for a in data["accepting"]), inputs, trans)
    raise AutomatonError(f"unknown automaton kind {data['kind']!r}")


def load_automaton(path: str, kind: str, inputs: Optional[Sequence[str]] = None):
    """Read a DOT or JSON automaton file (chosen by extension)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        a = automaton_from_json(text)
        if (kind == "mealy") != isinstance(a, MealyMachine):
            raise AutomatonError(f"{path}: expected a {kind} automaton")
        return a
    return parse_automaton_dot(text, kind, inputs=inputs, source=path)
