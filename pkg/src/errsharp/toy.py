"""The toy TLS example: a five-state handshake machine, three reference DFAs, a
two-state hypothesis and a small observation tree. Used by tests, the README
and the CLI smoke runs.
"""
from __future__ import annotations

from .automata import ErrorAlias

ERROR = ErrorAlias.of("err")
INPUTS = ("h", "k", "d", "c")

# h = hello, k = key exchange, d = data, c = close
TOY_TLS_DOT = """\
digraph toy_tls {
    __start0 [label="", shape=none];
    __start0 -> q0;
    q0 -> q1 [label="h/ok"];
    q0 -> qe [label="k/err"];
    q0 -> qe [label="d/err"];
    q0 -> qe [label="c/err"];
    q1 -> qe [label="h/err"];
    q1 -> q2 [label="k/ok"];
    q1 -> qe [label="d/err"];
    q1 -> qe [label="c/err"];
    q2 -> qe [label="h/err"];
    q2 -> qe [label="k/err"];
    q2 -> q3 [label="d/ok"];
    q2 -> qe [label="c/err"];
    q3 -> qe [label="h/err"];
    q3 -> qe [label="k/err"];
    q3 -> q3 [label="d/letter"];
    q3 -> qe [label="c/err"];
    qe -> qe [label="h/err"];
    qe -> qe [label="k/err"];
    qe -> qe [label="d/err"];
    qe -> qe [label="c/err"];
}
"""

# sound but incomplete: accepts "hh"
REF_L0_DOT = """\
digraph L0 {
    __start0 [label="", shape=none];
    __start0 -> r0;
    r0 [shape=doublecircle];
    r1 [shape=doublecircle];
    r2 [shape=doublecircle];
    r0 -> r1 [label="h"];
    r1 -> r1 [label="h"];
    r1 -> r2 [label="k"];
    r2 -> r2 [label="h, d"];
}
"""

# sound and complete
REF_L1_DOT = """\
digraph L1 {
    __start0 [label="", shape=none];
    __start0 -> p0;
    p0 [shape=doublecircle];
    p1 [shape=doublecircle];
    p2 [shape=doublecircle];
    p0 -> p1 [label="h"];
    p1 -> p2 [label="k"];
    p2 -> p2 [label="d"];
}
"""

# neither sound nor complete
REF_L2_DOT = """\
digraph L2 {
    __start0 [label="", shape=none];
    __start0 -> s0;
    s0 [shape=doublecircle];
    s1 [shape=doublecircle];
    s2 [shape=doublecircle];
    s3 [shape=doublecircle];
    s0 -> s1 [label="h"];
    s1 -> s2 [label="k"];
    s2 -> s2 [label="k"];
    s2 -> s3 [label="d"];
}
"""

HYPOTHESIS_DOT = """\
digraph H {
    __start0 [label="", shape=none];
    __start0 -> h0;
    h0 -> he [label="h/ok"];
    h0 -> he [label="k/err"];
    h0 -> he [label="d/err"];
    h0 -> he [label="c/err"];
    he -> he [label="h/err"];
    he -> he [label="k/err"];
    he -> he [label="d/err"];
    he -> he [label="c/err"];
}
"""


def toy_tls():
    from .serialization import parse_automaton_dot
    return parse_automaton_dot(TOY_TLS_DOT, "mealy")


def toy_reference(name: str):
    """One of "L0", "L1", "L2" over the toy alphabet."""
    from .serialization import parse_automaton_dot
    text = {"L0": REF_L0_DOT, "L1": REF_L1_DOT, "L2": REF_L2_DOT}[name]
    return parse_automaton_dot(text, "dfa", inputs=INPUTS)


def toy_hypothesis():
    from .serialization import parse_automaton_dot
    return parse_automaton_dot(HYPOTHESIS_DOT, "mealy")


def small_tree():
    """Observation tree with nodes q0..q5 numbered as node ids 0..5 and basis {q0, q1}.

    q0 -h/ok-> q1, q1 -h/err-> q2, q1 -k/ok-> q3, q3 -d/ok-> q4, q0 -d/err-> q5.
    """
    from .obstree import ObservationTree
    t = ObservationTree(INPUTS, ERROR)
    t.add_observation(("h",), ["ok"])
    t.add_observation(("h", "h"), ["ok", "err"])
    t.add_observation(("h", "k"), ["ok", "ok"])
    t.add_observation(("h", "k", "d"), ["ok", "ok", "ok"])
    t.add_observation(("d",), ["err"])
    t.promote(1)
    return t
