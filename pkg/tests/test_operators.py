import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epispace.errors import FormatError, UnknownAtomError
from epispace.logic import models, parse
from epispace.operators import (SemanticOperator, apply, dumps_operator, edges, from_function,
                                identity_operator, loads_operator, same_up_to_beliefs, table_diff, to_dot)

from conftest import formulas

# Non-self edges of the six-state example, read off its diagram.
FIG2_EDGES = {
    ("PsiAB", "PsiBot"), ("PsiAB", "PsiANB"), ("PsiAB", "PsiNAB"), ("PsiAB", "PsiNANB"),
    ("PsiNANB", "PsiNAB"), ("PsiNANB", "PsiANB"), ("PsiNANB", "PsiNAB_ANB"),
    ("PsiANB", "PsiAB"),
    ("PsiNAB_ANB", "PsiNANB"), ("PsiNAB_ANB", "PsiNAB"), ("PsiNAB_ANB", "PsiANB"),
}

# Edge labels from the same diagram.  Two labels are left out because they
# contradict the operator's first case: "!a & !b" on PsiNANB -> PsiNAB and
# "!a <-> b" on PsiANB -> PsiAB both share a model with the source state.
FIG2_LABELS = [
    ("PsiAB", "PsiANB", ["a & !b", "!b"]),
    ("PsiAB", "PsiNAB", ["!a & b", "!a <-> b", "!a", "!a | !b"]),
    ("PsiAB", "PsiNANB", ["!a & !b"]),
    ("PsiAB", "PsiBot", ["bot"]),
    ("PsiNANB", "PsiNAB", ["b"]),
    ("PsiNANB", "PsiANB", ["a & !b", "a"]),
    ("PsiNANB", "PsiNAB_ANB", ["!a <-> b"]),
    ("PsiANB", "PsiAB", ["a & b", "b", "!a | b"]),
    ("PsiNAB_ANB", "PsiNANB", ["!a & !b", "a <-> b"]),
    ("PsiNAB_ANB", "PsiNAB", ["!a & b", "!a", "b", "!a | b"]),
    ("PsiNAB_ANB", "PsiANB", ["a & !b", "a", "!b", "a | !b"]),
]


def edge_names(op):
    sp = op.space
    return {(sp.names[s], sp.names[t]) for (s, t) in edges(op) if s != t}


class TestExample1:
    def test_apply(self, ex1):
        _, op = ex1
        assert apply(op, "PsiBot", "a").name == "PsiA"
        assert apply(op, "PsiBot", "top").name == "PsiBot"
        assert apply(op, "PsiA", "bot").name == "PsiBot"
        assert apply(op, "PsiA", "!a").name == "PsiBot"

    def test_beliefs_of_space(self, ex1):
        sp, _ = ex1
        assert sp.bel == (0, sp.sig.parse_worlds(["a"]))

    def test_dot(self, ex1):
        _, op = ex1
        dot = to_dot(op)
        assert dot.count("[label=\"*\"]") == 2
        m = re.search(r'"PsiA" -> "PsiBot" \[label="([^"]*)"\]', dot)
        assert m is not None
        labels = [models(parse(x, op.sig), op.sig) for x in m.group(1).split(", ")]
        assert sorted(labels) == [0, op.sig.parse_worlds(["-a"])]
        assert edge_names(op) == {("PsiA", "PsiBot"), ("PsiBot", "PsiA")}


class TestExample2:
    def test_apply(self, ex2):
        _, op = ex2
        assert op.apply("PsiNANB", "a").name == "PsiANB"
        assert op.apply("PsiAB", "bot").name == "PsiBot"
        assert op.apply("PsiNANB", "!a <-> b").name == "PsiNAB_ANB"
        assert op.apply("PsiANB", "b").name == "PsiAB"
        assert op.apply("PsiNAB", "a").name == "PsiNAB"

    @pytest.mark.parametrize("src,dst,labels", FIG2_LABELS)
    def test_diagram_labels(self, ex2, src, dst, labels):
        _, op = ex2
        for text in labels:
            assert op.apply(src, text).name == dst, text

    def test_edge_relation(self, ex2):
        _, op = ex2
        assert edge_names(op) == FIG2_EDGES
        loops = {op.space.names[s] for (s, t) in edges(op) if s == t}
        assert loops == set(op.space.names)

    def test_dot_shape(self, ex2):
        _, op = ex2
        dot = to_dot(op)
        assert dot.startswith('digraph "ex2" {')
        assert dot.count("->") == len(FIG2_EDGES) + 6

    def test_unknown_atom(self, ex2):
        _, op = ex2
        with pytest.raises(UnknownAtomError):
            op.apply("PsiAB", "c")

    @settings(max_examples=200, deadline=None)
    @given(formulas(("a", "b")), st.integers(0, 5))
    def test_syntax_independent(self, ex2, f, s):
        _, op = ex2
        assert op.apply(s, f).index == op.target(s, models(f, op.sig))


class TestTable:
    def test_rejects_partial(self, ex1):
        sp, _ = ex1
        with pytest.raises(ValueError):
            SemanticOperator(sp, ((0, 0, 0), (0, 0, 0, 0)))

    def test_rejects_bad_target(self, ex1):
        sp, _ = ex1
        with pytest.raises(ValueError):
            SemanticOperator(sp, ((0, 0, 0, 2), (0, 0, 0, 0)))

    def test_identity_dot(self, ex2):
        sp, _ = ex2
        dot = to_dot(identity_operator(sp))
        labels = re.findall(r'-> "[^"]+" \[label="([^"]*)"\]', dot)
        assert labels == ["*"] * 6

    def test_same_up_to_beliefs(self, ex1):
        sp, op = ex1
        from epispace.space import EpistemicSpace
        twin = EpistemicSpace(sp.sig, ("PsiBot", "PsiA", "PsiA2"), sp.bel + (sp.bel[1],))
        a = from_function(twin, lambda s, m: op.target(min(s, 1), m))
        b = from_function(twin, lambda s, m: 2 if op.target(min(s, 1), m) == 1 else 0)
        assert same_up_to_beliefs(a, b)
        assert table_diff(a, b) == []
        c = identity_operator(twin)
        assert not same_up_to_beliefs(a, c)
        assert table_diff(a, c)


class TestTextFormat:
    def test_round_trip(self, ex1, ex2):
        for sp, op in (ex1, ex2):
            assert loads_operator(dumps_operator(op), sp) == op

    def test_listing_shape(self, ex1):
        _, op = ex1
        lines = dumps_operator(op).splitlines()
        assert lines[0] == "op for ex1"
        assert "row PsiA   input: -a -> PsiBot" in lines
        assert "row PsiA   input: (empty) -> PsiBot" in lines

    def test_rows_in_any_order(self, ex1):
        sp, op = ex1
        lines = dumps_operator(op).splitlines()
        assert loads_operator("\n".join([lines[0]] + lines[:0:-1]), sp) == op

    def test_wrong_space(self, ex1):
        sp, op = ex1
        with pytest.raises(FormatError) as exc:
            loads_operator(dumps_operator(op).replace("op for ex1", "op for other"), sp)
        assert exc.value.line == 1

    def test_not_total(self, ex1):
        sp, op = ex1
        text = "\n".join(dumps_operator(op).splitlines()[:-1])
        with pytest.raises(FormatError, match="not total"):
            loads_operator(text, sp)

    def test_duplicate_row(self, ex1):
        sp, op = ex1
        text = dumps_operator(op) + "row PsiA input: a -> PsiA\n"
        with pytest.raises(FormatError, match="duplicate") as exc:
            loads_operator(text, sp)
        assert exc.value.line == 10

    @pytest.mark.parametrize("row,token", [
        ("row Nope input: a -> PsiA", "Nope"),
        ("row PsiA input: a -> Nope", "Nope"),
        ("row PsiA input: q -> PsiA", "q"),
    ])
    def test_bad_rows(self, ex1, row, token):
        sp, op = ex1
        with pytest.raises(FormatError) as exc:
            loads_operator("op for ex1\n" + row + "\n", sp)
        assert exc.value.line == 2
        assert exc.value.token == token
