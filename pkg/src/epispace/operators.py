"""Belief change operators as total transition tables keyed by input model set."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ._text import directives, format_worlds, worlds_field
from .errors import FormatError
from .logic import FormulaLike, Signature, WorldSet, as_formula, dnf, models, to_text
from .space import EpistemicSpace, StateId, belief_index


@dataclass(frozen=True)
class SemanticOperator:
    """``table[s][mask]`` is the index of the state reached from ``s`` on input ``mask``."""

    space: EpistemicSpace
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(t) for t in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n, k = len(self.space), self.space.sig.n_masks
        if len(table) != n:
            raise ValueError(f"table has {len(table)} rows, space has {n} states")
        for s, row in enumerate(table):
            if len(row) != k:
                raise ValueError(f"row {s} has {len(row)} entries, expected {k}")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"row {s} maps to unknown state index {t}")

    @property
    def sig(self) -> Signature:
        return self.space.sig

    def target(self, s: int, mask: WorldSet) -> int:
        return self.table[s][mask]

    def belief(self, s: int, mask: WorldSet) -> WorldSet:
        """Model set of the result of changing state ``s`` by an input with models ``mask``."""
        return self.space.bel[self.table[s][mask]]

    def belief_table(self) -> tuple[tuple[WorldSet, ...], ...]:
        bel = self.space.bel
        return tuple(tuple(bel[t] for t in row) for row in self.table)

    def apply(self, state: StateId | str | int, f: FormulaLike) -> StateId:
        s = self.space.index(state)
        return self.space.state(self.table[s][models(as_formula(f, self.sig), self.sig)])


def apply(op: SemanticOperator, state: StateId | str | int, f: FormulaLike) -> StateId:
    return op.apply(state, f)


def same_up_to_beliefs(op1: SemanticOperator, op2: SemanticOperator) -> bool:
    """Tables agree once targets with identical belief sets are identified."""
    return op1.belief_table() == op2.belief_table()


def table_diff(op1: SemanticOperator, op2: SemanticOperator) -> list[tuple[int, WorldSet, int, int]]:
    """Rows ``(state, mask, target1, target2)`` whose targets differ in belief set."""
    out = []
    bel = op1.space.bel
    for s, (r1, r2) in enumerate(zip(op1.table, op2.table)):
        for mask, (t1, t2) in enumerate(zip(r1, r2)):
            if bel[t1] != op2.space.bel[t2]:
                out.append((s, mask, t1, t2))
    return out


def from_function(space: EpistemicSpace, fn) -> SemanticOperator:
    """Tabulate ``fn(state_index, mask) -> state_index`` over every input."""
    k = space.sig.n_masks
    return SemanticOperator(space, tuple(tuple(fn(s, m) for m in range(k)) for s in range(len(space))))


def identity_operator(space: EpistemicSpace) -> SemanticOperator:
    return from_function(space, lambda s, m: s)


# ---------------------------------------------------------------------------
# worked examples


def build_example1() -> tuple[EpistemicSpace, SemanticOperator]:
    """Two states over ``{a}``; accepts ``a``, collapses on ``!a`` and ``bot``."""
    sig = Signature(("a",))
    a, na = 1 << sig.parse_world("a"), 1 << sig.parse_world("-a")
    sp = EpistemicSpace(sig, ("PsiBot", "PsiA"), (0, a), "ex1")
    bot, psi_a = 0, 1

    def step(s: int, mask: WorldSet) -> int:
        if mask == a:
            return psi_a
        if mask in (na, 0):
            return bot
        return s

    return sp, from_function(sp, step)


EXAMPLE2_ORDER = ("ab", "-ab", "a-b", "-a-b")

EXAMPLE2_STATES = (
    ("PsiBot", ()),
    ("PsiAB", ("ab",)),
    ("PsiNAB", ("-ab",)),
    ("PsiANB", ("a-b",)),
    ("PsiNANB", ("-a-b",)),
    ("PsiNAB_ANB", ("-ab", "a-b")),
)


def example2_space() -> EpistemicSpace:
    sig = Signature(("a", "b"))
    return EpistemicSpace(sig, tuple(n for n, _ in EXAMPLE2_STATES),
                          tuple(sig.parse_worlds(ws) for _, ws in EXAMPLE2_STATES), "ex2")


# credible sets of the worked example; the -a-b state's set is {-ab, a-b, -a-b}
EXAMPLE2_CREDIBLE = {
    "PsiBot": (),
    "PsiAB": ("ab", "-ab", "a-b", "-a-b"),
    "PsiNAB": ("-ab",),
    "PsiANB": ("ab", "a-b"),
    "PsiNANB": ("-ab", "a-b", "-a-b"),
    "PsiNAB_ANB": ("-ab", "a-b", "-a-b"),
}


def build_example2() -> tuple[EpistemicSpace, SemanticOperator]:
    """Six-state example over ``{a, b}``, tabulated from its closed-form case split.

    Outside the first three cases the result is the state of the earliest
    credible input world in the linear order ``ab, -ab, a-b, -a-b``, or the
    unchanged state when the input has no credible world.
    """
    sp = example2_space()
    sig = sp.sig
    by_bel = belief_index(sp)
    rank = [sig.parse_world(w) for w in EXAMPLE2_ORDER]
    credible = [sig.parse_worlds(EXAMPLE2_CREDIBLE[n]) for n in sp.names]
    psi_ab, psi_nanb = sp.index("PsiAB"), sp.index("PsiNANB")
    pair = sig.parse_worlds(("-ab", "a-b"))

    def step(s: int, mask: WorldSet) -> int:
        if sp.bel[s] & mask:
            return by_bel[sp.bel[s] & mask]
        if mask == 0 and s == psi_ab:
            return sp.index("PsiBot")
        if s == psi_nanb and mask & pair == pair:
            return sp.index("PsiNAB_ANB")
        for w in rank:
            if (mask & credible[s]) >> w & 1:
                return by_bel[1 << w]
        return s

    return sp, from_function(sp, step)


def consistent_space() -> EpistemicSpace:
    """Three globally consistent states over ``{a}``: believing a, not a, and nothing."""
    sig = Signature(("a",))
    return EpistemicSpace(sig, ("PsiA", "PsiNA", "PsiTaut"),
                          (sig.parse_worlds(["a"]), sig.parse_worlds(["-a"]), sig.omega), "gc3")


def bottom_space() -> EpistemicSpace:
    """States over ``{a}`` believing bot, a, and not a."""
    sig = Signature(("a",))
    return EpistemicSpace(sig, ("PsiBot", "PsiA", "PsiNA"),
                          (0, sig.parse_worlds(["a"]), sig.parse_worlds(["-a"])), "bot3")


# ---------------------------------------------------------------------------
# DOT export

MAX_LABEL_INPUTS = 12


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', r"\"") + '"'


def edges(op: SemanticOperator) -> dict[tuple[int, int], list[WorldSet]]:
    """Inputs grouped by (source, target), in mask order."""
    out: dict[tuple[int, int], list[WorldSet]] = defaultdict(list)
    for s, row in enumerate(op.table):
        for mask, t in enumerate(row):
            out[(s, t)].append(mask)
    return dict(out)


def edge_label(sig: Signature, masks: Sequence[WorldSet]) -> str:
    shown = [to_text(dnf(m, sig)) for m in masks[:MAX_LABEL_INPUTS]]
    if len(masks) > MAX_LABEL_INPUTS:
        shown.append(f"... (+{len(masks) - MAX_LABEL_INPUTS})")
    return ", ".join(shown)


def to_dot(op: SemanticOperator) -> str:
    """Directed graph with one node per state; self-loops are drawn with a ``*`` label."""
    sp = op.space
    lines = [f"digraph {_quote(sp.name)} {{", "  node [shape=box];"]
    for i, n in enumerate(sp.names):
        lines.append(f"  {_quote(n)} [label={_quote(n + ' ' + sp.sig.format_set(sp.bel[i]))}];")
    for (s, t), masks in sorted(edges(op).items()):
        label = "*" if s == t else edge_label(sp.sig, masks)
        lines.append(f"  {_quote(sp.names[s])} -> {_quote(sp.names[t])} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# text format


def loads_operator(text: str, space: EpistemicSpace, path: str = "<string>") -> SemanticOperator:
    sig = space.sig
    k = sig.n_masks
    rows: list[list[int | None]] = [[None] * k for _ in space.names]
    seen_header = False
    for lineno, toks in directives(text):
        if toks[0] == "op":
            if len(toks) != 3 or toks[1] != "for":
                raise FormatError("expected 'op for <space-name>'", path, lineno, " ".join(toks))
            if toks[2] != space.name:
                raise FormatError(f"operator is for space {toks[2]!r}, not {space.name!r}", path, lineno, toks[2])
            seen_header = True
            continue
        if toks[0] != "row":
            raise FormatError("unknown directive", path, lineno, toks[0])
        if not seen_header:
            raise FormatError("'row' before 'op for' header", path, lineno, toks[0])
        if len(toks) < 5 or toks[2] != "input:" or "->" not in toks or toks.index("->") != len(toks) - 2:
            raise FormatError("expected 'row <state> input: <worlds> -> <state>'", path, lineno, " ".join(toks))
        try:
            s = space.index(toks[1])
        except KeyError:
            raise FormatError("unknown state", path, lineno, toks[1]) from None
        try:
            t = space.index(toks[-1])
        except KeyError:
            raise FormatError("unknown state", path, lineno, toks[-1]) from None
        mask = worlds_field(sig, toks[3:-2], path, lineno)
        if rows[s][mask] is not None:
            raise FormatError("duplicate row", path, lineno, f"{toks[1]} {' '.join(toks[3:-2])}")
        rows[s][mask] = t
    if not seen_header:
        raise FormatError("missing 'op for <space-name>' header", path)
    for s, row in enumerate(rows):
        for mask, t in enumerate(row):
            if t is None:
                raise FormatError(f"operator is not total: no row for state {space.names[s]} "
                                  f"on input {sig.format_set(mask)}", path)
    return SemanticOperator(space, tuple(tuple(r) for r in rows))


def load_operator(path: str | Path, space: EpistemicSpace) -> SemanticOperator:
    path = Path(path)
    return loads_operator(path.read_text(), space, str(path))


def dumps_operator(op: SemanticOperator) -> str:
    sp = op.space
    width = max(len(n) for n in sp.names)
    lines = [f"op for {sp.name}"]
    for s, row in enumerate(op.table):
        for mask, t in enumerate(row):
            inp = format_worlds(sp.sig, mask, "(empty)")
            lines.append(f"row {sp.names[s]:<{width}} input: {inp} -> {sp.names[t]}")
    return "\n".join(lines) + "\n"
