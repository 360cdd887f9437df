"""Total preorders, credibility-limited assignments, and the two conversions
between assignments and operators.

A total preorder is kept as an ordered partition of its domain (layer 0 is the
most preferred), which makes totality and transitivity hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from ._text import directives
from .errors import ConstraintViolation, DomainError, FormatError, NoSuchBeliefState, NotAPreorder
from .logic import Interpretation, Signature, WorldSet
from .operators import SemanticOperator
from .postulates import CheckResult, Verdict, Witness
from .space import EpistemicSpace, StateId, belief_index


def _bits(mask: int) -> list[int]:
    return [w for w in range(mask.bit_length()) if mask >> w & 1]


@dataclass(frozen=True)
class TotalPreorder:
    domain: WorldSet
    layers: tuple[WorldSet, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        seen = 0
        for layer in layers:
            if layer == 0:
                raise ValueError("preorder layers must be non-empty")
            if layer & seen:
                raise ValueError("preorder layers must be pairwise disjoint")
            seen |= layer
        if seen != self.domain:
            raise ValueError("preorder layers must cover the domain exactly")

    @classmethod
    def from_layers(cls, layers: Sequence[WorldSet]) -> "TotalPreorder":
        dom = 0
        for layer in layers:
            dom |= layer
        return cls(dom, tuple(layers))

    def layer_of(self, w: Interpretation) -> int:
        for i, layer in enumerate(self.layers):
            if layer >> w & 1:
                return i
        raise DomainError(f"world {w} is outside the preorder's domain")

    def leq(self, w1: Interpretation, w2: Interpretation) -> bool:
        return self.layer_of(w1) <= self.layer_of(w2)

    def equiv(self, w1: Interpretation, w2: Interpretation) -> bool:
        return self.layer_of(w1) == self.layer_of(w2)

    def less(self, w1: Interpretation, w2: Interpretation) -> bool:
        return self.layer_of(w1) < self.layer_of(w2)

    def relation(self) -> set[tuple[Interpretation, Interpretation]]:
        ws = _bits(self.domain)
        return {(x, y) for x in ws for y in ws if self.leq(x, y)}

    def is_total_preorder(self) -> bool:
        """Validate totality and transitivity of the induced relation."""
        rel = self.relation()
        ws = _bits(self.domain)
        total = all((x, y) in rel or (y, x) in rel for x in ws for y in ws)
        trans = all((x, z) in rel for (x, y) in rel for (y2, z) in rel if y == y2)
        return total and trans

    def min_elements(self, X: WorldSet) -> WorldSet:
        return min_elements(X, self)


def min_elements(X: WorldSet, order: TotalPreorder) -> WorldSet:
    """Minimal worlds of ``X``: its intersection with the lowest layer it meets."""
    if X & ~order.domain:
        raise DomainError("set is not contained in the preorder's domain")
    for layer in order.layers:
        if X & layer:
            return X & layer
    return 0


class Flag(str, Enum):
    """``BOT`` marks the inconsistent input as credible at a state."""

    TOP = "top"
    BOT = "bot"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StateAssignment:
    credible: WorldSet
    order: TotalPreorder
    b: Flag = Flag.TOP


@dataclass(frozen=True)
class Assignment:
    """Per-state credible set, preference order on it, and flag ``b``."""

    space: EpistemicSpace
    entries: tuple[StateAssignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) != len(self.space):
            raise ValueError("assignment must cover every state")

    def __getitem__(self, ref) -> StateAssignment:
        return self.entries[self.space.index(ref)]

    def validate(self) -> None:
        sp = self.space
        for i, e in enumerate(self.entries):
            if e.order.domain != e.credible:
                raise ConstraintViolation(f"{sp.names[i]}: preorder domain differs from the credible set")
            if sp.bel[i] & ~e.credible:
                raise ConstraintViolation(f"{sp.names[i]}: belief set is not contained in the credible set")
            if e.b is Flag.BOT and e.credible != sp.sig.omega:
                raise ConstraintViolation(f"{sp.names[i]}: b = bot requires the credible set to be all worlds")


def is_faithful(sp: EpistemicSpace, a: Assignment) -> CheckResult:
    """Models of each consistent state form exactly the lowest layer of its order."""
    a.validate()
    for i, e in enumerate(a.entries):
        bel = sp.bel[i]
        if bel == 0:
            continue
        st = StateId(i, sp.names[i])
        models = _bits(bel)
        # CLFA1: models pairwise equivalent
        for w1 in models:
            for w2 in models:
                if not e.order.equiv(w1, w2):
                    return CheckResult("faithful", Verdict.VIOLATED, Witness(st, (w1, w2), "worlds"), "CLFA1")
        # CLFA2: models strictly below every non-model
        for w1 in models:
            for w2 in _bits(e.credible & ~bel):
                if not e.order.less(w1, w2):
                    return CheckResult("faithful", Verdict.VIOLATED, Witness(st, (w1, w2), "worlds"), "CLFA2")
    return CheckResult("faithful", Verdict.SATISFIED)


def expected_belief(sp: EpistemicSpace, a: Assignment, s: int, A: WorldSet) -> WorldSet:
    """Model set prescribed for input ``A`` at state ``s`` by the revision-compatibility equation."""
    e = a.entries[s]
    credible_part = A & e.credible
    if credible_part:
        return min_elements(credible_part, e.order)
    if A == 0 and e.b is Flag.BOT:
        return 0
    return sp.bel[s]


def synthesize(sp: EpistemicSpace, a: Assignment) -> SemanticOperator:
    """Operator revision-compatible with ``a``, mapping into the lowest-index host state."""
    a.validate()
    hosts = belief_index(sp)
    k = sp.sig.n_masks
    table = []
    for s in range(len(sp)):
        row = []
        for A in range(k):
            target = expected_belief(sp, a, s, A)
            try:
                row.append(hosts[target])
            except KeyError:
                raise NoSuchBeliefState(
                    f"cannot host result of {sp.names[s]} on input {sp.sig.format_set(A)}: "
                    f"no state has belief set {sp.sig.format_set(target)}",
                    state=StateId(s, sp.names[s]), input_mask=A, target=target) from None
        table.append(tuple(row))
    return SemanticOperator(sp, tuple(table))


def is_compatible(sp: EpistemicSpace, a: Assignment, op: SemanticOperator) -> CheckResult:
    a.validate()
    for s in range(len(sp)):
        st = StateId(s, sp.names[s])
        for A in range(sp.sig.n_masks):
            if op.belief(s, A) != expected_belief(sp, a, s, A):
                return CheckResult("compatible", Verdict.VIOLATED, Witness(st, (A,)))
    return CheckResult("compatible", Verdict.SATISFIED)


def layers_from_relation(domain: WorldSet, leq) -> tuple[WorldSet, ...]:
    """Turn a binary relation on ``domain`` into layers, or raise NotAPreorder."""
    ws = _bits(domain)
    for x in ws:
        for y in ws:
            if not (leq(x, y) or leq(y, x)):
                raise NotAPreorder(f"worlds {x} and {y} are incomparable")
    for x in ws:
        for y in ws:
            if leq(x, y):
                for z in ws:
                    if leq(y, z) and not leq(x, z):
                        raise NotAPreorder(f"transitivity fails on worlds {x}, {y}, {z}")
    # in a total preorder, x sits in a lower layer the more worlds it is below
    up = {x: sum(leq(x, y) for y in ws) for x in ws}
    layers = []
    for count in sorted(set(up.values()), reverse=True):
        layers.append(sum(1 << x for x in ws if up[x] == count))
    return tuple(layers)


def extract(sp: EpistemicSpace, op: SemanticOperator) -> Assignment:
    """Read an assignment off an operator by probing it with one- and two-world inputs."""
    sig = sp.sig
    entries = []
    for s in range(len(sp)):
        name = sp.names[s]
        credible = 0
        for w in range(sig.n_worlds):
            if op.belief(s, 1 << w) == 1 << w:
                credible |= 1 << w
        b = Flag.BOT if sp.bel[s] != 0 and op.belief(s, 0) == 0 else Flag.TOP

        def leq(w1, w2, s=s):
            return bool(op.belief(s, (1 << w1) | (1 << w2)) >> w1 & 1)

        try:
            layers = layers_from_relation(credible, leq)
        except NotAPreorder as exc:
            raise NotAPreorder(f"{name}: {exc}") from None
        if sp.bel[s] & ~credible:
            raise ConstraintViolation(f"{name}: belief set {sig.format_set(sp.bel[s])} is not "
                                      f"contained in the credible set {sig.format_set(credible)}")
        if b is Flag.BOT and credible != sig.omega:
            raise ConstraintViolation(f"{name}: inconsistent input is credible but the credible "
                                      f"set {sig.format_set(credible)} is not all worlds")
        entries.append(StateAssignment(credible, TotalPreorder(credible, layers), b))
    return Assignment(sp, tuple(entries))


# ---------------------------------------------------------------------------
# text format


def _parse_layers(sig: Signature, toks: list[str], path: str, lineno: int) -> list[WorldSet]:
    text = " ".join(toks)
    layers = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "[":
            raise FormatError("expected '[' opening a layer", path, lineno, text[pos:].split()[0])
        end = text.find("]", pos)
        if end < 0:
            raise FormatError("unterminated layer", path, lineno, text[pos:])
        mask = 0
        for tok in text[pos + 1:end].split():
            try:
                mask |= 1 << sig.parse_world(tok)
            except ValueError as exc:
                raise FormatError(str(exc), path, lineno, tok) from None
        if mask == 0:
            raise FormatError("empty layer", path, lineno, text[pos:end + 1])
        layers.append(mask)
        pos = end + 1
    return layers


def loads_assignment(text: str, space: EpistemicSpace, path: str = "<string>") -> Assignment:
    sig = space.sig
    entries: list[StateAssignment | None] = [None] * len(space)
    seen_header = False
    for lineno, toks in directives(text):
        if toks[0] == "assign":
            if len(toks) != 3 or toks[1] != "for":
                raise FormatError("expected 'assign for <space-name>'", path, lineno, " ".join(toks))
            if toks[2] != space.name:
                raise FormatError(f"assignment is for space {toks[2]!r}, not {space.name!r}", path, lineno, toks[2])
            seen_header = True
            continue
        if toks[0] != "state":
            raise FormatError("unknown directive", path, lineno, toks[0])
        if not seen_header:
            raise FormatError("'state' before 'assign for' header", path, lineno, toks[0])
        if len(toks) < 6 or toks[2] != "b:" or toks[4] != "C:" or "order:" not in toks:
            raise FormatError("expected 'state <name> b: top|bot C: <worlds> order: [..] ...'",
                              path, lineno, " ".join(toks))
        try:
            s = space.index(toks[1])
        except KeyError:
            raise FormatError("unknown state", path, lineno, toks[1]) from None
        if entries[s] is not None:
            raise FormatError("duplicate state entry", path, lineno, toks[1])
        try:
            b = Flag(toks[3])
        except ValueError:
            raise FormatError("flag must be 'top' or 'bot'", path, lineno, toks[3]) from None
        k = toks.index("order:")
        credible = 0
        for tok in toks[5:k]:
            if tok == "(empty)":
                continue
            try:
                credible |= 1 << sig.parse_world(tok)
            except ValueError as exc:
                raise FormatError(str(exc), path, lineno, tok) from None
        layers = _parse_layers(sig, toks[k + 1:], path, lineno)
        try:
            order = TotalPreorder(credible, tuple(layers))
        except ValueError as exc:
            raise FormatError(f"layers do not partition C: {exc}", path, lineno, " ".join(toks[k + 1:])) from None
        entries[s] = StateAssignment(credible, order, b)
    if not seen_header:
        raise FormatError("missing 'assign for <space-name>' header", path)
    for s, e in enumerate(entries):
        if e is None:
            raise FormatError(f"no entry for state {space.names[s]}", path)
    a = Assignment(space, tuple(entries))
    try:
        a.validate()
    except ConstraintViolation as exc:
        raise FormatError(str(exc), path) from None
    return a


def load_assignment(path: str | Path, space: EpistemicSpace) -> Assignment:
    path = Path(path)
    return loads_assignment(path.read_text(), space, str(path))


def dumps_assignment(a: Assignment) -> str:
    sp = a.space
    sig = sp.sig
    width = max(len(n) for n in sp.names)
    lines = [f"assign for {sp.name}"]
    for n, e in zip(sp.names, a.entries):
        cred = " ".join(sig.format_worlds(e.credible)) or "(empty)"
        order = " ".join("[" + " ".join(sig.format_worlds(layer)) + "]" for layer in e.order.layers)
        lines.append(f"state {n:<{width}} b: {e.b.value}  C: {cred}  order: {order}".rstrip())
    return "\n".join(lines) + "\n"


def assignment_from_layers(sp: EpistemicSpace, spec: dict[str, tuple[str, Iterable[Iterable[str]]]]) -> Assignment:
    """Build an assignment from ``{state: (flag, [[world, ...], ...])}``; C is the union of the layers."""
    sig = sp.sig
    entries = []
    for n in sp.names:
        flag, layers = spec[n]
        masks = [sig.parse_worlds(layer) for layer in layers]
        order = TotalPreorder.from_layers(masks)
        entries.append(StateAssignment(order.domain, order, Flag(flag)))
    return Assignment(sp, tuple(entries))


def example2_assignment(sp: EpistemicSpace | None = None) -> Assignment:
    """Faithful assignment of the six-state example over ``{a, b}``.

    Each state's own models form layer 0; the other credible worlds follow in
    the linear order ``ab, -ab, a-b, -a-b``, except at ``PsiNANB`` where
    ``-ab`` and ``a-b`` share the second layer.
    """
    from .operators import EXAMPLE2_CREDIBLE, EXAMPLE2_ORDER, example2_space

    sp = sp or example2_space()
    sig = sp.sig
    rank = [sig.parse_world(w) for w in EXAMPLE2_ORDER]
    entries = []
    for name in EXAMPLE2_CREDIBLE:
        s = sp.index(name)
        bel = sp.bel[s]
        credible = sig.parse_worlds(EXAMPLE2_CREDIBLE[name])
        if name == "PsiNANB":
            layers = [bel, credible & ~bel]
        else:
            layers = [bel] if bel else []
            layers += [1 << w for w in rank if (credible & ~bel) >> w & 1]
        b = Flag.BOT if name == "PsiAB" else Flag.TOP
        entries.append((s, StateAssignment(credible, TotalPreorder(credible, tuple(layers)), b)))
    entries.sort()
    return Assignment(sp, tuple(e for _, e in entries))
