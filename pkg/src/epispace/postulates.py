"""Postulate checkers with counterexample witnesses.

Every postulate is checked on model sets.  Writing ``M(s, A)`` for the model
set reached from state ``s`` on an input with models ``A``:

====================  ==========================================================
R1                    M(s,A) <= A
R2 / CL2 / ECL2       A & bel(s) != 0  implies  M(s,A) == A & bel(s)
R3                    A != 0  implies  M(s,A) != 0
R4 / CL4 / ECL5       holds by representation (inputs are model sets)
R5                    M(s,A) & B  <=  M(s, A&B)
R6                    M(s,A) & B != 0  implies  M(s, A&B) <= M(s,A) & B
CL1 / ECL1            M(s,A) <= A  or  M(s,A) == bel(s)
CL3                   M(s,A) != 0
CL3wcp / ECL3         M(s,A) == 0  implies  bel(s) == 0 or A == 0
WCP                   bel(s) != 0 and A != 0  implies  M(s,A) != 0
CL3u / ECL4           M(s,A) != 0 and A <= B  implies  M(s,B) != 0
CL5 / ECL6            M(s,A) <= A and A <= B  implies  M(s,B) <= B
CL6 / ECL7            M(s,A|B) in {M(s,A), M(s,B), M(s,A) | M(s,B)}
====================  ==========================================================

Intersection of belief sets is union of model sets, hence the last row.

Counterexamples are searched in a fixed order: states with consistent beliefs
before inconsistent ones, consistent inputs before the empty input, and by
index and mask value within each group.  Violations that are forced by an
inconsistent prior or an inconsistent input are therefore only reported
when nothing more informative exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

from .errors import ScaleExceeded
from .logic import Signature, WorldSet
from .operators import SemanticOperator
from .space import StateId

DEFAULT_PAIR_CAP = 3


class PostulateId(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    CL1 = "CL1"
    CL2 = "CL2"
    CL3 = "CL3"
    CL4 = "CL4"
    CL5 = "CL5"
    CL6 = "CL6"
    ECL1 = "ECL1"
    ECL2 = "ECL2"
    ECL3 = "ECL3"
    ECL4 = "ECL4"
    ECL5 = "ECL5"
    ECL6 = "ECL6"
    ECL7 = "ECL7"
    WCP = "WCP"
    CL3wcp = "CL3wcp"
    CL3u = "CL3u"

    def __str__(self) -> str:
        return self.value


P = PostulateId

AGM = (P.R1, P.R2, P.R3, P.R4, P.R5, P.R6)
CL = (P.CL1, P.CL2, P.CL3, P.CL4, P.CL5, P.CL6)
ECL = (P.ECL1, P.ECL2, P.ECL3, P.ECL4, P.ECL5, P.ECL6, P.ECL7)
ALL = tuple(PostulateId)


class Verdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    BY_REPRESENTATION = "holds_by_representation"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Witness:
    """A state together with the input model sets (or worlds) that break a property."""

    state: StateId
    values: tuple[int, ...]
    kind: str = "inputs"

    def to_dict(self, sig: Signature) -> dict:
        if self.kind == "worlds":
            vals = [sig.format_world(w) for w in self.values]
        else:
            vals = [sig.format_worlds(m) for m in self.values]
        return {"state": self.state.name, self.kind: vals}

    def describe(self, sig: Signature) -> str:
        if self.kind == "worlds":
            vals = ", ".join(sig.format_world(w) for w in self.values)
        else:
            vals = ", ".join(sig.format_set(m) for m in self.values)
        return f"({self.state.name}, {vals})"


@dataclass(frozen=True)
class CheckResult:
    postulate: str
    verdict: Verdict
    witness: Witness | None = None
    note: str = ""

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict is Verdict.VIOLATED):
            raise ValueError("a witness is present exactly when the verdict is 'violated'")

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.VIOLATED

    def to_dict(self, sig: Signature) -> dict:
        d = {"postulate": str(self.postulate), "verdict": self.verdict.value,
             "witness": self.witness.to_dict(sig) if self.witness else None}
        if self.note:
            d["note"] = self.note
        return d

    def describe(self, sig: Signature) -> str:
        line = f"{self.postulate}: {self.verdict.value}"
        if self.witness is not None:
            line += f" at {self.witness.describe(sig)}"
        if self.note:
            line += f" [{self.note}]"
        return line


@dataclass(frozen=True)
class ClassMembership:
    in_AGMRev: bool
    in_CLRev: bool
    in_ECLRev: bool

    def to_dict(self) -> dict:
        return {"in_AGMRev": self.in_AGMRev, "in_CLRev": self.in_CLRev, "in_ECLRev": self.in_ECLRev}


# ---------------------------------------------------------------------------
# single instances

Row = tuple  # belief row of one state: mask -> model set

_Single = Callable[[Row, WorldSet, WorldSet], bool]
_Pair = Callable[[Row, WorldSet, WorldSet, WorldSet], bool]


def _r1(M, b, A):
    return M[A] & ~A == 0


def _r2(M, b, A):
    return A & b == 0 or M[A] == A & b


def _r3(M, b, A):
    return A == 0 or M[A] != 0


def _cl1(M, b, A):
    return M[A] & ~A == 0 or M[A] == b


def _cl3(M, b, A):
    return M[A] != 0


def _cl3wcp(M, b, A):
    return M[A] != 0 or b == 0 or A == 0


def _wcp(M, b, A):
    return not (b != 0 and A != 0) or M[A] != 0


def _r5(M, b, A, B):
    return M[A] & B & ~M[A & B] == 0


def _r6(M, b, A, B):
    x = M[A] & B
    return x == 0 or M[A & B] & ~x == 0


def _cl3u(M, b, A, B):
    return M[A] == 0 or A & ~B != 0 or M[B] != 0


def _cl5(M, b, A, B):
    return M[A] & ~A != 0 or A & ~B != 0 or M[B] & ~B == 0


def _cl6(M, b, A, B):
    return M[A | B] in (M[A], M[B], M[A] | M[B])


SINGLE: dict[PostulateId, _Single] = {
    P.R1: _r1, P.R2: _r2, P.R3: _r3,
    P.CL1: _cl1, P.CL2: _r2, P.CL3: _cl3,
    P.ECL1: _cl1, P.ECL2: _r2, P.ECL3: _cl3wcp,
    P.WCP: _wcp, P.CL3wcp: _cl3wcp,
}

PAIR: dict[PostulateId, _Pair] = {
    P.R5: _r5, P.R6: _r6,
    P.CL5: _cl5, P.CL6: _cl6,
    P.ECL4: _cl3u, P.ECL6: _cl5, P.ECL7: _cl6,
    P.CL3u: _cl3u,
}

BY_REPRESENTATION = frozenset({P.R4, P.CL4, P.ECL5})


def holds_at(op: SemanticOperator, p: PostulateId | str, state: int, *masks: WorldSet) -> bool:
    """Evaluate postulate ``p`` on one instance (used to re-check witnesses)."""
    p = PostulateId(p)
    if p in BY_REPRESENTATION:
        return True
    row = op.belief_table()[state]
    b = op.space.bel[state]
    fn = SINGLE.get(p) or PAIR[p]
    return fn(row, b, *masks)


def state_order(op: SemanticOperator) -> list[int]:
    bel = op.space.bel
    return sorted(range(len(bel)), key=lambda i: (bel[i] == 0, i))


def mask_order(n_masks: int) -> list[int]:
    return list(range(1, n_masks)) + [0]


def violations(op: SemanticOperator, p: PostulateId | str,
               pair_cap: int = DEFAULT_PAIR_CAP) -> Iterator[Witness]:
    """All violating instances of ``p``, in witness order."""
    p = PostulateId(p)
    if p in BY_REPRESENTATION:
        return
    sp = op.space
    if p in PAIR and len(sp.sig.atoms) > pair_cap:
        raise ScaleExceeded(f"{p} quantifies over pairs of inputs; signature has "
                            f"{len(sp.sig.atoms)} atoms, pair checks are capped at {pair_cap}")
    bt = op.belief_table()
    masks = mask_order(sp.sig.n_masks)
    for s in state_order(op):
        row, b = bt[s], sp.bel[s]
        st = StateId(s, sp.names[s])
        if p in SINGLE:
            fn = SINGLE[p]
            for A in masks:
                if not fn(row, b, A):
                    yield Witness(st, (A,))
        else:
            fn = PAIR[p]
            for A in masks:
                for B in masks:
                    if not fn(row, b, A, B):
                        yield Witness(st, (A, B))


def check(op: SemanticOperator, p: PostulateId | str, pair_cap: int = DEFAULT_PAIR_CAP) -> CheckResult:
    p = PostulateId(p)
    if not 1 <= pair_cap:
        raise ValueError(f"pair_cap must be positive, got {pair_cap}")
    if p in BY_REPRESENTATION:
        return CheckResult(p.value, Verdict.BY_REPRESENTATION,
                           note="inputs are canonical model sets, so equivalent inputs coincide")
    for w in violations(op, p, pair_cap):
        return CheckResult(p.value, Verdict.VIOLATED, w)
    return CheckResult(p.value, Verdict.SATISFIED)


def check_all(op: SemanticOperator, postulates: Iterable[PostulateId | str] = ALL,
              pair_cap: int = DEFAULT_PAIR_CAP) -> list[CheckResult]:
    return [check(op, p, pair_cap) for p in postulates]


def satisfies(op: SemanticOperator, postulates: Iterable[PostulateId | str],
              pair_cap: int = DEFAULT_PAIR_CAP) -> bool:
    return all(check(op, p, pair_cap).ok for p in postulates)


def classify(op: SemanticOperator, pair_cap: int = DEFAULT_PAIR_CAP) -> ClassMembership:
    return ClassMembership(
        in_AGMRev=satisfies(op, AGM, pair_cap),
        in_CLRev=satisfies(op, CL, pair_cap),
        in_ECLRev=satisfies(op, ECL, pair_cap),
    )
