"""Epistemic spaces: a finite set of states, each with a belief set.

Belief sets are stored as model sets.  Two states may share a belief set;
lookups by belief set resolve to the lowest-index state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ._text import directives, format_worlds, worlds_field
from .errors import FormatError, NoSuchBeliefState, SignatureError
from .logic import Signature, WorldSet


@dataclass(frozen=True)
class StateId:
    index: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class EpistemicSpace:
    sig: Signature
    names: tuple[str, ...]
    bel: tuple[WorldSet, ...]
    name: str = "space"
    _by_name: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names, bel = tuple(self.names), tuple(self.bel)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "bel", bel)
        if not names:
            raise ValueError("an epistemic space needs at least one state")
        if len(names) != len(bel):
            raise ValueError("belief map must cover every state")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate state names in {names}")
        for m in bel:
            if m & ~self.sig.omega:
                raise ValueError(f"belief set {m:#x} uses worlds outside the signature")
        object.__setattr__(self, "_by_name", {n: i for i, n in enumerate(names)})

    @property
    def states(self) -> list[StateId]:
        return [StateId(i, n) for i, n in enumerate(self.names)]

    def __len__(self) -> int:
        return len(self.names)

    def state(self, ref: StateId | str | int) -> StateId:
        """Look a state up by name, index or ``StateId``."""
        if isinstance(ref, StateId):
            return ref
        if isinstance(ref, int):
            return StateId(ref, self.names[ref])
        try:
            return StateId(self._by_name[ref], ref)
        except KeyError:
            raise KeyError(f"no state named {ref!r} in {self.name}") from None

    def index(self, ref: StateId | str | int) -> int:
        return self.state(ref).index

    def models(self, ref: StateId | str | int) -> WorldSet:
        return self.bel[self.index(ref)]


def is_globally_consistent(sp: EpistemicSpace) -> bool:
    return all(m != 0 for m in sp.bel)


def resolve_state(sp: EpistemicSpace, target: WorldSet) -> StateId:
    """Lowest-index state whose belief set is ``target``."""
    for i, m in enumerate(sp.bel):
        if m == target:
            return StateId(i, sp.names[i])
    raise NoSuchBeliefState(
        f"no state of {sp.name} has belief set {sp.sig.format_set(target)}", target=target)


def belief_index(sp: EpistemicSpace) -> dict[WorldSet, int]:
    """Map each occurring belief set to its lowest-index state."""
    out: dict[WorldSet, int] = {}
    for i, m in enumerate(sp.bel):
        out.setdefault(m, i)
    return out


# ---------------------------------------------------------------------------
# text format


def loads_space(text: str, path: str = "<string>", name: str | None = None) -> EpistemicSpace:
    sig = None
    names: list[str] = []
    bel: list[WorldSet] = []
    for lineno, toks in directives(text):
        head = toks[0]
        if head == "space":
            if len(toks) != 2:
                raise FormatError("expected 'space <name>'", path, lineno, " ".join(toks))
            name = toks[1]
        elif head == "sig":
            if sig is not None:
                raise FormatError("duplicate 'sig' directive", path, lineno, head)
            try:
                sig = Signature(tuple(toks[1:]))
            except SignatureError as exc:
                raise FormatError(str(exc), path, lineno, " ".join(toks[1:])) from None
        elif head == "state":
            if sig is None:
                raise FormatError("'state' before 'sig'", path, lineno, head)
            if len(toks) < 3 or toks[2] != "models:":
                raise FormatError("expected 'state <name> models: <worlds>'", path, lineno,
                                  toks[2] if len(toks) > 2 else head)
            if toks[1] in names:
                raise FormatError("duplicate state name", path, lineno, toks[1])
            names.append(toks[1])
            bel.append(worlds_field(sig, toks[3:], path, lineno))
        else:
            raise FormatError("unknown directive", path, lineno, head)
    if sig is None:
        raise FormatError("missing 'sig' directive", path)
    if not names:
        raise FormatError("space declares no states", path)
    return EpistemicSpace(sig, tuple(names), tuple(bel), name or Path(path).stem or "space")


def load_space(path: str | Path) -> EpistemicSpace:
    path = Path(path)
    return loads_space(path.read_text(), str(path), None)


def dumps_space(sp: EpistemicSpace) -> str:
    lines = [f"space {sp.name}", "sig " + " ".join(sp.sig.atoms)]
    width = max(len(n) for n in sp.names)
    for n, m in zip(sp.names, sp.bel):
        lines.append(f"state {n:<{width}} models: {format_worlds(sp.sig, m)}".rstrip())
    return "\n".join(lines) + "\n"
