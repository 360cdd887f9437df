"""Propositional formulas over a small signature and their model-set semantics.

Interpretations are integers: bit ``i`` is set iff atom ``i`` of the signature
is true.  A world set is an integer bit mask over the ``2**n`` interpretations,
so set algebra on model sets is plain bitwise arithmetic.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import FormulaSyntaxError, SignatureError, UnknownAtomError

MAX_ATOMS = 4

WorldSet = int
Interpretation = int

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = {"top", "bot"}


@dataclass(frozen=True)
class Signature:
    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise SignatureError("signature must contain at least one atom")
        if len(atoms) > MAX_ATOMS:
            raise SignatureError(f"signature has {len(atoms)} atoms; at most {MAX_ATOMS} are supported")
        if len(set(atoms)) != len(atoms):
            raise SignatureError(f"duplicate atom names in {atoms}")
        for atom in atoms:
            if not _IDENT.fullmatch(atom) or atom in _RESERVED:
                raise SignatureError(f"invalid atom name {atom!r}")

    @property
    def n_worlds(self) -> int:
        return 1 << len(self.atoms)

    @property
    def n_masks(self) -> int:
        return 1 << self.n_worlds

    @property
    def omega(self) -> WorldSet:
        return (1 << self.n_worlds) - 1

    def worlds(self, mask: WorldSet | None = None) -> Iterator[Interpretation]:
        """Interpretations in ``mask`` (all of them by default), in display order."""
        for w in reversed(range(self.n_worlds)):
            if mask is None or mask >> w & 1:
                yield w

    def format_world(self, w: Interpretation) -> str:
        return "".join(a if w >> i & 1 else "-" + a for i, a in enumerate(self.atoms))

    def format_worlds(self, mask: WorldSet) -> list[str]:
        return [self.format_world(w) for w in self.worlds(mask)]

    def format_set(self, mask: WorldSet) -> str:
        return "{" + ", ".join(self.format_worlds(mask)) + "}"

    def parse_world(self, text: str) -> Interpretation:
        """Parse ``a-b``-style interpretation strings (atoms in signature order)."""
        pos, w = 0, 0
        for i, atom in enumerate(self.atoms):
            negated = text.startswith("-", pos)
            if negated:
                pos += 1
            if not text.startswith(atom, pos):
                raise ValueError(f"bad interpretation {text!r}: expected atom {atom!r} at offset {pos}")
            pos += len(atom)
            if not negated:
                w |= 1 << i
        if pos != len(text):
            raise ValueError(f"bad interpretation {text!r}: trailing characters at offset {pos}")
        return w

    def parse_worlds(self, tokens: Iterable[str]) -> WorldSet:
        mask = 0
        for tok in tokens:
            mask |= 1 << self.parse_world(tok)
        return mask


# ---------------------------------------------------------------------------
# Formula AST


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


# ---------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(r"(<->)|(->)|([!~&|()])|([A-Za-z_][A-Za-z0-9_]*)|([01])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        lexeme = m.group()
        if m.lastindex == 4:
            kind = "const" if lexeme in _RESERVED else "ident"
        elif m.lastindex == 5:
            kind = "const"
        else:
            kind = lexeme
        tokens.append((kind, lexeme, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    # precedence climbing: <-> (left) < -> (right) < | < & < unary
    def __init__(self, text: str, sig: Signature | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek()[0] == "<->":
            self.i += 1
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disj()
        if self.peek()[0] == "->":
            self.i += 1
            return Implies(f, self.implies())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, lexeme, offset = self.peek()
        if kind in ("!", "~"):
            self.i += 1
            return Not(self.unary())
        if kind == "(":
            self.i += 1
            f = self.iff()
            self.take(")")
            return f
        if kind == "const":
            self.i += 1
            return Top() if lexeme in ("top", "1") else Bottom()
        if kind == "ident":
            self.i += 1
            if self.sig is not None and lexeme not in self.sig.atoms:
                raise UnknownAtomError(lexeme, offset)
            return Atom(lexeme)
        what = "end of input" if kind == "eof" else repr(lexeme)
        raise FormulaSyntaxError(f"expected a formula, found {what}", offset)


def parse(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text`` into a formula, checking atoms against ``sig`` if given.

    Grammar: ``!``/``~`` negation, ``&``, ``|``, ``->`` (right associative),
    ``<->``; constants ``top``/``1`` and ``bot``/``0``.  Binding strength
    decreases in that order.
    """
    return _Parser(text, sig).parse()


# ---------------------------------------------------------------------------
# Printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Render ``f`` with the minimal parentheses that re-parse to the same tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Not):
        inner = to_text(f.operand)
        return "!" + (inner if _prec(f.operand) == 5 else f"({inner})")
    p = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    right_assoc = isinstance(f, Implies)
    if _prec(f.left) < p or (right_assoc and _prec(f.left) == p):
        left = f"({left})"
    if _prec(f.right) < p or (not right_assoc and _prec(f.right) == p):
        right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


# ---------------------------------------------------------------------------
# Semantics


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, (Top, Bottom)):
        return set()
    if isinstance(f, Not):
        return atoms_of(f.operand)
    return atoms_of(f.left) | atoms_of(f.right)


def evaluate(f: Formula, w: Interpretation, sig: Signature) -> bool:
    """Truth value of ``f`` under interpretation ``w``."""
    if isinstance(f, Atom):
        return bool(w >> sig.atoms.index(f.name) & 1)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.operand, w, sig)
    a = evaluate(f.left, w, sig)
    b = evaluate(f.right, w, sig)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Implies):
        return (not a) or b
    if isinstance(f, Iff):
        return a == b
    raise TypeError(f"not a formula: {f!r}")


def models(f: Formula, sig: Signature) -> WorldSet:
    """Model set of ``f``, computed row by row over the truth table."""
    unknown = atoms_of(f) - set(sig.atoms)
    if unknown:
        raise UnknownAtomError(sorted(unknown)[0])
    mask = 0
    for w in range(sig.n_worlds):
        if evaluate(f, w, sig):
            mask |= 1 << w
    return mask


def entails(a: WorldSet, b: WorldSet) -> bool:
    return a & ~b == 0


def expand(k: WorldSet, a: WorldSet) -> WorldSet:
    """Model set of the expansion ``K + alpha``."""
    return k & a


def minterm(w: Interpretation, sig: Signature) -> Formula:
    """Conjunction of literals whose only model is ``w``."""
    lits = [Atom(a) if w >> i & 1 else Not(Atom(a)) for i, a in enumerate(sig.atoms)]
    f = lits[0]
    for lit in lits[1:]:
        f = And(f, lit)
    return f


def pair_formula(w1: Interpretation, w2: Interpretation, sig: Signature) -> Formula:
    if w1 == w2:
        return minterm(w1, sig)
    return Or(minterm(w1, sig), minterm(w2, sig))


# ---------------------------------------------------------------------------
# Short representatives of world sets (used for diagram labels)


@lru_cache(maxsize=None)
def _cubes(n: int) -> tuple[tuple[int, int, int], ...]:
    """All cubes over n atoms as (care, value, worldmask) triples."""
    out = []
    for spec in itertools.product((None, 0, 1), repeat=n):
        care = sum(1 << i for i, s in enumerate(spec) if s is not None)
        value = sum(1 << i for i, s in enumerate(spec) if s == 1)
        wm = 0
        for w in range(1 << n):
            if w & care == value:
                wm |= 1 << w
        out.append((care, value, wm))
    return tuple(out)


def _cube_formula(care: int, value: int, sig: Signature) -> Formula:
    lits = [Atom(a) if value >> i & 1 else Not(Atom(a))
            for i, a in enumerate(sig.atoms) if care >> i & 1]
    if not lits:
        return Top()
    f = lits[0]
    for lit in lits[1:]:
        f = And(f, lit)
    return f


@lru_cache(maxsize=4096)
def _min_cover(n: int, mask: int) -> tuple[tuple[int, int], ...]:
    inside = [c for c in _cubes(n) if c[2] & ~mask == 0]
    primes = [c for c in inside if not any(d[2] != c[2] and c[2] & ~d[2] == 0 for d in inside)]
    primes.sort(key=lambda c: (-bin(c[2]).count("1"), c[0], c[1]))
    # exact search for small prime sets, greedy otherwise
    if len(primes) <= 16:
        for k in range(1, len(primes) + 1):
            best = None
            for combo in itertools.combinations(primes, k):
                cov = 0
                for c in combo:
                    cov |= c[2]
                if cov == mask:
                    cost = sum(bin(c[0]).count("1") for c in combo)
                    if best is None or cost < best[0]:
                        best = (cost, combo)
            if best is not None:
                return tuple((c[0], c[1]) for c in best[1])
    chosen, cov = [], 0
    while cov != mask:
        c = max(primes, key=lambda c: bin(c[2] & ~cov).count("1"))
        chosen.append(c)
        cov |= c[2]
    return tuple((c[0], c[1]) for c in chosen)


def dnf(mask: WorldSet, sig: Signature) -> Formula:
    """A minimal-size DNF formula whose model set is ``mask``."""
    if mask == 0:
        return Bottom()
    if mask == sig.omega:
        return Top()
    cubes = _min_cover(len(sig.atoms), mask)
    f = _cube_formula(*cubes[0], sig)
    for c in cubes[1:]:
        f = Or(f, _cube_formula(*c, sig))
    return f


FormulaLike = Union[Formula, str]


def as_formula(f: FormulaLike, sig: Signature) -> Formula:
    return parse(f, sig) if isinstance(f, str) else f
