import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epispace.errors import FormulaSyntaxError, SignatureError, UnknownAtomError
from epispace.logic import (And, Atom, Bottom, Iff, Implies, Not, Or, Signature, Top, dnf, entails, expand,
                            minterm, models, pair_formula, parse, to_text)

from conftest import ABC, formulas


def truth(f, env):
    """Reference evaluator over a name -> bool environment."""
    match f:
        case Atom(name=n):
            return env[n]
        case Top():
            return True
        case Bottom():
            return False
        case Not(operand=g):
            return not truth(g, env)
        case And(left=l, right=r):
            return truth(l, env) and truth(r, env)
        case Or(left=l, right=r):
            return truth(l, env) or truth(r, env)
        case Implies(left=l, right=r):
            return not truth(l, env) or truth(r, env)
        case Iff(left=l, right=r):
            return truth(l, env) == truth(r, env)
    raise TypeError(f)


def reference_models(f, sig):
    out = set()
    for values in itertools.product([False, True], repeat=len(sig.atoms)):
        env = dict(zip(sig.atoms, values))
        if truth(f, env):
            out.add("".join(a if v else "-" + a for a, v in env.items()))
    return out


class TestSignature:
    def test_world_count(self):
        assert Signature(("a",)).n_worlds == 2
        assert ABC.n_worlds == 8
        assert ABC.n_masks == 256

    @pytest.mark.parametrize("atoms", [(), ("a", "a"), ("a", "b", "c", "d", "e"), ("top",), ("1x",)])
    def test_rejects(self, atoms):
        with pytest.raises(SignatureError):
            Signature(atoms)

    def test_interpretation_text(self, ab):
        w = ab.parse_world("a-b")
        assert ab.format_world(w) == "a-b"
        assert {ab.format_world(x) for x in range(4)} == {"ab", "-ab", "a-b", "-a-b"}

    def test_bad_interpretation(self, ab):
        with pytest.raises(ValueError):
            ab.parse_world("b-a")
        with pytest.raises(ValueError):
            ab.parse_world("abx")


class TestParse:
    def test_and_not(self, ab):
        assert parse("a & !b", ab) == And(Atom("a"), Not(Atom("b")))

    def test_bot(self):
        assert parse("bot", Signature(("a",))) == Bottom()

    def test_iff_binds_loosest(self):
        assert parse("a <-> b -> c", ABC) == Iff(Atom("a"), Implies(Atom("b"), Atom("c")))

    def test_implies_right_assoc(self):
        assert parse("a -> b -> c", ABC) == Implies(Atom("a"), Implies(Atom("b"), Atom("c")))

    def test_constants_and_aliases(self, ab):
        assert parse("1 | 0", ab) == Or(Top(), Bottom())
        assert parse("~a", ab) == parse("!a", ab)
        assert parse("top", ab) == Top()

    def test_precedence_chain(self):
        f = parse("!a & b | c -> a <-> b", ABC)
        expect = Iff(Implies(Or(And(Not(Atom("a")), Atom("b")), Atom("c")), Atom("a")), Atom("b"))
        assert f == expect

    @pytest.mark.parametrize("text", ["", "a &", "(a", "a b", "a )", "&a", "a <- b", "a $ b"])
    def test_syntax_errors(self, ab, text):
        with pytest.raises(FormulaSyntaxError):
            parse(text, ab)

    def test_unknown_atom_has_offset(self, ab):
        with pytest.raises(UnknownAtomError) as exc:
            parse("a & c", ab)
        assert exc.value.atom == "c"
        assert exc.value.offset == 4


class TestModels:
    def test_bot(self):
        assert models(Bottom(), Signature(("a",))) == 0

    def test_single_row(self, ab, w):
        assert models(parse("a & !b", ab), ab) == w.set("a-b")

    def test_negated_iff(self, ab, w):
        assert models(parse("!a <-> b", ab), ab) == w.set("-ab", "a-b")

    def test_entails(self, ab, w):
        assert entails(0, ab.omega)
        assert entails(w.set("ab"), w.set("ab", "-ab"))
        assert not entails(ab.omega, w.set("ab"))

    def test_expand(self, ab, w):
        assert expand(ab.omega, w.set("ab")) == w.set("ab")
        assert expand(w.set("ab", "-ab"), w.set("-ab", "-a-b")) == w.set("-ab")
        assert expand(0, ab.omega) == 0

    def test_minterm(self, ab, w):
        f = minterm(w["a-b"], ab)
        assert f == And(Atom("a"), Not(Atom("b")))
        assert models(f, ab) == w.set("a-b")

    def test_pair_formula(self, ab, w):
        f = pair_formula(w["ab"], w["-a-b"], ab)
        assert models(f, ab) == w.set("ab", "-a-b")
        assert models(pair_formula(w["ab"], w["ab"], ab), ab) == w.set("ab")

    @pytest.mark.parametrize("mask", range(256))
    def test_dnf_exact(self, mask):
        assert models(dnf(mask, ABC), ABC) == mask

    def test_dnf_is_short(self, ab, w):
        assert dnf(w.set("ab", "a-b"), ab) == Atom("a")
        assert dnf(0, ab) == Bottom()
        assert dnf(ab.omega, ab) == Top()


def _names(sig, mask):
    return {sig.format_world(x) for x in range(sig.n_worlds) if mask >> x & 1}


class TestLaws:
    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_models_match_reference(self, f):
        assert _names(ABC, models(f, ABC)) == reference_models(f, ABC)

    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_round_trip(self, f):
        assert parse(to_text(f), ABC) == f

    @settings(max_examples=200, deadline=None)
    @given(formulas(), formulas())
    def test_homomorphism(self, f, g):
        mf, mg, om = models(f, ABC), models(g, ABC), ABC.omega
        assert models(Not(f), ABC) == om & ~mf
        assert models(And(f, g), ABC) == mf & mg
        assert models(Or(f, g), ABC) == mf | mg
        assert models(Implies(f, g), ABC) == (om & ~mf) | mg
        assert models(Iff(f, g), ABC) == om & ~(mf ^ mg)

    @given(st.integers(0, 255))
    def test_dnf_round_trips_through_text(self, mask):
        assert models(parse(to_text(dnf(mask, ABC)), ABC), ABC) == mask
