import pytest

from epispace.errors import FormatError, NoSuchBeliefState
from epispace.logic import Signature
from epispace.operators import example2_space
from epispace.space import (EpistemicSpace, belief_index, dumps_space, is_globally_consistent, load_space,
                            loads_space, resolve_state)


class TestGlobalConsistency:
    def test_example1_space(self, ex1):
        sp, _ = ex1
        assert not is_globally_consistent(sp)

    def test_three_consistent_states(self, gc3):
        assert is_globally_consistent(gc3)

    def test_example2_space(self):
        assert not is_globally_consistent(example2_space())


class TestResolve:
    def test_two_model_state(self, w):
        sp = example2_space()
        assert resolve_state(sp, w.set("-ab", "a-b")).name == "PsiNAB_ANB"

    def test_bottom(self):
        assert resolve_state(example2_space(), 0).name == "PsiBot"

    def test_missing(self, ex1):
        sp, _ = ex1
        with pytest.raises(NoSuchBeliefState):
            resolve_state(sp, sp.sig.parse_worlds(["-a"]))

    def test_lowest_index_wins(self):
        sig = Signature(("a",))
        sp = EpistemicSpace(sig, ("X", "Y", "Z"), (1, 2, 2))
        assert resolve_state(sp, 2).name == "Y"
        assert belief_index(sp) == {1: 0, 2: 1}


class TestSpaceObject:
    def test_lookup(self):
        sp = example2_space()
        assert sp.state("PsiAB").index == 1
        assert sp.index(3) == 3
        assert len(sp) == 6

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            EpistemicSpace(Signature(("a",)), ("X", "X"), (1, 2))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            EpistemicSpace(Signature(("a",)), ("X",), (4,))


class TestTextFormat:
    def test_round_trip(self):
        sp = example2_space()
        assert loads_space(dumps_space(sp)) == sp

    def test_name_from_file(self, tmp_path):
        p = tmp_path / "mine.space"
        p.write_text("sig a\nstate S models: a\n")
        assert load_space(p).name == "mine"

    def test_comments_and_empty(self):
        sp = loads_space("# header\nspace t\nsig a b  # two atoms\nstate B models: (empty)\nstate C models:\n")
        assert sp.bel == (0, 0)

    @pytest.mark.parametrize("text,line,token", [
        ("sig a\nstate S models: q\n", 2, "q"),
        ("state S models: a\n", 1, "state"),
        ("sig a\nstate S modls: a\n", 2, "modls:"),
        ("sig a\nfoo\n", 2, "foo"),
        ("sig a\nsig a\n", 2, "sig"),
        ("sig a\nstate S models: a\nstate S models: -a\n", 3, "S"),
    ])
    def test_errors_carry_location(self, text, line, token):
        with pytest.raises(FormatError) as exc:
            loads_space(text, "f.space")
        assert exc.value.path == "f.space"
        assert exc.value.line == line
        assert exc.value.token == token

    def test_no_states(self):
        with pytest.raises(FormatError):
            loads_space("sig a\n")
