import pytest
from hypothesis import strategies as st

from epispace import logic
from epispace.logic import And, Atom, Bottom, Iff, Implies, Not, Or, Signature, Top
from epispace.operators import build_example1, build_example2, bottom_space, consistent_space

AB = Signature(("a", "b"))
ABC = Signature(("a", "b", "c"))


def formulas(atoms=("a", "b", "c"), max_leaves=12):
    leaves = st.one_of(st.sampled_from([Atom(a) for a in atoms]), st.just(Top()), st.just(Bottom()))

    def extend(children):
        binary = st.sampled_from([And, Or, Implies, Iff])
        return st.one_of(
            st.builds(Not, children),
            st.builds(lambda op, l, r: op(l, r), binary, children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture(scope="session")
def ab():
    return AB


@pytest.fixture(scope="session")
def ex1():
    return build_example1()


@pytest.fixture(scope="session")
def ex2():
    return build_example2()


@pytest.fixture(scope="session")
def gc3():
    return consistent_space()


@pytest.fixture(scope="session")
def bot3():
    return bottom_space()


@pytest.fixture(scope="session")
def w(ab):
    """World lookup over {a, b}: w['a-b'] etc."""
    class _W:
        def __getitem__(self, text):
            return ab.parse_world(text)

        def set(self, *texts):
            return ab.parse_worlds(texts)
    return _W()
