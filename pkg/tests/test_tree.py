import pytest
from hypothesis import given, strategies as st

from helpers import BITS, all_prefixes, binary_trees, padded
from streamtrees import streams
from streamtrees.combinators import intro_function, intro_tree, intro_tree_variant
from streamtrees.tree import (
    FuelExhausted, Rd, Ret, agree_on, depth, eat, fold, leaves, materialize, rd, ret,
    show, tbind, tmap,
)


def test_constructors():
    match ret(42):
        case Ret(v):
            assert v == 42
    t = rd(lambda a: ret(a))
    assert t.branch(3) == ret(3)


def test_rd_branch_not_called_at_construction():
    def boom(a):
        raise AssertionError("branch evaluated eagerly")

    assert isinstance(rd(boom), Rd)


def test_intro_tree_shape():
    t0 = intro_tree()
    assert depth(t0, BITS) == 3
    assert leaves(t0, BITS) == [0, 1, 0, 1]
    assert depth(intro_tree_variant(), BITS) == 4


def test_fold_on_leaf_ignores_algebra():
    assert fold(lambda b: b, None, ret(9)) == 9


def test_fold_is_the_unique_morphism_on_small_trees():
    # a hand-written recursion satisfying the two fold equations
    def count_rd(t):
        return 0 if type(t) is Ret else 1 + count_rd(t.branch(0)) + count_rd(t.branch(1))

    t = intro_tree_variant()
    assert fold(lambda _: 0, lambda sub: 1 + sub(0) + sub(1), t) == count_rd(t)


def test_eat_examples():
    t0 = intro_tree()
    s = streams.zeros
    value, rest = eat(ret(5), s)
    assert value == 5 and rest is s
    assert eat(t0, padded([1, 1, 0])).value == 0
    value, rest = eat(t0, streams.prepend([1, 0, 9, 7], streams.zeros))
    assert value == 1
    assert streams.take_prefix(rest, 2) == [9, 7]


def test_eat_intro_figure_all_prefixes():
    for bits in all_prefixes(3):
        assert eat(intro_tree(), padded(bits)).value == intro_function(padded(bits))
    assert [eat(intro_tree(), padded(b)).value for b in ([0], [1, 0], [1, 1, 0], [1, 1, 1])] == [0, 1, 0, 1]


def test_intro_trees_agree_extensionally():
    for bits in all_prefixes(4):
        assert eat(intro_tree(), padded(bits)).value == eat(intro_tree_variant(), padded(bits)).value


def test_eat_consumes_path_length():
    t0 = intro_tree()
    for bits, used in [([0], 1), ([1, 0], 2), ([1, 1, 0], 3), ([1, 1, 1], 3)]:
        s = padded(bits, pad=5)
        _, rest = eat(t0, s)
        assert rest.head() == streams.drop(s, used).head()


def test_tmap_and_tbind_examples():
    assert tmap(lambda x: x + 1, ret(1)) == ret(2)
    k = lambda b: rd(lambda a: ret(a + b))
    assert tbind(ret(10), k) is not None and eat(tbind(ret(10), k), streams.repeat(3)).value == 13
    negated = tbind(intro_tree(), lambda b: ret(1 - b))
    assert eat(negated, padded([1, 1, 0])).value == 1


def test_fuel_exhaustion():
    def forever():
        return Rd(lambda a: forever())

    with pytest.raises(FuelExhausted):
        eat(forever(), streams.zeros, fuel=100)
    with pytest.raises(FuelExhausted):
        fold(lambda b: b, lambda sub: sub(0), forever(), fuel=100)


def test_end_of_source_propagates():
    with pytest.raises(streams.EndOfSource):
        eat(intro_tree(), streams.from_iterator(iter([1, 1])))


def test_show_and_materialize():
    t0 = intro_tree()
    assert show(t0, BITS) == "Rd(0:Ret(0), 1:Rd(0:Ret(1), 1:Rd(0:Ret(0), 1:Ret(1))))"
    assert show(t0, BITS, max_depth=1) == "Rd(0:Ret(0), 1:Rd(...))"
    table = materialize(t0, BITS)
    assert show(table, BITS) == show(t0, BITS)
    with pytest.raises(KeyError):
        table.branch(2)


def test_branches_are_pure():
    # evaluating a branch twice gives structurally the same subtree
    t0 = intro_tree()
    assert show(t0.branch(1), BITS) == show(t0.branch(1), BITS)


@given(binary_trees())
def test_tmap_preserves_shape(t):
    mapped = tmap(lambda b: b * 100, t)
    assert depth(mapped, BITS) == depth(t, BITS)
    assert len(leaves(mapped, BITS)) == len(leaves(t, BITS))
    assert leaves(mapped, BITS) == [b * 100 for b in leaves(t, BITS)]


def _same_function(t1, t2, n=4):
    return all(eat(t1, padded(bits)).value == eat(t2, padded(bits)).value for bits in all_prefixes(n))


@given(binary_trees(max_leaves=6), st.integers(0, 5))
def test_monad_laws(t, b):
    k = lambda x: Rd(lambda a: Ret(x + a))
    h = lambda x: Ret(x * 2)
    # left unit, right unit, associativity
    assert _same_function(tbind(Ret(b), k), k(b))
    assert _same_function(tbind(t, Ret), t)
    assert _same_function(tbind(tbind(t, k), h), tbind(t, lambda x: tbind(k(x), h)))


@given(binary_trees(), st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_eat_is_deterministic(t, bits):
    s = padded(bits)
    v1, r1 = eat(t, s)
    v2, r2 = eat(t, s)
    assert v1 == v2 and streams.take_prefix(r1, 4) == streams.take_prefix(r2, 4)


@given(binary_trees())
def test_agree_on_reflexive(t):
    assert agree_on(t, t, BITS, 10)
    assert agree_on(t, tmap(lambda b: b, t), BITS, 10)
