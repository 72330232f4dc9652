import pytest

from helpers import dup_oracle, nat_from, pairwise_oracle, seeded_bytes, window_oracle
from streamtrees import streams
from streamtrees.combinators import (
    BadArguments, UnknownProcessor, build, generator, lookup, registry, sample_instances,
    stream_function_suite, discrete_function_suite,
)
from streamtrees.harness import agree, check_productivity, random_stream
from streamtrees.processor import eat_inf
from streamtrees.represent import rep_inf
from streamtrees.streams import take_prefix
from streamtrees.tree import Rd, Ret, fold, show, tmap


def run(name, xs, n, *args):
    return take_prefix(eat_inf(build(name, *args), streams.prepend(xs, streams.zeros)), n)


def test_registry_vocabulary():
    names = {e.name for e in registry()}
    assert {"id", "dup", "incr", "negate", "parity", "drop_every", "window_sum",
            "pairwise_sum", "delay", "counter", "const"} <= names
    with pytest.raises(UnknownProcessor):
        lookup("filter")


def test_registry_examples():
    s = random_stream(4)
    assert agree(eat_inf(lookup("id")(), s), s, 50).ok
    assert run("dup", [1, 2, 3], 6) == dup_oracle([1, 2, 3])
    assert run("window_sum", [1, 2, 3, 4], 3, 2) == window_oracle([1, 2, 3, 4], 2) == [3, 5, 7]


def test_each_processor_against_oracle():
    xs = seeded_bytes(7, 120)
    assert run("incr", xs, 100) == [(x + 1) % 256 for x in xs[:100]]
    assert run("negate", xs, 100) == [(256 - x) % 256 for x in xs[:100]]
    assert run("pairwise_sum", xs, 60) == pairwise_oracle(xs)
    assert run("window_sum", xs, 100, 5) == window_oracle(xs, 5)[:100]
    assert run("window_sum", xs, 100, 1) == xs[:100]
    assert run("drop_every", xs, 80, 3) == [x for i, x in enumerate(xs) if i % 3 != 2][:80]
    assert run("delay", xs, 50, 3, 9) == ([9, 9, 9] + xs)[:50]
    assert run("counter", xs, 300) == [i % 256 for i in range(300)]
    assert run("const", xs, 5, 9) == [9] * 5
    scan, acc = [], 0
    for x in xs[:50]:
        acc ^= x & 1
        scan.append(acc)
    assert run("parity", xs, 50) == scan


def test_arguments_checked():
    with pytest.raises(BadArguments):
        build("drop_every", 1)
    with pytest.raises(BadArguments):
        build("window_sum")
    with pytest.raises(BadArguments):
        build("const", 256)
    with pytest.raises(BadArguments):
        build("dup", 3)


def test_registry_processors_are_productive():
    for label, (p, bound) in sample_instances().items():
        assert check_productivity(p, max(bound, 1)), label


def test_registry_round_trips_through_rep_inf():
    for label, (p, _) in sample_instances().items():
        f = lambda s, p=p: eat_inf(p, s)
        for seed in range(3):
            s = random_stream(seed)
            assert agree(eat_inf(rep_inf(f), s), f(s), 30).ok, label


def _layer_depth(t):
    # depth along letters 0..3 only; generator trees are total over all ints
    return fold(lambda _: 0, lambda sub: 1 + max(sub(a) for a in range(4)), t)


def test_generator_shapes():
    for seed in range(20):
        assert type(generator(seed, 0).out()) is Ret
        for size in (1, 3, 6):
            p = generator(seed, size)
            assert _layer_depth(p.out()) <= size
            fold(lambda _: 0, lambda sub: sub(0), p.out(), fuel=size + 1)


def test_generator_is_deterministic():
    def first_layers(p, n=3):
        out = []
        for _ in range(n):
            layer = p.out()
            out.append(show(tmap(lambda pair: pair[0], layer), range(3), max_depth=4))
            p = _left(layer)
        return out

    assert first_layers(generator(42, 4)) == first_layers(generator(42, 4))
    assert first_layers(generator(42, 4)) != first_layers(generator(43, 4))


def _left(t):
    """Continuation at the leftmost leaf."""
    while type(t) is Rd:
        t = t.branch(0)
    return t.value[1]


def test_generator_is_productive():
    for seed in range(10):
        assert check_productivity(generator(seed, 5), 5)


def test_suites_are_large_enough():
    assert len(stream_function_suite()) >= 10
    assert len(discrete_function_suite()) >= 10


def test_hand_written_stream_functions():
    f = stream_function_suite()
    s = nat_from(0)
    assert take_prefix(f["evens"](s), 4) == [0, 2, 4, 6]
    assert take_prefix(f["swap_pairs"](s), 4) == [1, 0, 3, 2]
    assert take_prefix(f["prefix_sums"](s), 4) == [0, 1, 3, 6]
    # input n is n, so output n reads position n + 1 + n % 3
    assert take_prefix(f["lookahead"](s), 4) == [1, 3, 5, 4]
