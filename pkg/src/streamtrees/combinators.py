"""Concrete byte processors, a random processor generator, and sample
stream functions.

Every registered processor is productive with a recorded bound: its first
``n`` outputs need at most ``bound * n`` inputs. There is deliberately no
``filter``: a processor that may stay silent for unboundedly long is not a
processor at all. ``drop_every(k)`` is the bounded substitute.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import streams
from .processor import Proc, constant, eat_inf, identity, interning, mealy, unfold
from .streams import Stream
from .tree import Rd, Ret, Tree, memo_branch

BYTE = 0xFF


class UnknownProcessor(LookupError):
    pass


class BadArguments(ValueError):
    pass


def map_proc(f: Callable) -> Proc:
    p = Proc(lambda: Rd(memo_branch(lambda a: Ret((f(a), p)))))
    return p


def dup() -> Proc:
    p = Proc(lambda: Rd(memo_branch(lambda a: Ret((a, Proc.ready(Ret((a, p))))))))
    return p


def drop_every(k: int) -> Proc:
    """Pass k-1 inputs, discard the next, repeat."""
    ring = [None] * k

    def plain(i):
        return Rd(memo_branch(lambda a: Ret((a, ring[i + 1]))))

    def skip():
        take = Rd(memo_branch(lambda a: Ret((a, ring[1]))))
        return Rd(lambda _: take)

    for i in range(k - 1):
        ring[i] = Proc(lambda i=i: plain(i))
    ring[k - 1] = Proc(skip)
    return ring[0]


def window_sum(k: int) -> Proc:
    """Sum (mod 256) of each window of ``k`` consecutive inputs."""

    def make(window: tuple) -> Proc:
        def branch(a):
            w = window + (a,)
            return Ret((sum(w) & BYTE, sliding(w[1:])))

        return Proc(lambda: Rd(memo_branch(branch)))

    sliding = interning(make)

    def fill(acc: tuple) -> Tree:
        if len(acc) == k - 1:
            return sliding(acc).out()
        return Rd(lambda a: fill(acc + (a,)))

    return Proc(lambda: fill(()))


def pairwise_sum() -> Proc:
    def second(a):
        return Rd(memo_branch(lambda b: Ret(((a + b) & BYTE, p))))

    p = Proc(lambda: Rd(memo_branch(second)))
    return p


def delay(d: int, pad: int) -> Proc:
    p = identity()
    for _ in range(d):
        p = Proc.ready(Ret((pad, p)))
    return p


def counter() -> Proc:
    return mealy(lambda n, _: ((n + 1) & BYTE, n), 0)


def parity() -> Proc:
    return mealy(lambda s, a: (s ^ (a & 1),) * 2, 0)


# -- random processors --------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _mix(x: int, a: int) -> int:
    # splitmix64 finalizer over (x, a)
    z = (x ^ ((a + 1) * 0x9E3779B97F4A7C15)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def random_layer(node: int, size: int) -> Tree:
    """A pseudo-random tree of depth at most ``size``: leaves carry
    ``(byte, next seed)``; subtrees depend on the letter read."""
    rng = random.Random(node)
    if size <= 0 or rng.random() < 0.35:
        return Ret((rng.randrange(256), rng.getrandbits(64)))
    salt = rng.getrandbits(64)
    return Rd(lambda a: random_layer(_mix(salt, a), size - 1))


def generator(seed: int, size: int) -> Proc:
    """Deterministic pseudo-random productive processor over bytes."""
    return unfold(lambda s: random_layer(s, size), _mix(seed, size))


# -- registry -----------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class NamedProcessor:
    name: str
    build: Callable[..., Proc]
    params: tuple[Param, ...] = ()
    bound: Callable[..., int] = lambda *args: 1
    doc: str = ""

    def __call__(self, *args: int) -> Proc:
        if len(args) != len(self.params):
            raise BadArguments(
                f"{self.name} takes {len(self.params)} argument(s), got {len(args)}")
        for value, param in zip(args, self.params):
            if not param.lo <= value <= param.hi:
                raise BadArguments(
                    f"{self.name}: {param.name}={value} outside [{param.lo}, {param.hi}]")
        return self.build(*args)


_BYTE_PARAM = (0, 255)

_REGISTRY = {
    entry.name: entry
    for entry in [
        NamedProcessor("id", identity, doc="copy input to output"),
        NamedProcessor("dup", dup, doc="emit each input twice"),
        NamedProcessor("incr", lambda: map_proc(lambda a: (a + 1) & BYTE), doc="add one, mod 256"),
        NamedProcessor("negate", lambda: map_proc(lambda a: -a & BYTE), doc="two's complement negation"),
        NamedProcessor("parity", parity, doc="running xor of the low bit"),
        NamedProcessor("drop_every", drop_every, (Param("k", 2, 1 << 16),),
                       bound=lambda k: 2, doc="pass k-1 of every k inputs"),
        NamedProcessor("window_sum", window_sum, (Param("k", 1, 1 << 16),),
                       bound=lambda k: k, doc="sum of each k-window, mod 256"),
        NamedProcessor("pairwise_sum", pairwise_sum, bound=lambda: 2,
                       doc="sum of consecutive disjoint pairs, mod 256"),
        NamedProcessor("delay", delay, (Param("d", 0, 1 << 16), Param("pad", *_BYTE_PARAM)),
                       doc="emit pad d times, then the input"),
        NamedProcessor("counter", counter, doc="0, 1, 2, ... one per input read"),
        NamedProcessor("const", constant, (Param("c", *_BYTE_PARAM),),
                       bound=lambda c: 0, doc="emit c forever, never read"),
    ]
}


def registry() -> list[NamedProcessor]:
    return list(_REGISTRY.values())


def lookup(name: str) -> NamedProcessor:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownProcessor(f"no processor named {name!r}") from None


def build(name: str, *args: int) -> Proc:
    return lookup(name)(*args)


def sample_instances() -> dict[str, tuple[Proc, int]]:
    """One instance of each registry entry (with typical parameters) and its bound."""
    args = {"drop_every": (3,), "window_sum": (3,), "delay": (2, 7), "const": (9,)}
    out = {}
    for entry in registry():
        a = args.get(entry.name, ())
        label = f"{entry.name}({','.join(map(str, a))})" if a else entry.name
        out[label] = (entry(*a), entry.bound(*a))
    return out


# -- sample trees and stream functions ----------------------------------------

def intro_tree() -> Tree:
    """Binary tree: 0 at <0>, 1 at <1,0>, 0 at <1,1,0>, 1 at <1,1,1>."""
    return Rd(lambda a0: Ret(0) if a0 == 0 else Rd(
        lambda a1: Ret(1) if a1 == 0 else Rd(
            lambda a2: Ret(0) if a2 == 0 else Ret(1))))


def intro_tree_variant() -> Tree:
    """Same function as :func:`intro_tree`, with a redundant read at <1,1,0>."""
    return Rd(lambda a0: Ret(0) if a0 == 0 else Rd(
        lambda a1: Ret(1) if a1 == 0 else Rd(
            lambda a2: Rd(lambda a3: Ret(0)) if a2 == 0 else Ret(1))))


def intro_function(s: Stream) -> int:
    if s.head() == 0:
        return 0
    s = s.tail()
    if s.head() == 0:
        return 1
    return 0 if s.tail().head() == 0 else 1


def lifted(p: Proc) -> Callable[[Stream], Stream]:
    """The stream function a processor stands for."""
    return lambda s: eat_inf(p, s)


def succ_stream(s: Stream) -> Stream:
    return streams.smap(lambda a: a + 1, s)


def pairwise_sum_stream(s: Stream) -> Stream:
    return streams.lazy(lambda: (s.head() + s.tail().head(), pairwise_sum_stream(s.tail().tail())))


def evens_stream(s: Stream) -> Stream:
    return streams.lazy(lambda: (s.head(), evens_stream(s.tail().tail())))


def prefix_sums_stream(s: Stream, acc: int = 0) -> Stream:
    def step():
        total = acc + s.head()
        return total, prefix_sums_stream(s.tail(), total)

    return streams.lazy(step)


def lookahead_stream(s: Stream) -> Stream:
    """Output n is input ``n + 1 + (input n mod 3)``: reads out of order."""
    return streams.lazy(lambda: (streams.drop(s, 1 + s.head() % 3).head(), lookahead_stream(s.tail())))


def swap_pairs_stream(s: Stream) -> Stream:
    """a, b, c, d, ... -> b, a, d, c, ..."""
    return streams.lazy(lambda: (s.tail().head(), streams.cons(s.head(), swap_pairs_stream(s.tail().tail()))))


def stream_function_suite() -> dict[str, Callable[[Stream], Stream]]:
    suite = {
        "succ": succ_stream,
        "pairwise_sum": pairwise_sum_stream,
        "evens": evens_stream,
        "prefix_sums": prefix_sums_stream,
        "lookahead": lookahead_stream,
        "swap_pairs": swap_pairs_stream,
        "identity_fn": lambda s: s,
        "const_9_fn": lambda s: streams.repeat(9),
    }
    for name, (p, _) in sample_instances().items():
        suite[f"proc:{name}"] = lifted(p)
    return suite


def _nth_output(p: Proc, n: int) -> Callable[[Stream], int]:
    return lambda s: streams.drop(eat_inf(p, s), n).head()


def discrete_function_suite() -> dict[str, Callable[[Stream], object]]:
    return {
        "const_7": lambda s: 7,
        "head": lambda s: s.head(),
        "intro": intro_function,
        "sum3": lambda s: sum(streams.take_prefix(s, 3)),
        "xor4": lambda s: _xor(streams.take_prefix(s, 4)),
        "max_of_head_many": lambda s: max(streams.take_prefix(s, 1 + s.head() % 5)),
        "indexed_by_head": lambda s: streams.drop(s, 1 + s.head() % 4).head(),
        "first_big_within_8": _first_big_within_8,
        "lex_less_than_abc": lambda s: streams.take_prefix(s, 3) < [97, 98, 99],
        "window_sum3_10th": _nth_output(window_sum(3), 10),
        "dup_dup_7th": lambda s: streams.drop(eat_inf(dup(), eat_inf(dup(), s)), 7).head(),
        "generator_5th": _nth_output(generator(7, 3), 5),
    }


def _xor(xs):
    r = 0
    for x in xs:
        r ^= x
    return r


def _first_big_within_8(s: Stream) -> int:
    for i in range(8):
        if s.head() > 200:
            return i
        s = s.tail()
    return 8
