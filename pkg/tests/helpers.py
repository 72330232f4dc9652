"""Independent oracles and generators shared by the test modules."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from streamtrees import streams
from streamtrees.combinators import _mix
from streamtrees.compose import CompState
from streamtrees.processor import Proc, interning
from streamtrees.tree import Rd, Ret, fold, memo_branch

BITS = (0, 1)


def padded(bits, pad=0):
    return streams.prepend(bits, streams.repeat(pad))


def all_prefixes(n, alphabet=BITS):
    return [list(p) for p in itertools.product(alphabet, repeat=n)]


def nat_from(k):
    return streams.from_function(lambda n: n + k)


def seeded_bytes(seed, n):
    rng = random.Random(seed)
    return [rng.randrange(256) for _ in range(n)]


# -- pure list oracles ---------------------------------------------------------

def dup_oracle(xs):
    return [xs[n // 2] for n in range(2 * len(xs))]


def window_oracle(xs, k):
    return [sum(xs[i:i + k]) & 0xFF for i in range(len(xs) - k + 1)]


def pairwise_oracle(xs):
    return [(xs[2 * i] + xs[2 * i + 1]) & 0xFF for i in range(len(xs) // 2)]


def prefix_sums_oracle(xs):
    return list(itertools.accumulate(xs))


def xor_scan_oracle(xs):
    return [x & 1 for x in itertools.accumulate(xs, lambda s, a: s ^ a)]


# -- composition oracles: the nested folds, written out literally --------------

def chi_fold_form(state):
    """chi = fold p g, with p<c,p_bc> t_ab = Ret<c, <out p_bc, t_ab>> and
    g f = fold (\\<b, p_ab>. f b (out p_ab)) Rd."""
    t_bc, t_ab = state

    def p(cp):
        c, p_bc = cp
        return lambda t: Ret((c, CompState(p_bc.out(), t)))

    def g(f):
        return lambda t: fold(lambda bq: f(bq[0])(bq[1].out()), Rd, t)

    return fold(p, g, t_bc)(t_ab)


def chi_greedy_fold_form(state):
    """As :func:`chi_fold_form` with the leaf algebra
    p<c,p_bc> = fold (\\<b,p_ab>. Ret<c, <out p_bc, Ret<b,p_ab>>>) Rd."""
    t_bc, t_ab = state

    def p(cp):
        c, p_bc = cp
        return lambda t: fold(lambda bq: Ret((c, CompState(p_bc.out(), Ret(bq)))), Rd, t)

    def g(f):
        return lambda t: fold(lambda bq: f(bq[0])(bq[1].out()), Rd, t)

    return fold(p, g, t_bc)(t_ab)


# -- random layers -------------------------------------------------------------

def _stable_layer(seed, size, proc, force_rd=False):
    rng = random.Random(seed)
    if not force_rd and (size <= 0 or rng.random() < 0.35):
        return Ret((rng.randrange(256), proc(rng.getrandbits(64))))
    salt = rng.getrandbits(64)
    return Rd(memo_branch(lambda a: _stable_layer(_mix(salt, a), size - 1, proc)))


def stable_generator(size=3):
    """Seed -> random processor, where equal seeds give the same processor
    and re-evaluating any branch gives the very same subtree, so layers
    built from it can be compared structurally."""
    proc = interning(lambda seed: Proc(lambda: _stable_layer(seed, size, proc)))
    return proc


stable = stable_generator()


def random_proc_layer(seed, size=3, force_rd=False):
    """A layer over integer letters whose leaves carry (byte, processor)."""
    return _stable_layer(seed, size, stable, force_rd)


def random_ret_layer(seed):
    rng = random.Random(seed)
    return Ret((rng.randrange(256), stable(rng.getrandbits(64))))


# -- hypothesis strategies -----------------------------------------------------

def _node(children):
    return Rd(lambda a, kids=children: kids[a])


def binary_trees(leaves=st.integers(0, 9), max_leaves=12):
    """Finite trees over the alphabet {0, 1}."""
    return st.recursive(leaves.map(Ret), lambda sub: st.tuples(sub, sub).map(_node), max_leaves=max_leaves)


bit_lists = st.lists(st.integers(0, 1), min_size=8, max_size=8)
