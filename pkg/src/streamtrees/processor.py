"""Stream processors ``P_A B = nu X. T_A(B x X)``.

A :class:`Proc` is a suspended layer: forcing it (:func:`out`) yields a
well-founded tree whose leaves carry one output together with the processor
that continues from there. Layers are memoized, so forcing is cheap after
the first time and a processor may be shared freely.
"""

from __future__ import annotations

import functools
import threading
from typing import Callable, Generic, TypeVar

from . import streams
from .streams import Stream
from .tree import Rd, Ret, Tree, eat, memo_branch, tmap

A = TypeVar("A")
B = TypeVar("B")
S = TypeVar("S")


class NotProductive(RuntimeError):
    """A processor demanded its own layer while that layer was being built."""


# Guards first forcing of every processor. One re-entrant lock rather than one
# per node: allocating a lock per layer dominated the cost of running a
# pipeline, and forcing only ever nests within a single thread.
_FORCING = threading.RLock()


class Proc(Generic[A, B]):
    __slots__ = ("_thunk", "_layer", "__weakref__")

    def __init__(self, thunk: Callable[[], Tree]):
        self._thunk = thunk
        self._layer = None

    @classmethod
    def ready(cls, layer: Tree) -> Proc:
        p = cls(None)
        p._layer = layer
        return p

    def out(self) -> Tree:
        layer = self._layer
        if layer is None:
            layer = self._force()
        return layer

    def _force(self) -> Tree:
        with _FORCING:
            if self._layer is None:
                thunk = self._thunk
                if thunk is None:
                    raise NotProductive("processor layer depends on itself")
                self._thunk = None
                try:
                    self._layer = thunk()
                except BaseException:
                    self._thunk = thunk
                    raise
            return self._layer

    def __repr__(self):
        state = "forced" if self._layer is not None else "suspended"
        return f"<Proc {state} at {id(self):#x}>"


def out(p: Proc[A, B]) -> Tree:
    return p.out()


def unfold(step: Callable[[S], Tree], seed: S) -> Proc:
    """Coiterate ``step : S -> T_A(B x S)`` into a processor.

    ``step`` runs only when the resulting layer is forced.
    """

    def layer():
        return tmap(lambda pair: (pair[0], unfold(step, pair[1])), step(seed))

    return Proc(layer)


def interning(make: Callable[[S], Proc], maxsize: int = 1 << 16) -> Callable[[S], Proc]:
    """Wrap a state -> processor constructor so equal (hashable) states share
    one processor, and hence one memoized layer. Sound because processors
    are pure; bounded so unbounded state spaces cost only the lookups."""
    cached = functools.lru_cache(maxsize=maxsize)(make)

    def get(state):
        try:
            return cached(state)
        except TypeError:  # unhashable state
            return make(state)

    return get


def identity() -> Proc[A, A]:
    p = Proc(lambda: Rd(memo_branch(lambda a: Ret((a, p)))))
    return p


def constant(c: B) -> Proc:
    p = Proc(lambda: Ret((c, p)))
    return p


def mealy(step: Callable[[S, A], tuple[S, B]], s0: S) -> Proc[A, B]:
    """One output per input, from a state-transition function."""

    def make(s):
        def branch(a):
            s1, b = step(s, a)
            return Ret((b, proc(s1)))

        return Proc(lambda: Rd(memo_branch(branch)))

    proc = interning(make)
    return proc(s0)


class OutputStream(Stream):
    """The stream ``eat_inf(p, s)``: each demand forces at most one layer."""

    __slots__ = ("_proc", "_input", "_cell")

    def __init__(self, proc: Proc, input: Stream):
        self._proc = proc
        self._input = input
        self._cell = None

    def _step(self):
        cell = self._cell
        if cell is None:
            (b, p), rest = eat(self._proc.out(), self._input)
            cell = self._cell = (b, OutputStream(p, rest))
            self._proc = self._input = None
        return cell

    def head(self):
        return self._step()[0]

    def tail(self) -> Stream:
        return self._step()[1]


def eat_inf(p: Proc[A, B], s: Stream[A]) -> Stream[B]:
    return OutputStream(p, s)


def eat_inf_coalgebraic(p: Proc[A, B], s: Stream[A]) -> Stream[B]:
    """``eat_inf`` spelled as ``unfold(assoc . app . ((eat . out) x 1))``.

    Kept as an independent oracle for :func:`eat_inf`.
    """

    def eat_out_x1(state):
        q, s = state
        t = q.out()
        return (lambda s2: eat(t, s2)), s

    def app(pair):
        m, s = pair
        return m(s)

    def assoc(x):
        (b, q), s = x
        return b, (q, s)

    return streams.unfold(lambda state: assoc(app(eat_out_x1(state))), (p, s))
