"""Infinite streams, observed only through ``head`` and ``tail``.

A :class:`Stream` is an immutable value. ``tail`` returns a view onto the
suffix and never disturbs the original, so a stream and any of its suffixes
can be held and re-read independently.

Backings:

* :class:`FunctionStream` -- a total function of the position.
* :class:`Cons` -- one item prefixed to another stream.
* :class:`SourceStream` -- a pull source (an iterator, e.g. stdin chunks)
  behind a growable buffer, so earlier positions stay reachable.
* :class:`LazyStream` -- a memoized thunk producing ``(head, tail)``; the
  building block for corecursively defined streams.
"""

from __future__ import annotations

from typing import Callable, Generic, Iterable, Iterator, TypeVar

A = TypeVar("A")
B = TypeVar("B")
S = TypeVar("S")


class EndOfSource(Exception):
    """A finite backing source ran dry while an item was demanded."""

    def __init__(self, position: int):
        super().__init__(f"end of source at position {position}")
        self.position = position


class Stream(Generic[A]):
    __slots__ = ()

    def head(self) -> A:
        raise NotImplementedError

    def tail(self) -> Stream[A]:
        raise NotImplementedError

    def __iter__(self) -> Iterator[A]:
        s = self
        while True:
            yield s.head()
            s = s.tail()

    def __repr__(self) -> str:
        return f"<{type(self).__name__}>"


class FunctionStream(Stream[A]):
    __slots__ = ("fn", "offset")

    def __init__(self, fn: Callable[[int], A], offset: int = 0):
        self.fn = fn
        self.offset = offset

    def head(self) -> A:
        return self.fn(self.offset)

    def tail(self) -> FunctionStream[A]:
        return FunctionStream(self.fn, self.offset + 1)


class Cons(Stream[A]):
    __slots__ = ("first", "rest")

    def __init__(self, first: A, rest: Stream[A]):
        self.first = first
        self.rest = rest

    def head(self) -> A:
        return self.first

    def tail(self) -> Stream[A]:
        return self.rest


class _Buffer:
    """Growable prefix of a pull source, shared by all views onto it."""

    __slots__ = ("items", "chunks", "exhausted")

    def __init__(self, chunks: Iterator, items):
        self.items = items
        self.chunks = chunks
        self.exhausted = False

    def get(self, i: int):
        items = self.items
        while i >= len(items):
            if self.exhausted:
                raise EndOfSource(i)
            try:
                chunk = next(self.chunks)
            except StopIteration:
                self.exhausted = True
                raise EndOfSource(i) from None
            items.extend(chunk)
        return items[i]

    def available(self) -> int:
        return len(self.items)


class SourceStream(Stream[A]):
    __slots__ = ("buffer", "pos")

    def __init__(self, buffer: _Buffer, pos: int = 0):
        self.buffer = buffer
        self.pos = pos

    def head(self) -> A:
        return self.buffer.get(self.pos)

    def tail(self) -> SourceStream[A]:
        return SourceStream(self.buffer, self.pos + 1)


class LazyStream(Stream[A]):
    """A stream whose ``(head, tail)`` pair is computed once, on demand."""

    __slots__ = ("_thunk", "_cell")

    def __init__(self, thunk: Callable[[], tuple[A, Stream[A]]]):
        self._thunk = thunk
        self._cell = None

    def _force(self) -> tuple[A, Stream[A]]:
        cell = self._cell
        if cell is None:
            cell = self._cell = self._thunk()
            self._thunk = None
        return cell

    def head(self) -> A:
        return self._force()[0]

    def tail(self) -> Stream[A]:
        return self._force()[1]


# -- the destructor/constructor vocabulary -----------------------------------

def head(s: Stream[A]) -> A:
    return s.head()


def tail(s: Stream[A]) -> Stream[A]:
    return s.tail()


def cons(a: A, s: Stream[A]) -> Stream[A]:
    return Cons(a, s)


def prepend(items: Iterable[A], s: Stream[A]) -> Stream[A]:
    """``items ++ s`` for a finite ``items``."""
    for a in reversed(list(items)):
        s = Cons(a, s)
    return s


def from_function(fn: Callable[[int], A]) -> Stream[A]:
    return FunctionStream(fn)


def from_iterator(it: Iterable[A]) -> Stream[A]:
    """Back a stream by an iterator of single items.

    Running out of items raises :class:`EndOfSource` at the demand that
    needed them.
    """
    return SourceStream(_Buffer(((x,) for x in it), []))


def from_chunks(chunks: Iterable[bytes]) -> Stream[int]:
    """Back a byte stream by an iterator of ``bytes`` chunks (e.g. stdin)."""
    return SourceStream(_Buffer(iter(chunks), bytearray()))


def from_list_cycle(items: list[A]) -> Stream[A]:
    n = len(items)
    if n == 0:
        raise ValueError("cannot cycle an empty list")
    return FunctionStream(lambda i: items[i % n])


def repeat(a: A) -> Stream[A]:
    return FunctionStream(lambda _: a)


def lazy(thunk: Callable[[], tuple[A, Stream[A]]]) -> Stream[A]:
    return LazyStream(thunk)


def unfold(step: Callable[[S], tuple[A, S]], seed: S) -> Stream[A]:
    """Coiterate ``step`` into a stream: the unique coalgebra morphism."""

    def go(s):
        def thunk():
            a, s2 = step(s)
            return a, go(s2)

        return LazyStream(thunk)

    return go(seed)


def smap(f: Callable[[A], B], s: Stream[A]) -> Stream[B]:
    return LazyStream(lambda: (f(s.head()), smap(f, s.tail())))


def drop(s: Stream[A], n: int) -> Stream[A]:
    for _ in range(n):
        s = s.tail()
    return s


def take_prefix(s: Stream[A], n: int) -> list[A]:
    out = []
    for _ in range(n):
        out.append(s.head())
        s = s.tail()
    return out


zeros: Stream[int] = repeat(0)
naturals: Stream[int] = FunctionStream(lambda n: n)
