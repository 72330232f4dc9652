"""Well-founded reader trees ``T_A B = mu X. B + X^A``.

A tree is either ``Ret(value)`` or ``Rd(branch)``, where ``branch`` is a
total function from the input alphabet to subtrees. Branch functions are
never called at construction time, so trees over infinite alphabets are
fine; :func:`materialize` tabulates one for a finite alphabet.

Well-foundedness is the caller's obligation. When Python runs without
``-O`` the evaluators carry fuel, a bound on path length, and raise
:class:`FuelExhausted` instead of looping forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, NamedTuple, TypeVar, Union

from .streams import Stream

A = TypeVar("A")
B = TypeVar("B")
C = TypeVar("C")

DEFAULT_FUEL: int | None = 2**20 if __debug__ else None


class FuelExhausted(RuntimeError):
    """A tree path ran longer than the fuel allowed; probably not well-founded."""

    def __init__(self, fuel: int):
        super().__init__(f"more than {fuel} Rd steps along one path; tree is not well-founded?")
        self.fuel = fuel


@dataclass(frozen=True, slots=True)
class Ret(Generic[B]):
    value: B

    def __repr__(self):
        return f"Ret({self.value!r})"


@dataclass(frozen=True, slots=True, eq=False)
class Rd(Generic[A, B]):
    """Compared and hashed by identity: branch functions have no useful
    equality, and identity hashing is what lets nodes key caches cheaply."""

    branch: Callable[[A], Tree]

    def __repr__(self):
        return "Rd(...)"


Tree = Union[Ret, Rd]


class EatResult(NamedTuple):
    value: Any
    rest: Stream


def ret(b: B) -> Ret[B]:
    return Ret(b)


def rd(branch: Callable[[A], Tree]) -> Rd:
    return Rd(branch)


def fold(p: Callable[[B], C], g: Callable[[Callable[[A], C]], C], t: Tree,
         *, fuel: int | None = DEFAULT_FUEL) -> C:
    """Structural recursion: ``fold p g (Ret b) = p b``,
    ``fold p g (Rd phi) = g (a -> fold p g (phi a))``.

    Subtrees are folded only when ``g`` calls its argument, so a ``g`` that
    merely wraps (``g = Rd``) yields a lazy result.
    """

    def go(t, depth):
        if type(t) is Ret:
            return p(t.value)
        if fuel is not None and depth >= fuel:
            raise FuelExhausted(fuel)
        branch = t.branch
        return g(lambda a: go(branch(a), depth + 1))

    return go(t, 0)


def eat(t: Tree, s: Stream, *, fuel: int | None = DEFAULT_FUEL) -> EatResult:
    """Run ``t`` against ``s``: one input per ``Rd`` node on the chosen path."""
    n = 0
    while type(t) is Rd:
        if fuel is not None and n >= fuel:
            raise FuelExhausted(fuel)
        t = t.branch(s.head())
        s = s.tail()
        n += 1
    return EatResult(t.value, s)


class _Memo(dict):
    __slots__ = ("make", "limit", "tag")

    def __init__(self, make, limit, tag):
        self.make = make
        self.limit = limit
        self.tag = tag

    def __missing__(self, a):
        t = self.make(a)
        if len(self) < self.limit:
            self[a] = t
        return t


def memo_branch(make: Callable[[A], Tree], limit: int = 256, tag: Any = None) -> Callable[[A], Tree]:
    """Cache ``make`` per letter (up to ``limit`` letters), for ``Rd`` nodes
    that are re-entered often. ``make`` must be pure and letters hashable.

    The result is a dict lookup, so cache hits never enter Python code.
    ``tag`` is kept alongside for :func:`branch_tag`.
    """
    return _Memo(make, limit, tag).__getitem__


def branch_tag(t: Rd) -> Any:
    """The ``tag`` given to :func:`memo_branch` when ``t`` was built, else None."""
    owner = getattr(t.branch, "__self__", None)
    return owner.tag if type(owner) is _Memo else None


def tmap(f: Callable[[B], C], t: Tree) -> Tree:
    return fold(lambda b: Ret(f(b)), Rd, t)


def tbind(t: Tree, k: Callable[[B], Tree]) -> Tree:
    """Graft ``k(b)`` at every leaf ``Ret(b)``."""
    return fold(k, Rd, t)


# -- finite-alphabet helpers --------------------------------------------------

def depth(t: Tree, alphabet: Iterable[A]) -> int:
    alphabet = tuple(alphabet)
    return fold(lambda _: 0, lambda sub: 1 + max(sub(a) for a in alphabet), t)


def leaves(t: Tree, alphabet: Iterable[A]) -> list:
    """Leaf values in branch order (left to right over ``alphabet``)."""
    alphabet = tuple(alphabet)
    return fold(lambda b: [b], lambda sub: [x for a in alphabet for x in sub(a)], t)


def materialize(t: Tree, alphabet: Iterable[A], max_depth: int | None = None) -> Tree:
    """Force every branch over ``alphabet`` into a lookup table.

    Below ``max_depth`` the original lazy branches are kept.
    """
    alphabet = tuple(alphabet)

    def go(t, d):
        if type(t) is Ret or (max_depth is not None and d >= max_depth):
            return t
        table = {a: go(t.branch(a), d + 1) for a in alphabet}
        return Rd(table.__getitem__)

    return go(t, 0)


def show(t: Tree, alphabet: Iterable[A], max_depth: int | None = None,
         value: Callable[[Any], str] = repr) -> str:
    """Serialize as ``Ret(v)`` / ``Rd(a0:..., a1:...)``; ``...`` past ``max_depth``."""
    alphabet = tuple(alphabet)

    def go(t, d):
        if type(t) is Ret:
            return f"Ret({value(t.value)})"
        if max_depth is not None and d >= max_depth:
            return "Rd(...)"
        inner = ", ".join(f"{a!r}:{go(t.branch(a), d + 1)}" for a in alphabet)
        return f"Rd({inner})"

    return go(t, 0)


def agree_on(t1: Tree, t2: Tree, alphabet: Iterable[A], max_depth: int,
             same: Callable[[Any, Any], bool] = lambda x, y: x == y) -> bool:
    """Bounded structural comparison: same shape and ``same`` leaves to ``max_depth``."""
    alphabet = tuple(alphabet)

    def go(x, y, d):
        if type(x) is Ret and type(y) is Ret:
            return same(x.value, y.value)
        if type(x) is Rd and type(y) is Rd:
            if d >= max_depth:
                return True
            return all(go(x.branch(a), y.branch(a), d + 1) for a in alphabet)
        return False

    return go(t1, t2, 0)
