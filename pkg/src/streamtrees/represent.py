"""Recovering trees and processors from executable stream functions.

A stream function here is any Python callable that takes a :class:`Stream`
and reads it only through ``head``/``tail``. Such a function can be probed:
run it on a *trap* stream that serves a fixed prefix and then raises a
private signal. If the function returns, its value is settled by that
prefix; if the trap fires, it needs more input. Growing the prefix one
letter per branch gives a reader tree (:func:`rep`), built lazily so the
alphabet may be infinite.

Contract for probed functions: they are pure, and they do not catch
``BaseException`` (the trap signal derives from it).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import streams
from .processor import Proc, unfold
from .streams import Stream
from .tree import Rd, Ret, Tree, fold, memo_branch

DEFAULT_BUDGET = 4096

StreamFunction = Callable[[Stream], Any]


class BudgetExceeded(Exception):
    """No value after reading ``budget`` inputs along ``prefix``."""

    def __init__(self, prefix: tuple):
        shown = list(prefix[:16])
        more = "..." if len(prefix) > 16 else ""
        super().__init__(
            f"value still undetermined after {len(prefix)} inputs (prefix {shown}{more}); "
            "function discontinuous here or modulus beyond budget"
        )
        self.prefix = prefix


class UserFunctionError(Exception):
    """The probed function itself raised."""


@dataclass(frozen=True)
class Determined:
    value: Any
    inputs_read: int


@dataclass(frozen=True)
class NeedsMore:
    position: int


ProbeOutcome = Determined | NeedsMore


class _Trapped(BaseException):
    def __init__(self, owner, position):
        self.owner = owner
        self.position = position


class _Reads:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


class _TrapStream(Stream):
    __slots__ = ("prefix", "pos", "reads")

    def __init__(self, prefix: tuple, pos: int, reads: _Reads):
        self.prefix = prefix
        self.pos = pos
        self.reads = reads

    def head(self):
        pos = self.pos
        if pos >= len(self.prefix):
            raise _Trapped(self.reads, pos)
        if pos >= self.reads.count:
            self.reads.count = pos + 1
        return self.prefix[pos]

    def tail(self):
        return _TrapStream(self.prefix, self.pos + 1, self.reads)


def probe(f: StreamFunction, prefix) -> ProbeOutcome:
    reads = _Reads()
    try:
        value = f(_TrapStream(tuple(prefix), 0, reads))
    except _Trapped as sig:
        if sig.owner is not reads:
            raise
        return NeedsMore(sig.position)
    except Exception as exc:
        raise UserFunctionError(f"stream function raised {exc!r}") from exc
    return Determined(value, reads.count)


def rep(f: StreamFunction, budget: int = DEFAULT_BUDGET) -> Tree:
    """A reader tree extensionally equal to the discrete-valued ``f``.

    Raises :class:`BudgetExceeded` (possibly later, while the tree is being
    eaten) once a path needs more than ``budget`` reads.
    """

    def at(prefix: tuple) -> Tree:
        outcome = probe(f, prefix)
        if isinstance(outcome, Determined):
            return Ret(outcome.value)
        if len(prefix) >= budget:
            raise BudgetExceeded(prefix)
        return Rd(memo_branch(lambda a: at(prefix + (a,)), limit=1 << 16))

    return at(())


# -- stream functions kept in a flat "shifted" form ---------------------------

class Shifted:
    """``s -> drop(base(prefix ++ s), drops)``.

    Pre-composing with ``(a <|)`` and post-composing with ``tail`` both stay
    in this form, so long chains of them never nest closures.
    """

    __slots__ = ("base", "prefix", "drops")

    def __init__(self, base: StreamFunction, prefix: tuple = (), drops: int = 0):
        self.base = base
        self.prefix = prefix
        self.drops = drops

    def __call__(self, s: Stream) -> Stream:
        return streams.drop(self.base(streams.prepend(self.prefix, s)), self.drops)

    def __repr__(self):
        return f"Shifted({self.base!r}, prefix={list(self.prefix)}, drops={self.drops})"


def _shifted(f: StreamFunction) -> Shifted:
    return f if isinstance(f, Shifted) else Shifted(f)


def prefixed(f: StreamFunction, a) -> Shifted:
    """``f . (a <|)``"""
    g = _shifted(f)
    return Shifted(g.base, g.prefix + (a,), g.drops)


def tailed(f: StreamFunction) -> Shifted:
    """``tl . f``"""
    g = _shifted(f)
    return Shifted(g.base, g.prefix, g.drops + 1)


def headed(f: StreamFunction) -> StreamFunction:
    """``hd . f``"""
    return lambda s: f(s).head()


def tau(f: StreamFunction, budget: int = DEFAULT_BUDGET) -> tuple[Tree, StreamFunction]:
    return rep(headed(f), budget), tailed(f)


def rho(t: Tree, f: StreamFunction) -> Tree:
    """Fast-forward: decorate each leaf ``b`` with ``f`` pre-composed by the
    inputs read on the way to it. Shape is unchanged."""

    def leaf(b):
        return lambda g: Ret((b, g))

    def node(sub):
        return lambda g: Rd(lambda a: sub(a)(prefixed(g, a)))

    return fold(leaf, node, t)(f)


def rep_inf(f: StreamFunction, budget: int = DEFAULT_BUDGET) -> Proc:
    """A processor whose ``eat_inf`` agrees with the stream-valued ``f``."""
    return unfold(lambda g: rho(*tau(g, budget)), f)
