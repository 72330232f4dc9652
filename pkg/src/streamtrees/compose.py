"""Composition of processors directly on their trees.

The composite's state is a pair of already-forced layers,
``(postponent, preponent)``: the consumer's current layer and the producer's.
One step of the composite (``chi`` for lazy, ``chi_greedy`` for greedy) is a
nested structural recursion: the outer recursion walks the postponent, and
at each of its reads an inner fold walks the preponent until it yields a
value to feed in (or needs input, in which case the composite reads).

Both operators come out of :func:`_engine`. They differ only in what happens
when the postponent is ready to emit:

* lazy: emit at once, whatever the preponent is doing;
* greedy: first let the preponent read until it too is ready to emit.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, NamedTuple

from .processor import Proc, interning
from .tree import Rd, Ret, Tree, branch_tag, memo_branch

# Feeds handled by native recursion before handing over to the flat loop.
SWITCH_DEPTH = 100


class CompState(NamedTuple):
    post: Tree
    pre: Tree


Emit = Callable[[object, Proc, Tree], Tree]


def _engine(greedy: bool, emit: Emit, node: Callable) -> Callable[[CompState], Tree]:
    """Build ``chi <t_bc, t_ab> = fold leaf g t_bc t_ab`` where
    ``g f = fold (\\<b, p_ab>. f b (out p_ab)) node``.

    ``emit(c, p_bc, t_ab)`` builds the leaf for output ``c``;
    ``node(branch, state)`` wraps a branch function into an ``Rd`` node,
    where ``state`` is the composite state that node stands for. The folds
    are written out by hand (``outer``, ``inner``) so the state is in hand at
    every node, and a long run of feeds can continue in :func:`loop`.
    """

    def inner(p, t_bc: Tree, t_ab: Tree) -> Tree:
        # fold p node t_ab, telling node where it stands
        if type(t_ab) is Ret:
            return p(t_ab.value)
        psi = t_ab.branch
        return node(lambda a: inner(p, t_bc, psi(a)), CompState(t_bc, t_ab))

    def leaf(t_bc: Ret):
        c, p_bc = t_bc.value
        if greedy:
            # on a leaf the fold is just emit; passing the node itself (not a
            # rebuilt Ret) keeps interned states identical, not merely equal
            return lambda t_ab: (emit(c, p_bc, t_ab) if type(t_ab) is Ret else
                                 inner(lambda bq: emit(c, p_bc, Ret(bq)), t_bc, t_ab))
        return lambda t_ab: emit(c, p_bc, t_ab)

    def outer(t_bc: Tree, depth: int) -> Callable[[Tree], Tree]:
        if type(t_bc) is Ret:
            return leaf(t_bc)
        phi = t_bc.branch
        return lambda t_ab: inner(lambda bq: feed(phi, bq, depth), t_bc, t_ab)

    def feed(phi, bq, depth):
        b, p_ab = bq
        if depth >= SWITCH_DEPTH:
            return loop(phi(b), p_ab.out())
        return outer(phi(b), depth + 1)(p_ab.out())

    def loop(t_bc: Tree, t_ab: Tree) -> Tree:
        while True:
            if type(t_ab) is Rd and (greedy or type(t_bc) is Rd):
                # <t_bc, Rd psi>  ->  Rd (a -> <t_bc, psi a>)
                psi = t_ab.branch
                return node(lambda a, t_bc=t_bc: step(CompState(t_bc, psi(a))), CompState(t_bc, t_ab))
            if type(t_bc) is Ret:
                # <Ret (c, p_bc), t_ab>  ->  Ret (c, <out p_bc, t_ab>)
                c, p_bc = t_bc.value
                return emit(c, p_bc, t_ab)
            # <Rd phi, Ret (b, p_ab)>  ->  <phi b, out p_ab>
            b, p_ab = t_ab.value
            t_bc = t_bc.branch(b)
            t_ab = p_ab.out()

    def step(state: CompState) -> Tree:
        t_bc, t_ab = state
        return outer(t_bc, 0)(t_ab)

    return step


def _next_state(c, p_bc: Proc, t_ab: Tree) -> Tree:
    return Ret((c, CompState(p_bc.out(), t_ab)))


def _plain_rd(branch, state) -> Rd:
    return Rd(branch)


chi = _engine(False, _next_state, _plain_rd)
chi.__doc__ = "One step of lazy composition: the postponent's output comes first."

chi_greedy = _engine(True, _next_state, _plain_rd)
chi_greedy.__doc__ = "One step of greedy composition: the preponent's reads come first."


def _tagged_rd(branch, state) -> Rd:
    return Rd(memo_branch(branch, tag=state))


def _composite(greedy: bool) -> Callable[[CompState], Proc]:
    """``unfold(chi)`` with the re-wrapping of each leaf fused into the step,
    and equal states sharing one processor. Each pending read keeps the
    state it stands for (see :func:`drain`)."""

    def emit(c, p_bc, t_ab):
        return Ret((c, proc(CompState(p_bc.out(), t_ab))))

    step = _engine(greedy, emit, _tagged_rd)
    proc = interning(lambda state: Proc(lambda: step(state)))
    return proc


_NONE = object()


def drain(t: Tree, supply: Iterable = ()) -> Iterator:
    """Outputs of layer ``t`` given only the inputs in ``supply``, evaluated
    stage by stage: a composite waiting for input is taken apart, and its
    preponent's remaining outputs are fed to its postponent.

    Greedy composites wait for input while their parts could still move, so
    on a finite input they stop short of the stage-by-stage result; this
    recovers it. May be infinite if the stages need no input at all.
    """
    supply = iter(supply)
    while True:
        if type(t) is Ret:
            c, p = t.value
            yield c
            t = p.out()
            continue
        state = branch_tag(t)
        if type(state) is CompState:
            yield from drain(state.post, drain(state.pre, supply))
            return
        a = next(supply, _NONE)
        if a is _NONE:
            return
        t = t.branch(a)


def compose_lazy(p: Proc, q: Proc) -> Proc:
    """``p (x) q``: behaves as ``eat_inf(p, eat_inf(q, -))``."""
    return _composite(False)(CompState(p.out(), q.out()))


def compose_greedy(p: Proc, q: Proc) -> Proc:
    return _composite(True)(CompState(p.out(), q.out()))


OPERATORS = {"lazy": compose_lazy, "greedy": compose_greedy}


def pipeline(stages: list[Proc], mode: str = "lazy") -> Proc:
    """Compose left to right: data flows from ``stages[0]`` onward."""
    if not stages:
        raise ValueError("empty pipeline")
    op = OPERATORS[mode]
    result = stages[0]
    for stage in stages[1:]:
        result = op(stage, result)
    return result
