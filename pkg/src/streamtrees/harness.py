"""Bounded-depth agreement checks, consumption traces and random inputs.

Equality of infinite streams is not decidable; these helpers compare finite
prefixes over a seeded family of input streams and say where (if anywhere)
two streams first differ.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

from . import streams
from .compose import OPERATORS
from .processor import Proc, eat_inf
from .represent import BudgetExceeded, rep, rep_inf
from .streams import EndOfSource, Stream
from .tree import eat

DEFAULT_DEPTH = 50
DEFAULT_TRIALS = 100
DEFAULT_SEED = 1729

_END = "<end of source>"


@dataclass
class AgreementReport:
    depth_checked: int
    trials: int = 1
    seed: Optional[int] = None
    first_divergence: Optional[tuple[int, Any, Any]] = None
    error: Optional[str] = None
    name: str = "agree"

    @property
    def ok(self) -> bool:
        return self.first_divergence is None and self.error is None

    def line(self) -> str:
        if self.error is not None:
            verdict = f"error {self.error}"
        elif self.first_divergence is not None:
            pos, x, y = self.first_divergence
            verdict = f"diverge at={pos} left={x!r} right={y!r}"
        else:
            verdict = "pass"
        return f"{self.name} seed={self.seed} depth={self.depth_checked} trials={self.trials} {verdict}"


@dataclass
class ConsumptionTrace:
    """``counts[k]`` = inputs read before output ``k`` was emitted."""

    counts: list[int] = field(default_factory=list)

    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.counts, self.counts[1:]))

    def inputs_for(self, k: int) -> int:
        """Inputs needed for the first ``k`` outputs (1-based)."""
        return self.counts[k - 1]


def agree(s1: Stream, s2: Stream, n: int) -> AgreementReport:
    for i in range(n):
        try:
            x = s1.head()
        except EndOfSource:
            x = _END
        try:
            y = s2.head()
        except EndOfSource:
            y = _END
        if x != y or x is _END:
            return AgreementReport(depth_checked=i, first_divergence=(i, x, y))
        s1, s2 = s1.tail(), s2.tail()
    return AgreementReport(depth_checked=n)


# -- inputs --------------------------------------------------------------------

def random_stream(seed: int) -> Stream[int]:
    rng = random.Random(seed)
    return streams.from_iterator(iter(lambda: rng.getrandbits(8), None))


def adversarial_streams() -> list[Stream[int]]:
    return [
        streams.zeros,
        streams.repeat(255),
        streams.from_function(lambda n: 255 * (n % 2)),
    ]


def trial_streams(trials: int, seed: int) -> Iterator[Stream[int]]:
    """The three adversarial streams, then uniform random bytes, ``trials`` in all."""
    fixed = adversarial_streams()
    for i in range(trials):
        yield fixed[i] if i < len(fixed) else random_stream(seed * 1_000_003 + i)


# -- round-trip and composition checks -----------------------------------------

def _merge(reports: list[AgreementReport], name: str, depth: int, trials: int, seed: int) -> AgreementReport:
    for r in reports:
        if not r.ok:
            r.name, r.trials, r.seed = name, trials, seed
            return r
    return AgreementReport(depth_checked=depth, trials=trials, seed=seed, name=name)


def check_rep(f: Callable[[Stream], Any], trials: int = 200, seed: int = DEFAULT_SEED,
              budget: int = 4096, name: str = "rep") -> AgreementReport:
    """``eat(rep f)`` against ``f`` on seeded streams (discrete values)."""
    tree = rep(f, budget)
    for i, s in enumerate(trial_streams(trials, seed)):
        try:
            got = eat(tree, s).value
        except BudgetExceeded as exc:
            return AgreementReport(0, trials, seed, error=f"budget-exceeded prefix_len={len(exc.prefix)}", name=name)
        want = f(s)
        if got != want:
            return AgreementReport(0, trials, seed, first_divergence=(i, want, got), name=name)
    return AgreementReport(1, trials, seed, name=name)


def check_theorem2(f: Callable[[Stream], Stream], trials: int = DEFAULT_TRIALS,
                   depth: int = DEFAULT_DEPTH, seed: int = DEFAULT_SEED,
                   budget: int = 4096, name: str = "rep_inf") -> AgreementReport:
    """``eat_inf(rep_inf f, s)`` against ``f(s)`` to ``depth`` outputs."""
    reports = []
    p = rep_inf(f, budget)
    for s in trial_streams(trials, seed):
        try:
            r = agree(f(s), eat_inf(p, s), depth)
        except BudgetExceeded as exc:
            return AgreementReport(depth, trials, seed, error=f"budget-exceeded prefix_len={len(exc.prefix)}", name=name)
        reports.append(r)
        if not r.ok:
            break
    return _merge(reports, name, depth, trials, seed)


def check_composition(p: Proc, q: Proc, operator: str = "lazy", trials: int = DEFAULT_TRIALS,
                      depth: int = DEFAULT_DEPTH, seed: int = DEFAULT_SEED,
                      name: str | None = None) -> AgreementReport:
    """Composite evaluation against nested evaluation ``eat_inf(p, eat_inf(q, s))``."""
    composite = OPERATORS[operator](p, q)
    reports = []
    for s in trial_streams(trials, seed):
        r = agree(eat_inf(composite, s), eat_inf(p, eat_inf(q, s)), depth)
        reports.append(r)
        if not r.ok:
            break
    return _merge(reports, name or f"compose-{operator}", depth, trials, seed)


# -- consumption ---------------------------------------------------------------

class _Counter:
    __slots__ = ("read",)

    def __init__(self):
        self.read = 0


class CountingStream(Stream):
    """View onto ``inner`` that records how far into it anyone has read."""

    __slots__ = ("inner", "pos", "counter")

    def __init__(self, inner: Stream, pos: int = 0, counter: _Counter | None = None):
        self.inner = inner
        self.pos = pos
        self.counter = counter if counter is not None else _Counter()

    def head(self):
        value = self.inner.head()
        if self.pos >= self.counter.read:
            self.counter.read = self.pos + 1
        return value

    def tail(self):
        return CountingStream(self.inner.tail(), self.pos + 1, self.counter)

    @property
    def consumed(self) -> int:
        return self.counter.read


def trace_consumption(p: Proc, s: Stream, n_outputs: int) -> ConsumptionTrace:
    counted = CountingStream(s)
    out = eat_inf(p, counted)
    trace = ConsumptionTrace()
    for _ in range(n_outputs):
        out.head()
        trace.counts.append(counted.consumed)
        out = out.tail()
    return trace


def check_productivity(p: Proc, bound: int, n_outputs: int = 50, trials: int = 10,
                       seed: int = DEFAULT_SEED) -> bool:
    """First ``n`` outputs from at most ``bound * n`` inputs, for every ``n``."""
    for s in trial_streams(trials, seed):
        trace = trace_consumption(p, s, n_outputs)
        if not trace.monotone():
            return False
        if any(c > bound * (k + 1) for k, c in enumerate(trace.counts)):
            return False
    return True
