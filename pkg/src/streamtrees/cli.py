"""Run a pipeline of registry processors over stdin bytes.

    streamtrees 'dup | window_sum(2)' --mode greedy < in.bin > out.bin

Stages are written in data-flow order: ``s1 | s2`` feeds the output of
``s1`` into ``s2``. Exit status is 0 on success, 2 for a bad pipeline and 3
for an I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import gc
import itertools
import os
import re
import sys
from dataclasses import dataclass
from typing import BinaryIO, Callable, Optional

from . import combinators
from .combinators import BadArguments, UnknownProcessor
from .compose import OPERATORS, drain, pipeline
from .processor import Proc
from .tree import Ret

EXIT_OK = 0
EXIT_PIPELINE = 2
EXIT_IO = 3

CHUNK = 1 << 16
# Cyclic GC is paused during a run (the hot loop's garbage is acyclic and
# freed by refcounting); a full collection every this many input bytes
# reclaims cycles dropped by the bounded caches.
COLLECT_EVERY = 1 << 22


class PipelineSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Stage:
    name: str
    args: tuple[int, ...] = ()

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})" if self.args else self.name


@dataclass(frozen=True)
class PipelineExpr:
    stages: tuple[Stage, ...]
    mode: str = "lazy"


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<punct>[|(),])|(?P<bad>\S))")


def _tokens(text: str):
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:  # only whitespace left
            yield ("end", None, len(text) + 1)
            return
        kind = m.lastgroup
        # offsets are 1-based, counting the token's first character
        yield (kind, m.group(kind), m.start(kind) + 1)
        pos = m.end()


def parse_pipeline(text: str, mode: str = "lazy") -> PipelineExpr:
    """``pipeline := stage ("|" stage)*``, ``stage := ident ("(" int ("," int)* ")")?``.

    Names are not resolved here; see :func:`resolve`.
    """
    toks = _tokens(text)
    tok = next(toks)

    def expect(kind, value=None, what=None):
        nonlocal tok
        k, v, off = tok
        if k != kind or (value is not None and v != value):
            found = "end of input" if k == "end" else repr(v)
            raise PipelineSyntaxError(f"expected {what or value or kind}, found {found}", off)
        tok = next(toks)
        return v

    stages = []
    while True:
        name = expect("ident", what="stage name")
        args = []
        if tok[:2] == ("punct", "("):
            tok = next(toks)
            args.append(int(expect("int", what="integer")))
            while tok[:2] == ("punct", ","):
                tok = next(toks)
                args.append(int(expect("int", what="integer")))
            expect("punct", ")")
        stages.append(Stage(name, tuple(args)))
        if tok[0] == "end":
            break
        expect("punct", "|", what="'|' or end of pipeline")
    return PipelineExpr(tuple(stages), mode)


def resolve(expr: PipelineExpr, seed: int = 0) -> Proc:
    """Build the composite processor. ``gen(size)`` is the seeded random
    processor, drawn from ``seed``; every other name comes from the registry."""
    procs = []
    for i, stage in enumerate(expr.stages):
        if stage.name == "gen":
            if len(stage.args) != 1 or not 0 <= stage.args[0] <= 64:
                raise BadArguments("gen takes one argument, a size in [0, 64]")
            procs.append(combinators.generator(seed + i, stage.args[0]))
        else:
            procs.append(combinators.build(stage.name, *stage.args))
    return pipeline(procs, expr.mode)


# -- running ------------------------------------------------------------------

class _Input:
    """Chunked reader; ``before_block`` runs before any read that may wait."""

    def __init__(self, source: BinaryIO, before_block: Callable[[], None]):
        self._read = getattr(source, "read1", source.read)
        self._before_block = before_block
        self.eof = False

    def chunks(self):
        since_collect = 0
        while True:
            if since_collect >= COLLECT_EVERY and not gc.isenabled():
                gc.collect()
                since_collect = 0
            self._before_block()
            data = self._read(CHUNK)
            if not data:
                self.eof = True
                return
            since_collect += len(data)
            yield data


@dataclass
class RunResult:
    consumed: int = 0
    emitted: int = 0
    flushed: int = 0
    eof: bool = False


# A run of outputs longer than this between two reads is streamed, not cached.
MAX_RUN = 4096
# Bound on cached (node, byte) transitions before the table is dropped.
MAX_TRANSITIONS = 1 << 20


def _pump(t, chunks, pending: bytearray, spill: Callable[[], None]):
    """Unbounded run without events: the hot loop. Returns the last layer
    reached (``Rd``, waiting for input) and the bytes consumed.

    Each (pending read, input byte) pair is resolved once into the bytes it
    emits and the next pending read; later visits replay that.
    """
    append, extend = pending.append, pending.extend
    consumed = 0
    trans: dict = {}
    size = 0

    def emit_until_read(t):
        while type(t) is Ret:
            c, p = t.value
            append(c)
            t = p.out()
            if len(pending) >= CHUNK:
                spill()
        return t

    def resolve(node, a):
        nonlocal size
        t = node.branch(a)
        run = bytearray()
        while type(t) is Ret:
            if len(run) >= MAX_RUN:
                extend(run)
                return b"", emit_until_read(t)
            c, p = t.value
            run.append(c)
            t = p.out()
        entry = (bytes(run), t)
        if size >= MAX_TRANSITIONS:
            trans.clear()
            size = 0
        trans.setdefault(node, {})[a] = entry
        size += 1
        return entry

    t = emit_until_read(t)
    for data in chunks:
        for a in data:
            try:
                run, t = trans[t][a]
            except KeyError:
                run, t = resolve(t, a)
            extend(run)
            if len(pending) >= CHUNK:
                spill()
        consumed += len(data)
    return t, consumed


def run(proc: Proc, source: BinaryIO, sink: BinaryIO, outputs: Optional[int] = None,
        on_event: Optional[Callable[[str, int, int, int], None]] = None) -> RunResult:
    """Pull loop: walk the current layer, reading a byte at each ``Rd`` and
    writing one at each ``Ret``. Output is flushed before every read that
    may block. On end of input, the outputs the stages can still produce
    from the bytes already read are written too (see :func:`drain`).
    """
    pending = bytearray()
    written = 0
    result = RunResult()

    def flush():
        nonlocal written
        if pending:
            sink.write(pending)
            written += len(pending)
            pending.clear()
        sink.flush()

    inp = _Input(source, flush)
    chunks = inp.chunks()
    t = proc.out()

    if outputs is None and on_event is None:
        t, consumed = _pump(t, chunks, pending, flush)
        emitted = None  # counted by flush
    else:
        data, i = b"", 0
        consumed = emitted = 0
        while outputs is None or emitted < outputs:
            if type(t) is Ret:
                c, p = t.value
                pending.append(c)
                emitted += 1
                if on_event:
                    on_event("Ret", c, consumed, emitted)
                if len(pending) >= CHUNK:
                    flush()
                t = p.out()
                continue
            if i == len(data):
                data = next(chunks, None)
                if data is None:
                    break
                i = 0
            a = data[i]
            i += 1
            consumed += 1
            if on_event:
                on_event("Rd", a, consumed, emitted)
            t = t.branch(a)

    if inp.eof:
        result.eof = True
        rest = None if outputs is None else outputs - emitted
        extra = list(itertools.islice(drain(t), rest))
        result.flushed = len(extra)
        for c in extra:
            pending.append(c)
            if emitted is not None:
                emitted += 1
            if on_event:
                on_event("Ret", c, consumed, emitted)
    flush()
    result.consumed = consumed
    result.emitted = written if emitted is None else emitted
    return result


def consumption_profile(proc: Proc, data: bytes, marks=(1, 10, 100)) -> dict[int, Optional[int]]:
    """Inputs read before each marked output (``None`` if the input ran out)."""
    need: dict[int, Optional[int]] = dict.fromkeys(marks)
    t = proc.out()
    consumed = emitted = 0
    last = max(marks)
    while emitted < last:
        if type(t) is Ret:
            emitted += 1
            if emitted in need:
                need[emitted] = consumed
            t = t.value[1].out()
        elif consumed < len(data):
            t = t.branch(data[consumed])
            consumed += 1
        else:
            break
    return need


# -- command line -------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="streamtrees",
        description="Run a pipeline of stream processors over stdin bytes. "
                    "Stages: " + ", ".join(e.name for e in combinators.registry()) + ", gen(size).")
    ap.add_argument("pipeline", help="e.g. 'dup | window_sum(2)'; data flows left to right")
    ap.add_argument("--mode", choices=sorted(OPERATORS), default="lazy")
    ap.add_argument("--trace", action="store_true", help="log one line per read and per emission on stderr")
    ap.add_argument("--bench", action="store_true", help="inputs needed for outputs 1, 10, 100 in each mode")
    ap.add_argument("--outputs", type=int, metavar="N", help="stop after N outputs")
    ap.add_argument("--seed", type=int, default=0, help="seed for gen(size) stages")
    return ap


@contextlib.contextmanager
def _gc_paused():
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def _say(msg: str):
    print(f"streamtrees: {msg}", file=sys.stderr)


def main(argv: Optional[list[str]] = None, stdin: Optional[BinaryIO] = None,
         stdout: Optional[BinaryIO] = None) -> int:
    args = _parser().parse_args(argv)
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer
    if args.outputs is not None and args.outputs < 0:
        _say("--outputs must be non-negative")
        return EXIT_PIPELINE
    try:
        expr = parse_pipeline(args.pipeline, args.mode)
        modes = list(OPERATORS) if args.bench else [args.mode]
        procs = {m: resolve(PipelineExpr(expr.stages, m), args.seed) for m in modes}
    except (PipelineSyntaxError, UnknownProcessor, BadArguments) as exc:
        _say(f"bad pipeline: {exc}")
        return EXIT_PIPELINE

    try:
        if args.bench:
            return _bench(procs, stdin.read())
        on_event = None
        if args.trace:
            def on_event(kind, value, consumed, emitted):
                label = "in" if kind == "Rd" else "out"
                print(f"{kind} {label}={value} consumed={consumed} emitted={emitted}", file=sys.stderr)
        with _gc_paused():
            res = run(procs[args.mode], stdin, stdout, args.outputs, on_event)
    except BrokenPipeError:
        return EXIT_IO
    except OSError as exc:
        _say(f"I/O error: {exc}")
        return EXIT_IO

    if res.eof:
        short = "" if args.outputs is None else f" shortfall={args.outputs - res.emitted}"
        _say(f"end of input: consumed={res.consumed} emitted={res.emitted} "
             f"flushed_at_end={res.flushed}{short}; next output needs more input")
    return EXIT_OK


def _bench(procs: dict[str, Proc], data: bytes) -> int:
    marks = (1, 10, 100)
    print("mode    " + "".join(f"{'out' + str(k):>8}" for k in marks))
    for mode, proc in procs.items():
        need = consumption_profile(proc, data, marks)
        cells = "".join(f"{'-' if need[k] is None else need[k]:>8}" for k in marks)
        print(f"{mode:<8}{cells}")
    return EXIT_OK


def entry() -> None:
    """Console entry point. Exits without interpreter teardown: freeing the
    processor caches object by object can take longer than the run itself."""
    code = main()
    try:
        sys.stdout.flush()
    except BrokenPipeError:
        code = EXIT_IO
    except OSError:
        code = EXIT_IO
    sys.stderr.flush()
    os._exit(code)
