"""Line-oriented traces: parsing, pretty-printing, execution, relating.

A trace is a sequence of memory operations with inline assertions::

    # read-after-write
    alloc 0 8 -> $a
    store int32 $a 0 (int 42)
    load int32 $a 0 => (int 42)
    free $a

Blocks never appear as literal ids in operations, only as variables bound
by ``alloc``; this keeps traces stable under allocation-order refactoring.
Values are written ``undef``, ``(int N)``, ``(float HEXBITS)`` and
``(ptr B I)`` (where B may be a variable or a literal id).  ``load``
carries its expectation after ``=>``: a value, ``undef``, or ``fail``.
``expect-fail`` wraps an operation that must fail.  An optional ``[emb]``
section, or a separate file of the same shape, lists relocation entries
``B -> TB + DELTA`` used by the injection checker.

Parsing is total: any input either parses or raises a
``TraceParseError`` carrying line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import memstate, relations
from .chunks import Chunk, Value, Vfloat, Vint, Vptr, VUNDEF, value_text
from .memstate import DEFAULT_CONFIG, MemConfig, MemState


class TraceParseError(Exception):
    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class PtrLit:
    """A pointer literal; the block is a variable name or a literal id."""

    target: str | int
    offset: int


ValueExpr = Value | PtrLit


@dataclass(frozen=True)
class Alloc:
    line: int = field(compare=False)
    low: int = 0
    high: int = 0
    var: str = ""


@dataclass(frozen=True)
class Free:
    line: int = field(compare=False)
    var: str = ""


@dataclass(frozen=True)
class FreeList:
    line: int = field(compare=False)
    vars: tuple = ()


@dataclass(frozen=True)
class Store:
    line: int = field(compare=False)
    chunk: Chunk = Chunk.INT32
    var: str = ""
    offset: int = 0
    value: ValueExpr = VUNDEF


@dataclass(frozen=True)
class Load:
    line: int = field(compare=False)
    chunk: Chunk = Chunk.INT32
    var: str = ""
    offset: int = 0
    expect: tuple = ("fail",)  # ("fail",) | ("value", ValueExpr)


@dataclass(frozen=True)
class AssertValid:
    line: int = field(compare=False)
    var: str = ""


@dataclass(frozen=True)
class AssertBounds:
    line: int = field(compare=False)
    var: str = ""
    low: int = 0
    high: int = 0


@dataclass(frozen=True)
class ExpectFail:
    line: int = field(compare=False)
    inner: object = None


Statement = Alloc | Free | FreeList | Store | Load | AssertValid | AssertBounds | ExpectFail


@dataclass(frozen=True)
class Trace:
    statements: tuple = ()
    emb: tuple | None = None  # ((block, target, delta), ...)


# --- tokenizing ---------------------------------------------------------------


def _tokenize(line: str, lineno: int):
    """Tokens with 1-based columns; parentheses are their own tokens and
    ``#`` starts a comment."""
    out = []
    k = 0
    n = len(line)
    while k < n:
        c = line[k]
        if c in " \t":
            k += 1
            continue
        if c == "#":
            break
        if c in "()":
            out.append((c, k + 1))
            k += 1
            continue
        start = k
        while k < n and line[k] not in " \t()#":
            k += 1
        out.append((line[start:k], start + 1))
    return out


class _Cursor:
    def __init__(self, tokens, lineno: int) -> None:
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self):
        return self.tokens[self.pos] if not self.done() else ("", self._end_col())

    def _end_col(self) -> int:
        if not self.tokens:
            return 1
        text, col = self.tokens[-1]
        return col + len(text)

    def take(self, what: str):
        if self.done():
            raise TraceParseError(self.lineno, self._end_col(), f"expected {what}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, literal: str) -> None:
        text, col = self.take(repr(literal))
        if text != literal:
            raise TraceParseError(self.lineno, col, f"expected {literal!r}, got {text!r}")

    def fail(self, message: str):
        _, col = self.peek()
        raise TraceParseError(self.lineno, col, message)


def _parse_int(cur: _Cursor, what: str) -> int:
    text, col = cur.take(what)
    try:
        return int(text, 0)
    except ValueError:
        raise TraceParseError(cur.lineno, col, f"expected {what}, got {text!r}") from None


def _parse_var(cur: _Cursor, bound: set, *, binding: bool = False) -> str:
    text, col = cur.take("a $variable")
    if not text.startswith("$") or len(text) < 2:
        raise TraceParseError(cur.lineno, col, f"expected a $variable, got {text!r}")
    if binding:
        if text in bound:
            raise TraceParseError(cur.lineno, col, f"{text} is already bound")
    elif text not in bound:
        raise TraceParseError(cur.lineno, col, f"{text} is not bound")
    return text


def _parse_chunk(cur: _Cursor) -> Chunk:
    text, col = cur.take("a chunk name")
    c = Chunk.from_token(text)
    if c is None:
        raise TraceParseError(cur.lineno, col, f"unknown chunk {text!r}")
    return c


def _parse_value(cur: _Cursor, bound: set) -> ValueExpr:
    text, col = cur.peek()
    if text == "undef":
        cur.take("value")
        return VUNDEF
    if text != "(":
        cur.fail(f"expected a value, got {text!r}")
    cur.take("'('")
    kind, kcol = cur.take("value kind")
    if kind == "int":
        v: ValueExpr = Vint(_parse_int(cur, "an integer"))
    elif kind == "float":
        bits_text, bcol = cur.take("float bits")
        try:
            bits = int(bits_text, 16)
        except ValueError:
            raise TraceParseError(cur.lineno, bcol, f"expected hex bits, got {bits_text!r}") from None
        if not 0 <= bits < 1 << 64:
            raise TraceParseError(cur.lineno, bcol, "float bits out of 64-bit range")
        v = Vfloat(bits)
    elif kind == "ptr":
        text, tcol = cur.peek()
        if text.startswith("$"):
            target: str | int = _parse_var(cur, bound)
        else:
            target = _parse_int(cur, "a block id or $variable")
        v = PtrLit(target, _parse_int(cur, "a pointer offset"))
    else:
        raise TraceParseError(cur.lineno, kcol, f"unknown value kind {kind!r}")
    cur.expect(")")
    return v


def _parse_operation(cur: _Cursor, head: str, col: int, bound: set):
    if head == "alloc":
        low = _parse_int(cur, "a low bound")
        high = _parse_int(cur, "a high bound")
        cur.expect("->")
        var = _parse_var(cur, bound, binding=True)
        return Alloc(cur.lineno, low, high, var)
    if head == "free":
        return Free(cur.lineno, _parse_var(cur, bound))
    if head == "free-list":
        vs = []
        while not cur.done():
            vs.append(_parse_var(cur, bound))
        return FreeList(cur.lineno, tuple(vs))
    if head == "store":
        chunk = _parse_chunk(cur)
        var = _parse_var(cur, bound)
        ofs = _parse_int(cur, "an offset")
        return Store(cur.lineno, chunk, var, ofs, _parse_value(cur, bound))
    if head == "load":
        chunk = _parse_chunk(cur)
        var = _parse_var(cur, bound)
        ofs = _parse_int(cur, "an offset")
        return Load(cur.lineno, chunk, var, ofs, ("fail",))
    raise TraceParseError(cur.lineno, col, f"unknown operation {head!r}")


def _parse_statement(cur: _Cursor, bound: set) -> Statement:
    head, col = cur.take("a statement")
    if head == "assert-valid":
        return AssertValid(cur.lineno, _parse_var(cur, bound))
    if head == "assert-bounds":
        var = _parse_var(cur, bound)
        return AssertBounds(
            cur.lineno, var, _parse_int(cur, "a low bound"), _parse_int(cur, "a high bound")
        )
    if head == "expect-fail":
        inner_head, icol = cur.take("an operation")
        inner = _parse_operation(cur, inner_head, icol, bound)
        return ExpectFail(cur.lineno, inner)
    stmt = _parse_operation(cur, head, col, bound)
    if isinstance(stmt, Load):
        cur.expect("=>")
        text, _ = cur.peek()
        if text == "fail":
            cur.take("expectation")
            expect = ("fail",)
        else:
            expect = ("value", _parse_value(cur, bound))
        return Load(stmt.line, stmt.chunk, stmt.var, stmt.offset, expect)
    return stmt


def _parse_emb_line(cur: _Cursor):
    b = _parse_int(cur, "a block id")
    cur.expect("->")
    tb = _parse_int(cur, "a target block id")
    cur.expect("+")
    delta = _parse_int(cur, "a delta")
    return b, tb, delta


def parse_trace(text: str) -> Trace:
    """Parse a trace; raises TraceParseError with position on bad input."""
    statements = []
    emb_entries = []
    in_emb = False
    bound: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno)
        if tokens[0][0] == "[emb]":
            if in_emb:
                raise TraceParseError(lineno, tokens[0][1], "duplicate [emb] section")
            in_emb = True
            cur.take("section header")
            if not cur.done():
                cur.fail("unexpected token after [emb]")
            continue
        if in_emb:
            emb_entries.append(_parse_emb_line(cur))
        else:
            stmt = _parse_statement(cur, bound)
            target = stmt.inner if isinstance(stmt, ExpectFail) else stmt
            if isinstance(target, Alloc):
                bound.add(target.var)
            statements.append(stmt)
        if not cur.done():
            cur.fail("unexpected trailing token")
    return Trace(tuple(statements), tuple(emb_entries) if in_emb else None)


def parse_embedding(text: str) -> dict:
    """Parse a relocation map: ``B -> TB + DELTA`` lines, with an optional
    ``[emb]`` header."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens or tokens[0][0] == "[emb]":
            continue
        b, tb, delta = _parse_emb_line(_Cursor(tokens, lineno))
        entries[b] = (tb, delta)
    return entries


# --- pretty-printing -----------------------------------------------------------


def _value_expr_text(v: ValueExpr) -> str:
    if isinstance(v, PtrLit):
        return f"(ptr {v.target} {v.offset})"
    return value_text(v)


def _statement_text(stmt: Statement) -> str:
    if isinstance(stmt, Alloc):
        return f"alloc {stmt.low} {stmt.high} -> {stmt.var}"
    if isinstance(stmt, Free):
        return f"free {stmt.var}"
    if isinstance(stmt, FreeList):
        return "free-list" + "".join(" " + v for v in stmt.vars)
    if isinstance(stmt, Store):
        return (
            f"store {stmt.chunk.token} {stmt.var} {stmt.offset} "
            f"{_value_expr_text(stmt.value)}"
        )
    if isinstance(stmt, Load):
        expect = "fail" if stmt.expect[0] == "fail" else _value_expr_text(stmt.expect[1])
        return f"load {stmt.chunk.token} {stmt.var} {stmt.offset} => {expect}"
    if isinstance(stmt, AssertValid):
        return f"assert-valid {stmt.var}"
    if isinstance(stmt, AssertBounds):
        return f"assert-bounds {stmt.var} {stmt.low} {stmt.high}"
    if isinstance(stmt, ExpectFail):
        return f"expect-fail {_statement_text(stmt.inner)}"
    raise TypeError(f"not a statement: {stmt!r}")


def format_trace(trace: Trace) -> str:
    lines = [_statement_text(s) for s in trace.statements]
    if trace.emb is not None:
        lines.append("[emb]")
        lines.extend(f"{b} -> {tb} + {delta}" for b, tb, delta in trace.emb)
    return "\n".join(lines) + "\n"


# --- execution -------------------------------------------------------------------


@dataclass
class StepOutcome:
    line: int
    ok: bool
    note: str


@dataclass
class TraceReport:
    ok: bool
    steps: list
    state: MemState
    env: dict
    failure: StepOutcome | None = None


class _Exec:
    def __init__(self, config: MemConfig) -> None:
        self.m = memstate.empty(config)
        self.env: dict[str, int] = {}

    def value(self, v: ValueExpr) -> Value | None:
        if isinstance(v, PtrLit):
            if isinstance(v.target, int):
                return Vptr(v.target, v.offset)
            b = self.env.get(v.target)
            if b is None:
                return None
            return Vptr(b, v.offset)
        return v

    def operate(self, stmt) -> tuple[bool, str]:
        """Apply an operation; True plus a note when it succeeded."""
        if isinstance(stmt, Alloc):
            r = memstate.alloc(self.m, stmt.low, stmt.high)
            if r is None:
                return False, "allocation rejected by the capacity policy"
            b, self.m = r
            self.env[stmt.var] = b
            return True, f"{stmt.var} = block {b}"
        if isinstance(stmt, Free):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            m2 = memstate.free(self.m, b)
            if m2 is None:
                return False, f"free of block {b} failed"
            self.m = m2
            return True, f"freed block {b}"
        if isinstance(stmt, FreeList):
            ids = []
            for var in stmt.vars:
                b = self.env.get(var)
                if b is None:
                    return False, f"{var} is unbound"
                ids.append(b)
            m2 = memstate.free_list(self.m, ids)
            if m2 is None:
                return False, f"free-list {ids} failed"
            self.m = m2
            return True, f"freed blocks {ids}"
        if isinstance(stmt, Store):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            v = self.value(stmt.value)
            if v is None:
                return False, "pointer value references an unbound variable"
            m2 = memstate.store(stmt.chunk, self.m, b, stmt.offset, v)
            if m2 is None:
                return False, f"store at ({b}, {stmt.offset}) is not a valid access"
            self.m = m2
            return True, f"stored at ({b}, {stmt.offset})"
        if isinstance(stmt, Load):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            got = memstate.load(stmt.chunk, self.m, b, stmt.offset)
            if got is None:
                return False, f"load at ({b}, {stmt.offset}) is not a valid access"
            return True, value_text(got)
        raise TypeError(f"not an operation: {stmt!r}")

    def step(self, stmt) -> tuple[bool, str]:
        """Run one statement; True when its assertion holds."""
        if isinstance(stmt, ExpectFail):
            ok, note = self.operate(stmt.inner)
            if ok:
                return False, f"operation succeeded but was expected to fail ({note})"
            return True, f"failed as expected: {note}"
        if isinstance(stmt, AssertValid):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            if not memstate.valid_block(self.m, b):
                return False, f"block {b} is not valid"
            return True, f"block {b} is valid"
        if isinstance(stmt, AssertBounds):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            got = memstate.bounds(self.m, b)
            if got != (stmt.low, stmt.high):
                return False, f"bounds of block {b} are {got}, not ({stmt.low}, {stmt.high})"
            return True, f"bounds of block {b} are {got}"
        if isinstance(stmt, Load):
            b = self.env.get(stmt.var)
            if b is None:
                return False, f"{stmt.var} is unbound"
            got = memstate.load(stmt.chunk, self.m, b, stmt.offset)
            if stmt.expect[0] == "fail":
                if got is not None:
                    return False, f"load succeeded with {value_text(got)}, expected failure"
                return True, "failed as expected"
            want = self.value(stmt.expect[1])
            if want is None:
                return False, "expected pointer references an unbound variable"
            if got is None:
                return False, f"load failed, expected {value_text(want)}"
            if got != want:
                return False, f"loaded {value_text(got)}, expected {value_text(want)}"
            return True, f"loaded {value_text(got)}"
        return self.operate(stmt)


def exec_trace(trace: Trace, config: MemConfig = DEFAULT_CONFIG) -> TraceReport:
    """Run the statements in order against an evolving state, stopping at
    the first failed assertion or unexpected operation failure."""
    ex = _Exec(config)
    steps: list[StepOutcome] = []
    for stmt in trace.statements:
        ok, note = ex.step(stmt)
        outcome = StepOutcome(stmt.line, ok, note)
        steps.append(outcome)
        if not ok:
            return TraceReport(False, steps, ex.m, ex.env, outcome)
    return TraceReport(True, steps, ex.m, ex.env)


# --- relating two traces -----------------------------------------------------------


RELATIONS = ("lessdef", "extends", "inject")


@dataclass
class RelateReport:
    ok: bool
    message: str
    steps: list = field(default_factory=list)  # (index, holds) in stepwise mode


def _check_relation(relation: str, m1: MemState, m2: MemState, emb) -> bool:
    if relation == "lessdef":
        return relations.mem_lessdef(m1, m2)
    if relation == "extends":
        return relations.mem_extends(m1, m2)
    return relations.mem_inject(emb, m1, m2)


def relate(
    trace1: Trace,
    trace2: Trace,
    relation: str,
    emb: dict | None = None,
    stepwise: bool = False,
    config: MemConfig = DEFAULT_CONFIG,
) -> RelateReport:
    """Execute both traces and check the chosen relation between their
    final states; with ``stepwise``, check it after every statement pair
    of two equal-length traces."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if relation == "inject" and emb is None:
        for t in (trace2, trace1):
            if t.emb is not None:
                emb = {b: (tb, d) for b, tb, d in t.emb}
                break
        if emb is None:
            raise ValueError("inject needs a relocation map (--emb or an [emb] section)")
    if not stepwise:
        r1 = exec_trace(trace1, config)
        if not r1.ok:
            return RelateReport(False, f"left trace failed at line {r1.failure.line}: {r1.failure.note}")
        r2 = exec_trace(trace2, config)
        if not r2.ok:
            return RelateReport(False, f"right trace failed at line {r2.failure.line}: {r2.failure.note}")
        holds = _check_relation(relation, r1.state, r2.state, emb)
        return RelateReport(holds, f"{relation} {'holds' if holds else 'fails'} on the final states")
    if len(trace1.statements) != len(trace2.statements):
        return RelateReport(
            False,
            "stepwise mode needs traces of equal length "
            f"({len(trace1.statements)} vs {len(trace2.statements)})",
        )
    ex1 = _Exec(config)
    ex2 = _Exec(config)
    steps = []
    for k, (s1, s2) in enumerate(zip(trace1.statements, trace2.statements)):
        ok1, note1 = ex1.step(s1)
        if not ok1:
            return RelateReport(False, f"left trace failed at line {s1.line}: {note1}", steps)
        ok2, note2 = ex2.step(s2)
        if not ok2:
            return RelateReport(False, f"right trace failed at line {s2.line}: {note2}", steps)
        holds = _check_relation(relation, ex1.m, ex2.m, emb)
        steps.append((k, holds))
        if not holds:
            return RelateReport(False, f"{relation} fails after statement {k + 1}", steps)
    return RelateReport(True, f"{relation} holds after every statement", steps)
