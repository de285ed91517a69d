"""Text format for spaces, functions, sets, series and tasks.

    space S = lim(pt ; pt, lim(; pt))
    func f on S = (1 ; 0 ; 0, (1 ; ; 0) drift 1/2 | 0.1: 3)
    set A on S = (1 ; 0 ; 1, 0)
    series s on S = [f, (0 ; 1 ; 0)] tail f ratio -1/2
    task osc(f, 2)

A bare rational (or bit) stands for the constant annotation of the matching
subspace.  ``| c.m: x`` overrides tail copy ``c`` of period member ``m``;
override values are absolute, drift is not added to them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .constructions import SeriesSpec
from .func import FuncTree, const
from .space import Space, SubsetTree, uniform


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.reason = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()\[\];,=/|:.ε])")


@dataclass(frozen=True)
class Token:
    kind: str  # int | name | sym | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise DSLError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind is not None:
            out.append(Token(kind, m.group(kind), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


@dataclass(frozen=True)
class Task:
    verb: str
    args: tuple[str, ...]


@dataclass
class Document:
    spaces: dict = field(default_factory=dict)  # name -> Space
    funcs: dict = field(default_factory=dict)  # name -> (space name, FuncTree)
    sets: dict = field(default_factory=dict)  # name -> (space name, SubsetTree)
    series: dict = field(default_factory=dict)  # name -> (space name, SeriesSpec)
    tasks: list = field(default_factory=list)

    def names(self) -> set:
        return set(self.spaces) | set(self.funcs) | set(self.sets) | set(self.series)

    def func(self, name: str) -> FuncTree:
        if name not in self.funcs:
            raise KeyError(f"unknown function {name!r}")
        return self.funcs[name][1]

    def set(self, name: str) -> SubsetTree:
        if name not in self.sets:
            raise KeyError(f"unknown set {name!r}")
        return self.sets[name][1]

    def get_series(self, name: str) -> SeriesSpec:
        if name not in self.series:
            raise KeyError(f"unknown series {name!r}")
        return self.series[name][1]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.doc = Document()

    # -- token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> DSLError:
        tok = tok or self.peek()
        line, col = _line_col(self.text, tok.pos)
        return DSLError(msg, line, col)

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("sym", "name") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.peek()
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def name(self) -> Token:
        t = self.peek()
        if t.kind != "name":
            raise self.error(f"expected a name, found {t.text or 'end of input'!r}")
        return self.next()

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            raise self.error(f"expected an integer, found {t.text or 'end of input'!r}")
        self.next()
        return int(t.text)

    def rational(self) -> Fraction:
        start = self.peek()
        num = self.integer()
        if self.at("/"):
            self.next()
            den_tok = self.peek()
            den = self.integer()
            if den == 0:
                raise self.error("malformed rational: zero denominator", start)
            if den < 0:
                raise self.error("malformed rational: negative denominator", den_tok)
            return Fraction(num, den)
        return Fraction(num)

    # -- statements
    def document(self) -> Document:
        while self.peek().kind != "end":
            kw = self.name()
            if kw.text == "space":
                self.space_stmt()
            elif kw.text == "func":
                self.annotated_stmt(self.doc.funcs, self.func)
            elif kw.text == "set":
                self.annotated_stmt(self.doc.sets, self.subset)
            elif kw.text == "series":
                self.series_stmt()
            elif kw.text == "task":
                self.task_stmt()
            else:
                raise self.error(f"unknown statement {kw.text!r}", kw)
        return self.doc

    def fresh_name(self) -> str:
        tok = self.name()
        if tok.text in self.doc.names():
            raise self.error(f"duplicate name {tok.text!r}", tok)
        return tok.text

    def space_ref(self) -> tuple[str, Space]:
        tok = self.name()
        if tok.text not in self.doc.spaces:
            raise self.error(f"unknown space {tok.text!r}", tok)
        return tok.text, self.doc.spaces[tok.text]

    def space_stmt(self):
        name = self.fresh_name()
        self.expect("=")
        self.doc.spaces[name] = self.space()

    def annotated_stmt(self, table: dict, reader):
        name = self.fresh_name()
        self.expect("on")
        sname, sp = self.space_ref()
        self.expect("=")
        table[name] = (sname, reader(sp, True))

    def series_stmt(self):
        name = self.fresh_name()
        self.expect("on")
        sname, sp = self.space_ref()
        self.expect("=")
        self.expect("[")
        terms = []
        if not self.at("]"):
            terms.append(self.func_or_ref(sp))
            while self.at(","):
                self.next()
                terms.append(self.func_or_ref(sp))
        self.expect("]")
        tail, ratio = None, Fraction(0)
        if self.at("tail"):
            self.next()
            tail = self.func_or_ref(sp)
            self.expect("ratio")
            tok = self.peek()
            ratio = self.rational()
            if not abs(ratio) < 1:
                raise self.error("tail ratio must have absolute value below 1", tok)
        self.doc.series[name] = (sname, SeriesSpec(tuple(terms), tail, ratio, sp))

    def func_or_ref(self, sp: Space) -> FuncTree:
        tok = self.peek()
        if tok.kind == "name":
            self.next()
            if tok.text not in self.doc.funcs:
                raise self.error(f"unknown function {tok.text!r}", tok)
            f = self.doc.funcs[tok.text][1]
            if f.shape != sp:
                raise self.error(f"function {tok.text!r} lives on a different space", tok)
            return f
        return self.func(sp, True)

    def task_stmt(self):
        verb = self.name().text
        open_tok = self.expect("(")
        depth, start = 1, open_tok.pos + 1
        while depth:
            t = self.next()
            if t.kind == "end":
                raise self.error("unclosed task argument list", open_tok)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
        raw = self.text[start:self.toks[self.i - 1].pos]
        raw = re.sub(r"#[^\n]*", "", raw)
        args = tuple(a.strip() for a in raw.split(",")) if raw.strip() else ()
        self.doc.tasks.append(Task(verb, args))

    # -- values
    def space(self) -> Space:
        tok = self.peek()
        if self.at("pt"):
            self.next()
            return Space()
        if self.at("lim"):
            self.next()
            self.expect("(")
            prefix = self.space_list()
            self.expect(";")
            period = self.space_list()
            self.expect(")")
            return Space(tuple(prefix), tuple(period))
        if tok.kind == "name":
            return self.space_ref()[1]
        raise self.error(f"expected a space, found {tok.text or 'end of input'!r}")

    def space_list(self) -> list[Space]:
        out = []
        if self.at(";") or self.at(")"):
            return out
        out.append(self.space())
        while self.at(","):
            self.next()
            out.append(self.space())
        return out

    def _items(self, shapes: tuple[Space, ...], reader, what: str) -> list:
        out = []
        tok = self.peek()
        if not (self.at(";") or self.at(")") or self.at("|") or self.at("drift")):
            while True:
                if len(out) >= len(shapes):
                    raise self.error(f"shape mismatch: too many {what} entries")
                out.append(reader(shapes[len(out)]))
                if not self.at(","):
                    break
                self.next()
        if len(out) != len(shapes):
            raise self.error(f"shape mismatch: expected {len(shapes)} {what} entries, found {len(out)}", tok)
        return out

    def _overrides(self, sp: Space, reader) -> dict:
        out = {}
        if not self.at("|"):
            return out
        self.next()
        while True:
            tok = self.peek()
            c = self.integer()
            self.expect(".")
            m = self.integer()
            self.expect(":")
            if c < 0 or not 0 <= m < len(sp.period):
                raise self.error(f"shape mismatch: no tail copy {c}.{m}", tok)
            if (c, m) in out:
                raise self.error(f"copy {c}.{m} overridden twice", tok)
            out[(c, m)] = reader(sp.period[m])
            if not self.at(","):
                return out
            self.next()

    def func(self, sp: Space, top: bool = False) -> FuncTree:
        if self.at("("):
            self.next()
            v = self.rational()
            self.expect(";")
            prefix = self._items(sp.prefix, self.func, "prefix")
            self.expect(";")
            period = self._items(sp.period, self.func, "period")
            drift = self._drift(sp)
            ovr = self._overrides(sp, self.func)
            self.expect(")")
            return FuncTree(v, tuple(prefix), tuple(period), drift, ovr)
        v = self.rational()
        # inside a list a trailing drift belongs to the enclosing node
        drift = self._drift(sp) if top else Fraction(0)
        base = const(sp, v)
        return FuncTree(v, base.prefix, base.period, drift)

    def _drift(self, sp: Space) -> Fraction:
        if not self.at("drift"):
            return Fraction(0)
        tok = self.next()
        d = self.rational()
        if d != 0 and not sp.period:
            raise self.error("drift needs a tail", tok)
        return d

    def bit(self) -> bool:
        tok = self.peek()
        if tok.kind != "int" or tok.text not in ("0", "1"):
            raise self.error(f"expected 0 or 1, found {tok.text or 'end of input'!r}")
        self.next()
        return tok.text == "1"

    def subset(self, sp: Space, top: bool = False) -> SubsetTree:
        if self.at("("):
            self.next()
            b = self.bit()
            self.expect(";")
            prefix = self._items(sp.prefix, self.subset, "prefix")
            self.expect(";")
            period = self._items(sp.period, self.subset, "period")
            ovr = self._overrides(sp, self.subset)
            self.expect(")")
            return SubsetTree(b, tuple(prefix), tuple(period), ovr)
        return uniform(sp, self.bit())


def parse(text: str) -> Document:
    return _Parser(text).document()


def parse_func(text: str, space: Space) -> FuncTree:
    p = _Parser(text)
    f = p.func(space, True)
    if p.peek().kind != "end":
        raise p.error("trailing input")
    return f


def parse_space(text: str) -> Space:
    p = _Parser(text)
    s = p.space()
    if p.peek().kind != "end":
        raise p.error("trailing input")
    return s


def parse_set(text: str, space: Space) -> SubsetTree:
    p = _Parser(text)
    s = p.subset(space)
    if p.peek().kind != "end":
        raise p.error("trailing input")
    return s


# ---------------------------------------------------------------------------
# Printing


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_space(sp: Space) -> str:
    if not sp.prefix and not sp.period:
        return "pt"
    pre = ", ".join(print_space(p) for p in sp.prefix)
    per = ", ".join(print_space(m) for m in sp.period)
    return f"lim({_sections([pre, per])})"


def _sections(parts: list[str]) -> str:
    # "a ; b ; c" with empty parts collapsing to "a ; ; c"
    out = parts[0]
    for p in parts[1:]:
        out = (out + " ;" if out else ";") + (" " + p if p else "")
    return out


def _ovr_text(t, shape: Space, printer) -> str:
    if not t.overrides:
        return ""
    items = ", ".join(f"{c}.{m}: {printer(sub, shape.period[m], False)}" for (c, m), sub in t.overrides)
    return f" | {items}"


def print_func(f: FuncTree, shape: Optional[Space] = None, top: bool = True) -> str:
    shape = shape or f.shape
    base = const(shape, f.value)
    drift = f" drift {format_rational(f.drift)}" if f.drift else ""
    if f == FuncTree(f.value, base.prefix, base.period, f.drift) and (top or not f.drift):
        return format_rational(f.value) + drift
    pre = ", ".join(print_func(p, s, False) for p, s in zip(f.prefix, shape.prefix))
    per = ", ".join(print_func(m, s, False) for m, s in zip(f.period, shape.period))
    return f"({_sections([format_rational(f.value), pre, per])}{drift}{_ovr_text(f, shape, print_func)})"


def print_set(s: SubsetTree, shape: Optional[Space] = None, top: bool = True) -> str:
    shape = shape or s.shape
    if s.is_full:
        return "1"
    if s.is_empty:
        return "0"
    pre = ", ".join(print_set(p, sh) for p, sh in zip(s.prefix, shape.prefix))
    per = ", ".join(print_set(m, sh) for m, sh in zip(s.period, shape.period))
    return f"({_sections([str(int(s.member)), pre, per])}{_ovr_text(s, shape, print_set)})"


def print_document(doc: Document) -> str:
    lines = []
    for name, sp in doc.spaces.items():
        lines.append(f"space {name} = {print_space(sp)}")
    for name, (sname, s) in doc.sets.items():
        lines.append(f"set {name} on {sname} = {print_set(s)}")
    for name, (sname, f) in doc.funcs.items():
        lines.append(f"func {name} on {sname} = {print_func(f)}")
    for name, (sname, spec) in doc.series.items():
        terms = ", ".join(print_func(t) for t in spec.terms)
        tail = ""
        if spec.tail is not None:
            tail = f" tail {print_func(spec.tail)} ratio {format_rational(spec.ratio)}"
        lines.append(f"series {name} on {sname} = [{terms}]{tail}")
    for t in doc.tasks:
        lines.append(f"task {t.verb}({', '.join(t.args)})")
    return "\n".join(lines) + "\n"
