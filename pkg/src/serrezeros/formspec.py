"""A small expression language for building forms from generators.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? INT)?
    atom   := INT | NAME | NAME '(' INT ')' | '(' expr ')'

Names: E2, E4, E6, Ek / E_k, Delta, j, E2p, FrickeE(k).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .generators import (DEFAULT_TRUNCATION, ModularForm, check_level, delta, e2p, eisenstein,
                         fricke_eisenstein, j_invariant)


class FormSpecError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise FormSpecError(f"unexpected character {text[i]!r}", text, i)
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


_EK = re.compile(r"E_?(\d+)$")


class _Parser:
    def __init__(self, text: str, level: int, N: int):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.level = level
        self.N = N

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None) -> _Tok:
        t = self.toks[self.i]
        if (value is not None and t.value != value) or (kind is not None and t.kind != kind):
            want = value if value is not None else kind
            got = t.value or "end of input"
            raise FormSpecError(f"expected {want}, found {got!r}", self.text, t.pos)
        self.i += 1
        return t

    def fail(self, msg: str, pos: int):
        raise FormSpecError(msg, self.text, pos)

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.fail(f"unexpected {t.value!r}", t.pos)
        return v

    def expr(self):
        v = self.term()
        while self.peek().value in ("+", "-"):
            t = self.take()
            rhs = self.term()
            v = self._apply(t, v, rhs)
        return v

    def term(self):
        v = self.unary()
        while self.peek().value in ("*", "/"):
            t = self.take()
            rhs = self.unary()
            v = self._apply(t, v, rhs)
        return v

    def unary(self):
        if self.peek().value == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().value == "^":
            t = self.take()
            sign = 1
            if self.peek().value == "-":
                self.take()
                sign = -1
            n = sign * int(self.take(kind="int").value)
            if isinstance(base, Fraction):
                if n < 0 and base == 0:
                    self.fail("zero to a negative power", t.pos)
                return base ** n
            try:
                return base ** n
            except (ValueError, ZeroDivisionError) as exc:
                self.fail(str(exc), t.pos)
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return Fraction(int(t.value))
        if t.value == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if t.kind == "name":
            self.take()
            arg = None
            if self.peek().value == "(":
                self.take()
                arg = int(self.take(kind="int").value)
                self.take(")")
            return self.generator(t.value, arg, t.pos)
        self.fail(f"unexpected {t.value or 'end of input'!r}", t.pos)

    def generator(self, name: str, arg: int | None, pos: int) -> ModularForm:
        p, N = self.level, self.N
        try:
            if name == "FrickeE":
                if arg is None:
                    self.fail("FrickeE needs a weight argument, e.g. FrickeE(4)", pos)
                if p == 1:
                    self.fail("FrickeE(k) is a level p > 1 generator; use E_k at level 1", pos)
                return fricke_eisenstein(arg, p, N)
            if arg is not None:
                self.fail(f"{name} takes no argument", pos)
            if name == "E2p":
                return e2p(p, N)
            if name in ("Delta", "j") or _EK.match(name):
                if p != 1:
                    self.fail(f"{name} is not a generator at level {p}", pos)
                if name == "Delta":
                    return delta(N)
                if name == "j":
                    return j_invariant(N)
                return eisenstein(int(_EK.match(name).group(1)), N)
        except FormSpecError:
            raise
        except ValueError as exc:
            self.fail(str(exc), pos)
        self.fail(f"unknown generator {name!r}", pos)

    def _apply(self, tok: _Tok, a, b):
        op = tok.value
        try:
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if isinstance(b, Fraction) and b == 0:
                self.fail("division by zero", tok.pos)
            return a / b
        except FormSpecError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(str(exc), tok.pos)


def parse_form_spec(text: str, level: int = 1, truncation: int = DEFAULT_TRUNCATION) -> ModularForm:
    """Evaluate a form expression at the given level through O(q^truncation)."""
    check_level(level)
    if not text.strip():
        raise FormSpecError("empty form spec", text, 0)
    v = _Parser(text, level, truncation).parse()
    if isinstance(v, Fraction):
        raise FormSpecError("expression is a bare scalar, not a form", text, 0)
    return v.with_series(v.series, text.strip())
