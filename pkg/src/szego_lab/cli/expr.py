"""A small parser for real trigonometric polynomials in ``x``.

Grammar (whitespace ignored)::

    expr   := ["+" | "-"] term (("+" | "-") term)*
    term   := number ["*" trig] | trig ["*" number]
    trig   := ("cos" | "sin") "(" [integer "*"] "x" ")"

``c*cos(k*x)`` contributes ``c/2`` at ``+-k``; ``c*sin(k*x)`` contributes
``-i c/2`` at ``+k`` and ``+i c/2`` at ``-k``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..fourier import TrigPoly

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*()]))"
)
FUNCTIONS = ("cos", "sin")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.table: dict[int, complex] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, value: str | None = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = repr(value) if value is not None else {"name": "cos/sin or x", "number": "a number"}.get(kind, kind)
            got = repr(tok.value) if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected {want}, found {got}", self.text, tok.pos)
        self.i += 1
        return tok

    def accept(self, kind: str, value: str) -> bool:
        tok = self.peek()
        if tok.kind == kind and tok.value == value:
            self.i += 1
            return True
        return False

    def add(self, k: int, c: complex) -> None:
        self.table[k] = self.table.get(k, 0) + c

    def parse(self) -> dict[int, complex]:
        sign = -1.0 if self.accept("op", "-") else 1.0
        if sign > 0:
            self.accept("op", "+")
        self.term(sign)
        while self.peek().kind != "end":
            tok = self.peek()
            if self.accept("op", "+"):
                self.term(1.0)
            elif self.accept("op", "-"):
                self.term(-1.0)
            else:
                raise ExprSyntaxError(f"expected '+' or '-', found {tok.value!r}", self.text, tok.pos)
        return self.table

    def term(self, sign: float) -> None:
        tok = self.peek()
        if tok.kind == "number":
            c = sign * float(self.take("number").value)
            if self.accept("op", "*"):
                self.trig(c)
            else:
                self.add(0, c)
        elif tok.kind == "name":
            c = sign
            kind, k = self.trig_head()
            if self.accept("op", "*"):
                c *= float(self.take("number").value)
            self.emit(kind, k, c)
        else:
            got = repr(tok.value) if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected a number or cos/sin, found {got}", self.text, tok.pos)

    def trig(self, c: float) -> None:
        kind, k = self.trig_head()
        self.emit(kind, k, c)

    def trig_head(self) -> tuple[str, int]:
        tok = self.take("name")
        if tok.value not in FUNCTIONS:
            raise ExprSyntaxError(f"unsupported function {tok.value!r}", self.text, tok.pos)
        self.take("op", "(")
        k = 1
        nxt = self.peek()
        if nxt.kind == "number":
            if not re.fullmatch(r"\d+", nxt.value) or int(nxt.value) < 1:
                raise ExprSyntaxError("frequency must be an integer >= 1", self.text, nxt.pos)
            k = int(self.take("number").value)
            self.take("op", "*")
        var = self.take("name")
        if var.value != "x":
            raise ExprSyntaxError(f"expected variable 'x', found {var.value!r}", self.text, var.pos)
        self.take("op", ")")
        return tok.value, k

    def emit(self, kind: str, k: int, c: float) -> None:
        if kind == "cos":
            self.add(k, c / 2)
            self.add(-k, c / 2)
        else:
            self.add(k, -0.5j * c)
            self.add(-k, 0.5j * c)


def parse_symbol_expr(text: str) -> TrigPoly:
    """Exact Fourier coefficient table of a real trigonometric polynomial.

    >>> parse_symbol_expr("0.2*cos(x)").to_dict()
    {-1: (0.1+0j), 1: (0.1+0j)}
    """
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    table = _Parser(text).parse()
    return TrigPoly.from_dict(table)


def _fmt(c: float) -> str:
    return repr(float(c))


def format_symbol_expr(p: TrigPoly, atol: float = 0.0) -> str:
    """Canonical text for a real-valued ``TrigPoly`` (inverse of :func:`parse_symbol_expr`).

    Floats are written with ``repr`` so that reparsing is exact.
    """
    if not p.is_real_valued(atol=max(atol, 1e-13)):
        raise ValueError("only real-valued trigonometric polynomials have a cos/sin form")
    terms: list[tuple[float, str]] = []
    c0 = p.coeff(0).real
    if c0 != 0:
        terms.append((c0, ""))
    for k in range(1, p.degree + 1):
        ck, cmk = p.coeff(k), p.coeff(-k)
        a = (ck + cmk).real
        b = (1j * (ck - cmk)).real
        if abs(a) > atol:
            terms.append((a, f"*cos({k}*x)"))
        if abs(b) > atol:
            terms.append((b, f"*sin({k}*x)"))
    if not terms:
        return "0"
    out = []
    for i, (c, tail) in enumerate(terms):
        if i == 0:
            out.append(_fmt(c) + tail)
        else:
            out.append((" - " if c < 0 else " + ") + _fmt(abs(c)) + tail)
    return "".join(out)
