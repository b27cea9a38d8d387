"""Expression grammar and canonical printer for algebra elements.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := NUMBER | IDENT | 'inv(' IDENT ')' | 'id(' VERTEX ')' | '(' expr ')'

``*`` is concatenation in the algebra (right factor acts first); ``NUMBER`` is
an integer or ``p/q``; a bare number stands for that multiple of 1 = Σ_v e_v.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import TYPE_CHECKING

from .core import AlgebraError, NCElement, Word, word_key

if TYPE_CHECKING:
    from .core import Presentation

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        num, ident, op = m.groups()
        pos = m.end()
        if num:
            tokens.append(("num", num))
        elif ident in ("id", "inv") and text[pos:pos + 1] == "(":
            depth, start = 0, pos
            while pos < len(text):
                depth += {"(": 1, ")": -1}.get(text[pos], 0)
                pos += 1
                if depth == 0:
                    break
            if depth:
                raise AlgebraError(f"unbalanced parenthesis in {text!r}")
            tokens.append((ident, text[start + 1:pos - 1].strip()))
        elif ident:
            tokens.append(("ident", ident))
        elif op in "+-*()":
            tokens.append(("op", op))
        else:
            raise AlgebraError(f"unexpected character {op!r} in {text!r}")
    return tokens


class _Parser:
    def __init__(self, text: str, pres: "Presentation"):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.pres = pres

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "")

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = _add(self.pres, value, rhs if op == "+" else _neg(rhs))
        return value

    def term(self):
        negate = False
        if self.peek() == ("op", "-"):
            self.take()
            negate = True
        value = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            value = _mul(value, self.factor())
        return _neg(value) if negate else value

    def factor(self):
        kind, val = self.take()
        pres = self.pres
        if kind == "num":
            return Fraction(val)
        if kind == "ident":
            if val in pres.generators:
                return pres.gen(val)
            if val in pres.macros:
                return pres.macro(val)
            raise AlgebraError(f"unknown identifier {val!r} in {pres.name}")
        if kind == "inv":
            return pres.inverse_of(val)
        if kind == "id":
            return pres.e(val)
        if (kind, val) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                raise AlgebraError(f"expected ')' in {self.text!r}")
            return value
        raise AlgebraError(f"unexpected token {val!r} in {self.text!r}")


def _as_element(pres, x) -> NCElement:
    return pres.one() * x if isinstance(x, Fraction) else x


def _add(pres, a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _as_element(pres, a) + _as_element(pres, b)


def _neg(a):
    return -a


def _mul(a, b):
    if isinstance(a, Fraction):
        return b * a
    return a * b


def evaluate(text: str, pres: "Presentation", reduce: bool = True) -> NCElement:
    """Parse *text* into an element of *pres*.

    With ``reduce=False`` the expression is read in the free path algebra,
    i.e. no rewrite rule is applied (used to read rule right-hand sides).
    """
    target = pres if reduce else pres.free_copy()
    parser = _Parser(text, target)
    value = parser.expr()
    if parser.peek()[0] != "end":
        raise AlgebraError(f"trailing input in {text!r}")
    value = _as_element(target, value)
    if target is not pres:
        value = NCElement(pres, value.terms)
    return value


def format_word(pres: "Presentation", w: Word) -> str:
    return "*".join(w)


def format_coeff_word(c: Fraction, word: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    c = abs(c)
    body = word if c == 1 else f"{c}*{word}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def format_element(a: NCElement) -> str:
    if not a.terms:
        return "0"
    items = sorted(a.terms.items(), key=lambda t: word_key(a.pres, t[0]))
    return "".join(
        format_coeff_word(c, format_word(a.pres, w), i == 0) for i, (w, c) in enumerate(items)
    )
