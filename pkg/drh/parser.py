"""
Gramática das expressões:

    expr   := ["-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := atom ("^" ["-"] int)?
    atom   := rational | param | "eps" | "u[" int "," int "]" | "(" expr ")"

Expoentes negativos só valem para parâmetros localizados.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from drh import ExprSyntaxError
from drh.expr import DiffPoly
from drh.models.caps import Context

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, op, end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            break
        number, name, op = match.groups()
        start = match.start(match.lastindex) if match.lastindex else pos
        if number is not None:
            tokens.append(Token("int", number, start))
        elif name is not None:
            tokens.append(Token("name", name, start))
        elif op is not None:
            if op not in "+-*/^()[],":
                raise ExprSyntaxError(f"Caractere inesperado {op!r}", start)
            tokens.append(Token("op", op, start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.ctx = ctx
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.i]

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.current
        if not self.accept(text):
            raise ExprSyntaxError(f"Esperado {text!r}, encontrado {tok.text!r}", tok.pos)
        return tok

    def integer(self) -> int:
        tok = self.current
        if tok.kind != "int":
            raise ExprSyntaxError(f"Esperado inteiro, encontrado {tok.text!r}", tok.pos)
        self.i += 1
        return int(tok.text)

    def parse(self) -> DiffPoly:
        value = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"Sobra inesperada {self.current.text!r}", self.current.pos)
        return value

    def expr(self) -> DiffPoly:
        negative = self.accept("-")
        value = self.term()
        if negative:
            value = -value
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> DiffPoly:
        value = self.factor()
        while self.accept("*"):
            value = value * self.factor()
        return value

    def factor(self) -> DiffPoly:
        start = self.current
        base, kind = self.atom()
        if not self.accept("^"):
            return base
        negative = self.accept("-")
        exponent = self.integer()
        if negative:
            exponent = -exponent
        if kind == "param":
            return DiffPoly.param(self.ctx, start.text, exponent)
        if exponent < 0:
            raise ExprSyntaxError("Expoente negativo fora de parâmetro", start.pos)
        return base**exponent

    def atom(self) -> tuple[DiffPoly, str]:
        tok = self.current
        if tok.kind == "int":
            self.i += 1
            value = Fraction(int(tok.text))
            nxt = self.tokens[self.i]
            if nxt.kind == "op" and nxt.text == "/" and self.tokens[self.i + 1].kind == "int":
                self.i += 1
                denominator = self.integer()
                if denominator == 0:
                    raise ExprSyntaxError("Divisão por zero", nxt.pos)
                value /= denominator
            return DiffPoly.constant(self.ctx, value), "number"
        if tok.kind == "name":
            self.i += 1
            if tok.text == "eps":
                return DiffPoly.eps(self.ctx), "eps"
            if tok.text == "u" and self.current.text == "[":
                self.expect("[")
                alpha = self.integer()
                self.expect(",")
                k = self.integer()
                self.expect("]")
                return DiffPoly.var(self.ctx, alpha, k), "jet"
            return DiffPoly.param(self.ctx, tok.text), "param"
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value, "group"
        raise ExprSyntaxError(f"Átomo inesperado {tok.text!r}", tok.pos)


def parse_expr(text: str, ctx: Context) -> DiffPoly:
    """Lê uma expressão da gramática e devolve o DiffPoly canônico."""
    return _Parser(text, ctx).parse()
