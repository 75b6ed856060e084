"""Recursive-descent parser and printer for the group DSL.

Grammar (whitespace is ignored everywhere):

    expr    := term ("x" term)*
    term    := atom | "(" expr ")" | "sum" "(" NAME (">=" INT)? ":" expr ")"
    atom    := "0" | "Q" | "Z" | "Z^" INT | "Z/" int | "Z(" base "^inf)"
             | "Z[1/" primes "]" | "rank1{" heights "}" | "pgroup(" base (";" layer)+ ")"
    int     := base ("^" exp)?
    base    := INT | NAME | "prime(" lin ")"
    exp     := INT | NAME | "(" lin ")"
    lin     := INT | INT "*"? NAME | NAME, optionally followed by ("+"|"-") INT
    primes  := INT ("," INT)* | "all" ("\\{" INT ("," INT)* "}")? | <empty>
    heights := (key ":" (INT | "inf")) ("," ...)* with key INT or "*"
    layer   := ("layer" INT "=")? expr

Names are single letters.  A name bound by an enclosing ``sum`` is a
pattern variable; any other name is a parameter (for instance the prime
``p``) which is substituted from ``bindings`` when given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import isprime

from ..fgab.group import FgGroup
from ..primes import PrimeSet
from . import ast as A


class DslError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg = msg
        self.line = line
        self.col = col
        super().__init__(f"{msg} at line {line}, column {col}" if line else msg)


class DslSyntaxError(DslError):
    pass


class DslSemanticError(DslError):
    pass


_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<kw>rank1|pgroup|prime|sum|inf|all|layer)|(?P<name>[A-Za-z])"
    r"|(?P<op>>=|[/^()\[\]{}:;,=*+\-\\])"
)


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            line, col = _linecol(text, i)
            raise DslSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            t = m.group()
            if kind == "name" and t in ("Z", "Q", "x"):
                kind = "kw"
            out.append(Tok(kind, t, i))
        i = m.end()
    out.append(Tok("eof", "", len(text)))
    return out


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, bindings: dict | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.bindings = dict(bindings or {})
        self.scope: list[str] = []

    # -- token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Tok | None = None, cls=DslSyntaxError):
        t = tok or self.tok
        line, col = _linecol(self.text, t.pos)
        raise cls(msg, line, col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("kw", "op")

    def eat(self, text: str) -> Tok:
        if not self.at(text):
            got = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {got!r}")
        t = self.tok
        self.i += 1
        return t

    def eat_int(self) -> int:
        if self.tok.kind != "int":
            self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        v = int(self.tok.text)
        self.i += 1
        return v

    # -- grammar
    def parse(self):
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        items = [self.term()]
        while self.at("x"):
            self.i += 1
            items.append(self.term())
        return A.direct_sum(items)

    def term(self):
        t = self.tok
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if self.at("sum"):
            return self.pattern_sum()
        if t.kind == "int" and t.text == "0":
            self.i += 1
            return A.ZERO
        if self.at("Q"):
            self.i += 1
            return A.Q_EXPR
        if self.at("Z"):
            return self.z_atom()
        if self.at("rank1"):
            return self.rank1()
        if self.at("pgroup"):
            return self.pgroup()
        self.error(f"expected a group, found {t.text or 'end of input'!r}")

    def pattern_sum(self):
        self.eat("sum")
        self.eat("(")
        if self.tok.kind != "name":
            self.error("expected a pattern variable")
        var = self.tok.text
        self.i += 1
        start = 1
        if self.at(">="):
            self.i += 1
            start = self.eat_int()
        self.eat(":")
        self.scope.append(var)
        body = self.expr()
        self.scope.pop()
        self.eat(")")
        return A.PatternSum(var, start, body)

    def z_atom(self):
        self.eat("Z")
        if self.at("^"):
            self.i += 1
            r = self.eat_int()
            return A.Fg(FgGroup.free(r))
        if self.at("/"):
            self.i += 1
            tok = self.tok
            order = self.int_template()
            if not A.int_vars(order) and not A.int_params(order) and A.eval_int(order, {}) == 0:
                self.error("cyclic order must be positive", tok, DslSemanticError)
            return A.cyclic(order)
        if self.at("("):
            self.i += 1
            tok = self.tok
            base = self.base()
            self.eat("^")
            self.eat("inf")
            self.eat(")")
            self.check_prime_base(base, tok)
            return A.Prufer(A.Pow(base))
        if self.at("["):
            self.i += 1
            if not (self.tok.kind == "int" and self.tok.text == "1"):
                self.error("expected '1/' in a localization")
            self.i += 1
            self.eat("/")
            ps = self.prime_set()
            self.eat("]")
            return A.Localized(ps)
        return A.Fg(FgGroup.free(1))

    def prime_set(self) -> PrimeSet:
        tok = self.tok
        if self.at("all"):
            self.i += 1
            excl = []
            if self.at("\\"):
                self.i += 1
                self.eat("{")
                excl = self.prime_list("}")
                self.eat("}")
            return PrimeSet(frozenset(excl), True)
        ps = self.prime_list("]")
        del tok
        return PrimeSet(frozenset(ps))

    def prime_list(self, closer: str) -> list[int]:
        out = []
        if self.at(closer):
            return out
        while True:
            tok = self.tok
            p = self.const_int()
            if not isprime(p):
                self.error(f"{p} is not prime", tok, DslSemanticError)
            out.append(p)
            if not self.at(","):
                return out
            self.i += 1

    def const_int(self) -> int:
        """An integer literal or a bound parameter."""
        if self.tok.kind == "int":
            return self.eat_int()
        if self.tok.kind == "name":
            name = self.tok.text
            if name in self.scope:
                self.error(f"pattern variable {name} is not allowed here")
            if name not in self.bindings:
                self.error(f"unbound parameter {name}", cls=DslSemanticError)
            self.i += 1
            return int(self.bindings[name])
        self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")

    def rank1(self):
        self.eat("rank1")
        self.eat("{")
        heights = {}
        default = 0
        seen = set()
        if not self.at("}"):
            while True:
                ktok = self.tok
                if self.at("*"):
                    self.i += 1
                    key = "*"
                else:
                    key = self.const_int()
                    if not isprime(key):
                        self.error(f"{key} is not prime", ktok, DslSemanticError)
                if key in seen:
                    self.error(f"height for {key} given twice", ktok, DslSemanticError)
                seen.add(key)
                self.eat(":")
                if self.at("inf"):
                    self.i += 1
                    h = A.INF
                else:
                    h = self.eat_int()
                if key == "*":
                    if h not in (0, A.INF):
                        self.error("default height must be 0 or inf", ktok, DslSemanticError)
                    default = h
                else:
                    heights[key] = h
                if not self.at(","):
                    break
                self.i += 1
        self.eat("}")
        chi = A.Characteristic.from_dict(heights, default)
        return A.Rank1(chi)

    def pgroup(self):
        self.eat("pgroup")
        self.eat("(")
        tok = self.tok
        base = self.base()
        self.check_prime_base(base, tok)
        layers = []
        while self.at(";"):
            self.i += 1
            if self.at("layer"):
                self.i += 1
                if self.tok.kind == "int":
                    self.i += 1
                self.eat("=")
            layers.append(self.expr())
        self.eat(")")
        if not layers:
            self.error("a p-group needs at least one layer", tok, DslSemanticError)
        return A.PGroup(A.Pow(base), tuple(layers))

    def check_prime_base(self, base, tok):
        if isinstance(base, A.Lit) and not isprime(base.value):
            self.error(f"{base.value} is not prime", tok, DslSemanticError)

    # -- integer templates
    def int_template(self) -> A.Pow:
        base = self.base()
        exp = A.Lin(0, None, 1)
        if self.at("^"):
            self.i += 1
            exp = self.exponent()
        return A.Pow(base, exp)

    def base(self):
        t = self.tok
        if t.kind == "int":
            return A.Lit(self.eat_int())
        if self.at("prime"):
            self.i += 1
            self.eat("(")
            lin = self.lin()
            self.eat(")")
            if lin.is_const:
                if lin.b < 1:
                    self.error("prime index must be at least 1", t, DslSemanticError)
            return A.PrimeAt(lin)
        if t.kind == "name":
            if t.text in self.scope:
                self.error(f"pattern variable {t.text} may only appear in exponents or prime(...)")
            self.i += 1
            if t.text in self.bindings:
                return A.Lit(int(self.bindings[t.text]))
            return A.Param(t.text)
        self.error(f"expected an integer, found {t.text or 'end of input'!r}")

    def exponent(self) -> A.Lin:
        if self.at("("):
            self.i += 1
            lin = self.lin()
            self.eat(")")
            return lin
        if self.tok.kind == "int":
            return A.Lin(0, None, self.eat_int())
        if self.tok.kind == "name":
            return self.var_lin(1)
        self.error("expected an exponent")

    def var_lin(self, a: int) -> A.Lin:
        name = self.tok.text
        if self.tok.kind != "name":
            self.error("expected a variable")
        self.i += 1
        if name not in self.scope:
            if name in self.bindings:
                return A.Lin(0, None, a * int(self.bindings[name]))
            self.error(f"{name} is not a pattern variable in scope", cls=DslSemanticError)
        return A.Lin(a, name, 0)

    def lin(self) -> A.Lin:
        if self.tok.kind == "int":
            a = self.eat_int()
            if self.at("*"):
                self.i += 1
                base = self.var_lin(a)
            elif self.tok.kind == "name":
                base = self.var_lin(a)
            else:
                base = A.Lin(0, None, a)
        else:
            base = self.var_lin(1)
        if self.at("+") or self.at("-"):
            sgn = 1 if self.tok.text == "+" else -1
            self.i += 1
            base = A.Lin(base.a, base.var, base.b + sgn * self.eat_int())
        return base


def parse(text: str, bindings: dict | None = None):
    """Parse a group description; ``bindings`` substitutes named parameters."""
    return _Parser(text, bindings).parse()


# -- printer ---------------------------------------------------------


def _primes_text(ps: PrimeSet) -> str:
    body = ",".join(str(p) for p in sorted(ps.members))
    if ps.cofinite:
        return "all" + (f"\\{{{body}}}" if body else "")
    return body


def to_text(e) -> str:
    if isinstance(e, A.Fg):
        return str(e.group)
    if isinstance(e, A.Cyclic):
        return f"Z/{e.order}"
    if isinstance(e, A.Prufer):
        return f"Z({e.p.base}^inf)"
    if isinstance(e, A.Localized):
        return f"Z[1/{_primes_text(e.primes)}]"
    if isinstance(e, A.Rank1):
        if e.chi == A.Q_EXPR.chi:
            return "Q"
        return str(e.chi)
    if isinstance(e, A.PGroup):
        layers = "; ".join(f"layer{j}={to_text(l)}" for j, l in enumerate(e.layers))
        return f"pgroup({e.p.base}; {layers})"
    if isinstance(e, A.DirectSum):
        return " x ".join(to_text(i) for i in e.items)
    if isinstance(e, A.PatternSum):
        return f"sum({e.var}>={e.start}: {to_text(e.body)})"
    raise TypeError(f"not a group expression: {e!r}")
