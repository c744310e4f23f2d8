"""Reader and writer for ``.alg`` presentation files.

    field QQ;
    generators x, y;
    N = 2;
    rel r = x*y - y*x;
    phi r -> 1;
    cap degree = 6;

Expressions are noncommutative polynomials over the rationals built from
``+ - * ^``, parentheses and literals such as ``3`` or ``3/2``; ``^`` binds
tighter than ``*``.  ``#`` starts a comment.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import FreeElement, Presentation

CAP_NAMES = ("degree", "level", "weight")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<num>\d+) | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^/=;,()])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


def tokenize(text):
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), line, pos - start + 1))
        pos = m.end()
    tokens.append(("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class AlgFile:
    generators: list
    N: int
    relations: dict                       # name -> FreeElement
    phi: dict = field(default_factory=dict)    # name -> FreeElement
    caps: dict = field(default_factory=dict)
    field_tag: str = "QQ"

    def presentation(self, degree_cap):
        return Presentation(self.generators, self.N, list(self.relations.values()), degree_cap)

    def phi_map(self, pres):
        from .deformation import PhiMap
        pairs = [(rel, self.phi.get(name, FreeElement())) for name, rel in self.relations.items()]
        return PhiMap.from_relations(pres, pairs)

    def pretty(self):
        names = self.generators
        lines = [f"field {self.field_tag};", f"generators {', '.join(names)};", f"N = {self.N};"]
        for name, rel in self.relations.items():
            lines.append(f"rel {name} = {rel.format(names)};")
        for name, val in self.phi.items():
            lines.append(f"phi {name} -> {val.format(names)};")
        for name in CAP_NAMES:
            if name in self.caps:
                lines.append(f"cap {name} = {self.caps[name]};")
        return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.gens = None

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], tok[3])

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def ident(self):
        tok = self.next()
        if tok[0] != "id":
            self.error(f"expected a name, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def integer(self):
        tok = self.next()
        if tok[0] != "num":
            self.error("expected an integer", tok)
        return int(tok[1])

    # expressions ---------------------------------------------------------

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.next()[1] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.power()
        while self.peek()[1] == "*":
            self.next()
            out = out * self.power()
        return out

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.next()
            n = self.integer()
            out = FreeElement.one()
            for _ in range(n):
                out = out * base
            return out
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.next()
            q = Fraction(int(tok[1]))
            if self.peek()[1] == "/":
                self.next()
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", tok)
                q = q / den
            return FreeElement({(): q})
        if tok[0] == "id":
            self.next()
            if self.gens is None:
                self.error("generators must be declared before expressions", tok)
            if tok[1] not in self.gens:
                self.error(f"unknown generator {tok[1]!r}", tok)
            return FreeElement.word((self.gens.index(tok[1]),))
        if tok[1] == "(":
            self.next()
            out = self.expr()
            self.expect(")")
            return out
        if tok[1] == "-":
            self.next()
            return -self.atom()
        self.error(f"unexpected {tok[1] or 'end of input'!r}", tok)

    # statements ------------------------------------------------------------

    def parse(self):
        N = None
        rels, phis, caps = {}, {}, {}
        field_tag = "QQ"
        phi_toks = {}
        while self.peek()[0] != "eof":
            kw = self.ident()
            word = kw[1]
            if word == "field":
                field_tag = self.ident()[1]
                if field_tag != "QQ":
                    self.error("only the field QQ is supported", kw)
            elif word == "generators":
                if self.gens is not None:
                    self.error("generators declared twice", kw)
                names = [self.ident()[1]]
                while self.peek()[1] == ",":
                    self.next()
                    names.append(self.ident()[1])
                if len(set(names)) != len(names):
                    self.error("duplicate generator name", kw)
                self.gens = names
            elif word == "N":
                self.expect("=")
                N = self.integer()
                if N < 2:
                    self.error("N must be at least 2", kw)
            elif word == "rel":
                name = self.ident()
                self.expect("=")
                if N is None:
                    self.error("N must be declared before relations", name)
                e = self.expr()
                if not e:
                    self.error(f"relation {name[1]!r} is zero", name)
                if any(len(w) != N for w in e):
                    self.error(f"relation {name[1]!r} is not homogeneous of degree {N}", name)
                if name[1] in rels:
                    self.error(f"relation {name[1]!r} defined twice", name)
                rels[name[1]] = e
            elif word == "phi":
                name = self.ident()
                self.expect("->")
                e = self.expr()
                if N is not None and any(len(w) >= N for w in e):
                    self.error(f"phi value for {name[1]!r} must have degree below N", name)
                phis[name[1]] = e
                phi_toks[name[1]] = name
            elif word == "cap":
                name = self.ident()
                if name[1] not in CAP_NAMES:
                    self.error(f"unknown cap {name[1]!r}", name)
                self.expect("=")
                caps[name[1]] = self.integer()
            else:
                self.error(f"unknown statement {word!r}", kw)
            self.expect(";")
        if self.gens is None:
            raise ParseError("no generators declared")
        if N is None:
            raise ParseError("N is not declared")
        if not rels:
            raise ParseError("no relations declared")
        for name, tok in phi_toks.items():
            if name not in rels:
                self.error(f"phi refers to unknown relation {name!r}", tok)
        return AlgFile(self.gens, N, rels, phis, caps, field_tag)


def parse(text):
    return _Parser(text).parse()


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
