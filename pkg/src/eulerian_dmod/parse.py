"""Text grammars for operators, Laurent polynomials, ideals, modules and Cech specs.

Operators:  ``x1^2*d1^[2] + 3*x1*d1 - 1/2*d2``; ``d1^k`` is the k-th power of
d1 (so ``d1^2 = 2*d1^[2]``), ``d1^[k]`` the divided power.
Laurent:    same syntax without d's, negative x exponents allowed.
Ideals:     ``x1*x2, x2^2*x3`` or ``m``.
Modules:    ``R``, ``R_loc{x1,x3}``, ``starE``, ``starE_model{x1}`` with optional ``(shift=k)``.
Specs:      ``H2_m H1_(x1*x2)(R)``, nesting read right to left.
Every printer in this module reparses to an equal value.
"""
from __future__ import annotations

import re

from .cech import CechSpec, MonomialIdeal
from .region import RegionModule, format_module, make_module
from .scalars import QQ, CharSpec, InputError
from .weyl import DOp, format_dop


class ParseError(InputError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.column = line, col


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[xd]\d+)|(?P<dpow>\^\[)|(?P<sym>[-+*/^()\]]))")


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Laurent:
    """Commutative Laurent polynomial used while parsing: {exponent: raw}."""

    def __init__(self, n: int, char: CharSpec, terms: dict):
        self.n, self.char = n, char
        self.terms = {k: v for k, v in terms.items() if v != 0}

    @classmethod
    def const(cls, n, char, c):
        return cls(n, char, {(0,) * n: char.reduce(c)})

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = self.char.add(out.get(k, 0), v)
        return _Laurent(self.n, self.char, out)

    def __neg__(self):
        return _Laurent(self.n, self.char, {k: self.char.neg(v) for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        out: dict = {}
        for a, u in self.terms.items():
            for b, v in o.terms.items():
                k = tuple(i + j for i, j in zip(a, b))
                out[k] = self.char.add(out.get(k, 0), self.char.mul(u, v))
        return _Laurent(self.n, self.char, out)

    def scale(self, c):
        return _Laurent(self.n, self.char, {k: self.char.mul(v, c) for k, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1 or next(iter(self.terms.values())) != 1:
                raise ValueError("only monic monomials have negative powers")
            (a,) = self.terms
            return _Laurent(self.n, self.char, {tuple(k * v for v in a): 1})
        out = _Laurent.const(self.n, self.char, 1)
        for _ in range(k):
            out = out * self
        return out


class _ExprParser:
    def __init__(self, text: str, n: int, char: CharSpec, laurent: bool):
        self.text, self.n, self.char, self.laurent = text, n, char, laurent
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def const(self, c):
        if self.laurent:
            return _Laurent.const(self.n, self.char, c)
        return DOp.const(self.n, c, self.char)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        val = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return val

    def expr(self):
        sign = 1
        if self.peek() == ("sym", "-", self.peek()[2]):
            self.take()
            sign = -1
        elif self.peek()[1] == "+" and self.peek()[0] == "sym":
            self.take()
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.power()
        while self.peek()[0] == "sym" and self.peek()[1] in "*/":
            op = self.take()[1]
            if op == "*":
                val = val * self.power()
            else:
                tok = self.peek()
                den = int(self.take("int")[1])
                if self.char.reduce(den) == 0:
                    self.fail("division by zero in this characteristic", tok)
                val = val.scale(self.char.inv(self.char.reduce(den)))
        return val

    def power(self):
        tok = self.peek()
        if tok[0] == "var" and tok[1][0] == "d" and self.toks[self.i + 1][0] == "dpow":
            i = self._index(tok)
            self.take()
            self.take("dpow")
            j = int(self.take("int")[1])
            self.take("sym", "]")
            return DOp.d(self.n, i, j, self.char)
        base = self.atom()
        if self.peek()[0] == "sym" and self.peek()[1] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "sym" and self.peek()[1] == "-":
                neg_tok = self.take()
                if not (self.laurent and tok[0] == "var"):
                    self.fail("negative exponents only apply to variables in Laurent mode", neg_tok)
                neg = True
            k = int(self.take("int")[1])
            base = base ** (-k if neg else k)
        return base

    def _index(self, tok):
        i = int(tok[1][1:])
        if not 1 <= i <= self.n:
            self.fail(f"unknown variable index {i} (n={self.n})", tok)
        return i

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.const(int(tok[1]))
        if tok[0] == "var":
            self.take()
            i = self._index(tok)
            if tok[1][0] == "x":
                if self.laurent:
                    return _Laurent(self.n, self.char, {tuple(int(j == i - 1) for j in range(self.n)): 1})
                return DOp.x(self.n, i, 1, self.char)
            if self.laurent:
                self.fail("operators are not allowed in a Laurent polynomial", tok)
            return DOp.d(self.n, i, 1, self.char)
        if tok[0] == "sym" and tok[1] == "(":
            self.take()
            val = self.expr()
            self.take("sym", ")")
            return val
        self.fail(f"unexpected {tok[1] or 'end of input'!r}")


def parse_operator(text: str, n: int, char: CharSpec = QQ) -> DOp:
    return _ExprParser(text, n, char, False).parse()


def parse_laurent(text: str, n: int, char: CharSpec = QQ) -> dict:
    """Laurent polynomial as {exponent tuple: raw coefficient}."""
    return dict(_ExprParser(text, n, char, True).parse().terms)


def _monomial_str(a) -> str:
    fs = [f"x{i}" if v == 1 else f"x{i}^{v}" for i, v in enumerate(a, 1) if v]
    return "*".join(fs) if fs else "1"


def format_laurent(f: dict, char: CharSpec = QQ) -> str:
    """Printer matching :func:`parse_laurent`."""
    terms = [(a, c) for a, c in sorted(f.items(), reverse=True) if c != 0]
    if not terms:
        return "0"
    out = []
    for a, c in terms:
        neg = not char.p and c < 0
        mag = -c if neg else c
        mono = _monomial_str(a)
        if mono == "1":
            body = char.format(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{char.format(mag)}*{mono}"
        out.append(("-" if neg else "+", body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    return s + "".join(f" {sg} {b}" for sg, b in out[1:])


# ideals -------------------------------------------------------------------------------

_MONO_FACTOR = re.compile(r"\s*x(\d+)(?:\s*\^\s*(\d+))?\s*")


def parse_ideal(text: str, n: int) -> MonomialIdeal:
    s = text.strip()
    if s == "m":
        return MonomialIdeal.maximal(n)
    if s.startswith("(") and s.endswith(")"):
        base = text.index("(") + 1
        s = text[base:text.rindex(")")]
    else:
        base = 0
        s = text
    gens, pos = [], 0
    for chunk in s.split(","):
        exps = [0] * n
        off = 0
        factors = chunk.split("*")
        if not chunk.strip():
            raise ParseError("empty generator", text, base + pos)
        for f in factors:
            m = _MONO_FACTOR.fullmatch(f)
            at = base + pos + off + len(f) - len(f.lstrip())
            if not m:
                raise ParseError(f"bad monomial factor {f.strip()!r}", text, at)
            i = int(m.group(1))
            if not 1 <= i <= n:
                raise ParseError(f"unknown variable index {i} (n={n})", text, at)
            exps[i - 1] += int(m.group(2) or 1)
            off += len(f) + 1
        gens.append(tuple(exps))
        pos += len(chunk) + 1
    return MonomialIdeal(n, tuple(gens))


def format_ideal(I: MonomialIdeal) -> str:
    if I.is_maximal() and I.n > 0:
        return "m"
    return ", ".join(_monomial_str(g) for g in I.generators)


# modules ------------------------------------------------------------------------------

_MODULE = re.compile(
    r"\s*(?P<kind>R_loc|starE_model|starE|R)\s*(?:\{(?P<vars>[^}]*)\})?"
    r"\s*(?:\(\s*shift\s*=\s*(?P<shift>[-+]?\d+)\s*\))?\s*"
)


def parse_module(text: str, n: int, char: CharSpec = QQ) -> RegionModule:
    m = _MODULE.fullmatch(text)
    if not m:
        raise ParseError(f"not a module spec: {text.strip()!r}", text, 0)
    kind = m.group("kind")
    vars_ = []
    if m.group("vars") is not None:
        if kind not in ("R_loc", "starE_model"):
            raise ParseError(f"{kind} takes no variable set", text, m.start("vars"))
        for v in m.group("vars").split(","):
            mv = re.fullmatch(r"\s*x(\d+)\s*", v)
            if not mv:
                raise ParseError(f"bad variable {v.strip()!r}", text, m.start("vars"))
            i = int(mv.group(1))
            if not 1 <= i <= n:
                raise ParseError(f"unknown variable index {i} (n={n})", text, m.start("vars"))
            vars_.append(i)
    elif kind in ("R_loc", "starE_model"):
        raise ParseError(f"{kind} needs a variable set {{x..}}", text, m.end("kind"))
    shift = int(m.group("shift") or 0)
    real = {"R_loc": "localized"}.get(kind, kind)
    return make_module(real, n, char, shift, vars_)


# Cech specs -----------------------------------------------------------------------------

_H = re.compile(r"\s*H(\d+)_")


def parse_spec(text: str, n: int) -> CechSpec:
    """Right-to-left nesting: the rightmost H is applied first."""
    pos, depth, outer_first = 0, 0, []
    while True:
        m = _H.match(text, pos)
        if not m:
            raise ParseError("expected 'H<i>_'", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
        i = int(m.group(1))
        pos = m.end()
        if text.startswith("m", pos):
            ideal = MonomialIdeal.maximal(n)
            pos += 1
        elif text.startswith("(", pos):
            close = text.find(")", pos)
            if close < 0:
                raise ParseError("unclosed '('", text, pos)
            try:
                ideal = parse_ideal(text[pos + 1:close], n)
            except ParseError as err:
                raise ParseError(str(err).rsplit(" at line", 1)[0], text, pos + 1) from None
            pos = close + 1
        else:
            raise ParseError("expected 'm' or '(' after '_'", text, pos)
        outer_first.append((ideal, i))
        rest = text[pos:]
        stripped = rest.lstrip()
        pos += len(rest) - len(stripped)
        if re.match(r"\(\s*R\s*\)", stripped) or stripped.startswith("R"):
            pos += re.match(r"\(\s*R\s*\)|R", stripped).end()
            break
        if stripped.startswith("("):
            depth += 1
            pos += 1
    for _ in range(depth):
        rest = text[pos:]
        pos += len(rest) - len(rest.lstrip())
        if not text.startswith(")", pos):
            raise ParseError("expected ')'", text, pos)
        pos += 1
    if text[pos:].strip():
        raise ParseError(f"trailing input {text[pos:].strip()!r}", text, pos)
    return CechSpec(tuple(reversed(outer_first)))


def format_spec(spec: CechSpec) -> str:
    parts = []
    for I, i in reversed(spec.stages):
        parts.append(f"H{i}_m" if I.is_maximal() else f"H{i}_({format_ideal(I)})")
    return " ".join(parts) + "(R)"


# dispatch ----------------------------------------------------------------------------


def parse_expression(text: str, n: int, char: CharSpec = QQ, kind: str | None = None):
    """Parse by ``kind`` (op, laurent, ideal, module, spec) or guess it from the text."""
    if kind is None:
        s = text.strip()
        if re.match(r"H\d+_", s):
            kind = "spec"
        elif _MODULE.fullmatch(text):
            kind = "module"
        elif s == "m" or "," in s:
            kind = "ideal"
        else:
            kind = "op"
    if kind == "op":
        return parse_operator(text, n, char)
    if kind == "laurent":
        return parse_laurent(text, n, char)
    if kind == "ideal":
        return parse_ideal(text, n)
    if kind == "module":
        return parse_module(text, n, char)
    if kind == "spec":
        return parse_spec(text, n)
    raise InputError(f"unknown expression kind {kind!r}")


def format_value(v, char: CharSpec = QQ) -> str:
    if isinstance(v, DOp):
        return format_dop(v)
    if isinstance(v, MonomialIdeal):
        return format_ideal(v)
    if isinstance(v, RegionModule):
        return format_module(v)
    if isinstance(v, CechSpec):
        return format_spec(v)
    if isinstance(v, dict):
        return format_laurent(v, char)
    raise TypeError(f"cannot format {type(v).__name__}")


__all__ = [
    "ParseError", "parse_operator", "parse_laurent", "parse_ideal", "parse_module", "parse_spec",
    "parse_expression", "format_laurent", "format_ideal", "format_spec", "format_value",
]
