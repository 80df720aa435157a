"""Coefficient fields, exponent orders, sparse polynomials and ring files.

A polynomial lives in a :class:`RingContext` (characteristic, ordered variable
names, optional truncation degree) and is interpreted in the power series ring
at the origin. The local order ``⪯`` compares exponents by total degree first
and then lexicographically in the declared variable order; the valuation of a
polynomial is its ``⪯``-least exponent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import sympy

from . import kernels

Exponent = tuple  # tuple[int, ...]

INFINITY = None
"""Valuation of the zero polynomial."""


class RingError(ValueError):
    """Invalid ring data (context mismatch, bad characteristic, ...)."""


class ParseError(RingError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# --------------------------------------------------------------------------
# monomial orders


def local_key(e: Exponent):
    return (sum(e), e)


class LocalOrder:
    """Degree first, then lexicographic; the leading term is the key-minimum."""

    name = "local"

    @staticmethod
    def key(e):
        return (sum(e), e)


LOCAL = LocalOrder()


# --------------------------------------------------------------------------
# context


def _check_char(c: int) -> None:
    if c < 0 or (c != 0 and not sympy.isprime(c)):
        raise RingError(f"characteristic must be 0 or a prime, got {c}")
    if c >= 2**63:
        raise RingError("characteristic must be a machine-word prime")


@dataclass(frozen=True)
class RingContext:
    characteristic: int
    variables: tuple
    dmax: int | None = None

    def __post_init__(self):
        _check_char(self.characteristic)
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise RingError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise RingError(f"invalid variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def p(self) -> int:
        return self.characteristic

    def with_characteristic(self, c: int) -> "RingContext":
        return RingContext(c, self.variables, self.dmax)

    def with_dmax(self, dmax: int | None) -> "RingContext":
        return RingContext(self.characteristic, self.variables, dmax)

    def with_variables(self, variables) -> "RingContext":
        return RingContext(self.characteristic, tuple(variables), self.dmax)

    # -- coefficients
    def coerce(self, c):
        p = self.characteristic
        if p:
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator {c.denominator} not invertible mod {p}")
                return c.numerator * pow(c.denominator, -1, p) % p
            return int(c) % p
        return Fraction(c)

    def inv(self, c):
        p = self.characteristic
        if p:
            return pow(c, -1, p)
        return 1 / c

    def div(self, a, b):
        p = self.characteristic
        if p:
            return a * pow(b, -1, p) % p
        return a / b

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    # -- polynomial constructors
    def poly(self, terms: Mapping | None = None) -> "Polynomial":
        n = self.nvars
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or min(e, default=0) < 0:
                raise RingError(f"bad exponent {e} for {n} variables")
            c = self.coerce(c)
            if c:
                if e in out:
                    c = self.coerce(out[e] + c)
                    if not c:
                        del out[e]
                        continue
                out[e] = c
        if self.dmax is not None:
            out = {e: c for e, c in out.items() if sum(e) <= self.dmax}
        return Polynomial(self, out)

    def _raw(self, terms: dict) -> "Polynomial":
        # trusted: canonical coefficients, no zeros
        if self.dmax is not None:
            terms = {e: c for e, c in terms.items() if sum(e) <= self.dmax}
        return Polynomial(self, terms)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return self.poly({(0,) * self.nvars: c})

    def monomial(self, e, c=1) -> "Polynomial":
        return self.poly({tuple(e): c})

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r}") from None

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def to_json(self) -> dict:
        d = {"char": self.characteristic, "vars": list(self.variables)}
        if self.dmax is not None:
            d["dmax"] = self.dmax
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RingContext":
        return cls(int(d["char"]), tuple(d["vars"]), d.get("dmax"))


# --------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ctx", "terms", "_lead")

    def __init__(self, ctx: RingContext, terms: dict):
        self.ctx = ctx
        self.terms = terms
        self._lead = False

    # -- basic structure
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items(), key=lambda t: local_key(t[0])))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ctx.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, char={self.ctx.characteristic})"

    def __str__(self):
        return format_polynomial(self)

    @property
    def lead_exponent(self):
        if self._lead is False:
            self._lead = min(self.terms, key=local_key) if self.terms else INFINITY
        return self._lead

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Total degree of the valuation (-1 for zero)."""
        e = self.lead_exponent
        return -1 if e is None else sum(e)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ctx.nvars, self.ctx.coerce(0))

    # -- arithmetic
    def _coerce_other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ctx != self.ctx:
                raise RingError("polynomials live in different ring contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce_other(other)
        return Polynomial(self.ctx, kernels.add(self.terms, other.terms, self.ctx.p))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce_other(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce_other(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce_other(other)
        dmax = self.ctx.dmax
        return Polynomial(
            self.ctx, kernels.mul(self.terms, other.terms, self.ctx.p, -1 if dmax is None else dmax)
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ctx.coerce(c)
        return Polynomial(self.ctx, kernels.scale(self.terms, c, self.ctx.p))

    def shift(self, e) -> "Polynomial":
        """Multiply by the monomial ``X^e``."""
        terms = {tuple(a + b for a, b in zip(k, e)): c for k, c in self.terms.items()}
        return self.ctx._raw(terms)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ctx.inv(self.terms[self.lead_exponent]))

    def truncate(self, dmax: int) -> "Polynomial":
        return Polynomial(self.ctx, {e: c for e, c in self.terms.items() if sum(e) <= dmax})

    def diff(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self.ctx.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return self.ctx.poly(out)

    def substitute(self, images: list["Polynomial"]) -> "Polynomial":
        """Ring map sending the i-th variable to ``images[i]`` (images share one context)."""
        target = images[0].ctx
        result = target.zero()
        cache: dict = {}
        for e, c in self.terms.items():
            term = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def change_context(self, ctx: RingContext) -> "Polynomial":
        """Reinterpret the coefficients in another context with the same variables."""
        if ctx.nvars != self.ctx.nvars:
            raise RingError("variable count mismatch")
        return ctx.poly(self.terms)


def valuation(f: Polynomial):
    """The ⪯-least exponent of ``f``, or ``INFINITY`` (None) for ``f = 0``."""
    return f.lead_exponent


def lead_coefficient(f: Polynomial):
    """Coefficient at the valuation; zero for the zero polynomial."""
    e = f.lead_exponent
    if e is None:
        return f.ctx.coerce(0)
    return f.terms[e]


def precedes(a, b) -> bool:
    """``a ⪯ b`` on exponents, with ``None`` standing for infinity."""
    if b is None:
        return True
    if a is None:
        return False
    return local_key(a) <= local_key(b)


def divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(/)|(\+)|(-))")


def _tokenize(text: str, line: int):
    pos = 0
    out = []
    text = text.split("#", 1)[0]
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastindex
        col = m.start(kind) + 1
        out.append((kind, m.group(kind), col))
        pos = m.end()
    return out


def parse_polynomial(text: str, ctx: RingContext, line: int = 1) -> Polynomial:
    """Parse a polynomial: a signed sum of ``*``-separated factors.

    Factors are integers, ``int/int`` fractions, or ``var`` / ``var^nat``.
    """
    toks = _tokenize(text, line)
    if not toks:
        raise ParseError("empty polynomial", line, 1)
    n = ctx.nvars
    terms: dict = {}
    i = 0
    end_col = len(text) + 1

    def peek():
        return toks[i] if i < len(toks) else (None, None, end_col)

    first = True
    while i < len(toks):
        sign = 1
        kind, val, col = peek()
        if kind in (6, 7):
            sign = -1 if kind == 7 else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}", line, col)
        first = False
        coef = Fraction(1)
        exp = [0] * n
        nfactors = 0
        while True:
            kind, val, col = peek()
            if kind == 1:
                i += 1
                num = int(val)
                kind2, _, _ = peek()
                if kind2 == 5:
                    i += 1
                    kind3, val3, col3 = peek()
                    if kind3 != 1:
                        raise ParseError("expected denominator", line, col3)
                    i += 1
                    if int(val3) == 0:
                        raise ParseError("zero denominator", line, col3)
                    coef *= Fraction(num, int(val3))
                else:
                    coef *= num
            elif kind == 2:
                i += 1
                if val not in ctx.variables:
                    raise ParseError(f"unknown variable {val!r}", line, col)
                k = 1
                kind2, _, _ = peek()
                if kind2 == 3:
                    i += 1
                    kind3, val3, col3 = peek()
                    if kind3 != 1:
                        raise ParseError("expected natural exponent after '^'", line, col3)
                    i += 1
                    k = int(val3)
                exp[ctx.variables.index(val)] += k
            else:
                raise ParseError(
                    "expected coefficient or variable" + (f", got {val!r}" if val else ""),
                    line,
                    col,
                )
            nfactors += 1
            kind, _, _ = peek()
            if kind == 4:
                i += 1
                continue
            break
        e = tuple(exp)
        terms[e] = terms.get(e, 0) + sign * coef
    try:
        return ctx.poly(terms)
    except ZeroDivisionError as exc:
        raise ParseError(str(exc), line, 1) from None


def _format_coef(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_monomial(e, variables) -> str:
    parts = []
    for v, k in zip(variables, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical string: terms in ascending ⪯ order, coefficients in lowest terms."""
    if not f.terms:
        return "0"
    out = []
    p = f.ctx.p
    for e, c in f:
        if p:
            neg = False
        else:
            neg = c < 0
            c = -c if neg else c
        mono = format_monomial(e, f.ctx.variables)
        if not mono:
            body = _format_coef(c)
        elif c == 1:
            body = mono
        else:
            body = f"{_format_coef(c)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def format_exponent(e) -> str:
    return "inf" if e is None else "(" + ",".join(str(x) for x in e) + ")"


# --------------------------------------------------------------------------
# ring files


def parse_ring_file(text: str):
    """Parse ``char`` / ``vars`` / ``ideal`` / generators; returns ``(ctx, ideal)``."""
    from .stdbasis import LocalIdeal

    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((lineno, raw, body))
    if len(lines) < 3:
        ln = lines[-1][0] if lines else 1
        raise ParseError("ring file needs 'char', 'vars' and 'ideal' lines", ln, 1)

    lineno, raw, body = lines[0]
    words = body.split()
    if words[0] != "char" or len(words) != 2 or not words[1].isdigit():
        raise ParseError("expected 'char <0 or prime>'", lineno, raw.find(words[0]) + 1)
    c = int(words[1])
    try:
        _check_char(c)
    except RingError as exc:
        raise ParseError(str(exc), lineno, raw.find(words[1]) + 1) from None

    lineno, raw, body = lines[1]
    words = body.split()
    if words[0] != "vars" or len(words) < 2:
        raise ParseError("expected 'vars <name> ...'", lineno, raw.find(words[0]) + 1)
    try:
        ctx = RingContext(c, tuple(words[1:]))
    except RingError as exc:
        raise ParseError(str(exc), lineno, 1) from None

    lineno, raw, body = lines[2]
    if body.strip() != "ideal":
        raise ParseError("expected 'ideal'", lineno, raw.find(body.strip()[0]) + 1)

    gens = []
    for lineno, raw, body in lines[3:]:
        gens.append(parse_polynomial(body, ctx, line=lineno))
    return ctx, LocalIdeal(ctx, tuple(gens))


def serialize_ring_file(ideal) -> str:
    ctx = ideal.ctx
    out = [f"char {ctx.characteristic}", "vars " + " ".join(ctx.variables), "ideal"]
    out.extend(format_polynomial(g) for g in ideal.generators)
    return "\n".join(out) + "\n"
