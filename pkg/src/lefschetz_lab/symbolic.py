"""Bridges to sympy for the few places where factoring or gcds are needed."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .ring import Polynomial, RingContext


def _symbols(ctx: RingContext):
    return sympy.symbols(ctx.variables)


def to_sympy_poly(f: Polynomial) -> sympy.Poly:
    gens = _symbols(f.ctx)
    if not isinstance(gens, tuple):
        gens = (gens,)
    p = f.ctx.characteristic
    if p:
        rep = {e: int(c) for e, c in f.terms.items()}
        return sympy.Poly.from_dict(rep or {(0,) * len(gens): 0}, *gens, modulus=p)
    rep = {e: sympy.Rational(c.numerator, c.denominator) for e, c in f.terms.items()}
    return sympy.Poly.from_dict(rep or {(0,) * len(gens): 0}, *gens, domain="QQ")


def from_sympy_poly(P: sympy.Poly, ctx: RingContext) -> Polynomial:
    p = ctx.characteristic
    terms = {}
    for e, c in P.terms():
        if p:
            terms[tuple(e)] = int(c) % p
        else:
            c = sympy.Rational(c)
            terms[tuple(e)] = Fraction(int(c.p), int(c.q))
    return ctx.poly(terms)


def squarefree_part(f: Polynomial) -> Polynomial:
    return from_sympy_poly(to_sympy_poly(f).sqf_part(), f.ctx)


def factors(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible polynomial factors (over the prime field) with multiplicities."""
    _, fl = to_sympy_poly(f).factor_list()
    return [(from_sympy_poly(g, f.ctx), k) for g, k in fl]
