import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lefschetz_lab import LocalIdeal, RingContext, parse_ring_file
from lefschetz_lab.corpus import default_directory

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
    derandomize=True,
)
settings.load_profile("default")

VARS = ("x", "y", "z")
CORPUS = default_directory()


def ring(char=0, n=2):
    return RingContext(char, VARS[:n])


def ideal(ctx, *gens):
    return LocalIdeal(ctx, tuple(ctx.parse(g) for g in gens))


def load(name):
    return parse_ring_file((CORPUS / f"{name}.ring").read_text())


@pytest.fixture
def Q2():
    return ring(0, 2)


def exponents(n, max_deg):
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).filter(lambda e: sum(e) <= max_deg)


@st.composite
def polynomials(draw, ctx, max_deg=4, max_terms=4, min_order=0, nonzero=False):
    n = ctx.nvars
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(exponents(n, max_deg)))
        if sum(e) < min_order:
            continue
        if ctx.characteristic:
            c = draw(st.integers(1, ctx.characteristic - 1))
        else:
            c = Fraction(draw(st.integers(-6, 6).filter(bool)), draw(st.integers(1, 3)))
        terms[e] = c
    f = ctx.poly(terms)
    if nonzero and not f:
        f = ctx.poly({(0,) * (n - 1) + (min_order or 1,): 1})
    return f


@st.composite
def contexts(draw, chars=(0, 5, 7), nvars=(1, 2, 3)):
    return ring(draw(st.sampled_from(chars)), draw(st.sampled_from(nvars)))


@st.composite
def ring_and_polys(draw, k=2, chars=(0, 5, 7), nvars=(1, 2, 3), **kw):
    ctx = draw(contexts(chars, nvars))
    return ctx, [draw(polynomials(ctx, **kw)) for _ in range(k)]


def random_monomial_ideal(rng: random.Random, n: int, k: int, max_deg: int):
    """k random exponent vectors with 1 <= degree <= max_deg."""
    out = []
    while len(out) < k:
        d = rng.randint(1, max_deg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        out.append(tuple(e))
    return out
