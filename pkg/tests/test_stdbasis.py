import random
from itertools import combinations_with_replacement
from unittest.mock import patch

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ideal, polynomials, ring
from lefschetz_lab import (
    INFINITE,
    LocalIdeal,
    colon,
    format_polynomial,
    hilbert_samuel,
    intersect,
    length_artinian,
    membership,
    normal_form,
    s_pair,
    standard_basis,
    valuation,
)
from lefschetz_lab.invariants import NotRegularError, weierstrass_divide
from lefschetz_lab.ring import LOCAL, RingContext, divides, precedes
from lefschetz_lab.stdbasis import _Entry, monomial_ideal_from_antichain, mora_reduce

# --- independent membership oracle: truncated linear algebra over F_p


def _monomials(n, below):
    out = []
    for d in range(below):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _row_reduce(rows, p):
    """Echelon basis of the row space, as a dict pivot -> row (rows are dicts)."""
    basis = {}
    for r in rows:
        r = dict(r)
        while r:
            piv = min(r)
            if piv not in basis:
                inv = pow(r[piv], -1, p)
                basis[piv] = {k: v * inv % p for k, v in r.items()}
                break
            b, c = basis[piv], r[piv]
            for k, v in b.items():
                s = (r.get(k, 0) - c * v) % p
                if s:
                    r[k] = s
                else:
                    r.pop(k, None)
    return basis


def _in_span(vec, basis, p):
    r = dict(vec)
    while r:
        piv = min(r)
        if piv not in basis:
            return False
        b, c = basis[piv], r[piv]
        for k, v in b.items():
            s = (r.get(k, 0) - c * v) % p
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return True


def _truncated_span(gens, n, N, p):
    rows = []
    for m in _monomials(n, N):
        for g in gens:
            rows.append({e: c for e, c in (m_g for m_g in _shift(g, m)) if sum(e) < N})
    return _row_reduce(rows, p)


def _shift(g, m):
    for e, c in g.terms.items():
        yield tuple(a + b for a, b in zip(e, m)), c


def brute_force_member(z, gens, p, n, n_max=12):
    """Decide z in (gens) for an Artinian ideal, with no standard basis involved.

    Find N with m^N inside I + m^(N+1) (so m^N is inside I by Nakayama), then
    test z modulo m^N against the span of the truncated multiples.
    """
    for N in range(1, n_max):
        span = _truncated_span(gens, n, N + 1, p)
        top = [e for e in _monomials(n, N + 1) if sum(e) == N]
        if all(_in_span({e: 1}, span, p) for e in top):
            low = _truncated_span(gens, n, N, p)
            return _in_span({e: c for e, c in z.terms.items() if sum(e) < N}, low, p)
    raise AssertionError("ideal does not look Artinian")


@st.composite
def artinian_instances(draw):
    p = 101
    n = draw(st.integers(1, 3))
    ctx = ring(p, n)
    gens = []
    for i in range(n):
        a = draw(st.integers(1, 3))
        e = [0] * n
        e[i] = a
        tail = draw(polynomials(ctx, max_deg=a + 2, max_terms=2, min_order=a + 1))
        gens.append(ctx.monomial(e) + tail)
    for _ in range(draw(st.integers(0, 2))):
        g = draw(polynomials(ctx, max_deg=3, max_terms=3, min_order=1))
        if g:
            gens.append(g)
    rng = random.Random(draw(st.integers(0, 10**6)))
    order = list(range(len(gens)))
    rng.shuffle(order)
    return ctx, [gens[i] for i in order]


# --- spec examples


@pytest.fixture
def cusp2(Q2):
    return ideal(Q2, "x^2 - y^3", "x*y")


def test_normal_form_irreducible(Q2):
    nf = normal_form(Q2.parse("y^4"), [Q2.parse("x^2 - y^3"), Q2.parse("x*y")])
    assert nf.remainder == Q2.parse("y^4")


def test_normal_form_divisible(Q2):
    h = Q2.parse("3 + x*y - y^5")
    nf = normal_form(Q2.parse("x^2") * h, [Q2.parse("x^2")])
    assert not nf.remainder


def test_normal_form_quotients(Q2):
    G = [Q2.parse("x^2 - y^3"), Q2.parse("x*y")]
    nf = normal_form(Q2.parse("x^2*y - y^4"), G)
    assert not nf.remainder
    assert nf.quotients == (Q2.parse("y"), Q2.zero())
    assert nf.unit == Q2.one()


def test_normal_form_needs_a_unit_in_general():
    Q1 = ring(0, 1)
    nf = normal_form(Q1.parse("x"), [Q1.parse("x - x^2")])
    assert not nf.remainder
    assert nf.unit.constant_term() != 0
    assert nf.unit * Q1.parse("x") == nf.quotients[0] * Q1.parse("x - x^2")


def test_s_pair_examples(Q2):
    f, g = Q2.parse("x^2 - y^3"), Q2.parse("x*y")
    assert s_pair(f, g) == Q2.parse("-y^4")
    assert not s_pair(f, f)
    assert not s_pair(Q2.parse("x^2"), Q2.parse("y^3"))


def test_standard_basis_cusp(Q2):
    sb = standard_basis(ideal(Q2, "x^2 - y^3"))
    assert [format_polynomial(g) for g in sb.generators] == ["x^2 - y^3"]
    assert list(sb.antichain) == [(2, 0)]


def test_standard_basis_cusp2(cusp2):
    sb = standard_basis(cusp2)
    assert sorted(sb.antichain) == [(0, 4), (1, 1), (2, 0)]
    assert sorted(format_polynomial(g) for g in sb.generators) == sorted(["x^2 - y^3", "x*y", "y^4"])


def test_standard_basis_univariate():
    Q1 = ring(0, 1)
    assert [format_polynomial(g) for g in standard_basis(ideal(Q1, "x")).generators] == ["x"]


def test_membership_examples(cusp2, Q2):
    assert membership(Q2.parse("y^4"), cusp2)
    assert not membership(Q2.parse("y^3"), cusp2)
    assert membership(Q2.zero(), cusp2)


def test_membership_uses_units(Q2):
    # x = (x - x^2) * (1 + x + x^2 + ...) in the power series ring
    assert membership(Q2.parse("x"), ideal(Q2, "x - x^2"))
    assert not membership(Q2.parse("y"), ideal(Q2, "x - x^2"))


def test_colon_examples(Q2):
    f = ideal(Q2, "x^2 - y^3")
    assert colon(f, f).is_unit_ideal()
    assert colon(ideal(Q2, "x^2", "x*y"), ideal(Q2, "x")).same_ideal(ideal(Q2, "x", "y"))
    assert colon(ideal(Q2, "x*y"), ideal(Q2, "x")).same_ideal(ideal(Q2, "y"))


def test_colon_of_cusp2_by_maximal_ideal(cusp2, Q2):
    # the socle of a length-5 Gorenstein quotient is spanned by y^3
    C = colon(cusp2, ideal(Q2, "x", "y"))
    assert C.same_ideal(cusp2 + [Q2.parse("y^3")])


def test_intersection(Q2):
    I = intersect(ideal(Q2, "x"), ideal(Q2, "y"))
    assert I.same_ideal(ideal(Q2, "x*y"))


def test_length_examples(cusp2, Q2):
    assert length_artinian(cusp2) == 5
    assert length_artinian(ideal(Q2, "x", "y")) == 1
    assert length_artinian(ideal(Q2, "x^2 - y^3")) == INFINITE


def test_hilbert_samuel_examples(cusp2, Q2):
    assert hilbert_samuel(ideal(Q2, "x^2 - y^3"), 6) == [1, 3, 5, 7, 9, 11, 13]
    assert hilbert_samuel(ideal(Q2, "x", "y"), 5) == [1] * 6
    assert hilbert_samuel(cusp2, 6) == [1, 3, 4, 5, 5, 5, 5]


def test_weierstrass_examples():
    Q = RingContext(0, ("x", "y"))
    g = Q.parse("y + x")
    q, r = weierstrass_divide(Q.parse("y^2"), g, 4)
    assert (q, r) == (Q.parse("y - x"), Q.parse("x^2"))
    q, r = weierstrass_divide(g, g, 4)
    assert (q, r) == (Q.one(), Q.zero())
    # f = x already has y-degree 0 < 1: uniqueness gives q = 0, r = x (ledger)
    q, r = weierstrass_divide(Q.parse("x"), g, 6)
    assert not (Q.parse("x") - q * g - r).truncate(6)
    assert (q, r) == (Q.zero(), Q.parse("x"))


def test_weierstrass_series_division():
    Q = RingContext(0, ("x", "y"))
    g = Q.parse("y - x*y - x^2")  # unit (1 - x) times a Weierstrass polynomial
    f = Q.parse("y^3 + x*y")
    q, r = weierstrass_divide(f, g, 7)
    assert not (f - q * g - r).truncate(7)
    assert all(e[1] == 0 for e in r.terms)


def test_weierstrass_rejects_non_regular():
    Q = RingContext(0, ("x", "y"))
    with pytest.raises(NotRegularError):
        weierstrass_divide(Q.parse("y"), Q.parse("x*y"), 4)


# --- properties


@given(artinian_instances(), st.data())
def test_membership_matches_brute_force(inst, data):
    ctx, gens = inst
    z = data.draw(polynomials(ctx, max_deg=4, max_terms=4))
    I = LocalIdeal(ctx, tuple(gens))
    assert membership(z, I) == brute_force_member(z, gens, ctx.p, ctx.nvars)


@given(artinian_instances(), st.data())
def test_combinations_are_members(inst, data):
    ctx, gens = inst
    qs = [data.draw(polynomials(ctx, max_deg=2, max_terms=2)) for _ in gens]
    z = sum((q * g for q, g in zip(qs, gens)), ctx.zero())
    I = LocalIdeal(ctx, tuple(gens))
    assert membership(z, I)
    assert brute_force_member(z, gens, ctx.p, ctx.nvars)


@st.composite
def small_ideals(draw, chars=(0, 7)):
    ctx = ring(draw(st.sampled_from(chars)), draw(st.integers(1, 3)))
    k = draw(st.integers(1, 3))
    gens = [draw(polynomials(ctx, max_deg=4, max_terms=3, min_order=1, nonzero=True)) for _ in range(k)]
    return LocalIdeal(ctx, tuple(gens))


@given(small_ideals())
def test_buchberger_certificate(I):
    sb = standard_basis(I)
    G = list(sb.generators)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert not normal_form(s_pair(G[i], G[j]), G).remainder
    assert sorted(valuation(g) for g in G) == sorted(sb.antichain)
    for a in sb.antichain:
        assert not any(b != a and divides(b, a) for b in sb.antichain)


@given(small_ideals(), st.data())
def test_normal_form_identity(I, data):
    ctx = I.ctx
    f = data.draw(polynomials(ctx, max_deg=5, max_terms=4))
    G = list(I.generators)
    nf = normal_form(f, G)
    assert nf.unit.constant_term() != 0
    assert nf.unit * f - sum((q * g for q, g in zip(nf.quotients, G)), ctx.zero()) - nf.remainder == ctx.zero()
    if f:
        for q, g in zip(nf.quotients, G):
            if q:
                lead = tuple(a + b for a, b in zip(valuation(q), valuation(g)))
                assert precedes(valuation(f), lead)
    if nf.remainder:
        assert not any(divides(valuation(g), valuation(nf.remainder)) for g in G)


@given(small_ideals())
def test_hilbert_samuel_matches_leading_ideal(I):
    sb = standard_basis(I)
    M = monomial_ideal_from_antichain(I.ctx, sb.antichain)
    assert hilbert_samuel(I, 6) == hilbert_samuel(M, 6)
    hs = hilbert_samuel(I, 6)
    assert all(a <= b for a, b in zip(hs, hs[1:]))


@given(small_ideals())
def test_standard_basis_is_idempotent(I):
    sb = standard_basis(I)
    again = standard_basis(LocalIdeal(I.ctx, tuple(sb.generators)))
    assert sorted(again.antichain) == sorted(sb.antichain)


@given(small_ideals(), st.randoms(use_true_random=False), st.data())
def test_order_insensitivity(I, rnd, data):
    gens = list(I.generators)
    rnd.shuffle(gens)
    J = LocalIdeal(I.ctx, tuple(gens))
    assert sorted(standard_basis(J).antichain) == sorted(standard_basis(I).antichain)
    z = data.draw(polynomials(I.ctx, max_deg=4, max_terms=3))
    assert membership(z, I) == membership(z, J)


@given(small_ideals(chars=(7,)), st.data())
def test_colon_generators_multiply_into_ideal(I, data):
    g = data.draw(polynomials(I.ctx, max_deg=2, max_terms=2, min_order=1, nonzero=True))
    C = colon(I, LocalIdeal(I.ctx, (g,)))
    assert all(membership(c * g, I) for c in C.generators)
    assert C.contains_ideal(I)


@given(artinian_instances(), st.data())
def test_artinian_colon_has_the_right_length(inst, data):
    # multiplication by g gives 0 -> R/(I:g) -> R/I -> R/(I+g) -> 0
    ctx, gens = inst
    I = LocalIdeal(ctx, tuple(gens))
    g = data.draw(polynomials(ctx, max_deg=2, max_terms=2, min_order=1, nonzero=True))
    C = colon(I, LocalIdeal(ctx, (g,)))
    assert all(membership(c * g, I) for c in C.generators)
    assert length_artinian(C) == length_artinian(I) - length_artinian(I + (g,))


@given(st.integers(1, 3), st.data())
def test_monomial_colon_matches_gcd_rule(n, data):
    ctx = ring(5, n)
    pure = [tuple(data.draw(st.integers(1, 4)) if j == i else 0 for j in range(n)) for i in range(n)]
    extra = data.draw(st.lists(st.tuples(*[st.integers(0, 3)] * n).filter(any), max_size=3))
    I = monomial_ideal_from_antichain(ctx, pure + extra)
    a = data.draw(st.tuples(*[st.integers(0, 2)] * n).filter(any))
    C = colon(I, LocalIdeal(ctx, (ctx.monomial(a),)))
    want = [tuple(max(x - y, 0) for x, y in zip(m, a)) for m in pure + extra]
    assert C.same_ideal(monomial_ideal_from_antichain(ctx, want))


@given(st.integers(1, 3), st.data())
def test_monomial_intersection_matches_lcm_rule(n, data):
    ctx = ring(7, n)
    mono = st.lists(st.tuples(*[st.integers(0, 3)] * n).filter(any), min_size=1, max_size=3)
    A, B = data.draw(mono), data.draw(mono)
    I, J = monomial_ideal_from_antichain(ctx, A), monomial_ideal_from_antichain(ctx, B)
    want = [tuple(map(max, a, b)) for a in A for b in B]
    assert intersect(I, J).same_ideal(monomial_ideal_from_antichain(ctx, want))


@given(small_ideals(chars=(7,)), st.data())
def test_intersection_lies_between_product_and_factors(I, data):
    g = data.draw(polynomials(I.ctx, max_deg=3, max_terms=3, min_order=1, nonzero=True))
    J = LocalIdeal(I.ctx, (g,))
    K = intersect(I, J)
    assert I.contains_ideal(K) and J.contains_ideal(K)
    assert K.contains_ideal(I * J)


@given(small_ideals(chars=(0,)), st.booleans(), st.data())
def test_integer_reduction_equals_rational_reduction(I, tail, data):
    # untracked char-0 reduction runs on integer multiples; tracking keeps fractions
    ctx = I.ctx
    f = data.draw(polynomials(ctx, max_deg=4, max_terms=4))
    entries = [_Entry(g.terms, LOCAL, i) for i, g in enumerate(I.generators) if g]
    if not f or not entries:
        return
    fast, _, _ = mora_reduce(f.terms, entries, LOCAL, 0, tail=tail)
    slow, _, _ = mora_reduce(f.terms, entries, LOCAL, 0, tail=tail, track=True)
    assert fast == slow


@given(artinian_instances())
def test_corner_cutoff_keeps_the_antichain(inst):
    ctx, gens = inst
    I = LocalIdeal(ctx, tuple(gens))
    with_cutoff = sorted(standard_basis(I).antichain)
    with patch("lefschetz_lab.stdbasis._corner_degree", return_value=None):
        without = sorted(standard_basis(LocalIdeal(ctx, tuple(gens))).antichain)
    assert with_cutoff == without
