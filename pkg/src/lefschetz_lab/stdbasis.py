"""Local standard bases and the ideal operations built on them.

Normal forms use Mora's ecart strategy: a term is reduced by a basis element
whose ecart does not exceed the current one when possible, otherwise the
current polynomial is itself kept as a future reducer. This terminates for
polynomial input under any monomial order, at the price of a unit factor:
the identity produced is ``u*f = sum(q_i*g_i) + r`` with ``u(0) != 0``.

Two things keep completion cheap. Over Q the untracked reduction runs on a
primitive integer multiple and divides out at the end. And once the leading
exponents found so far contain every monomial of some degree D, the ideal
contains all of m^D, so higher terms are dropped as they appear.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from operator import le

from . import kernels
from .ring import (
    LOCAL,
    Polynomial,
    RingContext,
    RingError,
    divides,
    format_polynomial,
    local_key,
)

INFINITE = math.inf


class NonTerminationError(RuntimeError):
    """Raised when a reduction exceeds its step guard."""


class _Entry:
    """A reducer: terms plus cached leading data."""

    __slots__ = ("terms", "lead", "lc", "ecart", "origin", "_ints")

    def __init__(self, terms, order, origin=None):
        self.terms = terms
        self.lead = min(terms, key=order.key)
        self.lc = terms[self.lead]
        self.ecart = max(map(sum, terms)) - sum(self.lead)
        # index into the caller's generator list, or (u, Q) for a saved intermediate
        self.origin = origin
        self._ints = None

    def integral(self):
        """Primitive integer multiple of the terms (char 0), with its leading coefficient."""
        if self._ints is None:
            terms, _ = _primitive(self.terms)
            self._ints = terms, terms[self.lead]
        return self._ints


def _primitive(terms):
    """``(ints, s)`` with ``ints = s*terms`` integral and of content 1."""
    den = math.lcm(*(Fraction(c).denominator for c in terms.values()))
    ints = {e: int(c * den) for e, c in terms.items()}
    g = math.gcd(*ints.values())
    return {e: c // g for e, c in ints.items()}, Fraction(den, g)


def _neg(c, p):
    return (-c) % p if p else -c


def _div(a, b, p):
    if p:
        return a * pow(b, -1, p) % p
    return a / b


def _monic(terms, order, p):
    lead = min(terms, key=order.key)
    lc = terms[lead]
    if lc == 1:
        return terms
    return kernels.scale(terms, _div(1, lc, p), p)


_STEP_GUARD = 5_000_000


def mora_reduce(f, entries, order, p, *, track=False, tail=False, cutoff=None, guard=_STEP_GUARD):
    """Weak normal form of the term dict ``f`` against reducer entries.

    Returns ``(r, u, Q)`` with ``u*f = sum(Q[i]*g_i) + r`` when ``track`` is set
    (``u``/``Q`` are ``None`` otherwise). Only the leading term of ``r`` is
    guaranteed irreducible; with ``tail`` the remaining terms are also reduced,
    by ecart-zero reducers only, which keeps every step inside one degree.
    Terms of degree ``>= cutoff`` are dropped as they appear; the caller
    guarantees that those monomials lie in the ideal.
    """
    if cutoff is not None:
        f = {e: c for e, c in f.items() if sum(e) < cutoff}
    if not p and not track and f:
        return _mora_reduce_integral(f, entries, order, tail, cutoff, guard), None, None
    n = len(next(iter(f))) if f else 0
    one_exp = (0,) * n
    h = dict(f)
    one = 1 if p else Fraction(1)
    u = {one_exp: one} if track else None
    Q = [dict() for _ in entries] if track else None
    if not h:
        return h, u, Q
    key = order.key
    heap = [(key(e), e) for e in h]
    heapq.heapify(heap)
    degs = Counter(sum(e) for e in h)
    T = list(entries)
    done = {}
    in_tail = False
    steps = 0
    while heap:
        _, e = heapq.heappop(heap)
        if e not in h:
            continue
        t = _choose(T, e, degs, in_tail)
        if t is None:
            if not tail:
                break
            in_tail = True
            done[e] = h.pop(e)
            degs[sum(e)] -= 1
            continue
        if t is _SAVE:
            t = _choose(T, e, degs, in_tail, fallback=True)
            saved = dict(h)
            origin = (dict(u), [dict(q) for q in Q]) if track else ("saved",)
            T.append(_Entry(saved, order, origin))
        c = _div(h[e], t.lc, p)
        shift = tuple(a - b for a, b in zip(e, t.lead))
        created, deleted = kernels.addmul(h, t.terms, _neg(c, p), shift, p)
        for x in created:
            if cutoff is not None and sum(x) >= cutoff:
                del h[x]
                continue
            heapq.heappush(heap, (key(x), x))
            degs[sum(x)] += 1
        for x in deleted:
            degs[sum(x)] -= 1
        if track:
            if isinstance(t.origin, int):
                kernels.addmul(Q[t.origin], {one_exp: 1}, c, shift, p)
            else:
                tu, tq = t.origin
                kernels.addmul(u, tu, _neg(c, p), shift, p)
                for i, qi in enumerate(tq):
                    if qi:
                        kernels.addmul(Q[i], qi, _neg(c, p), shift, p)
        steps += 1
        if steps > guard:
            raise NonTerminationError(f"normal form exceeded {guard} reduction steps")
    if done:
        done.update(h)
        h = done
    return h, u, Q


_SAVE = object()


def _choose(T, e, degs, in_tail, fallback=False):
    """First divisor with ecart <= ecart(h); ``_SAVE`` if only larger ecarts divide.

    With ``fallback`` the first divisor of minimal ecart is returned instead of ``_SAVE``.
    """
    ecart_h = max(d for d, c in degs.items() if c) - sum(e)
    best = None
    for cand in T:
        if not all(map(le, cand.lead, e)):
            continue
        if in_tail and (cand.ecart or not isinstance(cand.origin, int)):
            continue
        if cand.ecart <= ecart_h:
            return cand
        if best is None or cand.ecart < best.ecart:
            best = cand
    if best is None:
        return None
    return best if fallback else _SAVE


# rational coefficients grow fast under repeated subtraction; the char-0 path
# works on a primitive integer multiple H = s*h and rescales at the end
_CONTENT_EVERY = 8


def _mora_reduce_integral(f, entries, order, tail, cutoff, guard):
    h, s = _primitive(f)
    key = order.key
    heap = [(key(e), e) for e in h]
    heapq.heapify(heap)
    degs = Counter(sum(e) for e in h)
    T = list(entries)
    done = {}
    in_tail = False
    steps = 0
    while heap:
        _, e = heapq.heappop(heap)
        if e not in h:
            continue
        t = _choose(T, e, degs, in_tail)
        if t is None:
            if not tail:
                break
            in_tail = True
            done[e] = h.pop(e)
            degs[sum(e)] -= 1
            continue
        if t is _SAVE:
            t = _choose(T, e, degs, in_tail, fallback=True)
            # saved reducers only need their leading data and direction, so
            # the integer multiple serves as well as h itself
            T.append(_Entry(dict(h), order, ("saved",)))
        tterms, tlc = t.integral()
        he = h[e]
        g = math.gcd(he, tlc)
        a, b = tlc // g, he // g
        if a != 1:
            for x in h:
                h[x] *= a
            for x in done:
                done[x] *= a
            s *= a
        shift = tuple(x - y for x, y in zip(e, t.lead))
        created, deleted = kernels.addmul(h, tterms, -b, shift, 0)
        for x in created:
            if cutoff is not None and sum(x) >= cutoff:
                del h[x]
                continue
            heapq.heappush(heap, (key(x), x))
            degs[sum(x)] += 1
        for x in deleted:
            degs[sum(x)] -= 1
        steps += 1
        if steps % _CONTENT_EVERY == 0 and h:
            c = math.gcd(*h.values(), *done.values())
            if c != 1:
                for x in h:
                    h[x] //= c
                for x in done:
                    done[x] //= c
                s /= c
        if steps > guard:
            raise NonTerminationError(f"normal form exceeded {guard} reduction steps")
    if done:
        done.update(h)
        h = done
    return {e: Fraction(c) / s for e, c in h.items()}


def _spoly(a: _Entry, b: _Entry, p):
    lcm = tuple(max(x, y) for x, y in zip(a.lead, b.lead))
    mu = tuple(x - y for x, y in zip(lcm, a.lead))
    nu = tuple(x - y for x, y in zip(lcm, b.lead))
    s = {}
    kernels.addmul(s, a.terms, b.lc, mu, p)
    kernels.addmul(s, b.terms, _neg(a.lc, p), nu, p)
    return s


# exact staircase counts are cheap below this degree; above it the pigeonhole
# bound is used as is
_EXACT_CORNER = 40


def _corner_degree(leads, n: int):
    """A degree D with every monomial of degree D divisible by a lead, or None.

    Exact (the least such D) when the pure powers are small.
    """
    powers = [min((sum(a) for a in leads if a[i] == sum(a) and a[i] > 0), default=None) for i in range(n)]
    if not n or None in powers:
        return None
    # a monomial of degree sum(a_i - 1) + 1 has some exponent at least a_i
    bound = sum(powers) - n + 1
    if bound > _EXACT_CORNER:
        return bound
    return kernels.standard_monomial_counts(leads, n, bound).index(0)


def standard_basis_terms(gens, order, p, *, tail=True, positions=0):
    """Completion by s-pairs with Mora normal forms; returns monic term dicts.

    The result is minimal (leading exponents form an antichain) and sorted by
    the order's key on leading exponents. With ``positions`` the first slots
    of each exponent are module positions and only pairs sharing one are formed.
    """
    key = order.key
    S: list[_Entry] = []
    pairs: list = []
    counter = 0

    def push_pairs(j):
        nonlocal counter
        b = S[j]
        for i in range(j):
            a = S[i]
            if a.lead[:positions] != b.lead[:positions]:
                continue
            if a.ecart == 0 and b.ecart == 0 and all(
                x == 0 or y == 0 for x, y in zip(a.lead, b.lead)
            ):
                continue
            lcm = tuple(max(x, y) for x, y in zip(a.lead, b.lead))
            counter += 1
            heapq.heappush(pairs, (key(lcm), counter, i, j))

    # once the leading exponents cover every monomial of degree D, m^D lies in
    # the ideal (Nakayama), so terms of degree >= D can be dropped: that is
    # reduction by monomials of the ideal
    cutoff = None
    n = len(next(iter(next(g for g in gens if g)))) if any(gens) else 0

    def add(terms):
        nonlocal cutoff
        S.append(_Entry(_monic(terms, order, p), order, len(S)))
        if positions:
            return
        D = _corner_degree([a.lead for a in S], n)
        if D is None or (cutoff is not None and D >= cutoff):
            return
        cutoff = D
        for i, a in enumerate(S):
            if sum(a.lead) >= D:
                kept = {a.lead: 1}
            else:
                kept = {e: c for e, c in a.terms.items() if sum(e) < D}
            if len(kept) != len(a.terms):
                S[i] = _Entry(kept, order, a.origin)

    for g in gens:
        if g:
            add(dict(g))
            push_pairs(len(S) - 1)
    while pairs:
        lcm_key, _, i, j = heapq.heappop(pairs)
        if cutoff is not None and lcm_key[0] >= cutoff:
            # every term of the s-polynomial has degree >= deg(lcm)
            continue
        s = _spoly(S[i], S[j], p)
        if not s:
            continue
        r, _, _ = mora_reduce(s, S, order, p, cutoff=cutoff)
        if r:
            add(r)
            push_pairs(len(S) - 1)
    # minimalize
    keep = []
    for i, a in enumerate(S):
        redundant = False
        for j, b in enumerate(S):
            if i != j and divides(b.lead, a.lead) and (b.lead != a.lead or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(a)
    keep.sort(key=lambda a: key(a.lead))
    if tail:
        out = []
        for i, a in enumerate(keep):
            others = [
                _Entry(b.terms, order, k) for k, b in enumerate(keep) if k != i and b.ecart == 0
            ]
            if not others:
                out.append(a.terms)
                continue
            lead_term = {a.lead: a.terms[a.lead]}
            rest = {e: c for e, c in a.terms.items() if e != a.lead}
            if rest:
                r, _, _ = mora_reduce(rest, others, order, p, tail=True, cutoff=cutoff)
                lead_term.update(r)
            out.append(lead_term)
        return out
    return [a.terms for a in keep]


# --------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class NormalForm:
    """``unit*f = sum(quotients[i]*G[i]) + remainder`` with ``unit(0) != 0``."""

    remainder: Polynomial
    quotients: tuple
    unit: Polynomial


@dataclass(frozen=True)
class StandardBasis:
    ideal: "LocalIdeal"
    generators: tuple
    antichain: tuple

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    @cached_property
    def _entries(self):
        return [_Entry(g.terms, LOCAL, i) for i, g in enumerate(self.generators)]

    def reduce(self, f: Polynomial, *, tail: bool = False) -> Polynomial:
        if not f:
            return f
        r, _, _ = mora_reduce(f.terms, self._entries, LOCAL, f.ctx.p, tail=tail)
        return Polynomial(f.ctx, r)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)


@dataclass(frozen=True)
class LocalIdeal:
    """An ideal of the power series ring at the origin, given by polynomial generators."""

    ctx: RingContext
    generators: tuple = ()

    def __post_init__(self):
        gens = tuple(g for g in self.generators if g)
        for g in gens:
            if not isinstance(g, Polynomial):
                raise TypeError("generators must be Polynomial instances")
            if g.ctx != self.ctx:
                raise RingError("generator lives in a different ring context")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_strings(cls, ctx: RingContext, gens) -> "LocalIdeal":
        return cls(ctx, tuple(ctx.parse(g) for g in gens))

    def __str__(self):
        return "(" + ", ".join(format_polynomial(g) for g in self.generators) + ")"

    def __add__(self, other):
        if isinstance(other, LocalIdeal):
            if other.ctx != self.ctx:
                raise RingError("ideals live in different ring contexts")
            return LocalIdeal(self.ctx, self.generators + other.generators)
        return LocalIdeal(self.ctx, self.generators + tuple(other))

    def __mul__(self, other: "LocalIdeal") -> "LocalIdeal":
        return LocalIdeal(self.ctx, tuple(f * g for f in self.generators for g in other.generators))

    def power(self, k: int) -> "LocalIdeal":
        if k == 0:
            return LocalIdeal(self.ctx, (self.ctx.one(),))
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.generators

    @cached_property
    def std(self) -> StandardBasis:
        return standard_basis(self)

    def contains(self, f: Polynomial) -> bool:
        return membership(f, self)

    def contains_ideal(self, other: "LocalIdeal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_ideal(self, other: "LocalIdeal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_unit_ideal(self) -> bool:
        return any(sum(a) == 0 for a in self.std.antichain)

    def change_characteristic(self, c: int) -> "LocalIdeal":
        ctx = self.ctx.with_characteristic(c)
        return LocalIdeal(ctx, tuple(g.change_context(ctx) for g in self.generators))


def maximal_ideal(ctx: RingContext) -> LocalIdeal:
    return LocalIdeal(ctx, tuple(ctx.gens()))


# --------------------------------------------------------------------------
# operations


def normal_form(f: Polynomial, G) -> NormalForm:
    """Mora normal form of ``f`` with respect to the list ``G``, with quotients."""
    G = list(G)
    if not G or any(not g for g in G):
        raise ValueError("normal_form needs a nonempty list of nonzero polynomials")
    ctx = f.ctx
    if any(g.ctx != ctx for g in G):
        raise RingError("mismatched ring contexts")
    entries = [_Entry(g.terms, LOCAL, i) for i, g in enumerate(G)]
    if not f:
        return NormalForm(f, tuple(ctx.zero() for _ in G), ctx.one())
    r, u, Q = mora_reduce(f.terms, entries, LOCAL, ctx.p, track=True)
    return NormalForm(
        Polynomial(ctx, r),
        tuple(Polynomial(ctx, q) for q in Q),
        Polynomial(ctx, u),
    )


def s_pair(f: Polynomial, g: Polynomial) -> Polynomial:
    """``c(g) X^mu f - c(f) X^nu g`` with ``X^mu v(f) = X^nu v(g) = lcm``."""
    if not f or not g:
        raise ValueError("s_pair needs nonzero polynomials")
    if f.ctx != g.ctx:
        raise RingError("mismatched ring contexts")
    a = _Entry(f.terms, LOCAL)
    b = _Entry(g.terms, LOCAL)
    return Polynomial(f.ctx, _spoly(a, b, f.ctx.p))


def standard_basis(I: LocalIdeal) -> StandardBasis:
    ctx = I.ctx
    terms = standard_basis_terms([g.terms for g in I.generators], LOCAL, ctx.p)
    gens = tuple(Polynomial(ctx, t) for t in terms)
    antichain = tuple(g.lead_exponent for g in gens)
    return StandardBasis(I, gens, antichain)


def membership(z: Polynomial, I: LocalIdeal) -> bool:
    if z.ctx != I.ctx:
        raise RingError("mismatched ring contexts")
    if not z:
        return True
    if not I.generators:
        return False
    return I.std.contains(z)


class PositionOrder:
    """Position-over-term order on ``R^k``, encoded as exponent tuples.

    A vector term ``x^a * e_i`` is the tuple ``(0..1..0, a)`` with the 1 in slot
    ``i``. Earlier positions lead; inside a position the local order decides.
    Every term carries exactly one position slot, so the slot adds the same 1
    to every degree and ecarts are those of the local order.
    """

    def __init__(self, k: int):
        self.k = k
        self.name = f"pot{k}"

    def key(self, e):
        k = self.k
        tail = e[k:]
        return (e[:k].index(1), sum(tail), tail)


def _vector(rows, k: int) -> dict:
    """Term dict of the module element with component polynomials ``rows``."""
    out = {}
    for i, f in enumerate(rows):
        if f:
            slot = tuple(int(j == i) for j in range(k))
            out.update({slot + e: c for e, c in f.terms.items()})
    return out


def _last_component(ctx: RingContext, vectors) -> tuple:
    """Generators of ``{a : (0, .., 0, a) in M}`` for the module ``M`` spanned by ``vectors``.

    With positions ordered first, a standard basis element whose leading term
    sits in the last slot has every earlier component zero.
    """
    k = len(vectors[0])
    order = PositionOrder(k)
    gens = [_vector(v, k) for v in vectors]
    basis = standard_basis_terms([g for g in gens if g], order, ctx.p, tail=False, positions=k)
    out = []
    for t in basis:
        if min(t, key=order.key)[k - 1]:
            out.append(Polynomial(ctx, {e[k:]: c for e, c in t.items()}))
    return tuple(out)


def intersect(I: LocalIdeal, J: LocalIdeal) -> LocalIdeal:
    """``I ∩ J`` as the second components of ``(f, f)``, ``(h, 0)`` with vanishing first one."""
    ctx = I.ctx
    if J.ctx != ctx:
        raise RingError("mismatched ring contexts")
    if I.is_zero() or J.is_zero():
        return LocalIdeal(ctx, ())
    zero = ctx.zero()
    vectors = [(f, f) for f in I.generators] + [(h, zero) for h in J.generators]
    return LocalIdeal(ctx, _last_component(ctx, vectors))


def quotient_by_element(I: LocalIdeal, g: Polynomial) -> LocalIdeal:
    """``(I : g)``."""
    ctx = I.ctx
    if not g or membership(g, I):
        return LocalIdeal(ctx, (ctx.one(),))
    if not I.is_zero() and length_artinian(I) != INFINITE:
        return ArtinianQuotient(I).colon(LocalIdeal(ctx, (g,)))
    # a*g + sum(b*f) with a vanishing first component means a*g lies in I
    zero = ctx.zero()
    vectors = [(g, ctx.one())] + [(f, zero) for f in I.generators]
    return LocalIdeal(ctx, _last_component(ctx, vectors))


def colon(I: LocalIdeal, J: LocalIdeal) -> LocalIdeal:
    """``(I : J) = {g : g J ⊆ I}``."""
    if J.ctx != I.ctx:
        raise RingError("mismatched ring contexts")
    if J.is_zero():
        raise ValueError("colon needs a nonzero ideal J")
    if not I.is_zero() and length_artinian(I) != INFINITE:
        return reduce_generators(ArtinianQuotient(I).colon(J))
    result = None
    for g in J.generators:
        part = quotient_by_element(I, g)
        if result is None:
            result = part
        elif part.is_unit_ideal():
            continue
        elif result.is_unit_ideal():
            result = part
        else:
            result = intersect(result, part)
    return reduce_generators(result)


def standard_monomials(antichain, n: int) -> list:
    """Exponents outside the staircase of an Artinian antichain, in ⪯ order."""
    if not is_artinian_antichain(antichain, n):
        raise ValueError("the staircase is infinite")
    out = []
    frontier = [(0,) * n]
    seen = set(frontier)
    while frontier:
        e = frontier.pop()
        if any(divides(a, e) for a in antichain):
            continue
        out.append(e)
        for i in range(n):
            f = e[:i] + (e[i] + 1,) + e[i + 1 :]
            if f not in seen:
                seen.add(f)
                frontier.append(f)
    return sorted(out, key=local_key)


def _nullspace(rows: list[dict], ncols: int, p: int) -> list[dict]:
    """Basis of ``{v : row . v = 0 for every row}``; rows and vectors are sparse dicts."""
    pivots: dict = {}  # pivot column -> reduced row
    for r in rows:
        r = {k: v for k, v in r.items() if v}
        for col, prow in pivots.items():
            c = r.get(col)
            if c:
                for k, v in prow.items():
                    x = r.get(k, 0) - c * v
                    x = x % p if p else x
                    if x:
                        r[k] = x
                    else:
                        r.pop(k, None)
        if not r:
            continue
        col = min(r)
        inv = _div(1, r[col], p)
        r = {k: (v * inv) % p if p else v * inv for k, v in r.items()}
        for other in pivots.values():
            c = other.get(col)
            if c:
                for k, v in r.items():
                    x = other.get(k, 0) - c * v
                    x = x % p if p else x
                    if x:
                        other[k] = x
                    else:
                        other.pop(k, None)
        pivots[col] = r
    one = 1 if p else Fraction(1)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = {free: one}
        for col, prow in pivots.items():
            c = prow.get(free)
            if c:
                v[col] = _neg(c, p)
        basis.append(v)
    return basis


class ArtinianQuotient:
    """``K[[x]]/Q`` for an Artinian ``Q`` as a finite-dimensional algebra.

    Every class has a unique representative supported on the standard
    monomials; monomials of degree past the staircase already lie in ``Q``,
    so reduction can truncate there and still be exact.
    """

    def __init__(self, Q: LocalIdeal):
        self.Q = Q
        self.ctx = Q.ctx
        n = self.ctx.nvars
        self.entries = [_Entry(g.terms, LOCAL) for g in Q.std.generators]
        self.basis = standard_monomials(Q.std.antichain, n)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.cutoff = max(map(sum, self.basis), default=-1) + 1

    def reduce(self, terms: dict) -> dict:
        """Representative of ``f`` on the standard monomials."""
        p, N = self.ctx.p, self.cutoff
        h = {e: c for e, c in terms.items() if sum(e) < N}
        heap = [(local_key(e), e) for e in h]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = h.pop(e, None)
            if c is None:
                continue
            t = next((t for t in self.entries if all(map(le, t.lead, e))), None)
            if t is None:
                out[e] = c
                continue
            # every other term of the shifted reducer comes strictly later in the order
            coef = _div(c, t.lc, p)
            for f, v in t.terms.items():
                f = tuple(a + b - l for a, b, l in zip(f, e, t.lead))
                if f == e or sum(f) >= N:
                    continue
                old = h.get(f)
                x = (old or 0) - coef * v
                x = x % p if p else x
                if x:
                    if old is None:
                        heapq.heappush(heap, (local_key(f), f))
                    h[f] = x
                elif old is not None:
                    del h[f]
        return out

    def colon(self, J: LocalIdeal) -> LocalIdeal:
        """``(Q : J)``, by solving ``g*j = 0`` in the quotient for every generator ``j``."""
        p = self.ctx.p
        rows: dict = {}
        for k, j in enumerate(J.generators):
            for col, b in enumerate(self.basis):
                prod = self.reduce(kernels.mul({b: 1 if p else Fraction(1)}, j.terms, p))
                for e, c in prod.items():
                    rows.setdefault((k, e), {})[col] = c
        kernel = _nullspace(list(rows.values()), len(self.basis), p)
        extra = tuple(
            Polynomial(self.ctx, {self.basis[i]: c for i, c in v.items()}) for v in kernel
        )
        return LocalIdeal(self.ctx, self.Q.generators + extra)


def reduce_generators(I: LocalIdeal) -> LocalIdeal:
    """Replace generators by a minimal standard basis (cosmetic, same ideal)."""
    if I.is_zero():
        return I
    sb = I.std
    out = LocalIdeal(I.ctx, sb.generators)
    out.__dict__["std"] = StandardBasis(out, sb.generators, sb.antichain)
    return out


# --------------------------------------------------------------------------
# staircase data


def is_artinian_antichain(antichain, n: int) -> bool:
    pure = set()
    for a in antichain:
        support = [i for i, x in enumerate(a) if x]
        if not support:
            return True
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == n


def staircase_counts(antichain, n: int, dmax: int) -> list[int]:
    """Standard monomials per degree, degrees 0..dmax."""
    return kernels.standard_monomial_counts(list(antichain), n, dmax)


def staircase_length(antichain, n: int):
    if not is_artinian_antichain(antichain, n):
        return INFINITE
    total = 0
    d = 0
    chunk = 8
    while True:
        counts = staircase_counts(antichain, n, d + chunk)[d:]
        for c in counts:
            if c == 0:
                return total
            total += c
        d += chunk + 1


def staircase_dimension(antichain, n: int) -> int:
    """Krull dimension of the monomial quotient: largest variable set avoiding every generator."""
    if any(sum(a) == 0 for a in antichain):
        return -1
    supports = [frozenset(i for i, x in enumerate(a) if x) for a in antichain]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = set(S)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def minimal_primes_of_monomial(antichain, n: int) -> list[frozenset]:
    """Minimal primes (as variable index sets) of a monomial ideal."""
    supports = [frozenset(i for i, x in enumerate(a) if x) for a in antichain]
    if any(not s for s in supports):
        return []
    covers = []
    for size in range(0, n + 1):
        for S in combinations(range(n), size):
            s = frozenset(S)
            if all(sup & s for sup in supports) and not any(c <= s for c in covers):
                covers.append(s)
    return covers


def length_artinian(I: LocalIdeal):
    if I.is_zero():
        return INFINITE if I.ctx.nvars else 1
    return staircase_length(I.std.antichain, I.ctx.nvars)


def hilbert_samuel(I: LocalIdeal, d_max: int) -> list[int]:
    n = I.ctx.nvars
    antichain = I.std.antichain if not I.is_zero() else ()
    counts = staircase_counts(antichain, n, d_max)
    out = []
    total = 0
    for c in counts:
        total += c
        out.append(total)
    return out


def monomial_ideal_from_antichain(ctx: RingContext, antichain) -> LocalIdeal:
    return LocalIdeal(ctx, tuple(ctx.monomial(a) for a in antichain))


def is_monomial_ideal(I: LocalIdeal) -> bool:
    """True iff ``I`` is generated by monomials (checked on the leading ideal)."""
    if I.is_zero():
        return True
    return all(membership(I.ctx.monomial(a), I) for a in I.std.antichain)
