"""Pure-Python sparse polynomial kernels.

Polynomials are plain dicts mapping exponent tuples to coefficients. ``p`` is
the field characteristic: ``0`` means the coefficients are ``Fraction``
objects, a prime means they are ints reduced into ``[0, p)``.

The compiled module ``_ckernels`` exposes exactly the same functions; the
selection between the two happens in :mod:`lefschetz_lab.kernels`.
"""

from itertools import combinations_with_replacement


def add(a, b, p):
    out = dict(a)
    if p:
        for e, c in b.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    else:
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def scale(a, c, p):
    if p:
        c %= p
        if not c:
            return {}
        return {e: v * c % p for e, v in a.items()}
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def mul(a, b, p, dmax=-1):
    """Product of two sparse polynomials; terms of degree > dmax dropped when dmax >= 0."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    if dmax >= 0:
        bdeg = [(f, d, sum(f)) for f, d in b.items()]
    for e, c in a.items():
        if dmax >= 0:
            de = sum(e)
            for f, d, df in bdeg:
                if de + df > dmax:
                    continue
                g = tuple([x + y for x, y in zip(e, f)])
                out[g] = get(g, 0) + c * d
        else:
            for f, d in b.items():
                g = tuple([x + y for x, y in zip(e, f)])
                out[g] = get(g, 0) + c * d
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def addmul(h, g, c, shift, p):
    """In place ``h += c * X^shift * g``.

    Returns ``(created, deleted)``: exponents that appeared in / vanished from
    ``h``. Callers maintaining a heap or degree histogram over ``h`` use them.
    """
    created = []
    deleted = []
    if p:
        for e, v in g.items():
            f = tuple([x + y for x, y in zip(e, shift)])
            old = h.get(f)
            if old is None:
                s = c * v % p
                if s:
                    h[f] = s
                    created.append(f)
            else:
                s = (old + c * v) % p
                if s:
                    h[f] = s
                else:
                    del h[f]
                    deleted.append(f)
    else:
        for e, v in g.items():
            f = tuple([x + y for x, y in zip(e, shift)])
            old = h.get(f)
            if old is None:
                s = c * v
                if s:
                    h[f] = s
                    created.append(f)
            else:
                s = old + c * v
                if s:
                    h[f] = s
                else:
                    del h[f]
                    deleted.append(f)
    return created, deleted


def frobenius(a, q, p):
    # coefficients are fixed by x -> x^q on the prime field
    return {tuple([x * q for x in e]): c for e, c in a.items()}


def standard_monomial_counts(antichain, n, dmax):
    """Number of monomials of each degree 0..dmax divisible by no antichain element."""
    counts = []
    gens = [tuple(g) for g in antichain]
    for d in range(dmax + 1):
        cnt = 0
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            for g in gens:
                for k in range(n):
                    if g[k] > e[k]:
                        break
                else:
                    break
            else:
                cnt += 1
        counts.append(cnt)
    return counts
