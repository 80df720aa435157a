# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse polynomial kernels (same surface as ``_kernels_py``).

Prime-field coefficients below 2**31 take a C ``long long`` path; anything else
(rationals, larger primes) goes through Python object arithmetic.
"""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF

from itertools import combinations_with_replacement

cdef long long SMALL = 2147483648


cdef inline tuple _shift(tuple e, tuple s):
    cdef Py_ssize_t n = len(e)
    cdef Py_ssize_t i
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>e[i] + <long>s[i]
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


cdef inline long _deg(tuple e):
    cdef long d = 0
    cdef Py_ssize_t i
    for i in range(len(e)):
        d += <long>e[i]
    return d


def add(dict a, dict b, p):
    cdef dict out = dict(a)
    cdef long long pp, s
    if p and p < SMALL:
        pp = p
        for e, c in b.items():
            s = (<long long>out.get(e, 0) + <long long>c) % pp
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return out
    for e, c in b.items():
        o = out.get(e, 0) + c
        if p:
            o %= p
        if o:
            out[e] = o
        else:
            out.pop(e, None)
    return out


def scale(dict a, c, p):
    cdef long long pp, cc
    if p:
        c %= p
        if not c:
            return {}
        if p < SMALL:
            pp = p
            cc = c
            return {e: (<long long>v) * cc % pp for e, v in a.items()}
        return {e: v * c % p for e, v in a.items()}
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def mul(dict a, dict b, p, long dmax=-1):
    cdef dict out = {}
    cdef long long pp, cv, dv, s
    cdef long de, df
    cdef tuple e, f, g
    cdef list bl
    if len(a) > len(b):
        a, b = b, a
    bl = [(f2, d2, _deg(f2)) for f2, d2 in b.items()]
    if p and p < SMALL:
        pp = p
        for e, c in a.items():
            cv = c
            de = _deg(e)
            for f, d, df in bl:
                if dmax >= 0 and de + df > dmax:
                    continue
                g = _shift(e, f)
                dv = d
                s = (<long long>out.get(g, 0) + cv * dv) % pp
                out[g] = s
        return {k: v for k, v in out.items() if v}
    for e, c in a.items():
        de = _deg(e)
        for f, d, df in bl:
            if dmax >= 0 and de + df > dmax:
                continue
            g = _shift(e, f)
            out[g] = out.get(g, 0) + c * d
    if p:
        return {k: v % p for k, v in out.items() if v % p}
    return {k: v for k, v in out.items() if v}


def addmul(dict h, dict g, c, tuple shift, p):
    cdef list created = []
    cdef list deleted = []
    cdef long long pp, cc, s
    cdef tuple e, f
    if p and p < SMALL:
        pp = p
        cc = c % p
        for e, v in g.items():
            f = _shift(e, shift)
            old = h.get(f)
            if old is None:
                s = cc * (<long long>v) % pp
                if s:
                    h[f] = s
                    created.append(f)
            else:
                s = (<long long>old + cc * (<long long>v)) % pp
                if s:
                    h[f] = s
                else:
                    del h[f]
                    deleted.append(f)
        return created, deleted
    for e, v in g.items():
        f = _shift(e, shift)
        old = h.get(f)
        if old is None:
            o = c * v
            if p:
                o %= p
            if o:
                h[f] = o
                created.append(f)
        else:
            o = old + c * v
            if p:
                o %= p
            if o:
                h[f] = o
            else:
                del h[f]
                deleted.append(f)
    return created, deleted


def frobenius(dict a, long q, p):
    cdef dict out = {}
    cdef tuple e, g
    cdef Py_ssize_t i, n
    cdef object v
    for e, c in a.items():
        n = len(e)
        g = PyTuple_New(n)
        for i in range(n):
            v = <long>e[i] * q
            Py_INCREF(v)
            PyTuple_SET_ITEM(g, i, v)
        out[g] = c
    return out


def standard_monomial_counts(antichain, int n, int dmax):
    cdef list counts = []
    cdef list gens = [list(g) for g in antichain]
    cdef int ng = len(gens)
    cdef int d, k, j, cnt, i
    cdef bint divisible, hit
    cdef int[64] e
    cdef list gl
    if n > 64:
        raise ValueError("at most 64 variables")
    for d in range(dmax + 1):
        cnt = 0
        for combo in combinations_with_replacement(range(n), d):
            for k in range(n):
                e[k] = 0
            for i in combo:
                e[i] += 1
            hit = False
            for j in range(ng):
                gl = gens[j]
                divisible = True
                for k in range(n):
                    if <int>gl[k] > e[k]:
                        divisible = False
                        break
                if divisible:
                    hit = True
                    break
            if not hit:
                cnt += 1
        counts.append(cnt)
    return counts
