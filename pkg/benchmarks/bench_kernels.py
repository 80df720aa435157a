"""Compiled kernels against the pure-Python fallback.

Two parts: the raw kernels on random sparse polynomials, then a few
end-to-end computations run in subprocesses, once per backend, so the
switch in ``lefschetz_lab.kernels`` really decides which code runs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from lefschetz_lab import _kernels_py as py

try:
    from lefschetz_lab import _ckernels as cy
except ImportError:
    cy = None


def sparse(rng, n, p, terms, max_exp):
    out = {}
    while len(out) < terms:
        e = tuple(rng.randint(0, max_exp) for _ in range(n))
        out[e] = rng.randint(1, p - 1) if p else Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def kernel_cases(rng):
    cases = []
    for p in (32003, 0):
        a, b = sparse(rng, 3, p, 60, 8), sparse(rng, 3, p, 60, 8)
        tag = f"p={p}" if p else "QQ"
        cases.append((f"mul 60x60 {tag}", lambda m, a=a, b=b, p=p: m.mul(a, b, p)))
        cases.append((f"mul truncated {tag}", lambda m, a=a, b=b, p=p: m.mul(a, b, p, 10)))
        cases.append((f"add {tag}", lambda m, a=a, b=b, p=p: m.add(a, b, p)))

        def addmul(m, a=a, b=b, p=p):
            h = dict(a)
            for _ in range(20):
                m.addmul(h, b, 3, (1, 0, 1), p)

        cases.append((f"addmul x20 {tag}", addmul))
    f = sparse(rng, 3, 7, 40, 6)
    cases.append(("frobenius q=7^3", lambda m: m.frobenius(f, 343, 7)))
    antichain = [(5, 0, 0), (0, 6, 0), (0, 0, 7), (2, 2, 1), (1, 3, 2)]
    cases.append(("staircase counts d<=30", lambda m: m.standard_monomial_counts(antichain, 3, 30)))
    return cases


END_TO_END = {
    "standard basis, 3 cubics": (
        "from lefschetz_lab import RingContext, LocalIdeal, standard_basis\n"
        "c = RingContext(0, ('x', 'y', 'z'))\n"
        "I = LocalIdeal(c, tuple(c.parse(g) for g in "
        "['x^3 + y^3 + z^3 + x*y*z', 'x^2*y - z^4 + y^5', 'x*z^2 - y^4 + x^5']))\n"
    ),
    "Fermat probe, p = 31, e <= 3": (
        "from lefschetz_lab import RingContext, LocalIdeal\n"
        "from lefschetz_lab.closure import tight_closure_probe\n"
        "c = RingContext(31, ('x', 'y', 'z'))\n"
        "A = LocalIdeal(c, (c.parse('x^3 + y^3 + z^3'),)); I = LocalIdeal(c, (c.parse('x'), c.parse('y')))\n"
    ),
    "Hilbert-Samuel to degree 12": (
        "from lefschetz_lab import RingContext, LocalIdeal, hilbert_samuel\n"
        "c = RingContext(0, ('x', 'y', 'z'))\n"
        "I = LocalIdeal(c, (c.parse('x^2 - y^3'), c.parse('x*z - y^2*z^2')))\n"
    ),
    "transfer, 16 default primes": (
        "from lefschetz_lab import RingContext, LocalIdeal\n"
        "from lefschetz_lab.transfer import DEFAULT_PRIMES, transfer_check\n"
        "c = RingContext(0, ('x', 'y', 'z'))\n"
        "I = LocalIdeal(c, (c.parse('x^2 - y^3 + z^5'), c.parse('x*y - z^4 + x^3'), c.parse('y*z^2 - x^4')))\n"
    ),
}

STATEMENTS = {
    "standard basis, 3 cubics": "standard_basis(LocalIdeal(c, I.generators))",
    "Fermat probe, p = 31, e <= 3": "tight_closure_probe(I, c.parse('z^2'), c.parse('x*y'), 3, A)",
    "Hilbert-Samuel to degree 12": "hilbert_samuel(LocalIdeal(c, I.generators), 12)",
    "transfer, 16 default primes": "transfer_check(LocalIdeal(c, I.generators), DEFAULT_PRIMES, 8, 'all')",
}


def end_to_end(name, repeat, pure):
    code = (
        "import timeit\n"
        f"setup = {END_TO_END[name]!r}\n"
        f"t = min(timeit.repeat({STATEMENTS[name]!r}, setup=setup, number=1, repeat={repeat}))\n"
        "from lefschetz_lab import BACKEND\n"
        "print(BACKEND, t)\n"
    )
    env = dict(os.environ, LEFSCHETZ_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, t = out.stdout.split()
    return backend, float(t)


def fmt(t):
    return f"{t * 1e3:9.3f} ms"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="kernels only, no subprocess runs")
    args = ap.parse_args(argv)

    if cy is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1

    rng = random.Random(2024)
    print(f"{'kernel':28} {'python':>12} {'cython':>12} {'speedup':>8}")
    for name, fn in kernel_cases(rng):
        number = 20
        tp = min(timeit.repeat(lambda: fn(py), number=number, repeat=args.repeat)) / number
        tc = min(timeit.repeat(lambda: fn(cy), number=number, repeat=args.repeat)) / number
        print(f"{name:28} {fmt(tp):>12} {fmt(tc):>12} {tp / tc:7.2f}x")

    if args.quick:
        return 0
    print()
    print(f"{'end to end':28} {'python':>12} {'cython':>12} {'speedup':>8}")
    for name in END_TO_END:
        bp, tp = end_to_end(name, args.repeat, pure=True)
        bc, tc = end_to_end(name, args.repeat, pure=False)
        assert (bp, bc) == ("python", "cython"), (bp, bc)
        print(f"{name:28} {fmt(tp):>12} {fmt(tc):>12} {tp / tc:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
