"""Frobenius powers and closure probes in positive characteristic.

The tight-closure probe never materializes ``z^q`` for large ``q``. It keeps a
representative ``r_e`` of ``z^(p^e)`` modulo ``I^[p^e] + ambient`` (up to a
unit, which does not affect membership) and advances it by one Frobenius step
at a time, reducing after every step. Probe verdicts are bounded claims about
``e <= e_max`` only.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import kernels
from .criteria import jacobian_minors, height
from .invariants import (
    dimension,
    embedding_dimension,
    is_nonzerodivisor,
    system_of_parameters_check,
)
from .ring import Polynomial, format_exponent, format_polynomial, local_key
from .stdbasis import (
    INFINITE,
    LocalIdeal,
    colon,
    is_monomial_ideal,
    length_artinian,
    membership,
    minimal_primes_of_monomial,
)
from .transfer import DEFAULT_PRIMES, classify_joint, reduce_mod_p, reduce_polynomial

log = logging.getLogger(__name__)

DEFAULT_EMAX = 3


def _require_char_p(ctx, what: str) -> int:
    p = ctx.characteristic
    if not p:
        raise ValueError(f"{what} needs positive characteristic")
    return p


# --------------------------------------------------------------------------
# Frobenius


def frobenius_apply(f: Polynomial, e: int) -> Polynomial:
    """``f^(p^e)``: exponents scale by ``p^e``, prime-field coefficients are fixed."""
    p = _require_char_p(f.ctx, "Frobenius")
    if e < 0:
        raise ValueError("e must be nonnegative")
    return Polynomial(f.ctx, kernels.frobenius(f.terms, p**e, p))


@dataclass(frozen=True)
class FrobeniusPower:
    base: LocalIdeal
    e: int
    generators: tuple

    @property
    def q(self) -> int:
        return self.base.ctx.characteristic**self.e

    @property
    def ideal(self) -> LocalIdeal:
        return LocalIdeal(self.base.ctx, self.generators)


def bracket_power(I: LocalIdeal, e: int) -> FrobeniusPower:
    _require_char_p(I.ctx, "bracket powers")
    return FrobeniusPower(I, e, tuple(frobenius_apply(g, e) for g in I.generators))


# --------------------------------------------------------------------------
# test elements


def in_minimal_prime(c: Polynomial, ambient: LocalIdeal):
    """True/False when decidable here, else None.

    Decidable for the zero ideal, monomial ideals (vertex covers of the
    supports), and whenever ``c`` is a nonzerodivisor. Hypersurfaces have no
    embedded primes, so there a zero divisor does lie in a minimal prime.
    """
    if not c:
        return True
    if ambient.is_zero():
        return False
    if is_monomial_ideal(ambient):
        supports = [frozenset(i for i, a in enumerate(e) if a) for e in c.terms]
        for P in minimal_primes_of_monomial(ambient.std.antichain, ambient.ctx.nvars):
            if all(s & P for s in supports):
                return True
        return False
    if is_nonzerodivisor(ambient, c):
        return False
    if len(ambient.generators) == 1:
        return True
    return None


def certify_test_element(c: Polynomial, ambient: LocalIdeal) -> tuple[bool, str]:
    """Decide whether ``c`` is provably a test element.

    Certified cases: a regular ambient (every nonzero element works), and a
    hypersurface in at least three variables with an isolated singularity
    (normal, hence a domain) when ``c`` is a Jacobian element that is nonzero
    modulo the ambient.
    """
    if membership(c, ambient):
        return False, "c vanishes modulo the ambient ideal"
    if ambient.is_zero() or dimension(ambient) == embedding_dimension(ambient):
        return True, "regular ambient"
    if len(ambient.generators) == 1:
        f = ambient.generators[0]
        n = f.ctx.nvars
        jac = ambient + jacobian_minors([f], 1, f.ctx)
        if n < 3 or length_artinian(jac) == INFINITE:
            return False, "heuristic: hypersurface not known to be a domain"
        if membership(c, jac):
            return True, "Jacobian element of an isolated hypersurface singularity"
        return False, "c is not in the Jacobian ideal"
    return False, "heuristic: ambient is neither regular nor a certified hypersurface domain"


def test_element_candidates(ambient: LocalIdeal, budget: int = 8) -> list[Polynomial]:
    """Jacobian-ideal elements avoiding the ambient ideal and its known minimal primes.

    Single minors come first (by leading exponent), then pairwise sums of
    minors, which is what rescues ambients whose minors all lie in some
    minimal prime.
    """
    ctx = ambient.ctx
    if ambient.is_zero():
        return [ctx.one()]
    h = height(ambient)
    if h > min(len(ambient.generators), ctx.nvars):
        h = min(len(ambient.generators), ctx.nvars)
    minors = [m for m in jacobian_minors(ambient.generators, h, ctx) if not membership(m, ambient)]
    minors.sort(key=lambda m: (local_key(m.lead_exponent), format_polynomial(m)))
    out: list = []

    def admit(c):
        if len(out) >= budget or c in out or membership(c, ambient):
            return
        if in_minimal_prime(c, ambient) is True:
            return
        out.append(c)

    for m in minors:
        admit(m)
    for a, b in combinations(minors, 2):
        if len(out) >= budget:
            break
        admit(a + b)
    return out


# --------------------------------------------------------------------------
# tight closure probe


@dataclass
class ProbeVerdict:
    prime: int
    outcomes: dict
    test_element: Polynomial | None
    certified: bool
    certification: str
    e_max: int
    summary: str
    witness_e: int | None = None
    reason: str = ""
    diagnostics: list = field(default_factory=list)

    @property
    def holds_all(self) -> bool:
        return all(v == "holds" for v in self.outcomes.values())

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "outcomes": {str(e): self.outcomes[e] for e in sorted(self.outcomes)},
            "test_element": None if self.test_element is None else format_polynomial(self.test_element),
            "certified": self.certified,
            "certification": self.certification,
            "label": "certified" if self.certified else "heuristic",
            "e_max": self.e_max,
            "summary": self.summary,
            "witness_e": self.witness_e,
            "reason": self.reason,
            "diagnostics": list(self.diagnostics),
        }


def _pure_power_bound(antichain, n: int):
    """Smallest ``D`` with ``m^D`` inside the monomial ideal, or ``None``."""
    pure = [None] * n
    for a in antichain:
        nz = [i for i, x in enumerate(a) if x]
        if len(nz) == 1:
            i = nz[0]
            if pure[i] is None or a[i] < pure[i]:
                pure[i] = a[i]
        elif not nz:
            return 0
    if any(v is None for v in pure):
        return None
    return sum(v - 1 for v in pure) + 1


class _FrobeniusTower:
    """Representatives of ``z^(p^e)`` modulo ``I^[p^e] + ambient``."""

    def __init__(self, I: LocalIdeal, ambient: LocalIdeal, z: Polynomial):
        self.I = I
        self.ambient = ambient
        self.ctx = I.ctx
        self.p = I.ctx.characteristic
        self.e = 0
        self.target = I + ambient.generators
        self.r = self._reduce(z)

    def _reduce(self, f: Polynomial) -> Polynomial:
        K = self.target
        if K.is_zero():
            return f
        bound = _pure_power_bound(K.std.antichain, self.ctx.nvars)
        if bound is not None:
            f = Polynomial(f.ctx, {e: c for e, c in f.terms.items() if sum(e) < bound})
        return K.std.reduce(f, tail=True)

    def step(self) -> None:
        self.e += 1
        self.target = bracket_power(self.I, self.e).ideal + self.ambient.generators
        self.r = self._reduce(frobenius_apply(self.r, 1))

    def holds(self, c: Polynomial) -> bool:
        return membership(c * self.r, self.target)


def _outside_monomial_closure(I: LocalIdeal, z: Polynomial, ambient: LocalIdeal) -> bool:
    """``z`` provably outside the integral closure of ``I`` (regular ambient, monomial data)."""
    if not ambient.is_zero() or I.is_zero() or not z.is_monomial():
        return False
    if not is_monomial_ideal(I):
        return False
    J = MonomialIdeal(I.std.antichain)
    return not integral_closure_monomial(J, z.lead_exponent)


def tight_closure_probe(
    I: LocalIdeal,
    z: Polynomial,
    c: Polynomial,
    e_max: int = DEFAULT_EMAX,
    ambient: LocalIdeal | None = None,
) -> ProbeVerdict:
    """Check ``c * z^(p^e)`` in ``I^[p^e] + ambient`` for ``e = 0..e_max``."""
    p = _require_char_p(I.ctx, "tight closure probes")
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    ctx = I.ctx
    if ambient is None:
        ambient = LocalIdeal(ctx, ())
    if z.ctx != ctx or c.ctx != ctx or ambient.ctx != ctx:
        raise ValueError("mismatched ring contexts")
    diagnostics: list = []
    mp = in_minimal_prime(c, ambient)
    if mp is True:
        raise ValueError(f"test element {c} lies in a minimal prime of the ambient ideal")
    if mp is None:
        diagnostics.append("c avoiding the minimal primes is assumed, not checked")
    certified, why = certify_test_element(c, ambient)

    if membership(z, I + ambient.generators):
        return ProbeVerdict(
            p, {0: "holds"}, c, certified, why, e_max, "membership-in-ideal",
            reason="z lies in I + ambient", diagnostics=diagnostics,
        )

    tower = _FrobeniusTower(I, ambient, z)
    outcomes = {}
    for e in range(e_max + 1):
        if e:
            tower.step()
        outcomes[e] = "holds" if tower.holds(c) else "fails"
    failures = [e for e, v in outcomes.items() if v == "fails"]
    if not failures:
        return ProbeVerdict(
            p, outcomes, c, certified, why, e_max, "consistent-with-membership",
            reason=f"holds for all e <= {e_max} with this test element", diagnostics=diagnostics,
        )
    first = failures[0]
    if certified:
        summary, reason = "refuted", f"fails at e={first} with a certified test element"
    elif _outside_monomial_closure(I, z, ambient):
        summary, reason = "refuted", "z lies outside the integral closure of I"
    else:
        summary, reason = "inconclusive", f"fails at e={first}; test element not certified"
    return ProbeVerdict(p, outcomes, c, certified, why, e_max, summary, first, reason, diagnostics)


# --------------------------------------------------------------------------
# generic tight closure


@dataclass
class GenericProbeReport:
    plan: object
    verdicts: dict

    @property
    def summary(self) -> str:
        kinds = {v.summary for v in self.verdicts.values()}
        if len(kinds) == 1:
            return kinds.pop()
        return "mixed"

    def to_json(self) -> dict:
        return {
            "plan": self.plan.to_json(),
            "verdicts": {str(p): self.verdicts[p].to_json() for p in sorted(self.verdicts)},
            "summary": self.summary,
        }


def _probe_at_prime(args):
    I, z, ambient, p, e_max, c, budget = args
    Ip = reduce_mod_p(I, p)
    Ap = reduce_mod_p(ambient, p)
    zp = reduce_polynomial(z, p)
    if c is not None:
        cp = reduce_polynomial(c, p)
    else:
        cands = test_element_candidates(Ap, budget)
        if not cands:
            return p, ProbeVerdict(
                p, {}, None, False, "no Jacobian candidate", e_max, "no-test-element",
                reason="every Jacobian candidate vanishes; supply c explicitly",
            )
        cp = cands[0]
    return p, tight_closure_probe(Ip, zp, cp, e_max, Ap)


def generic_tight_closure_probe(
    I: LocalIdeal,
    z: Polynomial,
    ambient: LocalIdeal | None = None,
    primes=None,
    e_max: int = DEFAULT_EMAX,
    *,
    c: Polynomial | None = None,
    budget: int = 8,
    jobs: int = 1,
) -> GenericProbeReport:
    """Reduce modulo each good prime and run :func:`tight_closure_probe` there."""
    if I.ctx.characteristic != 0:
        raise ValueError("generic probes take rational input")
    ctx = I.ctx
    if ambient is None:
        ambient = LocalIdeal(ctx, ())
    primes = DEFAULT_PRIMES if primes is None else primes
    ideals = [I, ambient, I + ambient.generators, LocalIdeal(ctx, (z,))]
    if c is not None:
        ideals.append(LocalIdeal(ctx, (c,)))
    plan = classify_joint(ideals, primes)
    if not plan.good:
        raise ValueError(f"all primes are bad: {plan.bad}")
    work = [(I, z, ambient, p, e_max, c, budget) for p in plan.good]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_probe_at_prime, work))
    else:
        results = [_probe_at_prime(w) for w in work]
    return GenericProbeReport(plan, dict(sorted(results, key=lambda t: t[0])))


# --------------------------------------------------------------------------
# monomial ideals and integral closure


def _dominates(a, b) -> bool:
    return all(x >= y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    antichain: tuple

    def __post_init__(self):
        gens = sorted({tuple(a) for a in self.antichain}, key=local_key)
        if gens and len({len(a) for a in gens}) != 1:
            raise ValueError("exponents of different lengths")
        minimal = tuple(a for a in gens if not any(b != a and _dominates(a, b) for b in gens))
        object.__setattr__(self, "antichain", minimal)

    @classmethod
    def from_ideal(cls, I: LocalIdeal) -> "MonomialIdeal":
        if not is_monomial_ideal(I):
            raise ValueError("not a monomial ideal")
        return cls(I.std.antichain)

    @property
    def nvars(self) -> int:
        return len(self.antichain[0]) if self.antichain else 0

    def contains(self, a) -> bool:
        return any(_dominates(a, g) for g in self.antichain)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(
            tuple(tuple(x + y for x, y in zip(a, b)) for a in self.antichain for b in other.antichain)
        )

    def power(self, k: int) -> "MonomialIdeal":
        if k == 0:
            return MonomialIdeal(((0,) * self.nvars,))
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __str__(self):
        return "(" + ", ".join(format_exponent(a) for a in self.antichain) + ")"


def _feasible(A, b) -> bool:
    """Exact phase-one simplex: is ``{x >= 0 : A x = b}`` nonempty (``b >= 0``)?

    Bland's rule, so no cycling on the degenerate systems that lattice scans
    produce.
    """
    m, n = len(A), len(A[0]) if A else 0
    # columns: x_0..x_{n-1}, artificials a_0..a_{m-1}; last entry is the rhs
    T = [[Fraction(v) for v in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b[i])]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of the objective sum(a_i), expressed in the nonbasic columns
    cost = [-sum(T[i][j] for i in range(m)) if j < n else Fraction(0) for j in range(width)]
    value = -sum(T[i][-1] for i in range(m))
    while True:
        col = next((j for j in range(width) if cost[j] < 0), None)
        if col is None:
            return value == 0
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return value == 0
        r = best[1]
        piv = T[r][col]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        f = cost[col]
        cost = [a - f * c for a, c in zip(cost, T[r][:-1])]
        value -= f * T[r][-1]
        basis[r] = col


def newton_polyhedron_contains(J: MonomialIdeal, z, scale: int = 1) -> bool:
    """``z`` in ``scale * conv(J) + R_{>=0}^n``, decided by an exact rational LP."""
    gens = J.antichain
    if not gens:
        return False
    n = len(z)
    k = len(gens)
    # sum_j lam_j g_j + s = z, sum_j lam_j = scale, lam, s >= 0
    A = [[g[i] for g in gens] + [int(i == j) for j in range(n)] for i in range(n)]
    A.append([1] * k + [0] * n)
    return _feasible(A, list(z) + [scale])


def power_criterion(J: MonomialIdeal, z, M: int = 12) -> bool:
    """Some ``m <= M`` has ``m*z`` in ``J^m``."""
    P = J
    for m in range(1, M + 1):
        if P.contains(tuple(m * a for a in z)):
            return True
        P = P * J
    return False


def integral_closure_monomial(J: MonomialIdeal, z, M: int = 12) -> bool:
    """Membership of ``X^z`` in the integral closure of the monomial ideal ``J``.

    Decided by the Newton-polyhedron LP; the power criterion is run as a
    cross-check and a disagreement (possible only if ``M`` is too small) is
    logged.
    """
    z = tuple(z)
    lp = newton_polyhedron_contains(J, z)
    if lp != power_criterion(J, z, M):
        log.warning("integral closure deciders disagree on %s in %s (M=%d)", z, J, M)
    return lp


@dataclass
class BSVerdict:
    holds: bool
    m: int
    l: int
    degree_bound: int
    points_checked: int
    counterexamples: list

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "m": self.m,
            "l": self.l,
            "degree_bound": self.degree_bound,
            "points_checked": self.points_checked,
            "counterexamples": [list(a) for a in self.counterexamples],
        }


def _lattice_points(n: int, dmax: int):
    for d in range(dmax + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            yield tuple(e)


def briancon_skoda_check(J: MonomialIdeal, l: int = 0, degree_bound: int = 12) -> BSVerdict:
    """Lattice points of ``NP(J^(m+l))`` up to ``degree_bound`` must lie in ``J^(l+1)``.

    ``m`` is the number of minimal generators of ``J``.
    """
    m = len(J.antichain)
    if not m:
        raise ValueError("J must be nonzero")
    target = J.power(l + 1)
    checked = 0
    bad = []
    for a in _lattice_points(J.nvars, degree_bound):
        checked += 1
        if target.contains(a):
            continue
        if newton_polyhedron_contains(J, a, m + l):
            bad.append(a)
    return BSVerdict(not bad, m, l, degree_bound, checked, bad)


def jacobian_power_check(f: Polynomial, exponent: int | None = None) -> bool:
    """``f^n`` lies in the ideal of partial derivatives (``n`` = number of variables)."""
    n = f.ctx.nvars if exponent is None else exponent
    partials = LocalIdeal(f.ctx, tuple(f.diff(i) for i in range(f.ctx.nvars)))
    return membership(f**n, partials)


# --------------------------------------------------------------------------
# monomial conjecture and colon capturing


@dataclass
class MCVerdict:
    holds: bool
    results: dict
    violations: list
    vacuous: bool = False

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "results": {str(t): v for t, v in sorted(self.results.items())},
            "violations": list(self.violations),
            "vacuous": self.vacuous,
        }


def monomial_conjecture_check(ambient: LocalIdeal, z, t_max: int = 5) -> MCVerdict:
    """``(z_1...z_d)^t`` stays outside ``(z_1^(t+1), ..., z_d^(t+1)) + ambient``."""
    z = list(z)
    if not system_of_parameters_check(ambient, z):
        raise ValueError("z is not a system of parameters")
    if not z:
        return MCVerdict(True, {}, [], vacuous=True)
    ctx = ambient.ctx
    prod = ctx.one()
    for zi in z:
        prod = prod * zi
    results, violations = {}, []
    for t in range(1, t_max + 1):
        target = ambient + [zi ** (t + 1) for zi in z]
        ok = not membership(prod**t, target)
        results[t] = ok
        if not ok:
            violations.append(t)
    return MCVerdict(not violations, results, violations)


@dataclass
class ColonCaptureReport:
    colon_generators: list
    outside: list
    probes: list
    equidimensional: str

    @property
    def summary(self) -> str:
        if not self.outside:
            return "nothing-to-probe"
        kinds = {r.summary for _, r in self.probes}
        return kinds.pop() if len(kinds) == 1 else "mixed"

    def to_json(self) -> dict:
        return {
            "colon_generators": [format_polynomial(g) for g in self.colon_generators],
            "outside": [format_polynomial(g) for g in self.outside],
            "probes": [
                {"element": format_polynomial(u), "report": r.to_json()} for u, r in self.probes
            ],
            "equidimensional": self.equidimensional,
            "summary": self.summary,
        }


def colon_capturing_probe(
    ambient: LocalIdeal,
    z,
    i: int,
    primes=None,
    e_max: int = 2,
    *,
    jobs: int = 1,
) -> ColonCaptureReport:
    """Probe ``((z_1..z_{i-1}) + ambient : z_i)`` against generic tight closure."""
    z = list(z)
    if not 1 <= i <= len(z):
        raise ValueError(f"index {i} out of range 1..{len(z)}")
    ctx = ambient.ctx
    if is_monomial_ideal(ambient) and not ambient.is_zero():
        sizes = {len(P) for P in minimal_primes_of_monomial(ambient.std.antichain, ctx.nvars)}
        equi = "verified" if len(sizes) <= 1 else "fails"
    else:
        equi = "asserted"
        log.info("colon capturing: equidimensionality of %s assumed", ambient)
    prefix = LocalIdeal(ctx, tuple(z[: i - 1]))
    Q = prefix + ambient.generators
    col = colon(Q, LocalIdeal(ctx, (z[i - 1],)))
    outside = [u for u in col.generators if not membership(u, Q)]
    probes = [
        (u, generic_tight_closure_probe(prefix, u, ambient, primes, e_max, jobs=jobs))
        for u in outside
    ]
    return ColonCaptureReport(list(col.generators), outside, probes, equi)
