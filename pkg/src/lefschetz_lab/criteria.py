"""Noether normalization, Jacobian ideals, the (R_i) check and the normality test."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import sympy

from .invariants import DEFAULT_BOUND, DEFAULT_RETRIES, dimension
from .ring import Polynomial, RingContext, format_polynomial, local_key
from .stdbasis import (
    INFINITE,
    LocalIdeal,
    colon,
    is_monomial_ideal,
    length_artinian,
    maximal_ideal,
    membership,
    minimal_primes_of_monomial,
)
from .symbolic import squarefree_part

log = logging.getLogger(__name__)


class NormalizationError(RuntimeError):
    """No admissible linear change was found within the retry budget."""


# --------------------------------------------------------------------------
# linear changes of coordinates


def _invert(matrix, p: int):
    M = sympy.Matrix(matrix)
    if p:
        if M.det() % p == 0:
            return None
        return [[int(v) % p for v in row] for row in M.inv_mod(p).tolist()]
    if M.det() == 0:
        return None
    return [[sympy.Rational(v) for v in row] for row in M.inv().tolist()]


@dataclass(frozen=True)
class LinearChange:
    """New coordinates ``y = M x``; equivalently ``x = M^{-1} y``."""

    matrix: tuple
    inverse: tuple
    seed: int | None
    ctx: RingContext

    @classmethod
    def identity(cls, ctx: RingContext) -> "LinearChange":
        n = ctx.nvars
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(eye, eye, None, ctx)

    @classmethod
    def from_matrix(cls, matrix, ctx: RingContext, seed=None) -> "LinearChange | None":
        inv = _invert(matrix, ctx.characteristic)
        if inv is None:
            return None
        return cls(
            tuple(tuple(int(v) for v in row) for row in matrix),
            tuple(tuple(ctx.coerce(_frac(v)) for v in row) for row in inv),
            seed,
            ctx,
        )

    def _forms(self, M) -> list[Polynomial]:
        ctx = self.ctx
        n = ctx.nvars
        return [
            ctx.poly({tuple(int(j == k) for k in range(n)): M[i][j] for j in range(n)})
            for i in range(n)
        ]

    def new_coordinates(self) -> list[Polynomial]:
        """``y_i`` as linear forms in the old variables."""
        return self._forms(self.matrix)

    def apply(self, f: Polynomial) -> Polynomial:
        """Rewrite ``f(x)`` in the new coordinates: ``f(M^{-1} y)``."""
        return f.substitute(self._forms(self.inverse))

    def unapply(self, g: Polynomial) -> Polynomial:
        """Inverse of :meth:`apply`: ``g(M x)``."""
        return g.substitute(self._forms(self.matrix))

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix],
            "inverse": [[str(v) for v in r] for r in self.inverse],
            "seed": self.seed,
        }


def _frac(v):
    v = sympy.Rational(v)
    return Fraction(int(v.p), int(v.q))


@dataclass
class NoetherCertificate:
    change: LinearChange
    dimension: int
    parameters: list
    length: int
    attempts: int

    def verify(self, I: LocalIdeal) -> bool:
        return length_artinian(I + self.parameters) != INFINITE

    def to_json(self) -> dict:
        return {
            "change": self.change.to_json(),
            "dimension": self.dimension,
            "parameters": [format_polynomial(f) for f in self.parameters],
            "length": self.length,
            "attempts": self.attempts,
        }


def noether_normalize(
    I: LocalIdeal,
    retries: int = DEFAULT_RETRIES,
    seed: int = 0,
    *,
    bound: int = DEFAULT_BOUND,
) -> NoetherCertificate:
    """A linear change whose first ``dim R`` coordinates are parameters of ``R``.

    The identity is tried first, then seeded integer matrices with entries in
    ``[-bound, bound]``.
    """
    ctx = I.ctx
    d = dimension(I)
    rng = random.Random(f"{seed}:noether")
    change = LinearChange.identity(ctx)
    failures = []
    for attempt in range(retries + 1):
        if attempt:
            while True:
                mat = [[rng.randint(-bound, bound) for _ in range(ctx.nvars)] for _ in range(ctx.nvars)]
                change = LinearChange.from_matrix(mat, ctx, seed)
                if change is not None:
                    break
        params = change.new_coordinates()[:d]
        length = length_artinian(I + params)
        if length != INFINITE:
            return NoetherCertificate(change, d, params, length, attempt + 1)
        failures.append(change.matrix)
        log.debug("noether draw %d rejected: %s", attempt, change.matrix)
    raise NormalizationError(f"no Noether normalization after {retries} draws; rejected {failures}")


# --------------------------------------------------------------------------
# Jacobian ideals


def determinant(rows: list[list[Polynomial]], ctx: RingContext) -> Polynomial:
    """Cofactor expansion along the first row (fine for the small sizes used here)."""
    k = len(rows)
    if k == 0:
        return ctx.one()
    if k == 1:
        return rows[0][0]
    total = ctx.zero()
    for j in range(k):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * determinant(minor, ctx)
        total = total - term if j % 2 else total + term
    return total


def jacobian_minors(polys, h: int, ctx: RingContext, variables=None) -> list[Polynomial]:
    """All nonzero ``h x h`` minors of the matrix of partial derivatives."""
    polys = list(polys)
    cols = list(range(ctx.nvars)) if variables is None else list(variables)
    if h > min(len(polys), len(cols)):
        raise ValueError(f"minor size {h} exceeds matrix shape {len(polys)}x{len(cols)}")
    if h == 0:
        return [ctx.one()]
    jac = [[f.diff(j) for j in cols] for f in polys]
    out = []
    seen = set()
    for rs in combinations(range(len(polys)), h):
        for cs in combinations(range(len(cols)), h):
            m = determinant([[jac[r][c] for c in cs] for r in rs], ctx)
            if m and m not in seen:
                seen.add(m)
                out.append(m)
    return out


def jacobian_ideal(I: LocalIdeal, h: int) -> LocalIdeal:
    """``I`` plus the ``h x h`` minors of its Jacobian matrix (in the ambient characteristic)."""
    return I + jacobian_minors(I.generators, h, I.ctx)


def height(I: LocalIdeal) -> int:
    return I.ctx.nvars - dimension(I)


def _quotient_dimension(J: LocalIdeal) -> float:
    if J.is_zero():
        return J.ctx.nvars
    if J.is_unit_ideal():
        return -math.inf
    return dimension(J)


def equidimensionality(I: LocalIdeal) -> str:
    """``verified``, ``hypersurface`` or ``asserted``; raises when it provably fails."""
    if I.is_zero() or len(I.generators) == 1:
        return "hypersurface"
    if is_monomial_ideal(I):
        primes = minimal_primes_of_monomial(I.std.antichain, I.ctx.nvars)
        sizes = {len(P) for P in primes}
        if len(sizes) > 1:
            raise ValueError(f"not equidimensional: minimal primes of heights {sorted(sizes)}")
        return "verified"
    return "asserted"


@dataclass
class RiVerdict:
    holds: bool
    i: int
    height: int
    jacobian_dimension: float
    bound: int
    equidimensional: str

    def to_json(self) -> dict:
        jd = self.jacobian_dimension
        return {
            "holds": self.holds,
            "i": self.i,
            "height": self.height,
            "jacobian_dimension": "-infinity" if jd == -math.inf else int(jd),
            "bound": self.bound,
            "equidimensional": self.equidimensional,
        }


def serre_Ri_check(I: LocalIdeal, i: int) -> RiVerdict:
    """(R_i) holds iff the Jacobian quotient has dimension at most ``n - (h + i + 1)``."""
    status = equidimensionality(I)
    if status == "asserted":
        log.info("R_%d check: equidimensionality of %s assumed", i, I)
    n = I.ctx.nvars
    h = height(I)
    J = jacobian_ideal(I, h)
    jd = _quotient_dimension(J)
    bound = n - (h + i + 1)
    return RiVerdict(jd <= bound, i, h, jd, bound, status)


# --------------------------------------------------------------------------
# the ideal H and the Grauert-Remmert test


@dataclass
class AutoH:
    ideal: LocalIdeal
    radical: bool
    method: str
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ideal": [format_polynomial(g) for g in self.ideal.generators],
            "radical": self.radical,
            "method": self.method,
            "diagnostics": list(self.diagnostics),
        }


def radical(I: LocalIdeal):
    """``(radical ideal, method)``, or ``(I, None)`` when no rule applies."""
    ctx = I.ctx
    if I.is_zero():
        return I, "zero"
    if I.is_unit_ideal():
        return LocalIdeal(ctx, (ctx.one(),)), "unit"
    if length_artinian(I) != INFINITE:
        return maximal_ideal(ctx), "zero-dimensional"
    if is_monomial_ideal(I):
        gens = {tuple(min(a, 1) for a in e) for e in I.std.antichain}
        minimal = [
            e for e in gens
            if not any(o != e and all(a <= b for a, b in zip(o, e)) for o in gens)
        ]
        return LocalIdeal(ctx, tuple(ctx.monomial(e) for e in sorted(minimal, key=local_key))), "monomial"
    if len(I.generators) == 1:
        return LocalIdeal(ctx, (squarefree_part(I.generators[0]),)), "principal"
    return I, None


def auto_H(ambient: LocalIdeal) -> AutoH:
    """Jacobian-based ideal containing the non-normal locus, radicalized where decidable.

    The product terms ``Δg·(g : ambient)`` run over singleton tuples ``g`` only.
    """
    ctx = ambient.ctx
    if ambient.is_zero():
        return AutoH(LocalIdeal(ctx, (ctx.one(),)), True, "regular")
    h = height(ambient)
    parts = list(jacobian_minors(ambient.generators, h, ctx))
    for g in ambient.generators:
        col = colon(LocalIdeal(ctx, (g,)), ambient)
        delta = jacobian_minors([g], 1, ctx)
        parts.extend(d * u for d in delta for u in col.generators)
    H0 = ambient + parts
    rad, method = radical(H0)
    diagnostics = ["Δg·(g : ambient) terms taken over singleton tuples only"]
    if method is None:
        diagnostics.append("radical not decidable here; H is pre-radical, supply H explicitly")
        return AutoH(H0, False, "pre-radical", diagnostics)
    return AutoH(rad, True, method, diagnostics)


@dataclass
class NormalityCertificate:
    ambient: LocalIdeal
    H: LocalIdeal
    f: Polynomial
    verdict: str
    witness: Polynomial | None
    colon_generators: list
    H_radical: bool = True
    diagnostics: list = field(default_factory=list)

    def verify(self) -> bool:
        """Replay the witness conditions with membership alone."""
        if self.verdict != "not-normal":
            target = self.ambient + [self.f]
            return all(membership(g, target) for g in self.colon_generators)
        g = self.witness
        fH = self.ambient + [self.f * h for h in self.H.generators]
        captured = all(membership(g * h, fH) for h in self.H.generators)
        return captured and not membership(g, self.ambient + [self.f])

    def to_json(self) -> dict:
        return {
            "ambient": [format_polynomial(g) for g in self.ambient.generators],
            "H": [format_polynomial(g) for g in self.H.generators],
            "f": format_polynomial(self.f),
            "verdict": self.verdict,
            "witness": None if self.witness is None else format_polynomial(self.witness),
            "colon_generators": [format_polynomial(g) for g in self.colon_generators],
            "H_radical": self.H_radical,
            "diagnostics": list(self.diagnostics),
        }


def grauert_remmert_normal(
    ambient: LocalIdeal,
    H: LocalIdeal | None = None,
    f: Polynomial | None = None,
    *,
    H_radical: bool = True,
) -> NormalityCertificate:
    """Test ``fB = (fH :_B H)`` for ``B`` the quotient by ``ambient``.

    With ``H=None`` the ideal comes from :func:`auto_H`; with ``f=None`` the
    first generator of ``H`` that is nonzero modulo ``ambient`` is used.
    """
    diagnostics: list = []
    if H is None:
        auto = auto_H(ambient)
        H, H_radical = auto.ideal, auto.radical
        diagnostics.extend(auto.diagnostics)
        diagnostics.append(f"H chosen automatically ({auto.method})")
    if all(membership(h, ambient) for h in H.generators):
        raise ValueError("H is contained in the ambient ideal")
    if f is None:
        f = next(h for h in H.generators if not membership(h, ambient))
    if membership(f, ambient):
        raise ValueError("f vanishes modulo the ambient ideal")
    if not membership(f, H + ambient.generators):
        raise ValueError("f must lie in H")
    fH = ambient + [f * h for h in H.generators]
    col = colon(fH, H + ambient.generators)
    fB = ambient + [f]
    witness = None
    for g in col.generators:
        if not membership(g, fB):
            witness = fB.std.reduce(g, tail=True).monic()
            break
    # g/f is an endomorphism of H, hence integral over B, whatever H is; only
    # the converse direction needs H radical
    if witness is not None:
        verdict = "not-normal"
    elif H_radical:
        verdict = "normal"
    else:
        verdict = "inconclusive"
        diagnostics.append("equality holds but H is not known to be radical")
    return NormalityCertificate(
        ambient, H, f, verdict, witness, list(col.generators), H_radical, diagnostics
    )
