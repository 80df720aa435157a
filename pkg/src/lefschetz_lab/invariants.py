"""Local-ring invariants of ``K[[x]]/I``.

Dimension, embedding dimension and the Hilbert-Samuel table come straight from
the leading antichain. Depth, the Cohen-Macaulay test and the Gorenstein test
need generic linear forms; those are drawn from a seeded stream of small
integers so that the same seed gives the same forms in every characteristic.
"""

from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass, field

from .ring import Polynomial, RingContext
from .stdbasis import (
    INFINITE,
    LocalIdeal,
    colon,
    length_artinian,
    maximal_ideal,
    membership,
    staircase_dimension,
    staircase_counts,
)

log = logging.getLogger(__name__)

DEFAULT_BOUND = 5
DEFAULT_RETRIES = 8


class StabilizationError(ValueError):
    """The sampled range is too short for the Hilbert-Samuel polynomial to settle."""


@dataclass
class InvariantRecord:
    dimension: int
    embedding_dimension: int
    depth: int | None
    hilbert_samuel: list
    multiplicity: int | None
    regular: bool | None
    cohen_macaulay: bool | None
    gorenstein: bool | None
    length: float | int = INFINITE
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        if d["length"] == INFINITE:
            d["length"] = "infinite"
        return d

    @classmethod
    def from_json(cls, d: dict) -> "InvariantRecord":
        d = dict(d)
        if d.get("length") == "infinite":
            d["length"] = INFINITE
        return cls(**d)


class GenericForms:
    """Seeded stream of integer coefficient vectors in ``[-bound, bound]``."""

    def __init__(self, seed: int, purpose: str, bound: int = DEFAULT_BOUND):
        self.rng = random.Random(f"{seed}:{purpose}")
        self.bound = bound

    def vector(self, n: int) -> list[int]:
        return [self.rng.randint(-self.bound, self.bound) for _ in range(n)]

    def linear_form(self, ctx: RingContext) -> Polynomial:
        while True:
            v = self.vector(ctx.nvars)
            f = ctx.poly({tuple(int(i == j) for j in range(ctx.nvars)): c for i, c in enumerate(v)})
            if f:
                return f


def _in_maximal_ideal(f: Polynomial) -> bool:
    return not f.constant_term()


def embedding_dimension(I: LocalIdeal) -> int:
    n = I.ctx.nvars
    if I.is_zero():
        return n
    return n - sum(1 for a in I.std.antichain if sum(a) == 1)


def dimension(I: LocalIdeal) -> int:
    n = I.ctx.nvars
    if I.is_zero():
        return n
    return staircase_dimension(I.std.antichain, n)


def fit_leading_difference(values: list[int], degree: int, window: int | None = None) -> int:
    """Constant ``degree``-th finite difference of ``values`` over the trailing window.

    Raises :class:`StabilizationError` when the tail is not constant.
    """
    if window is None:
        window = max(3, degree + 1)
    diffs = list(values)
    for _ in range(degree):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    if len(diffs) < window:
        raise StabilizationError(
            f"need {window} stable {degree}-th differences, only {len(diffs)} sampled"
        )
    tail = diffs[-window:]
    if len(set(tail)) != 1:
        raise StabilizationError(f"{degree}-th differences not yet constant: {tail}")
    return tail[0]


def is_nonzerodivisor(Q: LocalIdeal, z: Polynomial) -> bool:
    """``z`` is a nonzerodivisor on ``R/Q`` iff ``(Q : z) ⊆ Q``."""
    if Q.is_zero():
        return bool(z)
    col = colon(Q, LocalIdeal(Q.ctx, (z,)))
    return all(membership(g, Q) for g in col.generators)


def socle_length(Q: LocalIdeal) -> int:
    """Length of ``(Q : m)/Q`` for an Artinian ``Q``."""
    total = length_artinian(Q)
    if total == INFINITE:
        raise ValueError("socle length needs a finite-length quotient")
    return total - length_artinian(colon(Q, maximal_ideal(Q.ctx)))


def has_socle(Q: LocalIdeal) -> bool:
    """``m`` is an associated prime of ``R/Q``: some ``s ∉ Q`` has ``s*m ⊆ Q``."""
    col = colon(Q, maximal_ideal(Q.ctx))
    return not all(membership(g, Q) for g in col.generators)


def regular_sequence_check(I: LocalIdeal, z) -> list[bool]:
    """Per prefix: is ``z[i]`` a nonzerodivisor modulo ``I + (z[:i])``."""
    out = []
    Q = I
    for zi in z:
        if not _in_maximal_ideal(zi):
            raise ValueError(f"{zi} is not in the maximal ideal")
        out.append(is_nonzerodivisor(Q, zi))
        Q = Q + [zi]
    return out


def system_of_parameters_check(I: LocalIdeal, z) -> bool:
    z = list(z)
    d = dimension(I)
    if len(z) != d:
        raise ValueError(f"expected {d} parameters, got {len(z)}")
    return length_artinian(I + z) != INFINITE


def find_parameters(
    I: LocalIdeal,
    d: int,
    seed: int = 0,
    *,
    bound: int = DEFAULT_BOUND,
    retries: int = DEFAULT_RETRIES,
    purpose: str = "sop",
):
    """``d`` generic linear forms making ``I + (forms)`` of finite length, or ``None``."""
    if d == 0:
        return []
    stream = GenericForms(seed, purpose, bound)
    for _ in range(retries):
        forms = [stream.linear_form(I.ctx) for _ in range(d)]
        if length_artinian(I + forms) != INFINITE:
            return forms
    return None


def _depth(I: LocalIdeal, dim: int, seed: int, bound: int, retries: int, diagnostics: list):
    stream = GenericForms(seed, "depth", bound)
    Q = I
    for i in range(dim + 1):
        if i == dim:
            return dim
        if has_socle(Q):
            return i
        for _ in range(retries):
            ell = stream.linear_form(I.ctx)
            if is_nonzerodivisor(Q, ell):
                Q = Q + [ell]
                break
        else:
            diagnostics.append(f"depth: no regular linear form found after {retries} draws at step {i}")
            return None
    return dim


def parameter_multiplicity(I: LocalIdeal, q: list, limit: int) -> int:
    """Multiplicity of the ``q``-adic filtration on ``K[[x]]/I``."""
    d = len(q)
    if d == 0:
        return length_artinian(I)
    window = max(3, d + 1)
    qi = LocalIdeal(I.ctx, tuple(q))
    lengths = []
    power = qi
    for k in range(1, limit + 1):
        lengths.append(length_artinian(I + power))
        if len(lengths) >= d + window:
            try:
                return fit_leading_difference(lengths, d, window)
            except StabilizationError:
                pass
        power = power * qi
    return fit_leading_difference(lengths, d, window)


def ring_invariants(
    I: LocalIdeal,
    d_max: int = 8,
    seed: int = 0,
    *,
    bound: int = DEFAULT_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> InvariantRecord:
    ctx = I.ctx
    n = ctx.nvars
    if not I.is_zero() and I.is_unit_ideal():
        raise ValueError("the unit ideal defines the zero ring")
    diagnostics: list = []
    dim = dimension(I)
    embdim = embedding_dimension(I)
    antichain = I.std.antichain if not I.is_zero() else ()
    counts = staircase_counts(antichain, n, d_max)
    hs = []
    total = 0
    for c in counts:
        total += c
        hs.append(total)
    length = length_artinian(I)
    try:
        # Artinian: the multiplicity is the length, whatever d_max is
        mult = length if dim == 0 else fit_leading_difference(hs, dim)
    except StabilizationError as exc:
        mult = None
        diagnostics.append(f"multiplicity undetermined: {exc}; raise d_max")
    regular = dim == embdim

    depth = _depth(I, dim, seed, bound, retries, diagnostics)

    if dim == 0 or regular:
        q: list | None = []
    else:
        q = find_parameters(I, dim, seed, bound=bound, retries=retries)
    if regular:
        cm: bool | None = True
    elif depth is not None:
        # depth is exact once determined, and CM means depth = dim
        cm = depth == dim
    elif q is None:
        cm = None
        diagnostics.append(f"CM undetermined: no parameter system within {retries} draws")
    else:
        colength = length_artinian(I + q)
        try:
            # length(R/q) >= e(q) >= e(m), so meeting e(m) already decides CM
            if mult is not None and colength == mult:
                cm = True
            else:
                cm = colength == parameter_multiplicity(I, q, max(d_max + 1, dim + 4))
        except StabilizationError as exc:
            cm = None
            diagnostics.append(f"CM undetermined: {exc}")

    if regular:
        gor: bool | None = True
    elif cm is None:
        gor = None
    elif not cm:
        gor = False
    else:
        gor = socle_length(I + q) == 1

    return InvariantRecord(
        dimension=dim,
        embedding_dimension=embdim,
        depth=depth,
        hilbert_samuel=hs,
        multiplicity=mult,
        regular=regular,
        cohen_macaulay=cm,
        gorenstein=gor,
        length=length,
        diagnostics=diagnostics,
    )


# --------------------------------------------------------------------------
# Weierstrass division


class NotRegularError(ValueError):
    """The divisor is not regular in the last variable."""


def weierstrass_divide(f: Polynomial, g: Polynomial, dmax: int):
    """Divide ``f`` by ``g`` (regular in the last variable) modulo degree > ``dmax``.

    Returns ``(q, r)`` with ``f ≡ q*g + r`` modulo terms of total degree above
    ``dmax`` and ``r`` of degree below ``d`` in the last variable, where ``d``
    is the order of ``g(0, ..., 0, X_last)``.
    """
    if dmax is None or dmax < 0:
        raise ValueError("Weierstrass division runs in truncation mode only: give dmax >= 0")
    ctx = f.ctx
    if g.ctx != ctx:
        raise ValueError("mismatched ring contexts")
    n = ctx.nvars
    last = n - 1
    pure = {e[last]: c for e, c in g.terms.items() if not any(e[:last])}
    if not pure:
        raise NotRegularError(
            "g vanishes on the last coordinate axis; apply a generic linear change "
            "(see noether_normalize) to make it regular"
        )
    d = min(pure)
    c = pure[d]
    lead = tuple([0] * last + [d])
    rest = dict(g.terms)
    del rest[lead]
    weight_x = d + 1
    cap = weight_x * dmax + d

    def weight(e):
        return weight_x * sum(e[:last]) + e[last]

    q: dict = {}
    r: dict = {}
    cur = {e: v for e, v in f.terms.items() if weight(e) <= cap}
    while cur:
        A = {}
        for e, v in cur.items():
            if e[last] >= d:
                A[e[:last] + (e[last] - d,)] = ctx.div(v, c)
            else:
                r[e] = ctx.coerce(r.get(e, 0) + v)
        q_part = A
        for e, v in q_part.items():
            q[e] = ctx.coerce(q.get(e, 0) + v)
        nxt: dict = {}
        for e, v in A.items():
            for e2, v2 in rest.items():
                s = tuple(a + b for a, b in zip(e, e2))
                if weight(s) <= cap:
                    nxt[s] = nxt.get(s, 0) - v * v2
        cur = {e: ctx.coerce(v) for e, v in nxt.items() if ctx.coerce(v)}
    qp = ctx.poly(q).truncate(dmax)
    rp = ctx.poly(r).truncate(dmax)
    return qp, rp
