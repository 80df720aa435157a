"""Reduction of rational ideals modulo primes and the per-prime transfer harness."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .invariants import InvariantRecord, dimension, ring_invariants
from .ring import Polynomial, format_exponent, valuation
from .stdbasis import LocalIdeal

log = logging.getLogger(__name__)

DEFAULT_PRIMES = tuple(p for p in range(5, 62) if isprime(p))

ALL_CHECKS = (
    "dim",
    "embdim",
    "depth",
    "hs",
    "mult",
    "regular",
    "cm",
    "gorenstein",
    "leading-antichain",
)

_RECORD_FIELD = {
    "dim": "dimension",
    "embdim": "embedding_dimension",
    "depth": "depth",
    "hs": "hilbert_samuel",
    "mult": "multiplicity",
    "regular": "regular",
    "cm": "cohen_macaulay",
    "gorenstein": "gorenstein",
}


class BadPrimeError(ValueError):
    def __init__(self, p: int, reason: str, detail: str = ""):
        super().__init__(f"bad prime {p} ({reason}){': ' + detail if detail else ''}")
        self.p = p
        self.reason = reason


def parse_primes(spec) -> list[int]:
    """``"default"``, an inclusive range ``"a..b"``, or a comma/space separated list."""
    if spec is None or spec == "default":
        return list(DEFAULT_PRIMES)
    if isinstance(spec, (list, tuple)):
        items = [str(s) for s in spec]
        if len(items) == 1:
            return parse_primes(items[0])
        out = []
        for s in items:
            out.extend(parse_primes(s))
        return sorted(set(out))
    spec = str(spec).strip()
    if ".." in spec:
        a, b = spec.split("..", 1)
        lo, hi = int(a), int(b)
        if lo > hi:
            raise ValueError(f"empty prime range {spec}")
        return [p for p in range(lo, hi + 1) if isprime(p)]
    vals = [int(t) for t in spec.replace(",", " ").split()]
    bad = [v for v in vals if not isprime(v)]
    if bad:
        raise ValueError(f"not prime: {bad}")
    return sorted(set(vals))


def _denominator_hits(polys, p: int) -> bool:
    for f in polys:
        for c in f.terms.values():
            if Fraction(c).denominator % p == 0:
                return True
    return False


def reduce_polynomial(f: Polynomial, p: int) -> Polynomial:
    if f.ctx.characteristic != 0:
        raise ValueError("reduction mod p expects a rational polynomial")
    if _denominator_hits([f], p):
        raise BadPrimeError(p, "denominator", str(f))
    return f.change_context(f.ctx.with_characteristic(p))


def reduce_mod_p(I: LocalIdeal, p: int) -> LocalIdeal:
    """Map generator coefficients to ``F_p``; generators that vanish are dropped."""
    if I.ctx.characteristic != 0:
        raise ValueError("reduction mod p expects an ideal over the rationals")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    ctx = I.ctx.with_characteristic(p)
    gens = []
    for f in I.generators:
        g = reduce_polynomial(f, p)
        if not g:
            log.info("mod %d: generator %s vanishes and is dropped", p, f)
            continue
        if valuation(g) != valuation(f):
            log.info(
                "mod %d: leading term of %s drops, new lead %s",
                p,
                f,
                format_exponent(valuation(g)),
            )
        gens.append(g)
    return LocalIdeal(ctx, tuple(gens))


def _antichain(I: LocalIdeal) -> tuple:
    if I.is_zero():
        return ()
    return tuple(sorted(I.std.antichain))


@dataclass
class PrimePlan:
    primes: list
    status: dict
    seed: int = 0

    @property
    def good(self) -> list[int]:
        return [p for p in self.primes if self.status[p] == "good"]

    @property
    def bad(self) -> dict:
        return {p: s.split(":", 1)[1] for p, s in self.status.items() if s != "good"}

    def to_json(self) -> dict:
        return {
            "primes": list(self.primes),
            "status": {str(p): self.status[p] for p in self.primes},
            "seed": self.seed,
        }


def prime_status(I: LocalIdeal, p: int, reference: tuple | None = None) -> str:
    if reference is None:
        reference = _antichain(I)
    try:
        Ip = reduce_mod_p(I, p)
    except BadPrimeError as exc:
        return f"bad:{exc.reason}"
    if _antichain(Ip) != reference:
        return "bad:leading-degeneration"
    return "good"


def classify_primes(I: LocalIdeal, primes, seed: int = 0) -> PrimePlan:
    primes = sorted(set(primes))
    for p in primes:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
    ref = _antichain(I)
    status = {p: prime_status(I, p, ref) for p in primes}
    return PrimePlan(primes, status, seed)


def classify_joint(ideals, primes, seed: int = 0) -> PrimePlan:
    """A prime is good only if it is good for every ideal in ``ideals``."""
    primes = sorted(set(primes))
    status = {p: "good" for p in primes}
    for I in ideals:
        plan = classify_primes(I, primes, seed)
        for p in primes:
            if status[p] == "good" and plan.status[p] != "good":
                status[p] = plan.status[p]
    return PrimePlan(primes, status, seed)


@dataclass
class TransferReport:
    char0: InvariantRecord
    records: dict
    antichains: dict
    char0_antichain: list
    plan: PrimePlan
    checks: list
    d_max: int
    agreement: dict = field(default_factory=dict)

    def compute_agreement(self) -> dict:
        out = {}
        for check in self.checks:
            disagree, undetermined = [], []
            for p in sorted(self.records):
                if check == "leading-antichain":
                    if self.antichains[p] != self.char0_antichain:
                        disagree.append(p)
                    continue
                name = _RECORD_FIELD[check]
                a = getattr(self.char0, name)
                b = getattr(self.records[p], name)
                if a is None or b is None:
                    undetermined.append(p)
                elif a != b:
                    disagree.append(p)
            if disagree:
                out[check] = {"status": "disagree", "primes": disagree}
            elif undetermined:
                out[check] = {"status": "undetermined", "primes": undetermined}
            else:
                out[check] = {"status": "agree", "primes": sorted(self.records)}
        return out

    @property
    def all_agree(self) -> bool:
        return all(v["status"] == "agree" for v in self.agreement.values())

    def to_json(self) -> dict:
        return {
            "d_max": self.d_max,
            "checks": list(self.checks),
            "plan": self.plan.to_json(),
            "char0": self.char0.to_json(),
            "char0_antichain": [list(a) for a in self.char0_antichain],
            "records": {str(p): self.records[p].to_json() for p in sorted(self.records)},
            "antichains": {
                str(p): [list(a) for a in self.antichains[p]] for p in sorted(self.antichains)
            },
            "agreement": self.agreement,
            "all_agree": self.all_agree,
        }

    def format_table(self) -> str:
        primes = sorted(self.records)
        rows = [["invariant", "char 0"] + [f"p={p}" for p in primes]]

        def show(v):
            if v is None:
                return "?"
            if isinstance(v, bool):
                return "yes" if v else "no"
            if isinstance(v, list):
                return ",".join(str(x) for x in v)
            return str(v)

        for check in self.checks:
            if check == "leading-antichain":
                cells = [" ".join(format_exponent(a) for a in self.char0_antichain)]
                cells += [
                    "=" if self.antichains[p] == self.char0_antichain else "DIFF" for p in primes
                ]
            else:
                name = _RECORD_FIELD[check]
                cells = [show(getattr(self.char0, name))]
                cells += [show(getattr(self.records[p], name)) for p in primes]
            rows.append([check] + cells)
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        bad = self.plan.bad
        if bad:
            lines.append("bad primes: " + ", ".join(f"{p} ({r})" for p, r in sorted(bad.items())))
        lines.append(
            "summary: "
            + ", ".join(f"{k}={v['status']}" for k, v in self.agreement.items())
        )
        return "\n".join(lines)


def _prime_job(args):
    I, p, d_max, seed = args
    Ip = reduce_mod_p(I, p)
    return p, ring_invariants(Ip, d_max, seed), list(_antichain(Ip))


def transfer_check(
    I: LocalIdeal,
    primes=None,
    d_max: int = 6,
    checks=None,
    *,
    seed: int = 0,
    jobs: int = 1,
) -> TransferReport:
    if I.ctx.characteristic != 0:
        raise ValueError("transfer_check expects an ideal over the rationals")
    if checks is None or checks == "all" or "all" in checks:
        checks = list(ALL_CHECKS)
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    checks = [c for c in ALL_CHECKS if c in checks]
    primes = DEFAULT_PRIMES if primes is None else primes
    plan = classify_primes(I, primes, seed)
    char0 = ring_invariants(I, d_max, seed)
    work = [(I, p, d_max, seed) for p in plan.good]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_prime_job, work))
    else:
        results = [_prime_job(w) for w in work]
    records, antichains = {}, {}
    for p, rec, ac in sorted(results, key=lambda t: t[0]):
        records[p] = rec
        antichains[p] = ac
    report = TransferReport(
        char0=char0,
        records=records,
        antichains=antichains,
        char0_antichain=list(_antichain(I)),
        plan=plan,
        checks=checks,
        d_max=d_max,
    )
    report.agreement = report.compute_agreement()
    return report


@dataclass
class PerturbationVerdict:
    inclusion: bool
    dim_unperturbed: int
    dim_perturbed: int
    antichain: list
    perturbed_antichain: list
    witnesses: list

    @property
    def holds(self) -> bool:
        return self.inclusion and self.dim_unperturbed >= self.dim_perturbed

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "inclusion": self.inclusion,
            "dim_unperturbed": self.dim_unperturbed,
            "dim_perturbed": self.dim_perturbed,
            "antichain": [list(a) for a in self.antichain],
            "perturbed_antichain": [list(a) for a in self.perturbed_antichain],
            "witnesses": [list(a) for a in self.witnesses],
        }


def perturbation_dimension_check(I: LocalIdeal, p: int, eps) -> PerturbationVerdict:
    """Perturb each generator by a high-order term and compare mod ``p``.

    Checks that the leading antichain of ``I_p`` lies inside the monomial ideal
    of the perturbed one, and that the dimension does not go up.
    """
    eps = list(eps)
    if len(eps) != len(I.generators):
        raise ValueError(f"need one perturbation per generator ({len(I.generators)})")
    bound = max((sum(a) for a in I.std.antichain), default=0)
    for e in eps:
        if e and sum(valuation(e)) <= bound:
            raise ValueError(
                f"perturbation {e} has order {sum(valuation(e))}, must exceed {bound}"
            )
    Ip = reduce_mod_p(I, p)
    Ie = reduce_mod_p(LocalIdeal(I.ctx, tuple(f + e for f, e in zip(I.generators, eps))), p)
    A, B = _antichain(Ip), _antichain(Ie)
    witnesses = [a for a in A if not any(all(bi <= ai for ai, bi in zip(a, b)) for b in B)]
    return PerturbationVerdict(
        inclusion=not witnesses,
        dim_unperturbed=dimension(Ip),
        dim_perturbed=dimension(Ie),
        antichain=list(A),
        perturbed_antichain=list(B),
        witnesses=witnesses,
    )
