"""JSON reports: schema, deterministic serialization and membership-claim replay."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .ring import Polynomial, RingContext, format_polynomial
from .stdbasis import LocalIdeal, membership

SCHEMA = "lefschetz-lab/1"


@dataclass(frozen=True)
class Claim:
    """``element in ideal`` is ``value`` over the ring ``ctx``; produced by ``source``."""

    ctx: RingContext
    element: str
    ideal: tuple
    value: bool
    source: str

    def to_json(self) -> dict:
        return {
            "ring": self.ctx.to_json(),
            "element": self.element,
            "ideal": list(self.ideal),
            "member": self.value,
            "source": self.source,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Claim":
        return cls(
            RingContext.from_json(d["ring"]),
            d["element"],
            tuple(d["ideal"]),
            bool(d["member"]),
            d.get("source", ""),
        )

    def replay(self) -> bool:
        """Recompute the membership and report whether it matches."""
        z = self.ctx.parse(self.element)
        I = LocalIdeal(self.ctx, tuple(self.ctx.parse(g) for g in self.ideal))
        return membership(z, I) == self.value


class ClaimLog:
    def __init__(self):
        self.claims: list[Claim] = []

    def membership(self, z: Polynomial, I, source: str, value: bool | None = None) -> bool:
        gens = I.generators if isinstance(I, LocalIdeal) else tuple(I)
        ctx = z.ctx
        if value is None:
            value = membership(z, LocalIdeal(ctx, tuple(gens)))
        self.claims.append(
            Claim(ctx, format_polynomial(z), tuple(format_polynomial(g) for g in gens), value, source)
        )
        return value

    def to_json(self) -> list:
        return [c.to_json() for c in self.claims]


def build_report(command: dict, result: dict, provenance: dict, claims: ClaimLog, passed: bool) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "result": result,
        "provenance": provenance,
        "claims": claims.to_json(),
        "passed": passed,
    }


def _default(o):
    if isinstance(o, float):
        return "infinite" if o == float("inf") else o
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    return str(o)


def _clean(o):
    if isinstance(o, float) and o in (float("inf"), float("-inf")):
        return "infinite" if o > 0 else "-infinity"
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dumps(report: dict) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(_clean(report), sort_keys=True, indent=2, default=_default) + "\n"


def replay_claims(report: dict) -> tuple[int, list]:
    """Replay every membership claim; returns ``(count, failures)``."""
    if report.get("schema") != SCHEMA:
        raise ValueError(f"unknown report schema {report.get('schema')!r}")
    failures = []
    claims = report.get("claims", [])
    for i, d in enumerate(claims):
        c = Claim.from_json(d)
        if not c.replay():
            failures.append(i)
    return len(claims), failures
