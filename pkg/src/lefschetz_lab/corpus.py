"""The bundled example gallery and its runner.

``corpus.json`` lists items. Each item names a ring file and either a CLI verb
(with options) or a library operation (with arguments), plus expectations as
``dotted.path -> value`` pairs. A value may be a plain JSON value (compared for
equality) or one of ``{"$contains": [...]}``, ``{"$len": n}``.
"""

from __future__ import annotations

import json
import time
from importlib import resources
from pathlib import Path

from .closure import frobenius_apply, test_element_candidates
from .criteria import auto_H, noether_normalize
from .invariants import regular_sequence_check, system_of_parameters_check
from .report import SCHEMA, dumps
from .ring import format_polynomial, parse_ring_file
from .stdbasis import LocalIdeal, colon, length_artinian, membership, normal_form, s_pair
from .transfer import classify_primes, parse_primes, perturbation_dimension_check, reduce_mod_p


def _strs(ps):
    return [format_polynomial(p) for p in ps]


def _op_normal_form(ctx, I, a):
    nf = normal_form(ctx.parse(a["f"]), I.generators)
    return {"remainder": format_polynomial(nf.remainder), "quotients": _strs(nf.quotients),
            "unit": format_polynomial(nf.unit)}


def _op_s_pair(ctx, I, a):
    return {"s_pair": format_polynomial(s_pair(ctx.parse(a["f"]), ctx.parse(a["g"])))}


def _op_membership(ctx, I, a):
    return {"member": membership(ctx.parse(a["z"]), I)}


def _op_colon(ctx, I, a):
    J = LocalIdeal.from_strings(ctx, a["J"])
    C = colon(I, J)
    out = {"colon": _strs(C.generators)}
    if "compare" in a:
        out["equals"] = C.same_ideal(LocalIdeal.from_strings(ctx, a["compare"]))
    return out


def _op_length(ctx, I, a):
    n = length_artinian(I)
    return {"length": "infinite" if n == float("inf") else n}


def _op_regular_sequence(ctx, I, a):
    return {"regular": regular_sequence_check(I, [ctx.parse(s) for s in a["z"]])}


def _op_sop(ctx, I, a):
    return {"sop": system_of_parameters_check(I, [ctx.parse(s) for s in a["z"]])}


def _op_frobenius(ctx, I, a):
    return {"image": format_polynomial(frobenius_apply(ctx.parse(a["f"]), a["e"]))}


def _op_candidates(ctx, I, a):
    return {"candidates": _strs(test_element_candidates(I, a.get("budget", 8)))}


def _op_classify(ctx, I, a):
    return classify_primes(I, parse_primes(a["primes"])).to_json()


def _op_reduce(ctx, I, a):
    return {"generators": _strs(reduce_mod_p(I, a["p"]).generators)}


def _op_perturbation(ctx, I, a):
    return perturbation_dimension_check(I, a["p"], [ctx.parse(s) for s in a["eps"]]).to_json()


def _op_auto_h(ctx, I, a):
    return auto_H(I).to_json()


def _op_noether(ctx, I, a):
    cert = noether_normalize(I, seed=a.get("seed", 0))
    return dict(cert.to_json(), verified=cert.verify(I))


OPS = {
    "normal_form": _op_normal_form,
    "s_pair": _op_s_pair,
    "membership": _op_membership,
    "colon": _op_colon,
    "length": _op_length,
    "regular_sequence": _op_regular_sequence,
    "sop": _op_sop,
    "frobenius": _op_frobenius,
    "candidates": _op_candidates,
    "classify": _op_classify,
    "reduce": _op_reduce,
    "perturbation": _op_perturbation,
    "auto_H": _op_auto_h,
    "noether": _op_noether,
}


def default_directory() -> Path:
    return Path(str(resources.files("lefschetz_lab") / "corpus"))


def lookup(obj, path: str):
    for key in path.split("."):
        if isinstance(obj, list):
            obj = obj[int(key)]
        else:
            obj = obj[key]
    return obj


def check(actual, expected) -> bool:
    if isinstance(expected, dict) and len(expected) == 1:
        (op, val), = expected.items()
        if op == "$contains":
            return all(v in actual for v in val)
        if op == "$len":
            return len(actual) == val
    return actual == expected


class CorpusError(Exception):
    """Missing or malformed corpus file."""


def load_manifest(directory) -> tuple[Path, list]:
    directory = default_directory() if directory is None else Path(directory)
    manifest = directory / "corpus.json"
    if not manifest.is_file():
        raise CorpusError(f"missing corpus file: {manifest}")
    items = json.loads(manifest.read_text())["items"]
    for name in sorted({it["ring"] for it in items}):
        if not (directory / name).is_file():
            raise CorpusError(f"missing corpus file: {directory / name}")
    return directory, items


def select(items, text: str | None):
    if not text:
        return list(items)
    return [it for it in items if text in it["name"] or text in it.get("tags", [])]


def run_item(directory: Path, item: dict, jobs: int = 1) -> dict:
    from .cli import run_verb

    ring_text = (directory / item["ring"]).read_text()
    t0 = time.perf_counter()
    if "verb" in item:
        report, _ = run_verb(item["verb"], ring_text, item.get("options", {}), jobs)
        subject = json.loads(dumps(report))
    else:
        ctx, I = parse_ring_file(ring_text)
        subject = json.loads(dumps(OPS[item["op"]](ctx, I, item.get("args", {}))))
    failures = []
    for path, want in item["expect"].items():
        try:
            got = lookup(subject, path)
        except (KeyError, IndexError, ValueError, TypeError):
            failures.append({"path": path, "expected": want, "actual": "<missing>"})
            continue
        if not check(got, want):
            failures.append({"path": path, "expected": want, "actual": got})
    return {
        "name": item["name"],
        "passed": not failures,
        "failures": failures,
        "seconds": round(time.perf_counter() - t0, 3),
    }


def run_corpus(directory=None, text: str | None = None, jobs: int = 1):
    """Run the gallery; returns ``(all passed, text summary, JSON report)``."""
    from .cli import UsageError

    try:
        directory, items = load_manifest(directory)
    except CorpusError as exc:
        raise UsageError(str(exc)) from None
    items = select(items, text)
    t0 = time.perf_counter()
    results = [run_item(directory, it, jobs) for it in items]
    total = time.perf_counter() - t0
    ok = all(r["passed"] for r in results)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']}  ({r['seconds']:.2f}s)")
        for f in r["failures"]:
            lines.append(f"      {f['path']}: expected {f['expected']!r}, got {f['actual']!r}")
    n_ok = sum(r["passed"] for r in results)
    lines.append(f"{n_ok}/{len(results)} items passed in {total:.1f}s")
    report = {
        "schema": SCHEMA,
        "command": {"verb": "corpus", "filter": text},
        # timings stay out of the JSON so identical runs give identical bytes
        "result": {
            "items": [{k: v for k, v in r.items() if k != "seconds"} for r in results],
            "passed": n_ok,
            "total": len(results),
        },
        "provenance": {"items": "run_corpus"},
        "claims": [],
        "passed": ok,
    }
    return ok, "\n".join(lines), report
