"""Command-line interface: ``lefschetz-lab <verb> <ring-file> [options]``.

Exit codes: 0 on success, 1 when ``--expect`` is given and the outcome
contradicts it (or a ``--verify`` replay does not match), 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .closure import (
    DEFAULT_EMAX,
    MonomialIdeal,
    briancon_skoda_check,
    colon_capturing_probe,
    generic_tight_closure_probe,
    integral_closure_monomial,
    jacobian_power_check,
    monomial_conjecture_check,
    newton_polyhedron_contains,
    power_criterion,
    test_element_candidates,
    tight_closure_probe,
)
from .criteria import (
    grauert_remmert_normal,
    height,
    jacobian_ideal,
    noether_normalize,
    serre_Ri_check,
)
from .invariants import dimension, ring_invariants, weierstrass_divide
from .report import ClaimLog, build_report, dumps, replay_claims
from .ring import ParseError, RingError, format_exponent, format_polynomial, parse_ring_file, serialize_ring_file
from .stdbasis import INFINITE, LocalIdeal, hilbert_samuel, is_monomial_ideal, length_artinian
from .transfer import (
    ALL_CHECKS,
    BadPrimeError,
    classify_primes,
    parse_primes,
    reduce_mod_p,
    transfer_check,
)

log = logging.getLogger(__name__)

VERBS = (
    "std", "hilbert", "invariants", "reduce", "transfer", "tc-probe", "gtc-probe",
    "intclose", "bs", "mc", "cc", "noether", "jacobian", "ri", "normal", "weierstrass",
    "corpus",
)


class UsageError(Exception):
    """Bad command line or input file; maps to exit code 2."""


@dataclass
class Outcome:
    result: dict
    text: str
    passed: bool = True
    provenance: dict = field(default_factory=dict)
    claims: ClaimLog = field(default_factory=ClaimLog)


# --------------------------------------------------------------------------
# helpers


def _fmt_len(v):
    return "infinite" if v == INFINITE else v


def _poly(ctx, text: str, what: str):
    try:
        return ctx.parse(text)
    except (ParseError, RingError) as exc:
        raise UsageError(f"bad {what} {text!r}: {exc}") from None


def _polys(ctx, text: str | None, what: str):
    if not text:
        return []
    return [_poly(ctx, t, what) for t in text.split(";") if t.strip()]


def _params(ctx, args):
    return [_poly(ctx, t, "parameter") for t in (args.params or [])]


def _primes(args, default=None):
    if args.primes is None and default is not None:
        return list(default)
    try:
        return parse_primes(args.primes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this verb")
    return value


def _table(rows) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# --------------------------------------------------------------------------
# verbs


def cmd_std(ctx, I, args) -> Outcome:
    out = Outcome({}, "", provenance={"basis": "standard_basis", "length": "length_artinian"})
    if I.is_zero():
        basis, antichain = [], []
    else:
        basis, antichain = list(I.std.generators), list(I.std.antichain)
    for g in basis:
        out.claims.membership(g, I, "standard_basis")
    length = _fmt_len(length_artinian(I))
    out.result = {
        "basis": [format_polynomial(g) for g in basis],
        "antichain": [list(a) for a in antichain],
        "length": length,
    }
    rows = [["generator", "leading exponent"]]
    rows += [[format_polynomial(g), format_exponent(a)] for g, a in zip(basis, antichain)]
    out.text = _table(rows) + f"\nantichain: {' '.join(format_exponent(a) for a in antichain) or '-'}\nlength: {length}"
    return out


def cmd_hilbert(ctx, I, args) -> Outcome:
    d = 6 if args.dmax is None else args.dmax
    hs = hilbert_samuel(I, d)
    antichain = [] if I.is_zero() else [list(a) for a in I.std.antichain]
    text = _table([["d"] + list(range(d + 1)), ["chi"] + hs])
    return Outcome(
        {"d_max": d, "hilbert_samuel": hs, "antichain": antichain},
        text,
        provenance={"hilbert_samuel": "hilbert_samuel"},
    )


def cmd_invariants(ctx, I, args) -> Outcome:
    d = 6 if args.dmax is None else args.dmax
    try:
        rec = ring_invariants(I, d, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = rec.to_json()
    lines = [f"{k}: {v}" for k, v in res.items() if k != "diagnostics"]
    lines += [f"note: {m}" for m in rec.diagnostics]
    return Outcome(res, "\n".join(lines), provenance={"record": "ring_invariants"})


def _char0(I, verb):
    if I.ctx.characteristic != 0:
        raise UsageError(f"{verb} expects a characteristic-0 ring file")


def cmd_reduce(ctx, I, args) -> Outcome:
    _char0(I, "reduce")
    primes = _primes(args)
    plan = classify_primes(I, primes, args.seed)
    reduced = {}
    for p in primes:
        try:
            reduced[str(p)] = [format_polynomial(g) for g in reduce_mod_p(I, p).generators]
        except BadPrimeError:
            continue
    rows = [["p", "status", "generators"]]
    for p in primes:
        rows.append([p, plan.status[p], "; ".join(reduced.get(str(p), ["-"]))])
    return Outcome(
        {"plan": plan.to_json(), "reduced": reduced},
        _table(rows),
        provenance={"plan": "classify_primes", "reduced": "reduce_mod_p"},
    )


def cmd_transfer(ctx, I, args) -> Outcome:
    _char0(I, "transfer")
    checks = args.checks or ["all"]
    try:
        rep = transfer_check(
            I, _primes(args), 6 if args.dmax is None else args.dmax, checks,
            seed=args.seed, jobs=args.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return Outcome(rep.to_json(), rep.format_table(), rep.all_agree, {"report": "transfer_check"})


def _probe_inputs(ctx, I, args):
    Ideal = LocalIdeal(ctx, tuple(_polys(ctx, _need(args.ideal, "--ideal"), "--ideal")))
    z = _poly(ctx, _need(args.z, "--z"), "--z")
    return I, Ideal, z


def _probe_text(v) -> str:
    es = " ".join(f"e={e}:{o}" for e, o in sorted(v.outcomes.items()))
    c = "-" if v.test_element is None else format_polynomial(v.test_element)
    cert = "certified" if v.certified else "uncertified"
    return f"p={v.prime}  c={c} ({cert})  {es}  -> {v.summary}"


def _probe_passed(summary: str) -> bool:
    return summary in ("consistent-with-membership", "membership-in-ideal")


def cmd_tc_probe(ctx, ambient, args) -> Outcome:
    ambient, I, z = _probe_inputs(ctx, ambient, args)
    if ctx.characteristic == 0:
        primes = _primes(args)
        if len(primes) != 1:
            raise UsageError("tc-probe over a char-0 ring file needs exactly one prime in --primes")
        p = primes[0]
        try:
            ambient, I = reduce_mod_p(ambient, p), reduce_mod_p(I, p)
        except BadPrimeError as exc:
            raise UsageError(str(exc)) from None
        z = z.change_context(ambient.ctx)
    pctx = ambient.ctx
    emax = DEFAULT_EMAX if args.emax is None else args.emax
    if args.c in (None, "auto"):
        cands = test_element_candidates(ambient)
        if not cands:
            raise UsageError("no Jacobian test-element candidate; pass --c explicitly")
        c = cands[0]
    else:
        c = _poly(pctx, args.c, "--c")
    try:
        v = tight_closure_probe(I, z, c, emax, ambient)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Outcome(v.to_json(), _probe_text(v), _probe_passed(v.summary),
                  {"verdict": "tight_closure_probe"})
    out.result["z_in_ideal"] = out.claims.membership(z, I + ambient.generators, "tight_closure_probe")
    return out


def cmd_gtc_probe(ctx, ambient, args) -> Outcome:
    _char0(ambient, "gtc-probe")
    ambient, I, z = _probe_inputs(ctx, ambient, args)
    c = None if args.c in (None, "auto") else _poly(ctx, args.c, "--c")
    emax = DEFAULT_EMAX if args.emax is None else args.emax
    try:
        rep = generic_tight_closure_probe(I, z, ambient, _primes(args), emax, c=c, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Outcome(rep.to_json(), "", _probe_passed(rep.summary), {"report": "generic_tight_closure_probe"})
    out.result["z_in_ideal"] = out.claims.membership(z, I + ambient.generators, "generic_tight_closure_probe")
    out.text = "\n".join([_probe_text(v) for _, v in sorted(rep.verdicts.items())] + [f"summary: {rep.summary}"])
    return out


def _monomial(I) -> MonomialIdeal:
    if I.is_zero() or not is_monomial_ideal(I):
        raise UsageError("this verb needs a nonzero monomial ideal in the ring file")
    return MonomialIdeal(I.std.antichain)


def cmd_intclose(ctx, I, args) -> Outcome:
    J = _monomial(I)
    z = _poly(ctx, _need(args.z, "--z"), "--z")
    if not z.is_monomial():
        raise UsageError("--z must be a monomial")
    e = z.lead_exponent
    lp, pc = newton_polyhedron_contains(J, e), power_criterion(J, e)
    member = integral_closure_monomial(J, e)
    res = {
        "ideal": [list(a) for a in J.antichain],
        "z": list(e),
        "newton_polyhedron": lp,
        "power_criterion": pc,
        "member": member,
    }
    text = f"{format_polynomial(z)} {'is' if member else 'is not'} integral over {J} (NP: {lp}, powers: {pc})"
    return Outcome(res, text, member, {"member": "integral_closure_monomial"})


def cmd_bs(ctx, I, args) -> Outcome:
    if not I.is_zero() and len(I.generators) == 1 and not is_monomial_ideal(I):
        f = I.generators[0]
        n = ctx.nvars
        partials = LocalIdeal(ctx, tuple(f.diff(i) for i in range(n)))
        out = Outcome({}, "", provenance={"holds": "jacobian_power_check"})
        holds = out.claims.membership(f**n, partials, "jacobian_power_check", jacobian_power_check(f))
        out.result = {"mode": "partials", "f": format_polynomial(f), "exponent": n, "holds": holds}
        out.passed = holds
        out.text = f"f^{n} {'in' if holds else 'NOT in'} (partials of {format_polynomial(f)})"
        return out
    J = _monomial(I)
    bound = 12 if args.dmax is None else args.dmax
    v = briancon_skoda_check(J, args.l, bound)
    res = dict(v.to_json(), mode="monomial")
    text = (
        f"J={J} m={v.m} l={v.l}: {v.points_checked} lattice points up to degree {bound}, "
        f"{len(v.counterexamples)} counterexamples"
    )
    return Outcome(res, text, v.holds, {"holds": "briancon_skoda_check"})


def cmd_mc(ctx, I, args) -> Outcome:
    z = _params(ctx, args)
    try:
        v = monomial_conjecture_check(I, z, args.tmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Outcome(v.to_json(), "", v.holds, {"results": "monomial_conjecture_check"})
    prod = ctx.one()
    for zi in z:
        prod = prod * zi
    for t, ok in sorted(v.results.items()):
        out.claims.membership(prod**t, I + [zi ** (t + 1) for zi in z], "monomial_conjecture_check", not ok)
    lines = [f"t={t}: {'PASS' if ok else 'FAIL'}" for t, ok in sorted(v.results.items())]
    out.text = "\n".join(lines) if lines else "vacuous pass (no parameters)"
    return out


def cmd_cc(ctx, I, args) -> Outcome:
    _char0(I, "cc")
    z = _params(ctx, args)
    i = len(z) if args.index is None else args.index
    emax = 2 if args.emax is None else args.emax
    try:
        rep = colon_capturing_probe(I, z, i, _primes(args), emax, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Outcome(rep.to_json(), "", rep.summary in ("consistent-with-membership", "nothing-to-probe"),
                  {"report": "colon_capturing_probe"})
    Q = I + z[: i - 1]
    for u in rep.outside:
        out.claims.membership(u * z[i - 1], Q, "colon_capturing_probe")
        out.claims.membership(u, Q, "colon_capturing_probe")
    lines = [f"colon: {', '.join(format_polynomial(g) for g in rep.colon_generators)}"]
    lines += [f"outside: {', '.join(format_polynomial(g) for g in rep.outside) or '-'}"]
    for u, r in rep.probes:
        lines.append(f"probe {format_polynomial(u)}: {r.summary}")
    lines.append(f"summary: {rep.summary}")
    out.text = "\n".join(lines)
    return out


def cmd_noether(ctx, I, args) -> Outcome:
    try:
        cert = noether_normalize(I, args.retries, args.seed)
    except RuntimeError as exc:
        return Outcome({"error": str(exc)}, str(exc), False)
    text = (
        f"dimension {cert.dimension}; matrix {[list(r) for r in cert.change.matrix]}\n"
        f"parameters: {', '.join(format_polynomial(f) for f in cert.parameters) or '-'}"
        f" (colength {_fmt_len(cert.length)})"
    )
    return Outcome(cert.to_json(), text, provenance={"certificate": "noether_normalize"})


def cmd_jacobian(ctx, I, args) -> Outcome:
    h = height(I) if args.h is None else args.h
    try:
        J = jacobian_ideal(I, h)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dim = -1 if J.is_unit_ideal() else dimension(J)
    res = {"h": h, "ideal": [format_polynomial(g) for g in J.generators], "dimension": dim}
    text = f"J_{h} = ({', '.join(res['ideal'])}); dim of quotient {dim if dim >= 0 else 'empty (unit ideal)'}"
    return Outcome(res, text, provenance={"ideal": "jacobian_ideal"})


def cmd_ri(ctx, I, args) -> Outcome:
    try:
        v = serre_Ri_check(I, args.i)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = v.to_json()
    text = f"(R_{v.i}) {'holds' if v.holds else 'fails'}: h={v.height}, dim R/J={res['jacobian_dimension']}, bound {v.bound}"
    return Outcome(res, text, v.holds, {"holds": "serre_Ri_check"})


def cmd_normal(ctx, I, args) -> Outcome:
    H = LocalIdeal(ctx, tuple(_polys(ctx, args.ideal, "--ideal"))) if args.ideal else None
    f = _poly(ctx, args.f, "--f") if args.f else None
    try:
        cert = grauert_remmert_normal(I, H, f)
    except (ValueError, StopIteration) as exc:
        raise UsageError(f"normality test: {exc}") from None
    out = Outcome(cert.to_json(), "", cert.verdict == "normal", {"certificate": "grauert_remmert_normal"})
    fH = I + [cert.f * h for h in cert.H.generators]
    if cert.witness is not None:
        for h in cert.H.generators:
            out.claims.membership(cert.witness * h, fH, "grauert_remmert_normal")
        out.claims.membership(cert.witness, I + [cert.f], "grauert_remmert_normal")
    else:
        for g in cert.colon_generators:
            out.claims.membership(g, I + [cert.f], "grauert_remmert_normal")
    w = "-" if cert.witness is None else format_polynomial(cert.witness)
    out.text = (
        f"H = ({', '.join(format_polynomial(h) for h in cert.H.generators)}), f = {format_polynomial(cert.f)}\n"
        f"verdict: {cert.verdict}; witness: {w}"
    )
    return out


def cmd_weierstrass(ctx, I, args) -> Outcome:
    if I.is_zero():
        raise UsageError("the ring file must hold the divisor g as its first generator")
    g = I.generators[0]
    f = _poly(ctx, _need(args.z, "--z"), "--z")
    dmax = _need(args.dmax, "--dmax")
    try:
        q, r = weierstrass_divide(f, g, dmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    check = not (f - q * g - r).truncate(dmax)
    res = {"f": format_polynomial(f), "g": format_polynomial(g), "dmax": dmax,
           "q": format_polynomial(q), "r": format_polynomial(r), "verified": check}
    text = f"q = {res['q']}\nr = {res['r']}\nf - q*g - r vanishes through degree {dmax}: {check}"
    return Outcome(res, text, check, {"q": "weierstrass_divide", "r": "weierstrass_divide"})


HANDLERS = {
    "std": cmd_std,
    "hilbert": cmd_hilbert,
    "invariants": cmd_invariants,
    "reduce": cmd_reduce,
    "transfer": cmd_transfer,
    "tc-probe": cmd_tc_probe,
    "gtc-probe": cmd_gtc_probe,
    "intclose": cmd_intclose,
    "bs": cmd_bs,
    "mc": cmd_mc,
    "cc": cmd_cc,
    "noether": cmd_noether,
    "jacobian": cmd_jacobian,
    "ri": cmd_ri,
    "normal": cmd_normal,
    "weierstrass": cmd_weierstrass,
}


# --------------------------------------------------------------------------
# argument parsing


# options echoed into reports; --jobs is left out so reports do not depend on it
_ECHO = ("params", "z", "ideal", "c", "emax", "dmax", "primes", "seed",
         "checks", "tmax", "index", "i", "h", "l", "f", "retries")


_SUBPARSERS: dict = {}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", nargs="+", metavar="POLY", help="parameters z_1 ... z_d")
    common.add_argument("--z", metavar="POLY", help="element to test")
    common.add_argument("--ideal", metavar="POLY;POLY", help="semicolon-separated generators")
    common.add_argument("--c", metavar="POLY|auto", help="test element (default: auto)")
    common.add_argument("--emax", type=int, help="largest Frobenius exponent e")
    common.add_argument("--dmax", type=int, help="degree bound")
    common.add_argument("--primes", nargs="+", metavar="SPEC", help="a..b, a list, or 'default'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--expect", choices=("pass", "fail"))
    common.add_argument("--verify", metavar="REPORT", help="replay a stored JSON report")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lefschetz-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True
    helps = {
        "std": "standard basis and leading antichain",
        "hilbert": "Hilbert-Samuel function up to --dmax",
        "invariants": "dimension, depth, multiplicity, regular/CM/Gorenstein",
        "reduce": "reduce modulo --primes and classify them",
        "transfer": "compare invariants in char 0 with good primes",
        "tc-probe": "Frobenius probe c*z^q in I^[q] + ambient at one prime",
        "gtc-probe": "the same probe at every good prime",
        "intclose": "monomial integral closure membership of --z",
        "bs": "Briancon-Skoda lattice scan (monomial) or f^n in (partials)",
        "mc": "monomial conjecture non-membership for t <= --tmax",
        "cc": "colon capturing witnesses and probes",
        "noether": "generic Noether normalization",
        "jacobian": "Jacobian ideal of minor size --h",
        "ri": "Serre (R_i) via the Jacobian ideal",
        "normal": "Grauert-Remmert normality certificate",
        "weierstrass": "truncated Weierstrass division of --z by the first generator",
        "corpus": "run the bundled example gallery",
    }
    for verb in VERBS:
        sp = sub.add_parser(verb, parents=[common], help=helps[verb], description=helps[verb])
        _SUBPARSERS[verb] = sp
        sp.add_argument("ring_file", nargs="?", help="ring file (a directory for 'corpus')")
        if verb == "transfer":
            sp.add_argument("--checks", nargs="+", choices=ALL_CHECKS + ("all",))
        if verb == "mc":
            sp.add_argument("--tmax", type=int, default=5)
        if verb == "cc":
            sp.add_argument("--index", type=int, help="which parameter to colon by (default: last)")
        if verb == "ri":
            sp.add_argument("--i", type=int, default=0)
        if verb == "jacobian":
            sp.add_argument("--h", type=int, help="minor size (default: height)")
        if verb == "bs":
            sp.add_argument("--l", type=int, default=0)
        if verb == "normal":
            sp.add_argument("--f", metavar="POLY", help="nonzero element of H")
        if verb == "noether":
            sp.add_argument("--retries", type=int, default=8)
        if verb == "corpus":
            sp.add_argument("--filter", metavar="TEXT", help="only items whose name or tags contain TEXT")
    return parser


def _echo(args) -> dict:
    return {k: getattr(args, k) for k in _ECHO if getattr(args, k, None) is not None}


def run_verb(verb: str, ring_text: str, options: dict, jobs: int = 1):
    """Run a verb on ring-file text with echoed options; returns the JSON report."""
    ns = argparse.Namespace(**{k: None for k in _ECHO})
    ns.seed, ns.jobs, ns.tmax, ns.i, ns.l, ns.retries = 0, 1, 5, 0, 0, 8
    for k, v in options.items():
        setattr(ns, k, v)
    ns.jobs = jobs
    try:
        ctx, I = parse_ring_file(ring_text)
    except (ParseError, RingError) as exc:
        raise UsageError(f"ring file: {exc}") from None
    out = HANDLERS[verb](ctx, I, ns)
    command = {"verb": verb, "ring": serialize_ring_file(I), "options": dict(sorted(options.items()))}
    return build_report(command, out.result, out.provenance, out.claims, out.passed), out


def _verify(path: str) -> int:
    try:
        report = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report {path}: {exc}", file=sys.stderr)
        return 2
    try:
        count, failures = replay_claims(report)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cmd = report.get("command", {})
    rerun_ok = True
    if cmd.get("verb") in HANDLERS:
        fresh, _ = run_verb(cmd["verb"], cmd["ring"], cmd.get("options", {}))
        rerun_ok = dumps(fresh) == dumps(report)
    print(f"replayed {count} membership claims: {count - len(failures)} match, {len(failures)} differ")
    print(f"recomputed report {'matches' if rerun_ok else 'DIFFERS'} byte-for-byte")
    return 0 if not failures and rerun_ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.verify:
        return _verify(args.verify)
    try:
        if args.verb == "corpus":
            from .corpus import run_corpus

            passed, text, report = run_corpus(args.ring_file, args.filter, args.jobs)
            # a failing corpus item is a nonzero exit even without --expect
            args.expect = args.expect or "pass"
        else:
            if not args.ring_file:
                raise UsageError(f"{args.verb} needs a ring file")
            try:
                text_in = Path(args.ring_file).read_text(encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot read {args.ring_file}: {exc.strerror}") from None
            report, out = run_verb(args.verb, text_in, _echo(args), args.jobs)
            passed, text = out.passed, out.text
    except UsageError as exc:
        _SUBPARSERS[args.verb].print_usage(sys.stderr)
        print(f"lefschetz-lab {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(report) if args.json else text.rstrip("\n") + "\n")
    if args.expect is not None and passed != (args.expect == "pass"):
        print(f"expectation '{args.expect}' violated", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
