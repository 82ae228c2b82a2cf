"""Command line front end.  Every report is JSON with schema ``dyson-gap/1``.

Exit codes: 0 when the check holds, 1 when a mathematical check fails,
2 on input errors (missing files, malformed JSON, violated preconditions).
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import gap
from .dyson import HypothesisError, dyson2_report, dyson_report, random_dyson_corpus, strip_fibers
from .index import cauchy_bound_report, multiplicity, v_of, weighted_index
from .jsonio import (
    SCHEMA,
    InputError,
    dumps,
    encode,
    lattice_from_json,
    load_json,
    parse_int_pair,
    parse_pair,
    parse_rat,
    points_from_json,
    points_to_json,
    poly_from_json,
    poly_to_json,
)
from .poly import PolyError, analyze_divisor
from .siegel import SiegelError, SiegelProblem, SiegelSolution, siegel_solve, verify_solution

log = logging.getLogger("dysongap")


def _report(command: str, holds: bool, body: dict, diagnostics: dict | None = None) -> dict:
    out = {"schema": SCHEMA, "command": command, "holds": holds}
    out.update(encode(body))
    if diagnostics:
        out["diagnostics"] = encode(diagnostics)
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_index(a) -> dict:
    f, _ = poly_from_json(load_json(a.poly))
    P = parse_pair(a.point)
    iv = weighted_index(f, P, parse_pair(a.weight))
    body = {"point": list(P), "weight": list(parse_pair(a.weight)),
            "value": iv.value, "exponent": list(iv.attaining_exponent),
            "multiplicity": multiplicity(f, P)}
    diag = None
    holds = True
    if a.cauchy:
        r1, r2 = parse_pair(a.cauchy)
        rep = cauchy_bound_report(f, P, r1, r2)
        body["cauchy"] = {"s_upper": rep.s_upper, "holds": rep.holds}
        diag = rep.diagnostics
        holds = rep.holds
    return _report("index", holds, body, diag)


def cmd_vcurve(a) -> dict:
    step, top = parse_rat(a.step), parse_rat(a.max)
    if step <= 0 or top < 0:
        raise InputError("step must be positive and max nonnegative")
    rows, t = [], Fraction(0)
    while t <= top:
        rows.append({"a": t, "V": v_of(t)})
        t += step
    return _report("vcurve", True, {"step": step, "table": rows})


def _divisor_inputs(a):
    f, bd = poly_from_json(load_json(a.divisor))
    D = analyze_divisor(f, bd)
    pts = points_from_json(load_json(a.points))
    return D, pts, parse_pair(a.weight)


def _strip_body(D, pts, w) -> tuple[bool, dict]:
    s = strip_fibers(D, pts, w)
    return s.verified, {"mode": "strip", "stripped": s.stripped, "shifts": s.shifts,
                        "index_full": s.index_full, "index_reassembled": s.index_reassembled,
                        "verified": s.verified}


def cmd_dyson(a) -> dict:
    D, pts, w = _divisor_inputs(a)
    mode = getattr(a, "mode", "thm51")
    if mode == "strip":
        holds, body = _strip_body(D, pts, w)
        return _report("dyson", holds, body)
    rep = (dyson2_report if mode == "thm52" else dyson_report)(D, pts, w)
    body = {"mode": mode, "divisor": D, "indices": rep.indices, "lhs": rep.lhs, "rhs": rep.rhs,
            "term_main": rep.term_main, "term_error": rep.term_error}
    return _report("dyson", rep.holds, body)


def cmd_strip(a) -> dict:
    D, pts, w = _divisor_inputs(a)
    holds, body = _strip_body(D, pts, w)
    return _report("strip", holds, body)


def _siegel_problem(a, bidegree=None) -> SiegelProblem:
    bd = bidegree or parse_int_pair(a.bidegree)
    pts = points_from_json(load_json(a.points))
    w = parse_pair(a.weight) if a.weight else bd
    return SiegelProblem(bd, pts, w, parse_rat(a.tau))


def _solution_body(prob: SiegelProblem, sol: SiegelSolution, ok: bool) -> dict:
    return {"bidegree": list(prob.bidegree), "points": points_to_json(prob.points)["points"],
            "weight": list(prob.weight), "tau": prob.tau,
            "poly": poly_to_json(sol.poly, prob.bidegree), "height": sol.height,
            "N": sol.n_unknowns, "M": sol.n_constraints, "rank": sol.rank, "A": sol.coeff_bound,
            "bound": sol.pigeonhole_bound, "dependent_rows": [[k, list(e)] for k, e in sol.dependent_rows],
            "verified": ok}


def cmd_siegel(a) -> dict:
    prob = _siegel_problem(a)
    sol = siegel_solve(prob)
    ok = verify_solution(prob, sol)
    return _report("siegel", ok, _solution_body(prob, sol, ok))


def cmd_verify(a) -> dict:
    prob = _siegel_problem(a)
    obj = load_json(a.solution)
    f, _ = poly_from_json(obj["poly"] if isinstance(obj, dict) and "poly" in obj else obj)
    bound = obj.get("bound") if isinstance(obj, dict) else None
    sol = SiegelSolution(f, f.height() if f.is_integral() else 0, len(prob.monomials), 0, 0, 0,
                         None if bound is None else int(bound))
    ok = verify_solution(prob, sol)
    idx = [weighted_index(f, Q, prob.weight).value for Q in prob.points] if not f.is_zero else []
    return _report("verify", ok, {"poly": poly_to_json(f), "tau": prob.tau, "indices": idx,
                                  "height": sol.height, "bound": sol.pigeonhole_bound})


def _lattice(a):
    pts = load_json(a.points) if getattr(a, "points", None) else None
    return lattice_from_json(load_json(a.gram), pts)


def cmd_cover(a) -> dict:
    L = _lattice(a)
    labels = list(L.point_labels)
    if not labels:
        raise InputError("no points to cover")
    k = parse_rat(a.cos_sq) if a.cos_sq else gap.COS2_20_UPPER
    cover = gap.cone_cover([L.vec(p) for p in labels], k, L)
    chk = gap.check_cover([L.vec(p) for p in labels], cover, L)
    holds = chk["members_ok"] and chk["pairs_ok"]
    body = {"cos_sq": k, "n_centers": len(cover.centers),
            "centers": [labels[c] for c in cover.centers],
            "assignment": {labels[i]: labels[cover.centers[s]] for i, s in enumerate(cover.assignment)},
            "certificates": {labels[i]: c for i, c in enumerate(cover.certificates)},
            "check": chk}
    if a.A1 is not None or a.A2 is not None:
        if a.A1 is None or a.A2 is None:
            raise InputError("--A1 and --A2 go together")
        part = gap.finiteness_partition(L, labels, parse_rat(a.A1), parse_rat(a.A2), k)
        body["partition"] = part
    return _report("cover", holds, body)


def cmd_vojta(a) -> dict:
    L = _lattice(a)
    parts = a.pair.split(",")
    if len(parts) != 2:
        raise InputError(f"expected 'i,j', got {a.pair!r}")
    labels = list(L.point_labels)
    pair = []
    for s in parts:
        s = s.strip()
        if s in labels:
            pair.append(s)
        elif s.isdigit() and int(s) < len(labels):
            pair.append(labels[int(s)])
        else:
            raise InputError(f"unknown point {s!r}")
    P, Q = pair
    sign, c2 = gap.cos_sq_signed(L, P, Q)
    pred = gap.vojta_predicate(L, P, Q)
    body = {"pair": pair, "pairing": gap.pairing(L, P, Q), "norm_sq": [gap.norm_sq(L, P), gap.norm_sq(L, Q)],
            "sign": sign, "cos_sq": c2, "vojta_predicate": pred}
    return _report("vojta", pred, body, {"cos": sign * float(c2) ** 0.5})


def cmd_chain(a) -> dict:
    lam = parse_rat(a.lam) if a.lam else gap.LAMBDA
    ch = gap.deduction_chain(int(a.g), parse_rat(a.c0), lam)
    body = {"chain": ch, "chain_holds": ch.holds}
    holds = ch.holds
    diag = None
    given = [a.normsq1, a.normsq2, a.pairing]
    if any(v is not None for v in given):
        if any(v is None for v in given):
            raise InputError("--normsq1, --normsq2 and --pairing go together")
        asm = gap.assemble_vojta(ch.g, parse_rat(a.c0), parse_rat(a.normsq1), parse_rat(a.normsq2),
                                 parse_rat(a.pairing), lam)
        premises = asm.thresholds_met and all(asm.conditions) and asm.hypothesis_certified
        diag = asm.diagnostics
        asm.diagnostics = {}
        body["assemble"] = asm
        body["premises_met"] = premises
        holds = holds and (not premises or asm.conclusion_holds)
    return _report("chain", holds, body, diag)


_L61_KEYS = ("g", "delta1", "delta2", "d", "e1", "e2", "normsq1", "normsq2")


def cmd_lemma61(a) -> dict:
    vals = {}
    if a.params:
        obj = load_json(a.params)
        if not isinstance(obj, dict):
            raise InputError("params JSON must be an object")
        vals.update(obj)
    for k in _L61_KEYS:
        if getattr(a, k) is not None:
            vals[k] = getattr(a, k)
    missing = [k for k in _L61_KEYS if k not in vals]
    if missing:
        raise InputError(f"missing parameters: {', '.join(missing)}")
    r = {k: parse_rat(str(vals[k])) for k in _L61_KEYS}
    for k in ("e1", "e2"):
        if r[k].denominator != 1:
            raise InputError(f"{k} must be an integer")
    rep = gap.bound_index_check(r["g"], r["delta1"], r["delta2"], r["d"], int(r["e1"]), int(r["e2"]),
                                r["normsq1"], r["normsq2"])
    return _report("lemma61", _lemma61_holds(rep), _lemma61_body(rep))


def _lemma61_holds(rep) -> bool:
    # the Dyson bound is the hypothesis; if it fails there is nothing to check
    return not rep.hypothesis_holds or rep.holds


def _lemma61_body(rep) -> dict:
    return {"index": rep.index, "dyson_bound": rep.dyson_bound, "c_sq": rep.c_sq,
            "hypothesis_met": rep.hypothesis_holds, "steps": rep.steps}


def cmd_corpus(a) -> dict:
    summary, outcomes = random_dyson_corpus(int(a.seed), int(a.n), parse_int_pair(a.max_bidegree))
    body = {"summary": summary}
    if a.cases:
        body["cases"] = outcomes
    return _report("corpus", summary.all_hold, body)


def cmd_pipeline(a) -> dict:
    """siegel -> index -> dyson -> lemma61 on one dataset.

    The Siegel section of bidegree ``(d1, d2)`` is read as a section of the
    larger bundle ``(delta1 d, delta2 d)`` for admissible deltas; its indices at
    that weight feed the index-bound chain with synthetic norms drawn from the
    seed inside the admissible ratio window.
    """
    g = int(a.g)
    if g < 2:
        raise InputError("genus must be >= 2")
    bd = parse_int_pair(a.bidegree)
    prob = _siegel_problem(a, bd)
    sol = siegel_solve(prob)
    ok_siegel = verify_solution(prob, sol)
    stages = {"siegel": {**_solution_body(prob, sol, ok_siegel), "holds": ok_siegel}}

    idx = [weighted_index(sol.poly, Q, prob.weight) for Q in prob.points]
    ok_index = all(iv.value >= prob.tau for iv in idx)
    stages["index"] = {"weight": list(prob.weight), "values": [iv.value for iv in idx],
                       "exponents": [list(iv.attaining_exponent) for iv in idx], "holds": ok_index}

    D = analyze_divisor(sol.poly, bd)
    try:
        dr = dyson_report(D, prob.points, prob.weight)
        stages["dyson"] = {"applicable": True, "lhs": dr.lhs, "rhs": dr.rhs, "indices": dr.indices,
                           "holds": dr.holds}
        ok_dyson = dr.holds
    except HypothesisError as e:
        stages["dyson"] = {"applicable": False, "reason": str(e), "holds": True}
        ok_dyson = True

    if a.deltas:
        parts = a.deltas.split(",")
        if len(parts) != 3:
            raise InputError("--deltas takes delta1,delta2,d")
        d1, d2, d = (parse_rat(p) for p in parts)
    else:
        d1, d2, d = gap.default_deltas(g, bd)
    big = (d1 * d, d2 * d)
    if big[0].denominator != 1 or big[1].denominator != 1 or big[0] < bd[0] or big[1] < bd[1]:
        raise InputError("delta_i d must be integers covering the section bidegree")
    big = (int(big[0]), int(big[1]))
    rng = random.Random(f"dyson-gap-pipeline:{int(a.seed)}")
    lo, hi = g / (d2 * d2), d1 * d1 / g  # admissible window for |P2|^2 / |P1|^2
    if lo > hi:
        raise InputError("deltas admit no norm ratio")
    t = Fraction(rng.randint(0, 1000), 1000)
    n1, n2 = Fraction(1), lo + t * (hi - lo)
    Dbig = analyze_divisor(sol.poly, big)
    reports, ok_l61 = [], True
    for Q in prob.points:
        iv = weighted_index(sol.poly, Q, big)
        e1, e2 = iv.attaining_exponent
        rep = gap.bound_index_check(g, d1, d2, d, e1, e2, n1, n2)
        ok_l61 = ok_l61 and _lemma61_holds(rep)
        reports.append({"point": list(Q), "exponent": [e1, e2], **_lemma61_body(rep)})
    try:
        dbig = dyson_report(Dbig, prob.points, big)
        big_dyson = {"lhs": dbig.lhs, "rhs": dbig.rhs, "holds": dbig.holds}
        ok_dyson = ok_dyson and dbig.holds
    except HypothesisError as e:
        big_dyson = {"applicable": False, "reason": str(e)}
    stages["lemma61"] = {"g": g, "delta1": d1, "delta2": d2, "d": d, "bidegree": list(big),
                         "normsq": [n1, n2], "dyson_at_bidegree": big_dyson, "points": reports,
                         "holds": ok_l61}
    holds = ok_siegel and ok_index and ok_dyson and ok_l61
    return _report("pipeline", holds, {"seed": int(a.seed), "stages": stages})


# ---------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="count", default=0)


def _add_cover(sub):
    p = sub.add_parser("cover", help="greedy cone cover of lattice points")
    p.add_argument("--gram", required=True)
    p.add_argument("--points")
    p.add_argument("--cos-sq", dest="cos_sq", help="cone threshold on cos^2 (default: upper bound of cos^2 20)")
    p.add_argument("--A1")
    p.add_argument("--A2")
    p.set_defaults(func=cmd_cover)
    return p


def _add_vojta(sub):
    p = sub.add_parser("vojta", help="Vojta predicate for a pair of points")
    p.add_argument("--gram", required=True)
    p.add_argument("--points")
    p.add_argument("--pair", required=True)
    p.set_defaults(func=cmd_vojta)
    return p


def _add_chain(sub):
    p = sub.add_parser("chain", help="thresholds of the explicit deduction")
    p.add_argument("--g", required=True, type=int)
    p.add_argument("--c0", default="0")
    p.add_argument("--lam")
    p.add_argument("--normsq1")
    p.add_argument("--normsq2")
    p.add_argument("--pairing")
    p.set_defaults(func=cmd_chain)
    return p


def _add_lemma61(sub):
    p = sub.add_parser("lemma61", help="index bound chain")
    p.add_argument("--params", help="JSON object with g, delta1, delta2, d, e1, e2, normsq1, normsq2")
    for k in _L61_KEYS:
        p.add_argument(f"--{k}")
    p.set_defaults(func=cmd_lemma61)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyson-gap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    added = []

    p = sub.add_parser("index", help="weighted index of a polynomial at a point")
    p.add_argument("--poly", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--cauchy", help="r1,r2: also run the coefficient extraction check")
    p.set_defaults(func=cmd_index)
    added.append(p)

    p = sub.add_parser("vcurve", help="tabulate V")
    p.add_argument("--step", default="1/8")
    p.add_argument("--max", default="5/2")
    p.set_defaults(func=cmd_vcurve)
    added.append(p)

    for name, fn in (("dyson", cmd_dyson), ("strip", cmd_strip)):
        p = sub.add_parser(name, help="Dyson inequality report" if name == "dyson" else "fiber stripping")
        p.add_argument("--divisor", required=True)
        p.add_argument("--points", required=True)
        p.add_argument("--weight", required=True)
        if name == "dyson":
            p.add_argument("--mode", choices=("thm51", "thm52", "strip"), default="thm51")
        p.set_defaults(func=fn)
        added.append(p)

    for name, fn in (("siegel", cmd_siegel), ("verify", cmd_verify)):
        p = sub.add_parser(name, help="small polynomial with prescribed index" if name == "siegel"
                           else "recheck a polynomial against index conditions")
        p.add_argument("--bidegree", required=True)
        p.add_argument("--points", required=True)
        p.add_argument("--weight")
        p.add_argument("--tau", required=True)
        if name == "verify":
            p.add_argument("--solution", required=True)
        p.set_defaults(func=fn)
        added.append(p)

    added += [_add_cover(sub), _add_vojta(sub), _add_chain(sub), _add_lemma61(sub)]

    p = sub.add_parser("corpus", help="seeded random Dyson corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--max-bidegree", dest="max_bidegree", default="4,4")
    p.add_argument("--cases", action="store_true", help="include per-case outcomes")
    p.set_defaults(func=cmd_corpus)
    added.append(p)

    p = sub.add_parser("pipeline", help="siegel -> index -> dyson -> lemma61")
    p.add_argument("--g", required=True, type=int)
    p.add_argument("--bidegree", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--weight")
    p.add_argument("--tau", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deltas", help="delta1,delta2,d")
    p.set_defaults(func=cmd_pipeline)
    added.append(p)

    p = sub.add_parser("gap", help="lattice geometry and explicit constants")
    gsub = p.add_subparsers(dest="gap_command", required=True)
    added += [_add_cover(gsub), _add_vojta(gsub), _add_chain(gsub), _add_lemma61(gsub)]

    for p in added:
        _common(p)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(a.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        report = a.func(a)
    except (InputError, PolyError, SiegelError, HypothesisError, gap.LatticeError,
            gap.PreconditionError, ValueError) as e:
        print(f"dyson-gap: error: {e}", file=sys.stderr)
        return 2
    except KeyError as e:
        print(f"dyson-gap: error: missing key {e}", file=sys.stderr)
        return 2
    text = dumps(report)
    if a.out:
        Path(a.out).write_text(text)
        log.info("report written to %s", a.out)
    else:
        sys.stdout.write(text)
    return 0 if report["holds"] else 1


if __name__ == "__main__":
    sys.exit(main())
