"""Command-line interface.

Exit codes: 0 affirmative, 1 negative verdict, 2 unknown or budget
exhausted, 3 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from . import consequence as cq
from .entail_prop import (
    PoolConfig,
    atomic_entails_prop,
    classical_entails_prop,
    falsify_def51,
    gap_witness,
)
from .fol import existential_closure, j_translate, prenex, star_fol, universal_closure
from .fol_engine import (
    Membership,
    atomic_entails_fol,
    classical_entails_fol,
    member_LD,
    run_schema_suite,
)
from .formula import Neg
from .matrix import (
    M_2,
    Status,
    UnassignedVariable,
    UnsupportedConnective,
    evaluate,
    get_matrix,
    is_valid,
    verify_tables,
)
from .parsing import ParseError, is_first_order, parse_any, parse_fol, parse_prop
from .prover import Budget, BudgetZero, classical_validity

OK, NEGATIVE, UNKNOWN, USAGE = 0, 1, 2, 3
_STATUS_EXIT = {Status.HOLDS: OK, Status.FAILS: NEGATIVE, Status.UNKNOWN: UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _formula(text: str, kind: str = "any"):
    if kind == "prop":
        return parse_prop(text)
    if kind == "fol":
        return parse_fol(text)
    return parse_any(text)


def _budget(args) -> Budget:
    ms = int(os.environ.get("WORKBENCH_BUDGET_MS", "0") or 0)
    return Budget(max_domain=args.max_domain, max_steps=args.max_steps, time_ms=ms)


def _premises(text: str):
    if text.strip() == "*":
        return cq.FULL_LANGUAGE
    return [parse_any(t) for t in text.split(";") if t.strip()]


def _same_language(logic: str, formulas) -> None:
    for f in formulas:
        if (logic == "LD") != is_first_order(f):
            raise UsageError(f"{f} is not in the language of {logic}")


# -- subcommands; each returns (exit code, report dict, human text) ----------------

def cmd_parse(args):
    f = parse_any(args.formula)
    return OK, {"formula": str(f), "first_order": is_first_order(f)}, str(f)


def cmd_eval(args):
    m = get_matrix(args.matrix)
    f = parse_prop(args.formula)
    assign = {}
    for part in filter(None, (args.assign or "").split(",")):
        name, _, val = part.partition("=")
        try:
            assign[name.strip()] = type(m.values[0])(val)
        except ValueError:
            raise UsageError(f"bad assignment {part!r}") from None
    value = evaluate(m, assign, f)
    return OK, {"formula": str(f), "matrix": m.name, "assignment": assign,
                "value": value, "designated": value in m.designated}, str(value)


def cmd_valid(args):
    m = get_matrix(args.matrix)
    f = parse_prop(args.formula)
    v = is_valid(m, f)
    rep = {"formula": str(f), "matrix": m.name, "verdict": v.status.value}
    text = "valid"
    if not v.holds:
        rep["countermodel"] = v.countermodel
        text = f"not valid; countermodel {v.countermodel}"
    return _STATUS_EXIT[v.status], rep, text


def cmd_member(args):
    f = parse_any(args.formula)
    budget = _budget(args)
    if args.system == "TD":
        if is_first_order(f):
            raise UsageError("T_D membership needs a propositional formula")
        v = is_valid(get_matrix("MD"), f)
        rep = {"formula": str(f), "system": "TD", "verdict": v.status.value,
               "countermodel": v.countermodel}
        return _STATUS_EXIT[v.status], rep, v.status.value
    if args.system == "LD":
        if not is_first_order(f):
            raise UsageError("L_D membership needs a first-order formula")
        v = member_LD(f, budget)
        code = {Membership.YES: OK, Membership.NO: NEGATIVE, Membership.UNKNOWN: UNKNOWN}[v.member]
        return code, {"system": "LD", **v.to_json()}, v.member.value
    if is_first_order(f):
        cv = classical_validity(f, budget)
        return _STATUS_EXIT[cv.status], {"formula": str(f), "system": "L2", **cv.to_json()}, \
            cv.to_json()["outcome"]
    v = is_valid(M_2, f)
    return _STATUS_EXIT[v.status], {"formula": str(f), "system": "L2", "verdict": v.status.value,
                                    "countermodel": v.countermodel}, v.status.value


def cmd_entail(args):
    budget = _budget(args)
    if args.mode in ("atomic-prop", "classical-prop"):
        phi, psi = parse_prop(args.phi), parse_prop(args.psi)
        fn = atomic_entails_prop if args.mode == "atomic-prop" else classical_entails_prop
        v = fn(phi, psi)
        code = OK if v.holds else NEGATIVE
        text = "holds" if v.holds else f"fails; countermodel {v.countermodel}"
        return code, v.to_json(), text
    phi, psi = parse_fol(args.phi), parse_fol(args.psi)
    fn = atomic_entails_fol if args.mode == "atomic-fol" else classical_entails_fol
    v = fn(phi, psi, budget)
    rep = v.to_json()
    text = v.status.value
    if v.status is Status.FAILS:
        text += f"; evidence {rep['evidence']}"
    return _STATUS_EXIT[v.status], rep, text


def cmd_falsify(args):
    phi, psi = parse_prop(args.phi), parse_prop(args.psi)
    w = falsify_def51(phi, psi, PoolConfig(depth=args.pool_depth))
    if w is None:
        return NEGATIVE, {"phi": str(phi), "psi": str(psi), "witness": None}, "no witness in pool"
    return OK, {"phi": str(phi), "psi": str(psi), "witness": w.to_json()}, \
        f"condition {w.condition} fails under {w.substitution} ({w.reason})"


def cmd_gap(args):
    r = gap_witness(args.relation, PoolConfig(depth=args.pool_depth), max_pairs=args.max_pairs)
    if r.witness is not None:
        return OK, r.to_json(), f"{r.witness.kind} ({r.witness.reading}): {r.witness.to_json()}"
    if r.budget_exhausted:
        return UNKNOWN, r.to_json(), "budget exhausted, no witness"
    return NEGATIVE, r.to_json(), f"no witness among {r.pairs_examined} pairs"


def _transform(fn):
    def run(args):
        f = parse_any(args.formula)
        g = fn(f)
        return OK, {"formula": str(f), "result": str(g)}, str(g)
    return run


def _star(f):
    return star_fol(f) if is_first_order(f) else Neg(f)


def _close(args):
    f = parse_fol(args.formula)
    g = existential_closure(f) if args.existential else universal_closure(f)
    return OK, {"formula": str(f), "result": str(g)}, str(g)


def cmd_suite(args):
    try:
        rep = run_schema_suite(args.range, _budget(args))
    except ValueError as e:
        raise UsageError(str(e)) from None
    data = rep.to_json()
    lines = [f"({r.label}) {r.outcome}" for r in rep.results]
    lines.append(f"{data['pass']}/{data['total']} pass; discrepancies: {data['discrepancies'] or 'none'}")
    if rep.converse is not None:
        lines.append(f"converse of (xxviii): {data['converse_xxviii']['outcome']}")
    if data["fail"]:
        code = NEGATIVE
    elif data["unknown"]:
        code = UNKNOWN
    else:
        code = OK
    return code, data, "\n".join(lines)


def cmd_tables(args):
    entries = verify_tables()
    bad = [e for e in entries if not e.ok]
    rows = [{"connective": e.connective, "args": list(e.args), "value": e.actual,
             "expected": e.expected, "ok": e.ok} for e in entries]
    text = "\n".join(f"{e.connective} {' '.join(map(str, e.args))} = {e.actual}"
                     + ("" if e.ok else f" (expected {e.expected})") for e in entries)
    return (NEGATIVE if bad else OK), {"entries": rows, "mismatches": len(bad)}, text


def cmd_ainc(args):
    kind = "prop" if args.logic == "TD" else "fol"
    alpha = _formula(args.alpha, kind)
    corpus = [_formula(args.beta, kind)] if args.beta else None
    rep = cq.ainc_demonstrate(args.logic, alpha, corpus, budget=_budget(args))
    data = rep.to_json()
    text = (f"related: {data['derived']}/{data['related_total']} derived; "
            f"fresh: {data['blocked']}/{data['fresh_total']} blocked")
    return (OK if rep.ok else NEGATIVE), data, text


def cmd_consistency(args):
    prem = _premises(args.premises)
    if prem is not cq.FULL_LANGUAGE:
        _same_language(args.logic, prem)
    r = cq.absolute_consistency_check(args.logic, prem)
    if isinstance(r, cq.Inconsistent):
        return NEGATIVE, r.to_json(), f"inconsistent: {r.reason}"
    return OK, {"verdict": "consistent", "certificate": r.to_json(), "verified": r.verify()}, \
        f"consistent; {r.blocked_formula} blocked by {r.valuation}"


def cmd_derive(args):
    prem = _premises(args.premises)
    if prem is cq.FULL_LANGUAGE:
        raise UsageError("derive needs an explicit premise list")
    target = parse_any(args.target)
    _same_language(args.logic, prem + [target])
    rules = cq.default_rules(args.logic)
    d = cq.derive_target(rules, args.logic, prem, target,
                         cq.Bounds(depth=args.depth), _budget(args))
    if d is not None:
        rep = cq.replay(d, args.logic, prem)
        text = "\n".join(f"{i}. {l.formula}  [{l.justification.tag}]" for i, l in enumerate(d.lines))
        return OK, {"verdict": "derived", "rules": rules.name, "derivation": d.to_json(),
                    "replay_ok": rep.ok}, text
    cert = cq.underivability_certificate(args.logic, prem, target, rules)
    if cert is not None:
        return NEGATIVE, {"verdict": "underivable", "certificate": cert.to_json()}, \
            f"underivable; certificate {cert.valuation}"
    return UNKNOWN, {"verdict": "unknown"}, "not derived within bounds, no certificate"


def build_parser() -> argparse.ArgumentParser:
    def common(parser, suppress):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--json", action="store_true", default=d(False),
                            help="machine-readable output")
        parser.add_argument("--max-domain", type=int, default=d(3))
        parser.add_argument("--max-steps", type=int, default=d(10_000))
        parser.add_argument("--pool-depth", type=int, default=d(2))

    p = _Parser(prog="atomic-entailment", description="Atomic entailment workbench")
    common(p, False)
    # the same flags after the subcommand, without clobbering earlier ones
    shared = _Parser(add_help=False)
    common(shared, True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *positional, **extra):
        sp = sub.add_parser(name, parents=[shared])
        for a in positional:
            sp.add_argument(a)
        for flag, kw in extra.items():
            sp.add_argument("--" + flag.replace("_", "-"), **kw)
        sp.set_defaults(fn=fn)
        return sp

    add("parse", cmd_parse, "formula")
    add("eval", cmd_eval, "formula", matrix={"default": "MD"}, assign={"default": ""})
    add("valid", cmd_valid, "formula", matrix={"default": "MD"})
    add("member", cmd_member, "formula", system={"choices": ["TD", "LD", "L2"], "required": True})
    add("entail", cmd_entail, "phi", "psi",
        mode={"choices": ["atomic-prop", "classical-prop", "atomic-fol", "classical-fol"],
              "required": True})
    add("falsify", cmd_falsify, "phi", "psi")
    add("gap-witness", cmd_gap, relation={"choices": ["A0", "A1", "C1"], "default": "A0"},
        max_pairs={"type": int, "default": None})
    add("translate-j", _transform(j_translate), "formula")
    add("prenex", _transform(prenex), "formula")
    add("star", _transform(_star), "formula")
    add("close", _close, "formula", existential={"action": "store_true"})
    add("suite", cmd_suite, range={"default": "all"})
    add("tables", cmd_tables)
    add("ainc", cmd_ainc, logic={"choices": ["TD", "LD"], "required": True},
        alpha={"required": True}, beta={"default": None})
    add("consistency", cmd_consistency, logic={"choices": ["TD", "LD"], "required": True},
        premises={"required": True})
    add("derive", cmd_derive, logic={"choices": ["TD", "LD"], "required": True},
        premises={"required": True}, target={"required": True},
        depth={"type": int, "default": 2})
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    json_mode = argv is not None and "--json" in argv
    t0 = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        json_mode = args.json
        code, report, text = args.fn(args)
    except (UsageError, ParseError, UnassignedVariable, UnsupportedConnective,
            BudgetZero, FileNotFoundError, ValueError) as e:
        msg = str(e).strip("'\"") if isinstance(e, UnassignedVariable) else str(e)
        if isinstance(e, UnassignedVariable):
            msg = f"no value assigned to {msg}"
        if json_mode:
            err = {"error": type(e).__name__, "message": msg, "exit": USAGE}
            if isinstance(e, ParseError):
                err["offset"] = e.offset
                err["expected"] = sorted(e.expected)
            print(json.dumps(err), file=out)
        else:
            print(f"error: {msg}", file=sys.stderr)
        return USAGE
    if json_mode:
        report = {"command": args.command, **report, "exit": code,
                  "timing_ms": round((time.perf_counter() - t0) * 1000, 3)}
        if hasattr(args, "max_domain"):
            report.setdefault("budget_flags", {"max_domain": args.max_domain,
                                               "max_steps": args.max_steps,
                                               "pool_depth": args.pool_depth,
                                               "time_ms": _budget(args).time_ms})
        print(json.dumps(report, default=str), file=out)
    else:
        print(text, file=out)
    return code


def main(argv: Optional[list] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
