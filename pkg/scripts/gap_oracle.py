"""Standalone oracle for the Lambda_0 / Lambda_1 gap search.

Shares no code with the package: formulas are nested tuples and the
three-valued tables are written out again here.  The search order mirrors
the documented one (pairs in enumeration order, then the substitution
pool), so the first witness found is comparable with the library's.

    python3 scripts/gap_oracle.py --out tests/fixtures/gap_oracle.json
"""
from __future__ import annotations

import argparse
import itertools
import json
import re

IMPL = {(a, b): v for a, row in enumerate([(1, 1, 1), (0, 1, 0), (0, 1, 2)]) for b, v in enumerate(row)}
EQUIV = {(a, b): v for a, row in enumerate([(1, 0, 0), (0, 1, 0), (0, 0, 2)]) for b, v in enumerate(row)}
OR = {(a, b): v for a, row in enumerate([(0, 1, 0), (1, 1, 1), (0, 1, 2)]) for b, v in enumerate(row)}
AND = {(a, b): v for a, row in enumerate([(0, 0, 0), (0, 1, 1), (0, 1, 2)]) for b, v in enumerate(row)}
NEG = {0: 1, 1: 0, 2: 2}
MD = ({"->": IMPL, "<->": EQUIV, "|": OR, "&": AND}, NEG, (0, 1, 2), {1, 2})
M2 = ({"->": {(a, b): int(not a or b) for a in (0, 1) for b in (0, 1)},
       "<->": {(a, b): int(a == b) for a in (0, 1) for b in (0, 1)},
       "|": {(a, b): int(a or b) for a in (0, 1) for b in (0, 1)},
       "&": {(a, b): int(a and b) for a in (0, 1) for b in (0, 1)}},
      {0: 1, 1: 0}, (0, 1), {1})
OPS = ("->", "|", "&", "<->")


def V(n):
    return ("v", n)


def N(f):
    return ("~", f)


def B(op, a, b):
    return (op, a, b)


def variables(f):
    if f[0] == "v":
        return {f[1]}
    if f[0] == "~":
        return variables(f[1])
    return variables(f[1]) | variables(f[2])


def vkey(name):
    m = re.fullmatch(r"([pqst])([0-9]*)", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1, name)


def value(m, f, val):
    bins, neg, _, _ = m
    if f[0] == "v":
        return val[f[1]]
    if f[0] == "~":
        return neg[value(m, f[1], val)]
    return bins[f[0]][(value(m, f[1], val), value(m, f[2], val))]


def valid(m, f):
    names = sorted(variables(f), key=vkey)
    for combo in itertools.product(m[2], repeat=len(names)):
        if value(m, f, dict(zip(names, combo))) not in m[3]:
            return False
    return True


def height(f):
    if f[0] == "v":
        return 1
    if f[0] == "~":
        return 1 + height(f[1])
    return 1 + max(height(f[1]), height(f[2]))


def enumerate_formulas(atoms, max_height):
    every = list(atoms)
    top = list(atoms)
    for h in range(2, max_height + 1):
        new = [N(g) for g in top]
        for op in OPS:
            for a in every:
                for b in every:
                    if height(a) == h - 1 or height(b) == h - 1:
                        new.append(B(op, a, b))
        every += new
        top = new
    return every


def show(f):
    if f[0] == "v":
        return f[1]
    if f[0] == "~":
        return "~" + show(f[1])
    return "(" + show(f[1]) + " " + f[0] + " " + show(f[2]) + ")"


def subst(e, f):
    if f[0] == "v":
        return e.get(f[1], f)
    if f[0] == "~":
        return N(subst(e, f[1]))
    return B(f[0], subst(e, f[1]), subst(e, f[2]))


def fresh(used, n):
    out = []
    for i in itertools.count():
        for letter in "pqst":
            name = letter if i == 0 else f"{letter}{i}"
            if name not in used and name not in out:
                out.append(name)
                if len(out) == n:
                    return out


def pool(phi, psi, depth):
    names = sorted(variables(phi) | variables(psi), key=vkey)
    seen = set()

    def emit(e):
        key = tuple(sorted((k, v) for k, v in e.items() if v != V(k)))
        if key in seen:
            return None
        seen.add(key)
        return dict(key)

    out = []
    for e in [{}] + [dict(zip(names, (V(c) for c in combo)))
                     for combo in itertools.product(names, repeat=len(names))]:
        r = emit(e)
        if r is not None:
            out.append(r)
    fr = fresh(set(names), len(names))
    options = [[V(n)] + enumerate_formulas([V(x)], depth) for n, x in zip(names, fr)]
    for combo in itertools.product(*options):
        r = emit(dict(zip(names, combo)))
        if r is not None:
            out.append(r)
    for combo in itertools.product((0, 1), repeat=len(names)):
        val = dict(zip(names, combo))
        if value(M2, phi, val) != 1:
            continue
        e = {n: (B("&", phi, V(n)) if val[n] == 0 else B("->", phi, V(n))) for n in names}
        r = emit(e)
        if r is not None:
            out.append(r)
    return out


def violations(m, use_p0, phi, psi, e):
    """(cond1, lambda0 printed, lambda0 swapped, lambda1) violation flags."""
    hphi, hpsi = subst(e, phi), subst(e, psi)
    sphi, spsi = N(hphi), N(hpsi)
    P = variables

    def sub(a, b):
        return (not use_p0) or P(a) <= P(b)

    c1 = valid(m, hphi) and not (valid(m, hpsi) and sub(hphi, hpsi))
    lam_pre = valid(m, spsi)
    l0p = lam_pre and not (valid(m, sphi) and sub(spsi, sphi))
    l0s = lam_pre and not (valid(m, sphi) and sub(sphi, spsi))
    lam1_pre = valid(m, B("->", B("->", spsi, sphi), sphi))
    l1 = lam1_pre and not (valid(m, sphi) and sub(spsi, sphi))
    return c1, l0p, l0s, l1


def search(relation, depth=2, pair_height=2):
    m, use_p0, atoms = {
        "A0": (MD, True, ["p", "q"]),
        "A1": (MD, True, ["p1", "p2"]),
        "C1": (M2, False, ["p1", "p2"]),
    }[relation]
    forms = enumerate_formulas([V(a) for a in atoms], pair_height)
    readings = ("printed", "swapped") if use_p0 else ("n/a",)
    for phi in forms:
        for psi in forms:
            rel = valid(m, B("->", phi, psi))
            es = pool(phi, psi, depth)
            flags = [violations(m, use_p0, phi, psi, e) for e in es]
            for r in readings:
                idx = 1 if r in ("printed", "n/a") else 2
                if rel:
                    for e, fl in zip(es, flags):
                        if fl[idx]:
                            return witness(relation, "lambda0-rejects-entailment", r, phi, psi, e)
                elif not any(fl[0] or fl[idx] for fl in flags):
                    for e, fl in zip(es, flags):
                        if fl[3]:
                            return witness(relation, "lambda0-admits-non-entailment", r, phi, psi, e)
    return {"relation": relation, "witness": None}


def witness(relation, kind, reading, phi, psi, e):
    return {"relation": relation, "witness": {
        "kind": kind, "reading": reading, "phi": show(phi), "psi": show(psi),
        "substitution": {k: show(v) for k, v in sorted(e.items(), key=lambda kv: vkey(kv[0]))}}}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None)
    ap.add_argument("--relations", default="A0,A1,C1")
    args = ap.parse_args(argv)
    results = {r: search(r) for r in args.relations.split(",")}
    text = json.dumps(results, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    main()
