"""Classical first-order validity with an honest three-valued answer.

Two sound procedures run under an explicit budget:

* finite countermodel search over domains of size 1..k, interpreting every
  predicate, function and constant symbol of the formula;
* resolution refutation of the negated universal closure (rectify, NNF,
  Skolemize with minimal scopes, clause form, given-clause binary
  resolution with factoring).

A refutation is returned as a replayable certificate and
:func:`check_refutation` re-verifies it step by step.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from .fol import free_vars, term_vars, universal_closure, used_indices
from .formula import (
    Bin,
    FuncApp,
    IndConst,
    IndVar,
    Neg,
    Op,
    Pred,
    QKind,
    Quant,
)
from .matrix import Status


class BudgetZero(ValueError):
    """The budget leaves no room for either procedure."""


@dataclass(frozen=True)
class Budget:
    max_domain: int = 3
    max_steps: int = 10_000
    # cap on interpretations examined per classical_validity call
    max_structures: int = 200_000
    # wall-clock cap in milliseconds, 0 = unlimited
    time_ms: int = 0


DEFAULT_BUDGET = Budget()


# -- finite structures ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Structure:
    """Finite interpretation; elements are 0..size-1 internally."""

    size: int
    predicates: dict
    functions: dict
    constants: dict

    def to_json(self) -> dict:
        return {
            "domain": self.size,
            "predicates": {
                f"P{i}/{a}": [[e + 1 for e in tup] for tup in sorted(ext)]
                for (i, a), ext in sorted(self.predicates.items())
            },
            "functions": {
                f"f{i}/{a}": [[*(e + 1 for e in args), val + 1]
                              for args, val in sorted(tab.items())]
                for (i, a), tab in sorted(self.functions.items())
            },
            "constants": {f"a{i}": v + 1 for i, v in sorted(self.constants.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Structure":
        def key(s):
            name, arity = s.split("/")
            return int(name[1:]), int(arity)

        preds = {key(k): frozenset(tuple(e - 1 for e in t) for t in v)
                 for k, v in data.get("predicates", {}).items()}
        funcs = {key(k): {tuple(e - 1 for e in row[:-1]): row[-1] - 1 for row in v}
                 for k, v in data.get("functions", {}).items()}
        consts = {int(k[1:]): v - 1 for k, v in data.get("constants", {}).items()}
        return cls(data["domain"], preds, funcs, consts)


def eval_term(s: Structure, t, env: dict) -> int:
    if isinstance(t, IndVar):
        # unassigned free variables default to the first element
        return env.get(t.index, 0)
    if isinstance(t, IndConst):
        return s.constants.get(t.index, 0)
    args = tuple(eval_term(s, a, env) for a in t.args)
    return s.functions.get((t.index, len(t.args)), {}).get(args, 0)


def satisfies(s: Structure, f, env: Optional[dict] = None) -> bool:
    """Classical truth of ``f`` in ``s`` under the variable assignment."""
    env = env or {}
    if isinstance(f, Pred):
        args = tuple(eval_term(s, a, env) for a in f.args)
        return args in s.predicates.get(f.letter, frozenset())
    if isinstance(f, Neg):
        return not satisfies(s, f.sub, env)
    if isinstance(f, Bin):
        a = satisfies(s, f.left, env)
        if f.op is Op.AND:
            return a and satisfies(s, f.right, env)
        if f.op is Op.OR:
            return a or satisfies(s, f.right, env)
        if f.op is Op.IMPL:
            return (not a) or satisfies(s, f.right, env)
        return a == satisfies(s, f.right, env)
    if isinstance(f, Quant):
        test = all if f.kind is QKind.FORALL else any
        return test(satisfies(s, f.body, {**env, f.var: e}) for e in range(s.size))
    raise TypeError(f"not a first-order formula: {f!r}")


def signature(f):
    """Predicate letters, function letters and constants of ``f``, sorted."""
    preds, funcs, consts = set(), set(), set()

    def term(t):
        if isinstance(t, IndConst):
            consts.add(t.index)
        elif isinstance(t, FuncApp):
            funcs.add((t.index, len(t.args)))
            for a in t.args:
                term(a)

    def walk(g):
        if isinstance(g, Pred):
            preds.add(g.letter)
            for a in g.args:
                term(a)
        elif isinstance(g, Neg):
            walk(g.sub)
        elif isinstance(g, Bin):
            walk(g.left)
            walk(g.right)
        else:
            walk(g.body)

    walk(f)
    return sorted(preds), sorted(funcs), sorted(consts)


def _extensions(n: int, arity: int):
    # subsets of the n**arity tuples, smallest first, then lexicographic
    tuples = list(itertools.product(range(n), repeat=arity))
    for k in range(len(tuples) + 1):
        for combo in itertools.combinations(tuples, k):
            yield frozenset(combo)


def _function_tables(n: int, arity: int):
    args = list(itertools.product(range(n), repeat=arity))
    for outs in itertools.product(range(n), repeat=len(args)):
        yield dict(zip(args, outs))


def structures(f, n: int):
    """Every interpretation of the symbols of ``f`` over an n-element domain."""
    preds, funcs, consts = signature(f)
    pools = [range(n) for _ in consts]
    pools += [list(_function_tables(n, a)) for _, a in funcs]
    pools += [list(_extensions(n, a)) for _, a in preds]
    for combo in itertools.product(*pools):
        c = dict(zip(consts, combo[:len(consts)]))
        fn = dict(zip(funcs, combo[len(consts):len(consts) + len(funcs)]))
        pr = dict(zip(preds, combo[len(consts) + len(funcs):]))
        yield Structure(n, pr, fn, c)


def count_structures(f, n: int) -> int:
    preds, funcs, consts = signature(f)
    total = n ** len(consts)
    for _, a in funcs:
        total *= n ** (n ** a)
    for _, a in preds:
        total *= 2 ** (n ** a)
    return total


# -- clause form -----------------------------------------------------------------

def rectify(f):
    """Give every quantifier its own variable, above all indices in ``f``."""
    counter = [max(used_indices(f), default=0)]

    def go(g, ren):
        if isinstance(g, Pred):
            return Pred(g.index, tuple(_rename_term(a, ren) for a in g.args))
        if isinstance(g, Neg):
            return Neg(go(g.sub, ren))
        if isinstance(g, Bin):
            return Bin(g.op, go(g.left, ren), go(g.right, ren))
        counter[0] += 1
        w = counter[0]
        return Quant(g.kind, w, go(g.body, {**ren, g.var: w}))

    return go(f, {})


def _rename_term(t, ren):
    if isinstance(t, IndVar):
        return IndVar(ren.get(t.index, t.index))
    if isinstance(t, IndConst):
        return t
    return FuncApp(t.index, tuple(_rename_term(a, ren) for a in t.args))


_DUAL = {QKind.FORALL: QKind.EXISTS, QKind.EXISTS: QKind.FORALL}


def nnf(f, positive: bool = True):
    """Negation normal form over ``&``, ``|``, literals and quantifiers."""
    if isinstance(f, Pred):
        return f if positive else Neg(f)
    if isinstance(f, Neg):
        return nnf(f.sub, not positive)
    if isinstance(f, Quant):
        kind = f.kind if positive else _DUAL[f.kind]
        return Quant(kind, f.var, nnf(f.body, positive))
    a, b = f.left, f.right
    if f.op is Op.AND:
        op = Op.AND if positive else Op.OR
        return Bin(op, nnf(a, positive), nnf(b, positive))
    if f.op is Op.OR:
        op = Op.OR if positive else Op.AND
        return Bin(op, nnf(a, positive), nnf(b, positive))
    if f.op is Op.IMPL:
        if positive:
            return Bin(Op.OR, nnf(a, False), nnf(b, True))
        return Bin(Op.AND, nnf(a, True), nnf(b, False))
    # equivalence
    if positive:
        return Bin(Op.AND, Bin(Op.OR, nnf(a, False), nnf(b, True)),
                   Bin(Op.OR, nnf(a, True), nnf(b, False)))
    return Bin(Op.AND, Bin(Op.OR, nnf(a, True), nnf(b, True)),
               Bin(Op.OR, nnf(a, False), nnf(b, False)))


# A literal is (positive, Pred); a clause is a sorted tuple of literals.

def _lit_key(lit):
    return (str(lit[1]), not lit[0])


def _subst_term(t, sigma):
    if isinstance(t, IndVar):
        return sigma.get(t.index, t)
    if isinstance(t, IndConst):
        return t
    return FuncApp(t.index, tuple(_subst_term(a, sigma) for a in t.args))


def _subst_lit(lit, sigma):
    pos, atom = lit
    return (pos, Pred(atom.index, tuple(_subst_term(a, sigma) for a in atom.args)))


def _lit_vars(lit) -> set[int]:
    out: set[int] = set()
    for a in lit[1].args:
        out |= term_vars(a)
    return out


def clause_vars(clause) -> set[int]:
    out: set[int] = set()
    for lit in clause:
        out |= _lit_vars(lit)
    return out


def normalize_clause(lits) -> tuple:
    """Deduplicate, sort, and number variables 1.. by first occurrence."""
    lits = sorted(set(lits), key=_lit_key)
    ren: dict[int, IndVar] = {}
    for lit in lits:
        for a in lit[1].args:
            for v in _ordered_vars(a):
                if v not in ren:
                    ren[v] = IndVar(len(ren) + 1)
    out = sorted({_subst_lit(l, ren) for l in lits}, key=_lit_key)
    return tuple(out)


def _ordered_vars(t):
    if isinstance(t, IndVar):
        yield t.index
    elif isinstance(t, FuncApp):
        for a in t.args:
            yield from _ordered_vars(a)


def is_tautology(clause) -> bool:
    atoms_pos = {l[1] for l in clause if l[0]}
    return any(not l[0] and l[1] in atoms_pos for l in clause)


def skolemize(f):
    """Skolem form of a closed NNF formula, quantifier-free.

    Skolemization follows the NNF tree rather than a flat prenex prefix:
    an existential variable becomes a fresh function of only those
    universals that are free in its own subformula.  This is the prenex
    route with every existential pulled as far out as the movement laws
    allow, and it keeps Skolem terms small.
    """
    g = rectify(f)
    _, funcs, consts = signature(f)
    counter = {"f": max((idx for idx, _ in funcs), default=0),
               "c": max(consts, default=0)}

    def go(h, sigma):
        if isinstance(h, Pred):
            return Pred(h.index, tuple(_subst_term(a, sigma) for a in h.args))
        if isinstance(h, Neg):
            return Neg(go(h.sub, sigma))
        if isinstance(h, Bin):
            return Bin(h.op, go(h.left, sigma), go(h.right, sigma))
        if h.kind is QKind.FORALL:
            return go(h.body, sigma)
        deps: set[int] = set()
        for v in free_vars(h):
            deps |= term_vars(sigma.get(v, IndVar(v)))
        if deps:
            counter["f"] += 1
            term = FuncApp(counter["f"], tuple(IndVar(u) for u in sorted(deps)))
        else:
            counter["c"] += 1
            term = IndConst(counter["c"])
        return go(h.body, {**sigma, h.var: term})

    return go(g, {})


def _cnf(g) -> list[frozenset]:
    if isinstance(g, Pred):
        return [frozenset({(True, g)})]
    if isinstance(g, Neg):
        return [frozenset({(False, g.sub)})]
    if g.op is Op.AND:
        return _cnf(g.left) + _cnf(g.right)
    left, right = _cnf(g.left), _cnf(g.right)
    return [a | b for a in left for b in right]


def clausify(f) -> list[tuple]:
    """Clauses of the Skolemized negation of the universal closure of ``f``."""
    closed = universal_closure(f)
    matrix = skolemize(nnf(Neg(closed)))
    seen = set()
    out = []
    for c in _cnf(matrix):
        nc = normalize_clause(c)
        if is_tautology(nc) or nc in seen:
            continue
        seen.add(nc)
        out.append(nc)
    return out


# -- unification -------------------------------------------------------------------

def _walk(t, sigma):
    while isinstance(t, IndVar) and t.index in sigma:
        t = sigma[t.index]
    return t


def _occurs(v: int, t, sigma) -> bool:
    t = _walk(t, sigma)
    if isinstance(t, IndVar):
        return t.index == v
    if isinstance(t, FuncApp):
        return any(_occurs(v, a, sigma) for a in t.args)
    return False


def _unify_terms(s, t, sigma) -> Optional[dict]:
    s, t = _walk(s, sigma), _walk(t, sigma)
    if s == t:
        return sigma
    if isinstance(s, IndVar):
        if _occurs(s.index, t, sigma):
            return None
        return {**sigma, s.index: t}
    if isinstance(t, IndVar):
        return _unify_terms(t, s, sigma)
    if isinstance(s, FuncApp) and isinstance(t, FuncApp):
        if s.index != t.index or len(s.args) != len(t.args):
            return None
        for a, b in zip(s.args, t.args):
            sigma = _unify_terms(a, b, sigma)
            if sigma is None:
                return None
        return sigma
    return None


def _resolve_fully(t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, FuncApp):
        return FuncApp(t.index, tuple(_resolve_fully(a, sigma) for a in t.args))
    return t


def unify_atoms(a: Pred, b: Pred) -> Optional[dict]:
    """Most general unifier as an idempotent map, or None."""
    if a.letter != b.letter:
        return None
    sigma: Optional[dict] = {}
    for x, y in zip(a.args, b.args):
        sigma = _unify_terms(x, y, sigma)
        if sigma is None:
            return None
    return {v: _resolve_fully(IndVar(v), sigma) for v in sigma}


def rename_apart(clause, offset: int) -> tuple:
    ren = {v: IndVar(v + offset) for v in clause_vars(clause)}
    return tuple(_subst_lit(l, ren) for l in clause)


def _match_term(p, t, sigma) -> Optional[dict]:
    """One-way matching: extend ``sigma`` so that p.sigma == t."""
    if isinstance(p, IndVar):
        bound = sigma.get(p.index)
        if bound is None:
            return {**sigma, p.index: t}
        return sigma if bound == t else None
    if isinstance(p, IndConst):
        return sigma if p == t else None
    if not isinstance(t, FuncApp) or t.index != p.index or len(t.args) != len(p.args):
        return None
    for a, b in zip(p.args, t.args):
        sigma = _match_term(a, b, sigma)
        if sigma is None:
            return None
    return sigma


def subsumes(c, d) -> bool:
    """True when some substitution maps every literal of ``c`` into ``d``."""
    if len(c) > len(d):
        return False
    # matching never instantiates d, so the clauses may share variable names

    def go(i, sigma):
        if i == len(c):
            return True
        pos, atom = c[i]
        for dpos, datom in d:
            if dpos != pos or datom.letter != atom.letter:
                continue
            s2: Optional[dict] = sigma
            for a, b in zip(atom.args, datom.args):
                s2 = _match_term(a, b, s2)
                if s2 is None:
                    break
            if s2 is not None and go(i + 1, s2):
                return True
        return False

    return go(0, {})


def _resolvent(c1, i, c2, j):
    """Binary resolvent on c1[i] and c2[j]; c2 is renamed apart first."""
    offset = max(clause_vars(c1), default=0)
    c2r = rename_apart(c2, offset)
    l1, l2 = c1[i], c2r[j]
    if l1[0] == l2[0]:
        return None
    sigma = unify_atoms(l1[1], l2[1])
    if sigma is None:
        return None
    rest = [_subst_lit(l, sigma) for k, l in enumerate(c1) if k != i]
    rest += [_subst_lit(l, sigma) for k, l in enumerate(c2r) if k != j]
    return normalize_clause(rest), sigma


def _factor(c, i, j):
    if c[i][0] != c[j][0]:
        return None
    sigma = unify_atoms(c[i][1], c[j][1])
    if sigma is None:
        return None
    return normalize_clause(_subst_lit(l, sigma) for l in c), sigma


@dataclass
class ProofStep:
    id: int
    clause: tuple
    rule: str  # "input" | "resolve" | "factor"
    parents: tuple = ()
    literals: tuple = ()
    sigma: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "clause": [("" if pos else "~") + str(atom) for pos, atom in self.clause],
            "rule": self.rule,
            "parents": list(self.parents),
            "literals": list(self.literals),
            "sigma": {f"x{k}": str(v) for k, v in sorted(self.sigma.items())},
        }


@dataclass
class Refutation:
    formula: object
    steps: list

    def to_json(self) -> dict:
        return {"formula": str(self.formula), "steps": [s.to_json() for s in self.steps]}


def _weight(clause) -> int:
    return sum(len(str(l[1])) for l in clause) + len(clause)


def refute(f, max_steps: int, deadline: Optional[float] = None):
    """Given-clause resolution on the clauses of ``f``'s negated closure.

    Returns ``("refuted", Refutation)``, ``("saturated", n_steps)`` or
    ``("budget", n_steps)``.
    """
    clauses = clausify(f)
    steps: list[ProofStep] = []
    index: dict[tuple, int] = {}
    sos: list[int] = []

    # clauses kept for forward subsumption
    kept: list[tuple] = []

    def add(clause, rule, parents=(), literals=(), sigma=None):
        sid = len(steps)
        steps.append(ProofStep(sid, clause, rule, parents, literals, sigma or {}))
        index[clause] = sid
        sos.append(sid)
        kept.append((clause, {(l[0], l[1].letter) for l in clause}))
        return sid

    for c in clauses:
        add(c, "input")
    for sid in list(sos):
        if not steps[sid].clause:
            return "refuted", _extract(f, steps, sid)

    usable: list[int] = []
    generated = 0
    while sos:
        if deadline is not None and time.monotonic() > deadline:
            return "budget", generated
        sos.sort(key=lambda s: (_weight(steps[s].clause), s))
        given = sos.pop(0)
        gc = steps[given].clause
        usable.append(given)
        new = []
        for i, j in itertools.combinations(range(len(gc)), 2):
            r = _factor(gc, i, j)
            if r is not None:
                new.append((r[0], "factor", (given,), (i, j), r[1]))
        for other in usable:
            oc = steps[other].clause
            for i in range(len(gc)):
                for j in range(len(oc)):
                    r = _resolvent(gc, i, oc, j)
                    if r is not None:
                        new.append((r[0], "resolve", (given, other), (i, j), r[1]))
        for clause, rule, parents, lits, sigma in new:
            generated += 1
            if clause in index or is_tautology(clause):
                continue
            keys = {(l[0], l[1].letter) for l in clause}
            if any(kk <= keys and subsumes(kc, clause) for kc, kk in kept):
                continue
            sid = add(clause, rule, parents, lits, sigma)
            if not clause:
                return "refuted", _extract(f, steps, sid)
            if generated >= max_steps:
                return "budget", generated
        if generated >= max_steps:
            return "budget", generated
    return "saturated", generated


def _extract(f, steps, last) -> Refutation:
    need = set()
    stack = [last]
    while stack:
        s = stack.pop()
        if s in need:
            continue
        need.add(s)
        stack.extend(steps[s].parents)
    order = sorted(need)
    renum = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        st = steps[old]
        out.append(ProofStep(renum[old], st.clause, st.rule,
                             tuple(renum[p] for p in st.parents), st.literals, st.sigma))
    return Refutation(f, out)


def check_refutation(ref: Refutation) -> bool:
    """Replay a refutation: inputs must come from clause form, every
    inference must recompute exactly, and the last clause must be empty."""
    inputs = set(clausify(ref.formula))
    seen: dict[int, tuple] = {}
    for st in ref.steps:
        if st.rule == "input":
            if st.clause not in inputs:
                return False
        elif st.rule == "resolve":
            p1, p2 = st.parents
            if p1 not in seen or p2 not in seen:
                return False
            c1, c2 = seen[p1], seen[p2]
            i, j = st.literals
            c2r = rename_apart(c2, max(clause_vars(c1), default=0))
            l1 = _subst_lit(c1[i], st.sigma)
            l2 = _subst_lit(c2r[j], st.sigma)
            if l1[0] == l2[0] or l1[1] != l2[1]:
                return False
            rest = [_subst_lit(l, st.sigma) for k, l in enumerate(c1) if k != i]
            rest += [_subst_lit(l, st.sigma) for k, l in enumerate(c2r) if k != j]
            if normalize_clause(rest) != st.clause:
                return False
        elif st.rule == "factor":
            (p,) = st.parents
            if p not in seen:
                return False
            c = seen[p]
            i, j = st.literals
            if _subst_lit(c[i], st.sigma) != _subst_lit(c[j], st.sigma):
                return False
            if normalize_clause(_subst_lit(l, st.sigma) for l in c) != st.clause:
                return False
        else:
            return False
        seen[st.id] = st.clause
    return bool(ref.steps) and ref.steps[-1].clause == ()


# -- the combined decision ---------------------------------------------------------

@dataclass
class ClassicalVerdict:
    status: Status
    proof: Optional[Refutation] = None
    countermodel: Optional[Structure] = None
    report: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def invalid(self) -> bool:
        return self.status is Status.FAILS

    def to_json(self) -> dict:
        out = {"outcome": {Status.HOLDS: "valid", Status.FAILS: "invalid",
                           Status.UNKNOWN: "unknown"}[self.status],
               "budget": self.report}
        if self.proof is not None:
            out["proof"] = self.proof.to_json()
        if self.countermodel is not None:
            out["countermodel"] = self.countermodel.to_json()
        return out


def find_countermodel(f, n: int, limit: int, deadline=None):
    """First structure of size ``n`` falsifying the universal closure.

    Returns (structure or None, examined count, exhausted flag).
    """
    closed = universal_closure(f)
    examined = 0
    for s in structures(closed, n):
        if examined >= limit or (deadline is not None and time.monotonic() > deadline):
            return None, examined, False
        examined += 1
        if not satisfies(s, closed):
            return s, examined, True
    return None, examined, True


def classical_validity(f, budget: Budget = DEFAULT_BUDGET) -> ClassicalVerdict:
    """Valid / Invalid / Unknown for membership of ``f`` in classical logic.

    Order: countermodels of size 1, resolution refutation, then
    countermodels of sizes 2..max_domain.
    """
    if budget.max_domain < 1 and budget.max_steps < 1:
        raise BudgetZero("budget allows neither model search nor refutation")
    deadline = time.monotonic() + budget.time_ms / 1000 if budget.time_ms else None
    report = {"max_domain": budget.max_domain, "max_steps": budget.max_steps,
              "structures": 0, "steps": 0, "sizes_exhausted": []}
    remaining = [budget.max_structures]

    def search(n):
        s, examined, exhausted = find_countermodel(f, n, remaining[0], deadline)
        remaining[0] -= examined
        report["structures"] += examined
        if exhausted and s is None:
            report["sizes_exhausted"].append(n)
        return s

    if budget.max_domain >= 1:
        s = search(1)
        if s is not None:
            return ClassicalVerdict(Status.FAILS, countermodel=s, report=report)
    outcome = None
    if budget.max_steps >= 1:
        outcome, info = refute(f, budget.max_steps, deadline)
        if outcome == "refuted":
            report["steps"] = len(info.steps)
            return ClassicalVerdict(Status.HOLDS, proof=info, report=report)
        report["steps"] = info
        report["refutation"] = outcome
    for n in range(2, budget.max_domain + 1):
        s = search(n)
        if s is not None:
            return ClassicalVerdict(Status.FAILS, countermodel=s, report=report)
    return ClassicalVerdict(Status.UNKNOWN, report=report)


def check_countermodel(f, s: Structure) -> bool:
    return not satisfies(s, universal_closure(f))


def is_closed(f) -> bool:
    return not free_vars(f)
