"""Propositional entailment: atomic (through T_D), classical (through M_2),
a bounded falsifier search for the two substitution conditions, and the
Lambda_0 / Lambda_1 gap search."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .formula import And, Impl, Neg, Var, var_key
from .generators import enumerate_formulas, prop_atoms
from .matrix import M_2, M_D, LogicalMatrix, evaluate, is_valid, valuations
from .prop import PropSubstitution, apply_prop_subst, prop_vars, star_prop

RELATIONS = ("A0", "A1", "C1")


@functools.lru_cache(maxsize=200_000)
def in_TD(f) -> bool:
    return is_valid(M_D, f).holds


@functools.lru_cache(maxsize=200_000)
def in_L2(f) -> bool:
    return is_valid(M_2, f).holds


@dataclass
class Def51Witness:
    condition: int  # 1 or 2
    substitution: PropSubstitution
    antecedent: object  # h(phi) or h((psi* -> phi*) -> phi*)
    consequent: object  # h(psi) or h(phi*)
    reason: str  # "membership" or "inclusion"
    countermodel: Optional[dict] = None

    def to_json(self) -> dict:
        return {"condition": self.condition, "substitution": self.substitution.to_json(),
                "antecedent": str(self.antecedent), "consequent": str(self.consequent),
                "reason": self.reason, "countermodel": self.countermodel}


@dataclass
class EntailmentVerdict:
    relation: str  # "AtomicProp" or "ClassicalProp"
    phi: object
    psi: object
    holds: bool
    countermodel: Optional[dict] = None
    witness: Optional[Def51Witness] = None
    conditions: dict = field(default_factory=dict)

    @property
    def evidence(self):
        if self.holds:
            return "valid"
        return self.witness or self.countermodel

    def to_json(self) -> dict:
        out = {"relation": self.relation, "phi": str(self.phi), "psi": str(self.psi),
               "verdict": "holds" if self.holds else "fails"}
        if self.countermodel is not None:
            out["countermodel"] = self.countermodel
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.conditions:
            out["conditions"] = self.conditions
        return out


def atomic_entails_prop(phi, psi) -> EntailmentVerdict:
    """phi atomically entails psi iff phi -> psi is designated everywhere
    in M_D; a failure carries the first 3-valued countermodel."""
    v = is_valid(M_D, Impl(phi, psi))
    return EntailmentVerdict("AtomicProp", phi, psi, v.holds, v.countermodel)


def classical_entails_prop(phi, psi) -> EntailmentVerdict:
    v = is_valid(M_2, Impl(phi, psi))
    return EntailmentVerdict("ClassicalProp", phi, psi, v.holds, v.countermodel)


# -- substitution pool -------------------------------------------------------------

@dataclass(frozen=True)
class PoolConfig:
    # height of the per-variable templates, atoms counting 1
    depth: int = 2
    collapses: bool = True
    e_phi: bool = True
    # model-constant bindings (stage 5 of the pool), off by default
    model_constants: bool = False
    # cap on pool size for a single query
    max_substitutions: int = 100_000


DEFAULT_POOL = PoolConfig()


def fresh_names(used, n: int) -> list[str]:
    """The first ``n`` variable names not in ``used``: s, t, p1, q1, ..."""
    out: list[str] = []
    for i in itertools.count():
        for letter in "pqst":
            name = letter if i == 0 else f"{letter}{i}"
            if name not in used and name not in out:
                out.append(name)
                if len(out) == n:
                    return out
    return out  # pragma: no cover


def substitution_pool(phi, psi, config: PoolConfig = DEFAULT_POOL) -> Iterator[PropSubstitution]:
    """Candidate substitutions in a fixed order, without repeats.

    1. identity;
    2. collapses: every map of the variables into themselves;
    3. templates: each variable keeps itself or takes a template of height
       at most ``config.depth`` in its own fresh variable;
    4. for each classical model v of phi over the variables,
       x -> phi & x when v(x) = 0 and x -> phi -> x when v(x) = 1;
    5. (``config.model_constants``) for each classical model v of phi,
       every x takes a formula in one shared fresh variable whose value
       is v(x) whenever that variable is 0 or 1.  Each such image of phi lies in T_D.
    """
    names = sorted(prop_vars(phi) | prop_vars(psi), key=var_key)
    seen: set = set()
    count = 0

    def emit(bindings):
        nonlocal count
        e = PropSubstitution(bindings)
        key = frozenset(e.normalized().items())
        if key in seen or count >= config.max_substitutions:
            return None
        seen.add(key)
        count += 1
        # bindings are listed for every variable, identities included
        return PropSubstitution({n: e(n) for n in names})

    e = emit({})
    if e is not None:
        yield e
    if config.collapses:
        for combo in itertools.product(names, repeat=len(names)):
            e = emit({n: Var(c) for n, c in zip(names, combo)})
            if e is not None:
                yield e
    fresh = fresh_names(set(names), len(names))
    options = [[Var(n)] + enumerate_formulas([Var(x)], config.depth)
               for n, x in zip(names, fresh)]
    for combo in itertools.product(*options):
        e = emit(dict(zip(names, combo)))
        if e is not None:
            yield e
    if config.e_phi:
        for v in valuations(M_2, names):
            if evaluate(M_2, v, phi) != 1:
                continue
            e = emit({n: (And(phi, Var(n)) if v[n] == 0 else Impl(phi, Var(n)))
                      for n in names})
            if e is not None:
                yield e
    if config.model_constants and names:
        ones, zeros = _constant_templates(fresh_names(set(names), 1)[0])
        for v in valuations(M_2, names):
            if evaluate(M_2, v, phi) != 1:
                continue
            for combo in itertools.product(*[ones if v[n] else zeros for n in names]):
                if count >= config.max_substitutions:
                    return
                e = emit(dict(zip(names, combo)))
                if e is not None:
                    yield e


@functools.lru_cache(maxsize=None)
def _constant_templates(s: str) -> tuple[tuple, tuple]:
    """Formulas in the single variable s that take value 1 (resp. 0) whenever
    s is 0 or 1.  They are 2 when s is 2, like every formula in one variable.

    Height 3 formulas with that property, closed under one negation.
    """
    ones, zeros = [], []
    for f in enumerate_formulas([Var(s)], 3):
        vals = {evaluate(M_D, {s: b}, f) for b in (0, 1)}
        if vals == {1}:
            ones.append(f)
        elif vals == {0}:
            zeros.append(f)
    return tuple(ones + [Neg(f) for f in zeros]), tuple(zeros + [Neg(f) for f in ones])


# -- condition checks -------------------------------------------------------------

def _cond1(phi, psi, e, member, use_p0=True) -> Optional[Def51Witness]:
    a, b = apply_prop_subst(e, phi), apply_prop_subst(e, psi)
    if not member(a):
        return None
    if not member(b):
        return Def51Witness(1, e, a, b, "membership", _counter(member, b))
    if use_p0 and not prop_vars(a) <= prop_vars(b):
        return Def51Witness(1, e, a, b, "inclusion")
    return None


def _cond2(phi, psi, e, member, use_p0=True) -> Optional[Def51Witness]:
    # propositional stars are plain negations
    sphi = star_prop(apply_prop_subst(e, phi))
    spsi = star_prop(apply_prop_subst(e, psi))
    pre = Impl(Impl(spsi, sphi), sphi)
    if not member(pre):
        return None
    if not member(sphi):
        return Def51Witness(2, e, pre, sphi, "membership", _counter(member, sphi))
    if use_p0 and not prop_vars(spsi) <= prop_vars(sphi):
        return Def51Witness(2, e, pre, sphi, "inclusion")
    return None


def _counter(member, f):
    m = M_D if member is in_TD else M_2
    return is_valid(m, f).countermodel


def falsify_def51(phi, psi, config: PoolConfig = DEFAULT_POOL) -> Optional[Def51Witness]:
    """First pool substitution violating condition (1) or (2) with L = T_D.

    Every witness is re-checked by direct evaluation before it is returned.
    Finding none is not a proof that the conditions hold.
    """
    for e in substitution_pool(phi, psi, config):
        for check in (_cond1, _cond2):
            w = check(phi, psi, e, in_TD)
            if w is not None:
                if not verify_def51_witness(phi, psi, w):
                    raise AssertionError(f"witness failed re-verification: {w}")
                return w
    return None


def _valid_direct(m: LogicalMatrix, f) -> bool:
    names = sorted(prop_vars(f), key=var_key)
    return all(evaluate(m, v, f) in m.designated for v in valuations(m, names))


def verify_def51_witness(phi, psi, w: Def51Witness, m: LogicalMatrix = M_D) -> bool:
    """Recompute a witness from scratch with the plain evaluator."""
    e = w.substitution
    if w.condition == 1:
        a, b = apply_prop_subst(e, phi), apply_prop_subst(e, psi)
        if not _valid_direct(m, a):
            return False
        if w.reason == "membership":
            return not _valid_direct(m, b)
        return _valid_direct(m, b) and not prop_vars(a) <= prop_vars(b)
    sphi, spsi = Neg(apply_prop_subst(e, phi)), Neg(apply_prop_subst(e, psi))
    if not _valid_direct(m, Impl(Impl(spsi, sphi), sphi)):
        return False
    if w.reason == "membership":
        return not _valid_direct(m, sphi)
    return _valid_direct(m, sphi) and not prop_vars(spsi) <= prop_vars(sphi)


# -- Lambda_0 versus Lambda_1 ------------------------------------------------------

@dataclass
class GapWitness:
    relation: str
    # "lambda0-rejects-entailment": the pair is entailed yet some e breaks
    # Lambda_0; "lambda0-admits-non-entailment": the pair is not entailed,
    # condition 1 and Lambda_0 survive the whole pool, and some e breaks
    # Lambda_1
    kind: str
    reading: str  # "printed", "swapped" or "n/a"
    phi: object
    psi: object
    substitution: PropSubstitution

    def to_json(self) -> dict:
        return {"kind": self.kind, "reading": self.reading, "phi": str(self.phi),
                "psi": str(self.psi), "substitution": self.substitution.to_json()}


@dataclass
class GapSearch:
    relation: str
    witness: Optional[GapWitness]
    budget_exhausted: bool
    pairs_examined: int

    def to_json(self) -> dict:
        return {"relation": self.relation,
                "witness": self.witness.to_json() if self.witness else None,
                "budget_exhausted": self.budget_exhausted,
                "pairs_examined": self.pairs_examined}


_GAP_SETUP = {
    # relation: (membership test, P0 conditions used, atoms of the pair pool)
    "A0": (in_TD, True, ("p", "q")),
    # first-order relations are projected onto j-images, whose atoms are p1, p2
    "A1": (in_TD, True, ("p1", "p2")),
    "C1": (in_L2, False, ("p1", "p2")),
}


def _gap_flags(phi, psi, e, member, use_p0):
    hphi, hpsi = apply_prop_subst(e, phi), apply_prop_subst(e, psi)
    sphi, spsi = Neg(hphi), Neg(hpsi)

    def incl(a, b):
        return (not use_p0) or prop_vars(a) <= prop_vars(b)

    c1 = member(hphi) and not (member(hpsi) and incl(hphi, hpsi))
    pre0 = member(spsi)
    l0_printed = pre0 and not (member(sphi) and incl(spsi, sphi))
    l0_swapped = pre0 and not (member(sphi) and incl(sphi, spsi))
    l1 = member(Impl(Impl(spsi, sphi), sphi)) and not (member(sphi) and incl(spsi, sphi))
    return c1, l0_printed, l0_swapped, l1


def gap_witness(relation: str = "A0", config: PoolConfig = DEFAULT_POOL,
                pairs: Optional[Sequence] = None, max_pairs: Optional[int] = None,
                pair_height: int = 2) -> GapSearch:
    """Bounded search for a pair separating Lambda_0 from Lambda_1.

    Pairs default to all ordered pairs of formulas of height at most
    ``pair_height`` over two variables.  For each pair both readings of
    Lambda_0 are tried (the inclusion as printed, and reversed).
    """
    if relation.startswith("A1"):
        relation = "A1"
    elif relation.startswith("C1"):
        relation = "C1"
    if relation not in _GAP_SETUP:
        raise ValueError(f"unknown relation {relation!r}")
    member, use_p0, atoms = _GAP_SETUP[relation]
    if pairs is None:
        forms = enumerate_formulas(prop_atoms(atoms), pair_height)
        pairs = [(a, b) for a in forms for b in forms]
    limit = len(pairs) if max_pairs is None else max_pairs
    readings = ("printed", "swapped") if use_p0 else ("n/a",)
    examined = 0
    for phi, psi in pairs:
        if examined >= limit:
            return GapSearch(relation, None, True, examined)
        examined += 1
        entailed = member(Impl(phi, psi))
        pool = list(substitution_pool(phi, psi, config))
        flags = [_gap_flags(phi, psi, e, member, use_p0) for e in pool]
        for reading in readings:
            idx = 2 if reading == "swapped" else 1
            found = None
            if entailed:
                found = next((e for e, f in zip(pool, flags) if f[idx]), None)
                kind = "lambda0-rejects-entailment"
            elif not any(f[0] or f[idx] for f in flags):
                found = next((e for e, f in zip(pool, flags) if f[3]), None)
                kind = "lambda0-admits-non-entailment"
            if found is not None:
                w = GapWitness(relation, kind, reading, phi, psi, found)
                if not verify_gap_witness(w):
                    raise AssertionError(f"gap witness failed re-verification: {w}")
                return GapSearch(relation, w, False, examined)
    return GapSearch(relation, None, False, examined)


def verify_gap_witness(w: GapWitness) -> bool:
    """Re-evaluate the defining violation of a gap witness directly."""
    m = M_2 if w.relation == "C1" else M_D
    use_p0 = w.relation != "C1"

    def member(f):
        return _valid_direct(m, f)

    flags = _gap_flags(w.phi, w.psi, w.substitution, member, use_p0)
    entailed = member(Impl(w.phi, w.psi))
    if w.kind == "lambda0-rejects-entailment":
        return entailed and flags[2 if w.reading == "swapped" else 1]
    return (not entailed) and flags[3]
