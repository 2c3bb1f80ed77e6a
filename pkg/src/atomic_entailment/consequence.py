"""Bounded consequence operations over T_D and L_D.

Derivations are explicit line lists with justifications and replay under
an independent checker.  Non-derivability is certified semantically: a
3-valued valuation that designates every premise (and, automatically,
every logic member) but not the target blocks the target, because Modus
Ponens and Generalization preserve designation pointwise.
"""
from __future__ import annotations

import enum
import functools
import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .fol import FolSubstitution, apply_fol_subst, free_vars, j_translate, pred_letters
from .fol_engine import Membership, member_LD
from .formula import Bin, Forall, Impl, IndVar, Neg, Op, Pred, Var, var_key
from .generators import enumerate_by_size, enumerate_formulas, prop_atoms
from .matrix import M_D, evaluate, valid_mask
from .parsing import is_first_order
from .prop import PropSubstitution, apply_prop_subst, prop_vars
from .prover import DEFAULT_BUDGET, Budget, check_refutation

log = logging.getLogger(__name__)


class Rule(enum.Enum):
    MP = "ModusPonens"
    SUBST = "Substitution"
    GEN = "Generalization"


class Policy(enum.Enum):
    LOGIC_ONLY = "LogicOnly"
    UNRESTRICTED = "Unrestricted"


@dataclass(frozen=True)
class RuleSet:
    rules: frozenset
    substitution_policy: Policy = Policy.LOGIC_ONLY

    @property
    def name(self) -> str:
        for name, rs in PRESETS.items():
            if rs.rules == self.rules:
                return name
        return "+".join(sorted(r.value for r in self.rules))


R0_STAR = RuleSet(frozenset({Rule.MP, Rule.SUBST}))
R0_PLUS = RuleSet(frozenset({Rule.MP, Rule.GEN}))
R0_STAR_PLUS = RuleSet(frozenset({Rule.MP, Rule.SUBST, Rule.GEN}))
PRESETS = {"R0*": R0_STAR, "R0+": R0_PLUS, "R0*+": R0_STAR_PLUS}


def default_rules(logic: str) -> RuleSet:
    return R0_STAR if logic == "TD" else R0_PLUS


# -- logic membership --------------------------------------------------------------

@functools.lru_cache(maxsize=100_000)
def _td_member(f) -> bool:
    return bool(valid_mask(M_D, f, sorted(prop_vars(f), key=var_key)).all())


@functools.lru_cache(maxsize=20_000)
def _ld_member(f, budget: Budget):
    v = member_LD(f, budget, lazy=True)
    if v.member is Membership.UNKNOWN:
        log.warning("L_D membership unknown for %s; treated as non-member", f)
    return v


def logic_member(logic: str, f, budget: Budget = DEFAULT_BUDGET):
    """(is member, certificate dict) for T_D or L_D."""
    if logic == "TD":
        if is_first_order(f):
            return False, {}
        return _td_member(f), {"logic": "TD", "matrix": "MD", "check": "sweep"}
    if logic == "LD":
        if not is_first_order(f):
            return False, {}
        v = _ld_member(f, budget)
        ok = v.member is Membership.YES
        cert = {"logic": "LD", "j_image": str(v.j_image)}
        if ok:
            cert["refutation_steps"] = len(v.classical.proof.steps)
        return ok, cert
    raise ValueError(f"unknown logic {logic!r}")


# -- derivations -------------------------------------------------------------------

@dataclass(frozen=True)
class Premise:
    tag = "Premise"


@dataclass(frozen=True)
class LogicMember:
    certificate: dict = field(default_factory=dict, compare=False, hash=False)
    tag = "LogicMember"


@dataclass(frozen=True)
class MP:
    minor: int  # line holding A
    major: int  # line holding A -> B
    tag = "MP"


@dataclass(frozen=True)
class Gen:
    line: int
    var: int
    tag = "Gen"


@dataclass(frozen=True)
class Subst:
    line: int
    substitution: Union[PropSubstitution, FolSubstitution]
    tag = "Subst"


Justification = Union[Premise, LogicMember, MP, Gen, Subst]


@dataclass(frozen=True)
class Line:
    formula: object
    justification: Justification


@dataclass
class Derivation:
    lines: list
    policy: Policy = Policy.LOGIC_ONLY

    @property
    def conclusion(self):
        return self.lines[-1].formula

    @property
    def inference_count(self) -> int:
        """Lines other than premises."""
        return sum(not isinstance(l.justification, Premise) for l in self.lines)

    def to_json(self) -> dict:
        out = []
        for i, l in enumerate(self.lines):
            j = l.justification
            row = {"line": i, "formula": str(l.formula), "rule": j.tag}
            if isinstance(j, MP):
                row["from"] = [j.minor, j.major]
            elif isinstance(j, Gen):
                row["from"] = [j.line]
                row["var"] = f"x{j.var}"
            elif isinstance(j, Subst):
                row["from"] = [j.line]
                row["substitution"] = j.substitution.to_json()
            elif isinstance(j, LogicMember):
                row["certificate"] = j.certificate
            out.append(row)
        return {"policy": self.policy.value, "lines": out}


def _concat(*derivs: Derivation, policy: Policy) -> tuple[list, list[int]]:
    """Merge derivations, sharing identical lines; returns lines and the
    index of each input derivation's conclusion."""
    lines: list[Line] = []
    where: dict = {}
    ends = []
    for d in derivs:
        remap = {}
        for i, l in enumerate(d.lines):
            j = l.justification
            if isinstance(j, MP):
                j = MP(remap[j.minor], remap[j.major])
            elif isinstance(j, Gen):
                j = Gen(remap[j.line], j.var)
            elif isinstance(j, Subst):
                j = Subst(remap[j.line], j.substitution)
            key = (l.formula, j)
            if key not in where:
                where[key] = len(lines)
                lines.append(Line(l.formula, j))
            remap[i] = where[key]
        ends.append(remap[len(d.lines) - 1])
    return lines, ends


# -- closure -----------------------------------------------------------------------

@dataclass
class ClosureResult:
    formulas: dict  # formula -> Derivation
    depth: dict  # formula -> derivation depth
    bound_exceeded: bool
    ruleset: RuleSet
    logic: str

    def __contains__(self, f) -> bool:
        return f in self.formulas


def default_candidates(logic: str, premises: Sequence, target=None, max_size: int = 5) -> list:
    """Formulas MP may conclude from logic members: everything over the
    letters of the premises (and target) with at most ``max_size`` nodes
    (one less for first-order formulas, where quantifiers also count)."""
    items = list(premises) + ([target] if target is not None else [])
    if logic == "TD":
        names = sorted(set().union(*(prop_vars(f) for f in items)) or {"p"}, key=var_key)
        return enumerate_by_size(prop_atoms(names), max_size)
    letters = sorted(set().union(*(pred_letters(f) for f in items)) or {(1, 1)})
    atoms = [Pred(i, tuple(IndVar(k + 1) for k in range(a))) for i, a in letters]
    return enumerate_by_size(atoms, max_size - 1, quantify=(1,))


def closure(ruleset: RuleSet, logic: str, premises: Sequence, depth_bound: int = 2,
            size_bound: int = 5000, candidates: Optional[Sequence] = None,
            budget: Budget = DEFAULT_BUDGET, target=None) -> ClosureResult:
    """Breadth-first closure of the premises under the rules.

    Depth counts rule applications; premises sit at depth 0.  Logic members
    enter on demand: Modus Ponens from a derived A to a candidate B uses the
    logic member A -> B when membership is confirmed.  Substitution (when
    in the rule set) maps one variable to a candidate; under LogicOnly it
    only applies to lines whose derivation uses no premise.  Generalization
    binds each free variable.
    """
    if depth_bound < 0 or size_bound < 1:
        raise ValueError("bounds must be positive")
    if candidates is None:
        candidates = default_candidates(logic, premises, target)
    derivs: dict = {}
    depth: dict = {}
    premise_free: dict = {}
    order: list = []
    exceeded = False

    def add(f, d: Derivation, level: int, pure: bool) -> bool:
        nonlocal exceeded
        if f in derivs:
            return False
        if len(derivs) >= size_bound:
            exceeded = True
            return False
        derivs[f] = d
        depth[f] = level
        premise_free[f] = pure
        order.append(f)
        return True

    for p in premises:
        add(p, Derivation([Line(p, Premise())], ruleset.substitution_policy), 0, False)

    frontier = list(order)
    for level in range(1, depth_bound + 1):
        if target is not None and target in derivs:
            break
        new: list = []
        known = list(order)
        for a in frontier:
            da = derivs[a]
            if Rule.MP in ruleset.rules:
                # A with A -> B already derived
                for b_impl in known:
                    if isinstance(b_impl, Bin) and b_impl.op is Op.IMPL and b_impl.left == a:
                        b = b_impl.right
                        if b not in derivs:
                            lines, (ia, ib) = _concat(da, derivs[b_impl], policy=ruleset.substitution_policy)
                            lines.append(Line(b, MP(ia, ib)))
                            if add(b, Derivation(lines, ruleset.substitution_policy), level,
                                   premise_free[a] and premise_free[b_impl]):
                                new.append(b)
                # A -> B derived earlier, A new
                if isinstance(a, Bin) and a.op is Op.IMPL and a.left in derivs and a.right not in derivs:
                    lines, (ia, ib) = _concat(derivs[a.left], da, policy=ruleset.substitution_policy)
                    lines.append(Line(a.right, MP(ia, ib)))
                    if add(a.right, Derivation(lines, ruleset.substitution_policy), level,
                           premise_free[a] and premise_free[a.left]):
                        new.append(a.right)
                # logic member A -> B for a candidate B
                for b in candidates:
                    if b in derivs:
                        continue
                    ok, cert = logic_member(logic, Impl(a, b), budget)
                    if not ok:
                        continue
                    lines, (ia,) = _concat(da, policy=ruleset.substitution_policy)
                    lines.append(Line(Impl(a, b), LogicMember(cert)))
                    lines.append(Line(b, MP(ia, len(lines) - 1)))
                    if add(b, Derivation(lines, ruleset.substitution_policy), level, premise_free[a]):
                        new.append(b)
            if Rule.GEN in ruleset.rules and is_first_order(a):
                for v in sorted(free_vars(a)):
                    g = Forall(v, a)
                    if g in derivs:
                        continue
                    lines, (ia,) = _concat(da, policy=ruleset.substitution_policy)
                    lines.append(Line(g, Gen(ia, v)))
                    if add(g, Derivation(lines, ruleset.substitution_policy), level, premise_free[a]):
                        new.append(g)
            if Rule.SUBST in ruleset.rules and not is_first_order(a):
                allowed = premise_free[a] or ruleset.substitution_policy is Policy.UNRESTRICTED
                if allowed:
                    for name in sorted(prop_vars(a), key=var_key):
                        for b in candidates:
                            e = PropSubstitution({name: b})
                            g = apply_prop_subst(e, a)
                            if g in derivs:
                                continue
                            lines, (ia,) = _concat(da, policy=ruleset.substitution_policy)
                            lines.append(Line(g, Subst(ia, e)))
                            if add(g, Derivation(lines, ruleset.substitution_policy), level,
                                   premise_free[a]):
                                new.append(g)
        frontier = new
        if not frontier:
            break
    return ClosureResult(derivs, depth, exceeded, ruleset, logic)


# -- goal-directed derivation ---------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    depth: int = 2
    size: int = 5000


def schema_route(logic: str, premises: Sequence, target, ruleset: RuleSet,
                 budget: Budget = DEFAULT_BUDGET) -> Optional[Derivation]:
    """alpha, ~alpha in the premises and alpha -> (~alpha -> target) in the
    logic give the target by two Modus Ponens steps."""
    for a in premises:
        if Neg(a) not in premises:
            continue
        member = Impl(a, Impl(Neg(a), target))
        ok, cert = logic_member(logic, member, budget)
        if not ok:
            continue
        pol = ruleset.substitution_policy
        return Derivation([
            Line(a, Premise()),
            Line(Neg(a), Premise()),
            Line(member, LogicMember(cert)),
            Line(Impl(Neg(a), target), MP(0, 2)),
            Line(target, MP(1, 3)),
        ], pol)
    return None


def derive_target(ruleset: RuleSet, logic: str, premises: Sequence, target,
                  bounds: Bounds = Bounds(), budget: Budget = DEFAULT_BUDGET,
                  candidates: Optional[Sequence] = None) -> Optional[Derivation]:
    """A replayable derivation of ``target`` from the premises, or None.

    Tries, in order: the target as a premise, the contradiction schema
    route, then the bounded closure.
    """
    premises = list(premises)
    if target in premises:
        return Derivation([Line(target, Premise())], ruleset.substitution_policy)
    d = schema_route(logic, premises, target, ruleset, budget)
    if d is not None:
        return d
    res = closure(ruleset, logic, premises, bounds.depth, bounds.size,
                  candidates=candidates, budget=budget, target=target)
    return res.formulas.get(target)


# -- semantic certificates ---------------------------------------------------------

def j_image(f):
    return j_translate(f) if is_first_order(f) else f


@dataclass
class DesignationCertificate:
    logic: str
    valuation: dict
    premises: tuple
    blocked_formula: object

    def verify(self) -> bool:
        """Premise j-images designated, blocked j-image undesignated."""
        v = self.valuation
        try:
            if not all(evaluate(M_D, v, j_image(p)) in M_D.designated for p in self.premises):
                return False
            return evaluate(M_D, v, j_image(self.blocked_formula)) not in M_D.designated
        except KeyError:
            return False

    def preserved_by(self, d: Derivation) -> bool:
        """Every line of a derivation from these premises is designated
        under the certificate valuation."""
        v = dict(self.valuation)
        names = set()
        for l in d.lines:
            names |= prop_vars(j_image(l.formula))
        for n in names - set(v):
            # letters outside the certificate: any value works, use 2
            v[n] = 2
        return all(evaluate(M_D, v, j_image(l.formula)) in M_D.designated for l in d.lines)

    def to_json(self) -> dict:
        return {"logic": self.logic,
                "valuation": {k: self.valuation[k] for k in sorted(self.valuation, key=var_key)},
                "premises": [str(p) for p in self.premises],
                "blocked": str(self.blocked_formula)}


def underivability_certificate(logic: str, premises: Sequence, target,
                               ruleset: Optional[RuleSet] = None) -> Optional[DesignationCertificate]:
    """Lexicographically first 3-valued valuation of the j-variables that
    designates every premise j-image and not the target's.

    Sound for Modus Ponens, Generalization and logic-only Substitution;
    unrestricted Substitution on premises is not covered, so None is
    returned for such rule sets.
    """
    if ruleset is not None and Rule.SUBST in ruleset.rules \
            and ruleset.substitution_policy is Policy.UNRESTRICTED:
        return None
    premises = tuple(premises)
    js = [j_image(p) for p in premises]
    jt = j_image(target)
    names = sorted(set().union(prop_vars(jt), *(prop_vars(j) for j in js)), key=var_key)
    ok = ~valid_mask(M_D, jt, names)
    for j in js:
        ok &= valid_mask(M_D, j, names)
    if not ok.any():
        return None
    flat = int(np.argmax(ok))
    pos = np.unravel_index(flat, (3,) * len(names)) if names else ()
    val = {n: int(p) for n, p in zip(names, pos)}
    cert = DesignationCertificate(logic, val, premises, target)
    if not cert.verify():
        raise AssertionError("certificate failed re-verification")
    return cert


# -- atomic inconsistency -------------------------------------------------------------

@dataclass
class AincItem:
    beta: object
    related: bool  # letters of beta within those of alpha
    derivation: Optional[Derivation] = None
    certificate: Optional[DesignationCertificate] = None
    neg_certificate: Optional[DesignationCertificate] = None
    replayed: bool = False

    @property
    def ok(self) -> bool:
        if self.related:
            return self.derivation is not None and self.replayed
        return self.certificate is not None or self.neg_certificate is not None

    def to_json(self) -> dict:
        out = {"beta": str(self.beta), "related": self.related, "ok": self.ok}
        if self.derivation is not None:
            out["derivation"] = self.derivation.to_json()
            out["replayed"] = self.replayed
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.neg_certificate is not None:
            out["neg_certificate"] = self.neg_certificate.to_json()
        return out


@dataclass
class AincReport:
    logic: str
    alpha: object
    items: list

    @property
    def derived(self) -> list:
        return [i for i in self.items if i.related]

    @property
    def blocked(self) -> list:
        return [i for i in self.items if not i.related]

    @property
    def positive_ok(self) -> bool:
        return all(i.ok for i in self.derived)

    @property
    def negative_ok(self) -> bool:
        return all(i.ok for i in self.blocked)

    @property
    def ok(self) -> bool:
        return self.positive_ok and self.negative_ok

    def to_json(self) -> dict:
        return {"logic": self.logic, "alpha": str(self.alpha),
                "derived": sum(i.ok for i in self.derived), "related_total": len(self.derived),
                "blocked": sum(i.ok for i in self.blocked), "fresh_total": len(self.blocked),
                "ok": self.ok, "items": [i.to_json() for i in self.items]}


def letters_of(f) -> frozenset:
    return pred_letters(f) if is_first_order(f) else prop_vars(f)


def fresh_atom(logic: str, used):
    """First propositional variable or unary predicate letter not in use."""
    if logic == "TD":
        for i in itertools.count():
            for letter in "pqst":
                name = letter if i == 0 else f"{letter}{i}"
                if name not in used:
                    return Var(name)
    idx = max((i for i, _ in used), default=0) + 1
    return Pred(idx, (IndVar(1),))


def fresh_family(alpha, q) -> list:
    """Formulas joining alpha to the fresh atom q with each connective."""
    return [q, Neg(q),
            Impl(alpha, q), Impl(q, alpha),
            Bin(Op.AND, alpha, q), Bin(Op.AND, q, alpha),
            Bin(Op.OR, alpha, q), Bin(Op.OR, q, alpha)]


def default_corpus(logic: str, alpha, height: int = 3) -> list:
    """Everything over alpha's letters up to ``height``, then the fresh family."""
    if logic == "TD":
        names = sorted(prop_vars(alpha), key=var_key)
        related = enumerate_formulas(prop_atoms(names), height)
    else:
        letters = sorted(pred_letters(alpha))
        atoms = [Pred(i, tuple(IndVar(k + 1) for k in range(a))) for i, a in letters]
        related = enumerate_formulas(atoms, height, quantify=(1,))
    q = fresh_atom(logic, letters_of(alpha))
    return related + fresh_family(alpha, q)


def ainc_demonstrate(logic: str, alpha, beta_corpus: Optional[Sequence] = None,
                     ruleset: Optional[RuleSet] = None,
                     budget: Budget = DEFAULT_BUDGET) -> AincReport:
    """Both halves of atomic inconsistency on a finite corpus.

    Related beta (letters within alpha's) must be derivable from
    logic + {alpha, ~alpha}; unrelated beta must have beta or ~beta blocked
    by a designation certificate.  Both certificates are attempted.
    """
    ruleset = ruleset or default_rules(logic)
    corpus = default_corpus(logic, alpha) if beta_corpus is None else list(beta_corpus)
    premises = (alpha, Neg(alpha))
    la = letters_of(alpha)
    items = []
    for beta in corpus:
        if letters_of(beta) <= la:
            d = derive_target(ruleset, logic, premises, beta, budget=budget)
            rep = d is not None and replay(d, logic, premises).ok
            items.append(AincItem(beta, True, derivation=d, replayed=rep))
        else:
            items.append(AincItem(
                beta, False,
                certificate=underivability_certificate(logic, premises, beta, ruleset),
                neg_certificate=underivability_certificate(logic, premises, Neg(beta), ruleset)))
    return AincReport(logic, alpha, items)


# -- absolute consistency --------------------------------------------------------------

class _FullLanguage:
    def __repr__(self):
        return "FULL_LANGUAGE"


FULL_LANGUAGE = _FullLanguage()


@dataclass
class Inconsistent:
    reason: str

    def to_json(self) -> dict:
        return {"verdict": "inconsistent", "reason": self.reason}


def absolute_consistency_check(logic: str, premises, ruleset: Optional[RuleSet] = None):
    """A certificate that some formula is underivable, or Inconsistent.

    The blocked formula tried is a fresh atom, which a valuation can always
    send to 0 once every premise letter is set to 2.
    """
    if premises is FULL_LANGUAGE:
        return Inconsistent("premises are the whole language")
    premises = tuple(premises)
    used = set().union(*(letters_of(p) for p in premises)) if premises else set()
    target = fresh_atom(logic, used)
    cert = underivability_certificate(logic, premises, target, ruleset)
    if cert is None:
        return Inconsistent("no certificate found")
    return cert


# -- independent replay ----------------------------------------------------------------

@dataclass
class ReplayResult:
    ok: bool
    errors: list = field(default_factory=list)


def _plain_td(f) -> bool:
    names = sorted(prop_vars(f), key=var_key)
    for combo in itertools.product((0, 1, 2), repeat=len(names)):
        if evaluate(M_D, dict(zip(names, combo)), f) == 0:
            return False
    return True


def _plain_ld(f, budget: Budget) -> bool:
    if not _plain_td(j_translate(f)):
        return False
    v = member_LD(f, budget)
    return v.member is Membership.YES and check_refutation(v.classical.proof)


def replay(d: Derivation, logic: str, premises: Sequence,
           budget: Budget = DEFAULT_BUDGET) -> ReplayResult:
    """Check every line of a derivation from first principles."""
    errors = []
    pure: list[bool] = []
    premises = list(premises)
    for i, line in enumerate(d.lines):
        f, j = line.formula, line.justification
        ok = True
        is_pure = True
        if isinstance(j, Premise):
            ok = f in premises
            is_pure = False
        elif isinstance(j, LogicMember):
            ok = _plain_td(f) if logic == "TD" else _plain_ld(f, budget)
        elif isinstance(j, MP):
            ok = (j.minor < i and j.major < i
                  and d.lines[j.major].formula == Impl(d.lines[j.minor].formula, f))
            is_pure = ok and pure[j.minor] and pure[j.major]
        elif isinstance(j, Gen):
            ok = j.line < i and f == Forall(j.var, d.lines[j.line].formula)
            is_pure = ok and pure[j.line]
        elif isinstance(j, Subst):
            ok = j.line < i
            if ok:
                src = d.lines[j.line].formula
                img = (apply_fol_subst(j.substitution, src) if isinstance(j.substitution, FolSubstitution)
                       else apply_prop_subst(j.substitution, src))
                ok = img == f
                if d.policy is Policy.LOGIC_ONLY and not pure[j.line]:
                    ok = False
                    errors.append(f"line {i}: substitution on a premise-derived line")
            is_pure = ok and pure[j.line]
        else:
            ok = False
        if not ok:
            errors.append(f"line {i}: {j.tag} does not justify {f}")
        pure.append(is_pure)
    return ReplayResult(not errors, errors)
