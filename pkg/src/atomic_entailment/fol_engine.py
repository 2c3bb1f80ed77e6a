"""First-order systems: L_D membership, atomic and classical entailment,
the e_phi substitution and the schema suite."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional

from .fol import (
    FolSubstitution,
    apply_fol_subst,
    j_translate,
    pred_letters,
    simple_formulas,
    universal_closure,
)
from .formula import And, Impl
from .matrix import M_D, Status, Verdict, find_classical_model, is_valid
from .parsing import parse_fol
from .prover import (
    DEFAULT_BUDGET,
    Budget,
    BudgetZero,
    ClassicalVerdict,
    Structure,
    classical_validity,
)
from .schemas import CONVERSE_XXVIII, Schema, select

__all__ = [
    "Budget", "BudgetZero", "ClassicalVerdict", "Membership", "LdVerdict",
    "FolEntailment", "UnsatisfiableSkeleton", "classical_validity", "member_LD",
    "atomic_entails_fol", "classical_entails_fol", "build_e_phi",
    "SchemaResult", "SuiteReport", "run_schema_suite",
]


class Membership(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class LdVerdict:
    formula: object
    j_image: object
    j_check: Verdict
    classical: Optional[ClassicalVerdict]

    @property
    def j_in_TD(self) -> bool:
        return self.j_check.holds

    @property
    def member(self) -> Membership:
        if not self.j_in_TD or (self.classical is not None and self.classical.invalid):
            return Membership.NO
        if self.classical is not None and self.classical.valid:
            return Membership.YES
        return Membership.UNKNOWN

    def to_json(self) -> dict:
        out = {"formula": str(self.formula), "j_image": str(self.j_image),
               "j_in_TD": self.j_in_TD, "member": self.member.value}
        if not self.j_in_TD:
            out["j_countermodel"] = self.j_check.countermodel
        if self.classical is not None:
            out["classical"] = self.classical.to_json()
        return out


def member_LD(f, budget: Budget = DEFAULT_BUDGET, lazy: bool = False) -> LdVerdict:
    """Membership in L_D: j-image in T_D and classical validity.

    With ``lazy`` the prover is skipped once the j-condition fails, since
    the answer is already No.
    """
    j = j_translate(f)
    jv = is_valid(M_D, j)
    cv = None if (lazy and not jv.holds) else classical_validity(f, budget)
    return LdVerdict(f, j, jv, cv)


@dataclass
class FolEntailment:
    relation: str  # "AtomicFol" or "ClassicalFol"
    phi: object
    psi: object
    query: object  # the implication actually decided
    status: Status
    ld: Optional[LdVerdict] = None
    classical: Optional[ClassicalVerdict] = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def evidence(self):
        """The j-countermodel (a valuation) or a first-order countermodel."""
        if self.status is not Status.FAILS:
            return None
        if self.ld is not None and not self.ld.j_in_TD:
            return self.ld.j_check.countermodel
        cv = self.ld.classical if self.ld is not None else self.classical
        return cv.countermodel if cv is not None else None

    def to_json(self) -> dict:
        ev = self.evidence
        if isinstance(ev, Structure):
            ev = ev.to_json()
        out = {"relation": self.relation, "phi": str(self.phi), "psi": str(self.psi),
               "query": str(self.query), "verdict": self.status.value, "evidence": ev}
        if self.ld is not None:
            out["ld"] = self.ld.to_json()
        if self.classical is not None:
            out["classical"] = self.classical.to_json()
        return out


_MEMBER_STATUS = {Membership.YES: Status.HOLDS, Membership.NO: Status.FAILS,
                  Membership.UNKNOWN: Status.UNKNOWN}


def atomic_entails_fol(phi, psi, budget: Budget = DEFAULT_BUDGET) -> FolEntailment:
    q = Impl(universal_closure(phi), psi)
    ld = member_LD(q, budget, lazy=True)
    return FolEntailment("AtomicFol", phi, psi, q, _MEMBER_STATUS[ld.member], ld=ld)


def classical_entails_fol(phi, psi, budget: Budget = DEFAULT_BUDGET) -> FolEntailment:
    q = Impl(universal_closure(phi), psi)
    cv = classical_validity(q, budget)
    return FolEntailment("ClassicalFol", phi, psi, q, cv.status, classical=cv)


class UnsatisfiableSkeleton(ValueError):
    """The j-image of phi has no classical model."""


def build_e_phi(phi, context=()) -> FolSubstitution:
    """The substitution e_phi over the simple formulas of phi and ``context``.

    The valuation is the lexicographically smallest classical model of
    j(phi); letters outside j(phi) count as 0.  A simple formula alpha goes
    to (closure of phi) & alpha when v(j(alpha)) = 0, and to
    (closure of phi) -> alpha when v(j(alpha)) = 1.
    """
    v = find_classical_model(j_translate(phi))
    if v is None:
        raise UnsatisfiableSkeleton(str(phi))
    closed = universal_closure(phi)
    atoms = set(simple_formulas(phi))
    for c in context:
        atoms |= simple_formulas(c)
    bindings = {}
    for a in sorted(atoms, key=str):
        if v.get(j_translate(a).name, 0) == 1:
            bindings[a] = Impl(closed, a)
        else:
            bindings[a] = And(closed, a)
    return FolSubstitution(bindings)


def apply_e_phi(phi, context=()):
    """h^{e_phi}(phi)."""
    return apply_fol_subst(build_e_phi(phi, context), phi)


# -- schema suite ---------------------------------------------------------------

@dataclass
class SchemaResult:
    label: str
    template: str
    instances: list
    j_ok: bool
    classical: str  # "valid" | "invalid" | "unknown"
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def outcome(self) -> str:
        if not self.j_ok or self.classical == "invalid":
            return "fail"
        return "pass" if self.classical == "valid" else "unknown"

    def to_json(self) -> dict:
        return {"schema": self.label, "template": self.template,
                "instances": [str(f) for f in self.instances],
                "outcome": self.outcome, "j_in_TD": self.j_ok,
                "classical": self.classical, "seconds": round(self.seconds, 4),
                **self.detail}


@dataclass
class SuiteReport:
    results: list
    converse: Optional[ClassicalVerdict] = None

    def count(self, outcome: str) -> int:
        return sum(r.outcome == outcome for r in self.results)

    @property
    def discrepancies(self) -> list[SchemaResult]:
        return [r for r in self.results if r.outcome != "pass"]

    def to_json(self) -> dict:
        out = {"total": len(self.results), "pass": self.count("pass"),
               "fail": self.count("fail"), "unknown": self.count("unknown"),
               "discrepancies": [r.label for r in self.discrepancies],
               "results": [r.to_json() for r in self.results]}
        if self.converse is not None:
            out["converse_xxviii"] = self.converse.to_json()
        return out


def check_schema(s: Schema, budget: Budget = DEFAULT_BUDGET) -> SchemaResult:
    t0 = time.perf_counter()
    j_ok = True
    worst = "valid"
    detail: dict = {}
    for f in s.instances:
        ld = member_LD(f, budget)
        if not ld.j_in_TD:
            j_ok = False
            detail.setdefault("j_countermodel", ld.j_check.countermodel)
        cv = ld.classical
        if cv.invalid:
            worst = "invalid"
            detail.setdefault("countermodel", cv.countermodel.to_json())
        elif not cv.valid and worst == "valid":
            worst = "unknown"
            detail.setdefault("budget", cv.report)
    return SchemaResult(s.label, s.template, list(s.instances), j_ok, worst, detail,
                        time.perf_counter() - t0)


def run_schema_suite(range_spec: str = "all", budget: Budget = DEFAULT_BUDGET) -> SuiteReport:
    """Check every selected schema instance for L_D membership.

    Failures are reported as they are found; nothing is suppressed.  When
    (xxviii) is selected its converse is also run and expected to be refuted.
    """
    chosen = select(range_spec)
    results = [check_schema(s, budget) for s in chosen]
    converse = None
    if any(s.label == "xxviii" for s in chosen):
        converse = classical_validity(parse_fol(CONVERSE_XXVIII), budget)
    return SuiteReport(results, converse)


def letters(f) -> frozenset:
    """P_1: predicate letters as (index, arity) pairs."""
    return pred_letters(f)
