import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from atomic_entailment.consequence import (
    FULL_LANGUAGE, R0_PLUS, R0_STAR, R0_STAR_PLUS, Bounds, Derivation, DesignationCertificate,
    Inconsistent, Line, LogicMember, MP, Policy, Premise, RuleSet, Subst, Rule,
    absolute_consistency_check, ainc_demonstrate, closure, derive_target, j_image, replay,
    underivability_certificate,
)
from atomic_entailment.formula import Impl, Neg, Var
from atomic_entailment.matrix import M_D, evaluate
from atomic_entailment.parsing import parse_fol, parse_prop
from atomic_entailment.prop import PropSubstitution, prop_vars

from conftest import prop_formulas

P, F = parse_prop, parse_fol


def test_closure_examples():
    res = closure(R0_STAR, "TD", [P("p")], depth_bound=2)
    target = P("~(p -> ~p)")
    assert target in res
    d = res.formulas[target]
    assert any(isinstance(l.justification, LogicMember) and l.formula == P("p -> ~(p -> ~p)")
               for l in d.lines)
    assert replay(d, "TD", [P("p")]).ok
    res = closure(R0_PLUS, "LD", [F("P1(x1)")], depth_bound=1)
    assert F("all x1 . P1(x1)") in res


def test_closure_without_premises_stays_in_td():
    res = closure(R0_STAR, "TD", [], depth_bound=3)
    assert len(res.formulas) == 0


def test_closure_bound_flag():
    res = closure(R0_STAR, "TD", [P("p")], depth_bound=2, size_bound=3)
    assert res.bound_exceeded and len(res.formulas) == 3


def test_closure_rejects_bad_bounds():
    with pytest.raises(ValueError):
        closure(R0_STAR, "TD", [P("p")], depth_bound=1, size_bound=0)


def test_derive_examples():
    d = derive_target(R0_STAR, "TD", [P("p"), P("~p")], P("~~p"))
    assert d is not None and d.inference_count == 3
    assert d.lines[2].formula == P("p -> (~p -> ~~p)")
    assert replay(d, "TD", [P("p"), P("~p")]).ok
    d = derive_target(R0_STAR, "TD", [P("p")], P("p"))
    assert len(d.lines) == 1 and isinstance(d.lines[0].justification, Premise)
    assert derive_target(R0_STAR, "TD", [P("p"), P("~p")], P("q"), Bounds(depth=1)) is None


def test_certificate_examples():
    prem = [P("p"), P("~p")]
    c = underivability_certificate("TD", prem, P("q"))
    assert c.valuation == {"p": 2, "q": 0} and c.verify()
    c = underivability_certificate("TD", prem, P("~q"))
    assert c.valuation == {"p": 2, "q": 1} and c.verify()
    assert underivability_certificate("TD", [P("p")], P("p")) is None


def test_certificate_unavailable_under_unrestricted_substitution():
    rs = RuleSet(frozenset({Rule.MP, Rule.SUBST}), Policy.UNRESTRICTED)
    assert underivability_certificate("TD", [P("p")], P("q"), rs) is None


def test_unrestricted_substitution_trivializes():
    rs = RuleSet(frozenset({Rule.MP, Rule.SUBST}), Policy.UNRESTRICTED)
    res = closure(rs, "TD", [P("p")], depth_bound=1, target=P("q"))
    assert P("q") in res
    assert P("q") not in closure(R0_STAR, "TD", [P("p")], depth_bound=2, target=P("q"))


def test_logic_only_policy_is_replay_checked():
    d = Derivation([Line(P("p"), Premise()),
                    Line(P("q"), Subst(0, PropSubstitution({"p": P("q")})))], Policy.LOGIC_ONLY)
    assert not replay(d, "TD", [P("p")]).ok
    d.policy = Policy.UNRESTRICTED
    assert replay(d, "TD", [P("p")]).ok


def test_replay_rejects_bad_mp():
    d = Derivation([Line(P("p"), Premise()), Line(P("q"), MP(0, 0))], Policy.LOGIC_ONLY)
    assert not replay(d, "TD", [P("p")]).ok


def test_replay_rejects_non_member():
    d = Derivation([Line(P("p -> (q -> p)"), LogicMember(None))], Policy.LOGIC_ONLY)
    assert not replay(d, "TD", []).ok


def test_ainc_examples():
    r = ainc_demonstrate("TD", P("p"), [P("~~p"), P("q")])
    assert r.ok
    pos, neg = r.items
    assert pos.derivation.inference_count == 3
    assert neg.certificate.valuation == {"p": 2, "q": 0}
    assert neg.neg_certificate.valuation == {"p": 2, "q": 1}
    r = ainc_demonstrate("LD", F("P1(x1)"), [F("all x1 . ~P1(x1)")])
    assert r.ok and r.items[0].related


def test_ainc_default_corpora():
    r = ainc_demonstrate("TD", P("p"))
    assert r.ok and len(r.derived) == 151 and len(r.blocked) == 8
    r = ainc_demonstrate("LD", F("P1(x1)"))
    assert r.ok and len(r.derived) == 281 and len(r.blocked) == 8


def test_consistency_examples():
    c = absolute_consistency_check("LD", [F("P1(x1)"), F("~P1(x1)")])
    assert isinstance(c, DesignationCertificate)
    assert c.blocked_formula == F("P2(x1)") and c.valuation == {"p1": 2, "p2": 0}
    c = absolute_consistency_check("TD", [P("p"), P("~p")])
    assert c.blocked_formula == P("q") and c.verify()
    assert isinstance(absolute_consistency_check("TD", FULL_LANGUAGE), Inconsistent)


def test_certificates_preserved_on_engine_traces():
    prem = [P("p"), P("~p")]
    res = closure(R0_STAR, "TD", prem, depth_bound=2)
    cert = underivability_certificate("TD", prem, P("q"))
    for f, d in res.formulas.items():
        assert cert.preserved_by(d)
        assert f != P("q")


def test_closure_monotone():
    small = closure(R0_STAR, "TD", [P("p")], depth_bound=2)
    big = closure(R0_STAR, "TD", [P("p"), P("q")], depth_bound=2)
    assert set(small.formulas) <= set(big.formulas)


def test_ld_gen_and_mp():
    res = closure(R0_PLUS, "LD", [F("P1(x1)"), F("P1(x1) -> P2(x1)")], depth_bound=2)
    assert F("P2(x1)") in res
    for d in res.formulas.values():
        assert replay(d, "LD", [F("P1(x1)"), F("P1(x1) -> P2(x1)")]).ok


premise_sets = st.lists(prop_formulas(["p", "q"], max_leaves=3), min_size=1, max_size=3)


@settings(max_examples=60)
@given(premise_sets, prop_formulas(["p", "q", "s"], max_leaves=4))
def test_certificate_soundness(premises, target):
    c = underivability_certificate("TD", premises, target)
    if c is None:
        return
    assert c.verify()
    v = c.valuation
    for p in premises:
        assert evaluate(M_D, v, p) in M_D.designated
    assert evaluate(M_D, v, target) not in M_D.designated
    # never all-2 on the target's variables
    assert not all(v[n] == 2 for n in prop_vars(target))


@given(prop_formulas())
def test_all_two_designates_everything(f):
    v = {n: 2 for n in prop_vars(f)}
    assert evaluate(M_D, v, j_image(f)) == 2


@settings(max_examples=25)
@given(premise_sets)
def test_closure_traces_replay(premises):
    res = closure(R0_STAR, "TD", premises, depth_bound=1)
    for d in itertools.islice(res.formulas.values(), 40):
        assert replay(d, "TD", premises).ok


@settings(max_examples=25)
@given(premise_sets, premise_sets)
def test_closure_monotone_property(xs, extra):
    small = closure(R0_STAR, "TD", xs, depth_bound=1)
    big = closure(R0_STAR, "TD", xs + extra, depth_bound=1, size_bound=10 ** 6)
    assert set(small.formulas) <= set(big.formulas)


@settings(max_examples=15)
@given(st.sampled_from(["p", "~p", "p -> p", "p & ~p", "p | q", "~(p <-> q)"]))
def test_ainc_implies_absolute_consistency(text):
    alpha = P(text)
    r = ainc_demonstrate("TD", alpha, [Neg(alpha), Impl(alpha, Var("s")), Var("s")])
    if r.ok:
        c = absolute_consistency_check("TD", [alpha, Neg(alpha)])
        assert isinstance(c, DesignationCertificate) and c.verify()


def test_presets():
    assert R0_STAR.rules == {Rule.MP, Rule.SUBST}
    assert R0_PLUS.rules == {Rule.MP, Rule.GEN}
    assert R0_STAR_PLUS.rules == {Rule.MP, Rule.SUBST, Rule.GEN}
    assert R0_STAR.substitution_policy is Policy.LOGIC_ONLY
