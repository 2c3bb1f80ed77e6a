import itertools
import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomic_entailment.entail_prop import (
    PoolConfig, atomic_entails_prop, classical_entails_prop, falsify_def51, gap_witness,
    _constant_templates, fresh_names, in_TD, substitution_pool, verify_def51_witness,
    verify_gap_witness,
)
from atomic_entailment.formula import Impl, Var
from atomic_entailment.matrix import M_2, M_D, evaluate, is_valid, valuations
from atomic_entailment.parsing import parse_prop
from atomic_entailment.prop import PropSubstitution, apply_prop_subst, prop_vars

from conftest import prop_formulas

P = parse_prop
FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "gap_oracle.json").read_text())


def test_atomic_examples():
    assert atomic_entails_prop(P("p"), P("p")).holds
    v = atomic_entails_prop(P("p & q"), P("p"))
    assert not v.holds and v.countermodel == {"p": 2, "q": 1}
    assert atomic_entails_prop(P("(p -> q) & p"), P("q")).holds


def test_classical_examples():
    assert classical_entails_prop(P("p"), P("q -> p")).holds
    assert classical_entails_prop(P("p & q"), P("p")).holds
    v = classical_entails_prop(P("p"), P("q"))
    assert not v.holds and v.countermodel == {"p": 1, "q": 0}


def test_verdict_evidence():
    ok = atomic_entails_prop(P("p"), P("p"))
    assert ok.evidence == "valid" and ok.countermodel is None
    bad = atomic_entails_prop(P("p"), P("q -> p"))
    assert bad.evidence == bad.countermodel
    assert evaluate(M_D, bad.countermodel, P("p -> (q -> p)")) not in M_D.designated


def test_falsify_examples():
    w = falsify_def51(P("p"), P("q -> p"))
    assert w.condition == 1
    assert w.substitution.to_json() == {"p": "s -> s", "q": "q"}
    assert w.antecedent == P("s -> s") and w.consequent == P("q -> (s -> s)")
    assert w.reason == "membership" and w.countermodel == {"q": 1, "s": 2}
    assert falsify_def51(P("p"), P("p")) is None
    w = falsify_def51(P("p | q"), P("p"))
    assert w.condition == 1 and w.reason == "inclusion"
    assert w.substitution.to_json() == {"p": "s -> s", "q": "t -> t"}


def test_falsify_witnesses_reverify():
    forms = [P(t) for t in ["p", "q", "p -> q", "p & q", "p | q", "~p", "p <-> q", "q -> p"]]
    for phi, psi in itertools.product(forms, repeat=2):
        w = falsify_def51(phi, psi)
        if atomic_entails_prop(phi, psi).holds:
            assert w is None
        elif w is not None:
            assert verify_def51_witness(phi, psi, w)


def test_pool_order_and_uniqueness():
    pool = list(substitution_pool(P("p"), P("q -> p")))
    assert pool[0].to_json() == {"p": "p", "q": "q"}
    keys = [json.dumps(e.to_json(), sort_keys=True) for e in pool]
    assert len(keys) == len(set(keys))


def test_pool_cap():
    pool = list(substitution_pool(P("p"), P("q"), PoolConfig(max_substitutions=5)))
    assert len(pool) == 5


@settings(max_examples=60)
@given(prop_formulas(max_leaves=6), st.randoms(use_true_random=False))
def test_model_constants_land_in_TD(phi, rnd):
    names = sorted(prop_vars(phi))
    ones, zeros = _constant_templates(fresh_names(set(names), 1)[0])
    for v in valuations(M_2, names):
        if evaluate(M_2, v, phi) == 1:
            e = PropSubstitution({n: rnd.choice(ones if v[n] else zeros) for n in names})
            assert in_TD(apply_prop_subst(e, phi))


def test_model_constants_off_by_default():
    plain = list(substitution_pool(P("p"), P("p")))
    more = list(substitution_pool(P("p"), P("p"), PoolConfig(model_constants=True)))
    assert more[:len(plain)] == plain
    assert len(more) > len(plain) + 50


@given(prop_formulas(max_leaves=6), prop_formulas(max_leaves=6))
def test_atomic_agrees_with_matrix(phi, psi):
    assert atomic_entails_prop(phi, psi).holds == is_valid(M_D, Impl(phi, psi)).holds


@given(prop_formulas(max_leaves=6), prop_formulas(max_leaves=6))
def test_atomic_implies_classical(phi, psi):
    if atomic_entails_prop(phi, psi).holds:
        assert classical_entails_prop(phi, psi).holds


def test_converse_of_inclusion_fails():
    phi, psi = P("p"), P("q -> p")
    assert classical_entails_prop(phi, psi).holds
    assert not atomic_entails_prop(phi, psi).holds


@settings(max_examples=30)
@given(prop_formulas(max_leaves=5), prop_formulas(max_leaves=5))
def test_entailment_transfers_along_pool(phi, psi):
    if not atomic_entails_prop(phi, psi).holds:
        return
    pool = list(itertools.islice(substitution_pool(phi, psi), 2000))
    rng = random.Random(hash((str(phi), str(psi))))
    for e in rng.sample(pool, min(200, len(pool))):
        hphi, hpsi = apply_prop_subst(e, phi), apply_prop_subst(e, psi)
        if in_TD(hphi):
            assert in_TD(hpsi)
            assert prop_vars(hphi) <= prop_vars(hpsi)


@settings(max_examples=50)
@given(prop_formulas(max_leaves=5), prop_formulas(max_leaves=5))
def test_falsifier_soundness(phi, psi):
    w = falsify_def51(phi, psi, PoolConfig(depth=1))
    if atomic_entails_prop(phi, psi).holds:
        assert w is None
    elif w is not None:
        assert verify_def51_witness(phi, psi, w)


def test_gap_identity_pair():
    r = gap_witness("A0", pairs=[(Var("p"), Var("p"))])
    assert r.witness is None and not r.budget_exhausted and r.pairs_examined == 1


@pytest.mark.parametrize("relation", ["A0", "A1-projected", "C1-projected"])
def test_gap_zero_budget(relation):
    r = gap_witness(relation, max_pairs=0)
    assert r.witness is None and r.budget_exhausted


@pytest.mark.parametrize("relation", ["A0", "A1", "C1"])
def test_gap_matches_oracle(relation):
    r = gap_witness(relation)
    expected = FIXTURE[relation]["witness"]
    got = r.witness.to_json() if r.witness else None
    if got is not None:
        assert verify_gap_witness(r.witness)
    assert got == expected
    assert r.pairs_examined == 400

