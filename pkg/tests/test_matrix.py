import itertools
import json

import pytest
from hypothesis import given

from atomic_entailment.formula import And, Impl, Neg, Var
from atomic_entailment.matrix import (
    M_2, M_D, M_D_PRIME, LogicalMatrix, Status, TooManyVariables, UnassignedVariable,
    UnsupportedConnective, evaluate, find_classical_model, find_model, get_matrix, is_valid,
    verify_tables,
)
from atomic_entailment.parsing import parse_prop
from atomic_entailment.prop import PropSubstitution, apply_prop_subst, prop_vars

from conftest import prop_formulas, prop_substitutions, valuations

P = parse_prop


def _impl_neg_formulas():
    from hypothesis import strategies as st
    return st.recursive(
        st.sampled_from(["p", "q", "s"]).map(Var),
        lambda sub: st.one_of(sub.map(Neg), st.builds(Impl, sub, sub)),
        max_leaves=8)


@pytest.mark.parametrize("v, text, value", [
    ({"p": 1, "q": 2}, "p -> q", 0),
    ({"p": 2}, "~p", 2),
    ({"p": 0, "q": 2}, "p | q", 0),
])
def test_eval_examples(v, text, value):
    assert evaluate(M_D, v, P(text)) == value


def test_unassigned():
    with pytest.raises(UnassignedVariable):
        evaluate(M_D, {"p": 1}, P("p -> q"))


def test_validity_examples():
    assert is_valid(M_D, P("p -> p")).status is Status.HOLDS
    v = is_valid(M_D, P("p -> (q -> p)"))
    assert v.status is Status.FAILS and v.countermodel == {"p": 2, "q": 1}
    assert is_valid(M_D, P("~p | p")).holds


def test_classical_model_examples():
    assert find_classical_model(P("p & q")) == {"p": 1, "q": 1}
    assert find_classical_model(P("p & ~p")) is None
    assert find_classical_model(P("p -> q")) == {"p": 0, "q": 0}


def test_countermodel_is_lexicographically_first():
    f = P("p -> (q -> p)")
    first = next(v for v in (dict(zip("pq", c)) for c in itertools.product((0, 1, 2), repeat=2))
                 if evaluate(M_D, v, f) not in M_D.designated)
    assert is_valid(M_D, f).countermodel == first


def test_verify_tables():
    entries = verify_tables()
    assert len(entries) == 39
    assert all(e.ok for e in entries)
    cell = {(e.connective, e.args): e.actual for e in entries}
    assert cell[("equiv", (2, 2))] == 2
    assert cell[("and", (1, 2))] == 1
    assert cell[("impl", (2, 0))] == 0


def test_matrix_json_round_trip(tmp_path):
    path = tmp_path / "md.json"
    path.write_text(json.dumps(M_D.to_json()))
    m = get_matrix(str(path))
    for text in ["p -> (q -> p)", "~p | p", "p <-> ~~p"]:
        assert is_valid(m, P(text)) == is_valid(M_D, P(text))


def test_matrix_validation():
    with pytest.raises(ValueError):
        LogicalMatrix("bad", (0, 1), frozenset({2}), {"neg": (1, 0)})
    with pytest.raises(ValueError):
        LogicalMatrix("bad", (0, 1), frozenset({1}), {"impl": ((1, 1),)})


def test_reduct_rejects_missing_connective():
    with pytest.raises(UnsupportedConnective):
        is_valid(M_D_PRIME, P("p | q"))


def test_variable_limit():
    f = Var("p")
    for i in range(1, 13):
        f = And(f, Var(f"p{i}"))
    with pytest.raises(TooManyVariables):
        is_valid(M_D, f)


def test_mp_preservation_exhaustive():
    for a, b in itertools.product(M_D.values, repeat=2):
        if a in M_D.designated and M_D.apply("impl", a, b) in M_D.designated:
            assert b in M_D.designated


def test_designated_conjunction_exhaustive():
    for a, b in itertools.product(M_D.values, repeat=2):
        both = a in M_D.designated and b in M_D.designated
        assert (M_D.apply("and", a, b) in M_D.designated) == both


def test_tables_give_two_only_on_all_two():
    for key in ("impl", "or", "and", "equiv"):
        for a, b in itertools.product(M_D.values, repeat=2):
            assert (M_D.apply(key, a, b) == 2) == (a == b == 2)
    assert [M_D.apply("neg", a) == 2 for a in M_D.values] == [False, False, True]


def test_classical_reduct_tables():
    for key in ("impl", "or", "and", "equiv"):
        for a, b in itertools.product((0, 1), repeat=2):
            assert M_D.apply(key, a, b) == M_2.apply(key, a, b)
    assert [M_D.apply("neg", a) for a in (0, 1)] == [1, 0]


def test_strict_inclusion_witness():
    f = P("p -> (q -> p)")
    assert is_valid(M_2, f).holds and not is_valid(M_D, f).holds


@given(prop_formulas(), prop_substitutions(), valuations())
def test_substitution_lemma(f, bindings, v):
    e = PropSubstitution(bindings)
    v2 = {n: evaluate(M_D, v, e(n)) for n in prop_vars(f)}
    assert evaluate(M_D, v, apply_prop_subst(e, f)) == evaluate(M_D, v2, f)


@given(prop_formulas(), prop_substitutions())
def test_validity_is_substitution_invariant(f, bindings):
    if is_valid(M_D, f).holds:
        assert is_valid(M_D, apply_prop_subst(PropSubstitution(bindings), f)).holds


@given(prop_formulas(), valuations())
def test_value_two_characterization(f, v):
    all_two = all(v[n] == 2 for n in prop_vars(f))
    assert (evaluate(M_D, v, f) == 2) == all_two


@given(prop_formulas(), prop_formulas(), valuations())
def test_mp_pointwise(a, b, v):
    if evaluate(M_D, v, a) in M_D.designated and evaluate(M_D, v, Impl(a, b)) in M_D.designated:
        assert evaluate(M_D, v, b) in M_D.designated


@given(prop_formulas())
def test_td_inside_classical(f):
    if is_valid(M_D, f).holds:
        assert is_valid(M_2, f).holds


@given(prop_formulas(), valuations(values=(0, 1)))
def test_classical_restriction_agrees(f, v):
    assert evaluate(M_D, v, f) == evaluate(M_2, v, f)


@given(_impl_neg_formulas())
def test_reduct_coherence(f):
    assert is_valid(M_D, f) == is_valid(M_D_PRIME, f)


@given(prop_formulas())
def test_find_model_is_a_model(f):
    v = find_model(M_D, f)
    if v is None:
        assert not any(evaluate(M_D, dict(zip(sorted(prop_vars(f)), c)), f) in M_D.designated
                       for c in itertools.product((0, 1, 2), repeat=len(prop_vars(f))))
    else:
        assert evaluate(M_D, v, f) in M_D.designated
