import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from atomic_entailment.fol import (
    CaptureError, FolSubstitution, alpha_equivalent, apply_fol_subst, existential_closure,
    free_for, free_vars, is_prenex, j_translate, prenex, star_fol, subst_term, term_vars,
    universal_closure,
)
from atomic_entailment.formula import (
    And, Bin, FuncApp, Impl, IndConst, IndVar, Neg, Op, Pred, Quant, QKind, Var,
    to_text,
)
from atomic_entailment.matrix import M_D, evaluate
from atomic_entailment.parsing import ParseError, parse_fol
from atomic_entailment.prover import Budget, classical_validity

from conftest import fol_formulas, terms, unary_fol_formulas

F = parse_fol
x1, x2, a1 = IndVar(1), IndVar(2), IndConst(1)


def _has_quantified_equiv(f):
    if isinstance(f, Quant):
        return _has_quantified_equiv(f.body)
    if isinstance(f, Neg):
        return _has_quantified_equiv(f.sub)
    if isinstance(f, Bin):
        if f.op is Op.EQUIV and (_quantified(f.left) or _quantified(f.right)):
            return True
        return _has_quantified_equiv(f.left) or _has_quantified_equiv(f.right)
    return False


def _quantified(f):
    if isinstance(f, Quant):
        return True
    if isinstance(f, Neg):
        return _quantified(f.sub)
    if isinstance(f, Bin):
        return _quantified(f.left) or _quantified(f.right)
    return False


def test_parse_examples():
    assert F("all x1 . P1(x1)") == Quant(QKind.FORALL, 1, Pred(1, (x1,)))
    f = F("P1(x1) -> P1(x1,x2)")
    assert f.left.arity == 1 and f.right.arity == 2
    assert f.left.index == f.right.index == 1
    assert F("ex x2 . P2(f1(x2), a1)") == Quant(
        QKind.EXISTS, 2, Pred(2, (FuncApp(1, (x2,)), a1)))


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        F("all x1 P1(x1)")
    assert info.value.offset == 7


@given(fol_formulas(with_terms=True))
def test_round_trip(f):
    assert F(to_text(f)) == f


@pytest.mark.parametrize("text, fv", [
    ("all x1 . P1(x1,x2)", {2}),
    ("P1(x1) & P2(x3)", {1, 3}),
    ("all x1 . ex x2 . P1(x1,x2)", set()),
])
def test_free_vars(text, fv):
    assert free_vars(F(text)) == fv


def test_free_for():
    assert free_for(1, a1, F("all x1 . all x2 . P1(x1, x2)"))
    assert not free_for(1, FuncApp(1, (x2,)), F("all x2 . P1(x1)"))
    assert free_for(1, FuncApp(1, (x2,)), F("all x3 . P1(x1)"))


def test_subst_term_examples():
    assert subst_term(F("P1(x1) -> ex x1 . P1(x1)"), 1, a1) == F("P1(a1) -> ex x1 . P1(x1)")
    assert subst_term(F("P1(x1)"), 1, x1) == F("P1(x1)")
    with pytest.raises(CaptureError):
        subst_term(F("all x2 . P1(x1)"), 1, FuncApp(1, (x2,)))


@given(fol_formulas(with_terms=True), st.integers(1, 3), terms())
def test_free_vars_after_subst(f, x, t):
    if x not in free_vars(f) or not free_for(x, t, f):
        return
    assert free_vars(subst_term(f, x, t)) == (free_vars(f) - {x}) | term_vars(t)


def test_closures():
    assert universal_closure(F("P1(x1,x3)")) == F("all x1 . all x3 . P1(x1,x3)")
    closed = F("all x1 . P1(x1)")
    assert universal_closure(closed) == closed
    assert universal_closure(F("P1(x2)")) == F("all x2 . P1(x2)")
    assert existential_closure(F("P1(x2,x1)")) == F("ex x1 . ex x2 . P1(x2,x1)")


def test_star():
    assert star_fol(F("P1(x1) | P2(x2)")) == F("ex x1 . ex x2 . ~(P1(x1) | P2(x2))")
    assert star_fol(F("all x1 . P1(x1)")) == F("~ all x1 . P1(x1)")
    assert star_fol(F("P1(a1)")) == F("~P1(a1)")


@given(fol_formulas())
def test_closures_are_closed(f):
    assert free_vars(universal_closure(f)) == set()
    assert free_vars(star_fol(f)) == set()


def test_j_examples():
    assert j_translate(F("all x1 . P1(x1)")) == Var("p1")
    assert j_translate(F("P1(x1) -> P1(x1,x2)")) == Impl(Var("p1"), Var("p1"))
    assert j_translate(F("~ ex x1 . P2(x1)")) == Neg(Var("p2"))


@given(fol_formulas(with_terms=True), st.sampled_from(list(QKind)), st.integers(1, 3))
def test_j_erases_quantifiers(f, kind, v):
    assert j_translate(Quant(kind, v, f)) == j_translate(f)


def test_fol_subst_examples():
    e = FolSubstitution({Pred(1, (x1,)): And(Pred(2, (x1,)), Pred(2, (x1,)))})
    assert apply_fol_subst(e, F("P1(x1) -> P1(x1)")) == F(
        "(P2(x1) & P2(x1)) -> (P2(x1) & P2(x1))")
    f = F("all x1 . P1(x1) | P2(a1)")
    assert apply_fol_subst(FolSubstitution({}), f) == f
    e = FolSubstitution({Pred(1, (x1,)): Pred(3, (x2,))})
    assert apply_fol_subst(e, F("all x1 . P1(x1)")) == F("all x1 . P3(x2)")


@given(fol_formulas(), st.sampled_from(list(QKind)), st.integers(1, 3))
def test_fol_subst_commutes_with_quantifiers(f, kind, v):
    e = FolSubstitution({Pred(1, (x1,)): Neg(Pred(2, (x2,)))})
    assert apply_fol_subst(e, Quant(kind, v, f)) == Quant(kind, v, apply_fol_subst(e, f))


def test_prenex_examples():
    assert prenex(F("~ all x1 . P1(x1)")) == F("ex x1 . ~P1(x1)")
    assert prenex(F("(all x1 . P1(x1)) -> P2(x2)")) == F("ex x3 . (P1(x3) -> P2(x2))")
    f = F("all x1 . P1(x1)")
    assert alpha_equivalent(prenex(f), f)


@given(fol_formulas(with_terms=True))
def test_prenex_shape(f):
    g = prenex(f)
    assert is_prenex(g)
    assert free_vars(g) == free_vars(f)


@given(fol_formulas(with_terms=True))
def test_j_commutes_with_prenex(f):
    jf, jg = j_translate(f), j_translate(prenex(f))
    if not _has_quantified_equiv(f):
        assert jg == jf
    # a quantified side of <-> is expanded into two implications, which keeps
    # the value of the skeleton but not its shape
    names = sorted({v.name for v in _vars(jf)})
    for v in _all_valuations(names):
        assert evaluate(M_D, v, jg) == evaluate(M_D, v, jf)


def _vars(f):
    if isinstance(f, Var):
        return {f}
    if isinstance(f, Neg):
        return _vars(f.sub)
    return _vars(f.left) | _vars(f.right)


def _all_valuations(names):
    import itertools
    for combo in itertools.product((0, 1, 2), repeat=len(names)):
        yield dict(zip(names, combo))


@settings(max_examples=40)
@given(unary_fol_formulas(max_leaves=4))
def test_prenex_is_classically_equivalent(f):
    g = prenex(f)
    both = And(Impl(f, g), Impl(g, f))
    v = classical_validity(universal_closure(both), Budget(max_domain=2, max_steps=3000))
    assert not v.invalid
