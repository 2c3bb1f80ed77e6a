import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from atomic_entailment.formula import (
    Bin, FuncApp, IndConst, IndVar, Neg, Op, Pred, QKind, Quant, Var,
)

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

OPS = list(Op)
NAMES = ["p", "q", "s"]


def prop_formulas(names=NAMES, max_leaves=8):
    leaves = st.sampled_from(names).map(Var)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Neg),
            st.builds(Bin, st.sampled_from(OPS), sub, sub)),
        max_leaves=max_leaves)


def valuations(names=NAMES, values=(0, 1, 2)):
    return st.fixed_dictionaries({n: st.sampled_from(values) for n in names})


def prop_substitutions(names=NAMES, max_leaves=4):
    return st.fixed_dictionaries({n: prop_formulas(names, max_leaves) for n in names})


def terms(max_leaves=3):
    leaves = st.one_of(
        st.integers(1, 3).map(IndVar),
        st.integers(1, 2).map(IndConst))
    return st.recursive(
        leaves,
        lambda sub: st.builds(FuncApp, st.integers(1, 2),
                              st.lists(sub, min_size=1, max_size=2).map(tuple)),
        max_leaves=max_leaves)


def simple_atoms(with_terms=False):
    args = terms() if with_terms else st.integers(1, 3).map(IndVar)
    return st.builds(Pred, st.integers(1, 3), st.lists(args, min_size=1, max_size=2).map(tuple))


def fol_formulas(max_leaves=6, with_terms=False):
    return st.recursive(
        simple_atoms(with_terms),
        lambda sub: st.one_of(
            sub.map(Neg),
            st.builds(Bin, st.sampled_from(OPS), sub, sub),
            st.builds(Quant, st.sampled_from(list(QKind)), st.integers(1, 3), sub)),
        max_leaves=max_leaves)


def unary_fol_formulas(max_leaves=5):
    """Unary letters over x1, x2 only: small enough for the prover."""
    atom = st.builds(lambda i, v: Pred(i, (IndVar(v),)), st.integers(1, 2), st.integers(1, 2))
    return st.recursive(
        atom,
        lambda sub: st.one_of(
            sub.map(Neg),
            st.builds(Bin, st.sampled_from(OPS), sub, sub),
            st.builds(Quant, st.sampled_from(list(QKind)), st.integers(1, 2), sub)),
        max_leaves=max_leaves)


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
