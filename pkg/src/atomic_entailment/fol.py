"""First-order language: free variables, term substitution, closures,
the j-translation onto propositional skeletons, predicate substitution
and prenex form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .formula import (
    Bin,
    Exists,
    Forall,
    FuncApp,
    IndConst,
    IndVar,
    Neg,
    Op,
    Pred,
    QKind,
    Quant,
    Var,
)


class CaptureError(ValueError):
    """Substituting the term would bind one of its variables."""


def term_vars(t) -> frozenset[int]:
    if isinstance(t, IndVar):
        return frozenset({t.index})
    if isinstance(t, IndConst):
        return frozenset()
    return frozenset().union(*(term_vars(a) for a in t.args))


def free_vars(f) -> frozenset[int]:
    if isinstance(f, Pred):
        return frozenset().union(*(term_vars(a) for a in f.args))
    if isinstance(f, Neg):
        return free_vars(f.sub)
    if isinstance(f, Bin):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quant):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a first-order formula: {f!r}")


def used_indices(f) -> set[int]:
    """Every individual-variable index occurring anywhere, bound or free."""
    out: set[int] = set()

    def walk(g):
        if isinstance(g, Pred):
            for a in g.args:
                out.update(term_vars(a))
        elif isinstance(g, Neg):
            walk(g.sub)
        elif isinstance(g, Bin):
            walk(g.left)
            walk(g.right)
        else:
            out.add(g.var)
            walk(g.body)

    walk(f)
    return out


def pred_letters(f) -> frozenset[tuple[int, int]]:
    """Predicate letters as (index, arity) pairs."""
    return frozenset(p.letter for p in simple_formulas(f))


def simple_formulas(f) -> frozenset[Pred]:
    out: set[Pred] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Pred):
            out.add(g)
        elif isinstance(g, Neg):
            stack.append(g.sub)
        elif isinstance(g, Bin):
            stack += [g.left, g.right]
        elif isinstance(g, Quant):
            stack.append(g.body)
        else:
            raise TypeError(f"not a first-order formula: {g!r}")
    return frozenset(out)


def free_for(x: int, t, f) -> bool:
    """True iff substituting ``t`` for free ``x`` in ``f`` captures nothing."""
    tv = term_vars(t)

    def ok(g, bound: frozenset) -> bool:
        if isinstance(g, Pred):
            if bound & tv and any(x in term_vars(a) for a in g.args):
                return False
            return True
        if isinstance(g, Neg):
            return ok(g.sub, bound)
        if isinstance(g, Bin):
            return ok(g.left, bound) and ok(g.right, bound)
        if g.var == x:
            return True  # no free x below this binder
        return ok(g.body, bound | {g.var})

    return ok(f, frozenset())


def subst_in_term(t, x: int, s):
    if isinstance(t, IndVar):
        return s if t.index == x else t
    if isinstance(t, IndConst):
        return t
    return FuncApp(t.index, tuple(subst_in_term(a, x, s) for a in t.args))


def _subst(f, x: int, t):
    if isinstance(f, Pred):
        return Pred(f.index, tuple(subst_in_term(a, x, t) for a in f.args))
    if isinstance(f, Neg):
        return Neg(_subst(f.sub, x, t))
    if isinstance(f, Bin):
        return Bin(f.op, _subst(f.left, x, t), _subst(f.right, x, t))
    if f.var == x:
        return f
    return Quant(f.kind, f.var, _subst(f.body, x, t))


def subst_term(f, x: int, t):
    """Replace every free occurrence of ``x`` in ``f`` by the term ``t``."""
    if not free_for(x, t, f):
        raise CaptureError(f"x{x} is not free for {t} in {f}")
    return _subst(f, x, t)


def universal_closure(f):
    for v in sorted(free_vars(f), reverse=True):
        f = Forall(v, f)
    return f


def existential_closure(f):
    for v in sorted(free_vars(f), reverse=True):
        f = Exists(v, f)
    return f


def star_fol(f):
    """Existential closure of the negation (plain negation when closed)."""
    return existential_closure(Neg(f))


def j_translate(f):
    """Erase quantifiers; ``P_k^n(...)`` becomes the propositional ``p_k``."""
    if isinstance(f, Pred):
        return Var(f"p{f.index}")
    if isinstance(f, Neg):
        return Neg(j_translate(f.sub))
    if isinstance(f, Bin):
        return Bin(f.op, j_translate(f.left), j_translate(f.right))
    if isinstance(f, Quant):
        return j_translate(f.body)
    raise TypeError(f"not a first-order formula: {f!r}")


@dataclass(frozen=True)
class FolSubstitution:
    """Finite map on simple formulas (``Pred`` nodes); identity elsewhere."""

    bindings: Mapping[Pred, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bindings", dict(self.bindings))

    def __call__(self, p: Pred):
        return self.bindings.get(p, p)

    def __hash__(self):
        return hash(frozenset(self.bindings.items()))

    def __eq__(self, other):
        if not isinstance(other, FolSubstitution):
            return NotImplemented
        return self.bindings == other.bindings

    def to_json(self) -> dict:
        return {str(k): str(v) for k, v in sorted(self.bindings.items(), key=lambda kv: str(kv[0]))}

    def __str__(self):
        return "{" + ", ".join(f"{k} ↦ {v}" for k, v in self.to_json().items()) + "}"


def apply_fol_subst(e: FolSubstitution, f):
    """Homomorphic extension; commutes with both quantifiers as written."""
    if isinstance(f, Pred):
        return e(f)
    if isinstance(f, Neg):
        return Neg(apply_fol_subst(e, f.sub))
    if isinstance(f, Bin):
        return Bin(f.op, apply_fol_subst(e, f.left), apply_fol_subst(e, f.right))
    if isinstance(f, Quant):
        return Quant(f.kind, f.var, apply_fol_subst(e, f.body))
    raise TypeError(f"not a first-order formula: {f!r}")


# -- prenex form ---------------------------------------------------------------

_FLIP = {QKind.FORALL: QKind.EXISTS, QKind.EXISTS: QKind.FORALL}


def _rename_qf(m, old: int, new: int):
    # m is quantifier-free, so plain replacement cannot capture
    return _subst(m, old, IndVar(new))


def prenex(f):
    """Pull every quantifier into a leading prefix.

    A quantifier hoisted across a binary connective gets a fresh variable
    (numbered above every index used in ``f``); quantifiers that only move
    past negations or sit at the front keep their names.  An equivalence
    with a quantified side is first split into two implications.
    """
    counter = [max(used_indices(f), default=0)]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    def hoist(prefix, matrix, flip):
        # rename innermost first: after the innermost binder of v takes its
        # free occurrences, an outer binder of v is vacuous
        out = []
        for kind, v in reversed(prefix):
            w = fresh()
            matrix = _rename_qf(matrix, v, w)
            out.append((_FLIP[kind] if flip else kind, w))
        out.reverse()
        return out, matrix

    def go(g):
        if isinstance(g, Pred):
            return [], g
        if isinstance(g, Neg):
            pre, m = go(g.sub)
            return [(_FLIP[k], v) for k, v in pre], Neg(m)
        if isinstance(g, Quant):
            pre, m = go(g.body)
            return [(g.kind, g.var)] + pre, m
        if g.op is Op.EQUIV and (_has_quant(g.left) or _has_quant(g.right)):
            a, b = g.left, g.right
            return go(Bin(Op.AND, Bin(Op.IMPL, a, b), Bin(Op.IMPL, b, a)))
        lpre, lm = go(g.left)
        rpre, rm = go(g.right)
        lpre, lm = hoist(lpre, lm, flip=g.op is Op.IMPL)
        rpre, rm = hoist(rpre, rm, flip=False)
        return lpre + rpre, Bin(g.op, lm, rm)

    pre, m = go(f)
    for kind, v in reversed(pre):
        m = Quant(kind, v, m)
    return m


def _has_quant(f) -> bool:
    if isinstance(f, Quant):
        return True
    if isinstance(f, Pred):
        return False
    if isinstance(f, Neg):
        return _has_quant(f.sub)
    return _has_quant(f.left) or _has_quant(f.right)


def is_prenex(f) -> bool:
    while isinstance(f, Quant):
        f = f.body
    return not _has_quant(f)


def alpha_equivalent(f, g) -> bool:
    """Equality up to consistent renaming of bound variables."""

    def term_eq(s, t, env_f, env_g):
        if isinstance(s, IndVar) and isinstance(t, IndVar):
            bs, bt = env_f.get(s.index), env_g.get(t.index)
            if bs is None and bt is None:
                return s.index == t.index
            return bs == bt
        if isinstance(s, IndConst) and isinstance(t, IndConst):
            return s.index == t.index
        if isinstance(s, FuncApp) and isinstance(t, FuncApp):
            return (s.index == t.index and len(s.args) == len(t.args)
                    and all(term_eq(a, b, env_f, env_g) for a, b in zip(s.args, t.args)))
        return False

    def eq(a, b, env_a, env_b, level):
        if type(a) is not type(b):
            return False
        if isinstance(a, Pred):
            return (a.letter == b.letter
                    and all(term_eq(x, y, env_a, env_b) for x, y in zip(a.args, b.args)))
        if isinstance(a, Neg):
            return eq(a.sub, b.sub, env_a, env_b, level)
        if isinstance(a, Bin):
            return (a.op is b.op and eq(a.left, b.left, env_a, env_b, level)
                    and eq(a.right, b.right, env_a, env_b, level))
        if isinstance(a, Quant):
            return a.kind is b.kind and eq(
                a.body, b.body, {**env_a, a.var: level}, {**env_b, b.var: level}, level + 1)
        return a == b

    return eq(f, g, {}, {}, 0)
