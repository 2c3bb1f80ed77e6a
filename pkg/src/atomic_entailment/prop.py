"""Propositional language: variables, substitution endomorphisms, stars."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .formula import Bin, Neg, Var, var_key


def prop_vars(f) -> frozenset[str]:
    """Names of the propositional variables occurring in ``f``."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, Neg):
            stack.append(g.sub)
        elif isinstance(g, Bin):
            stack.append(g.left)
            stack.append(g.right)
        else:
            raise TypeError(f"not a propositional formula: {g!r}")
    return frozenset(out)


def sorted_vars(f) -> list[str]:
    return sorted(prop_vars(f), key=var_key)


@dataclass(frozen=True)
class PropSubstitution:
    """Finite map from variable names to formulas; identity elsewhere."""

    bindings: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        # store a private copy so the substitution stays immutable
        object.__setattr__(self, "bindings", dict(self.bindings))

    def __call__(self, name: str):
        return self.bindings.get(name, Var(name))

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.bindings.items())))

    def __eq__(self, other):
        if not isinstance(other, PropSubstitution):
            return NotImplemented
        return self.normalized() == other.normalized()

    def normalized(self) -> dict:
        """Bindings with identity entries dropped."""
        return {k: v for k, v in self.bindings.items() if v != Var(k)}

    def to_json(self) -> dict:
        return {k: str(self.bindings[k]) for k in sorted(self.bindings, key=var_key)}

    def __str__(self):
        inner = ", ".join(f"{k} ↦ {v}" for k, v in self.to_json().items())
        return "{" + inner + "}"


IDENTITY = PropSubstitution({})


def apply_prop_subst(e: PropSubstitution, f):
    """Homomorphic extension of ``e`` applied to ``f``."""
    if isinstance(f, Var):
        return e(f.name)
    if isinstance(f, Neg):
        return Neg(apply_prop_subst(e, f.sub))
    if isinstance(f, Bin):
        return Bin(f.op, apply_prop_subst(e, f.left), apply_prop_subst(e, f.right))
    raise TypeError(f"not a propositional formula: {f!r}")


def compose(e2: PropSubstitution, e1: PropSubstitution) -> PropSubstitution:
    """The substitution ``v -> e2(e1(v))``."""
    out = {k: apply_prop_subst(e2, v) for k, v in e1.bindings.items()}
    for k, v in e2.bindings.items():
        out.setdefault(k, v)
    return PropSubstitution(out)


def star_prop(f):
    return Neg(f)
