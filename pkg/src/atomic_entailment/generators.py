"""Deterministic formula enumeration and seeded random formulas."""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .formula import Bin, IndVar, Neg, Op, Pred, QKind, Quant, Var, height

BINARY_OPS = (Op.IMPL, Op.OR, Op.AND, Op.EQUIV)


def enumerate_formulas(atoms: Sequence, max_height: int, quantify: Iterable[int] = ()) -> list:
    """Every formula over ``atoms`` of height at most ``max_height``.

    Order: by height; within a height, negations, then quantified forms
    (all before ex, per variable in ``quantify``), then binaries by
    connective with operands in enumeration order.  Each formula appears
    once.
    """
    quantify = tuple(quantify)
    every = list(atoms)
    top = list(atoms)
    for h in range(2, max_height + 1):
        new = [Neg(g) for g in top]
        for kind in (QKind.FORALL, QKind.EXISTS):
            for v in quantify:
                new += [Quant(kind, v, g) for g in top]
        for op in BINARY_OPS:
            for a in every:
                for b in every:
                    if height(a) == h - 1 or height(b) == h - 1:
                        new.append(Bin(op, a, b))
        every += new
        top = new
    return every


def prop_atoms(names: Sequence[str]) -> list:
    return [Var(n) for n in names]


def unary_atoms(count: int, var: int = 1) -> list:
    return [Pred(i, (IndVar(var),)) for i in range(1, count + 1)]


def random_prop(rng: random.Random, names: Sequence[str], max_height: int):
    """A random formula; leaves are more likely as the height budget shrinks."""
    if max_height <= 1 or rng.random() < 1 / max_height:
        return Var(rng.choice(list(names)))
    if rng.random() < 0.25:
        return Neg(random_prop(rng, names, max_height - 1))
    op = rng.choice(BINARY_OPS)
    return Bin(op, random_prop(rng, names, max_height - 1),
               random_prop(rng, names, max_height - 1))


def random_fol(rng: random.Random, letters: int, max_height: int, ivars: Sequence[int] = (1, 2)):
    """A random first-order formula over unary letters P1..Pn."""
    if max_height <= 1 or rng.random() < 1 / max_height:
        return Pred(rng.randint(1, letters), (IndVar(rng.choice(list(ivars))),))
    r = rng.random()
    if r < 0.2:
        return Neg(random_fol(rng, letters, max_height - 1, ivars))
    if r < 0.4:
        kind = rng.choice((QKind.FORALL, QKind.EXISTS))
        return Quant(kind, rng.choice(list(ivars)), random_fol(rng, letters, max_height - 1, ivars))
    return Bin(rng.choice(BINARY_OPS), random_fol(rng, letters, max_height - 1, ivars),
               random_fol(rng, letters, max_height - 1, ivars))


def enumerate_by_size(atoms: Sequence, max_size: int, quantify: Iterable[int] = ()) -> list:
    """Every formula over ``atoms`` with at most ``max_size`` nodes, smallest
    first; within a size, negations, quantified forms, then binaries."""
    quantify = tuple(quantify)
    by_size: dict[int, list] = {1: list(atoms)}
    for n in range(2, max_size + 1):
        new = [Neg(g) for g in by_size[n - 1]]
        for kind in (QKind.FORALL, QKind.EXISTS):
            for v in quantify:
                new += [Quant(kind, v, g) for g in by_size[n - 1]]
        for op in BINARY_OPS:
            for k in range(1, n - 1):
                new += [Bin(op, a, b) for a in by_size[k] for b in by_size[n - 1 - k]]
        by_size[n] = new
    return [f for n in range(1, max_size + 1) for f in by_size[n]]
