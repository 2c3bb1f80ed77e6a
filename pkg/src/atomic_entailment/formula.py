"""AST node types shared by the propositional and first-order languages.

Propositional formulas use ``Var``, ``Neg`` and ``Bin``.  First-order
formulas use ``Pred``, ``Neg``, ``Bin`` and ``Quant`` over terms built from
``IndVar``, ``IndConst`` and ``FuncApp``.  All nodes are frozen dataclasses,
so equality is structural and nodes can be used as dict keys.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union


class Op(enum.Enum):
    IMPL = "->"
    OR = "|"
    AND = "&"
    EQUIV = "<->"


# binding strength, higher binds tighter
PRECEDENCE = {Op.EQUIV: 1, Op.IMPL: 2, Op.OR: 3, Op.AND: 4}
RIGHT_ASSOC = {Op.IMPL}


class QKind(enum.Enum):
    FORALL = "all"
    EXISTS = "ex"


VAR_RE = re.compile(r"[pqst][0-9]*\Z")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not VAR_RE.match(self.name):
            raise ValueError(f"bad propositional variable {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    sub: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Bin:
    op: Op
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class IndVar:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class IndConst:
    index: int

    def __str__(self):
        return f"a{self.index}"


@dataclass(frozen=True)
class FuncApp:
    index: int
    args: tuple

    def __post_init__(self):
        if len(self.args) < 1:
            raise ValueError("function application needs at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        return f"f{self.index}(" + ", ".join(map(str, self.args)) + ")"


Term = Union[IndVar, IndConst, FuncApp]


@dataclass(frozen=True)
class Pred:
    """Simple formula ``P_index(args)``; identity is the (index, arity) pair."""

    index: int
    args: tuple

    def __post_init__(self):
        if len(self.args) < 1:
            raise ValueError("predicate application needs at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def letter(self) -> tuple[int, int]:
        return (self.index, len(self.args))

    def __str__(self):
        return f"P{self.index}(" + ", ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Quant:
    kind: QKind
    var: int
    body: "Formula"

    def __str__(self):
        return to_text(self)


Formula = Union[Var, Pred, Neg, Bin, Quant]


def Impl(a, b):
    return Bin(Op.IMPL, a, b)


def Or(a, b):
    return Bin(Op.OR, a, b)


def And(a, b):
    return Bin(Op.AND, a, b)


def Equiv(a, b):
    return Bin(Op.EQUIV, a, b)


def Forall(var: int, body):
    return Quant(QKind.FORALL, var, body)


def Exists(var: int, body):
    return Quant(QKind.EXISTS, var, body)


# -- printing ----------------------------------------------------------------

def _prec(f) -> int:
    if isinstance(f, Bin):
        return PRECEDENCE[f.op]
    return 10


def _text(f, tail: bool) -> str:
    if isinstance(f, (Var, Pred)):
        return str(f)
    if isinstance(f, Neg):
        sub = f.sub
        if isinstance(sub, Bin):
            return "~(" + _text(sub, True) + ")"
        return "~" + _text(sub, tail)
    if isinstance(f, Quant):
        s = f"{f.kind.value} x{f.var} . " + _text(f.body, True)
        return s if tail else "(" + s + ")"
    if isinstance(f, Bin):
        p = PRECEDENCE[f.op]
        lp, rp = _prec(f.left), _prec(f.right)
        left_wrap = lp < p or (lp == p and f.op in RIGHT_ASSOC)
        right_wrap = rp < p or (rp == p and f.op not in RIGHT_ASSOC)
        # operands left of a connective are never in tail position, so a
        # trailing quantifier inside them gets its own parentheses
        left = "(" + _text(f.left, True) + ")" if left_wrap else _text(f.left, False)
        if right_wrap:
            right = "(" + _text(f.right, True) + ")"
        else:
            right = _text(f.right, tail)
        return f"{left} {f.op.value} {right}"
    raise TypeError(f"not a formula: {f!r}")


def to_text(f) -> str:
    """Render with the minimal parentheses the grammar needs."""
    return _text(f, True)


def depth(f) -> int:
    if isinstance(f, (Var, Pred)):
        return 0
    if isinstance(f, Neg):
        return 1 + depth(f.sub)
    if isinstance(f, Quant):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


def height(f) -> int:
    """Depth counting atoms as 1; corpus and pool bounds use this measure."""
    return depth(f) + 1


def size(f) -> int:
    if isinstance(f, (Var, Pred)):
        return 1
    if isinstance(f, Neg):
        return 1 + size(f.sub)
    if isinstance(f, Quant):
        return 1 + size(f.body)
    return 1 + size(f.left) + size(f.right)


def var_key(name: str):
    """Sort key for propositional variables: letter, then numeric index."""
    suffix = name[1:]
    return (name[0], -1 if suffix == "" else int(suffix), name)
