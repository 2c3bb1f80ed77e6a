"""Finite logical matrices, valuation semantics and validity sweeps.

A matrix is data: a value list, a designated subset and one table per
connective.  Validity is decided by sweeping every valuation at once with
numpy fancy indexing over the value positions.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .formula import Bin, Neg, Op, Var, var_key
from .prop import prop_vars

MAX_VARS = 12

_TABLE_KEYS = {Op.IMPL: "impl", Op.OR: "or", Op.AND: "and", Op.EQUIV: "equiv"}


class UnassignedVariable(KeyError):
    pass


class UnsupportedConnective(ValueError):
    pass


class TooManyVariables(ValueError):
    pass


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    countermodel: Optional[dict] = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def __bool__(self):
        return self.holds


@dataclass(frozen=True, eq=False)
class LogicalMatrix:
    name: str
    values: tuple
    designated: frozenset
    # binary tables: rows indexed by the left argument, in value order
    tables: Mapping[str, tuple] = field(repr=False)

    def __post_init__(self):
        if not self.designated or not set(self.designated) <= set(self.values):
            raise ValueError("designated values must be a non-empty subset of values")
        n = len(self.values)
        for key, tab in self.tables.items():
            if key == "neg":
                ok = len(tab) == n and all(v in self.values for v in tab)
            else:
                ok = len(tab) == n and all(
                    len(row) == n and all(v in self.values for v in row) for row in tab)
            if not ok:
                raise ValueError(f"table {key!r} is not total over the values")
        pos = {v: i for i, v in enumerate(self.values)}
        arrays = {}
        for key, tab in self.tables.items():
            if key == "neg":
                arrays[key] = np.array([pos[v] for v in tab], dtype=np.int8)
            else:
                arrays[key] = np.array([[pos[v] for v in row] for row in tab], dtype=np.int8)
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_arrays", arrays)
        object.__setattr__(self, "_desig_mask",
                           np.array([v in self.designated for v in self.values]))

    def connectives(self) -> set[str]:
        return set(self.tables)

    def apply(self, key: str, *args):
        if key not in self.tables:
            raise UnsupportedConnective(f"matrix {self.name} has no {key} table")
        if key == "neg":
            return self.tables["neg"][self._pos[args[0]]]
        a, b = args
        return self.tables[key][self._pos[a]][self._pos[b]]

    def to_json(self) -> dict:
        return {
            "values": list(self.values),
            "designated": [v for v in self.values if v in self.designated],
            "tables": {k: [list(r) for r in v] if k != "neg" else list(v)
                       for k, v in self.tables.items()},
        }

    @classmethod
    def from_json(cls, data, name: str = "custom") -> "LogicalMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        values = tuple(data["values"])
        tables = {}
        for k, v in data["tables"].items():
            if k not in ("impl", "or", "and", "equiv", "neg"):
                raise ValueError(f"unknown connective table {k!r}")
            tables[k] = tuple(v) if k == "neg" else tuple(tuple(r) for r in v)
        return cls(name, values, frozenset(data["designated"]), tables)

    @classmethod
    def load(cls, path) -> "LogicalMatrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), name=str(path))


# Tables of M_D; rows are the left argument 0, 1, 2.
MD_TABLES = {
    "impl": ((1, 1, 1), (0, 1, 0), (0, 1, 2)),
    "equiv": ((1, 0, 0), (0, 1, 0), (0, 0, 2)),
    "or": ((0, 1, 0), (1, 1, 1), (0, 1, 2)),
    "and": ((0, 0, 0), (0, 1, 1), (0, 1, 2)),
    "neg": (1, 0, 2),
}

M_D = LogicalMatrix("MD", (0, 1, 2), frozenset({1, 2}), MD_TABLES)
M_D_PRIME = LogicalMatrix(
    "MDp", (0, 1, 2), frozenset({1, 2}),
    {"impl": MD_TABLES["impl"], "neg": MD_TABLES["neg"]})
M_2 = LogicalMatrix(
    "M2", (0, 1), frozenset({1}),
    {
        "impl": ((1, 1), (0, 1)),
        "equiv": ((1, 0), (0, 1)),
        "or": ((0, 1), (1, 1)),
        "and": ((0, 0), (0, 1)),
        "neg": (1, 0),
    })

BUILTIN = {"MD": M_D, "MDp": M_D_PRIME, "M2": M_2}


def get_matrix(name_or_path: str) -> LogicalMatrix:
    if name_or_path in BUILTIN:
        return BUILTIN[name_or_path]
    return LogicalMatrix.load(name_or_path)


def evaluate(m: LogicalMatrix, v: Mapping[str, object], f):
    """Value of ``f`` under valuation ``v`` (bottom-up table application)."""
    if isinstance(f, Var):
        try:
            return v[f.name]
        except KeyError:
            raise UnassignedVariable(f.name) from None
    if isinstance(f, Neg):
        return m.apply("neg", evaluate(m, v, f.sub))
    if isinstance(f, Bin):
        return m.apply(_TABLE_KEYS[f.op], evaluate(m, v, f.left), evaluate(m, v, f.right))
    raise TypeError(f"not a propositional formula: {f!r}")


def designated(m: LogicalMatrix, v, f) -> bool:
    return evaluate(m, v, f) in m.designated


def _sweep(m: LogicalMatrix, f, names: list[str]):
    """Value positions of ``f`` under every valuation of ``names``.

    Valuations are laid out in lexicographic order: the first name varies
    slowest, values in declared order.
    """
    k = len(m.values)
    n = len(names)
    if n > MAX_VARS:
        raise TooManyVariables(f"{n} variables exceed the sweep limit of {MAX_VARS}")
    grids = {}
    if n:
        idx = np.indices((k,) * n, dtype=np.int8).reshape(n, -1)
        grids = {name: idx[i] for i, name in enumerate(names)}
    cache = {}

    def go(g):
        if g in cache:
            return cache[g]
        if isinstance(g, Var):
            r = grids[g.name]
        elif isinstance(g, Neg):
            if "neg" not in m._arrays:
                raise UnsupportedConnective(f"matrix {m.name} has no neg table")
            r = m._arrays["neg"][go(g.sub)]
        elif isinstance(g, Bin):
            key = _TABLE_KEYS[g.op]
            if key not in m._arrays:
                raise UnsupportedConnective(f"matrix {m.name} has no {key} table")
            r = m._arrays[key][go(g.left), go(g.right)]
        else:
            raise TypeError(f"not a propositional formula: {g!r}")
        cache[g] = r
        return r

    out = go(f)
    if n == 0:
        out = np.atleast_1d(out)
    return out


def _valuation_at(m: LogicalMatrix, names: list[str], flat: int) -> dict:
    k = len(m.values)
    pos = np.unravel_index(flat, (k,) * len(names)) if names else ()
    return {name: m.values[int(p)] for name, p in zip(names, pos)}


def is_valid(m: LogicalMatrix, f) -> Verdict:
    """Holds iff ``f`` is designated under every valuation; otherwise the
    lexicographically first countermodel is attached."""
    names = sorted(prop_vars(f), key=var_key)
    vals = _sweep(m, f, names)
    bad = ~m._desig_mask[vals]
    if not bad.any():
        return Verdict(Status.HOLDS)
    return Verdict(Status.FAILS, _valuation_at(m, names, int(np.argmax(bad))))


def valid_mask(m: LogicalMatrix, f, names: list[str]) -> np.ndarray:
    """Designation of ``f`` under each valuation of ``names`` (lex order)."""
    return m._desig_mask[_sweep(m, f, names)]


def value_table(m: LogicalMatrix, f, names: list[str]) -> np.ndarray:
    """Values (as positions into ``m.values``) of ``f`` under each valuation."""
    return _sweep(m, f, names)


def is_tautology(m: LogicalMatrix, f) -> bool:
    return is_valid(m, f).holds


def find_model(m: LogicalMatrix, f) -> Optional[dict]:
    """Lexicographically first valuation designating ``f``, if any."""
    names = sorted(prop_vars(f), key=var_key)
    good = valid_mask(m, f, names)
    if not good.any():
        return None
    return _valuation_at(m, names, int(np.argmax(good)))


def find_classical_model(f) -> Optional[dict]:
    return find_model(M_2, f)


def valuations(m: LogicalMatrix, names: list[str]):
    """All valuations of ``names`` in lexicographic order."""
    for combo in itertools.product(m.values, repeat=len(names)):
        yield dict(zip(names, combo))


# Transcription of the M_D tables for verify_tables, one entry per cell,
# kept separate from MD_TABLES so the check compares two copies.
_PRINTED = """
impl 0 0 1
impl 0 1 1
impl 0 2 1
impl 1 0 0
impl 1 1 1
impl 1 2 0
impl 2 0 0
impl 2 1 1
impl 2 2 2
equiv 0 0 1
equiv 0 1 0
equiv 0 2 0
equiv 1 0 0
equiv 1 1 1
equiv 1 2 0
equiv 2 0 0
equiv 2 1 0
equiv 2 2 2
or 0 0 0
or 0 1 1
or 0 2 0
or 1 0 1
or 1 1 1
or 1 2 1
or 2 0 0
or 2 1 1
or 2 2 2
and 0 0 0
and 0 1 0
and 0 2 0
and 1 0 0
and 1 1 1
and 1 2 1
and 2 0 0
and 2 1 1
and 2 2 2
neg 0 1
neg 1 0
neg 2 2
"""


@dataclass
class TableEntry:
    connective: str
    args: tuple
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def verify_tables(m: LogicalMatrix = M_D) -> list[TableEntry]:
    """Every cell of the built-in M_D tables against the transcription."""
    out = []
    for line in _PRINTED.split("\n"):
        if not line.strip():
            continue
        key, *nums = line.split()
        nums = [int(x) for x in nums]
        args, expected = tuple(nums[:-1]), nums[-1]
        out.append(TableEntry(key, args, expected, m.apply(key, *args)))
    return out
