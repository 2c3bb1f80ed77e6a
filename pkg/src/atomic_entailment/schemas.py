"""The embedded schema table for the L_D membership suite.

Propositional schemata use the metavariables p, q, s, t for alpha, beta,
gamma, delta; instantiation maps them to P1(x1), P2(x1), P3(x1), P4(x1).
Quantifier schemata are stored as concrete first-order instances whose
bodies satisfy each schema's free-variable side condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fol import star_fol, universal_closure
from .formula import Bin, Impl, IndVar, Neg, Pred, Var
from .parsing import parse_fol, parse_prop

PROP_TEMPLATES = """
1 p -> p
2 p -> ((p -> q) -> q)
3 (p -> q) -> ((q -> s) -> (p -> s))
4 (p -> (q -> s)) -> (q -> (p -> s))
5 (p -> (p -> q)) -> (p -> q)
6 (((q -> s) -> (p -> s)) -> t) -> ((p -> q) -> t)
7 (p -> (q -> s)) -> ((t -> q) -> (p -> (t -> s)))
8 (p -> (q -> s)) -> ((p -> q) -> (p -> s))
9 (q -> s) -> ((p -> q) -> (p -> s))
10 (q -> s) -> ((p -> q) -> ((s -> t) -> (p -> t)))
11 ~~p -> p
12 p -> ~~p
13 (~p -> p) -> p
14 (p -> ~p) -> ~p
15 (~~p -> ~~q) -> (p -> q)
16 (p -> ~q) -> (~~p -> ~q)
17 (p -> q) -> (p -> ~~q)
18 (p -> ~q) -> (q -> ~p)
19 (~q -> ~p) -> (~q -> p)
20 (~p -> q) -> (~q -> p)
21 p -> ~(p -> ~p)
22 (~p -> ~p) -> p
23 (p -> q) -> (~q -> ~p)
24 (p -> q) -> ((p -> ~q) -> ~p)
25 (~p -> q) -> ((~q -> ~p) -> ~~q)
26 (~p -> q) -> ((p -> q) -> q)
27 p -> (q -> ~(p -> ~q))
28 p <-> p
29 p <-> ~~p
30 ~~p <-> p
31 (p -> q) -> ((q <-> s) -> (p -> s))
32 (p <-> q) -> ((q <-> s) -> (p -> s))
33 (q -> p) -> ((q <-> s) -> (s -> p))
34 (p <-> q) -> (p -> q)
35 (p <-> q) -> (q -> p)
36 (p -> q) -> ((q -> p) -> (p <-> q))
37 (p <-> q) -> ((p -> s) <-> (q -> s))
38 (p <-> q) -> ((s <-> p) <-> (s <-> q))
39 (p <-> q) -> (q <-> p)
40 p -> (p | q)
41 p -> (q | p)
42 (p | q) -> ((p -> q) -> q)
43 (p -> q) -> ((p | s) -> (s | q))
44 (p -> q) -> ((p | s) -> (q | s))
45 (p -> q) -> ((s | p) -> (s | q))
46 (p | (q | s)) -> ((p | q) | s)
47 (p | (q | s)) -> (p | (s | q))
48 (p | (s | q)) -> ((p | q) | s)
49 (p | (q | s)) -> (q | (p | s))
50 (s | (p | q)) -> (q | (s | p))
51 (q | (s | p)) -> (q | (p | s))
52 ((q | p) | s) -> (q | (p | s))
53 (p -> q) | (q -> p)
54 (p -> q) -> ((s -> q) -> ((p | s) -> q))
55 ~p | p
56 p | ~p
57 (p | q) -> (~q -> p)
58 (p | q) -> (~p -> q)
59 (~p | q) -> (p -> q)
60 p -> (p & p)
61 (p & q) -> (q & p)
62 p -> (q -> (p & q))
63 ((p & q) -> (q -> s)) -> ((p & q) -> s)
64 (p -> (q -> s)) -> ((p & q) -> s)
65 ((p & q) -> s) -> (p -> (q -> s))
66 ((p -> q) & p) -> q
67 ((p & s) -> q) -> ((p & s) -> (q & s))
68 (p -> q) -> ((s & p) -> (s & q))
69 (p -> q) -> ((p -> s) -> (p -> (q & s)))
70 ((p -> s) & (q -> t)) -> ((p & q) -> (s & t))
71 ((p -> s) & (q -> t)) -> ((q & p) -> (t & s))
72 ((p -> q) & (p -> s)) -> (p -> (q & s))
73 ((p & q) & s) -> (((p & q) & s) & q)
74 (((p & q) & s) & q) -> ((p & s) & q)
75 ~(p & ~p)
76 ~(~p & p)
77 ~(p -> q) -> (p & ~q)
78 (~(p & ~q) & p) -> q
79 (p & ~(p & ~q)) -> q
80 (p & q) -> (~~p & ~~q)
81 (p & q) -> ~(p -> ~q)
82 (p & ~~q) -> (p & q)
83 ~(p -> ~q) -> (p & q)
84 (p -> ~~q) -> ~(p & ~q)
85 (p -> ~q) -> ~(p & q)
86 (p -> q) <-> (~q -> ~p)
87 (p <-> q) <-> (~p <-> ~q)
88 (p & q) <-> (q & p)
89 (p & (q & s)) <-> ((p & q) & s)
90 ((p <-> q) & (s <-> t)) -> ((p -> s) <-> (q -> t))
91 (p <-> q) -> ((q -> p) & (p -> q))
92 (p <-> q) -> ((p -> q) & (q -> p))
93 (p & p) <-> p
94 (p <-> q) -> ((p & s) <-> (q & s))
95 (p <-> q) -> ((s & p) <-> (s & q))
96 ((p <-> q) & (s <-> t)) -> ((p <-> s) <-> (q <-> t))
97 ((p -> s) & (s -> p)) -> (p <-> s)
98 ((p <-> q) & (s <-> t)) -> ((p & s) <-> (q & t))
99 ((p <-> q) & (q <-> s)) -> ((p -> s) & (s -> p))
100 (p | p) <-> p
101 (p | q) <-> (q | p)
102 (p <-> q) -> ((s | p) <-> (s | q))
103 (p | q) <-> (~p -> q)
104 (p -> q) <-> (~p | q)
105 ((p <-> q) & (s <-> t)) -> ((p | s) <-> (q | t))
106 ~(p & q) <-> (p -> ~q)
107 ~(p & q) <-> (q -> ~p)
108 (p | q) -> ~(~p & ~q)
109 (~p & ~q) -> ~(p | q)
110 ~(~p | ~q) -> (p & q)
111 ~(p & q) -> (~p | ~q)
112 ~(p | q) -> (~p & ~q)
113 ~(~p & ~q) -> (p | q)
114 (p & q) -> ~(~p | ~q)
115 (~p | ~q) -> ~(p & q)
116 (p | q) <-> ~(~p & ~q)
117 (p & q) <-> ~(~p | ~q)
118 (p & q) <-> ~(p -> ~q)
119 (p -> q) <-> ~(p & ~q)
"""

# metavariable -> instance, per schema; default applies elsewhere
DEFAULT_META = {
    "p": "P1(x1)",
    "q": "P2(x1)",
    "s": "P3(x1)",
    "t": "P4(x1)",
}
# beta must not add letters beyond alpha's for the disjunction-introduction
# schemata, so it is instantiated with a formula over alpha's letter
META_OVERRIDES = {
    40: {"q": "P1(x1) -> P1(x1)"},
    41: {"q": "P1(x1) -> P1(x1)"},
}

QUANT_LABELS = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii",
    "xiii", "xiv", "xv", "xvi", "xvii", "xviii", "xix", "xx", "xxi", "xxii",
    "xxiii", "xxiv", "xxv", "xxvi", "xxvii", "xxviii", "xxix", "xxx", "xxxi",
    "xxxii", "xxxiii", "xxxiv",
]

# k = 1 and s = 2 throughout.  Bodies: phi = P1(x1), psi = P2(x1) unless a
# side condition needs x1 absent from one of them.
_QUANT_TEXT = {
    "i": ["(all x1 . P1(x1)) -> P1(x1)"],
    "ii": ["(all x1 . P1(x1)) -> ex x1 . P1(x1)"],
    "iii": ["(all x1 . P1(x2)) <-> P1(x2)"],
    "iv": ["(ex x1 . P1(x2)) <-> P1(x2)"],
    "v": ["(all x1 . P1(x2) -> P2(x1)) <-> (P1(x2) -> all x1 . P2(x1))"],
    "vi": ["(ex x1 . P1(x2) -> P2(x1)) <-> (P1(x2) -> ex x1 . P2(x1))"],
    "vii": ["(all x1 . P1(x1) -> P2(x2)) <-> ((ex x1 . P1(x1)) -> P2(x2))"],
    "viii": ["(ex x1 . ~P1(x1)) <-> ~all x1 . P1(x1)"],
    "ix": ["P1(x1) -> ex x1 . P1(x1)"],
    "x": ["(P1(x1) -> all x1 . P2(x1)) -> ((all x1 . P2(x1)) -> P1(x1)) -> P1(x1) -> P2(x1)"],
    "xi": ["((ex x1 . P1(x1)) -> P2(x1)) -> (P2(x1) -> ex x1 . P1(x1)) -> P1(x1) -> P2(x1)"],
    "xii": ["P1(a1) -> ex x1 . P1(x1)"],
    "xiii": ["(all x1 . P1(x1) -> P2(x1)) -> (all x1 . P1(x1)) -> all x1 . P2(x1)"],
    "xiv": ["(all x1 . P1(x1) -> P2(x1)) -> (ex x1 . P1(x1)) -> ex x1 . P2(x1)"],
    "xv": ["(all x1 . P1(x1) <-> P2(x1)) -> ((all x1 . P1(x1)) <-> all x1 . P2(x1))"],
    "xvi": ["(all x1 . P1(x1) <-> P2(x1)) -> ((ex x1 . P1(x1)) <-> ex x1 . P2(x1))"],
    "xvii": ["~(ex x1 . ~(P1(x1) -> P2(x2))) <-> ((ex x1 . P1(x1)) -> P2(x2))"],
    "xviii": ["(all x1 . P1(x1) & P2(x1)) <-> (all x1 . P1(x1)) & all x1 . P2(x1)"],
    "xix": ["(all x1 . P1(x1)) | (all x1 . P2(x1)) -> all x1 . P1(x1) | P2(x1)"],
    "xx": ["(ex x1 . P1(x1) -> P2(x1)) <-> ((all x1 . P1(x1)) -> ex x1 . P2(x1))"],
    "xxi": ["(ex x1 . P1(x1) & P2(x1)) -> (ex x1 . P1(x1)) & ex x1 . P2(x1)"],
    "xxii": ["(ex x1 . P1(x1) | P2(x1)) <-> (ex x1 . P1(x1)) | ex x1 . P2(x1)"],
    "xxiii": ["(all x1 . P1(x2) | P2(x1)) <-> P1(x2) | all x1 . P2(x1)"],
    "xxiv": ["(all x1 . P1(x1) -> P2(x2)) <-> ((ex x1 . P1(x1)) -> P2(x2))"],
    "xxv": ["(ex x1 . P1(x2) & P2(x1)) <-> P1(x2) & ex x1 . P2(x1)"],
    "xxvi": ["(all x1 . all x2 . P1(x1,x2)) <-> all x2 . all x1 . P1(x1,x2)"],
    "xxvii": ["(ex x1 . ex x2 . P1(x1,x2)) <-> ex x2 . ex x1 . P1(x1,x2)"],
    "xxviii": ["(ex x1 . all x2 . P1(x1,x2)) -> all x2 . ex x1 . P1(x1,x2)"],
    "xxix": ["~(ex x1 . P1(x1)) <-> all x1 . ~P1(x1)"],
    "xxx": ["~(ex x1 . ~P1(x1)) <-> all x1 . P1(x1)"],
    "xxxi": ["~(all x1 . ~P1(x1)) <-> ex x1 . P1(x1)"],
    "xxxiii": [
        "~(all x1 . (all x1 . P1(x1)) & P2(x1)) <-> ((all x1 . P1(x1)) -> ~all x1 . P2(x1))",
        "~(ex x1 . (all x1 . P1(x1)) & P2(x1)) <-> ((all x1 . P1(x1)) -> ~ex x1 . P2(x1))",
    ],
    "xxxiv": ["(all x1 . P1(x1) <-> P2(x1)) -> (all x1 . P1(x1) -> P2(x1)) & all x1 . P2(x1) -> P1(x1)"],
}

# the refutable converse of (xxviii)
CONVERSE_XXVIII = "(all x2 . ex x1 . P1(x1,x2)) -> ex x1 . all x2 . P1(x1,x2)"


def _xxxii():
    phi = Pred(1, (IndVar(1),))
    psi = Pred(2, (IndVar(1),))
    ps, fs = star_fol(psi), star_fol(phi)
    return Impl(Impl(Impl(Impl(ps, fs), fs), fs), Impl(universal_closure(phi), psi))


@dataclass(frozen=True)
class Schema:
    label: str  # "1".."119" or "i".."xxxiv"
    template: str
    instances: tuple = field(default=(), compare=False)

    @property
    def propositional(self) -> bool:
        return self.label.isdigit()


def prop_templates() -> dict[int, str]:
    out = {}
    for line in PROP_TEMPLATES.strip().split("\n"):
        num, text = line.split(" ", 1)
        out[int(num)] = text
    return out


def instantiate_prop(number: int, template=None):
    """First-order instance of propositional schema ``number``."""
    f = parse_prop(template or prop_templates()[number])
    meta = {**DEFAULT_META, **META_OVERRIDES.get(number, {})}
    return _meta_subst(f, {k: parse_fol(v) for k, v in meta.items()})


def _meta_subst(f, meta):
    if isinstance(f, Var):
        return meta[f.name]
    if isinstance(f, Neg):
        return Neg(_meta_subst(f.sub, meta))
    return Bin(f.op, _meta_subst(f.left, meta), _meta_subst(f.right, meta))


def all_schemas() -> list[Schema]:
    out = []
    for n, text in prop_templates().items():
        out.append(Schema(str(n), text, (instantiate_prop(n, text),)))
    for lab in QUANT_LABELS:
        if lab == "xxxii":
            inst = (_xxxii(),)
            text = "{[(psi* -> phi*) -> phi*] -> phi*} -> (all phi -> psi)"
        else:
            inst = tuple(parse_fol(t) for t in _QUANT_TEXT[lab])
            text = _QUANT_TEXT[lab][0]
        out.append(Schema(lab, text, inst))
    return out


def select(range_spec: str) -> list[Schema]:
    """Schemas named by ``all``, ``1-119``, ``i-xxxiv``, ``5-9`` or a
    comma-separated mix such as ``1,40,xii``."""
    schemas = all_schemas()
    by_label = {s.label: i for i, s in enumerate(schemas)}
    if range_spec == "all":
        return schemas
    picked: list[int] = []
    for part in range_spec.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            if lo not in by_label or hi not in by_label:
                raise ValueError(f"unknown schema range {part!r}")
            a, b = by_label[lo], by_label[hi]
            if a > b or schemas[a].propositional != schemas[b].propositional:
                raise ValueError(f"bad schema range {part!r}")
            picked.extend(range(a, b + 1))
        else:
            if part not in by_label:
                raise ValueError(f"unknown schema {part!r}")
            picked.append(by_label[part])
    return [schemas[i] for i in dict.fromkeys(picked)]
