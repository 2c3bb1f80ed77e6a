"""Recursive-descent parser for propositional and first-order formulas.

Precedence, tightest first: ``~``, ``&``, ``|``, ``->`` (right-assoc),
``<->``.  A quantifier ``all x1 . body`` / ``ex x1 . body`` extends as far
to the right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

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
    Quant,
    Var,
)

UNICODE_ALIASES = {
    "¬": "~",
    "∼": "~",
    "∧": "&",
    "∨": "|",
    "→": "->",
    "≡": "<->",
    "↔": "<->",
    "∀": "all ",
    "∃": "ex ",
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<sym><->|->|[~&|().,])|(?P<word>[A-Za-z][A-Za-z0-9]*)|(?P<bad>\S))"
)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at byte {offset} (expected one of: {exp})")


@dataclass
class _Tok:
    kind: str  # symbol text, or VAR / PRED / IVAR / CONST / FUNC / KW / EOF
    text: str
    offset: int  # byte offset into the UTF-8 input


def _classify(word: str) -> str:
    if word in ("all", "ex"):
        return "KW"
    if re.fullmatch(r"[pqst][0-9]*", word):
        return "VAR"
    if re.fullmatch(r"P[1-9][0-9]*", word):
        return "PRED"
    if re.fullmatch(r"x[1-9][0-9]*", word):
        return "IVAR"
    if re.fullmatch(r"a[1-9][0-9]*", word):
        return "CONST"
    if re.fullmatch(r"f[1-9][0-9]*", word):
        return "FUNC"
    return "BAD"


def _tokenize(text: str) -> list[_Tok]:
    # aliases are rewritten per character so byte offsets still refer to
    # the caller's original text
    out: list[_Tok] = []
    norm_chars = []
    byte_at = []
    pos = 0
    for ch in text:
        rep = UNICODE_ALIASES.get(ch, ch)
        for c in rep:
            norm_chars.append(c)
            byte_at.append(pos)
        pos += len(ch.encode("utf-8"))
    byte_at.append(pos)
    norm = "".join(norm_chars)
    i = 0
    while i < len(norm):
        m = _TOKEN_RE.match(norm, i)
        if m is None or m.end() == i:
            break
        if m.group("sym"):
            out.append(_Tok(m.group("sym"), m.group("sym"), byte_at[m.start("sym")]))
        elif m.group("word"):
            w = m.group("word")
            kind = _classify(w)
            if kind == "BAD":
                raise ParseError(f"unknown identifier {w!r}", byte_at[m.start("word")],
                                 {"variable", "predicate", "term"})
            out.append(_Tok(kind, w, byte_at[m.start("word")]))
        elif m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}",
                             byte_at[m.start("bad")], {"formula"})
        i = m.end()
    out.append(_Tok("EOF", "", pos))
    return out


class _Parser:
    def __init__(self, text: str, fol: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.fol = fol

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset, expected)

    def atom_starts(self):
        return {"~", "(", "all", "ex", "PRED"} if self.fol else {"~", "(", "VAR"}

    def parse(self):
        f = self.equiv()
        if self.tok.kind != "EOF":
            self.fail({"<->", "->", "|", "&", "EOF"})
        return f

    def equiv(self):
        f = self.impl()
        while self.tok.kind == "<->":
            self.advance()
            f = Bin(Op.EQUIV, f, self.impl())
        return f

    def impl(self):
        f = self.disj()
        if self.tok.kind == "->":
            self.advance()
            return Bin(Op.IMPL, f, self.impl())
        return f

    def disj(self):
        f = self.conj()
        while self.tok.kind == "|":
            self.advance()
            f = Bin(Op.OR, f, self.conj())
        return f

    def conj(self):
        f = self.neg()
        while self.tok.kind == "&":
            self.advance()
            f = Bin(Op.AND, f, self.neg())
        return f

    def neg(self):
        t = self.tok
        if t.kind == "~":
            self.advance()
            return Neg(self.neg())
        if t.kind == "KW" and self.fol:
            self.advance()
            v = self.expect("IVAR")
            self.expect(".")
            body = self.equiv()
            index = int(v.text[1:])
            return Forall(index, body) if t.text == "all" else Exists(index, body)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "(":
            self.advance()
            f = self.equiv()
            self.expect(")")
            return f
        if t.kind == "VAR" and not self.fol:
            self.advance()
            return Var(t.text)
        if t.kind == "PRED" and self.fol:
            self.advance()
            return Pred(int(t.text[1:]), self.arguments())
        self.fail(self.atom_starts())

    def arguments(self) -> tuple:
        self.expect("(")
        args = [self.term()]
        while self.tok.kind == ",":
            self.advance()
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def term(self):
        t = self.tok
        if t.kind == "IVAR":
            self.advance()
            return IndVar(int(t.text[1:]))
        if t.kind == "CONST":
            self.advance()
            return IndConst(int(t.text[1:]))
        if t.kind == "FUNC":
            self.advance()
            return FuncApp(int(t.text[1:]), self.arguments())
        self.fail({"IVAR", "CONST", "FUNC"})


def parse_prop(text: str):
    """Parse a formula of the propositional language."""
    return _Parser(text, fol=False).parse()


def parse_fol(text: str):
    """Parse a first-order formula; predicate arity is the argument count."""
    return _Parser(text, fol=True).parse()


def parse_any(text: str):
    """Parse as propositional if possible, else as first-order."""
    try:
        return parse_prop(text)
    except ParseError as prop_err:
        try:
            return parse_fol(text)
        except ParseError as fol_err:
            # report whichever reading got further into the text
            raise (fol_err if fol_err.offset >= prop_err.offset else prop_err) from None


def is_first_order(f) -> bool:
    if isinstance(f, (Pred, Quant)):
        return True
    if isinstance(f, Var):
        return False
    if isinstance(f, Neg):
        return is_first_order(f.sub)
    return is_first_order(f.left) or is_first_order(f.right)
