"""BCARET formulas in positive normal form.

Concrete syntax::

    phi ::= true | false | IDENT | !phi | phi && phi | phi || phi
          | (EX|AX|EF|AF|EG|AG) STEP phi
          | (E|A) [ phi (U|R) STEP phi ]
    STEP ::= ^g | ^a

``!`` binds tighter than ``&&``, which binds tighter than ``||``.  The parser
pushes negation down to atoms, so every returned tree is in positive normal
form.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, UnknownOperator


class Step(enum.Enum):
    G = "g"
    A_STEP = "a"


class Formula:
    """Base of the formula tree; subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseF(Formula):
    def __str__(self) -> str:
        return "false"


TRUE = TrueF()
FALSE = FalseF()


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class NegAtom(Formula):
    name: str

    def __str__(self) -> str:
        return f"!{self.name}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class _Next(Formula):
    step: Step
    sub: Formula

    def children(self):
        return (self.sub,)

    def __str__(self) -> str:
        return f"{self._name}^{self.step.value} {self.sub}"


@dataclass(frozen=True)
class EX(_Next):
    _name = "EX"


@dataclass(frozen=True)
class AX(_Next):
    _name = "AX"


@dataclass(frozen=True)
class _Binary(Formula):
    step: Step
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"{self._quant}[ {self.left} {self._op}^{self.step.value} {self.right} ]"


@dataclass(frozen=True)
class EU(_Binary):
    _quant, _op = "E", "U"


@dataclass(frozen=True)
class AU(_Binary):
    _quant, _op = "A", "U"


@dataclass(frozen=True)
class ER(_Binary):
    _quant, _op = "E", "R"


@dataclass(frozen=True)
class AR(_Binary):
    _quant, _op = "A", "R"


RELEASES = (ER, AR)
UNTILS = (EU, AU)

_DUAL = {EX: AX, AX: EX, EU: AR, AR: EU, AU: ER, ER: AU}


def negate(f: Formula) -> Formula:
    """Negation of a PNF formula, again in PNF."""
    if f is TRUE or isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, _Next):
        return _DUAL[type(f)](f.step, negate(f.sub))
    if isinstance(f, _Binary):
        return _DUAL[type(f)](f.step, negate(f.left), negate(f.right))
    raise TypeError(f"not a formula: {f!r}")


def closure(phi: Formula) -> tuple[Formula, ...]:
    """Subformulas of ``phi`` (itself included), post-order, first occurrence."""
    seen: dict[Formula, None] = {}

    def visit(f: Formula) -> None:
        for c in f.children():
            visit(c)
        if f not in seen:
            seen[f] = None

    visit(phi)
    return tuple(seen)


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in phi.children())


def depth(phi: Formula) -> int:
    kids = phi.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def atoms(phi: Formula) -> tuple[set[str], set[str]]:
    """Atoms occurring positively and negatively."""
    pos, neg = set(), set()
    for f in closure(phi):
        if isinstance(f, Atom):
            pos.add(f.name)
        elif isinstance(f, NegAtom):
            neg.add(f.name)
    return pos, neg


def retag_steps(phi: Formula, step: Step) -> Formula:
    if isinstance(phi, _Next):
        return type(phi)(step, retag_steps(phi.sub, step))
    if isinstance(phi, _Binary):
        return type(phi)(step, retag_steps(phi.left, step), retag_steps(phi.right, step))
    if isinstance(phi, (And, Or)):
        return type(phi)(retag_steps(phi.left, step), retag_steps(phi.right, step))
    return phi


def uses_only_global(phi: Formula) -> bool:
    return all(not isinstance(f, (_Next, _Binary)) or f.step is Step.G for f in closure(phi))


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<and>&&)
  | (?P<or>\|\|)
  | (?P<not>!)
  | (?P<step>\^[A-Za-z]\w*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<lbr>\[)
  | (?P<rbr>\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<bad>.)
""", re.VERBOSE)

_UNARY = {"EX", "AX", "EF", "AF", "EG", "AG"}
_KEYWORDS = _UNARY | {"true", "false"}


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", 1, m.start() + 1)
        yield kind, m.group(), m.start() + 1


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.toks.append(("eof", "", len(text) + 1))
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", 1, tok[2])
        self.i += 1
        return tok

    def step(self) -> Step:
        tok = self.take("step")
        try:
            return Step(tok[1][1:])
        except ValueError:
            raise ParseError(f"unknown step {tok[1]!r}; use ^g or ^a", 1, tok[2]) from None

    def parse(self) -> Formula:
        f = self.disj()
        if self.peek()[0] != "eof":
            tok = self.peek()
            raise ParseError(f"trailing input at {tok[1]!r}", 1, tok[2])
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "or":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "not":
            self.take()
            return negate(self.unary())
        if kind == "lpar":
            self.take()
            f = self.disj()
            self.take("rpar")
            return f
        if kind != "ident":
            raise ParseError(f"unexpected {value or 'end of input'!r}", 1, pos)
        nxt = self.peek(1)[0]
        if value in ("E", "A") and nxt == "lbr":
            return self.bracketed()
        if nxt == "step":
            if value not in _UNARY:
                raise UnknownOperator(f"unknown operator {value!r}", 1, pos)
            self.take()
            step = self.step()
            sub = self.unary()
            return _expand(value, step, sub)
        self.take()
        if value == "true":
            return TRUE
        if value == "false":
            return FALSE
        if value in _UNARY:
            raise ParseError(f"operator {value!r} needs a step suffix ^g or ^a", 1, pos)
        return Atom(value)

    def bracketed(self) -> Formula:
        quant = self.take()[1]
        self.take("lbr")
        left = self.disj()
        kind, op, pos = self.take("ident")
        if op not in ("U", "R"):
            raise UnknownOperator(f"expected U or R, got {op!r}", 1, pos)
        step = self.step()
        right = self.disj()
        self.take("rbr")
        cls = {("E", "U"): EU, ("A", "U"): AU, ("E", "R"): ER, ("A", "R"): AR}[quant, op]
        return cls(step, left, right)


def _expand(op: str, step: Step, sub: Formula) -> Formula:
    if op == "EX":
        return EX(step, sub)
    if op == "AX":
        return AX(step, sub)
    if op == "EF":
        return EU(step, TRUE, sub)
    if op == "AF":
        return AU(step, TRUE, sub)
    if op == "EG":
        return ER(step, FALSE, sub)
    return AR(step, FALSE, sub)


def parse_formula(text: str) -> Formula:
    """Parse the ASCII syntax into a PNF formula tree."""
    return _Parser(text).parse()
