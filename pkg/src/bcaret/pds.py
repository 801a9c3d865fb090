"""Labelled pushdown systems.

A labelled PDS tags each rewrite rule as a call, a return or an internal
step.  Configurations always carry the bottom symbol ``#`` as the last stack
element; no rule may read or write it.
"""
from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import BottomRewrite, CallArity, ModelError, ParseError, RetArity

BOTTOM_SYMBOL = "#"


class RuleKind(enum.Enum):
    CALL = "call"
    RET = "ret"
    INT = "int"


class _BottomTarget:
    """The pseudo abstract successor of a return step."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_BottomTarget, ())


BOTTOM = _BottomTarget()


class StepMode(enum.Enum):
    GLOBAL = "global"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class Config:
    control: str
    stack: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.stack, tuple):
            object.__setattr__(self, "stack", tuple(self.stack))

    @property
    def top(self) -> str:
        return self.stack[0]

    @property
    def height(self) -> int:
        return len(self.stack)

    def __str__(self) -> str:
        return f"{self.control} : {' '.join(map(str, self.stack))}"


def check_config(c: Config, bottom: str = BOTTOM_SYMBOL) -> None:
    if not c.stack:
        raise ModelError(f"configuration {c!s} has an empty stack")
    if c.stack[-1] != bottom:
        raise ModelError(f"configuration {c!s} does not end in the bottom symbol")
    if bottom in c.stack[:-1]:
        raise ModelError(f"configuration {c!s} has the bottom symbol above the bottom")


@dataclass(frozen=True)
class LabelledRule:
    lhs_control: str
    lhs_symbol: str
    rhs_control: str
    rhs_word: tuple[str, ...]
    kind: RuleKind

    def __post_init__(self):
        if not isinstance(self.rhs_word, tuple):
            object.__setattr__(self, "rhs_word", tuple(self.rhs_word))
        if self.kind is RuleKind.CALL and len(self.rhs_word) != 2:
            raise CallArity(f"call rule {self} must push exactly two symbols")
        if self.kind is RuleKind.RET and self.rhs_word:
            raise RetArity(f"return rule {self} must have an empty right-hand word")
        if self.lhs_symbol == BOTTOM_SYMBOL or BOTTOM_SYMBOL in self.rhs_word:
            raise BottomRewrite(f"rule {self} touches the bottom symbol")

    def __str__(self) -> str:
        rhs = " ".join((self.rhs_control,) + self.rhs_word)
        return f"{self.lhs_control} {self.lhs_symbol} -{self.kind.value}-> {rhs}"


@dataclass(frozen=True)
class LabelledPds:
    controls: tuple[str, ...]
    alphabet: tuple[str, ...]
    rules: tuple[LabelledRule, ...]
    bottom: str = BOTTOM_SYMBOL
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for name in ("controls", "alphabet", "rules"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))
        if len(set(self.controls)) != len(self.controls):
            raise ModelError("duplicate control location")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ModelError("duplicate stack symbol")
        if self.bottom in self.alphabet:
            raise BottomRewrite("the bottom symbol cannot be part of the alphabet")
        ctl, sym = set(self.controls), set(self.alphabet)
        index: dict[tuple[str, str], list[LabelledRule]] = {}
        for r in self.rules:
            if r.lhs_control not in ctl or r.rhs_control not in ctl:
                raise ModelError(f"rule {r} uses an undeclared control location")
            if r.lhs_symbol not in sym or any(s not in sym for s in r.rhs_word):
                raise ModelError(f"rule {r} uses an undeclared stack symbol")
            index.setdefault((r.lhs_control, r.lhs_symbol), []).append(r)
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in index.items()})

    def rules_for(self, control: str, symbol: str) -> tuple[LabelledRule, ...]:
        return self._index.get((control, symbol), ())

    def config(self, control: str, *stack: str) -> Config:
        """Build a configuration; the bottom symbol is appended if missing."""
        word = tuple(stack)
        if not word or word[-1] != self.bottom:
            word = word + (self.bottom,)
        c = Config(control, word)
        self.check(c)
        return c

    def check(self, c: Config) -> None:
        check_config(c, self.bottom)
        if c.control not in self.controls:
            raise ModelError(f"unknown control location {c.control!r}")
        for s in c.stack[:-1]:
            if s not in self.alphabet:
                raise ModelError(f"unknown stack symbol {s!r}")

    def retagged(self, kinds: Iterable[RuleKind]) -> "LabelledPds":
        """Same rewrite rules with new kind labels (arity is not re-checked)."""
        rules = []
        for r, k in zip(self.rules, kinds):
            nr = object.__new__(LabelledRule)
            for name, value in (("lhs_control", r.lhs_control), ("lhs_symbol", r.lhs_symbol),
                                ("rhs_control", r.rhs_control), ("rhs_word", r.rhs_word),
                                ("kind", k)):
                object.__setattr__(nr, name, value)
            rules.append(nr)
        return LabelledPds(self.controls, self.alphabet, tuple(rules), self.bottom)


def apply_rule(rule: LabelledRule, c: Config) -> Config:
    return Config(rule.rhs_control, rule.rhs_word + c.stack[1:])


def immediate_successors(pds: LabelledPds, c: Config) -> list[tuple[LabelledRule, Config]]:
    """Global successors of ``c`` in rule declaration order."""
    return [(r, apply_rule(r, c)) for r in pds.rules_for(c.control, c.stack[0])]


def matching_returns(pds: LabelledPds, call_succ: Config, height: int,
                     budget: int) -> tuple[set[Config], bool]:
    """Configurations where a call made at stack height ``height`` returns.

    ``call_succ`` is the configuration right after the call.  The search
    follows global steps while the stack stays above ``height`` and records
    the first configuration at which it comes back down.  The flag is True
    when the search exhausted the callee within ``budget`` steps.
    """
    found: set[Config] = set()
    seen = {call_succ}
    frontier = [call_succ]
    for _ in range(budget):
        nxt = []
        for c in frontier:
            for _rule, d in immediate_successors(pds, c):
                if d.height <= height:
                    found.add(d)
                elif d not in seen:
                    seen.add(d)
                    nxt.append(d)
        frontier = nxt
        if not frontier:
            return found, True
    return found, not frontier


def abstract_moves(pds: LabelledPds, c: Config, budget: int):
    """Per-rule abstract outcomes of ``c``.

    Yields ``(rule, targets, complete)`` where targets is a set of
    configurations (INT: the successor, CALL: the matching returns) or
    ``{BOTTOM}`` for a return step.
    """
    for rule, d in immediate_successors(pds, c):
        if rule.kind is RuleKind.INT:
            yield rule, {d}, True
        elif rule.kind is RuleKind.RET:
            yield rule, {BOTTOM}, True
        else:
            found, complete = matching_returns(pds, d, c.height, budget)
            yield rule, found, complete


def abstract_successors(pds: LabelledPds, c: Config, budget: int) -> tuple[set, bool]:
    """All abstract successors of ``c`` reachable within ``budget`` steps.

    Returns the set (configurations and possibly ``BOTTOM``) and whether the
    exploration was exhaustive.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    result: set = set()
    complete = True
    for _rule, targets, done in abstract_moves(pds, c, budget):
        result |= targets
        complete = complete and done
    return result, complete


def enumerate_paths(pds: LabelledPds, c: Config, mode: StepMode, depth: int,
                    budget: int = 64) -> set[tuple]:
    """All path prefixes of at most ``depth`` steps that cannot be extended
    before the depth limit.  Abstract prefixes end at ``BOTTOM``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")

    def successors(d: Config):
        if mode is StepMode.GLOBAL:
            return {s for _r, s in immediate_successors(pds, d)}
        return abstract_successors(pds, d, budget)[0] if pds.rules_for(d.control, d.top) else set()

    out: set[tuple] = set()
    stack = [(c,)]
    while stack:
        path = stack.pop()
        last = path[-1]
        if len(path) - 1 == depth or last is BOTTOM:
            out.add(path)
            continue
        nxt = successors(last)
        if not nxt:
            out.add(path)
        for s in nxt:
            stack.append(path + (s,))
    return out


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<arrow>-(?:call|ret|int)->)
  | (?P<semi>;)
  | (?P<colon>:)
  | (?P<bottom>\#)
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_.']*)
  | (?P<bad>.)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> Iterator[Token]:
    line, start = 1, 0
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
            continue
        if kind in ("ws", "comment"):
            continue
        col = m.start() - start + 1
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", line, col)
        yield Token(kind, m.group(), line, col)


def _statements(text: str) -> Iterator[list[Token]]:
    current: list[Token] = []
    last = None
    for tok in tokenize(text):
        last = tok
        if tok.kind == "semi":
            if current:
                yield current
            current = []
        else:
            current.append(tok)
    if current:
        t = current[-1] if last is None else last
        raise ParseError("missing ';' at end of statement", t.line, t.col)


def parse_pds(text: str, source: str | None = None) -> LabelledPds:
    """Parse the line-oriented PDS format (``controls``, ``alphabet``, ``rule``)."""
    controls: list[str] = []
    alphabet: list[str] = []
    rules: list[LabelledRule] = []
    try:
        for stmt in _statements(text):
            head = stmt[0]
            if head.kind != "ident":
                raise ParseError(f"unexpected {head.value!r}", head.line, head.col)
            if head.value in ("controls", "alphabet"):
                target = controls if head.value == "controls" else alphabet
                for t in stmt[1:]:
                    if t.kind == "bottom" and head.value == "alphabet":
                        raise BottomRewrite("the bottom symbol cannot be declared", t.line, t.col)
                    if t.kind != "ident":
                        raise ParseError(f"expected a name, got {t.value!r}", t.line, t.col)
                    target.append(t.value)
            elif head.value == "rule":
                rules.append(_parse_rule(stmt, controls, alphabet))
            else:
                raise ParseError(f"unknown statement {head.value!r}", head.line, head.col)
        return LabelledPds(tuple(controls), tuple(alphabet), tuple(rules))
    except ModelError as err:
        if source and err.source is None:
            raise err.located(err.line, err.col, source) from None
        raise


def _parse_rule(stmt: list[Token], controls, alphabet) -> LabelledRule:
    head = stmt[0]
    arrows = [i for i, t in enumerate(stmt) if t.kind == "arrow"]
    if len(arrows) != 1 or arrows[0] != 3:
        raise ParseError("expected 'rule <ctl> <sym> -kind-> <ctl> <sym>*'", head.line, head.col)
    p, g, arrow = stmt[1], stmt[2], stmt[3]
    rhs = stmt[4:]
    if not rhs:
        raise ParseError("missing target control", arrow.line, arrow.col)
    kind = RuleKind(arrow.value[1:-2])
    if g.kind == "bottom" or any(t.kind == "bottom" for t in rhs[1:]):
        raise BottomRewrite("rules may not read or write the bottom symbol", g.line, g.col)
    for t in (p, g, *rhs):
        if t.kind != "ident":
            raise ParseError(f"expected a name, got {t.value!r}", t.line, t.col)
    for t in (p, rhs[0]):
        if t.value not in controls:
            raise ParseError(f"undeclared control location {t.value!r}", t.line, t.col)
    for t in (g, *rhs[1:]):
        if t.value not in alphabet:
            raise ParseError(f"undeclared stack symbol {t.value!r}", t.line, t.col)
    try:
        return LabelledRule(p.value, g.value, rhs[0].value, tuple(t.value for t in rhs[1:]), kind)
    except ModelError as err:
        raise err.located(head.line, head.col) from None


def parse_config(text: str, bottom: str = BOTTOM_SYMBOL) -> Config:
    """Parse ``p : a b #`` (stack listed top first)."""
    toks = list(tokenize(text))
    if len(toks) < 3 or toks[0].kind != "ident" or toks[1].kind != "colon":
        raise ParseError(f"malformed configuration {text!r}; expected 'ctl : sym* #'", 1, 1)
    stack = []
    for t in toks[2:]:
        if t.kind == "bottom":
            stack.append(bottom)
        elif t.kind == "ident":
            stack.append(t.value)
        else:
            raise ParseError(f"unexpected {t.value!r} in configuration", t.line, t.col)
    c = Config(toks[0].value, tuple(stack))
    try:
        check_config(c, bottom)
    except ModelError as err:
        raise ParseError(err.message, 1, 1) from None
    return c


def format_pds(pds: LabelledPds) -> str:
    lines = [f"controls {' '.join(pds.controls)} ;", f"alphabet {' '.join(pds.alphabet)} ;"]
    lines += [f"rule {r} ;" for r in pds.rules]
    return "\n".join(lines) + "\n"


def reachable(pds: LabelledPds, c: Config, max_height: int, max_nodes: int) -> tuple[set[Config], bool]:
    """Forward closure of ``c``; the flag is False if a cap was hit."""
    seen = {c}
    todo = deque([c])
    while todo:
        d = todo.popleft()
        for _r, s in immediate_successors(pds, d):
            if s in seen:
                continue
            if s.height > max_height or len(seen) >= max_nodes:
                return seen, False
            seen.add(s)
            todo.append(s)
    return seen, True
