"""A toy assembly language compiled to labelled pushdown systems.

Control locations are register valuations and stack symbols are statement
labels, so the top of the stack is the program point and the rest of the
stack holds return points.

    reg eax in 0..3 ;
    entry M0 ;
    proc main { M0: call f ; M1: exit ; }
    proc f { F0: choose eax ; F1: ret ; }
    atom ret0 = reg eax = 0 ;
    atom callf = callsite(f) ;
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .confsets import MultiAutomaton, ma_for_controls, ma_prefix
from .errors import (DomainOverflow, ModelError, ParseError, UndefinedLabel, UndefinedProc)
from .pds import Config, LabelledPds, LabelledRule, RuleKind

MAX_DOMAIN = 4


@dataclass(frozen=True)
class Stmt:
    op: str
    args: tuple = ()
    label: str = ""
    line: int = 0
    col: int = 0


@dataclass
class Program:
    registers: dict[str, int] = field(default_factory=dict)  # name -> domain size
    procedures: dict[str, list[Stmt]] = field(default_factory=dict)
    entry: str | None = None
    atoms: dict[str, tuple] = field(default_factory=dict)


@dataclass
class Compiled:
    pds: LabelledPds
    atoms: dict
    entry: Config
    program: Program


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>//[^\n]*)
  | (?P<range>\.\.) | (?P<num>\d+) | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}:;()=]) | (?P<bad>.)
""", re.VERBOSE)

_OPS = {"nop": 0, "mov": 2, "choose": 1, "if_eq": 3, "jmp": 1, "call": 1, "ret": 0, "exit": 0}


class _Lexer:
    def __init__(self, text: str, source: str | None):
        self.toks = []
        line, start = 1, 0
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            if kind == "nl":
                line, start = line + 1, m.end()
                continue
            if kind in ("ws", "comment"):
                continue
            col = m.start() - start + 1
            if kind == "bad":
                raise ParseError(f"unexpected character {m.group()!r}", line, col, source)
            self.toks.append((kind, m.group(), line, col))
        self.toks.append(("eof", "", line, 1))
        self.i = 0
        self.source = source

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind!r}, got {tok[1] or 'end of input'!r}",
                             tok[2], tok[3], self.source)
        self.i += 1
        return tok


def parse_program(text: str, source: str | None = None) -> Program:
    lx = _Lexer(text, source)
    prog = Program()
    while lx.peek()[0] != "eof":
        kw = lx.take("ident")
        if kw[1] == "reg":
            name = lx.take("ident")[1]
            lx.take("ident", "in")
            lo = int(lx.take("num")[1])
            lx.take("range")
            hi_tok = lx.take("num")
            hi = int(hi_tok[1])
            if lo != 0 or hi < lo or hi + 1 > MAX_DOMAIN:
                raise DomainOverflow(f"register {name!r} domain must be 0..k with k < {MAX_DOMAIN}",
                                     hi_tok[2], hi_tok[3], source)
            prog.registers[name] = hi + 1
            lx.take("punct", ";")
        elif kw[1] == "entry":
            prog.entry = lx.take("ident")[1]
            lx.take("punct", ";")
        elif kw[1] == "proc":
            name = lx.take("ident")[1]
            lx.take("punct", "{")
            body = []
            while lx.peek()[1] != "}":
                lab = lx.take("ident")
                lx.take("punct", ":")
                op = lx.take("ident")
                if op[1] not in _OPS:
                    raise ParseError(f"unknown statement {op[1]!r}", op[2], op[3], source)
                args = []
                for _ in range(_OPS[op[1]]):
                    t = lx.take()
                    if t[0] not in ("ident", "num"):
                        raise ParseError(f"bad operand {t[1]!r}", t[2], t[3], source)
                    args.append(int(t[1]) if t[0] == "num" else t[1])
                lx.take("punct", ";")
                body.append(Stmt(op[1], tuple(args), lab[1], lab[2], lab[3]))
            lx.take("punct", "}")
            if not body:
                raise ParseError(f"procedure {name!r} is empty", kw[2], kw[3], source)
            if name in prog.procedures:
                raise ParseError(f"procedure {name!r} defined twice", kw[2], kw[3], source)
            prog.procedures[name] = body
        elif kw[1] == "atom":
            name = lx.take("ident")[1]
            lx.take("punct", "=")
            kind = lx.take("ident")
            if kind[1] == "reg":
                r = lx.take("ident")[1]
                lx.take("punct", "=")
                spec = ("reg", r, int(lx.take("num")[1]))
            elif kind[1] == "at":
                spec = ("at", lx.take("ident")[1])
            elif kind[1] == "callsite":
                lx.take("punct", "(")
                spec = ("callsite", lx.take("ident")[1])
                lx.take("punct", ")")
            elif kind[1] == "top2":
                spec = ("top2", lx.take("ident")[1], lx.take("ident")[1])
            else:
                raise ParseError(f"unknown atom kind {kind[1]!r}", kind[2], kind[3], source)
            lx.take("punct", ";")
            prog.atoms[name] = spec + ((kind[2], kind[3]),)
        else:
            raise ParseError(f"unexpected {kw[1]!r}", kw[2], kw[3], source)
    return prog


def valuation_name(regs: list[str], values: tuple[int, ...]) -> str:
    if not regs:
        return "s0"
    return "_".join(f"{r}{v}" for r, v in zip(regs, values))


def compile_program(prog: Program, source: str | None = None) -> Compiled:
    regs = list(prog.registers)
    vals = list(itertools.product(*(range(prog.registers[r]) for r in regs)))
    names = {v: valuation_name(regs, v) for v in vals}
    controls = [names[v] for v in vals]

    labels: dict[str, tuple[str, int]] = {}
    for pname, body in prog.procedures.items():
        for i, st in enumerate(body):
            if st.label in labels:
                raise ModelError(f"label {st.label!r} defined twice", st.line, st.col, source)
            labels[st.label] = (pname, i)
    entries = {p: body[0].label for p, body in prog.procedures.items()}

    def fail(cls, msg, st):
        raise cls(msg, st.line, st.col, source)

    def check_value(r, c, st):
        if r not in prog.registers:
            fail(ModelError, f"unknown register {r!r}", st)
        if not isinstance(c, int) or not 0 <= c < prog.registers[r]:
            fail(DomainOverflow, f"constant {c} outside the domain of {r!r}", st)

    rules: list[LabelledRule] = []
    for pname, body in prog.procedures.items():
        last = body[-1]
        if last.op not in ("ret", "exit"):
            fail(ModelError, f"procedure {pname!r} must end in ret or exit", last)
        for i, st in enumerate(body):
            nxt = body[i + 1].label if i + 1 < len(body) else None
            if nxt is None and st.op not in ("ret", "exit", "jmp"):
                fail(ModelError, f"statement at {st.label!r} falls off the procedure", st)
            for v in vals:
                s = names[v]
                here = (s, st.label)
                if st.op == "ret":
                    rules.append(LabelledRule(*here, s, (), RuleKind.RET))
                elif st.op == "exit":
                    pass
                elif st.op == "call":
                    if st.args[0] not in entries:
                        fail(UndefinedProc, f"undefined procedure {st.args[0]!r}", st)
                    rules.append(LabelledRule(*here, s, (entries[st.args[0]], nxt), RuleKind.CALL))
                elif st.op == "jmp":
                    if st.args[0] not in labels:
                        fail(UndefinedLabel, f"undefined label {st.args[0]!r}", st)
                    rules.append(LabelledRule(*here, s, (st.args[0],), RuleKind.INT))
                elif st.op == "nop":
                    rules.append(LabelledRule(*here, s, (nxt,), RuleKind.INT))
                elif st.op == "mov":
                    r, c = st.args
                    check_value(r, c, st)
                    w = tuple(c if x == r else y for x, y in zip(regs, v))
                    rules.append(LabelledRule(*here, names[w], (nxt,), RuleKind.INT))
                elif st.op == "choose":
                    r = st.args[0]
                    if r not in prog.registers:
                        fail(ModelError, f"unknown register {r!r}", st)
                    for c in range(prog.registers[r]):
                        w = tuple(c if x == r else y for x, y in zip(regs, v))
                        rules.append(LabelledRule(*here, names[w], (nxt,), RuleKind.INT))
                elif st.op == "if_eq":
                    r, c, target = st.args
                    check_value(r, c, st)
                    if target not in labels:
                        fail(UndefinedLabel, f"undefined label {target!r}", st)
                    taken = v[regs.index(r)] == c
                    rules.append(LabelledRule(*here, s, (target if taken else nxt,), RuleKind.INT))

    alphabet = tuple(labels)
    pds = LabelledPds(tuple(controls), alphabet, tuple(dict.fromkeys(rules)))

    atoms: dict = {}
    for name, spec in prog.atoms.items():
        line, col = spec[-1]
        kind = spec[0]
        if kind == "reg":
            r, c = spec[1], spec[2]
            if r not in prog.registers:
                raise ModelError(f"unknown register {r!r}", line, col, source)
            if not 0 <= c < prog.registers[r]:
                raise DomainOverflow(f"constant {c} outside the domain of {r!r}", line, col, source)
            k = regs.index(r)
            atoms[name] = frozenset(names[v] for v in vals if v[k] == c)
        elif kind == "at":
            if spec[1] not in labels:
                raise UndefinedLabel(f"undefined label {spec[1]!r}", line, col, source)
            atoms[name] = ma_prefix([{spec[1]}], controls, alphabet)
        elif kind == "callsite":
            if spec[1] not in entries:
                raise UndefinedProc(f"undefined procedure {spec[1]!r}", line, col, source)
            sites = {st.label for body in prog.procedures.values() for st in body
                     if st.op == "call" and st.args[0] == spec[1]}
            atoms[name] = ma_prefix([sites], controls, alphabet)
        else:
            for lab in spec[1:3]:
                if lab not in labels:
                    raise UndefinedLabel(f"undefined label {lab!r}", line, col, source)
            atoms[name] = ma_prefix([{spec[1]}, {spec[2]}], controls, alphabet)

    entry_label = prog.entry
    if entry_label is None:
        if "main" not in prog.procedures:
            raise ModelError("no entry label and no procedure main", source=source)
        entry_label = entries["main"]
    if entry_label not in labels:
        raise UndefinedLabel(f"undefined entry label {entry_label!r}", source=source)
    entry = pds.config(names[vals[0]], entry_label)
    return Compiled(pds, atoms, entry, prog)


def compile_text(text: str, source: str | None = None) -> Compiled:
    return compile_program(parse_program(text, source), source)


def lift_atoms(compiled: Compiled) -> dict[str, MultiAutomaton]:
    """All bindings as automata (control sets become {p} x Gamma*)."""
    pds = compiled.pds
    return {k: v if isinstance(v, MultiAutomaton) else ma_for_controls(v, pds.controls, pds.alphabet)
            for k, v in compiled.atoms.items()}
