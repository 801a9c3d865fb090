"""Alternating Buchi pushdown systems and the two product constructions.

Control locations of a product are plain PDS controls (``str``), tagged
pairs ``Tag(p, psi)``, the trap ``TRAP`` and, for regular valuations,
automaton states ``ValState``.  Stack symbols are plain symbols, tagged
pairs ``Tag(gamma, psi)``, ``TRAP_SYM`` and the bottom ``#``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .confsets import MultiAutomaton, ma_complement
from .errors import BottomRewrite, ModelError, UnknownAtom
from .formula import (AR, AU, AX, ER, EU, EX, And, Atom, FalseF, Formula, NegAtom, Or,
                      Step, TrueF, atoms, closure)
from .pds import BOTTOM_SYMBOL, Config, LabelledPds, LabelledRule, RuleKind


@dataclass(frozen=True)
class Tag:
    base: str
    formula: Formula

    def __str__(self) -> str:
        return f"[{self.base}, {self.formula}]"


@dataclass(frozen=True)
class Special:
    name: str

    def __str__(self) -> str:
        return self.name


TRAP = Special("p_bot")
TRAP_SYM = Special("g_bot")


@dataclass(frozen=True)
class ValState:
    atom: str
    negated: bool
    state: Hashable

    def __str__(self) -> str:
        sign = "!" if self.negated else ""
        return f"<{sign}{self.atom}:{_state_name(self.state)}>"


def _state_name(s) -> str:
    if isinstance(s, tuple) and len(s) == 2 and isinstance(s[1], frozenset):
        return f"{s[0]}{{{','.join(sorted(map(str, s[1])))}}}"
    return str(s)


Target = tuple  # (control, word)


@dataclass(frozen=True)
class AbpdsRule:
    control: Hashable
    symbol: Hashable
    targets: tuple[Target, ...]

    def __str__(self) -> str:
        inner = " ; ".join(f"{q} {' '.join(map(str, w))}".rstrip() for q, w in self.targets)
        return f"{self.control} {self.symbol} -> {{ {inner} }}" if inner else \
            f"{self.control} {self.symbol} -> {{ }}"


@dataclass(frozen=True)
class Abpds:
    controls: tuple
    symbols: tuple  # bottom excluded
    rules: tuple[AbpdsRule, ...]
    accepting: frozenset
    bottom: str = BOTTOM_SYMBOL
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        ctl = set(self.controls)
        sym = set(self.symbols)
        if self.bottom in sym:
            raise BottomRewrite("the bottom symbol cannot be part of the alphabet")
        if not self.accepting <= ctl:
            raise ModelError("accepting locations must be controls")
        index: dict = {}
        for r in self.rules:
            if r.control not in ctl or any(q not in ctl for q, _ in r.targets):
                raise ModelError(f"rule {r} uses an undeclared control location")
            at_bottom = r.symbol == self.bottom
            if not at_bottom and r.symbol not in sym:
                raise ModelError(f"rule {r} reads an undeclared symbol")
            for _q, w in r.targets:
                if any(s not in sym and s != self.bottom for s in w):
                    raise ModelError(f"rule {r} writes an undeclared symbol")
                body = w[:-1] if at_bottom else w
                if self.bottom in body or (at_bottom and (not w or w[-1] != self.bottom)):
                    raise BottomRewrite(f"rule {r} does not keep the bottom symbol in place")
            index.setdefault((r.control, r.symbol), []).append(r)
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in index.items()})

    def rules_for(self, control, symbol) -> tuple[AbpdsRule, ...]:
        return self._index.get((control, symbol), ())

    def sizes(self) -> dict[str, int]:
        return {"controls": len(self.controls), "symbols": len(self.symbols),
                "rules": len(self.rules), "accepting": len(self.accepting)}


def abpds_successor_sets(bp: Abpds, c: Config) -> list[set[Config]]:
    """One successor set per rule matching the head of ``c``."""
    tail = c.stack[1:]
    return [{Config(q, tuple(w) + tail) for q, w in r.targets}
            for r in bp.rules_for(c.control, c.stack[0])]


def abpds_from_pds(pds: LabelledPds, accepting: Iterable[str]) -> Abpds:
    """A labelled PDS read as an ABPDS with singleton target sets."""
    rules = [AbpdsRule(r.lhs_control, r.lhs_symbol, ((r.rhs_control, r.rhs_word),))
             for r in pds.rules]
    return Abpds(pds.controls, pds.alphabet, rules, frozenset(accepting), pds.bottom)


def dump_abpds(bp: Abpds) -> str:
    """Stable text form, one rule per line."""
    lines = [f"controls {len(bp.controls)}", f"symbols {len(bp.symbols)}",
             "accepting " + " ".join(sorted(map(str, bp.accepting)))]
    lines += sorted(str(r) for r in bp.rules)
    return "\n".join(lines) + "\n"


# -- positive boolean combinations of targets, kept in DNF --------------------

TRUE_DNF: list[tuple] = [()]
FALSE_DNF: list[tuple] = []


def _lit(t: Target) -> list[tuple]:
    return [(t,)]


def _merge(a: tuple, b: tuple) -> tuple:
    return a + tuple(x for x in b if x not in a)


def _and(*parts: list[tuple]) -> list[tuple]:
    acc = TRUE_DNF
    for part in parts:
        acc = [_merge(a, b) for a in acc for b in part]
    return acc


def _or(*parts: list[tuple]) -> list[tuple]:
    out: list[tuple] = []
    for part in parts:
        out.extend(part)
    return out


def _big_and(items: Iterable[list[tuple]]) -> list[tuple]:
    return _and(*items)


def _big_or(items: Iterable[list[tuple]]) -> list[tuple]:
    return _or(*items)


# -- the construction ----------------------------------------------------------

@dataclass(frozen=True)
class QueryMap:
    """Sends a PDS configuration to the product configuration checking phi."""
    formula: Formula

    def __call__(self, c: Config) -> Config:
        return Config(Tag(c.control, self.formula), c.stack)


class _Builder:
    def __init__(self, pds: LabelledPds, phi: Formula):
        self.pds = pds
        self.phi = phi
        self.cl = closure(phi)
        self.rules: dict[tuple, None] = {}

    def emit(self, control, symbol, dnf: list[tuple]) -> None:
        for conj in dnf:
            self.rules.setdefault(AbpdsRule(control, symbol, conj), None)

    def temporal(self, p: str, psi: Formula, gamma: str) -> list[tuple]:
        """Right-hand side for a temporal or boolean closure member."""
        here = lambda f: _lit((Tag(p, f), (gamma,)))
        moves = self.pds.rules_for(p, gamma) if gamma != self.pds.bottom else ()

        def nxt(r: LabelledRule, f: Formula) -> list[tuple]:
            return _lit((Tag(r.rhs_control, f), r.rhs_word))

        def push(r: LabelledRule, f: Formula) -> list[tuple]:
            # record f on the return point
            g1, g2 = r.rhs_word
            return _lit((r.rhs_control, (g1, Tag(g2, f))))

        trap = _lit((TRAP, (TRAP_SYM,)))

        def abstract_blocks(cont: Formula, guard: Formula | None):
            out = []
            for r in moves:
                if r.kind is RuleKind.RET:
                    out.append(trap)
                    continue
                step = push(r, cont) if r.kind is RuleKind.CALL else nxt(r, cont)
                out.append(step if guard is None else _and(here(guard), step))
            return out

        if isinstance(psi, TrueF):
            return TRUE_DNF
        if isinstance(psi, FalseF):
            return FALSE_DNF
        if isinstance(psi, And):
            return _and(here(psi.left), here(psi.right))
        if isinstance(psi, Or):
            return _or(here(psi.left), here(psi.right))
        if isinstance(psi, (EX, AX)):
            if psi.step is Step.G:
                items = [nxt(r, psi.sub) for r in moves]
            else:
                items = abstract_blocks(psi.sub, None)
            return _big_or(items) if isinstance(psi, EX) else _big_and(items)
        if isinstance(psi, (EU, AU, ER, AR)):
            until = isinstance(psi, (EU, AU))
            exists = isinstance(psi, (EU, ER))
            guard = psi.left if until else psi.right
            if psi.step is Step.G:
                items = [_and(here(guard), nxt(r, psi)) for r in moves]
            else:
                items = abstract_blocks(psi, guard)
            cont = _big_or(items) if exists else _big_and(items)
            stop = here(psi.right) if until else _and(here(psi.right), here(psi.left))
            return _or(stop, cont)
        raise TypeError(f"unexpected closure member {psi!r}")

    def common(self, atom_rule) -> None:
        pds = self.pds
        for r in pds.rules:
            self.emit(r.lhs_control, r.lhs_symbol, [((r.rhs_control, r.rhs_word),)])
        symbols = pds.alphabet + (pds.bottom,)
        for p in pds.controls:
            for psi in self.cl:
                for gamma in symbols:
                    if isinstance(psi, (Atom, NegAtom)):
                        dnf = atom_rule(p, psi, gamma)
                    else:
                        dnf = self.temporal(p, psi, gamma)
                    self.emit(Tag(p, psi), gamma, dnf)
        ret_targets = []
        for r in pds.rules:
            if r.kind is RuleKind.RET and r.rhs_control not in ret_targets:
                ret_targets.append(r.rhs_control)
        for q in ret_targets:
            for g in pds.alphabet:
                for psi in self.cl:
                    self.emit(q, Tag(g, psi), [((Tag(q, psi), (g,)),)])
        self.emit(TRAP, TRAP_SYM, [((TRAP, (TRAP_SYM,)),)])

    def base_controls(self) -> list:
        pds = self.pds
        return list(pds.controls) + [Tag(p, psi) for p in pds.controls for psi in self.cl] + [TRAP]

    def base_symbols(self) -> list:
        pds = self.pds
        return list(pds.alphabet) + [Tag(g, psi) for g in pds.alphabet for psi in self.cl] + [TRAP_SYM]

    def release_accepting(self) -> set:
        return {Tag(p, psi) for p in self.pds.controls for psi in self.cl
                if isinstance(psi, (ER, AR))}


def _check_atoms(phi: Formula, bound: Iterable[str]) -> None:
    pos, neg = atoms(phi)
    missing = sorted((pos | neg) - set(bound))
    if missing:
        raise UnknownAtom(f"no valuation for atom(s) {', '.join(missing)}")


def build_standard(pds: LabelledPds, phi: Formula,
                   f: Mapping[str, Iterable[str]]) -> tuple[Abpds, QueryMap]:
    """Product for a valuation mapping each atom to a set of controls."""
    _check_atoms(phi, f.keys())
    val = {e: frozenset(v) for e, v in f.items()}
    for e, ps in val.items():
        unknown = ps - set(pds.controls)
        if unknown:
            raise UnknownAtom(f"atom {e!r} names undeclared control(s) {sorted(unknown)}")
    b = _Builder(pds, phi)

    def atom_rule(p, psi, gamma):
        holds = p in val[psi.name]
        if isinstance(psi, NegAtom):
            holds = not holds
        return _lit((Tag(p, psi), (gamma,))) if holds else FALSE_DNF

    b.common(atom_rule)
    accepting = b.release_accepting()
    for psi in b.cl:
        if isinstance(psi, Atom):
            accepting |= {Tag(p, psi) for p in val[psi.name]}
        elif isinstance(psi, NegAtom):
            accepting |= {Tag(p, psi) for p in pds.controls if p not in val[psi.name]}
    bp = Abpds(b.base_controls(), b.base_symbols(), tuple(b.rules), frozenset(accepting),
               pds.bottom)
    return bp, QueryMap(phi)


def build_regular(pds: LabelledPds, phi: Formula,
                  val: Mapping[str, MultiAutomaton]) -> tuple[Abpds, QueryMap]:
    """Product for valuations given as multi-automata over the PDS alphabet."""
    _check_atoms(phi, val.keys())
    pos, neg = atoms(phi)
    embedded: dict[tuple[str, bool], MultiAutomaton] = {}
    for e in sorted(pos):
        embedded[e, False] = val[e]
    for e in sorted(neg):
        embedded[e, True] = ma_complement(val[e])
    for (e, _n), ma in embedded.items():
        missing = [p for p in pds.controls if p not in ma.initial_map]
        if missing:
            raise UnknownAtom(f"automaton for {e!r} has no initial state for {missing}")
        extra = set(ma.alphabet) - set(pds.alphabet)
        if extra:
            raise UnknownAtom(f"automaton for {e!r} reads unknown symbol(s) {sorted(extra)}")

    b = _Builder(pds, phi)

    def atom_rule(p, psi, gamma):
        ma = embedded[psi.name, isinstance(psi, NegAtom)]
        vs = ValState(psi.name, isinstance(psi, NegAtom), ma.initial_map[p])
        return _lit((vs, (gamma,)))

    b.common(atom_rule)
    controls = b.base_controls()
    accepting = b.release_accepting()
    for (e, negated), ma in embedded.items():
        states = sorted(ma.states, key=_state_name)
        controls += [ValState(e, negated, s) for s in states]
        for s, a, t in sorted(ma.delta, key=lambda x: (_state_name(x[0]), x[1], _state_name(x[2]))):
            b.emit(ValState(e, negated, s), a, [((ValState(e, negated, t), ()),)])
        for s in states:
            if s in ma.finals:
                vs = ValState(e, negated, s)
                b.emit(vs, pds.bottom, [((vs, (pds.bottom,)),)])
                accepting.add(vs)
    bp = Abpds(controls, b.base_symbols(), tuple(b.rules), frozenset(accepting), pds.bottom)
    return bp, QueryMap(phi)
