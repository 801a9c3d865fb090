"""Regular sets of configurations.

``MultiAutomaton`` is the nondeterministic kind used for regular valuations;
its words are stacks with the bottom symbol stripped.  ``AltMultiAutomaton``
has conjunctive transitions and reads the full stack, bottom included.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Hashable, Iterable, Mapping

from .pds import BOTTOM_SYMBOL, Config

State = Hashable


@dataclass(frozen=True)
class MultiAutomaton:
    states: frozenset
    alphabet: tuple[str, ...]
    delta: frozenset  # of (state, symbol, state)
    initial_map: Mapping[str, State]
    finals: frozenset
    _succ: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "delta", frozenset(self.delta))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial_map", dict(self.initial_map))
        succ: dict = {}
        for s, a, t in self.delta:
            if s not in self.states or t not in self.states:
                raise ValueError(f"transition {(s, a, t)} uses an undeclared state")
            if a not in self.alphabet:
                raise ValueError(f"transition {(s, a, t)} uses an undeclared symbol")
            succ.setdefault((s, a), set()).add(t)
        for q in self.initial_map.values():
            if q not in self.states:
                raise ValueError(f"initial state {q!r} is not declared")
        object.__setattr__(self, "_succ", {k: frozenset(v) for k, v in succ.items()})

    def step(self, current: Iterable[State], symbol: str) -> set:
        out: set = set()
        for s in current:
            out |= self._succ.get((s, symbol), frozenset())
        return out

    def accepts_word(self, start: State, word: Iterable[str]) -> bool:
        cur = {start}
        for a in word:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.finals)

    def with_controls(self, controls: Iterable[str], state: State) -> "MultiAutomaton":
        init = dict(self.initial_map)
        for p in controls:
            init.setdefault(p, state)
        return MultiAutomaton(self.states | {state}, self.alphabet, self.delta, init, self.finals)


def ma_accepts(ma: MultiAutomaton, c: Config, bottom: str = BOTTOM_SYMBOL) -> bool:
    """Does ``ma`` recognise ``c``?  The bottom symbol is not read."""
    if c.control not in ma.initial_map:
        raise KeyError(f"no initial state for control {c.control!r}")
    word = c.stack[:-1] if c.stack and c.stack[-1] == bottom else c.stack
    return ma.accepts_word(ma.initial_map[c.control], word)


def ma_complement(ma: MultiAutomaton) -> MultiAutomaton:
    """Per-control determinisation with inverted finals.

    States of the result are pairs ``(control, subset)``, so the copies for
    different controls are disjoint and no original state name is reused.
    """
    states: set = set()
    delta: set = set()
    finals: set = set()
    init: dict = {}
    for p in sorted(ma.initial_map):
        start = (p, frozenset({ma.initial_map[p]}))
        init[p] = start
        todo = deque([start])
        states.add(start)
        while todo:
            node = todo.popleft()
            if not (node[1] & ma.finals):
                finals.add(node)
            for a in ma.alphabet:
                nxt = (p, frozenset(ma.step(node[1], a)))
                delta.add((node, a, nxt))
                if nxt not in states:
                    states.add(nxt)
                    todo.append(nxt)
    return MultiAutomaton(frozenset(states), ma.alphabet, frozenset(delta), init, frozenset(finals))


def ma_for_controls(controls: Iterable[str], all_controls: Iterable[str],
                    alphabet: Iterable[str]) -> MultiAutomaton:
    """The set {p : p in controls} x Gamma*, as a two-state automaton."""
    chosen = set(controls)
    alphabet = tuple(alphabet)
    delta = {("yes", a, "yes") for a in alphabet}
    init = {p: ("yes" if p in chosen else "no") for p in all_controls}
    return MultiAutomaton(frozenset({"yes", "no"}), alphabet, frozenset(delta), init,
                          frozenset({"yes"}))


def ma_prefix(prefix: Iterable[Iterable[str]], controls: Iterable[str],
              alphabet: Iterable[str]) -> MultiAutomaton:
    """Stacks whose i-th symbol lies in ``prefix[i]``, followed by anything."""
    alphabet = tuple(alphabet)
    prefix = [set(x) for x in prefix]
    n = len(prefix)
    delta = set()
    for i, allowed in enumerate(prefix):
        for a in allowed:
            delta.add((i, a, i + 1))
    for a in alphabet:
        delta.add((n, a, n))
    init = {p: 0 for p in controls}
    return MultiAutomaton(frozenset(range(n + 1)), alphabet, frozenset(delta), init,
                          frozenset({n}))


# -- alternating multi-automata ----------------------------------------------

@dataclass(frozen=True)
class AltMultiAutomaton:
    states: frozenset
    alphabet: tuple
    delta: frozenset  # of (state, symbol, frozenset of states)
    initial_map: Mapping[Hashable, State]
    finals: frozenset
    _out: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial_map", dict(self.initial_map))
        delta = frozenset((s, a, frozenset(t)) for s, a, t in self.delta)
        object.__setattr__(self, "delta", delta)
        out: dict = {}
        for s, a, t in delta:
            out.setdefault((s, a), []).append(t)
        object.__setattr__(self, "_out", out)

    def targets(self, state: State, symbol) -> list[frozenset]:
        return self._out.get((state, symbol), [])

    @property
    def transition_count(self) -> int:
        return len(self.delta)


def minimize_sets(sets: Iterable[frozenset]) -> set[frozenset]:
    """Drop every set that strictly contains another one."""
    ordered = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def _step_frontier(ama: AltMultiAutomaton, frontier: frozenset, symbol) -> set[frozenset]:
    choices = []
    for s in frontier:
        opts = ama.targets(s, symbol)
        if not opts:
            return set()
        choices.append(opts)
    return minimize_sets(frozenset().union(*pick) for pick in cartesian(*choices))


def _step_family(ama: AltMultiAutomaton, family: Iterable[frozenset], symbol) -> set[frozenset]:
    out: set[frozenset] = set()
    for fr in family:
        out |= _step_frontier(ama, fr, symbol)
    return minimize_sets(out)


def ama_frontiers(ama: AltMultiAutomaton, start: State, word) -> set[frozenset]:
    """Minimal frontiers reachable by consuming ``word`` from ``start``."""
    family = {frozenset({start})}
    for symbol in word:
        family = _step_family(ama, family, symbol)
        if not family:
            break
    return family


def ama_accepts(ama: AltMultiAutomaton, c: Config) -> bool:
    if c.control not in ama.initial_map:
        raise KeyError(f"no initial state for control {c.control!r}")
    return any(fr <= ama.finals for fr in ama_frontiers(ama, ama.initial_map[c.control], c.stack))


def universal_ama(controls: Iterable, alphabet: Iterable) -> AltMultiAutomaton:
    """Accepts every configuration over the given controls."""
    alphabet = tuple(alphabet)
    init = {p: ("init", p) for p in controls}
    delta = {(s, a, frozenset({"all"})) for s in list(init.values()) + ["all"] for a in alphabet}
    return AltMultiAutomaton(frozenset(init.values()) | {"all"}, alphabet, frozenset(delta),
                             init, frozenset({"all"}))


def empty_ama(controls: Iterable, alphabet: Iterable) -> AltMultiAutomaton:
    init = {p: ("init", p) for p in controls}
    return AltMultiAutomaton(frozenset(init.values()), tuple(alphabet), frozenset(), init,
                             frozenset())


def ama_included(a: AltMultiAutomaton, b: AltMultiAutomaton, pairs,
                 bottom=BOTTOM_SYMBOL) -> bool:
    """Is every configuration word accepted from x in ``a`` also accepted from y in ``b``?

    Explores pairs of frontier families over words ``w #`` where ``w`` avoids
    the bottom symbol.  Both families live in finite lattices, so the search
    terminates.
    """
    body = [s for s in a.alphabet if s != bottom]
    for x, y in pairs:
        start = (frozenset({frozenset({a.initial_map[x]})}),
                 frozenset({frozenset({b.initial_map[y]})}))
        seen = {start}
        todo = deque([start])
        while todo:
            fa, fb = todo.popleft()
            end_a = _step_family(a, fa, bottom)
            if any(fr <= a.finals for fr in end_a):
                end_b = _step_family(b, fb, bottom)
                if not any(fr <= b.finals for fr in end_b):
                    return False
            for sym in body:
                na = frozenset(_step_family(a, fa, sym))
                if not na:
                    continue
                nxt = (na, frozenset(_step_family(b, fb, sym)))
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return True
