"""Backward saturation for alternating pushdown systems."""
from __future__ import annotations

from itertools import product as cartesian

from ..confsets import AltMultiAutomaton, ama_frontiers
from ..product import Abpds


def normalize_initials(target: AltMultiAutomaton, controls) -> AltMultiAutomaton:
    """Copy of ``target`` whose initial states are fresh and have no incoming edges.

    Every listed control gets an initial state, possibly without transitions.
    """
    init = {}
    delta = set(target.delta)
    states = set(target.states)
    finals = set(target.finals)
    for p in controls:
        fresh = ("init", p)
        while fresh in states:
            fresh = ("init", fresh)
        states.add(fresh)
        init[p] = fresh
        old = target.initial_map.get(p)
        if old is None:
            continue
        for s, a, t in target.delta:
            if s == old:
                delta.add((fresh, a, t))
        if old in finals:
            finals.add(fresh)
    return AltMultiAutomaton(frozenset(states), target.alphabet, frozenset(delta), init,
                             frozenset(finals))


def pre_star(bp: Abpds, target: AltMultiAutomaton) -> AltMultiAutomaton:
    """Configurations from which some finite run tree ends inside ``target``."""
    aut = normalize_initials(target, bp.controls)
    init = aut.initial_map
    delta = set(aut.delta)
    changed = True
    while changed:
        changed = False
        cur = AltMultiAutomaton(aut.states, aut.alphabet, frozenset(delta), init, aut.finals)
        for r in bp.rules:
            options = [ama_frontiers(cur, init[q], w) for q, w in r.targets]
            if any(not o for o in options):
                continue
            for pick in cartesian(*options):
                t = (init[r.control], r.symbol, frozenset().union(*pick))
                if t not in delta:
                    delta.add(t)
                    changed = True
    return AltMultiAutomaton(aut.states, aut.alphabet, frozenset(delta), init, aut.finals)
