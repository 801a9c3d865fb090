"""Exhaustive reference procedures over explicit, height-bounded graphs."""
from __future__ import annotations

from collections import deque

from bcaret.confsets import ama_accepts
from bcaret.pds import Config
from bcaret.product import abpds_successor_sets


def backward_reachable(bp, target, queries, max_height: int) -> dict[Config, bool]:
    """Least fixpoint of "in target, or some rule lands entirely inside".

    Only configurations reachable from ``queries`` with stacks of at most
    ``max_height`` symbols are kept; rules leaving the bound are ignored, so
    the answer can only grow with the bound.
    """
    seen = set(queries)
    todo = deque(queries)
    succ: dict[Config, list[set[Config]]] = {}
    while todo:
        c = todo.popleft()
        options = []
        for s in abpds_successor_sets(bp, c):
            if any(len(d.stack) > max_height for d in s):
                continue
            options.append(s)
            for d in s:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        succ[c] = options
    win = {c: ama_accepts(target, c) for c in seen}
    changed = True
    while changed:
        changed = False
        for c in seen:
            if not win[c] and any(all(win[d] for d in s) for s in succ[c]):
                win[c] = True
                changed = True
    return {c: win[c] for c in queries}


def all_configs(controls, symbols, bottom, max_symbols: int):
    """Every configuration with at most ``max_symbols`` symbols above the bottom."""
    words = [()]
    frontier = [()]
    for _ in range(max_symbols):
        frontier = [w + (s,) for w in frontier for s in symbols]
        words += frontier
    return [Config(p, w + (bottom,)) for p in controls for w in words]
