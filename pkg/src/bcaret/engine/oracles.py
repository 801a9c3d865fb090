"""Two independent checks for the symbolic engine.

``bounded_game_oracle`` solves the ABPDS acceptance game explicitly on a
height-bounded slice of the configuration graph.  ``semantic_oracle``
evaluates a formula directly on the reachable configurations of a labelled
PDS, without building any product.
"""
from __future__ import annotations

import enum
from collections import deque
from typing import Mapping

from ..confsets import MultiAutomaton, ma_accepts
from ..errors import UnknownAtom
from ..formula import (AU, AX, ER, EU, EX, And, Atom, FalseF, Formula, NegAtom, Or,
                       Step, TrueF, atoms, closure)
from ..pds import Config, LabelledPds, RuleKind, immediate_successors, reachable
from ..product import Abpds


class OracleMode(enum.Enum):
    PESSIMISTIC = "pessimistic"
    OPTIMISTIC = "optimistic"
    BOTH = "both"


class GameResult(enum.Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"
    UNKNOWN = "UNKNOWN"


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


def solve_buchi(owner_e: list[bool], succ: list[list[int]], acc: list[bool]) -> list[bool]:
    """Winning region of the existential player for a Buchi objective.

    An existential node without successors is lost, a universal one is won.
    """
    n = len(succ)
    pred: list[list[int]] = [[] for _ in range(n)]
    for v, ws in enumerate(succ):
        for w in ws:
            pred[w].append(v)
    z = [True] * n
    while True:
        def cpre(v, s):
            if owner_e[v]:
                return any(s[w] for w in succ[v])
            return all(s[w] for w in succ[v])

        base = [z[v] and acc[v] and cpre(v, z) for v in range(n)]
        # attractor of base
        y = list(base)
        count = [len(ws) for ws in succ]
        todo = deque(v for v in range(n) if y[v])
        for v in range(n):
            if not owner_e[v] and not succ[v] and not y[v]:
                y[v] = True
                todo.append(v)
        while todo:
            w = todo.popleft()
            for v in pred[w]:
                if y[v]:
                    continue
                if owner_e[v]:
                    y[v] = True
                    todo.append(v)
                else:
                    count[v] -= 1
                    if count[v] == 0:
                        y[v] = True
                        todo.append(v)
        if y == z:
            return z
        z = y


def bounded_game_oracle(bp: Abpds, c: Config, bound: int,
                        mode: OracleMode = OracleMode.BOTH,
                        max_nodes: int = 200_000) -> GameResult:
    """Explicit acceptance game restricted to stacks of height at most ``bound``."""
    if bound < len(c.stack):
        raise ValueError("bound must be at least the height of the query")
    index: dict = {}
    owner: list[bool] = []
    succ: list[list[int]] = []
    acc: list[bool] = []
    over_nodes: list[int] = []

    def node(kind, owner_e, accepting) -> int:
        index[kind] = len(owner)
        owner.append(owner_e)
        succ.append([])
        acc.append(accepting)
        return index[kind]

    over = node(("over",), True, True)
    over_nodes.append(over)
    root = node(c, True, c.control in bp.accepting)
    todo = deque([(c, root)])
    while todo:
        cfg, v = todo.popleft()
        if len(owner) > max_nodes:
            return GameResult.UNKNOWN
        tail = cfg.stack[1:]
        for i, r in enumerate(bp.rules_for(cfg.control, cfg.stack[0])):
            a = node((cfg, i), False, False)
            succ[v].append(a)
            for q, w in r.targets:
                d = Config(q, tuple(w) + tail)
                if len(d.stack) > bound:
                    succ[a].append(over)
                    continue
                if d not in index:
                    dv = node(d, True, q in bp.accepting)
                    todo.append((d, dv))
                succ[a].append(index[d])

    def solve(optimistic: bool) -> bool:
        s = [list(x) for x in succ]
        s[over] = [over]
        acc[over] = optimistic
        return solve_buchi(owner, s, acc)[root]

    if mode in (OracleMode.PESSIMISTIC, OracleMode.BOTH) and solve(False):
        return GameResult.ACCEPT
    if mode in (OracleMode.OPTIMISTIC, OracleMode.BOTH) and not solve(True):
        return GameResult.REJECT
    return GameResult.UNKNOWN


# -- direct formula evaluation -------------------------------------------------

def atom_checker(pds: LabelledPds, labelling: Mapping):
    """Membership test ``(atom, config) -> bool`` for either kind of labelling."""
    def check(name: str, c: Config) -> bool:
        val = labelling[name]
        if isinstance(val, MultiAutomaton):
            return ma_accepts(val, c, pds.bottom)
        return c.control in val
    return check


def semantic_oracle(pds: LabelledPds, phi: Formula, labelling: Mapping, c: Config,
                    max_height: int = 16, max_nodes: int = 20_000) -> Status:
    """Evaluate ``phi`` at ``c`` on the explicit reachable configuration graph.

    Until operators are least fixpoints and release operators greatest
    fixpoints.  An abstract step over a call may land on any matching
    return; a return step has no abstract successor that satisfies
    anything.  Returns UNKNOWN when the reachable graph exceeds the caps.
    """
    pos, neg = atoms(phi)
    missing = sorted((pos | neg) - set(labelling))
    if missing:
        raise UnknownAtom(f"no valuation for atom(s) {', '.join(missing)}")
    nodes, complete = reachable(pds, c, max_height, max_nodes)
    if not complete:
        return Status.UNKNOWN
    order = sorted(nodes, key=lambda x: (len(x.stack), str(x)))
    idx = {x: i for i, x in enumerate(order)}
    n = len(order)
    gsucc: list[list[int]] = []
    amoves: list[list[list[int]]] = []
    for x in order:
        steps = immediate_successors(pds, x)
        gsucc.append([idx[d] for _r, d in steps])
        moves = []
        for r, d in steps:
            if r.kind is RuleKind.INT:
                moves.append([idx[d]])
            elif r.kind is RuleKind.RET:
                moves.append([])
            else:
                moves.append(sorted(idx[y] for y in _returns(pds, d, len(x.stack))))
        amoves.append(moves)
    gmoves = [[[w] for w in ws] for ws in gsucc]
    holds = atom_checker(pds, labelling)

    val: dict[Formula, list[bool]] = {}
    for psi in closure(phi):
        if isinstance(psi, TrueF):
            val[psi] = [True] * n
        elif isinstance(psi, FalseF):
            val[psi] = [False] * n
        elif isinstance(psi, Atom):
            val[psi] = [holds(psi.name, x) for x in order]
        elif isinstance(psi, NegAtom):
            val[psi] = [not holds(psi.name, x) for x in order]
        elif isinstance(psi, And):
            a, b = val[psi.left], val[psi.right]
            val[psi] = [a[i] and b[i] for i in range(n)]
        elif isinstance(psi, Or):
            a, b = val[psi.left], val[psi.right]
            val[psi] = [a[i] or b[i] for i in range(n)]
        else:
            moves = gmoves if psi.step is Step.G else amoves
            val[psi] = _temporal(psi, moves, val, n)
    return Status.SAT if val[phi][idx[c]] else Status.UNSAT


def _returns(pds: LabelledPds, start: Config, height: int) -> set[Config]:
    found: set[Config] = set()
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for _r, d in immediate_successors(pds, x):
            if len(d.stack) <= height:
                found.add(d)
            elif d not in seen:
                seen.add(d)
                todo.append(d)
    return found


def _temporal(psi: Formula, moves, val, n: int) -> list[bool]:
    def move_ok(alts, s):
        return any(s[w] for w in alts)

    if isinstance(psi, EX):
        s = val[psi.sub]
        return [any(move_ok(m, s) for m in moves[i]) for i in range(n)]
    if isinstance(psi, AX):
        s = val[psi.sub]
        return [all(move_ok(m, s) for m in moves[i]) for i in range(n)]
    s1, s2 = val[psi.left], val[psi.right]
    until = isinstance(psi, (EU, AU))
    exists = isinstance(psi, (EU, ER))
    guard = s1 if until else s2
    stop = s2 if until else [s1[i] and s2[i] for i in range(n)]
    z = [False] * n if until else [True] * n
    while True:
        new = []
        for i in range(n):
            if stop[i]:
                new.append(True)
                continue
            ms = moves[i]
            if exists:
                ok = guard[i] and any(move_ok(m, z) for m in ms)
            else:
                ok = not ms or (guard[i] and all(move_ok(m, z) for m in ms))
            new.append(ok)
        if new == z:
            return z
        z = new
