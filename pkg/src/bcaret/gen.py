"""Seeded random instance generators used by the property tests."""
from __future__ import annotations

import random

from .pds import BOTTOM_SYMBOL, Config, LabelledPds, LabelledRule, RuleKind
from .product import Abpds, AbpdsRule


def random_abpds(rng: random.Random, max_controls: int = 3, max_symbols: int = 3,
                 max_rules: int = 8, max_targets: int = 2, bottom_rules: bool = True) -> Abpds:
    controls = [f"p{i}" for i in range(rng.randint(1, max_controls))]
    symbols = [f"a{i}" for i in range(rng.randint(1, max_symbols))]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        p = rng.choice(controls)
        on_bottom = bottom_rules and rng.random() < 0.2
        g = BOTTOM_SYMBOL if on_bottom else rng.choice(symbols)
        n = rng.choice([0] + [k for k in range(1, max_targets + 1) for _ in range(3)])
        targets = []
        for _ in range(n):
            q = rng.choice(controls)
            if on_bottom:
                w = tuple(rng.choice(symbols) for _ in range(rng.randint(0, 1))) + (BOTTOM_SYMBOL,)
            else:
                w = tuple(rng.choice(symbols) for _ in range(rng.randint(0, 2)))
            if (q, w) not in targets:
                targets.append((q, w))
        rules.append(AbpdsRule(p, g, tuple(targets)))
    accepting = frozenset(q for q in controls if rng.random() < 0.5)
    return Abpds(tuple(controls), tuple(symbols), tuple(dict.fromkeys(rules)), accepting)


def random_config(rng: random.Random, controls, symbols, max_height: int = 3) -> Config:
    h = rng.randint(0, max_height)
    return Config(rng.choice(list(controls)),
                  tuple(rng.choice(list(symbols)) for _ in range(h)) + (BOTTOM_SYMBOL,))


MAIN = "z"


def random_labelled_pds(rng: random.Random, max_controls: int = 3, max_frame_symbols: int = 2,
                        extra_rules: int = 4) -> LabelledPds:
    """A random system with a main frame symbol ``z`` that is never popped.

    Every head has at least one rule, so no reachable configuration is dead.
    Internal rules rewrite exactly one symbol and ``z`` only ever becomes
    ``z`` again or a return point below a call.
    """
    controls = [f"p{i}" for i in range(rng.randint(2, max_controls))]
    frame = [f"s{i}" for i in range(1, rng.randint(1, max_frame_symbols) + 1)]
    alphabet = [MAIN] + frame

    def rule_for(p: str, g: str) -> LabelledRule:
        q = rng.choice(controls)
        if g == MAIN:
            if rng.random() < 0.5:
                return LabelledRule(p, g, q, (MAIN,), RuleKind.INT)
            return LabelledRule(p, g, q, (rng.choice(frame), MAIN), RuleKind.CALL)
        kind = rng.choice([RuleKind.INT, RuleKind.RET, RuleKind.RET, RuleKind.CALL])
        if kind is RuleKind.INT:
            return LabelledRule(p, g, q, (rng.choice(frame),), kind)
        if kind is RuleKind.RET:
            return LabelledRule(p, g, q, (), kind)
        return LabelledRule(p, g, q, (rng.choice(frame), rng.choice(frame)), kind)

    rules = [rule_for(p, g) for p in controls for g in alphabet]
    for _ in range(rng.randint(0, extra_rules)):
        rules.append(rule_for(rng.choice(controls), rng.choice(alphabet)))
    return LabelledPds(tuple(controls), tuple(alphabet), tuple(dict.fromkeys(rules)))


def random_query(rng: random.Random, pds: LabelledPds, max_frames: int = 1) -> Config:
    frame = [s for s in pds.alphabet if s != MAIN]
    word = tuple(rng.choice(frame) for _ in range(rng.randint(0, max_frames)))
    return pds.config(rng.choice(pds.controls), *word, MAIN)


def random_formula(rng: random.Random, depth: int, names=("e0", "e1", "e2")):
    from .formula import (AR, AU, AX, ER, EU, EX, FALSE, TRUE, And, Atom, NegAtom, Or,
                          Step)
    if depth == 0 or rng.random() < 0.2:
        x = rng.random()
        if x < 0.06:
            return TRUE
        if x < 0.1:
            return FALSE
        name = rng.choice(names)
        return Atom(name) if x < 0.6 else NegAtom(name)
    step = rng.choice([Step.G, Step.A_STEP])
    op = rng.choice(["and", "or", "EX", "AX", "EU", "AU", "ER", "AR"])
    sub = lambda: random_formula(rng, depth - 1, names)
    if op == "and":
        return And(sub(), sub())
    if op == "or":
        return Or(sub(), sub())
    if op in ("EX", "AX"):
        return (EX if op == "EX" else AX)(step, sub())
    cls = {"EU": EU, "AU": AU, "ER": ER, "AR": AR}[op]
    return cls(step, sub(), sub())


def random_state_labelling(rng: random.Random, controls, names=("e0", "e1", "e2")) -> dict:
    return {e: frozenset(p for p in controls if rng.random() < 0.5) for e in names}


def random_regular_labelling(rng: random.Random, pds: LabelledPds,
                             names=("e0", "e1", "e2")) -> dict:
    """Mix of control sets and small automata over the stack."""
    from .confsets import ma_prefix
    out: dict = {}
    for e in names:
        if rng.random() < 0.5:
            out[e] = frozenset(p for p in pds.controls if rng.random() < 0.5)
            continue
        k = rng.randint(1, 2)
        prefix = [frozenset(s for s in pds.alphabet if rng.random() < 0.5) or
                  frozenset({rng.choice(pds.alphabet)}) for _ in range(k)]
        out[e] = ma_prefix(prefix, pds.controls, pds.alphabet)
    return out
