from __future__ import annotations

import random

import pytest

from bcaret.confsets import AltMultiAutomaton, ama_accepts
from bcaret.engine import (EngineOptions, GameResult, OracleMode, Status, accepting_region,
                           bounded_game_oracle, member, model_check, pre_star, semantic_oracle,
                           solve_buchi)
from bcaret.errors import ModelError
from bcaret.formula import AR, EU, Atom, NegAtom, Step, negate, parse_formula, retag_steps
from bcaret.gen import (random_abpds, random_config, random_formula, random_labelled_pds,
                        random_query, random_state_labelling)
from bcaret.pds import BOTTOM_SYMBOL, Config, RuleKind
from bcaret.product import TRAP, TRAP_SYM, abpds_from_pds, build_standard
from bruteforce import all_configs, backward_reachable


def cfg(p, *w):
    return Config(p, tuple(w) + (BOTTOM_SYMBOL,))


def _exactly_rc(controls):
    init = {p: ("i", p) for p in controls}
    delta = {(("i", "r"), "c", frozenset({"s"})), ("s", BOTTOM_SYMBOL, frozenset({"f"}))}
    return AltMultiAutomaton(frozenset(init.values()) | {"s", "f"}, ("a", "b", "c", BOTTOM_SYMBOL),
                             frozenset(delta), init, frozenset({"f"}))


def test_pre_star_examples(t1):
    bp = abpds_from_pds(t1, ())
    target = _exactly_rc(t1.controls)
    pre = pre_star(bp, target)
    assert ama_accepts(pre, cfg("p", "a"))
    assert ama_accepts(pre, cfg("q", "b", "c"))
    assert not ama_accepts(pre, cfg("r", "a"))
    for c in all_configs(t1.controls, t1.alphabet, BOTTOM_SYMBOL, 3):
        want = backward_reachable(bp, target, [c], 8)[c]
        assert ama_accepts(pre, c) == want


def _random_target(rng, bp):
    states = [0, 1, 2]
    init = {p: rng.choice(states) for p in bp.controls}
    alphabet = tuple(bp.symbols) + (BOTTOM_SYMBOL,)
    delta = set()
    for _ in range(rng.randint(1, 6)):
        delta.add((rng.choice(states), rng.choice(alphabet),
                   frozenset(rng.sample(states, rng.randint(0, 2)))))
    return AltMultiAutomaton(frozenset(states), alphabet, frozenset(delta), init,
                             frozenset(s for s in states if rng.random() < 0.5))


def test_pre_star_extensive_and_matches_brute_force():
    rng = random.Random(31)
    for _ in range(30):
        bp = random_abpds(rng)
        target = _random_target(rng, bp)
        pre = pre_star(bp, target)
        configs = all_configs(bp.controls, bp.symbols, BOTTOM_SYMBOL, 3)
        low = backward_reachable(bp, target, configs, 8)
        high = backward_reachable(bp, target, configs, 10)
        for c in configs:
            if ama_accepts(target, c):
                assert ama_accepts(pre, c)
            if low[c] == high[c]:
                assert ama_accepts(pre, c) == high[c]


def test_region_and_member_t1(t1):
    good = abpds_from_pds(t1, {"r"})
    bad = abpds_from_pds(t1, {"q"})
    region, converged = accepting_region(good)
    assert converged
    assert ama_accepts(region, cfg("p", "a"))
    region, _ = accepting_region(bad)
    assert not ama_accepts(region, cfg("p", "a"))
    assert member(good, cfg("p", "a")).status is Status.SAT
    assert member(bad, cfg("p", "a")).status is Status.UNSAT


def test_trap_is_rejected(t1):
    bp, _ = build_standard(t1, parse_formula("EX^a isr"), {"isr": {"r"}})
    trap = Config(TRAP, (TRAP_SYM, BOTTOM_SYMBOL))
    assert member(bp, trap).status is Status.UNSAT
    region, _ = accepting_region(bp)
    assert not ama_accepts(region, trap)


def test_member_rejects_malformed(t1):
    bp = abpds_from_pds(t1, {"r"})
    with pytest.raises(ModelError):
        member(bp, Config("p", ("a",)))
    with pytest.raises(ModelError):
        member(bp, cfg("zz", "a"))


def test_bounded_game_examples(t1, t2):
    assert bounded_game_oracle(abpds_from_pds(t1, {"r"}), cfg("p", "a"), 4) is GameResult.ACCEPT
    assert bounded_game_oracle(abpds_from_pds(t1, {"q"}), cfg("p", "a"), 6) is GameResult.REJECT
    assert bounded_game_oracle(abpds_from_pds(t2, {"p"}), cfg("p", "a"), 4) is GameResult.UNKNOWN
    with pytest.raises(ValueError):
        bounded_game_oracle(abpds_from_pds(t1, {"r"}), cfg("p", "a"), 1)


def test_bounded_game_modes(t2):
    bp = abpds_from_pds(t2, {"p"})
    c = cfg("p", "a")
    assert bounded_game_oracle(bp, c, 4, OracleMode.PESSIMISTIC) is GameResult.UNKNOWN
    assert bounded_game_oracle(bp, c, 4, OracleMode.OPTIMISTIC) is GameResult.UNKNOWN


def test_solve_buchi_small():
    # 0 -> 1 -> 0 with 1 accepting; 2 is an existential dead end
    assert solve_buchi([True, True, True], [[1], [0], []], [False, True, False]) == \
        [True, True, False]
    # universal node must follow both edges; one leads to a non-accepting loop
    assert solve_buchi([False, True, True], [[1, 2], [1], [2]], [False, True, False]) == \
        [False, True, False]
    # universal dead end is won
    assert solve_buchi([False], [[]], [False]) == [True]


def test_semantic_oracle_examples(t1):
    f = {"isr": {"r"}}
    assert semantic_oracle(t1, parse_formula("EX^a isr"), f, cfg("p", "a")) is Status.SAT
    assert semantic_oracle(t1, parse_formula("EX^a true"), f, cfg("q", "b", "c")) is Status.UNSAT
    assert semantic_oracle(t1, parse_formula("E[ true U^g isr ]"), f, cfg("p", "a")) is Status.SAT


def test_model_check_t1(t1):
    v = model_check(t1, parse_formula("EX^a isr"), {"isr": {"r"}}, cfg("p", "a"), certify=True)
    assert v.status is Status.SAT
    assert v.certified is GameResult.ACCEPT
    assert v.as_dict()["verdict"] == "SAT"


def test_engine_options_validate():
    with pytest.raises(ValueError):
        EngineOptions(max_outer_iterations=0)
    with pytest.raises(ValueError):
        EngineOptions(oracle_bound=0)


def test_unknown_on_iteration_cap():
    rng = random.Random(40)
    for _ in range(200):
        bp = random_abpds(rng)
        c = random_config(rng, bp.controls, bp.symbols)
        full = member(bp, c)
        capped = member(bp, c, EngineOptions(max_outer_iterations=1))
        assert capped.status in (full.status, Status.UNKNOWN)
        if full.iterations > 1:
            assert capped.status is Status.UNKNOWN


def test_region_agrees_with_member():
    rng = random.Random(41)
    for _ in range(100):
        bp = random_abpds(rng)
        region, converged = accepting_region(bp)
        assert converged
        for _ in range(5):
            c = random_config(rng, bp.controls, bp.symbols)
            assert ama_accepts(region, c) == (member(bp, c).status is Status.SAT)


def test_member_agrees_with_game_small():
    rng = random.Random(42)
    checked = 0
    for _ in range(150):
        bp = random_abpds(rng)
        for _ in range(5):
            c = random_config(rng, bp.controls, bp.symbols)
            g = bounded_game_oracle(bp, c, 6)
            if g is GameResult.UNKNOWN:
                continue
            checked += 1
            assert member(bp, c).sat == (g is GameResult.ACCEPT)
    assert checked > 300


def test_model_check_agrees_with_semantics_small():
    rng = random.Random(43)
    checked = 0
    for _ in range(60):
        pds = random_labelled_pds(rng)
        f = random_state_labelling(rng, pds.controls)
        for _ in range(3):
            phi = random_formula(rng, 3)
            c = random_query(rng, pds)
            sem = semantic_oracle(pds, phi, f, c)
            if sem is Status.UNKNOWN:
                continue
            checked += 1
            assert model_check(pds, phi, f, c).status is sem
    assert checked > 100


def test_return_step_falsifies_both_duals(t1):
    # the abstract successor of a return step satisfies nothing, so a formula
    # and its dual can both be false there
    f = {"isr": {"r"}, "isq": {"q"}}
    c = cfg("q", "b", "c")
    for text in ("E[ isq U^a isr ]", "A[ !isq R^a !isr ]", "EX^a true", "AX^a false"):
        v = model_check(t1, parse_formula(text), f, c, certify=True)
        assert (v.status, v.certified) == (Status.UNSAT, GameResult.REJECT)


def test_global_duality_on_literals():
    rng = random.Random(44)
    checked = 0
    for _ in range(40):
        pds = random_labelled_pds(rng)
        f = random_state_labelling(rng, pds.controls)
        for _ in range(3):
            f1 = rng.choice([Atom, NegAtom])(rng.choice(sorted(f)))
            f2 = rng.choice([Atom, NegAtom])(rng.choice(sorted(f)))
            c = random_query(rng, pds)
            a = model_check(pds, EU(Step.G, f1, f2), f, c).status
            b = model_check(pds, AR(Step.G, negate(f1), negate(f2)), f, c).status
            checked += 1
            assert a is not b
    assert checked == 120


def test_global_formulas_ignore_rule_kinds():
    rng = random.Random(45)
    for _ in range(40):
        pds = random_labelled_pds(rng)
        f = random_state_labelling(rng, pds.controls)
        other = pds.retagged([rng.choice(list(RuleKind)) for _ in pds.rules])
        phi = retag_steps(random_formula(rng, 3), Step.G)
        c = random_query(rng, pds)
        assert model_check(pds, phi, f, c).status is model_check(other, phi, f, c).status
