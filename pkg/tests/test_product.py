from __future__ import annotations

import random

import pytest

from bcaret.confsets import MultiAutomaton, ma_accepts, ma_complement
from bcaret.errors import BottomRewrite, UnknownAtom
from bcaret.formula import Atom, closure, parse_formula
from bcaret.gen import random_formula, random_labelled_pds
from bcaret.pds import BOTTOM_SYMBOL, Config, RuleKind, parse_pds
from bcaret.product import (TRAP, TRAP_SYM, Abpds, AbpdsRule, Tag, ValState, abpds_successor_sets,
                            build_regular, build_standard, dump_abpds)
from golden_rules import FAMILIES, LABELS, T1_EXA_ISR_DUMP, T3, expected, family, head_rules

T1_LABELS = {"isr": {"r"}, "isp": {"p"}}


@pytest.mark.parametrize("key", sorted(FAMILIES))
def test_rule_family_shape(key):
    text, control, symbol, shape = FAMILIES[key]
    phi = parse_formula(text)
    bp, _ = build_standard(parse_pds(T3), phi, LABELS)
    f = str(phi)
    assert head_rules(bp, control.replace("F", f), symbol.replace("F", f)) == expected(f, shape)


def test_all_eighteen_families_covered():
    assert len({family(k) for k in FAMILIES}) == 18


def test_t1_golden_dump(t1):
    bp, _ = build_standard(t1, parse_formula("EX^a isr"), {"isr": {"r"}})
    assert dump_abpds(bp) == T1_EXA_ISR_DUMP


def test_t1_sizes(t1):
    bp, _ = build_standard(t1, parse_formula("EX^a isr"), {"isr": {"r"}})
    assert bp.sizes()["controls"] == 10
    assert bp.sizes()["symbols"] == 10


def test_original_rules_kept(t1):
    bp, _ = build_standard(t1, parse_formula("EX^a isr"), {"isr": {"r"}})
    for r in t1.rules:
        assert AbpdsRule(r.lhs_control, r.lhs_symbol, ((r.rhs_control, r.rhs_word),)) in bp.rules


def test_release_accepting(t1):
    phi = parse_formula("E[ isp R^g isr ]")
    bp, _ = build_standard(t1, phi, T1_LABELS)
    for p in t1.controls:
        assert Tag(p, phi) in bp.accepting
    assert TRAP not in bp.accepting


def test_query_map(t1):
    phi = parse_formula("EX^a isr")
    _bp, query = build_standard(t1, phi, {"isr": {"r"}})
    assert query(t1.config("p", "a")) == Config(Tag("p", phi), ("a", BOTTOM_SYMBOL))


def test_unknown_atom(t1):
    with pytest.raises(UnknownAtom):
        build_standard(t1, parse_formula("EX^a nope"), {"isr": {"r"}})
    with pytest.raises(UnknownAtom):
        build_standard(t1, parse_formula("isr"), {"isr": {"zz"}})


def test_successor_sets():
    e = Atom("e")
    rule = AbpdsRule(Tag("p", e), "a", ((Tag("p", e), ("a",)),))
    bp = Abpds((Tag("p", e),), ("a",), (rule,), frozenset())
    c = Config(Tag("p", e), ("a", BOTTOM_SYMBOL))
    assert abpds_successor_sets(bp, c) == [{c}]
    phi = parse_formula("e && f")
    f1, f2 = phi.left, phi.right
    conj = AbpdsRule(Tag("p", phi), "a", ((Tag("p", f1), ("a",)), (Tag("p", f2), ("a",))))
    bp = Abpds((Tag("p", phi), Tag("p", f1), Tag("p", f2)), ("a",), (conj,), frozenset())
    got = abpds_successor_sets(bp, Config(Tag("p", phi), ("a", BOTTOM_SYMBOL)))
    assert got == [{Config(Tag("p", f1), ("a", BOTTOM_SYMBOL)),
                    Config(Tag("p", f2), ("a", BOTTOM_SYMBOL))}]
    assert abpds_successor_sets(bp, Config(Tag("p", phi), (BOTTOM_SYMBOL,))) == []


def test_abpds_bottom_discipline():
    with pytest.raises(BottomRewrite):
        Abpds(("p",), ("a",), (AbpdsRule("p", BOTTOM_SYMBOL, (("p", ("a",)),)),), frozenset())
    with pytest.raises(BottomRewrite):
        Abpds(("p",), ("a",), (AbpdsRule("p", "a", (("p", (BOTTOM_SYMBOL,)),)),), frozenset())


def _instances(n, seed):
    rng = random.Random(seed)
    for _ in range(n):
        pds = random_labelled_pds(rng)
        phi = random_formula(rng, 3)
        f = {e: {p for p in pds.controls if rng.random() < 0.5} for e in ("e0", "e1", "e2")}
        yield pds, phi, f


def test_size_bounds_and_well_formedness():
    for pds, phi, f in _instances(80, 21):
        bp, _ = build_standard(pds, phi, f)
        n = len(closure(phi))
        assert len(bp.controls) <= len(pds.controls) * (n + 1) + 1
        assert len(bp.symbols) <= len(pds.alphabet) * (n + 1) + 1
        cl = set(closure(phi))
        for r in bp.rules:
            for _q, w in r.targets:
                for s in w:
                    if isinstance(s, Tag):
                        assert s.formula in cl


def test_extraction_rules_present():
    for pds, phi, f in _instances(60, 22):
        bp, _ = build_standard(pds, phi, f)
        for r in pds.rules:
            if r.kind is not RuleKind.RET:
                continue
            for g in pds.alphabet:
                for psi in closure(phi):
                    want = AbpdsRule(r.rhs_control, Tag(g, psi), ((Tag(r.rhs_control, psi), (g,)),))
                    assert want in bp.rules


def test_trap_loop_present():
    for pds, phi, f in _instances(20, 23):
        bp, _ = build_standard(pds, phi, f)
        assert AbpdsRule(TRAP, TRAP_SYM, ((TRAP, (TRAP_SYM,)),)) in bp.rules


def _m_d(pds, d):
    sigma = pds.alphabet
    delta = {("s0", d, "f")} | {("f", g, "f") for g in sigma}
    return MultiAutomaton(frozenset({"s0", "f"}), sigma, frozenset(delta),
                          {p: "s0" for p in pds.controls}, frozenset({"f"}))


def test_regular_value_states():
    pds = parse_pds(T3)
    md = _m_d(pds, "a")
    bp, _ = build_regular(pds, parse_formula("EX^g top"), {"top": md})
    vs = [c for c in bp.controls if isinstance(c, ValState)]
    assert len(vs) == 2
    bp, _ = build_regular(pds, parse_formula("top && EX^g !top"), {"top": md})
    assert len([c for c in bp.controls if isinstance(c, ValState) and not c.negated]) == 2
    assert len([c for c in bp.controls if isinstance(c, ValState) and c.negated]) == \
        len(ma_complement(md).states)


def test_regular_bottom_loops_per_final():
    pds = parse_pds(T3)
    md = _m_d(pds, "a")
    bp, _ = build_regular(pds, parse_formula("top && EX^g !top"), {"top": md})
    loops = [r for r in bp.rules if r.symbol == BOTTOM_SYMBOL and isinstance(r.control, ValState)
             and r.targets == ((r.control, (BOTTOM_SYMBOL,)),)]
    comp = ma_complement(md)
    assert len(loops) == len(md.finals) + len(comp.finals)


def test_regular_atoms_rules():
    pds = parse_pds(T3)
    md = _m_d(pds, "a")
    phi = parse_formula("top")
    bp, _ = build_regular(pds, phi, {"top": md})
    start = ValState("top", False, "s0")
    assert set(head_rules(bp, "[p, top]", "a")) == {frozenset({f"{start} a"})}
    move = AbpdsRule(start, "a", ((ValState("top", False, "f"), ()),))
    assert move in bp.rules
    # no atom loops in the regular build
    assert not any(r.control == Tag("p", phi) and r.targets == ((Tag("p", phi), ("a",)),)
                   for r in bp.rules)


def test_complement_partitions_sampled_configs():
    rng = random.Random(24)
    pds = parse_pds(T3)
    md = _m_d(pds, "a")
    comp = ma_complement(md)
    for _ in range(200):
        w = tuple(rng.choice(pds.alphabet) for _ in range(rng.randint(0, 4)))
        c = Config(rng.choice(pds.controls), w + (BOTTOM_SYMBOL,))
        assert ma_accepts(md, c) != ma_accepts(comp, c)
