"""Hand-derived expected product rules, one entry per rule family.

System T3: (p,a) has an internal and a call rule, (r,b) returns.
Atoms: x holds at q, y holds at r.  ``x`` and ``y`` stand for the tagged
subformulas; ``F`` is the formula under test.
"""
from __future__ import annotations

T3 = """
controls p q r ;
alphabet a b c ;
rule p a -int-> q a ;
rule p a -call-> r b c ;
rule r b -ret-> q ;
"""
LABELS = {"x": {"q"}, "y": {"r"}}

# fixture -> (formula, head control, head symbol, expected set of target sets)
# The part of a key before "/" names the rule family; F in a target stands
# for the tagged formula under test.
FAMILIES = {
    "atom": ("x", "[q, x]", "b", [["[q, x] b"]]),
    "negated atom": ("!x", "[p, !x]", "a", [["[p, !x] a"]]),
    "and": ("x && y", "[p, F]", "a", [["[p, x] a", "[p, y] a"]]),
    "or": ("x || y", "[p, F]", "a", [["[p, x] a"], ["[p, y] a"]]),
    "EX^g": ("EX^g x", "[p, F]", "a", [["[q, x] a"], ["[r, x] b c"]]),
    "AX^g": ("AX^g x", "[p, F]", "a", [["[q, x] a", "[r, x] b c"]]),
    "EX^a": ("EX^a x", "[p, F]", "a", [["[q, x] a"], ["r b [c, x]"]]),
    "EX^a/return": ("EX^a x", "[r, F]", "b", [["p_bot g_bot"]]),
    "AX^a": ("AX^a x", "[p, F]", "a", [["[q, x] a", "r b [c, x]"]]),
    "AX^a/return": ("AX^a x", "[r, F]", "b", [["p_bot g_bot"]]),
    "EU^g": ("E[ x U^g y ]", "[p, F]", "a",
                [["[p, y] a"], ["[p, x] a", "[q, F] a"], ["[p, x] a", "[r, F] b c"]]),
    "EU^a": ("E[ x U^a y ]", "[p, F]", "a",
                 [["[p, y] a"], ["[p, x] a", "[q, F] a"], ["[p, x] a", "r b [c, F]"]]),
    "EU^a/return": ("E[ x U^a y ]", "[r, F]", "b", [["[r, y] b"], ["p_bot g_bot"]]),
    "AU^g": ("A[ x U^g y ]", "[p, F]", "a",
                 [["[p, y] a"], ["[p, x] a", "[q, F] a", "[r, F] b c"]]),
    "AU^a": ("A[ x U^a y ]", "[p, F]", "a",
                 [["[p, y] a"], ["[p, x] a", "[q, F] a", "r b [c, F]"]]),
    "ER^g": ("E[ x R^g y ]", "[p, F]", "a",
                 [["[p, y] a", "[p, x] a"], ["[p, y] a", "[q, F] a"], ["[p, y] a", "[r, F] b c"]]),
    "AR^g": ("A[ x R^g y ]", "[p, F]", "a",
                 [["[p, y] a", "[p, x] a"], ["[p, y] a", "[q, F] a", "[r, F] b c"]]),
    "ER^a": ("E[ x R^a y ]", "[p, F]", "a",
                 [["[p, y] a", "[p, x] a"], ["[p, y] a", "[q, F] a"], ["[p, y] a", "r b [c, F]"]]),
    "ER^a/return": ("E[ x R^a y ]", "[r, F]", "b",
                           [["[r, y] b", "[r, x] b"], ["p_bot g_bot"]]),
    "AR^a": ("A[ x R^a y ]", "[p, F]", "a",
                 [["[p, y] a", "[p, x] a"], ["[p, y] a", "[q, F] a", "r b [c, F]"]]),
    "return extraction": ("EX^a x", "q", "[c, x]", [["[q, x] c"]]),
    "return extraction/root": ("EX^a x", "q", "[a, F]", [["[q, F] a"]]),
    "trap loop": ("EX^a x", "p_bot", "g_bot", [["p_bot g_bot"]]),
}

# Golden dump of T1 x EX^a isr with isr at r, derived rule by rule.
T1_EXA_ISR_RULES = [
    # original rules
    "p a -> { q b c }", "q b -> { r }", "r c -> { r c }",
    # atom loops at r, bottom included
    "[r, isr] a -> { [r, isr] a }", "[r, isr] b -> { [r, isr] b }",
    "[r, isr] c -> { [r, isr] c }", "[r, isr] # -> { [r, isr] # }",
    # abstract next: call, return, internal
    "[p, EX^a isr] a -> { q b [c, isr] }", "[q, EX^a isr] b -> { p_bot g_bot }",
    "[r, EX^a isr] c -> { [r, isr] c }",
    # extraction at the return target r
    "r [a, isr] -> { [r, isr] a }", "r [b, isr] -> { [r, isr] b }",
    "r [c, isr] -> { [r, isr] c }", "r [a, EX^a isr] -> { [r, EX^a isr] a }",
    "r [b, EX^a isr] -> { [r, EX^a isr] b }", "r [c, EX^a isr] -> { [r, EX^a isr] c }",
    # trap
    "p_bot g_bot -> { p_bot g_bot }",
]
T1_EXA_ISR_DUMP = "controls 10\nsymbols 10\naccepting [r, isr]\n" + \
    "".join(line + "\n" for line in sorted(T1_EXA_ISR_RULES))


def family(key: str) -> str:
    return key.split("/")[0]


def head_rules(bp, control: str, symbol: str) -> set[frozenset]:
    """Target sets (as strings) of every rule at the given head."""
    out = set()
    for r in bp.rules:
        if str(r.control) == control and str(r.symbol) == symbol:
            out.add(frozenset(f"{q} {' '.join(map(str, w))}".rstrip() for q, w in r.targets))
    return out


def expected(formula_text: str, shape) -> set[frozenset]:
    return {frozenset(t.replace("F", formula_text) if "F" in t else t for t in ts)
            for ts in shape}
