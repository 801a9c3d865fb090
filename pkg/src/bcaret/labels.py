"""Labels files: bind formula atoms to control sets or stack automata.

    atom isr states { r } ;
    atom top_d ma { trans p d f ; trans f * f ; final f ; } ;

Inside an ``ma`` block the initial state for control ``p`` is the state
named ``p``; ``*`` stands for every alphabet symbol.
"""
from __future__ import annotations

import re

from .confsets import MultiAutomaton
from .errors import ModelError, ParseError
from .pds import LabelledPds

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>//[^\n]*)
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_.']*) | (?P<punct>[{};*]) | (?P<bad>.)
""", re.VERBOSE)


def _tokens(text: str, source):
    line, start = 1, 0
    out = []
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
        out.append((kind, m.group(), line, col))
    out.append(("eof", "", line, 1))
    return out


def parse_labels(text: str, pds: LabelledPds, source: str | None = None) -> dict:
    """Map atom names to frozensets of controls or to ``MultiAutomaton``s."""
    toks = _tokens(text, source)
    i = 0

    def take(kind=None, value=None):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind!r}, got {tok[1] or 'end of input'!r}",
                             tok[2], tok[3], source)
        i += 1
        return tok

    out: dict = {}
    while toks[i][0] != "eof":
        take("ident", "atom")
        name_tok = take("ident")
        name = name_tok[1]
        if name in out:
            raise ModelError(f"atom {name!r} bound twice", name_tok[2], name_tok[3], source)
        kind = take("ident")
        take("punct", "{")
        if kind[1] == "states":
            members = []
            while toks[i][1] != "}":
                t = take("ident")
                if t[1] not in pds.controls:
                    raise ModelError(f"undeclared control location {t[1]!r}", t[2], t[3], source)
                members.append(t[1])
            take("punct", "}")
            out[name] = frozenset(members)
        elif kind[1] == "ma":
            states = set(pds.controls)
            delta = set()
            finals = set()
            while toks[i][1] != "}":
                stmt = take("ident")
                if stmt[1] == "trans":
                    s = take("ident")[1]
                    t = toks[i]
                    i += 1
                    if t[1] == "*":
                        syms = pds.alphabet
                    elif t[0] == "ident" and t[1] in pds.alphabet:
                        syms = (t[1],)
                    else:
                        raise ModelError(f"unknown stack symbol {t[1]!r}", t[2], t[3], source)
                    d = take("ident")[1]
                    states |= {s, d}
                    delta |= {(s, a, d) for a in syms}
                elif stmt[1] == "final":
                    while toks[i][1] != ";":
                        f = take("ident")[1]
                        states.add(f)
                        finals.add(f)
                else:
                    raise ParseError(f"expected 'trans' or 'final', got {stmt[1]!r}",
                                     stmt[2], stmt[3], source)
                take("punct", ";")
            take("punct", "}")
            out[name] = MultiAutomaton(frozenset(states), pds.alphabet, frozenset(delta),
                                       {p: p for p in pds.controls}, frozenset(finals))
        else:
            raise ParseError(f"expected 'states' or 'ma', got {kind[1]!r}", kind[2], kind[3], source)
        take("punct", ";")
    return out
