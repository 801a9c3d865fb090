"""ABPDS membership via a finite summary game.

The alternating pushdown acceptance game is folded into a finite Buchi game
whose positions are ``(control, word, claim, flag)``.  ``word`` is the part
of the stack owned by the current level (one symbol, or the not yet
processed suffix of a pushed word).  ``claim`` is a set of pairs
``(return control, saw_accepting)`` the existential player promised to win
from once the level is popped; ``flag`` says whether an accepting control
was visited since the claim was made.

The winning region is upward closed in the claim, so for every
``(control, word, flag)`` we keep only the antichain of minimal claims.
Claims are bitmasks: bit ``2i + f`` stands for ``(control i, f)``, and a
claim holding ``(q, 0)`` always holds ``(q, 1)`` too.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..confsets import AltMultiAutomaton
from ..pds import Config
from ..product import Abpds


def _minimize(masks) -> tuple[int, ...]:
    kept: list[int] = []
    for m in sorted(set(masks), key=int.bit_count):
        for k in kept:
            if k & m == k:
                break
        else:
            kept.append(m)
    return tuple(sorted(kept))


def _join(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if a == (0,):
        return b
    if b == (0,):
        return a
    return _minimize(x | y for x in a for y in b)


TOP = (0,)
BOT: tuple[int, ...] = ()


@dataclass
class SolveStats:
    iterations: int = 0
    positions: int = 0
    max_antichain: int = 0
    converged: bool = True


class SummaryGame:
    def __init__(self, bp: Abpds):
        self.bp = bp
        self.controls = list(bp.controls)
        self.cid = {c: i for i, c in enumerate(self.controls)}
        symbols = list(bp.symbols) + [bp.bottom]
        self.sid = {s: i for i, s in enumerate(symbols)}
        self.symbols = symbols
        self.acc = [c in bp.accepting for c in self.controls]

        # words: singletons first so that word id == symbol id for them
        self.words: list[tuple[int, ...]] = [(i,) for i in range(len(symbols))]
        self.wid: dict[tuple[int, ...], int] = {w: i for i, w in enumerate(self.words)}

        popped: set[int] = set()
        self.rules: dict[tuple[int, int], list[tuple[tuple[int, int], ...]]] = {}
        for r in bp.rules:
            targets = []
            for q, w in r.targets:
                qi = self.cid[q]
                if not w:
                    popped.add(qi)
                    targets.append((qi, -1))
                else:
                    targets.append((qi, self._word(tuple(self.sid[s] for s in w))))
            self.rules.setdefault((self.cid[r.control], self.sid[r.symbol]), []).append(tuple(targets))

        self.ret_controls = sorted(popped)
        self.rbit = {q: k for k, q in enumerate(self.ret_controls)}
        self.need = {}
        for q, k in self.rbit.items():
            self.need[q, 1] = 1 << (2 * k + 1)
            self.need[q, 0] = (1 << (2 * k)) | (1 << (2 * k + 1))
        self.nwords = len(self.words)
        self.Z: dict[int, tuple[int, ...]] | None = None
        self.stats = SolveStats()

    def _word(self, w: tuple[int, ...]) -> int:
        for k in range(len(w) - 1, -1, -1):
            suffix = w[k:]
            if suffix not in self.wid:
                self.wid[suffix] = len(self.words)
                self.words.append(suffix)
        return self.wid[w]

    # positions are packed ints
    def pos(self, q: int, w: int, b: int) -> int:
        return (q * self.nwords + w) * 2 + b

    def unpack(self, k: int) -> tuple[int, int, int]:
        b = k & 1
        qw = k >> 1
        return qw // self.nwords, qw % self.nwords, b

    def reads(self, k: int) -> list[int]:
        p, w, b = self.unpack(k)
        word = self.words[w]
        out = []
        if len(word) == 1:
            for rule in self.rules.get((p, word[0]), ()):
                for q, wj in rule:
                    if wj >= 0:
                        out.append(self.pos(q, wj, b | self.acc[q]))
        else:
            out.append(self.pos(p, word[0], self.acc[p]))
            rest = self.wid[word[1:]]
            for q in self.ret_controls:
                out.append(self.pos(q, rest, 1))
                if not b:
                    out.append(self.pos(q, rest, 0))
        return out

    def evaluate(self, k: int, Z, Y) -> tuple[int, ...]:
        p, w, b = self.unpack(k)
        word = self.words[w]
        acc = self.acc
        if len(word) == 1:
            fam: list[int] = []
            for rule in self.rules.get((p, word[0]), ()):
                cur = TOP
                for q, wj in rule:
                    if wj < 0:
                        req = self.need[q, b]
                        cur = _minimize(a | req for a in cur)
                    else:
                        f = (Z if acc[q] else Y)[self.pos(q, wj, b | acc[q])]
                        cur = _join(cur, f)
                    if not cur:
                        break
                if cur == TOP:
                    return TOP
                fam.extend(cur)
            return _minimize(fam)
        chk = Y[self.pos(p, word[0], acc[p])]
        rest = self.wid[word[1:]]
        fam = []
        for claim in chk:
            cur = TOP
            for q, kbit in self.rbit.items():
                for f in (0, 1):
                    if not claim >> (2 * kbit + f) & 1:
                        continue
                    good = f or acc[q]
                    nb = b | f | acc[q]
                    cur = _join(cur, (Z if good else Y)[self.pos(q, rest, nb)])
                    if not cur:
                        break
                if not cur:
                    break
            if cur == TOP:
                return TOP
            fam.extend(cur)
        return _minimize(fam)

    def discover(self, roots) -> list[int]:
        seen = set(roots)
        todo = deque(roots)
        while todo:
            k = todo.popleft()
            for d in self.reads(k):
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return sorted(seen)

    def solve(self, roots=None, max_outer: int = 64) -> SolveStats:
        if roots is None:
            roots = [self.pos(q, s, 0) for q in range(len(self.controls))
                     for s in range(len(self.symbols))]
        positions = self.discover(roots)
        rdeps: dict[int, list[int]] = {k: [] for k in positions}
        for k in positions:
            for d in set(self.reads(k)):
                rdeps[d].append(k)
        Z = {k: TOP for k in positions}
        stats = SolveStats(positions=len(positions))
        converged = False
        for _ in range(max_outer):
            stats.iterations += 1
            Y = {k: BOT for k in positions}
            work = deque(positions)
            queued = set(positions)
            while work:
                k = work.popleft()
                queued.discard(k)
                new = self.evaluate(k, Z, Y)
                if new != Y[k]:
                    Y[k] = new
                    for d in rdeps[k]:
                        if d not in queued:
                            queued.add(d)
                            work.append(d)
            if Y == Z:
                converged = True
                break
            Z = Y
        stats.converged = converged
        stats.max_antichain = max((len(v) for v in Z.values()), default=0)
        self.Z = Z
        self.stats = stats
        return stats

    def family(self, q: int, s: int) -> tuple[int, ...]:
        return self.Z.get(self.pos(q, s, 0), BOT)

    def winning_controls(self, stack) -> set[int]:
        """Controls from which ``stack`` (top first, bottom last) is accepted."""
        allowed = 0
        win: set[int] = set()
        n = len(self.controls)
        for depth, sym in enumerate(reversed(stack)):
            s = self.sid[sym]
            win = {q for q in range(n)
                   if any(m & ~allowed == 0 for m in self.family(q, s))}
            allowed = 0
            for q in win:
                if q in self.rbit:
                    allowed |= self.need[q, 0]
        return win

    def roots_for(self, stack) -> list[int]:
        syms = {self.sid[s] for s in stack}
        return [self.pos(q, s, 0) for q in range(len(self.controls)) for s in syms]

    def accepts(self, c: Config) -> bool:
        return self.cid[c.control] in self.winning_controls(c.stack)

    def region(self) -> AltMultiAutomaton:
        """The winning region as an alternating automaton over controls."""
        delta = set()
        bottom = self.sid[self.bp.bottom]
        for q, ctl in enumerate(self.controls):
            for s, sym in enumerate(self.symbols):
                for m in self.family(q, s):
                    if s == bottom and m:
                        continue
                    targets = frozenset(self.controls[r] for r, k in self.rbit.items()
                                        if m >> (2 * k) & 3)
                    delta.add((ctl, sym, targets))
        return AltMultiAutomaton(frozenset(self.controls), tuple(self.symbols), frozenset(delta),
                                 {c: c for c in self.controls}, frozenset())
