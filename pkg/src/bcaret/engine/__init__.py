"""Membership decision, oracles and the end-to-end model-checking pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..confsets import AltMultiAutomaton, MultiAutomaton, ma_for_controls
from ..errors import ModelError
from ..formula import Formula
from ..pds import Config, LabelledPds
from ..product import Abpds, build_regular, build_standard
from .game import SummaryGame
from .oracles import (GameResult, OracleMode, Status, bounded_game_oracle, semantic_oracle,
                      solve_buchi)
from .prestar import normalize_initials, pre_star

__all__ = [
    "EngineOptions", "Verdict", "Status", "GameResult", "OracleMode", "SummaryGame",
    "member", "accepting_region", "model_check", "build_product", "pre_star",
    "normalize_initials", "bounded_game_oracle", "semantic_oracle", "solve_buchi",
    "is_regular_labelling",
]


@dataclass
class EngineOptions:
    max_outer_iterations: int = 64
    oracle_bound: int = 8
    oracle_mode: OracleMode = OracleMode.BOTH

    def __post_init__(self):
        if self.max_outer_iterations < 1 or self.oracle_bound < 1:
            raise ValueError("engine bounds must be positive")


@dataclass
class Verdict:
    status: Status
    iterations: int = 0
    positions: int = 0
    max_antichain: int = 0
    sizes: dict = field(default_factory=dict)
    certified: GameResult | None = None

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT

    def as_dict(self) -> dict:
        return {
            "verdict": self.status.value,
            "iterations": self.iterations,
            "positions": self.positions,
            "max_antichain": self.max_antichain,
            "sizes": dict(self.sizes),
            "certified": None if self.certified is None else self.certified.value,
        }


def _check_query(bp: Abpds, c: Config) -> None:
    if not c.stack or c.stack[-1] != bp.bottom or bp.bottom in c.stack[:-1]:
        raise ModelError(f"malformed configuration {c}")
    if c.control not in bp.controls:
        raise ModelError(f"unknown control location {c.control}")
    known = set(bp.symbols)
    for s in c.stack[:-1]:
        if s not in known:
            raise ModelError(f"unknown stack symbol {s}")


def accepting_region(bp: Abpds, opts: EngineOptions | None = None
                     ) -> tuple[AltMultiAutomaton, bool]:
    """Automaton for every configuration with an accepting run."""
    opts = opts or EngineOptions()
    game = SummaryGame(bp)
    stats = game.solve(max_outer=opts.max_outer_iterations)
    return game.region(), stats.converged


def member(bp: Abpds, c: Config, opts: EngineOptions | None = None) -> Verdict:
    opts = opts or EngineOptions()
    _check_query(bp, c)
    game = SummaryGame(bp)
    stats = game.solve(game.roots_for(c.stack), max_outer=opts.max_outer_iterations)
    v = Verdict(Status.UNKNOWN, stats.iterations, stats.positions, stats.max_antichain,
                bp.sizes())
    if stats.converged:
        v.status = Status.SAT if game.accepts(c) else Status.UNSAT
    return v


def is_regular_labelling(labelling: Mapping) -> bool:
    return any(isinstance(v, MultiAutomaton) for v in labelling.values())


def build_product(pds: LabelledPds, phi: Formula, labelling: Mapping,
                  regular: bool | None = None):
    """Pick the standard or the regular construction for ``labelling``.

    Any automaton-valued atom selects the regular construction; control sets
    are then lifted to ``{p} x Gamma*``.
    """
    if regular is None:
        regular = is_regular_labelling(labelling)
    if not regular:
        return build_standard(pds, phi, labelling)
    lifted = {}
    for name, v in labelling.items():
        if isinstance(v, MultiAutomaton):
            lifted[name] = v
        else:
            lifted[name] = ma_for_controls(v, pds.controls, pds.alphabet)
    return build_regular(pds, phi, lifted)


def model_check(pds: LabelledPds, phi: Formula, labelling: Mapping, c: Config,
                opts: EngineOptions | None = None, regular: bool | None = None,
                certify: bool = False) -> Verdict:
    opts = opts or EngineOptions()
    pds.check(c)
    bp, query = build_product(pds, phi, labelling, regular)
    qc = query(c)
    v = member(bp, qc, opts)
    if certify:
        v.certified = bounded_game_oracle(bp, qc, max(opts.oracle_bound, len(qc.stack)),
                                          opts.oracle_mode)
    return v
