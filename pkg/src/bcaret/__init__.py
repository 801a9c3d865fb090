"""Branching-time call/return model checking for labelled pushdown systems."""
from __future__ import annotations

from .engine import EngineOptions, Status, Verdict, build_product, member, model_check
from .formula import parse_formula
from .pds import Config, LabelledPds, LabelledRule, RuleKind, parse_config, parse_pds

__all__ = [
    "Config", "EngineOptions", "LabelledPds", "LabelledRule", "RuleKind", "Status", "Verdict",
    "build_product", "member", "model_check", "parse_config", "parse_formula", "parse_pds",
]
