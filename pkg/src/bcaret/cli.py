"""Command line front end.

Exit codes: 0 SAT, 1 UNSAT, 2 UNKNOWN, 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asmfront import compile_text
from .engine import (EngineOptions, GameResult, OracleMode, Status, build_product,
                     bounded_game_oracle, member, semantic_oracle)
from .errors import ModelError
from .formula import parse_formula
from .labels import parse_labels
from .pds import format_pds, parse_config, parse_pds
from .product import dump_abpds

EXIT = {Status.SAT: 0, Status.UNSAT: 1, Status.UNKNOWN: 2}
ERROR = 3
_FROM_GAME = {GameResult.ACCEPT: Status.SAT, GameResult.REJECT: Status.UNSAT,
              GameResult.UNKNOWN: Status.UNKNOWN}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise _Usage(f"cannot read {path}: {err.strerror}") from None


def _load(args):
    """Return (pds, labelling, config, formula) from the common options."""
    if args.asm:
        comp = compile_text(_read(args.asm), args.asm)
        pds, labelling, config = comp.pds, dict(comp.atoms), comp.entry
    else:
        if not args.pds:
            raise _Usage("either --asm or --pds is required")
        pds = parse_pds(_read(args.pds), args.pds)
        labelling, config = {}, None
    if args.labels:
        labelling.update(parse_labels(_read(args.labels), pds, args.labels))
    if getattr(args, "config", None):
        try:
            config = parse_config(args.config, pds.bottom)
        except ModelError as err:
            raise err.located(err.line, err.col, "--config") from None
        pds.check(config)
    if args.phi is not None:
        text, where = args.phi, "--phi"
    elif args.formula:
        text, where = _read(args.formula), args.formula
    else:
        raise _Usage("either --formula or --phi is required")
    try:
        phi = parse_formula(text)
    except ModelError as err:
        raise err.located(err.line, err.col, where) from None
    return pds, labelling, config, phi


def _options(args) -> EngineOptions:
    return EngineOptions(max_outer_iterations=args.max_iter, oracle_bound=args.bound,
                         oracle_mode=OracleMode(args.mode))


def _emit(args, record: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_check(args) -> int:
    pds, labelling, config, phi = _load(args)
    if config is None:
        raise _Usage("--config is required with --pds")
    opts = _options(args)
    regular = True if args.regular else None
    bp, query = build_product(pds, phi, labelling, regular)
    qc = query(config)
    record = {"engine": args.engine, "sizes": bp.sizes()}
    if args.engine == "saturation":
        v = member(bp, qc, opts)
        status = v.status
        record.update(v.as_dict())
        diag = [f"iterations={v.iterations} positions={v.positions} "
                f"max_antichain={v.max_antichain}"]
    elif args.engine == "game":
        res = bounded_game_oracle(bp, qc, max(opts.oracle_bound, len(qc.stack)), opts.oracle_mode)
        status = _FROM_GAME[res]
        record["game"] = res.value
        diag = [f"game={res.value} bound={max(opts.oracle_bound, len(qc.stack))}"]
    else:
        status = semantic_oracle(pds, phi, labelling, config)
        diag = []
    record["verdict"] = status.value
    sizes = bp.sizes()
    lines = [status.value]
    if args.verbose:
        lines.append(f"controls={sizes['controls']} symbols={sizes['symbols']} "
                     f"rules={sizes['rules']}")
        lines += diag
    _emit(args, record, lines)
    return EXIT[status]


def cmd_oracle(args) -> int:
    pds, labelling, config, phi = _load(args)
    if config is None:
        raise _Usage("--config is required with --pds")
    opts = _options(args)
    bp, query = build_product(pds, phi, labelling, True if args.regular else None)
    qc = query(config)
    v = member(bp, qc, opts)
    game = bounded_game_oracle(bp, qc, max(opts.oracle_bound, len(qc.stack)), opts.oracle_mode)
    sem = semantic_oracle(pds, phi, labelling, config)
    agree_game = game is GameResult.UNKNOWN or _FROM_GAME[game] is v.status
    agree_sem = sem is Status.UNKNOWN or sem is v.status
    certified = game is not GameResult.UNKNOWN and agree_game
    record = {"verdict": v.status.value, "game": game.value, "semantic": sem.value,
              "certified": certified, "agree": agree_game and agree_sem, "sizes": bp.sizes()}
    lines = [v.status.value, f"game={game.value} semantic={sem.value}",
             f"certified={'yes' if certified else 'no'} "
             f"agree={'yes' if agree_game and agree_sem else 'NO'}"]
    _emit(args, record, lines)
    if not (agree_game and agree_sem):
        return ERROR
    return EXIT[v.status]


def cmd_compile(args) -> int:
    comp = compile_text(_read(args.asm), args.asm)
    out = [format_pds(comp.pds).rstrip("\n"), f"// entry {comp.entry}"]
    for name, val in comp.atoms.items():
        kind = "states" if isinstance(val, frozenset) else "ma"
        out.append(f"// atom {name} {kind}")
    text = "\n".join(out) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    pds, labelling, _config, phi = _load(args)
    bp, _query = build_product(pds, phi, labelling, True if args.regular else None)
    sizes = bp.sizes()
    if args.dump:
        sys.stdout.write(dump_abpds(bp))
        return 0
    _emit(args, sizes, [f"{k}={v}" for k, v in sizes.items()])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bcaret", description="BCARET model checker for labelled pushdown systems")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_config: bool):
        sp.add_argument("--pds", help="PDS file")
        sp.add_argument("--asm", help="toy assembly program (replaces --pds)")
        sp.add_argument("--formula", help="formula file")
        sp.add_argument("--phi", help="formula text")
        sp.add_argument("--labels", help="labels file")
        sp.add_argument("--regular", action="store_true",
                        help="use the regular-valuation construction")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if need_config:
            sp.add_argument("--config", help='query configuration, e.g. "p : a #"')
            sp.add_argument("--bound", type=int, default=8, help="oracle stack-height bound")
            sp.add_argument("--max-iter", type=int, default=64, dest="max_iter")
            sp.add_argument("--mode", choices=[m.value for m in OracleMode], default="both")
            sp.add_argument("-v", "--verbose", action="store_true")

    c = sub.add_parser("check", help="decide a query")
    common(c, True)
    c.add_argument("--engine", choices=["saturation", "game", "semantic"], default="saturation")
    c.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="run the engine and both oracles")
    common(o, True)
    o.set_defaults(func=cmd_oracle)

    k = sub.add_parser("compile", help="compile a toy assembly program")
    k.add_argument("--asm", required=True)
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_compile)

    s = sub.add_parser("stats", help="print product sizes")
    common(s, False)
    s.add_argument("--dump", action="store_true", help="print every product rule")
    s.set_defaults(func=cmd_stats)
    return p


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Usage as err:
        print(f"bcaret: error: {err}", file=sys.stderr)
        return ERROR
    except ModelError as err:
        print(f"bcaret: {type(err).__name__}: {err}", file=sys.stderr)
        return ERROR
    except ValueError as err:
        print(f"bcaret: error: {err}", file=sys.stderr)
        return ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
