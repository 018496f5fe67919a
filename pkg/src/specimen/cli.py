"""Command-line front end.

    specimen check FILE        type of a term
    specimen normalize FILE    normal form and number of reduction steps
    specimen compose FILE      repaired terms of syntax trees, before reduction
    specimen readings FILE     readings of syntax trees as formulas with traces

FILE may be ``-`` or omitted to read standard input. Exit status is 0 on
success, 1 for user errors (parse errors, ill-typed input, no reading) and 2
when an internal limit or invariant breaks (fuel exhausted).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TextIO

from . import __version__
from .compose import (
    CompositionError,
    NoReading,
    format_path,
    format_tree,
    instantiate,
    parse_tree,
    readings,
    repair,
)
from .config import FORMATS, Config
from .hol import describe_generics, pretty, to_formula, to_sexpr
from .kernel import (
    DEFAULT_FUEL,
    FuelExhausted,
    KernelError,
    SurfaceParser,
    format_term,
    format_type,
    normalize_counted,
    type_of,
)
from .lexicon import DEFAULT_MAX_DEPTH, Lexicon, UnknownWord, demo_sources, load_lexicon
from .sexpr import ParseError, read_all


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _count(text: str, minimum: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < minimum:
        raise argparse.ArgumentTypeError(f"must be at least {minimum}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", type=Path, metavar="PATH", help="lexicon file (default: bundled demo)")
    common.add_argument("--ontology", type=Path, metavar="PATH", help="ontology file (default: bundled demo)")
    common.add_argument("--max-coercion-depth", type=lambda s: _count(s, 0), default=DEFAULT_MAX_DEPTH, metavar="N")
    common.add_argument("--fuel", type=lambda s: _count(s, 1), default=DEFAULT_FUEL, metavar="N")
    common.add_argument("--elide-inclusions", action="store_true", help="hide inclusion morphisms in formulas")
    common.add_argument("--format", choices=FORMATS, default="pretty", dest="output_format")
    common.add_argument("file", nargs="?", default="-", help="input file, or - for standard input")

    parser = _Parser(prog="specimen", description="Compose and check typed lambda-term semantics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="print the type of a term")
    sub.add_parser("normalize", parents=[common], help="print the normal form and step count of a term")
    sub.add_parser("compose", parents=[common], help="print repaired terms of syntax trees")
    sub.add_parser("readings", parents=[common], help="print the readings of syntax trees")
    return parser


def config_from(args: argparse.Namespace) -> Config:
    return Config(
        lexicon_path=args.lexicon,
        ontology_path=args.ontology,
        max_coercion_depth=args.max_coercion_depth,
        fuel=args.fuel,
        elide_inclusions=args.elide_inclusions,
        output_format=args.output_format,
    )


def load_config_lexicon(config: Config) -> Lexicon:
    ontology_text, lexicon_text = demo_sources()
    ontology = config.ontology_path or ontology_text
    lexicon = config.lexicon_path or lexicon_text
    return load_lexicon(ontology, lexicon)


def _read_input(name: str, stdin: TextIO) -> tuple[str, str]:
    if name == "-":
        return "<stdin>", stdin.read()
    path = Path(name)
    try:
        return name, path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{name}: {exc.strerror}") from None


def _single_form(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one term, found {len(forms)}")
    return forms[0]


# -- commands ---------------------------------------------------------------

def cmd_check(text: str, lexicon: Lexicon, config: Config, out: TextIO) -> int:
    term = SurfaceParser(lexicon.signature).term(_single_form(text))
    ty = type_of(term, lexicon.signature)
    out.write(format_type(ty) + "\n")
    return 0


def cmd_normalize(text: str, lexicon: Lexicon, config: Config, out: TextIO) -> int:
    term = SurfaceParser(lexicon.signature).term(_single_form(text))
    ty = type_of(term, lexicon.signature)
    normal, steps = normalize_counted(term, config.fuel, lexicon.signature, check=False)
    if config.output_format == "sexpr":
        out.write(f"(normal-form {format_term(normal)} (type {format_type(ty)}) (steps {steps}))\n")
    else:
        out.write(f"normal form: {format_term(normal)}\ntype: {format_type(ty)}\nsteps: {steps}\n")
    return 0


def _trees(text: str):
    return [parse_tree(node) for node in read_all(text)]


def _insts(insts) -> str:
    return ", ".join(f"{word} := {format_type(ty)}" for word, ty in insts)


def cmd_compose(text: str, lexicon: Lexicon, config: Config, out: TextIO, err: TextIO) -> int:
    status = 0
    for n, tree in enumerate(_trees(text)):
        if n:
            out.write("\n")
        out.write(f"tree: {format_tree(tree)}\n")
        raw = instantiate(tree, lexicon)
        out.write(f"raw: {format_term(raw.term)}\n")
        try:
            repairs = repair(raw, lexicon, lexicon.ontology, config.max_coercion_depth)
        except NoReading as exc:
            err.write(f"{format_tree(tree)}: {exc}\n")
            status = 1
            continue
        for i, rep in enumerate(repairs, 1):
            out.write(f"repair {i}: {format_term(rep.term)}\n")
            out.write(f"  trace: {'; '.join(map(str, rep.trace)) or '(none)'}\n")
            if rep.instantiations:
                out.write(f"  instantiations: {_insts(rep.instantiations)}\n")
    return status


def _use_sexpr(use) -> str:
    flags = "".join(f" :{k}" for k in ("exclusive", "inclusion") if getattr(use, k))
    return f"(use {use.coercion_name} {use.anchor_word} {format_path(use.at)} {format_path(use.site)}{flags})"


def cmd_readings(text: str, lexicon: Lexicon, config: Config, out: TextIO, err: TextIO) -> int:
    status = 0
    elide = config.elide_inclusions
    for n, tree in enumerate(_trees(text)):
        try:
            found = readings(tree, lexicon, lexicon.ontology, config)
        except NoReading as exc:
            err.write(f"{format_tree(tree)}: {exc}\n")
            status = 1
            continue
        if config.output_format == "sexpr":
            out.write(f"(tree {format_tree(tree)}\n")
            for i, r in enumerate(found, 1):
                formula = to_formula(r, lexicon.signature, lexicon.ontology)
                trace = "".join(" " + _use_sexpr(u) for u in r.trace)
                insts = "".join(f" ({w} {format_type(t)})" for w, t in r.instantiations)
                out.write(
                    f"  (reading {i} (formula {to_sexpr(formula)}) (term {format_term(r.term)})"
                    f" (trace{trace}) (instantiations{insts}))\n"
                )
            out.write(")\n")
            continue
        if n:
            out.write("\n")
        out.write(f"tree: {format_tree(tree)}\n")
        out.write(f"{len(found)} reading{'s' if len(found) != 1 else ''}\n")
        for i, r in enumerate(found, 1):
            formula = to_formula(r, lexicon.signature, lexicon.ontology)
            out.write(f"reading {i}: {pretty(formula, elide)}\n")
            for line in describe_generics(formula, elide):
                out.write(f"  generic: {line}\n")
            out.write(f"  term: {format_term(r.term)}\n")
            out.write(f"  trace: {'; '.join(map(str, r.trace)) or '(none)'}\n")
            out.write(f"  instantiations: {_insts(r.instantiations) or '(none)'}\n")
            out.write(f"  steps: {r.steps}\n")
    return status


def main(argv: list[str] | None = None, stdin: TextIO | None = None,
         stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    for stream in (out, err):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    config = config_from(args)
    source = args.file
    try:
        source, text = _read_input(args.file, stdin)
        lexicon = load_config_lexicon(config)
        if args.command == "check":
            return cmd_check(text, lexicon, config, out)
        if args.command == "normalize":
            return cmd_normalize(text, lexicon, config, out)
        if args.command == "compose":
            return cmd_compose(text, lexicon, config, out, err)
        return cmd_readings(text, lexicon, config, out, err)
    except FuelExhausted as exc:
        err.write(f"{source}: internal error: {exc}\n")
        return 2
    except ParseError as exc:
        err.write(f"{source}:{exc}\n" if exc.line is not None else f"{source}: {exc}\n")
        return 1
    except (KernelError, CompositionError, UnknownWord, UsageError) as exc:
        err.write(f"{source}: {type(exc).__name__}: {exc}\n")
        return 1


def main_entry() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
