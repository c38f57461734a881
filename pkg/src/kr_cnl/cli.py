"""kr-cnl command line: check, emit, inspect, lrml-load.

Exit status is 0 (clean), 1 (errors in the input) or 2 (I/O or usage failure).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import __version__
from .diagnostics import Diagnostic, dumps_json
from .owl import DEFAULT_NAMESPACE, EmitError, map_vocabulary_to_owl, serialize_rdfxml
from .lrml import load_lrml, map_rules_to_lrml, serialize_lrml
from .parser import format_rule
from .pipeline import CompileResult, compile_files, load_vocabulary, Source

EXIT_OK, EXIT_ERRORS, EXIT_IO = 0, 1, 2
NS_ENV = "KR_CNL_NS"
TARGETS = ("owl", "lrml")


@dataclass
class CompileConfig:
    vocab_paths: list[str]
    rules_paths: list[str] = field(default_factory=list)
    namespace: str = DEFAULT_NAMESPACE
    output_dir: str = "."
    force: bool = False
    diag_format: str = "text"
    range_union: bool = False
    name: Optional[str] = None

    @property
    def basename(self) -> str:
        if self.name:
            return self.name
        return Path(self.vocab_paths[0]).name.split(".")[0] or "out"


def print_diagnostics(diags: Sequence[Diagnostic], fmt: str, stream: TextIO) -> None:
    if fmt == "json":
        stream.write(dumps_json(diags) + "\n")
    else:
        for d in diags:
            stream.write(d.format_text() + "\n")


def _io_failure(exc: OSError) -> int:
    where = exc.filename if exc.filename is not None else "<unknown>"
    print(f"kr-cnl: {where}: {exc.strerror or exc}", file=sys.stderr)
    return EXIT_IO


def _front_end(config: CompileConfig) -> CompileResult:
    return compile_files(config.vocab_paths, config.rules_paths)


def cmd_check(config: CompileConfig) -> int:
    try:
        result = _front_end(config)
    except OSError as exc:
        return _io_failure(exc)
    print_diagnostics(result.diagnostics, config.diag_format, sys.stdout)
    return EXIT_ERRORS if result.has_errors else EXIT_OK


def cmd_emit(config: CompileConfig, targets: Sequence[str] = TARGETS) -> int:
    try:
        result = _front_end(config)
    except OSError as exc:
        return _io_failure(exc)
    print_diagnostics(result.diagnostics, config.diag_format, sys.stderr)
    status = EXIT_ERRORS if result.has_errors else EXIT_OK
    if status and not config.force:
        return status
    outputs: list[tuple[Path, str]] = []
    out = Path(config.output_dir)
    try:
        if "owl" in targets:
            axioms = map_vocabulary_to_owl(result.model, config.namespace)
            outputs.append((out / f"{config.basename}.owl",
                            serialize_rdfxml(axioms, config.namespace, config.range_union)))
        if "lrml" in targets:
            outputs.append((out / f"{config.basename}.lrml.xml", serialize_lrml(map_rules_to_lrml(result.model))))
    except EmitError as exc:
        print_diagnostics(exc.diagnostics, config.diag_format, sys.stderr)
        return EXIT_ERRORS
    try:
        for path, text in outputs:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            print(path)
    except OSError as exc:
        return _io_failure(exc)
    return status


def _table(header: Sequence[str], rows: list[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = []
    for row in [header, *rows]:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def inspect_rows(result: CompileResult, what: str) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    vocab = result.vocabulary
    if what == "concepts":
        rows = [(n.designation.surface, "noun", vocab.surface(n.general_concept) if n.general_concept else "-")
                for n in vocab.nouns.values()]
        rows += [(i.designation.surface, "individual", vocab.surface(i.concept_type))
                 for i in vocab.individuals.values()]
        return ("CONCEPT", "KIND", "GENERAL CONCEPT"), rows
    if what == "facts":
        rows = [(vocab.surface(f.subject), f.verb, vocab.surface(f.object) if f.object else "-")
                for f in result.model.fact_types.values()]
        return ("SUBJECT", "VERB", "OBJECT"), rows
    rows = [(f"rule-{r.rule_id}", r.modality.kind.value, r.family.value)
            for r in sorted(result.rules, key=lambda r: r.rule_id)]
    return ("RULE", "MODALITY", "FAMILY"), rows


def cmd_inspect(config: CompileConfig, what: str) -> int:
    try:
        result = _front_end(config)
    except OSError as exc:
        return _io_failure(exc)
    print_diagnostics(result.diagnostics, config.diag_format, sys.stderr)
    header, rows = inspect_rows(result, what)
    sys.stdout.write(_table(header, rows))
    return EXIT_ERRORS if result.has_errors else EXIT_OK


def cmd_lrml_load(config: CompileConfig, path: str) -> int:
    try:
        vocab, diags = load_vocabulary([Source.read(p) for p in config.vocab_paths])
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return _io_failure(exc)
    print_diagnostics(diags, config.diag_format, sys.stderr)
    for rule in load_lrml(text, vocab):
        print(f"{rule.rule_id}. {format_rule(vocab, rule)}")
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vocab", nargs="+", required=True, metavar="PATH", help="vocabulary documents")
    common.add_argument("--rules", nargs="+", default=[], metavar="PATH", help="rule documents")
    common.add_argument("--ns", metavar="IRI", help=f"ontology namespace (env {NS_ENV}; default {DEFAULT_NAMESPACE})")
    common.add_argument("--diag-format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="kr-cnl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="parse and type-check, report diagnostics")
    emit = sub.add_parser("emit", parents=[common], help="write .owl and .lrml.xml artifacts")
    emit.add_argument("--out", default=".", metavar="DIR", help="output directory")
    emit.add_argument("--force", action="store_true", help="emit even when errors were found")
    emit.add_argument("--targets", default="owl,lrml", metavar="LIST",
                      help="comma-separated subset of owl,lrml (empty for none)")
    emit.add_argument("--name", help="output basename (default: first vocabulary file's stem)")
    emit.add_argument("--range-union", action="store_true",
                      help="collapse several ranges of one property into an owl:unionOf range")
    inspect = sub.add_parser("inspect", parents=[common], help="print concepts, facts or rules as a table")
    inspect.add_argument("what", choices=("concepts", "facts", "rules"))
    load = sub.add_parser("lrml-load", parents=[common], help="read a rulebase back into Structured English")
    load.add_argument("file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    config = CompileConfig(
        vocab_paths=args.vocab,
        rules_paths=args.rules,
        namespace=args.ns or os.environ.get(NS_ENV) or DEFAULT_NAMESPACE,
        output_dir=getattr(args, "out", "."),
        force=getattr(args, "force", False),
        diag_format=args.diag_format,
        range_union=getattr(args, "range_union", False),
        name=getattr(args, "name", None),
    )
    try:
        if args.command == "check":
            return cmd_check(config)
        if args.command == "emit":
            targets = [t.strip() for t in args.targets.split(",") if t.strip()]
            unknown = set(targets) - set(TARGETS)
            if unknown:
                parser.error(f"unknown target(s): {', '.join(sorted(unknown))}")
            return cmd_emit(config, targets)
        if args.command == "inspect":
            return cmd_inspect(config, args.what)
        return cmd_lrml_load(config, args.file)
    except OSError as exc:
        return _io_failure(exc)
    except Exception as exc:  # keep the exit-status contract total
        print(f"kr-cnl: internal error: {exc!r}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
