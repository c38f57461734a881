"""Front end: vocabulary documents and rule documents in, checked fact model out."""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .analyzer import FactModel, build_fact_model, declare_facts
from .diagnostics import Diagnostic, Position, has_errors
from .parser import FactDecl, parse_rule_document, parse_vocabulary_document
from .syntax import RuleAst
from .vocabulary import IndividualConcept, NounConcept, Vocabulary

_RULE_LINE = re.compile(r"^[ \t]*[^\s#]", re.MULTILINE)


@dataclass(frozen=True)
class Source:
    path: str
    text: str

    @classmethod
    def read(cls, path: str | Path) -> "Source":
        return cls(str(path), Path(path).read_text(encoding="utf-8"))


@dataclass
class CompileResult:
    model: FactModel
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def vocabulary(self) -> Vocabulary:
        return self.model.vocabulary

    @property
    def rules(self) -> list[RuleAst]:
        return self.model.rules

    @property
    def has_errors(self) -> bool:
        return has_errors(self.diagnostics)


def load_vocabulary(sources: Sequence[Source]) -> tuple[Vocabulary, list[Diagnostic]]:
    """Build and finalize a vocabulary, then declare its fact types."""
    with ThreadPoolExecutor() as pool:
        parsed = list(pool.map(lambda s: parse_vocabulary_document(s.text), sources))
    diags: list[Diagnostic] = []
    vocab = Vocabulary()
    facts: list[tuple[str, FactDecl]] = []
    for source, (decls, doc_diags) in zip(sources, parsed):
        diags += [d.with_file(source.path) for d in doc_diags]
        for decl in decls:
            if isinstance(decl, FactDecl):
                facts.append((source.path, decl))
                continue
            pos = decl.position
            decl.position = Position(source.path, pos.line, pos.column)
            if isinstance(decl, NounConcept):
                diags += vocab.add_noun_concept(decl)
            elif isinstance(decl, IndividualConcept):
                diags += vocab.add_individual(decl)
    diags += vocab.finalize()
    diags += declare_facts(vocab, facts)
    return vocab, diags


def parse_rules(vocab: Vocabulary, sources: Sequence[Source]
                ) -> tuple[list[RuleAst], list[Diagnostic], dict[int, str]]:
    """Parse rule documents; rule ids run on across documents in the given order."""
    firsts = []
    next_id = 1
    for source in sources:
        firsts.append(next_id)
        next_id += len(_RULE_LINE.findall(source.text))
    with ThreadPoolExecutor() as pool:
        parsed = list(pool.map(lambda a: parse_rule_document(vocab, a[0].text, a[1]), zip(sources, firsts)))
    rules: list[RuleAst] = []
    diags: list[Diagnostic] = []
    origin: dict[int, str] = {}
    for source, (doc_rules, doc_diags) in zip(sources, parsed):
        rules += doc_rules
        origin.update((r.rule_id, source.path) for r in doc_rules)
        diags += [d.with_file(source.path) for d in doc_diags]
    return rules, diags, origin


def compile_sources(vocab_sources: Sequence[Source], rule_sources: Sequence[Source] = ()) -> CompileResult:
    vocab, diags = load_vocabulary(vocab_sources)
    rules, rule_diags, origin = parse_rules(vocab, rule_sources)
    model, check_diags = build_fact_model(vocab, rules, origin)
    files = {s.path: i for i, s in enumerate(list(vocab_sources) + list(rule_sources))}
    everything = diags + rule_diags + check_diags
    everything.sort(key=lambda d: (files.get(d.file, len(files)), d.line, d.column, d.code))
    model.has_errors = has_errors(everything)
    return CompileResult(model, everything)


def compile_files(vocab_paths: Sequence[str | Path], rule_paths: Sequence[str | Path] = ()) -> CompileResult:
    """Read and compile; ``OSError`` propagates to the caller."""
    return compile_sources([Source.read(p) for p in vocab_paths], [Source.read(p) for p in rule_paths])


def corpus_path(name: str) -> Path:
    """Path of a bundled corpus file (``p7_33_01.vocab.txt`` or ``p7_33_01.rules.txt``)."""
    return Path(str(resources.files("kr_cnl") / "corpus" / name))


def compile_corpus() -> CompileResult:
    return compile_files([corpus_path("p7_33_01.vocab.txt")], [corpus_path("p7_33_01.rules.txt")])
