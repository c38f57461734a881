"""Semantic checks of rules against declared fact types."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .diagnostics import Diagnostic, Position, error, has_errors
from .parser import FactDecl, parse_fact_sentence
from .syntax import AtomNode, Family, ObjectArg, RuleAst
from .vocabulary import VerbConcept, Vocabulary, normalize_verb

HINT_THRESHOLD = 2


def levenshtein(a: Sequence, b: Sequence) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def nearest_phrase(phrase: tuple[str, ...], declared: Iterable[tuple[str, ...]]) -> Optional[tuple[str, ...]]:
    """Closest declared verb phrase by word-level edit distance (at most 2).

    Ties go to the smaller character distance, then to declaration order.
    """
    best = None
    best_key = None
    for order, candidate in enumerate(declared):
        words = levenshtein(phrase, candidate)
        if words > HINT_THRESHOLD:
            continue
        key = (words, levenshtein(" ".join(phrase), " ".join(candidate)), order)
        if best_key is None or key < best_key:
            best, best_key = candidate, key
    return best


# ---------------------------------------------------------------------------
# fact declarations
# ---------------------------------------------------------------------------


def declare_facts(vocab: Vocabulary, facts: Iterable[tuple[str, FactDecl]]) -> list[Diagnostic]:
    """Parse fact sentences and register one verb concept per (subject, verb, object).

    ``facts`` pairs each declaration with the file it came from.
    """
    diags: list[Diagnostic] = []
    for ordinal, (path, decl) in enumerate(facts, start=1):
        atom, atom_diags = parse_fact_sentence(vocab, decl.sentence, decl.line, decl.column)
        diags += [d.with_file(path) for d in atom_diags]
        if atom is None:
            continue
        overlap = _overlap(vocab, atom)
        if overlap:
            diags.append(error("verb-overlaps-term",
                               f"verb phrase {' '.join(atom.verb_phrase)!r} repeats term word(s) {', '.join(overlap)}",
                               decl.line, atom.verb_span.column, file=path))
            continue
        pos = Position(path, decl.line, decl.column)
        for subject, verb, obj in atom.pairs():
            vocab.add_verb_concept(VerbConcept(
                subject, verb, obj.concept if obj else None, decl.sentence,
                obj.individual if obj else None, pos, sentence=ordinal,
            ))
        for text, line, column in decl.synonymous_forms:
            diags += _declare_synonym(vocab, atom, text, line, column, path, ordinal)
    return diags


def _overlap(vocab: Vocabulary, atom: AtomNode) -> list[str]:
    term_words: set[str] = set(vocab.nouns[atom.subject].designation.words)
    for obj in atom.objects:
        term_words.update(vocab.nouns[obj.concept].designation.words)
    return sorted(w for w in set(atom.verb_phrase) if w in term_words and w not in ("is", "not"))


def _declare_synonym(vocab: Vocabulary, active: AtomNode, text: str, line: int, column: int,
                     path: str, ordinal: int) -> list[Diagnostic]:
    passive, diags = parse_fact_sentence(vocab, text, line, column)
    diags = [d.with_file(path) for d in diags]
    if passive is None:
        return diags
    objects = {o.concept for o in active.objects}
    if (len(passive.objects) != 1 or passive.subject not in objects
            or passive.objects[0].concept != active.subject):
        return [error("bad-synonymous-form",
                      "a synonymous form must swap the fact's roles: "
                      "<one of its objects> <verb> <its subject>", line, column, file=path)]
    pos = Position(path, line, column)
    for subject, verb, obj in active.pairs():
        vocab.add_verb_concept(VerbConcept(
            obj.concept, passive.verb_phrase, subject, text, None, pos, inverse_of=verb, sentence=ordinal,
        ))
    return []


# ---------------------------------------------------------------------------
# fact model
# ---------------------------------------------------------------------------


@dataclass
class FactModel:
    vocabulary: Vocabulary
    fact_types: dict[tuple, VerbConcept] = field(default_factory=dict)
    rules: list[RuleAst] = field(default_factory=list)
    has_errors: bool = False

    @classmethod
    def from_vocabulary(cls, vocab: Vocabulary) -> "FactModel":
        return cls(vocab, {v.key: v for v in vocab.verb_concepts})

    def candidates(self, verb_phrase: tuple[str, ...]) -> list[VerbConcept]:
        norm = normalize_verb(verb_phrase)
        pool = list(self.fact_types.values()) + self.vocabulary.synonymous_forms
        return [f for f in pool if normalize_verb(f.verb_phrase) == norm]

    def admits(self, subject: str, verb_phrase: tuple[str, ...], obj: Optional[str]) -> bool:
        """Whether some fact type covers the triple, allowing specialized subject and object."""
        vocab = self.vocabulary
        for fact in self.candidates(verb_phrase):
            if not vocab.specializes(subject, fact.subject):
                continue
            if obj is None and fact.object is None:
                return True
            if obj is not None and fact.object is not None and vocab.specializes(obj, fact.object):
                return True
        return False


def _atom_text(vocab: Vocabulary, subject: str, verb: tuple[str, ...], obj: Optional[ObjectArg]) -> str:
    parts = [vocab.surface(subject), " ".join(verb)]
    if obj is not None:
        parts.append(vocab.surface(obj.concept))
    return " ".join(parts)


def check_rule(model: FactModel, rule: RuleAst) -> list[Diagnostic]:
    vocab = model.vocabulary
    diags: list[Diagnostic] = []
    for atom in rule.consequent + rule.antecedent:
        verb_pos = atom.verb_span or atom.span
        line, col = (verb_pos.line, verb_pos.column) if verb_pos else (1, 1)
        if not model.candidates(atom.verb_phrase):
            hint = nearest_phrase(atom.verb_phrase, vocab.verb_phrases())
            suffix = f"; did you mean {' '.join(hint)!r}?" if hint else ""
            diags.append(error("unknown-fact-type",
                               f"no fact type with verb {' '.join(atom.verb_phrase)!r} is declared{suffix}",
                               line, col))
            continue
        for subject, verb, obj in atom.pairs():
            if not model.admits(subject, verb, obj.concept if obj else None):
                at = obj.span if obj is not None and obj.span else verb_pos
                diags.append(error("unknown-fact-type",
                                   f"no declared fact type covers {_atom_text(vocab, subject, verb, obj)!r}",
                                   at.line if at else line, at.column if at else col))
        for obj in atom.objects:
            if obj.individual is None:
                continue
            ind = vocab.individuals[obj.individual]
            if not vocab.specializes(ind.concept_type, obj.concept):
                at = obj.span
                diags.append(error(
                    "individual-type-mismatch",
                    f"{ind.designation.surface!r} is a {vocab.surface(ind.concept_type)!r}, "
                    f"not a {vocab.surface(obj.concept)!r}",
                    at.line if at else line, at.column if at else col,
                ))
    return diags


def build_fact_model(vocab: Vocabulary, rules: Iterable[RuleAst],
                     files: Optional[Mapping[int, str]] = None) -> tuple[FactModel, list[Diagnostic]]:
    """Attach checked rules to the vocabulary's fact types.

    The model is returned even when rules fail to check; ``has_errors`` tells
    emitters running in force mode what they are dealing with. ``files`` maps
    rule ids to the document they came from.
    """
    model = FactModel.from_vocabulary(vocab)
    diags: list[Diagnostic] = []
    for rule in rules:
        rule_diags = check_rule(model, rule)
        if files:
            rule_diags = [d.with_file(files.get(rule.rule_id, "")) for d in rule_diags]
        diags += rule_diags
        model.rules.append(rule)
    model.has_errors = has_errors(diags)
    return model, diags


def classify_rules(model: FactModel) -> dict[int, Family]:
    return {rule.rule_id: rule.modality.family for rule in model.rules}
