"""Legal vocabulary: noun, individual and verb concepts plus a longest-match index.

Concepts are referred to by a *key*: their designation words joined by single
spaces, lowercased. Keys are what the parser stores in syntax trees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .diagnostics import Diagnostic, Position, error
from .syntax import RESERVED_PHRASES

PUNCT = ".,;:"


def split_words(text: str) -> list[str]:
    words = []
    for raw in text.split():
        word = raw.strip(PUNCT)
        if word:
            words.append(word)
    return words


def normalize_verb(phrase: tuple[str, ...]) -> tuple[str, ...]:
    """Strip one trailing "s" from the last word ("includes" -> "include").

    Words ending in "ss" or shorter than three letters are left alone, which
    keeps the mapping idempotent.
    """
    if not phrase:
        return phrase
    last = phrase[-1]
    if len(last) > 2 and last.endswith("s") and not last.endswith("ss"):
        return phrase[:-1] + (last[:-1],)
    return phrase


@dataclass(frozen=True)
class Designation:
    words: tuple[str, ...]
    surface: str

    @classmethod
    def of(cls, surface: str) -> "Designation":
        words = split_words(surface)
        return cls(tuple(w.lower() for w in words), " ".join(words))

    @property
    def key(self) -> str:
        return " ".join(self.words)

    def problem(self) -> Optional[str]:
        """Return a diagnostic code if the designation is not well formed."""
        if not self.words or any(not w for w in self.words):
            return "empty-designation"
        if self.words in RESERVED_PHRASES:
            return "reserved-designation"
        return None


@dataclass
class NounConcept:
    designation: Designation
    definition: Optional[str] = None
    source: Optional[str] = None
    dictionary_basis: Optional[str] = None
    general_concept: Optional[str] = None
    position: Optional[Position] = None

    @property
    def key(self) -> str:
        return self.designation.key


@dataclass
class IndividualConcept:
    designation: Designation
    concept_type: str
    position: Optional[Position] = None

    @property
    def key(self) -> str:
        return self.designation.key


@dataclass
class VerbConcept:
    subject: str
    verb_phrase: tuple[str, ...]
    object: Optional[str] = None
    surface_sentence: str = ""
    individual: Optional[str] = None
    position: Optional[Position] = None
    # set on synonymous (passive) forms: the active verb phrase they invert
    inverse_of: Optional[tuple[str, ...]] = None
    # sentence ordinal; pairs expanded from one sentence share it
    sentence: int = 0

    @property
    def verb(self) -> str:
        return " ".join(self.verb_phrase)

    @property
    def key(self) -> tuple[str, tuple[str, ...], Optional[str]]:
        return (self.subject, self.verb_phrase, self.object)


def _at(code: str, message: str, pos: Optional[Position], **kw) -> Diagnostic:
    pos = pos or Position("", 1, 1)
    return error(code, message, pos.line, pos.column, file=pos.file, **kw)


class ConceptRef(NamedTuple):
    kind: str  # "noun", "individual" or "verb"
    key: str


class VocabularyError(Exception):
    pass


@dataclass
class Vocabulary:
    nouns: dict[str, NounConcept] = field(default_factory=dict)
    individuals: dict[str, IndividualConcept] = field(default_factory=dict)
    verb_concepts: list[VerbConcept] = field(default_factory=list)
    synonymous_forms: list[VerbConcept] = field(default_factory=list)
    finalized: bool = False
    _index: dict[tuple[str, ...], ConceptRef] = field(default_factory=dict, repr=False)
    _max_len: int = field(default=0, repr=False)

    # -- construction ------------------------------------------------------

    def _check_designation(self, d: Designation, pos: Optional[Position]) -> list[Diagnostic]:
        code = d.problem()
        if code is None:
            return []
        what = "empty" if code == "empty-designation" else f"the reserved phrase {d.surface!r}"
        return [_at(code, f"designation is {what}", pos)]

    def _dup(self, d: Designation, pos: Optional[Position]) -> list[Diagnostic]:
        first = self.nouns.get(d.key) or self.individuals.get(d.key)
        if first is None:
            return []
        where = ""
        if first.position is not None:
            where = f" (first declared at {first.position.file or '<input>'}:{first.position.line})"
        return [_at("dup-designation", f"{d.surface!r} is already declared{where}", pos, related=first.position)]

    def add_noun_concept(self, entry: NounConcept) -> list[Diagnostic]:
        """Register a noun concept; general concepts may be forward references."""
        self._require_open()
        diags = self._check_designation(entry.designation, entry.position) or self._dup(
            entry.designation, entry.position
        )
        if diags:
            return diags
        if entry.general_concept is not None:
            entry.general_concept = Designation.of(entry.general_concept).key
        self.nouns[entry.key] = entry
        self._insert(entry.designation.words, ConceptRef("noun", entry.key))
        return []

    def add_individual(self, entry: IndividualConcept) -> list[Diagnostic]:
        self._require_open()
        diags = self._check_designation(entry.designation, entry.position) or self._dup(
            entry.designation, entry.position
        )
        if diags:
            return diags
        entry.concept_type = Designation.of(entry.concept_type).key
        self.individuals[entry.key] = entry
        self._insert(entry.designation.words, ConceptRef("individual", entry.key))
        return []

    def add_verb_concept(self, entry: VerbConcept) -> None:
        """Register a fact-type pair. Subject and object must already resolve."""
        for key in (entry.subject, entry.object):
            if key is not None and key not in self.nouns:
                raise VocabularyError(f"verb concept refers to undeclared noun {key!r}")
        target = self.synonymous_forms if entry.inverse_of is not None else self.verb_concepts
        if any(v.key == entry.key and v.inverse_of == entry.inverse_of for v in target):
            return
        target.append(entry)
        # a bare "is" stays a keyword; the parser absorbs it into verb phrases anyway
        if entry.verb_phrase not in RESERVED_PHRASES:
            self._insert(entry.verb_phrase, ConceptRef("verb", entry.verb))

    def _require_open(self) -> None:
        if self.finalized:
            raise VocabularyError("noun and individual concepts cannot be added after finalize")

    def _insert(self, words: tuple[str, ...], ref: ConceptRef) -> None:
        # first declaration wins ties on identical word sequences
        if words not in self._index:
            self._index[words] = ref
            self._max_len = max(self._max_len, len(words))

    def finalize(self) -> list[Diagnostic]:
        """Resolve general concepts and individual types; reject generalization cycles.

        Offending links are dropped so the finalized vocabulary stays acyclic.
        """
        if self.finalized:
            return []
        diags: list[Diagnostic] = []
        for noun in self.nouns.values():
            general = noun.general_concept
            if general is not None and general not in self.nouns:
                diags.append(_at(
                    "unresolved-general-concept",
                    f"general concept {general!r} of {noun.designation.surface!r} is not declared",
                    noun.position,
                ))
                noun.general_concept = None
        diags.extend(self._break_cycles())
        for ind in list(self.individuals.values()):
            if ind.concept_type not in self.nouns:
                diags.append(_at(
                    "unresolved-concept-type",
                    f"concept type {ind.concept_type!r} of {ind.designation.surface!r} is not declared",
                    ind.position,
                ))
                del self.individuals[ind.key]
                del self._index[ind.designation.words]
        self._max_len = max((len(w) for w in self._index), default=0)
        self.finalized = True
        return diags

    def _break_cycles(self) -> list[Diagnostic]:
        diags = []
        done: set[str] = set()
        for start in self.nouns:
            path: list[str] = []
            on_path: set[str] = set()
            node: Optional[str] = start
            while node is not None and node not in done:
                if node in on_path:
                    cycle = path[path.index(node):]
                    # report from the earliest declared member for a stable message
                    order = list(self.nouns)
                    first = min(cycle, key=order.index)
                    i = cycle.index(first)
                    cycle = cycle[i:] + cycle[:i]
                    names = [self.nouns[k].designation.surface for k in cycle]
                    diags.append(_at(
                        "cycle-in-generalization",
                        "generalization cycle: " + " -> ".join(names + [names[0]]),
                        self.nouns[first].position,
                    ))
                    self.nouns[cycle[-1]].general_concept = None
                    break
                path.append(node)
                on_path.add(node)
                node = self.nouns[node].general_concept
            done.update(path)
        return diags

    # -- queries -----------------------------------------------------------

    def longest_match(self, words: list[str], start: int) -> Optional[tuple[ConceptRef, int]]:
        """Longest designation matching ``words`` at ``start`` (lowercased words)."""
        if start < 0 or start >= len(words):
            return None
        upper = min(self._max_len, len(words) - start)
        for length in range(upper, 0, -1):
            ref = self._index.get(tuple(words[start:start + length]))
            if ref is not None:
                return ref, length
        return None

    def designations(self) -> list[tuple[tuple[str, ...], ConceptRef]]:
        return list(self._index.items())

    def ancestors(self, key: str) -> list[str]:
        """``key`` followed by its general concepts, nearest first."""
        out = []
        node: Optional[str] = key
        while node is not None and node in self.nouns and node not in out:
            out.append(node)
            node = self.nouns[node].general_concept
        return out

    def specializes(self, narrow: str, broad: str) -> bool:
        """True when ``narrow`` equals ``broad`` or has it among its general concepts."""
        return broad in self.ancestors(narrow)

    def generalization_edges(self) -> set[tuple[str, str]]:
        return {(k, n.general_concept) for k, n in self.nouns.items() if n.general_concept}

    def surface(self, key: str) -> str:
        if key in self.nouns:
            return self.nouns[key].designation.surface
        if key in self.individuals:
            return self.individuals[key].designation.surface
        return key

    def verb_phrases(self) -> list[tuple[str, ...]]:
        """Distinct declared verb phrases in declaration order (synonymous forms last)."""
        seen: dict[tuple[str, ...], None] = {}
        for v in self.verb_concepts + self.synonymous_forms:
            seen.setdefault(v.verb_phrase, None)
        return list(seen)


def build_vocabulary(nouns: Iterable[NounConcept], individuals: Iterable[IndividualConcept] = ()) -> tuple[Vocabulary, list[Diagnostic]]:
    vocab = Vocabulary()
    diags: list[Diagnostic] = []
    for n in nouns:
        diags += vocab.add_noun_concept(n)
    for i in individuals:
        diags += vocab.add_individual(i)
    diags += vocab.finalize()
    return vocab, diags
