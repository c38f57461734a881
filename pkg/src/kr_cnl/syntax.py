"""Keyword tables and the syntax tree types shared by lexer, parser and emitters."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union


class ModalityKind(str, enum.Enum):
    OBLIGATORY = "obligatory"
    PROHIBITED = "prohibited"
    PERMITTED = "permitted"
    NECESSARY = "necessary"
    IMPOSSIBLE = "impossible"
    POSSIBLE = "possible"


class Family(str, enum.Enum):
    DEONTIC = "Deontic"
    ALETHIC = "Alethic"


_DEONTIC = {ModalityKind.OBLIGATORY, ModalityKind.PROHIBITED, ModalityKind.PERMITTED}


@dataclass(frozen=True)
class Modality:
    kind: ModalityKind

    @property
    def family(self) -> Family:
        return Family.DEONTIC if self.kind in _DEONTIC else Family.ALETHIC


# "It is <modal> that" openers, matched before anything else.
MODAL_OPENERS: dict[tuple[str, ...], ModalityKind] = {
    ("it", "is", kind.value, "that"): kind for kind in ModalityKind
}
MULTIWORD_KEYWORDS: tuple[tuple[str, ...], ...] = tuple(MODAL_OPENERS) + (("at", "least"),)
SINGLE_KEYWORDS = frozenset(
    ["if", "then", "and", "or", "each", "at", "least", "the", "a", "an", "that", "it", "is", "not"]
)
ARTICLES = frozenset(["the", "a", "an"])
# keywords that may sit inside a verb phrase ("is rejected under", "is not")
VERB_KEYWORDS = frozenset(["is", "not", "the", "a", "an"])
NUMBER_WORDS = {"one": 1}

RESERVED_PHRASES = frozenset(MULTIWORD_KEYWORDS) | {(w,) for w in SINGLE_KEYWORDS}


class TokenKind(str, enum.Enum):
    TERM = "TermRef"
    NAME = "NameRef"
    VERB = "VerbRef"
    KEYWORD = "Keyword"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    span: int = 1
    concept: Optional[str] = None
    # lowercased words covered by this token
    words: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        carries = self.kind in (TokenKind.TERM, TokenKind.NAME, TokenKind.VERB)
        if carries != (self.concept is not None):
            raise ValueError(f"{self.kind.value} token concept mismatch: {self!r}")

    def is_keyword(self, *words: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.words == words


@dataclass(frozen=True)
class Each:
    def __str__(self) -> str:
        return "each"


@dataclass(frozen=True)
class AtLeast:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("at least needs a positive count")

    def __str__(self) -> str:
        return f"at least {self.n}"


Quantifier = Union[Each, AtLeast]


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class ObjectArg:
    concept: str
    individual: Optional[str] = None
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class AtomNode:
    subject: str
    verb_phrase: tuple[str, ...]
    objects: tuple[ObjectArg, ...] = ()
    quantifier: Optional[Quantifier] = None
    span: Optional[Span] = field(default=None, compare=False)
    verb_span: Optional[Span] = field(default=None, compare=False)

    def pairs(self) -> list[tuple[str, tuple[str, ...], Optional[ObjectArg]]]:
        """One (subject, verb, object) triple per object; unary atoms give one with None."""
        if not self.objects:
            return [(self.subject, self.verb_phrase, None)]
        return [(self.subject, self.verb_phrase, obj) for obj in self.objects]


@dataclass(frozen=True)
class RuleAst:
    modality: Modality
    consequent: tuple[AtomNode, ...]
    antecedent: tuple[AtomNode, ...] = ()
    rule_id: int = 1
    span: Optional[Span] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.consequent:
            raise ValueError("a rule needs at least one consequent atom")

    @property
    def family(self) -> Family:
        return self.modality.family
