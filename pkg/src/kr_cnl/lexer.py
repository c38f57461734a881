"""Lexicon-driven tokenizer for Structured English sentences."""
from __future__ import annotations

import re
from typing import NamedTuple

from .diagnostics import Diagnostic, error
from .syntax import MULTIWORD_KEYWORDS, NUMBER_WORDS, SINGLE_KEYWORDS, Token, TokenKind
from .vocabulary import PUNCT, Vocabulary

_CHUNK = re.compile(r"\S+")
_KIND_OF = {"noun": TokenKind.TERM, "individual": TokenKind.NAME, "verb": TokenKind.VERB}
_KEYWORDS_LONGEST_FIRST = sorted(MULTIWORD_KEYWORDS, key=len, reverse=True)


class Word(NamedTuple):
    text: str
    lower: str
    column: int


def split_sentence(sentence: str, column: int = 1) -> list[Word]:
    """Whitespace words with punctuation trimmed; columns are 1-based."""
    words = []
    for m in _CHUNK.finditer(sentence):
        raw = m.group()
        lead = len(raw) - len(raw.lstrip(PUNCT))
        text = raw.strip(PUNCT)
        if text:
            words.append(Word(text, text.lower(), column + m.start() + lead))
    return words


def is_count(word: str) -> bool:
    return word.isdigit() or word in NUMBER_WORDS


def tokenize_sentence(vocab: Vocabulary, sentence: str, line: int = 1, column: int = 1
                      ) -> tuple[list[Token], list[Diagnostic]]:
    words = split_sentence(sentence, column)
    lower = [w.lower for w in words]
    tokens: list[Token] = []
    diags: list[Diagnostic] = []

    def emit(kind: TokenKind, i: int, n: int, concept=None) -> None:
        chunk = words[i:i + n]
        tokens.append(Token(kind, " ".join(w.text for w in chunk), line, chunk[0].column, n,
                            concept, tuple(lower[i:i + n])))

    i = 0
    while i < len(words):
        phrase = next((p for p in _KEYWORDS_LONGEST_FIRST if tuple(lower[i:i + len(p)]) == p), None)
        if phrase is not None:
            emit(TokenKind.KEYWORD, i, len(phrase))
            i += len(phrase)
            if phrase == ("at", "least") and i < len(words) and is_count(lower[i]):
                emit(TokenKind.KEYWORD, i, 1)
                i += 1
            continue
        match = vocab.longest_match(lower, i)
        if match is not None:
            ref, n = match
            emit(_KIND_OF[ref.kind], i, n, ref.key)
            i += n
            continue
        if lower[i] in SINGLE_KEYWORDS:
            emit(TokenKind.KEYWORD, i, 1)
        else:
            emit(TokenKind.UNKNOWN, i, 1)
            diags.append(error("unknown-word", f"unknown word {words[i].text!r}", line, words[i].column))
        i += 1
    return tokens, diags
