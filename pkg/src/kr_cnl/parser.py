"""Parsers for vocabulary documents and Structured English rule documents.

Rule grammar (keywords case-insensitive, terminal period optional)::

    Rule       := "It is" MODAL "that" Conj ["if" Conj]
                | "If" Conj "then" "it is" MODAL "that" Conj
    Conj       := Statement ("and" Statement)*
    Statement  := [Quantifier] Term VerbWords ObjectList
    ObjectList := Object ("and" Object)* | <empty>
    Object     := Term [Name] | Name
    Quantifier := "each" | "at least" (INTEGER | "one")
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import Diagnostic, Position, error, warning
from .lexer import tokenize_sentence
from .syntax import (
    ARTICLES,
    MODAL_OPENERS,
    NUMBER_WORDS,
    VERB_KEYWORDS,
    AtLeast,
    AtomNode,
    Each,
    Modality,
    ObjectArg,
    Quantifier,
    RuleAst,
    Span,
    Token,
    TokenKind,
)
from .vocabulary import Designation, IndividualConcept, NounConcept, Vocabulary

# ---------------------------------------------------------------------------
# vocabulary documents
# ---------------------------------------------------------------------------

CONCEPTS_SECTION = "legal concepts"
FACTS_SECTION = "legal facts"

NOUN_KEYS = ("definition", "dictionary basis", "source", "general concept")
NAME_KEYS = ("definition", "dictionary basis", "source", "concept type", "general concept")
FACT_KEYS = ("synonymous form",)
_ALL_KEYS = sorted(set(NOUN_KEYS + NAME_KEYS + FACT_KEYS), key=len, reverse=True)
_NAME_PREFIX = re.compile(r"name\s*:\s*", re.IGNORECASE)
_LIST_PREFIX = re.compile(r"\s*\d+[.)]\s+")


@dataclass
class FactDecl:
    """A fact sentence from the Legal Facts section, parsed once nouns are known."""

    sentence: str
    line: int
    column: int = 1
    synonymous_forms: list[tuple[str, int, int]] = field(default_factory=list)


Declaration = Union[NounConcept, IndividualConcept, FactDecl]


@dataclass
class _Block:
    section: str
    caption: str
    line: int
    column: int
    attrs: list[tuple[str, str, int, int]] = field(default_factory=list)


def _split_attribute(content: str) -> tuple[str, str]:
    low = content.lower()
    for key in _ALL_KEYS:
        if low.startswith(key) and (len(low) == len(key) or low[len(key)] in ": \t"):
            return key, content[len(key):].lstrip(": \t").strip()
    if ":" in content:
        key, _, value = content.partition(":")
        return key.strip().lower(), value.strip()
    key, _, value = content.partition(" ")
    return key.lower(), value.strip()


def _section_header(stripped: str) -> Optional[str]:
    name = " ".join(stripped.rstrip(":").lower().split())
    return name if name in (CONCEPTS_SECTION, FACTS_SECTION) else None


def parse_vocabulary_document(text: str) -> tuple[list[Declaration], list[Diagnostic]]:
    """Split a vocabulary document into noun, individual and fact declarations.

    Blocks are a caption line followed by indented ``Key: value`` attribute
    lines. Blank lines, section headers and new captions end a block.
    """
    blocks: list[_Block] = []
    diags: list[Diagnostic] = []
    section = CONCEPTS_SECTION
    current: Optional[_Block] = None
    orphan = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            if not stripped:
                current, orphan = None, False
            continue
        indent = len(line) - len(line.lstrip())
        header = _section_header(stripped) if indent == 0 else None
        if header is not None:
            section, current, orphan = header, None, False
            continue
        if indent == 0:
            caption = stripped
            col = 1
            m = _LIST_PREFIX.match(caption)
            if m and section == FACTS_SECTION:
                col += m.end()
                caption = caption[m.end():]
            current = _Block(section, caption, lineno, col)
            blocks.append(current)
            orphan = False
            continue
        if current is None:
            if not orphan:
                diags.append(error("missing-caption", "attribute line has no caption above it", lineno, indent + 1))
            orphan = True
            continue
        key, value = _split_attribute(stripped)
        current.attrs.append((key, value, lineno, indent + 1))

    decls: list[Declaration] = []
    for block in blocks:
        decl, block_diags = _block_to_declaration(block)
        diags.extend(block_diags)
        if decl is not None:
            decls.append(decl)
    return decls, diags


def _block_to_declaration(block: _Block) -> tuple[Optional[Declaration], list[Diagnostic]]:
    diags: list[Diagnostic] = []
    if block.section == FACTS_SECTION:
        kind, allowed = "fact", FACT_KEYS
    elif _NAME_PREFIX.match(block.caption):
        kind, allowed = "name", NAME_KEYS
    else:
        kind, allowed = "noun", NOUN_KEYS

    values: dict[str, str] = {}
    synonyms: list[tuple[str, int, int]] = []
    for key, value, line, col in block.attrs:
        if key not in allowed:
            diags.append(warning("bad-attribute-key", f"unknown attribute {key!r} for a {kind} block", line, col))
            continue
        if not value:
            diags.append(error("malformed-block", f"attribute {key!r} has no value; block skipped", line, col))
            return None, diags
        if key == "synonymous form":
            synonyms.append((value, line, col + len(key) + 1))
        else:
            values[key] = value

    pos = Position("", block.line, block.column)
    if kind == "fact":
        return FactDecl(block.caption, block.line, block.column, synonyms), diags
    if kind == "name":
        surface = _NAME_PREFIX.sub("", block.caption, count=1)
        concept_type = values.get("concept type") or values.get("general concept")
        if not surface.strip() or not concept_type:
            missing = "designation" if not surface.strip() else "concept type"
            diags.append(error("malformed-block", f"name block has no {missing}; block skipped", block.line, block.column))
            return None, diags
        return IndividualConcept(Designation.of(surface), Designation.of(concept_type).key, pos), diags
    general = values.get("general concept")
    return NounConcept(
        Designation.of(block.caption),
        definition=values.get("definition"),
        source=values.get("source"),
        dictionary_basis=values.get("dictionary basis"),
        general_concept=Designation.of(general).key if general else None,
        position=pos,
    ), diags


# ---------------------------------------------------------------------------
# statements and rules
# ---------------------------------------------------------------------------


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _StatementParser:
    """Recursive descent over one sentence's tokens.

    In fact mode unknown words are verb words being declared; in rule mode an
    unknown word in verb position is kept so the analyzer can report the
    missing fact type instead of a bare lexical error.
    """

    def __init__(self, vocab: Vocabulary, tokens: list[Token], line: int, end_column: int, fact_mode: bool) -> None:
        self.vocab = vocab
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.end_column = end_column
        self.fact_mode = fact_mode
        self.absorbed: set[int] = set()

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Optional[Token]:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_keyword(*words)

    def fail(self, code: str, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok if tok is not None else self.peek()
        col = tok.column if tok is not None else self.end_column
        return ParseError(error(code, message, self.line, col))

    def skip_articles(self) -> None:
        while self.peek() is not None and self.peek().kind is TokenKind.KEYWORD and self.peek().words[0] in ARTICLES:
            self.i += 1

    def expect_modal(self) -> Modality:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD and tok.words in MODAL_OPENERS:
            self.i += 1
            return Modality(MODAL_OPENERS[tok.words])
        found = f"found {tok.text!r}" if tok is not None else "found end of sentence"
        raise self.fail("expected-keyword", f"expected 'it is <modality> that', {found}")

    # -- grammar -----------------------------------------------------------

    def rule(self) -> tuple[Modality, list[AtomNode], list[AtomNode]]:
        if self.at_keyword("if"):
            if_tok = self.next()
            antecedent = self.conj("if-part", if_tok)
            if not self.at_keyword("then"):
                raise self.fail("expected-keyword", "expected 'then' after the if-part")
            self.next()
            modality = self.expect_modal()
            consequent = self.conj("consequent", if_tok)
        else:
            modality = self.expect_modal()
            consequent = self.conj("consequent", self.peek())
            antecedent = []
            if self.at_keyword("if"):
                antecedent = self.conj("if-part", self.next())
        self.expect_end()
        return modality, consequent, antecedent

    def expect_end(self) -> None:
        tok = self.peek()
        if tok is not None:
            if tok.is_keyword("if"):
                raise self.fail("expected-keyword", "unexpected 'if' here", tok)
            raise self.fail("trailing-input", f"unexpected {tok.text!r} after a complete statement", tok)

    def conj(self, part: str, anchor: Optional[Token]) -> list[AtomNode]:
        tok = self.peek()
        if tok is None or tok.is_keyword("if") or tok.is_keyword("then"):
            raise self.fail("dangling-if", f"the {part} is empty", anchor if tok is None else tok)
        atoms = [self.statement()]
        while self.at_keyword("and"):
            self.next()
            atoms.append(self.statement())
        return atoms

    def quantifier(self) -> Optional[Quantifier]:
        if self.at_keyword("each"):
            self.next()
            return Each()
        if self.at_keyword("at", "least"):
            at = self.next()
            tok = self.peek()
            if tok is None or tok.kind is not TokenKind.KEYWORD or len(tok.words) != 1:
                raise self.fail("bad-quantifier", "'at least' needs a positive count", at)
            word = tok.words[0]
            n = NUMBER_WORDS.get(word) or (int(word) if word.isdigit() else 0)
            if n < 1:
                raise self.fail("bad-quantifier", "'at least' needs a positive count", tok)
            self.next()
            return AtLeast(n)
        return None

    def statement(self) -> AtomNode:
        start = self.peek()
        quant = self.quantifier()
        self.skip_articles()
        tok = self.peek()
        if tok is None:
            raise self.fail("expected-term", "expected a term, found end of sentence")
        if tok.kind is TokenKind.VERB:
            raise self.fail("verb-without-subject", f"verb {tok.text!r} has no subject term", tok)
        if tok.kind is not TokenKind.TERM:
            raise self.fail("expected-term", f"expected a subject term, found {tok.text!r}", tok)
        subject = self.next()
        verb_tok = self.peek()
        verb = self.verb_words()
        if not verb:
            raise self.fail("expected-verb", f"no verb phrase after {subject.text!r}", verb_tok)
        objects = self.object_list()
        return AtomNode(
            subject.concept,
            verb,
            tuple(objects),
            quant,
            Span(self.line, start.column),
            Span(self.line, verb_tok.column),
        )

    def verb_words(self) -> tuple[str, ...]:
        words: list[str] = []
        while (tok := self.peek()) is not None:
            if tok.kind is TokenKind.VERB:
                words.extend(tok.words)
            elif tok.kind is TokenKind.UNKNOWN:
                if not self.fact_mode:
                    self.absorbed.add(tok.column)
                words.extend(tok.words)
            elif tok.kind is TokenKind.KEYWORD and tok.words[0] in VERB_KEYWORDS and len(tok.words) == 1:
                if tok.words[0] not in ARTICLES:
                    words.extend(tok.words)
            else:
                break
            self.i += 1
        return tuple(words)

    def begins_object(self, ahead: int = 0, after_and: bool = False) -> bool:
        """Whether an object starts ``ahead`` tokens on (articles skipped)."""
        tok = self.peek(ahead)
        while tok is not None and tok.kind is TokenKind.KEYWORD and tok.words[0] in ARTICLES:
            ahead += 1
            tok = self.peek(ahead)
        if tok is None:
            return False
        if tok.kind is TokenKind.NAME:
            return True
        if tok.kind is not TokenKind.TERM:
            return False
        if not after_and:
            return True
        # a term followed by something verb-like opens a new statement instead
        after = self.peek(ahead + 1)
        if after is None:
            return True
        if after.kind in (TokenKind.VERB, TokenKind.UNKNOWN):
            return False
        return not (after.kind is TokenKind.KEYWORD and after.words in {("is",), ("not",)})

    def object_list(self) -> list[ObjectArg]:
        objects: list[ObjectArg] = []
        if not self.begins_object():
            return objects
        objects.append(self.object())
        while self.at_keyword("and") and self.begins_object(1, after_and=True):
            self.next()
            objects.append(self.object())
        return objects

    def object(self) -> ObjectArg:
        self.skip_articles()
        tok = self.next()
        span = Span(self.line, tok.column)
        if tok.kind is TokenKind.NAME:
            individual = self.vocab.individuals[tok.concept]
            return ObjectArg(individual.concept_type, tok.concept, span)
        individual = None
        if self.peek() is not None and self.peek().kind is TokenKind.NAME:
            individual = self.next().concept
        return ObjectArg(tok.concept, individual, span)


def _or_check(tokens: list[Token], line: int) -> Optional[Diagnostic]:
    for tok in tokens:
        if tok.is_keyword("or"):
            return error("or-unsupported", "disjunction ('or') is not supported in rules", line, tok.column)
    return None


def parse_fact_sentence(vocab: Vocabulary, sentence: str, line: int = 1, column: int = 1
                        ) -> tuple[Optional[AtomNode], list[Diagnostic]]:
    """Parse one fact-type sentence; words between subject and object form the verb."""
    tokens, lex_diags = tokenize_sentence(vocab, sentence, line, column)
    if not tokens:
        return None, [error("expected-term", "empty fact sentence", line, column)]
    if (d := _or_check(tokens, line)) is not None:
        return None, [d]
    parser = _StatementParser(vocab, tokens, line, column + len(sentence.rstrip()), fact_mode=True)
    try:
        atom = parser.statement()
        parser.expect_end()
    except ParseError as exc:
        return None, [exc.diagnostic]
    return atom, []


def parse_rule_sentence(vocab: Vocabulary, sentence: str, line: int = 1, column: int = 1, rule_id: int = 1
                        ) -> tuple[Optional[RuleAst], list[Diagnostic]]:
    tokens, lex_diags = tokenize_sentence(vocab, sentence, line, column)
    if (d := _or_check(tokens, line)) is not None:
        return None, [d]
    parser = _StatementParser(vocab, tokens, line, column + len(sentence.rstrip()), fact_mode=False)
    try:
        modality, consequent, antecedent = parser.rule()
    except ParseError as exc:
        kept = [d for d in lex_diags if d.column not in parser.absorbed]
        return None, sorted(kept + [exc.diagnostic], key=lambda d: d.column)
    kept = [d for d in lex_diags if d.column not in parser.absorbed]
    if kept:
        return None, kept
    start = tokens[0].column
    return RuleAst(modality, tuple(consequent), tuple(antecedent), rule_id, Span(line, start)), []


def parse_rule_document(vocab: Vocabulary, text: str, first_id: int = 1
                        ) -> tuple[list[RuleAst], list[Diagnostic]]:
    """One rule per non-blank line; ``#`` comments and list numbering are skipped."""
    rules: list[RuleAst] = []
    diags: list[Diagnostic] = []
    rule_id = first_id
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        column = 1
        body = raw
        m = _LIST_PREFIX.match(body)
        if m:
            column += m.end()
            body = body[m.end():]
        rule, rule_diags = parse_rule_sentence(vocab, body, lineno, column, rule_id)
        diags.extend(rule_diags)
        if rule is not None:
            rules.append(rule)
        rule_id += 1
    return rules, diags


# ---------------------------------------------------------------------------
# canonical Structured English
# ---------------------------------------------------------------------------


def format_object(vocab: Vocabulary, obj: ObjectArg) -> str:
    if obj.individual is None:
        return vocab.surface(obj.concept)
    name = vocab.surface(obj.individual)
    if vocab.individuals[obj.individual].concept_type == obj.concept:
        return name
    return f"{vocab.surface(obj.concept)} {name}"


def format_atom(vocab: Vocabulary, atom: AtomNode) -> str:
    parts = []
    if atom.quantifier is not None:
        parts.append(str(atom.quantifier))
    parts.append(vocab.surface(atom.subject))
    parts.append(" ".join(atom.verb_phrase))
    if atom.objects:
        parts.append(" and ".join(format_object(vocab, o) for o in atom.objects))
    return " ".join(parts)


def format_rule(vocab: Vocabulary, rule: RuleAst) -> str:
    """Render a rule in the canonical ``It is <modal> that ... if ...`` form."""
    text = f"It is {rule.modality.kind.value} that " + " and ".join(format_atom(vocab, a) for a in rule.consequent)
    if rule.antecedent:
        text += " if " + " and ".join(format_atom(vocab, a) for a in rule.antecedent)
    return text + "."
