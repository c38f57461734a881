"""Position-carrying diagnostics shared by every compiler stage."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Optional


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Every code a stage may emit. Anything else is a bug.
CODES: dict[str, str] = {
    # vocabulary model
    "empty-designation": "a designation has no words",
    "reserved-designation": "a designation spells a reserved keyword phrase",
    "dup-designation": "two concepts share one designation",
    "unresolved-general-concept": "general concept names an undeclared concept",
    "cycle-in-generalization": "general concept links form a cycle",
    "unresolved-concept-type": "individual's concept type is undeclared",
    # vocabulary documents
    "bad-attribute-key": "attribute key not recognised for this block",
    "missing-caption": "attribute lines with no caption line",
    "malformed-block": "block cannot be turned into a declaration",
    "bad-synonymous-form": "synonymous form does not swap the fact's roles",
    "verb-overlaps-term": "verb phrase reuses words of its own terms",
    # tokenizer / parser
    "unknown-word": "word is neither a designation nor a keyword",
    "expected-keyword": "required keyword missing",
    "expected-term": "a term was required here",
    "expected-verb": "a statement has no verb phrase",
    "dangling-if": "an if-part or consequent is empty",
    "verb-without-subject": "statement starts with a verb",
    "or-unsupported": "disjunction is not supported",
    "bad-quantifier": "at least needs a positive count",
    "trailing-input": "words left over after a complete rule",
    # analyzer
    "unknown-fact-type": "atom matches no declared fact type",
    "individual-type-mismatch": "individual is not an instance of the grounded term",
    # emitters
    "iri-collision": "two entities map to one local name",
    "schema-violation": "emitted rulebase fails the subset schema",
}


@dataclass(frozen=True, order=True)
class Position:
    file: str
    line: int
    column: int


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    file: str = ""
    line: int = 1
    column: int = 1
    related: Optional[Position] = None

    def __post_init__(self) -> None:
        if self.code not in CODES:
            raise ValueError(f"unregistered diagnostic code {self.code!r}")
        if self.line < 1 or self.column < 1:
            raise ValueError(f"diagnostic position must be 1-based, got {self.line}:{self.column}")

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def with_file(self, file: str) -> "Diagnostic":
        related = self.related
        if related is not None and not related.file:
            related = Position(file, related.line, related.column)
        return Diagnostic(self.severity, self.code, self.message, file, self.line, self.column, related)

    def format_text(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.severity.value}: {self.code}: {self.message}"

    def to_dict(self) -> dict:
        out = {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "file": self.file,
            "line": self.line,
            "column": self.column,
        }
        if self.related is not None:
            out["related"] = {"file": self.related.file, "line": self.related.line, "column": self.related.column}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Diagnostic":
        related = data.get("related")
        return cls(
            Severity(data["severity"]),
            data["code"],
            data["message"],
            data["file"],
            data["line"],
            data["column"],
            Position(related["file"], related["line"], related["column"]) if related else None,
        )


def error(code: str, message: str, line: int = 1, column: int = 1, **kw) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, line=line, column=column, **kw)


def warning(code: str, message: str, line: int = 1, column: int = 1, **kw) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, line=line, column=column, **kw)


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


def sort_key(d: Diagnostic):
    return (d.file, d.line, d.column, d.code, d.message)


def dumps_json(diags: Iterable[Diagnostic]) -> str:
    return json.dumps([d.to_dict() for d in diags], indent=2)


def loads_json(text: str) -> list[Diagnostic]:
    return [Diagnostic.from_dict(item) for item in json.loads(text)]
