"""Map a fact model onto OWL2 axioms and write them as RDF/XML."""
from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional
from xml.sax.saxutils import escape, quoteattr

from .analyzer import FactModel
from .diagnostics import Diagnostic, error
from .vocabulary import Vocabulary, normalize_verb

DEFAULT_NAMESPACE = "http://www.semanticweb.org/ontologies/2014/1/SsePatentLaw#"

OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

_NON_LOCAL = re.compile(r"[^A-Za-z0-9_]")


class EmitError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True, order=True)
class Iri:
    namespace: str
    local: str

    def __post_init__(self) -> None:
        if not self.local or _NON_LOCAL.search(self.local):
            raise ValueError(f"bad local name {self.local!r}")

    def __str__(self) -> str:
        return self.namespace + self.local


class AxiomKind(enum.IntEnum):
    # declaration order doubles as serialization order within an entity
    CLASS_DECL = 0
    SUBCLASS_OF = 1
    NAMED_INDIVIDUAL_DECL = 2
    CLASS_ASSERTION = 3
    OBJECT_PROPERTY_DECL = 4
    DOMAIN = 5
    RANGE = 6
    INVERSE_OF = 7
    EQUIVALENT_PROPERTY = 8
    ANNOTATION_ASSERTION = 9


_ARITY = {
    AxiomKind.CLASS_DECL: 1,
    AxiomKind.SUBCLASS_OF: 2,
    AxiomKind.NAMED_INDIVIDUAL_DECL: 1,
    AxiomKind.CLASS_ASSERTION: 2,
    AxiomKind.OBJECT_PROPERTY_DECL: 1,
    AxiomKind.DOMAIN: 2,
    AxiomKind.RANGE: 2,
    AxiomKind.INVERSE_OF: 2,
    AxiomKind.EQUIVALENT_PROPERTY: 2,
    AxiomKind.ANNOTATION_ASSERTION: 1,
}
_DECLARATIONS = (AxiomKind.CLASS_DECL, AxiomKind.OBJECT_PROPERTY_DECL, AxiomKind.NAMED_INDIVIDUAL_DECL)


@dataclass(frozen=True, order=True)
class OwlAxiom:
    kind: AxiomKind
    arguments: tuple[Iri, ...]
    annotation: Optional[str] = None

    def __post_init__(self) -> None:
        if len(self.arguments) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind.name} takes {_ARITY[self.kind]} argument(s), got {len(self.arguments)}")
        if (self.kind is AxiomKind.ANNOTATION_ASSERTION) != (self.annotation is not None):
            raise ValueError("only annotation assertions carry a literal")

    @property
    def subject(self) -> Iri:
        return self.arguments[0]


# ---------------------------------------------------------------------------
# naming
# ---------------------------------------------------------------------------


def local_name(words: Iterable[str]) -> str:
    return _NON_LOCAL.sub("_", "_".join(words))


def class_local(vocab: Vocabulary, key: str) -> str:
    return local_name(vocab.nouns[key].designation.words)


def individual_local(vocab: Vocabulary, key: str) -> str:
    return local_name(vocab.individuals[key].designation.surface.split())


def property_local(verb_phrase: tuple[str, ...]) -> str:
    """Verb words joined by underscores, leading copula dropped: "is included in" -> included_in."""
    words = verb_phrase[1:] if len(verb_phrase) > 1 and verb_phrase[0] == "is" else verb_phrase
    return local_name(words)


def normalize_namespace(ns: str) -> str:
    return ns if ns.endswith(("#", "/")) else ns + "#"


# ---------------------------------------------------------------------------
# mapping
# ---------------------------------------------------------------------------


def map_vocabulary_to_owl(model: FactModel, ns: str = DEFAULT_NAMESPACE) -> set[OwlAxiom]:
    """Classes, subclass links, individuals and object properties for the model.

    Raises ``EmitError`` carrying ``iri-collision`` diagnostics when two
    entities would share a local name.
    """
    ns = normalize_namespace(ns)
    vocab = model.vocabulary
    facts = list(model.fact_types.values())
    passives = vocab.synonymous_forms
    _check_collisions(vocab, [f.verb_phrase for f in facts + passives])

    def cls(key: str) -> Iri:
        return Iri(ns, class_local(vocab, key))

    def prop(phrase: tuple[str, ...]) -> Iri:
        return Iri(ns, property_local(phrase))

    axioms: set[OwlAxiom] = set()
    for key, noun in vocab.nouns.items():
        axioms.add(OwlAxiom(AxiomKind.CLASS_DECL, (cls(key),)))
        if noun.general_concept:
            axioms.add(OwlAxiom(AxiomKind.SUBCLASS_OF, (cls(key), cls(noun.general_concept))))
        if noun.definition:
            axioms.add(OwlAxiom(AxiomKind.ANNOTATION_ASSERTION, (cls(key),), noun.definition))
    for key, ind in vocab.individuals.items():
        iri = Iri(ns, individual_local(vocab, key))
        axioms.add(OwlAxiom(AxiomKind.NAMED_INDIVIDUAL_DECL, (iri,)))
        axioms.add(OwlAxiom(AxiomKind.CLASS_ASSERTION, (iri, cls(ind.concept_type))))

    phrases = list(dict.fromkeys(f.verb_phrase for f in facts + passives))
    for fact in facts + passives:
        p = prop(fact.verb_phrase)
        axioms.add(OwlAxiom(AxiomKind.OBJECT_PROPERTY_DECL, (p,)))
        axioms.add(OwlAxiom(AxiomKind.DOMAIN, (p, cls(fact.subject))))
        if fact.object is not None:
            axioms.add(OwlAxiom(AxiomKind.RANGE, (p, cls(fact.object))))

    by_norm: dict[tuple[str, ...], list[tuple[str, ...]]] = defaultdict(list)
    for phrase in phrases:
        by_norm[normalize_verb(phrase)].append(phrase)
    for group in by_norm.values():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                pair = tuple(sorted((prop(a), prop(b))))
                axioms.add(OwlAxiom(AxiomKind.EQUIVALENT_PROPERTY, pair))

    for passive in passives:
        for active in by_norm[normalize_verb(passive.inverse_of)]:
            axioms.add(OwlAxiom(AxiomKind.INVERSE_OF, (prop(passive.verb_phrase), prop(active))))
    return axioms


def _check_collisions(vocab: Vocabulary, phrases: list[tuple[str, ...]]) -> None:
    owners: dict[str, list[str]] = defaultdict(list)
    for key in vocab.nouns:
        owners[class_local(vocab, key)].append(f"concept {vocab.surface(key)!r}")
    for key in vocab.individuals:
        owners[individual_local(vocab, key)].append(f"individual {vocab.surface(key)!r}")
    for phrase in dict.fromkeys(phrases):
        owners[property_local(phrase)].append(f"verb {' '.join(phrase)!r}")
    diags = []
    for local, who in sorted(owners.items()):
        if len(who) > 1:
            diags.append(error("iri-collision", f"{' and '.join(who)} all map to local name {local!r}"))
    if diags:
        raise EmitError(diags)


# ---------------------------------------------------------------------------
# RDF/XML
# ---------------------------------------------------------------------------

_SECTIONS = (
    (AxiomKind.OBJECT_PROPERTY_DECL, "Object Properties", "owl:ObjectProperty"),
    (AxiomKind.CLASS_DECL, "Classes", "owl:Class"),
    (AxiomKind.NAMED_INDIVIDUAL_DECL, "Individuals", "owl:NamedIndividual"),
)
_PROPERTY_ELEMENT = {
    AxiomKind.SUBCLASS_OF: "rdfs:subClassOf",
    AxiomKind.CLASS_ASSERTION: "rdf:type",
    AxiomKind.DOMAIN: "rdfs:domain",
    AxiomKind.RANGE: "rdfs:range",
    AxiomKind.INVERSE_OF: "owl:inverseOf",
    AxiomKind.EQUIVALENT_PROPERTY: "owl:equivalentProperty",
}


def entity_name(ns: str) -> str:
    """XML entity name for the namespace: its last path segment, e.g. ``SsePatentLaw``."""
    tail = ns.rstrip("#/").rsplit("/", 1)[-1]
    name = re.sub(r"[^A-Za-z0-9_.-]", "_", tail)
    if not name or not (name[0].isalpha() or name[0] == "_") or name.lower() in ("owl", "xsd", "rdfs", "rdf", "xml"):
        return "ns"
    return name


def serialize_rdfxml(axioms: Iterable[OwlAxiom], ns: str = DEFAULT_NAMESPACE, range_union: bool = False) -> str:
    """Deterministic RDF/XML in the layout of common ontology editors.

    Entities are grouped by kind and sorted by local name; axioms within an
    entity are sorted by kind and then argument. With ``range_union`` several
    ranges of one property collapse into a single ``owl:unionOf`` range.
    """
    ns = normalize_namespace(ns)
    ent = entity_name(ns)
    base = ns.rstrip("#")
    by_subject: dict[Iri, list[OwlAxiom]] = defaultdict(list)
    for ax in set(axioms):
        by_subject[ax.subject].append(ax)

    def ref(iri: Iri) -> str:
        # quoted attribute text; local names never need escaping
        return f'"&{ent};{iri.local}"' if iri.namespace == ns else quoteattr(str(iri))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        "<!DOCTYPE rdf:RDF [",
        f'    <!ENTITY owl "{OWL}" >',
        f'    <!ENTITY xsd "{XSD}" >',
        f'    <!ENTITY rdfs "{RDFS}" >',
        f'    <!ENTITY rdf "{RDF}" >',
        f"    <!ENTITY {ent} {quoteattr(ns)} >",
        "]>",
        "",
        "",
        f"<rdf:RDF xmlns={quoteattr(ns)}",
        f"     xml:base={quoteattr(base)}",
        f'     xmlns:rdfs="{RDFS}"',
        f'     xmlns:owl="{OWL}"',
        f'     xmlns:xsd="{XSD}"',
        f'     xmlns:rdf="{RDF}"',
        f"     xmlns:{ent}={quoteattr(ns)}>",
        f"    <owl:Ontology rdf:about={quoteattr(base)}/>",
    ]
    for decl_kind, title, element in _SECTIONS:
        subjects = sorted(
            (s for s, axs in by_subject.items() if any(a.kind is decl_kind for a in axs)),
            key=lambda iri: (iri.local, iri.namespace),
        )
        if not subjects:
            continue
        out += ["", "", "", "    <!-- ", "    ///////" + "/" * 60, "    //", f"    // {title}",
                "    //", "    ///////" + "/" * 60, "     -->", ""]
        for subject in subjects:
            body = sorted(a for a in by_subject[subject] if a.kind not in _DECLARATIONS)
            out += ["", "", f"    <!-- {subject} -->", ""]
            about = f"rdf:about={ref(subject)}"
            if not body:
                out.append(f"    <{element} {about}/>")
                continue
            out.append(f"    <{element} {about}>")
            out += _axiom_lines(body, ref, range_union)
            out.append(f"    </{element}>")
    out += ["</rdf:RDF>", ""]
    return "\n".join(out)


def _axiom_lines(body: list[OwlAxiom], ref, range_union: bool) -> list[str]:
    lines = []
    ranges = [a for a in body if a.kind is AxiomKind.RANGE]
    union_done = False
    for ax in body:
        if ax.kind is AxiomKind.ANNOTATION_ASSERTION:
            lines.append(f"        <rdfs:comment>{escape(ax.annotation)}</rdfs:comment>")
        elif ax.kind is AxiomKind.RANGE and range_union and len(ranges) > 1:
            if union_done:
                continue
            union_done = True
            lines += ["        <rdfs:range>", "            <owl:Class>",
                      '                <owl:unionOf rdf:parseType="Collection">']
            lines += [f"                    <rdf:Description rdf:about={ref(r.arguments[1])}/>"
                      for r in ranges]
            lines += ["                </owl:unionOf>", "            </owl:Class>", "        </rdfs:range>"]
        else:
            lines.append(f"        <{_PROPERTY_ELEMENT[ax.kind]} rdf:resource={ref(ax.arguments[1])}/>")
    return lines
