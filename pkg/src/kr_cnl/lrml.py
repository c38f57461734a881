"""LegalRuleML-subset rulebase: mapping, serialization, schema check and reload.

Element subset (prefix ``lrml`` for the legal layer, ``ruleml`` for the core)::

    lrml:LegalRuleML
      lrml:PrescriptiveStatement key="rule-N" [closure="universal"]
        ruleml:Rule
          [ruleml:if  ruleml:Atom+]
          ruleml:then lrml:Obligation|lrml:Permission|lrml:Prohibition  ruleml:Atom+
      lrml:ConstitutiveStatement key="rule-N" modality="necessary|possible|impossible"
        ruleml:Rule ... ruleml:then ruleml:Atom+

    ruleml:Atom  = ruleml:Rel, then one ruleml:Var or ruleml:Ind per argument
    ruleml:Var   text = concept local name, optional minCardinality="n"
    ruleml:Ind   text = individual local name, type = grounded concept local name
"""
from __future__ import annotations

import enum
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from lxml import etree

from .analyzer import FactModel
from .diagnostics import error
from .owl import EmitError, class_local, individual_local, local_name
from .syntax import AtLeast, AtomNode, Each, Family, Modality, ModalityKind, ObjectArg, RuleAst
from .vocabulary import Vocabulary

LRML_NS = "http://docs.oasis-open.org/legalruleml/ns/v1.0/"
RULEML_NS = "http://ruleml.org/spec"
ET.register_namespace("lrml", LRML_NS)
ET.register_namespace("ruleml", RULEML_NS)


class NodeKind(str, enum.Enum):
    RULE_BASE = "RuleBase"
    STATEMENT = "Statement"
    DEONTIC_WRAPPER = "DeonticWrapper"
    RULE = "Rule"
    IF_PART = "IfPart"
    THEN_PART = "ThenPart"
    ATOM = "Atom"
    RELATION = "Relation"
    VARIABLE = "Variable"
    INDIVIDUAL = "Individual"


_FIXED_TAGS = {
    NodeKind.RULE_BASE: f"{{{LRML_NS}}}LegalRuleML",
    NodeKind.RULE: f"{{{RULEML_NS}}}Rule",
    NodeKind.IF_PART: f"{{{RULEML_NS}}}if",
    NodeKind.THEN_PART: f"{{{RULEML_NS}}}then",
    NodeKind.ATOM: f"{{{RULEML_NS}}}Atom",
    NodeKind.RELATION: f"{{{RULEML_NS}}}Rel",
    NodeKind.VARIABLE: f"{{{RULEML_NS}}}Var",
    NodeKind.INDIVIDUAL: f"{{{RULEML_NS}}}Ind",
}
_WRAPPER_NAME = {
    ModalityKind.OBLIGATORY: "Obligation",
    ModalityKind.PERMITTED: "Permission",
    ModalityKind.PROHIBITED: "Prohibition",
}


@dataclass
class LrmlNode:
    kind: NodeKind
    # local element name for kinds whose tag varies (statements, wrappers)
    name: str = ""
    attributes: dict[str, str] = field(default_factory=dict)
    children: list["LrmlNode"] = field(default_factory=list)
    text: Optional[str] = None

    @property
    def tag(self) -> str:
        if self.kind in _FIXED_TAGS:
            return _FIXED_TAGS[self.kind]
        return f"{{{LRML_NS}}}{self.name}"


# ---------------------------------------------------------------------------
# mapping
# ---------------------------------------------------------------------------


def _atom_nodes(vocab: Vocabulary, atom: AtomNode) -> list[LrmlNode]:
    """One Atom per (subject, verb, object); conjunction-expanded objects split apart."""
    nodes = []
    for subject, verb, obj in atom.pairs():
        subj = LrmlNode(NodeKind.VARIABLE, text=class_local(vocab, subject))
        if isinstance(atom.quantifier, AtLeast):
            subj.attributes["minCardinality"] = str(atom.quantifier.n)
        args = [subj]
        if obj is not None:
            if obj.individual is not None:
                args.append(LrmlNode(NodeKind.INDIVIDUAL, attributes={"type": class_local(vocab, obj.concept)},
                                     text=individual_local(vocab, obj.individual)))
            else:
                args.append(LrmlNode(NodeKind.VARIABLE, text=class_local(vocab, obj.concept)))
        nodes.append(LrmlNode(NodeKind.ATOM, children=[LrmlNode(NodeKind.RELATION, text=local_name(verb))] + args))
    return nodes


def _statement(vocab: Vocabulary, rule: RuleAst) -> LrmlNode:
    then_atoms = [n for a in rule.consequent for n in _atom_nodes(vocab, a)]
    if rule.family is Family.DEONTIC:
        wrapper = LrmlNode(NodeKind.DEONTIC_WRAPPER, _WRAPPER_NAME[rule.modality.kind], children=then_atoms)
        then = LrmlNode(NodeKind.THEN_PART, children=[wrapper])
        name, attrs = "PrescriptiveStatement", {"key": f"rule-{rule.rule_id}"}
    else:
        then = LrmlNode(NodeKind.THEN_PART, children=then_atoms)
        name, attrs = "ConstitutiveStatement", {"key": f"rule-{rule.rule_id}"}
    if any(isinstance(a.quantifier, Each) for a in rule.consequent + rule.antecedent):
        attrs["closure"] = "universal"
    if rule.family is Family.ALETHIC:
        attrs["modality"] = rule.modality.kind.value
    parts = []
    if rule.antecedent:
        parts.append(LrmlNode(NodeKind.IF_PART, children=[n for a in rule.antecedent for n in _atom_nodes(vocab, a)]))
    parts.append(then)
    return LrmlNode(NodeKind.STATEMENT, name, attrs, [LrmlNode(NodeKind.RULE, children=parts)])


def map_rules_to_lrml(model: FactModel) -> LrmlNode:
    vocab = model.vocabulary
    rules = sorted(model.rules, key=lambda r: r.rule_id)
    return LrmlNode(NodeKind.RULE_BASE, children=[_statement(vocab, r) for r in rules])


# ---------------------------------------------------------------------------
# serialization and validation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def subset_schema() -> etree.XMLSchema:
    path = resources.files("kr_cnl") / "schemas" / "lrml-subset" / "lrml.xsd"
    with resources.as_file(path) as xsd:
        return etree.XMLSchema(etree.parse(str(xsd)))


def _to_element(node: LrmlNode) -> ET.Element:
    elem = ET.Element(node.tag, node.attributes)
    elem.text = node.text
    for child in node.children:
        elem.append(_to_element(child))
    return elem


def validate_lrml(text: str) -> list[str]:
    """Schema errors plus the statement/wrapper pairing the schema cannot express."""
    doc = etree.fromstring(text.encode("utf-8"))
    schema = subset_schema()
    problems = [f"line {e.line}: {e.message}" for e in schema.error_log] if not schema.validate(doc) else []
    ns = {"lrml": LRML_NS, "ruleml": RULEML_NS}
    for stmt in doc.xpath("lrml:PrescriptiveStatement", namespaces=ns):
        if not stmt.xpath("ruleml:Rule/ruleml:then/lrml:*", namespaces=ns):
            problems.append(f"{stmt.get('key')}: prescriptive statement without a deontic operator")
    for stmt in doc.xpath("lrml:ConstitutiveStatement", namespaces=ns):
        if stmt.xpath("ruleml:Rule/ruleml:then/lrml:*", namespaces=ns):
            problems.append(f"{stmt.get('key')}: constitutive statement with a deontic operator")
    return problems


def serialize_lrml(root: LrmlNode) -> str:
    if root.kind is not NodeKind.RULE_BASE:
        raise ValueError("serialize_lrml needs a RuleBase root")
    elem = _to_element(root)
    ET.indent(elem, space="  ")
    text = ET.tostring(elem, encoding="unicode", xml_declaration=False)
    text = '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n"
    problems = validate_lrml(text)
    if problems:
        raise EmitError([error("schema-violation", p) for p in problems])
    return text


# ---------------------------------------------------------------------------
# reload
# ---------------------------------------------------------------------------


def load_lrml(text: str, vocab: Vocabulary) -> list[RuleAst]:
    """Rebuild rules from a serialized rulebase (the ``lrml-load`` utility).

    Atoms come back one per object, so compare with :func:`rule_signature`.
    """
    classes = {class_local(vocab, k): k for k in vocab.nouns}
    individuals = {individual_local(vocab, k): k for k in vocab.individuals}
    verbs = {local_name(p): p for p in vocab.verb_phrases()}
    root = ET.fromstring(text)
    rules = []
    for stmt in root:
        rule_id = int(stmt.get("key").removeprefix("rule-"))
        rule_elem = stmt.find(f"{{{RULEML_NS}}}Rule")
        if_part = rule_elem.find(f"{{{RULEML_NS}}}if")
        then = rule_elem.find(f"{{{RULEML_NS}}}then")
        if stmt.tag == f"{{{LRML_NS}}}PrescriptiveStatement":
            wrapper = then[0]
            local = wrapper.tag.split("}")[1]
            kind = next(k for k, n in _WRAPPER_NAME.items() if n == local)
            then_atoms = list(wrapper)
        else:
            kind = ModalityKind(stmt.get("modality"))
            then_atoms = list(then)
        atoms = lambda elems: tuple(_load_atom(e, classes, individuals, verbs) for e in elems)
        rules.append(RuleAst(
            Modality(kind),
            atoms(then_atoms),
            atoms(if_part) if if_part is not None else (),
            rule_id,
        ))
    return rules


def _load_atom(elem: ET.Element, classes: dict, individuals: dict, verbs: dict) -> AtomNode:
    rel, subj, *rest = list(elem)
    verb = verbs.get(rel.text) or tuple(rel.text.split("_"))
    quant = AtLeast(int(subj.get("minCardinality"))) if subj.get("minCardinality") else None
    objects: tuple[ObjectArg, ...] = ()
    if rest:
        arg = rest[0]
        if arg.tag == f"{{{RULEML_NS}}}Ind":
            objects = (ObjectArg(classes[arg.get("type")], individuals[arg.text]),)
        else:
            objects = (ObjectArg(classes[arg.text]),)
    return AtomNode(classes[subj.text], verb, objects, quant)


def rule_signature(rule: RuleAst) -> tuple:
    """Modality plus the multisets of expanded (subject, verb, object, individual) atoms."""
    def expanded(atoms):
        return Counter(
            (s, v, o.concept if o else None, o.individual if o else None)
            for a in atoms for s, v, o in a.pairs()
        )
    return rule.rule_id, rule.modality.kind, expanded(rule.consequent), expanded(rule.antecedent)
