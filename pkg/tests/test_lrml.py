import pytest
from lxml import etree

from kr_cnl.analyzer import FactModel
from kr_cnl.lrml import (
    LRML_NS, RULEML_NS, LrmlNode, NodeKind, load_lrml, map_rules_to_lrml, rule_signature, serialize_lrml,
    subset_schema, validate_lrml,
)
from kr_cnl.owl import EmitError
from kr_cnl.parser import parse_rule_sentence
from kr_cnl.vocabulary import Vocabulary

NS = {"lrml": LRML_NS, "ruleml": RULEML_NS}


@pytest.fixture(scope="module")
def text(corpus):
    return serialize_lrml(map_rules_to_lrml(corpus.model))


@pytest.fixture(scope="module")
def doc(text):
    return etree.fromstring(text.encode())


def test_three_statements_in_id_order(doc):
    keys = [s.get("key") for s in doc]
    assert keys == ["rule-1", "rule-2", "rule-3"]
    assert [etree.QName(s).localname for s in doc] == [
        "PrescriptiveStatement", "PrescriptiveStatement", "ConstitutiveStatement"]


def test_rule_2_obligation_has_four_atoms(doc):
    atoms = doc.xpath("lrml:PrescriptiveStatement[@key='rule-2']//lrml:Obligation/ruleml:Atom", namespaces=NS)
    assert len(atoms) == 4
    assert {a.xpath("string(ruleml:Var[2])", namespaces=NS) for a in atoms} == {
        "statement", "argument", "date", "drawing"}


def test_rule_1_layout(doc):
    (stmt,) = doc.xpath("lrml:PrescriptiveStatement[@key='rule-1']", namespaces=NS)
    assert stmt.xpath("ruleml:Rule/ruleml:if/ruleml:Atom/ruleml:Rel/text()", namespaces=NS) == ["is_rejected_under"]
    then = stmt.xpath("ruleml:Rule/ruleml:then/lrml:Obligation/ruleml:Atom", namespaces=NS)
    assert [a.findtext(f"{{{RULEML_NS}}}Rel") for a in then] == ["rejects", "includes"]
    ind = then[1].find(f"{{{RULEML_NS}}}Ind")
    assert ind.text == "Paragraph_7_33_01" and ind.get("type") == "paragraphs"


def test_rule_3_is_constitutive_without_wrapper(doc):
    (stmt,) = doc.xpath("lrml:ConstitutiveStatement", namespaces=NS)
    assert stmt.get("modality") == "necessary"
    assert stmt.xpath("ruleml:Rule/ruleml:then/lrml:*", namespaces=NS) == []


def test_schema_valid(text, doc):
    assert subset_schema().validate(doc), subset_schema().error_log
    assert validate_lrml(text) == []


def test_reload_reconstructs_rules(corpus, text):
    reloaded = load_lrml(text, corpus.vocabulary)
    assert [rule_signature(r) for r in reloaded] == [rule_signature(r) for r in corpus.rules]


def test_empty_rulebase():
    text = serialize_lrml(map_rules_to_lrml(FactModel(Vocabulary())))
    root = etree.fromstring(text.encode())
    assert etree.QName(root).localname == "LegalRuleML" and len(root) == 0


def test_deterministic(corpus):
    assert serialize_lrml(map_rules_to_lrml(corpus.model)) == serialize_lrml(map_rules_to_lrml(corpus.model))


@pytest.mark.parametrize("kind,wrapper", [("obligatory", "Obligation"), ("permitted", "Permission"),
                                          ("prohibited", "Prohibition")])
def test_deontic_wrappers(corpus, kind, wrapper):
    rule, _ = parse_rule_sentence(corpus.vocabulary, f"It is {kind} that examiner rejects claim")
    model = FactModel(corpus.vocabulary, rules=[rule])
    doc = etree.fromstring(serialize_lrml(map_rules_to_lrml(model)).encode())
    assert doc.xpath(f"count(//lrml:{wrapper}/ruleml:Atom)", namespaces=NS) == 1


def test_quantifier_attributes(corpus):
    rule, _ = parse_rule_sentence(
        corpus.vocabulary, "It is possible that at least 2 examiner rejects claim if each claim is rejected under "
        "essential subject matter requirement")
    model = FactModel(corpus.vocabulary, rules=[rule])
    text = serialize_lrml(map_rules_to_lrml(model))
    doc = etree.fromstring(text.encode())
    assert doc[0].get("closure") == "universal"
    assert doc.xpath("//ruleml:Var/@minCardinality", namespaces=NS) == ["2"]
    assert [rule_signature(r) for r in load_lrml(text, corpus.vocabulary)] == [rule_signature(rule)]


def test_statement_without_wrapper_is_rejected():
    bad = LrmlNode(NodeKind.RULE_BASE, children=[
        LrmlNode(NodeKind.STATEMENT, "PrescriptiveStatement", {"key": "rule-1"}, [
            LrmlNode(NodeKind.RULE, children=[LrmlNode(NodeKind.THEN_PART, children=[
                LrmlNode(NodeKind.ATOM, children=[LrmlNode(NodeKind.RELATION, text="r"),
                                                   LrmlNode(NodeKind.VARIABLE, text="x")])])])])])
    with pytest.raises(EmitError) as info:
        serialize_lrml(bad)
    assert {d.code for d in info.value.diagnostics} == {"schema-violation"}
