import random
import re
from functools import lru_cache

from hypothesis import given, settings, strategies as st

from kr_cnl.analyzer import FactModel, build_fact_model, check_rule, classify_rules, levenshtein, nearest_phrase
from kr_cnl.parser import parse_rule_sentence
from kr_cnl.pipeline import Source, compile_sources, corpus_path
from kr_cnl.syntax import AtomNode, Family, Modality, ModalityKind, ObjectArg, RuleAst
from kr_cnl.vocabulary import VerbConcept, Vocabulary

from conftest import noun, vocab_of


def _fact_lines():
    text = corpus_path("p7_33_01.vocab.txt").read_text()
    facts = text.split("Legal Facts", 1)[1]
    # unindented, non-comment lines are fact sentences; indented ones are attributes
    return [ln.strip() for ln in facts.splitlines()[1:] if ln.strip() and ln[0] not in " \t#"]


def expansion_oracle(vocab):
    """Split fact lines by hand: longest noun prefix, " and "-separated objects."""
    names = {i.designation.surface.lower(): i.concept_type for i in vocab.individuals.values()}
    nouns = sorted(vocab.nouns, key=len, reverse=True)
    pairs = set()
    for line in _fact_lines():
        low = line.lower()
        subject = next(n for n in nouns if low.startswith(n + " "))
        rest = low[len(subject) + 1:]
        first, *more = rest.split(" and ")
        objects = []
        for piece in [first] + more:
            hit = next((k for k in list(names) + nouns if piece.endswith(k)), None)
            objects.append((names.get(hit, hit), piece[: len(piece) - len(hit)].strip()))
        verb = tuple(w for w in objects[0][1].split() if w not in ("the", "a", "an"))
        for obj, _ in objects:
            pairs.add((subject, verb, obj))
    return pairs


def test_seven_sentences_ten_pairs(corpus):
    assert len(_fact_lines()) == 7
    model = corpus.model
    assert len(model.fact_types) == 10
    assert set(model.fact_types) == expansion_oracle(corpus.vocabulary)
    assert len({f.sentence for f in model.fact_types.values()}) == 7


def test_rule_3_checks_clean_and_pairs_covered(corpus):
    rule3 = next(r for r in corpus.rules if r.rule_id == 3)
    assert check_rule(corpus.model, rule3) == []
    assert corpus.model.admits("office action", ("include",), "date")


def test_identical_atom(corpus):
    rule = RuleAst(Modality(ModalityKind.OBLIGATORY), (AtomNode("examiner", ("rejects",), (ObjectArg("claim"),)),))
    assert check_rule(corpus.model, rule) == []


def test_inflected_forms_match(corpus):
    # "includes" and "include" are both declared; either spelling covers the other's pairs
    assert corpus.model.admits("office action", ("includes",), "statement")
    assert corpus.model.admits("office action", ("include",), "paragraphs")


def test_empty_model():
    model, diags = build_fact_model(Vocabulary(), [])
    assert model.fact_types == {} and model.rules == [] and diags == []


@lru_cache(maxsize=None)
def naive_distance(a, b):
    if not a or not b:
        return len(a) + len(b)
    return min(naive_distance(a[1:], b) + 1, naive_distance(a, b[1:]) + 1,
               naive_distance(a[1:], b[1:]) + (a[0] != b[0]))


@settings(max_examples=200)
@given(st.text(alphabet="abc", max_size=7), st.text(alphabet="abc", max_size=7))
def test_levenshtein_matches_naive(a, b):
    assert levenshtein(a, b) == naive_distance(a, b)


def test_unknown_verb_hint(corpus):
    vocab = corpus.vocabulary
    rule, diags = parse_rule_sentence(vocab, "It is obligatory that examiner approves claim")
    assert diags == []
    found = check_rule(corpus.model, rule)
    assert [(d.code, d.column) for d in found] == [("unknown-fact-type", 32)]
    declared = [" ".join(p) for p in vocab.verb_phrases()]
    ranked = sorted(declared, key=lambda p: (naive_distance(("approves",), tuple(p.split())),
                                             naive_distance("approves", p), declared.index(p)))
    assert ranked[0] == "applies"
    assert found[0].message.endswith("did you mean 'applies'?")
    assert nearest_phrase(("approves",), vocab.verb_phrases()) == ("applies",)


def test_far_verb_gets_no_hint():
    assert nearest_phrase(("a", "b", "c", "d"), [("x",)]) is None


def test_known_verb_wrong_object(corpus):
    rule, _ = parse_rule_sentence(corpus.vocabulary, "It is obligatory that examiner rejects invention")
    assert [(d.code, d.column) for d in check_rule(corpus.model, rule)] == [("unknown-fact-type", 40)]


def test_individual_type_mismatch(corpus):
    rule, _ = parse_rule_sentence(corpus.vocabulary,
                                  "It is obligatory that examiner rejects claim Paragraph 7 33 01")
    assert [d.code for d in check_rule(corpus.model, rule)] == ["individual-type-mismatch"]


def test_classify(corpus):
    assert classify_rules(corpus.model) == {1: Family.DEONTIC, 2: Family.DEONTIC, 3: Family.ALETHIC}
    model = FactModel(Vocabulary(), rules=[RuleAst(Modality(ModalityKind.PERMITTED), (AtomNode("x", ("y",)),), rule_id=9)])
    assert classify_rules(model) == {9: Family.DEONTIC}


# -- generalization soundness -------------------------------------------------


def closure(edges, nodes):
    up = {n: {n} for n in nodes}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            for n in nodes:
                if a in up[n] and b not in up[n]:
                    up[n].add(b)
                    changed = True
    return up


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**20))
def test_admits_matches_closure_oracle(seed):
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(6)]
    # edges only point to later names, so the hierarchy is acyclic
    parents = {n: rng.choice([None] + names[i + 1:]) if i < 5 else None for i, n in enumerate(names)}
    vocab = vocab_of(*[noun(n, parents[n]) for n in names])
    facts = {(rng.choice(names), ("rel",), rng.choice(names)) for _ in range(rng.randint(1, 4))}
    for s, v, o in facts:
        vocab.add_verb_concept(VerbConcept(s, v, o))
    model = FactModel.from_vocabulary(vocab)
    up = closure({(n, p) for n, p in parents.items() if p}, names)
    for s in names:
        for o in names:
            expected = any(fs in up[s] and fo in up[o] for fs, _, fo in facts)
            assert model.admits(s, ("rel",), o) == expected


# -- rule order --------------------------------------------------------------

EXTRA_RULES = [
    "It is obligatory that examiner approves claim",
    "It is permitted that applicant conceals invention",
    "It is obligatory that examiner rejects claim Paragraph 7 33 01",
    "It is obligatory that if",
]


def _keyed(result, lines):
    return sorted((lines[d.line - 1], d.code, d.column, d.message) for d in result.diagnostics)


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(7))))
def test_rule_order_does_not_change_diagnostics(order):
    base = [ln for ln in corpus_path("p7_33_01.rules.txt").read_text().splitlines() if not ln.startswith("#")]
    lines = [re.sub(r"^\d+\.\s+", "", ln) for ln in base] + EXTRA_RULES
    vocab = Source("v.txt", corpus_path("p7_33_01.vocab.txt").read_text())
    reference = compile_sources([vocab], [Source("r.txt", "\n".join(lines))])
    shuffled = [lines[i] for i in order]
    result = compile_sources([vocab], [Source("r.txt", "\n".join(shuffled))])
    assert _keyed(result, shuffled) == _keyed(reference, lines)
    assert len(result.rules) == len(reference.rules) == 6
