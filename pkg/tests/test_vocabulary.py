import itertools
import random

from hypothesis import given, settings, strategies as st

from kr_cnl.diagnostics import Position
from kr_cnl.vocabulary import ConceptRef, Designation, NounConcept, Vocabulary, normalize_verb

from conftest import individual, noun, vocab_of


def test_general_concept_gives_subclass_edge():
    vocab = vocab_of(noun("claim", "patent"), noun("patent"))
    assert set(vocab.nouns) == {"claim", "patent"}
    assert vocab.generalization_edges() == {("claim", "patent")}


def test_singleton_vocabulary():
    vocab = Vocabulary()
    assert vocab.add_noun_concept(noun("claim")) == []
    assert vocab.finalize() == []
    assert len(vocab.nouns) == 1


def test_duplicate_names_first_site():
    vocab = Vocabulary()
    first = Position("v.txt", 3, 1)
    vocab.add_noun_concept(NounConcept(Designation.of("claim"), position=first))
    diags = vocab.add_noun_concept(NounConcept(Designation.of("Claim"), position=Position("v.txt", 9, 1)))
    assert [d.code for d in diags] == ["dup-designation"]
    assert diags[0].line == 9
    assert diags[0].related == first


def test_individual_cannot_shadow_noun():
    vocab = Vocabulary()
    vocab.add_noun_concept(noun("claim"))
    assert [d.code for d in vocab.add_individual(individual("claim", "claim"))] == ["dup-designation"]


def test_two_cycle_rejected():
    vocab = Vocabulary()
    vocab.add_noun_concept(noun("Alpha", "Beta"))
    vocab.add_noun_concept(noun("Beta", "Alpha"))
    diags = vocab.finalize()
    assert [d.code for d in diags] == ["cycle-in-generalization"]
    assert "Alpha -> Beta -> Alpha" in diags[0].message


def test_unresolved_general_concept_at_declaration():
    vocab = Vocabulary()
    vocab.add_noun_concept(NounConcept(Designation.of("Alpha"), general_concept="Gamma", position=Position("v", 4, 1)))
    diags = vocab.finalize()
    assert [(d.code, d.line) for d in diags] == [("unresolved-general-concept", 4)]
    assert vocab.nouns["alpha"].general_concept is None


def test_unresolved_individual_type():
    vocab = Vocabulary()
    vocab.add_individual(individual("Paragraph 7", "paragraphs"))
    assert [d.code for d in vocab.finalize()] == ["unresolved-concept-type"]
    assert vocab.individuals == {}


def test_finalize_is_idempotent():
    vocab = vocab_of(noun("claim", "patent"), noun("patent"))
    assert vocab.finalize() == []


def test_empty_and_reserved_designations():
    vocab = Vocabulary()
    assert [d.code for d in vocab.add_noun_concept(noun("  "))] == ["empty-designation"]
    assert [d.code for d in vocab.add_noun_concept(noun("if"))] == ["reserved-designation"]
    assert [d.code for d in vocab.add_noun_concept(noun("it is obligatory that"))] == ["reserved-designation"]
    # only whole keyword phrases are reserved
    assert vocab.add_noun_concept(noun("it is obligatory")) == []


def test_longest_match_examples():
    vocab = vocab_of("office action", "paragraphs", "effective", "effective feature")
    words = ["office", "action", "includes", "paragraphs"]
    assert vocab.longest_match(words, 0) == (ConceptRef("noun", "office action"), 2)
    assert vocab.longest_match(words, 4) is None
    assert vocab.longest_match(words, 99) is None
    assert vocab.longest_match(["effective", "feature"], 0) == (ConceptRef("noun", "effective feature"), 2)


def brute_force_match(vocab, words, start):
    found = [(len(d), ref) for d, ref in vocab.designations() if tuple(words[start:start + len(d)]) == d]
    if not found:
        return None
    n, ref = max(found, key=lambda f: f[0])
    return ref, n


WORDS = ["a1", "b2", "c3", "d4"]
designation_st = st.lists(st.sampled_from(WORDS), min_size=1, max_size=3).map(" ".join)


@settings(max_examples=200, deadline=None)
@given(st.lists(designation_st, min_size=1, max_size=8, unique=True),
       st.lists(st.sampled_from(WORDS), max_size=8))
def test_longest_match_equals_brute_force(designations, words):
    vocab = vocab_of(*designations)
    for start in range(len(words) + 1):
        assert vocab.longest_match(words, start) == brute_force_match(vocab, words, start)


def test_ancestors_and_specializes():
    vocab = vocab_of(noun("x", "y"), noun("y", "z"), noun("z"), noun("w"))
    assert vocab.ancestors("x") == ["x", "y", "z"]
    assert vocab.specializes("x", "z") and vocab.specializes("x", "x")
    assert not vocab.specializes("z", "x") and not vocab.specializes("x", "w")


def _snapshot(vocab):
    return (
        sorted((k, n.general_concept or "") for k, n in vocab.nouns.items()),
        sorted((k, i.concept_type) for k, i in vocab.individuals.items()),
        sorted(vocab.designations()),
    )


def test_declaration_order_does_not_change_finalized_content():
    entries = [noun("claim", "patent"), noun("patent"), noun("office action"), noun("paragraphs")]
    inds = [individual("Paragraph 7 33 01", "paragraphs")]
    snapshots = set()
    for perm in itertools.permutations(entries):
        vocab = Vocabulary()
        for e in perm:
            vocab.add_noun_concept(e)
        vocab.add_individual(inds[0])
        assert vocab.finalize() == []
        snapshots.add(repr(_snapshot(vocab)))
    assert len(snapshots) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=2**16))
def test_injected_cycle_always_rejected(length, seed):
    rng = random.Random(seed)
    names = [f"c{i}" for i in range(length)]
    rng.shuffle(names)
    ring = {names[i]: names[(i + 1) % length] for i in range(length)}
    extra = [noun(f"x{i}", rng.choice(names)) for i in range(rng.randint(0, 3))]
    entries = [noun(n, ring[n]) for n in names] + extra
    rng.shuffle(entries)
    vocab = Vocabulary()
    for e in entries:
        vocab.add_noun_concept(e)
    diags = vocab.finalize()
    assert [d.code for d in diags] == ["cycle-in-generalization"]
    # after finalize no concept generalizes to itself
    for key in vocab.nouns:
        node, seen = vocab.nouns[key].general_concept, set()
        while node is not None and node not in seen:
            assert node != key
            seen.add(node)
            node = vocab.nouns[node].general_concept


@given(st.lists(st.text(alphabet="abs", min_size=1, max_size=6), min_size=1, max_size=3).map(tuple))
def test_normalize_verb_idempotent(phrase):
    once = normalize_verb(phrase)
    assert normalize_verb(once) == once


def test_normalize_verb_examples():
    assert normalize_verb(("includes",)) == ("include",)
    assert normalize_verb(("is", "about")) == ("is", "about")
    assert normalize_verb(("pass",)) == ("pass",)
    assert normalize_verb(("is",)) == ("is",)
