import pytest

from kr_cnl.pipeline import compile_corpus, corpus_path
from kr_cnl.vocabulary import Designation, IndividualConcept, NounConcept, Vocabulary

VOCAB_FILE = corpus_path("p7_33_01.vocab.txt")
RULES_FILE = corpus_path("p7_33_01.rules.txt")


def noun(surface, general=None, **kw):
    return NounConcept(Designation.of(surface), general_concept=general, **kw)


def individual(surface, concept_type):
    return IndividualConcept(Designation.of(surface), concept_type)


def vocab_of(*nouns, individuals=()):
    vocab = Vocabulary()
    for n in nouns:
        vocab.add_noun_concept(n if isinstance(n, NounConcept) else noun(n))
    for i in individuals:
        vocab.add_individual(i)
    vocab.finalize()
    return vocab


@pytest.fixture(scope="session")
def corpus():
    return compile_corpus()


@pytest.fixture(scope="session")
def corpus_vocab(corpus):
    return corpus.vocabulary


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
