import pytest

from logalg import corpus
from logalg.ring import GF, QQ


@pytest.mark.parametrize("suite", list(corpus.SUITES))
def test_suite_passes(suite):
    rep = corpus.verify_corpus(suite)
    failed = [c.to_json() for c in rep.checks if not c.ok]
    assert rep.ok and not failed, failed


def test_unknown_suite():
    with pytest.raises(KeyError):
        corpus.verify_corpus("")
    with pytest.raises(KeyError):
        corpus.verify_corpus("no-such-suite")


def test_reports_are_deterministic():
    a = corpus.verify_corpus("word-problem", seed=5).to_json()
    b = corpus.verify_corpus("word-problem", seed=5).to_json()
    assert a == b


def test_corpus_sizes():
    names = set(corpus.monoids())
    assert len(names) >= 12
    assert {"N", "N2", "N<2,3>", "N<3,5,7>", "<a,b|2a=2b>", "<a,b|a+b=a>", "<a|2a=a>", "cone<(2,0),(1,1),(0,2)>"} <= names
    assert len(corpus.virtually_surjective_maps()) >= 5
    assert len(corpus.LOG_CHARTS) >= 8
    assert len(corpus.morphisms(QQ)) >= 8
    assert len(corpus.CHAINS) >= 3 and len(corpus.PUSHOUT_SQUARES) >= 3
    assert len(corpus.STRICT_ETALE) >= 2
    for F in (QQ, GF(3)):
        assert len(corpus.square_zero_family(F)) >= 4


def test_random_word_pairs_are_seeded():
    import random

    M = corpus.monoids()["<a,b|2a=2b>"]
    a = corpus.random_word_pairs(M, 50, random.Random(1))
    b = corpus.random_word_pairs(M, 50, random.Random(1))
    assert a == b
    assert all(sum(u) <= 8 and sum(v) <= 8 for u, v in a)
