from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylosig.conllu import parse_conllu
from stylosig.corpus import Document
from stylosig.errors import DataError
from stylosig.features import (
    SEP,
    FeatureModel,
    build_vocabulary,
    extract_ngrams,
    extract_sngrams,
    read_feature_tsv,
    tokenize,
    vectorize,
    write_feature_tsv,
)

from .conftest import make_sentence
from .oracles import sngrams_recursive


# -- tokenization -----------------------------------------------------------

def test_tokenize_lowercases_and_splits():
    assert tokenize("Dogs chase cats.") == ["dogs", "chase", "cats"]


def test_tokenize_punctuation_and_digits():
    assert tokenize("E-mail me 2x, O.K.?") == ["e", "mail", "me", "2x", "o", "k"]


def test_tokenize_underscore_is_a_separator():
    assert tokenize("snake_case") == ["snake", "case"]


def test_tokenize_unicode_letters():
    assert tokenize("Café naïve") == ["café", "naïve"]


def test_tokenize_empty():
    assert tokenize("...") == []


# -- word n-grams -----------------------------------------------------------

def test_unigrams_are_plain_counts():
    assert extract_ngrams(["a", "b", "a"], 1) == Counter({"a": 2, "b": 1})


def test_bigrams_use_separator():
    grams = extract_ngrams(["a", "b", "a"], 2)
    assert grams == Counter({f"a{SEP}b": 1, f"b{SEP}a": 1})


def test_short_text_yields_nothing():
    assert extract_ngrams(["a"], 2) == Counter()
    assert extract_ngrams([], 1) == Counter()


def test_ngram_order_must_be_positive():
    with pytest.raises(ValueError):
        extract_ngrams(["a"], 0)


def test_separator_prevents_collisions():
    # "a b" as a bigram must differ from a token that contains a space
    bigram = extract_ngrams(["a", "b"], 2)
    unigram = extract_ngrams(["a b"], 1)
    assert set(bigram) != set(unigram)


# -- syntactic n-grams ------------------------------------------------------

CONLLU = (
    "1\tDogs\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
    "2\tchase\tchase\tVERB\t_\t_\t0\troot\t_\t_\n"
    "3\tcats\tcat\tNOUN\t_\t_\t2\tobj\t_\t_\n"
)


def test_sngrams_head_to_dependent():
    (sent,) = parse_conllu(CONLLU)
    grams = extract_sngrams(sent, "word", 2)
    assert grams == Counter({f"chase{SEP}dogs": 1, f"chase{SEP}cats": 1})


def test_sngrams_order_one_is_per_token():
    (sent,) = parse_conllu(CONLLU)
    assert extract_sngrams(sent, "word", 1) == Counter({"dogs": 1, "chase": 1, "cats": 1})


def test_sngrams_deeper_chain():
    # 0 <- 1 <- 2 <- 3 chain, root at token 0
    sent = make_sentence([-1, 0, 1, 2], ["r", "a", "b", "c"])
    grams = extract_sngrams(sent, "word", 3)
    assert grams == Counter({f"r{SEP}a{SEP}b": 1, f"a{SEP}b{SEP}c": 1})


def test_sngrams_too_long_chain_yields_nothing():
    sent = make_sentence([-1, 0], ["r", "a"])
    assert extract_sngrams(sent, "word", 3) == Counter()


def test_sngrams_element_channels():
    (sent,) = parse_conllu(CONLLU)
    assert extract_sngrams(sent, "upos", 2) == Counter({f"VERB{SEP}NOUN": 2})
    assert extract_sngrams(sent, "deprel", 2) == Counter(
        {f"root{SEP}nsubj": 1, f"root{SEP}obj": 1}
    )
    assert extract_sngrams(sent, "lemma", 2) == Counter(
        {f"chase{SEP}dog": 1, f"chase{SEP}cat": 1}
    )


def test_sngrams_count_equals_deep_tokens():
    # each token at depth >= k-1 closes exactly one k-chain
    sent = make_sentence([-1, 0, 0, 1, 1, 3], ["r", "a", "b", "c", "d", "e"])
    for k in (1, 2, 3):
        depth = [0, 1, 1, 2, 2, 3]
        expected = sum(1 for d in depth if d >= k - 1)
        assert sum(extract_sngrams(sent, "word", k).values()) == expected


def test_sngrams_validate_arguments():
    (sent,) = parse_conllu(CONLLU)
    with pytest.raises(ValueError):
        extract_sngrams(sent, "word", 0)
    with pytest.raises(ValueError):
        extract_sngrams(sent, "stem", 2)


@st.composite
def random_trees(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    heads = [-1] + [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    labels = [draw(st.sampled_from("wxyz")) for _ in range(n)]
    return make_sentence(heads, labels)


@given(random_trees(), st.integers(min_value=1, max_value=4))
@settings(max_examples=300, deadline=None)
def test_sngrams_match_recursive_oracle(sent, k):
    assert extract_sngrams(sent, "word", k) == sngrams_recursive(sent, "word", k)


# -- feature models ---------------------------------------------------------

def test_model_union_of_orders():
    model = FeatureModel("ngram", (1, 2))
    doc = Document("d", 0, "a b a")
    counts = model.extract(doc)
    assert counts["a"] == 2 and counts[f"a{SEP}b"] == 1


def test_model_sngram_requires_tree():
    model = FeatureModel("sngram", (2,), "word")
    with pytest.raises(DataError, match="no dependency tree"):
        model.extract(Document("d", 0, "some text", tree=None))


def test_model_sngram_over_sentences():
    model = FeatureModel("sngram", (2,), "word")
    doc = Document("d", 0, "Dogs chase cats", tree=parse_conllu(CONLLU + "\n" + CONLLU))
    counts = model.extract(doc)
    assert counts[f"chase{SEP}dogs"] == 2


def test_model_validation():
    with pytest.raises(ValueError):
        FeatureModel("chargram", (1,))
    with pytest.raises(ValueError):
        FeatureModel("ngram", ())
    with pytest.raises(ValueError):
        FeatureModel("ngram", (1, 1))
    with pytest.raises(ValueError):
        FeatureModel("sngram", (2,), "stem")


# -- vocabulary and vectors -------------------------------------------------

def test_vocabulary_ranks_by_frequency_then_lexicographic():
    model = FeatureModel("ngram", (1,))
    docs = [Counter({"b": 3, "a": 1}), Counter({"c": 3, "a": 2})]
    vocab = build_vocabulary(docs, model, 3)
    # totals: a=3, b=3, c=3 -> all tie, lexicographic
    assert vocab.features == ("a", "b", "c")


def test_vocabulary_truncates_to_m():
    model = FeatureModel("ngram", (1,))
    vocab = build_vocabulary([Counter({"a": 5, "b": 4, "c": 3})], model, 2)
    assert vocab.features == ("a", "b")
    assert vocab.profile_size == 2


def test_vocabulary_smaller_than_m_is_fine():
    model = FeatureModel("ngram", (1,))
    vocab = build_vocabulary([Counter({"a": 1})], model, 100)
    assert len(vocab) == 1


def test_vocabulary_rejects_bad_size():
    with pytest.raises(ValueError):
        build_vocabulary([], FeatureModel("ngram", (1,)), 0)


def test_vectorize_drops_out_of_vocabulary():
    model = FeatureModel("ngram", (1,))
    vocab = build_vocabulary([Counter({"a": 2, "b": 1})], model, 2)
    vec = vectorize(Counter({"a": 4, "z": 9}), vocab)
    assert vec.counts == {vocab.index["a"]: 4}
    assert vec.total == 4


@given(
    st.lists(
        st.dictionaries(st.sampled_from("abcdef"), st.integers(1, 9), min_size=1),
        min_size=1,
        max_size=5,
    ),
    st.integers(min_value=1, max_value=8),
)
@settings(max_examples=100, deadline=None)
def test_vocabulary_size_bounded_and_sorted(dicts, m):
    model = FeatureModel("ngram", (1,))
    vocab = build_vocabulary([Counter(d) for d in dicts], model, m)
    assert len(vocab) <= m
    total = Counter()
    for d in dicts:
        total.update(d)
    ranked = sorted(total.items(), key=lambda kv: (-kv[1], kv[0]))
    assert list(vocab.features) == [f for f, _ in ranked[:m]]


# -- TSV round trip ---------------------------------------------------------

def test_feature_tsv_roundtrip(tmp_path):
    pairs = [("plain", 3), (f"two{SEP}part", 1), ("café", 2)]
    path = tmp_path / "features.tsv"
    write_feature_tsv(pairs, path)
    assert read_feature_tsv(path) == pairs
