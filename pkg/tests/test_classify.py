from __future__ import annotations

import json
import random

import pytest

from superdiv.classify import (
    LABELS,
    LabeledTweet,
    LinearValenceClassifier,
    MajorityClassLearner,
    cross_validate,
    extract_features,
    load_labeled_tweets,
)
from superdiv.corpus import Tweet


def tweet(lemmas, negated=False, tid="t"):
    return Tweet(id=tid, lemmas=tuple((l, "noun") for l in lemmas), language="en", negated=negated)


def test_features_uniform_valences() -> None:
    lexicon = {"a": 8.0, "b": 8.0, "c": 8.0}
    features = extract_features(tweet(["a", "b", "c"]), lexicon)
    assert features is not None
    assert features.mean == 8.0
    assert features.gmean == pytest.approx(8.0, abs=1e-12)
    assert features.median == 8.0
    assert features.std == 0.0
    assert features.min == 8.0
    assert features.max == 8.0
    assert features.count_gt7 == 3
    assert features.count_gt9 == 0
    assert features.count_lt3 == 0
    assert features.count_lt1 == 0
    assert features.length == 3
    assert features.has_negation is False


def test_features_zero_valence_conventions() -> None:
    lexicon = {"a": 0.0, "b": 5.0, "c": 10.0}
    features = extract_features(tweet(["a", "b", "c"]), lexicon)
    assert features is not None
    assert features.gmean == 0.0
    assert features.mean == 5.0
    assert features.count_gt9 == 1
    assert features.count_lt1 == 1
    assert features.count_gt7 == 1
    assert features.count_lt3 == 1


def test_features_under_three_matches_is_none() -> None:
    lexicon = {"a": 5.0, "b": 6.0}
    assert extract_features(tweet(["a", "b", "zz"]), lexicon) is None
    rng = random.Random(3)
    vocabulary = [f"w{i}" for i in range(20)]
    lex = {v: rng.uniform(0, 10) for v in vocabulary[:10]}
    for _ in range(300):
        lemmas = rng.sample(vocabulary, rng.randint(1, 8))
        matched = sum(1 for l in lemmas if l in lex)
        features = extract_features(tweet(lemmas), lex)
        assert (features is None) == (matched < 3)


def test_features_length_counts_all_lemmas_and_repeats_matter() -> None:
    lexicon = {"a": 4.0}
    features = extract_features(tweet(["a", "a", "a", "unknown"]), lexicon)
    assert features is not None
    # repeated occurrences each contribute to the statistics
    assert features.mean == 4.0
    assert features.length == 4


def test_features_pure_in_unmatched_lemmas() -> None:
    lexicon = {"a": 2.0, "b": 7.5, "c": 9.0}
    first = extract_features(tweet(["a", "b", "c", "zz"]), lexicon)
    second = extract_features(tweet(["a", "b", "c", "qq"]), lexicon)
    assert first == second


def test_labeled_tweet_validates_label() -> None:
    with pytest.raises(ValueError):
        LabeledTweet(tweet=tweet(["a"]), label="meh")


def build_dataset(n_neutral=60, n_positive=20, n_negative=20, seed=5):
    rng = random.Random(seed)
    lexicon = {f"w{i}": rng.uniform(0, 10) for i in range(30)}
    vocab = sorted(lexicon)
    data = []
    for i, (label, count) in enumerate(
        [("neutral", n_neutral), ("positive", n_positive), ("negative", n_negative)]
    ):
        for j in range(count):
            lemmas = rng.sample(vocab, 5)
            data.append(LabeledTweet(tweet=tweet(lemmas, tid=f"{label}-{j}"), label=label))
    return data, lexicon


def test_majority_learner_analytic_metrics() -> None:
    data, lexicon = build_dataset()
    report = cross_validate(data, lexicon, MajorityClassLearner(), repeats=10, seed=4)
    assert abs(report.accuracy.mean - 0.6) < 0.12
    assert report.recall["neutral"].mean == 1.0
    # the majority class is always predicted, so the other recalls are 0
    assert report.recall["positive"].mean == 0.0
    assert report.recall["negative"].mean == 0.0
    # precision for never-predicted classes is undefined in every repeat
    assert report.precision["positive"].n_defined == 0


def test_cross_validate_deterministic() -> None:
    data, lexicon = build_dataset()
    first = cross_validate(data, lexicon, LinearValenceClassifier(), repeats=3, seed=9)
    second = cross_validate(data, lexicon, LinearValenceClassifier(), repeats=3, seed=9)
    assert first == second


def test_cross_validate_splits_shared_across_lexicons() -> None:
    data, lexicon = build_dataset()
    shifted = {term: min(v + 1.0, 10.0) for term, v in lexicon.items()}

    class SplitRecorder:
        def __init__(self):
            self.train_sizes = []

        def fit(self, features, labels):
            self.train_sizes.append(len(labels))

        def predict(self, features):
            return ["neutral"] * len(features)

    first, second = SplitRecorder(), SplitRecorder()
    cross_validate(data, lexicon, first, repeats=4, seed=2)
    cross_validate(data, shifted, second, repeats=4, seed=2)
    # both lexicons match every lemma, so identical splits mean identical sizes
    assert first.train_sizes == second.train_sizes


def test_cross_validate_counts_dropped_records() -> None:
    data, lexicon = build_dataset()
    # a lexicon that matches nothing for half the vocabulary drops tweets
    partial = {term: v for term, v in lexicon.items() if term < "w15"}
    report = cross_validate(data, partial, MajorityClassLearner(), repeats=2, seed=1)
    assert any(d > 0 for d in report.dropped_train) or any(d > 0 for d in report.dropped_test)
    total = len(data)
    for rep in range(2):
        assert 0 <= report.dropped_train[rep] <= int(total * 0.8)
        assert 0 <= report.dropped_test[rep] <= total - int(total * 0.8)


def test_cross_validate_missing_class_marked_undefined() -> None:
    data, lexicon = build_dataset(n_neutral=30, n_positive=8, n_negative=2)
    report = cross_validate(data, lexicon, MajorityClassLearner(), repeats=6, seed=3)
    # with only 2 negative records some folds will miss the class entirely
    assert report.recall["negative"].n_defined < report.repeats


def test_paper_sized_class_mix_accepted() -> None:
    data, lexicon = build_dataset(n_neutral=135, n_positive=97, n_negative=43, seed=8)
    report = cross_validate(data, lexicon, MajorityClassLearner(), repeats=2, seed=0)
    assert report.accuracy.n_defined == 2


def test_load_labeled_tweets(tmp_path) -> None:
    path = tmp_path / "labeled.jsonl"
    records = [
        {"id": "1", "lemmas": [["good", "adjective"], ["day", "noun"]], "label": "positive"},
        {"id": "2", "lemmas": [["not", "adv"], ["bad", "adjective"]], "label": "negative"},
    ]
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    data = load_labeled_tweets(path, negation_terms=("not",))
    assert len(data) == 2
    assert data[0].label == "positive"
    assert data[1].tweet.negated is True
    assert set(LABELS) == {"negative", "neutral", "positive"}
