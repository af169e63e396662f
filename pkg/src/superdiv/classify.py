"""Lexicon-driven tweet sentiment features and a repeated-split evaluation harness.

The features summarize the valences that a lexicon assigns to a tweet's
lemmas; the harness compares lexicons under identical train/test splits so
metric differences are attributable to the lexicon alone.
"""

from __future__ import annotations

import json
import logging
import math
import random
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .corpus import Tweet
from .errors import DataFormatError

logger = logging.getLogger(__name__)

LABELS = ("negative", "neutral", "positive")

FEATURE_NAMES = (
    "mean",
    "gmean",
    "median",
    "std",
    "min",
    "max",
    "count_gt7",
    "count_gt9",
    "count_lt3",
    "count_lt1",
    "length",
    "has_negation",
)

MIN_MATCHED_LEMMAS = 3


@dataclass(frozen=True)
class SentimentFeatures:
    """Valence statistics of one tweet under one lexicon."""

    mean: float
    gmean: float
    median: float
    std: float
    min: float
    max: float
    count_gt7: int
    count_gt9: int
    count_lt3: int
    count_lt1: int
    length: int
    has_negation: bool

    def to_vector(self) -> list[float]:
        return [
            self.mean,
            self.gmean,
            self.median,
            self.std,
            self.min,
            self.max,
            float(self.count_gt7),
            float(self.count_gt9),
            float(self.count_lt3),
            float(self.count_lt1),
            float(self.length),
            1.0 if self.has_negation else 0.0,
        ]


@dataclass(frozen=True)
class LabeledTweet:
    tweet: Tweet
    label: str

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}; expected one of {LABELS}")


def extract_features(tweet: Tweet, lexicon: Mapping[str, float]) -> SentimentFeatures | None:
    """Compute features over the tweet lemmas found in the lexicon.

    Returns None when fewer than 3 lemma occurrences match. The standard
    deviation is the population one; the geometric mean is 0 as soon as any
    matched valence is 0. Threshold counts are strict (> 7, > 9, < 3, < 1).
    """
    matched = [lexicon[lemma] for lemma in tweet.lemma_strings() if lemma in lexicon]
    if len(matched) < MIN_MATCHED_LEMMAS:
        return None
    n = len(matched)
    mean = sum(matched) / n
    if any(v == 0.0 for v in matched):
        gmean = 0.0
    else:
        gmean = math.exp(sum(math.log(v) for v in matched) / n)
    return SentimentFeatures(
        mean=mean,
        gmean=gmean,
        median=statistics.median(matched),
        std=statistics.pstdev(matched),
        min=min(matched),
        max=max(matched),
        count_gt7=sum(1 for v in matched if v > 7.0),
        count_gt9=sum(1 for v in matched if v > 9.0),
        count_lt3=sum(1 for v in matched if v < 3.0),
        count_lt1=sum(1 for v in matched if v < 1.0),
        length=len(tweet.lemmas),
        has_negation=tweet.negated,
    )


class Learner(Protocol):
    """Classifier contract: fit on feature vectors and labels, predict labels.

    fit() must reset any previous state; the harness refits the same object
    once per repeat.
    """

    def fit(self, features: Sequence[Sequence[float]], labels: Sequence[str]) -> None: ...

    def predict(self, features: Sequence[Sequence[float]]) -> list[str]: ...


class MajorityClassLearner:
    """Predicts the most frequent training label (ties broken by label order)."""

    def __init__(self) -> None:
        self._label: str | None = None

    def fit(self, features: Sequence[Sequence[float]], labels: Sequence[str]) -> None:
        counts = {label: 0 for label in LABELS}
        for label in labels:
            counts[label] += 1
        self._label = max(LABELS, key=lambda lab: counts[lab])

    def predict(self, features: Sequence[Sequence[float]]) -> list[str]:
        if self._label is None:
            raise RuntimeError("predict called before fit")
        return [self._label] * len(features)


class LinearValenceClassifier:
    """One-vs-rest logistic regression on standardized features.

    Deterministic given its inputs (L-BFGS solver), so repeated evaluations
    with the same seed reproduce bit-identical reports.
    """

    def __init__(self, c: float = 1.0, max_iter: int = 1000) -> None:
        self.c = c
        self.max_iter = max_iter
        self._pipeline = None

    def fit(self, features: Sequence[Sequence[float]], labels: Sequence[str]) -> None:
        from sklearn.linear_model import LogisticRegression
        from sklearn.multiclass import OneVsRestClassifier
        from sklearn.pipeline import make_pipeline
        from sklearn.preprocessing import StandardScaler

        self._pipeline = make_pipeline(
            StandardScaler(),
            OneVsRestClassifier(
                LogisticRegression(C=self.c, max_iter=self.max_iter, random_state=0)
            ),
        )
        self._pipeline.fit(np.asarray(features, dtype=float), np.asarray(labels))

    def predict(self, features: Sequence[Sequence[float]]) -> list[str]:
        if self._pipeline is None:
            raise RuntimeError("predict called before fit")
        return [str(label) for label in self._pipeline.predict(np.asarray(features, dtype=float))]


@dataclass(frozen=True)
class MetricStats:
    """Mean and population standard deviation over the repeats where defined."""

    mean: float
    std: float
    n_defined: int


@dataclass
class EvaluationReport:
    labels: tuple[str, ...]
    precision: dict[str, MetricStats]
    recall: dict[str, MetricStats]
    f1: dict[str, MetricStats]
    accuracy: MetricStats
    repeats: int
    dropped_train: tuple[int, ...]
    dropped_test: tuple[int, ...]


def _summarize(values: list[float]) -> MetricStats:
    if not values:
        return MetricStats(mean=float("nan"), std=float("nan"), n_defined=0)
    return MetricStats(
        mean=statistics.fmean(values),
        std=statistics.pstdev(values),
        n_defined=len(values),
    )


def cross_validate(
    data: Sequence[LabeledTweet],
    lexicon: Mapping[str, float],
    learner: Learner,
    repeats: int = 10,
    train_fraction: float = 0.8,
    seed: int = 0,
) -> EvaluationReport:
    """Repeated random-split evaluation of one lexicon.

    Repeat i shuffles the full dataset with seed ``seed + i`` and takes the
    first floor(n * train_fraction) records as the training side, so two
    lexicons evaluated with the same seed see identical splits. Records
    whose features are None under this lexicon are dropped from their side
    and counted. A class missing from a test fold leaves that class's
    metrics undefined for the repeat; undefined values are excluded from
    the aggregation and reported through n_defined.
    """
    if not data:
        raise ValueError("cannot evaluate on an empty dataset")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1): {train_fraction!r}")

    features = [extract_features(item.tweet, lexicon) for item in data]
    n = len(data)
    n_train = math.floor(n * train_fraction)

    per_class: dict[str, dict[str, list[float]]] = {
        label: {"precision": [], "recall": [], "f1": []} for label in LABELS
    }
    accuracies: list[float] = []
    dropped_train: list[int] = []
    dropped_test: list[int] = []

    for rep in range(repeats):
        rng = random.Random(seed + rep)
        indices = list(range(n))
        rng.shuffle(indices)
        train_idx = [i for i in indices[:n_train] if features[i] is not None]
        test_idx = [i for i in indices[n_train:] if features[i] is not None]
        dropped_train.append(n_train - len(train_idx))
        dropped_test.append((n - n_train) - len(test_idx))
        if not train_idx or not test_idx:
            logger.warning("repeat %d: empty train or test side after feature drop", rep)
            continue
        train_x = [features[i].to_vector() for i in train_idx]
        train_y = [data[i].label for i in train_idx]
        test_x = [features[i].to_vector() for i in test_idx]
        test_y = [data[i].label for i in test_idx]
        learner.fit(train_x, train_y)
        predicted = list(learner.predict(test_x))

        accuracies.append(sum(1 for t, p in zip(test_y, predicted) if t == p) / len(test_y))
        for label in LABELS:
            tp = sum(1 for t, p in zip(test_y, predicted) if t == label and p == label)
            fp = sum(1 for t, p in zip(test_y, predicted) if t != label and p == label)
            fn = sum(1 for t, p in zip(test_y, predicted) if t == label and p != label)
            if tp + fn == 0:
                continue  # class absent from the fold: metrics undefined
            recall = tp / (tp + fn)
            per_class[label]["recall"].append(recall)
            if tp + fp > 0:
                prec = tp / (tp + fp)
                per_class[label]["precision"].append(prec)
                if prec + recall > 0:
                    per_class[label]["f1"].append(2 * prec * recall / (prec + recall))
                else:
                    per_class[label]["f1"].append(0.0)

    return EvaluationReport(
        labels=LABELS,
        precision={label: _summarize(per_class[label]["precision"]) for label in LABELS},
        recall={label: _summarize(per_class[label]["recall"]) for label in LABELS},
        f1={label: _summarize(per_class[label]["f1"]) for label in LABELS},
        accuracy=_summarize(accuracies),
        repeats=repeats,
        dropped_train=tuple(dropped_train),
        dropped_test=tuple(dropped_test),
    )


def load_labeled_tweets(
    path: str | Path,
    negation_terms: Iterable[str] = (),
) -> list[LabeledTweet]:
    """Read a labeled JSONL file with fields ``id``, ``lemmas`` and ``label``."""
    path = Path(path)
    negation = {t.lower() for t in negation_terms}
    records: list[LabeledTweet] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                lemmas = tuple((str(l).lower(), str(p).lower()) for l, p in rec["lemmas"])
                label = str(rec["label"])
                tweet = Tweet(
                    id=str(rec["id"]),
                    lemmas=lemmas,
                    language=str(rec.get("lang", "")).lower(),
                    negated=any(lemma in negation for lemma, _ in lemmas),
                )
                records.append(LabeledTweet(tweet=tweet, label=label))
            except (ValueError, KeyError, TypeError) as exc:
                raise DataFormatError(f"malformed labeled record ({exc})", path=path, line=lineno) from exc
    return records
