"""Alternative per-region diversity measures the index is compared against.

Tweet volume and type-token ratio are computed on the local-language corpus;
language count and language entropy on the unfiltered multilingual tweet
stream of the same region, since using multiple languages is itself the
signal those two measures look for.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Corpus, Tweet
from .errors import DataFormatError


@dataclass
class BaselineReport:
    region: str
    tweet_count: int
    tweets_per_capita: float | None
    language_count: int
    language_entropy: float
    ttr: float


def ttr(corpus: Corpus) -> float:
    """Type-token ratio: distinct lemmas over total lemma tokens, in (0, 1]."""
    total = 0
    types: set[str] = set()
    for tweet in corpus:
        for lemma in tweet.lemma_strings():
            total += 1
            types.add(lemma)
    if total == 0:
        raise ValueError("type-token ratio of an empty corpus is undefined")
    return len(types) / total


def language_entropy(all_tweets_in_region: Sequence[Tweet]) -> float:
    """Shannon entropy (natural log) of the tweet-per-language distribution."""
    if not all_tweets_in_region:
        raise ValueError("language entropy of an empty tweet list is undefined")
    counts: dict[str, int] = {}
    for tweet in all_tweets_in_region:
        counts[tweet.language] = counts.get(tweet.language, 0) + 1
    n = len(all_tweets_in_region)
    entropy = 0.0
    for c in counts.values():
        p = c / n
        entropy -= p * math.log(p)
    return entropy


def baseline_report(
    region_tweets: Sequence[Tweet],
    local_corpus: Corpus,
    population: int | None = None,
    region: str = "",
) -> BaselineReport:
    """All five measures for one region.

    ``region_tweets`` is the full multilingual stream; ``local_corpus`` its
    local-language subset. A missing population leaves the per-capita field
    unset; a zero or negative population is an error.
    """
    if population is not None and population <= 0:
        raise ValueError(f"population must be positive, got {population!r}")
    tweet_count = len(local_corpus.tweets)
    per_capita = tweet_count / population if population is not None else None
    languages = {tweet.language for tweet in region_tweets}
    return BaselineReport(
        region=region,
        tweet_count=tweet_count,
        tweets_per_capita=per_capita,
        language_count=len(languages),
        language_entropy=language_entropy(region_tweets),
        ttr=ttr(local_corpus),
    )


def load_population_table(path: str | Path) -> dict[str, int]:
    """Load a ``region,population`` CSV used for the per-capita measure."""
    path = Path(path)
    table: dict[str, int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["region", "population"]:
            raise DataFormatError("expected header 'region,population'", path=path, line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                region = row[0].strip()
                population = int(row[1])
            except (ValueError, IndexError) as exc:
                raise DataFormatError(str(exc), path=path, line=lineno) from exc
            if region in table:
                raise DataFormatError(f"duplicate region {region!r}", path=path, line=lineno)
            table[region] = population
    return table
