"""Geotagged microtext corpora: ingestion, region coding and partitioning.

Corpus files are UTF-8 JSON Lines. Each record carries ``id``, ``lang``,
``location`` and either ``lemmas`` (array of [lemma, pos] pairs, the normal
pre-lemmatized path) or ``text`` (degraded mode: lowercased, split on
punctuation, every token tagged as noun). Optional ``nuts1/2/3`` fields set
region codes directly, bypassing the gazetteer.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataFormatError

logger = logging.getLogger(__name__)

NUTS_LEVELS = ("nuts1", "nuts2", "nuts3")

_WORD_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class Tweet:
    """One preprocessed microtext."""

    id: str
    lemmas: tuple[tuple[str, str], ...]
    language: str
    location_label: str = ""
    nuts1: str | None = None
    nuts2: str | None = None
    nuts3: str | None = None
    negated: bool = False

    def lemma_strings(self) -> tuple[str, ...]:
        return tuple(lemma for lemma, _ in self.lemmas)

    def region_code(self, level: str) -> str | None:
        if level not in NUTS_LEVELS:
            raise ValueError(f"unknown NUTS level {level!r}")
        return getattr(self, level)


@dataclass
class IngestStats:
    lines_read: int = 0
    kept: int = 0
    malformed: int = 0
    dropped_language: int = 0
    dropped_empty: int = 0


@dataclass
class Corpus:
    """An ordered collection of tweets, optionally restricted to one language."""

    tweets: list[Tweet]
    language_filter: str | None = None
    stats: IngestStats | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)


def trivial_lemmatize(text: str) -> tuple[tuple[str, str], ...]:
    """Degraded tokenizer for raw text: lowercase, split on punctuation, all nouns."""
    return tuple((token, "noun") for token in _WORD_RE.findall(text.lower()))


def ingest_corpus(
    path: str | Path,
    lang: str | None,
    negation_terms: Iterable[str] = (),
    keep_pos: Iterable[str] = (),
) -> Corpus:
    """Read a JSONL corpus file, filter and preprocess.

    Tweets whose language differs from ``lang`` are dropped (no filter when
    lang is None). Lemmas are restricted to ``keep_pos`` tags (empty set =
    keep all). The negation flag is set from the record's raw tokens before
    any POS filtering. Records left with zero lemmas are dropped; malformed
    lines are logged with their line number, skipped and counted. An
    unreadable file raises OSError.
    """
    path = Path(path)
    negation = {t.lower() for t in negation_terms}
    keep = {p.lower() for p in keep_pos}
    stats = IngestStats()
    tweets: list[Tweet] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            stats.lines_read += 1
            parsed = _parse_record(line, lineno, path)
            if parsed is None:
                stats.malformed += 1
                continue
            language, location, tweet_id, lemma_pairs, raw_tokens, codes = parsed
            if lang is not None and language != lang.lower():
                stats.dropped_language += 1
                continue
            negated = any(token in negation for token in raw_tokens)
            if keep:
                lemma_pairs = tuple(pair for pair in lemma_pairs if pair[1] in keep)
            if not lemma_pairs:
                stats.dropped_empty += 1
                continue
            tweets.append(
                Tweet(
                    id=tweet_id,
                    lemmas=lemma_pairs,
                    language=language,
                    location_label=location,
                    nuts1=codes[0],
                    nuts2=codes[1],
                    nuts3=codes[2],
                    negated=negated,
                )
            )
            stats.kept += 1
    if stats.malformed:
        logger.warning("%s: skipped %d malformed record(s)", path, stats.malformed)
    if stats.dropped_empty:
        logger.info("%s: dropped %d record(s) with no surviving lemmas", path, stats.dropped_empty)
    return Corpus(tweets=tweets, language_filter=lang.lower() if lang else None, stats=stats)


def _parse_record(line, lineno, path):
    try:
        rec = json.loads(line)
        if not isinstance(rec, dict):
            raise ValueError("record is not an object")
        tweet_id = str(rec["id"])
        language = str(rec.get("lang", "")).lower()
        location = str(rec.get("location", ""))
        if "lemmas" in rec:
            lemma_pairs = tuple(
                (str(lemma).lower(), str(pos).lower()) for lemma, pos in rec["lemmas"]
            )
            raw_tokens = [lemma for lemma, _ in lemma_pairs]
        elif "text" in rec:
            text = str(rec["text"])
            lemma_pairs = trivial_lemmatize(text)
            raw_tokens = text.lower().split()
        else:
            raise ValueError("record has neither 'lemmas' nor 'text'")
        codes = tuple(
            str(rec[level]) if rec.get(level) else None for level in NUTS_LEVELS
        )
    except (ValueError, KeyError, TypeError) as exc:
        logger.warning("%s:%d: malformed record (%s)", path, lineno, exc)
        return None
    return language, location, tweet_id, lemma_pairs, raw_tokens, codes


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize a corpus as canonical JSONL (fixed key order, bit-stable)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for tweet in corpus:
            rec: dict[str, object] = {
                "id": tweet.id,
                "lang": tweet.language,
                "location": tweet.location_label,
                "lemmas": [[lemma, pos] for lemma, pos in tweet.lemmas],
            }
            for level in NUTS_LEVELS:
                code = getattr(tweet, level)
                if code is not None:
                    rec[level] = code
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


class Gazetteer:
    """Offline location-label to NUTS-code table (casefolded exact lookup)."""

    def __init__(self, table: dict[str, tuple[str, str, str]]) -> None:
        self._table = {label.casefold(): codes for label, codes in table.items()}

    @classmethod
    def from_csv(cls, path: str | Path) -> "Gazetteer":
        """Load ``location,nuts1,nuts2,nuts3`` CSV; codes must nest properly."""
        path = Path(path)
        table: dict[str, tuple[str, str, str]] = {}
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip().lower() for h in header[:4]] != [
                "location",
                "nuts1",
                "nuts2",
                "nuts3",
            ]:
                raise DataFormatError("expected header 'location,nuts1,nuts2,nuts3'", path=path, line=1)
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) < 4:
                    raise DataFormatError("expected 4 columns", path=path, line=lineno)
                label, n1, n2, n3 = (cell.strip() for cell in row[:4])
                if not (n2.startswith(n1) and n3.startswith(n2)):
                    raise DataFormatError(
                        f"NUTS codes do not nest: {n1!r} > {n2!r} > {n3!r}", path=path, line=lineno
                    )
                key = label.casefold()
                if key in table:
                    raise DataFormatError(f"duplicate location {label!r}", path=path, line=lineno)
                table[key] = (n1, n2, n3)
        return cls(table)

    def lookup(self, label: str) -> tuple[str, str, str] | None:
        return self._table.get(label.casefold())

    def __len__(self) -> int:
        return len(self._table)


def assign_regions(corpus: Corpus, gaz: Gazetteer) -> tuple[Corpus, float]:
    """Set NUTS codes from the gazetteer; returns (new corpus, match rate).

    Tweets whose location label is not in the table keep their codes as-is;
    an unmatched label is a counted outcome, not an error.
    """
    matched = 0
    tweets: list[Tweet] = []
    for tweet in corpus:
        codes = gaz.lookup(tweet.location_label)
        if codes is not None:
            matched += 1
            tweets.append(replace(tweet, nuts1=codes[0], nuts2=codes[1], nuts3=codes[2]))
        else:
            tweets.append(tweet)
    rate = matched / len(corpus.tweets) if corpus.tweets else 0.0
    return Corpus(tweets=tweets, language_filter=corpus.language_filter), rate


def partition_by_region(corpus: Corpus, level: str) -> dict[str, Corpus]:
    """Group tweets by their code at one NUTS level; uncoded tweets are excluded."""
    if level not in NUTS_LEVELS:
        raise ValueError(f"unknown NUTS level {level!r}")
    groups: dict[str, list[Tweet]] = {}
    for tweet in corpus:
        code = tweet.region_code(level)
        if code is None:
            continue
        groups.setdefault(code, []).append(tweet)
    return {
        code: Corpus(tweets=members, language_filter=corpus.language_filter)
        for code, members in sorted(groups.items())
    }


def top_regions(partitions: dict[str, Corpus], k: int) -> dict[str, Corpus]:
    """Keep the k regions with the most tweets (ties: lexicographically smaller code)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(partitions.items(), key=lambda item: (-len(item[1].tweets), item[0]))
    return dict(ranked[:k])


def filter_language(corpus: Corpus, lang: str) -> Corpus:
    """Restrict a corpus to one language (used to pair SI with multilingual baselines)."""
    lang = lang.lower()
    return Corpus(
        tweets=[t for t in corpus if t.language == lang],
        language_filter=lang,
    )
