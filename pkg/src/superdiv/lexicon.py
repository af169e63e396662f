"""Valence lexicons: loading, rescaling, class balancing and train/test splits.

A lexicon maps lowercase lemmas to an emotional valence in [0, 10]
(0 = most negative, 10 = most positive). Lexicons seed the spreading
engine and serve as the ground-truth standard the modelled valences are
correlated against.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import DataFormatError

POS_TAGS = ("noun", "verb", "adjective", "other")
SOURCES = ("standard", "auxiliary", "badwords")
FORMATS = ("simple-csv", "swn-csv", "wordlist")

# Default class boundaries on the [0, 10] scale: negative < 4, positive > 6.
DEFAULT_CLASS_BOUNDS = (4.0, 6.0)


@dataclass(frozen=True)
class LexiconEntry:
    """One term with its valence, optional POS tag and originating source."""

    term: str
    valence: float
    pos: str | None = None
    source: str = "standard"

    def __post_init__(self) -> None:
        if not self.term or any(ch.isspace() for ch in self.term):
            raise ValueError(f"term must be non-empty and whitespace-free: {self.term!r}")
        if not 0.0 <= self.valence <= 10.0:
            raise ValueError(f"valence out of range [0, 10]: {self.valence!r} ({self.term})")
        if self.pos is not None and self.pos not in POS_TAGS:
            raise ValueError(f"unknown pos tag {self.pos!r} for {self.term!r}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r} for {self.term!r}")


class ValenceLexicon:
    """A set of LexiconEntry values keyed by unique term."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()) -> None:
        self._entries: dict[str, LexiconEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexiconEntry, *, replace: bool = False) -> None:
        if not replace and entry.term in self._entries:
            raise ValueError(f"duplicate term: {entry.term!r}")
        self._entries[entry.term] = entry

    @property
    def entries(self) -> Mapping[str, LexiconEntry]:
        return self._entries

    def terms(self) -> list[str]:
        """All terms, sorted for deterministic iteration."""
        return sorted(self._entries)

    def valence(self, term: str) -> float:
        return self._entries[term].valence

    def get(self, term: str) -> LexiconEntry | None:
        return self._entries.get(term)

    def to_valence_map(self) -> dict[str, float]:
        return {term: e.valence for term, e in sorted(self._entries.items())}

    def without(self, terms: Iterable[str]) -> "ValenceLexicon":
        """A copy with the given terms removed (used to hold out test terms)."""
        drop = set(terms)
        return ValenceLexicon(e for t, e in sorted(self._entries.items()) if t not in drop)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, term: object) -> bool:
        return term in self._entries

    def __iter__(self) -> Iterator[LexiconEntry]:
        for term in sorted(self._entries):
            yield self._entries[term]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValenceLexicon):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"ValenceLexicon({len(self._entries)} terms)"


@dataclass(frozen=True)
class LexiconSplit:
    """A disjoint train/test partition of a lexicon, tagged with its RNG seed."""

    train: ValenceLexicon
    test: ValenceLexicon
    seed: int


def merge_lexicons(*lexicons: ValenceLexicon) -> ValenceLexicon:
    """Union of lexicons; on term collision the earliest argument wins."""
    merged = ValenceLexicon()
    for lex in lexicons:
        for entry in lex:
            if entry.term not in merged:
                merged.add(entry)
    return merged


def rescale_swn(pos_score: float, neg_score: float) -> float:
    """Map a (positive, negative) score pair in [0, 1] each to one valence in [0, 10].

    The overall polarity is the difference of the two scores, shifted and
    scaled so that -1 maps to 0, 0 to 5 and +1 to 10.
    """
    if not 0.0 <= pos_score <= 1.0:
        raise ValueError(f"pos_score out of range [0, 1]: {pos_score!r}")
    if not 0.0 <= neg_score <= 1.0:
        raise ValueError(f"neg_score out of range [0, 1]: {neg_score!r}")
    return (pos_score - neg_score + 1.0) * 5.0


def balance_lexicon(
    lex: ValenceLexicon,
    class_bounds: tuple[float, float] = DEFAULT_CLASS_BOUNDS,
) -> ValenceLexicon:
    """Equalize the negative / neutral / positive class sizes.

    Classes are cut at ``class_bounds = (low, high)``: negative below low,
    neutral inside [low, high], positive above high. Every class is trimmed
    to the size of the smallest one, keeping the most strongly polarized
    entries (largest |valence - 5|, ties broken by term order).
    """
    low, high = class_bounds
    if not (0.0 <= low < high <= 10.0):
        raise ValueError(f"invalid class bounds: {class_bounds!r}")
    classes: dict[str, list[LexiconEntry]] = {"negative": [], "neutral": [], "positive": []}
    for entry in lex:
        if entry.valence < low:
            classes["negative"].append(entry)
        elif entry.valence > high:
            classes["positive"].append(entry)
        else:
            classes["neutral"].append(entry)
    for name, members in classes.items():
        if not members:
            raise ValueError(f"cannot balance: {name} class is empty")
    n = min(len(members) for members in classes.values())
    kept: list[LexiconEntry] = []
    for members in classes.values():
        members.sort(key=lambda e: (-abs(e.valence - 5.0), e.term))
        kept.extend(members[:n])
    return ValenceLexicon(sorted(kept, key=lambda e: e.term))


def split_lexicon(lex: ValenceLexicon, fraction: float = 0.5, seed: int = 0) -> LexiconSplit:
    """Random disjoint partition with |train| = floor(|lex| * fraction).

    The same (lexicon, fraction, seed) triple always yields the same split.
    """
    if len(lex) < 2:
        raise ValueError("cannot split a lexicon with fewer than 2 entries")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1): {fraction!r}")
    terms = lex.terms()
    rng = random.Random(seed)
    rng.shuffle(terms)
    n_train = math.floor(len(terms) * fraction)
    train_terms = set(terms[:n_train])
    train = ValenceLexicon(e for e in lex if e.term in train_terms)
    test = ValenceLexicon(e for e in lex if e.term not in train_terms)
    return LexiconSplit(train=train, test=test, seed=seed)


def load_lexicon(path: str | Path, format: str, source: str | None = None) -> ValenceLexicon:
    """Load a lexicon file.

    Formats:
      simple-csv  header ``term,valence[,pos]``
      swn-csv     header ``term,pos_score,neg_score[,pos]`` (scores rescaled to [0, 10])
      wordlist    one term per line, ``#`` comments; every term gets valence 0.0

    All input is lowercased. Parse problems raise DataFormatError with the
    offending line number.
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown lexicon format {format!r}; expected one of {FORMATS}")
    if source is None:
        source = {"simple-csv": "standard", "swn-csv": "auxiliary", "wordlist": "badwords"}[format]
    lex = ValenceLexicon()
    if format == "wordlist":
        with path.open(encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip().lower()
                if not line or line.startswith("#"):
                    continue
                _add_entry(lex, line, 0.0, None, source, path, lineno)
        return lex

    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["term", "valence"] if format == "simple-csv" else ["term", "pos_score", "neg_score"]
        if header is None or [h.strip().lower() for h in header[: len(expected)]] != expected:
            raise DataFormatError(
                f"expected header starting with {','.join(expected)!r}", path=path, line=1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            row = [cell.strip().lower() for cell in row]
            if len(row) < len(expected):
                raise DataFormatError(f"expected at least {len(expected)} columns", path=path, line=lineno)
            term = row[0]
            pos = row[len(expected)] if len(row) > len(expected) and row[len(expected)] else None
            try:
                if format == "simple-csv":
                    valence = float(row[1])
                else:
                    valence = rescale_swn(float(row[1]), float(row[2]))
            except ValueError as exc:
                raise DataFormatError(str(exc), path=path, line=lineno) from exc
            _add_entry(lex, term, valence, pos, source, path, lineno)
    return lex


def _add_entry(
    lex: ValenceLexicon,
    term: str,
    valence: float,
    pos: str | None,
    source: str,
    path: Path,
    lineno: int,
) -> None:
    try:
        lex.add(LexiconEntry(term=term, valence=valence, pos=pos, source=source))
    except ValueError as exc:
        raise DataFormatError(str(exc), path=path, line=lineno) from exc


def write_lexicon(lex: ValenceLexicon, path: str | Path) -> None:
    """Write a lexicon in simple-csv format, sorted by term (bit-stable)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["term", "valence", "pos"])
        for entry in lex:
            writer.writerow([entry.term, repr(entry.valence), entry.pos or ""])
