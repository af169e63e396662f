from __future__ import annotations

import json

import pytest

from superdiv.corpus import (
    Corpus,
    Gazetteer,
    Tweet,
    assign_regions,
    filter_language,
    ingest_corpus,
    partition_by_region,
    top_regions,
    trivial_lemmatize,
    write_corpus,
)
from superdiv.errors import DataFormatError

KEEP = ("noun", "verb", "adjective")
NEGATIONS = ("don't", "not", "never")


def write_jsonl(path, records) -> None:
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")


def test_ingest_pos_filter(tmp_path) -> None:
    path = tmp_path / "c.jsonl"
    write_jsonl(
        path,
        [{"id": "1", "lang": "en", "location": "X", "lemmas": [["rain", "noun"], ["the", "det"]]}],
    )
    corpus = ingest_corpus(path, "en", NEGATIONS, KEEP)
    assert len(corpus) == 1
    assert corpus.tweets[0].lemmas == (("rain", "noun"),)


def test_ingest_negation_flag(tmp_path) -> None:
    path = tmp_path / "c.jsonl"
    write_jsonl(
        path,
        [
            {"id": "1", "lang": "en", "location": "X", "text": "I don't like rain"},
            {"id": "2", "lang": "en", "location": "X", "text": "sunny day today"},
        ],
    )
    corpus = ingest_corpus(path, "en", NEGATIONS, ())
    assert corpus.tweets[0].negated is True
    assert corpus.tweets[1].negated is False


def test_ingest_negation_checked_before_pos_filter(tmp_path) -> None:
    # the negation lemma itself is filtered out, the flag must still be set
    path = tmp_path / "c.jsonl"
    write_jsonl(
        path,
        [{"id": "1", "lang": "en", "location": "X", "lemmas": [["not", "adv"], ["rain", "noun"]]}],
    )
    corpus = ingest_corpus(path, "en", NEGATIONS, KEEP)
    assert corpus.tweets[0].negated is True
    assert corpus.tweets[0].lemmas == (("rain", "noun"),)


def test_ingest_language_filter(tmp_path) -> None:
    path = tmp_path / "c.jsonl"
    write_jsonl(
        path,
        [
            {"id": "1", "lang": "fr", "location": "X", "lemmas": [["pluie", "noun"]]},
            {"id": "2", "lang": "en", "location": "X", "lemmas": [["rain", "noun"]]},
        ],
    )
    corpus = ingest_corpus(path, "en", (), KEEP)
    assert [t.id for t in corpus] == ["2"]
    assert corpus.stats.dropped_language == 1

    unfiltered = ingest_corpus(path, None, (), KEEP)
    assert len(unfiltered) == 2


def test_ingest_counts_malformed_and_empty(tmp_path) -> None:
    path = tmp_path / "c.jsonl"
    path.write_text(
        "\n".join(
            [
                json.dumps({"id": "1", "lang": "en", "location": "X", "lemmas": [["ok", "noun"]]}),
                "{not json",
                json.dumps({"id": "2", "lang": "en", "location": "X"}),
                json.dumps({"id": "3", "lang": "en", "location": "X", "lemmas": [["the", "det"]]}),
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    corpus = ingest_corpus(path, "en", (), KEEP)
    assert len(corpus) == 1
    assert corpus.stats.malformed == 2
    assert corpus.stats.dropped_empty == 1


def test_ingest_missing_file_is_fatal(tmp_path) -> None:
    with pytest.raises(OSError):
        ingest_corpus(tmp_path / "absent.jsonl", "en", (), KEEP)


def test_trivial_lemmatize() -> None:
    assert trivial_lemmatize("Don't worry, be HAPPY!") == (
        ("don", "noun"),
        ("t", "noun"),
        ("worry", "noun"),
        ("be", "noun"),
        ("happy", "noun"),
    )


def test_ingest_deterministic_serialization(tmp_path) -> None:
    path = tmp_path / "c.jsonl"
    write_jsonl(
        path,
        [
            {"id": "1", "lang": "en", "location": "Pisa", "lemmas": [["rain", "noun"], ["walk", "verb"]]},
            {"id": "2", "lang": "en", "location": "Lucca", "lemmas": [["sun", "noun"]], "nuts1": "ITI"},
        ],
    )
    first = ingest_corpus(path, "en", NEGATIONS, KEEP)
    second = ingest_corpus(path, "en", NEGATIONS, KEEP)
    out1, out2 = tmp_path / "o1.jsonl", tmp_path / "o2.jsonl"
    write_corpus(first, out1)
    write_corpus(second, out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_gazetteer_roundtrip_and_assignment(tmp_path) -> None:
    gaz_path = tmp_path / "gaz.csv"
    gaz_path.write_text(
        "location,nuts1,nuts2,nuts3\nPisa,ITI,ITI1,ITI17\nLondon,UKI,UKI3,UKI31\n",
        encoding="utf-8",
    )
    gaz = Gazetteer.from_csv(gaz_path)
    assert len(gaz) == 2
    assert gaz.lookup("pisa") == ("ITI", "ITI1", "ITI17")

    corpus = Corpus(
        tweets=[
            Tweet(id="1", lemmas=(("rain", "noun"),), language="en", location_label="Pisa"),
            Tweet(id="2", lemmas=(("sun", "noun"),), language="en", location_label="Atlantis"),
        ],
        language_filter="en",
    )
    coded, rate = assign_regions(corpus, gaz)
    assert rate == 0.5
    assert coded.tweets[0].nuts3 == "ITI17"
    assert coded.tweets[1].nuts1 is None


def test_gazetteer_rejects_bad_nesting(tmp_path) -> None:
    gaz_path = tmp_path / "gaz.csv"
    gaz_path.write_text("location,nuts1,nuts2,nuts3\nPisa,ITI,UKI3,ITI17\n", encoding="utf-8")
    with pytest.raises(DataFormatError) as err:
        Gazetteer.from_csv(gaz_path)
    assert err.value.line == 2


def test_assign_regions_empty_gazetteer() -> None:
    corpus = Corpus(
        tweets=[Tweet(id="1", lemmas=(("a", "noun"),), language="en", location_label="Pisa")],
        language_filter="en",
    )
    _, rate = assign_regions(corpus, Gazetteer({}))
    assert rate == 0.0


def tweet_with_codes(tid, nuts1=None, nuts2=None, nuts3=None) -> Tweet:
    return Tweet(
        id=tid,
        lemmas=(("a", "noun"),),
        language="en",
        nuts1=nuts1,
        nuts2=nuts2,
        nuts3=nuts3,
    )


def test_partition_by_region() -> None:
    corpus = Corpus(
        tweets=[
            tweet_with_codes("1", nuts1="ITI"),
            tweet_with_codes("2", nuts1="ITI"),
            tweet_with_codes("3", nuts1="ITF"),
            tweet_with_codes("4"),
        ],
        language_filter="en",
    )
    parts = partition_by_region(corpus, "nuts1")
    assert {code: len(c.tweets) for code, c in parts.items()} == {"ITI": 2, "ITF": 1}
    # union of partitions covers exactly the coded tweets
    assert sum(len(c.tweets) for c in parts.values()) == 3


def test_partition_excludes_unset_level() -> None:
    corpus = Corpus(tweets=[tweet_with_codes("1", nuts1="ITI")], language_filter="en")
    assert partition_by_region(corpus, "nuts3") == {}
    assert partition_by_region(Corpus(tweets=[], language_filter="en"), "nuts1") == {}


def test_top_regions_many_partitions() -> None:
    parts = {
        f"UKX{i:03d}": Corpus(tweets=[tweet_with_codes(str(j)) for j in range(i % 7 + 1)])
        for i in range(174)
    }
    top = top_regions(parts, 40)
    assert len(top) == 40
    floor = min(len(c.tweets) for c in top.values())
    for code, part in parts.items():
        if code not in top:
            assert len(part.tweets) <= floor


def test_top_regions_tie_break() -> None:
    parts = {
        "B": Corpus(tweets=[tweet_with_codes(str(i)) for i in range(5)]),
        "A": Corpus(tweets=[tweet_with_codes(str(i)) for i in range(5)]),
        "C": Corpus(tweets=[tweet_with_codes(str(i)) for i in range(2)]),
    }
    top = top_regions(parts, 1)
    assert list(top) == ["A"]
    # k larger than the partition count returns everything
    assert set(top_regions(parts, 10)) == {"A", "B", "C"}


def test_filter_language() -> None:
    corpus = Corpus(
        tweets=[
            Tweet(id="1", lemmas=(("a", "noun"),), language="en"),
            Tweet(id="2", lemmas=(("b", "noun"),), language="it"),
        ]
    )
    local = filter_language(corpus, "en")
    assert [t.id for t in local] == ["1"]
    assert local.language_filter == "en"
