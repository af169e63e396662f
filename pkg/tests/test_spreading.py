from __future__ import annotations

import math
import random

import pytest

from superdiv.corpus import Corpus, Tweet
from superdiv.graph import CooccurrenceNetwork, build_network
from superdiv.lexicon import LexiconEntry, ValenceLexicon
from superdiv.spreading import (
    SpreadingParams,
    binned_mode,
    compute_valences,
    infection_value,
    neighborhood_entropy,
    neighborhood_range,
    sentiment_spreading,
)

UK_PARAMS = SpreadingParams(range_threshold=3.0, entropy_threshold=1.09)


def network_from_edges(edges, isolated=()) -> CooccurrenceNetwork:
    adj: dict[str, set[str]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for node in isolated:
        adj.setdefault(node, set())
    return CooccurrenceNetwork({n: tuple(sorted(ns)) for n, ns in sorted(adj.items())})


def naive_spreading(network, seed_map, params):
    """Full-snapshot reference engine: every round re-evaluates every untagged
    node against an explicit copy of the previous round's state."""
    valences = {t: v for t, v in seed_map.items() if t in network}
    rounds = 0
    while True:
        rounds += 1
        snapshot = dict(valences)
        assigned = {}
        for node in network.nodes:
            if node in snapshot:
                continue
            # gather in adjacency order so float sums match the engine bit for bit
            vals = [snapshot[nb] for nb in network.neighbors(node) if nb in snapshot]
            value = infection_value(vals, params)
            if value is not None:
                assigned[node] = value
        if not assigned:
            return valences, rounds
        valences.update(assigned)


# ---------------------------------------------------------------- primitives


def test_entropy_one_value_per_bin_is_ln10() -> None:
    vals = [0.5 + i for i in range(10)]
    assert neighborhood_entropy(vals, 10) == pytest.approx(math.log(10), abs=1e-12)


def test_entropy_degenerate_and_two_bins() -> None:
    assert neighborhood_entropy([4.2, 4.3, 4.8], 10) == 0.0
    assert neighborhood_entropy([1.5, 1.5, 8.5, 8.5], 10) == pytest.approx(math.log(2), abs=1e-12)


def test_entropy_last_bin_closed() -> None:
    assert neighborhood_entropy([10.0, 9.5], 10) == 0.0


def test_entropy_bounded_by_ln_bins() -> None:
    rng = random.Random(4)
    for _ in range(300):
        bin_count = rng.randint(2, 12)
        vals = [rng.uniform(0, 10) for _ in range(rng.randint(1, 40))]
        assert neighborhood_entropy(vals, bin_count) <= math.log(bin_count) + 1e-12


def test_entropy_empty_is_error() -> None:
    with pytest.raises(ValueError):
        neighborhood_entropy([], 10)


def test_range_examples() -> None:
    assert neighborhood_range([5.0]) == 0.0
    assert neighborhood_range([1, 1, 1, 1, 1, 9, 9, 9, 9, 9]) == 8.0
    assert neighborhood_range([0.0, 10.0]) == 10.0
    with pytest.raises(ValueError):
        neighborhood_range([])


def test_binned_mode_examples() -> None:
    assert binned_mode([8.0]) == 8.0
    assert binned_mode([2.1, 2.4, 7.8]) == pytest.approx(2.25)
    assert binned_mode([1.5, 8.5]) == 1.5  # tie goes to the lower bin


def test_infection_value_gates() -> None:
    assert infection_value([5.1, 5.2, 5.3], UK_PARAMS) == pytest.approx(5.2)
    assert infection_value([0.5, 9.5], UK_PARAMS) is None  # range 9 >= 3
    assert infection_value([], UK_PARAMS) is None
    spread_out = [0.5, 1.5, 2.5]  # entropy ln 3 ~ 1.0986 >= S would block at S=1.0
    assert infection_value(spread_out, SpreadingParams(10.0, 1.0)) is None
    assert infection_value(spread_out, SpreadingParams(10.0, 1.1)) is not None


def test_infection_strict_comparisons() -> None:
    # range exactly equal to the threshold blocks
    params = SpreadingParams(range_threshold=2.0, entropy_threshold=5.0)
    assert infection_value([4.0, 6.0], params) is None
    # entropy exactly ln 2 blocks at S = ln 2
    params = SpreadingParams(range_threshold=10.0, entropy_threshold=math.log(2))
    assert infection_value([1.5, 8.5], params) is None


def test_infection_min_tagged_neighbors() -> None:
    params = SpreadingParams(3.0, 1.09, min_tagged_neighbors=2)
    assert infection_value([5.0], params) is None
    assert infection_value([5.0, 5.1], params) is not None


# ---------------------------------------------------------------- engine


def seed_lexicon(pairs) -> ValenceLexicon:
    return ValenceLexicon(LexiconEntry(term=t, valence=v) for t, v in pairs)


def test_chain_spreads_in_three_rounds() -> None:
    net = network_from_edges([("a", "b"), ("b", "c")])
    state = sentiment_spreading(net, seed_lexicon([("a", 8.0)]), UK_PARAMS)
    assert state.valences == {"a": 8.0, "b": 8.0, "c": 8.0}
    assert state.rounds == 3
    assert state.is_seed == {"a": True, "b": False, "c": False}


def test_full_seed_fixed_point_immediately() -> None:
    net = network_from_edges([("a", "b")])
    state = sentiment_spreading(net, seed_lexicon([("a", 2.0), ("b", 9.0)]), UK_PARAMS)
    assert state.valences == {"a": 2.0, "b": 9.0}
    assert state.rounds == 1


def test_star_center_blocked_by_range() -> None:
    net = network_from_edges([("center", "left"), ("center", "right")])
    state = sentiment_spreading(net, seed_lexicon([("left", 1.0), ("right", 9.0)]), UK_PARAMS)
    assert "center" not in state.valences
    assert state.rounds == 1


def test_unmatched_seed_terms_counted() -> None:
    net = network_from_edges([("a", "b")])
    state = sentiment_spreading(net, seed_lexicon([("a", 5.0), ("ghost", 1.0)]), UK_PARAMS)
    assert state.unmatched_seeds == 1
    assert "ghost" not in state.valences


def test_seed_values_immutable_and_round_log_write_once() -> None:
    rng = random.Random(13)
    for trial in range(50):
        net, seed_map = random_instance(rng)
        state = sentiment_spreading(net, seed_map, UK_PARAMS, record_rounds=True)
        for term, valence in seed_map.items():
            if term in net:
                assert state.valences[term] == valence
        logged = [node for _, node, _ in state.round_log]
        assert len(logged) == len(set(logged))
        assert set(logged) == set(state.valences) - set(t for t in seed_map if t in net)


def random_instance(rng, max_nodes=12):
    n = rng.randint(2, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    p = rng.uniform(0.1, 0.6)
    edges = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :] if rng.random() < p]
    net = network_from_edges(edges, isolated=nodes)
    n_seeds = max(1, int(n * rng.uniform(0.1, 0.6)))
    seed_terms = rng.sample(nodes, n_seeds)
    seed_map = {t: rng.uniform(0.0, 10.0) for t in seed_terms}
    return net, seed_map


def test_engine_matches_naive_reference() -> None:
    rng = random.Random(99)
    range_grid = [1.0, 3.0, 10.0]
    entropy_grid = [0.5, 1.09, 2.19]
    for trial in range(200):
        net, seed_map = random_instance(rng)
        params = SpreadingParams(rng.choice(range_grid), rng.choice(entropy_grid))
        state = sentiment_spreading(net, seed_map, params)
        expected, expected_rounds = naive_spreading(net, seed_map, params)
        assert state.valences == expected
        assert state.rounds == expected_rounds
        assert state.rounds <= max(len(net), 1)


def test_determinism_across_runs() -> None:
    rng = random.Random(21)
    net, seed_map = random_instance(rng)
    params = SpreadingParams(3.0, 1.09)
    first = sentiment_spreading(net, seed_map, params)
    second = sentiment_spreading(net, seed_map, params)
    assert first == second


# ---------------------------------------------------------------- compute_valences


def tweet_of(tid, lemmas):
    return Tweet(id=tid, lemmas=tuple((l, "noun") for l in lemmas), language="en")


def test_compute_valences_restricts_to_test() -> None:
    corpus = Corpus(
        tweets=[tweet_of("1", ["a", "b"]), tweet_of("2", ["b", "c"]), tweet_of("3", ["z"])],
        language_filter="en",
    )
    train = seed_lexicon([("a", 8.0)])
    test = seed_lexicon([("c", 7.5), ("missing", 1.0)])
    result = compute_valences(train, test, corpus, UK_PARAMS)
    assert result == {"c": 8.0}


def test_compute_valences_holds_out_test_terms_from_aux() -> None:
    # c is both an auxiliary seed (0.0) and a test term: it must not be
    # seeded, so in round 1 its only tagged neighbor is d and it takes 2.0
    corpus = Corpus(
        tweets=[tweet_of("1", ["a", "b"]), tweet_of("2", ["b", "c"]), tweet_of("3", ["c", "d"])],
        language_filter="en",
    )
    train = seed_lexicon([("a", 8.0)])
    aux = seed_lexicon([("c", 0.0), ("d", 2.0)])
    test = seed_lexicon([("c", 9.0)])
    result = compute_valences(train, test, corpus, UK_PARAMS, auxiliary_seeds=aux)
    assert result == {"c": 2.0}


def test_compute_valences_aux_holdout_infection_value() -> None:
    corpus = Corpus(
        tweets=[tweet_of("1", ["a", "b"]), tweet_of("2", ["b", "c"])],
        language_filter="en",
    )
    train = seed_lexicon([("a", 8.0)])
    aux = seed_lexicon([("c", 0.0)])
    test = seed_lexicon([("c", 9.0)])
    result = compute_valences(train, test, corpus, UK_PARAMS, auxiliary_seeds=aux)
    # held out from seeding, c is infected through b with value 8.0, not 0.0
    assert result == {"c": 8.0}


def test_compute_valences_overlap_is_error() -> None:
    corpus = Corpus(tweets=[tweet_of("1", ["a", "b"])], language_filter="en")
    lex = seed_lexicon([("a", 5.0)])
    with pytest.raises(ValueError):
        compute_valences(lex, lex, corpus, UK_PARAMS)


def test_compute_valences_train_wins_collision() -> None:
    corpus = Corpus(tweets=[tweet_of("1", ["a", "b"])], language_filter="en")
    train = seed_lexicon([("a", 8.0)])
    aux = seed_lexicon([("a", 1.0)])
    test = seed_lexicon([("b", 5.0)])
    result = compute_valences(train, test, corpus, UK_PARAMS, auxiliary_seeds=aux)
    assert result == {"b": 8.0}


def test_compute_valences_empty_corpus() -> None:
    corpus = Corpus(
        tweets=[
            Tweet(id="1", lemmas=(("a", "noun"), ("b", "noun")), language="en", negated=True)
        ],
        language_filter="en",
    )
    train = seed_lexicon([("a", 8.0)])
    test = seed_lexicon([("b", 5.0)])
    assert compute_valences(train, test, corpus, UK_PARAMS) == {}
