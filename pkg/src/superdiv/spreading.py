"""Epidemic valence spreading over the co-occurrence network.

Valences propagate from seed lemmas in synchronous rounds. An untagged node
becomes tagged when the valence distribution over its already-tagged
neighbors is homogeneous enough: its 10th-to-90th percentile range must stay
strictly below the range threshold and its binned Shannon entropy strictly
below the entropy threshold. The assigned value is the mean of the values in
the most populated histogram bin. Once assigned, a valence never changes,
and seed nodes keep their seed values forever. The process stops at the
first round that assigns nothing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus
from .errors import InvariantError
from .graph import CooccurrenceNetwork, build_network
from .lexicon import ValenceLexicon

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpreadingParams:
    """Thresholds and histogram resolution for the infection gate."""

    range_threshold: float
    entropy_threshold: float
    bin_count: int = 10
    min_tagged_neighbors: int = 1

    def __post_init__(self) -> None:
        if self.range_threshold <= 0:
            raise ValueError("range_threshold must be positive")
        if self.entropy_threshold <= 0:
            raise ValueError("entropy_threshold must be positive")
        if self.bin_count < 2:
            raise ValueError("bin_count must be at least 2")
        if self.min_tagged_neighbors < 1:
            raise ValueError("min_tagged_neighbors must be at least 1")


def bin_index(value: float, bin_count: int) -> int:
    """Equal-width bin over [0, 10]; the last bin is closed so 10.0 lands in it."""
    idx = int(value * bin_count / 10.0)
    return bin_count - 1 if idx >= bin_count else idx


def neighborhood_entropy(vals: Sequence[float], bin_count: int = 10) -> float:
    """Shannon entropy (natural log) of the binned value distribution.

    With 10 bins the maximum is ln 10, about 2.3.
    """
    if not vals:
        raise ValueError("entropy of an empty value list is undefined")
    counts = [0] * bin_count
    for v in vals:
        counts[bin_index(v, bin_count)] += 1
    n = len(vals)
    entropy = 0.0
    for c in counts:
        if c:
            p = c / n
            entropy -= p * math.log(p)
    return entropy


def neighborhood_range(vals: Sequence[float]) -> float:
    """Difference between the 90th and 10th percentile, nearest-rank method.

    Rank index for quantile q is ceil(q * n) - 1 into the sorted list,
    clamped to [0, n - 1]; computed in exact integer arithmetic.
    """
    if not vals:
        raise ValueError("range of an empty value list is undefined")
    ordered = sorted(vals)
    n = len(ordered)
    i10 = min(max(-(-n // 10) - 1, 0), n - 1)
    i90 = min(max(-(-(9 * n) // 10) - 1, 0), n - 1)
    return ordered[i90] - ordered[i10]


def binned_mode(vals: Sequence[float], bin_count: int = 10) -> float:
    """Mean of the values inside the most populated bin (ties: lowest bin)."""
    if not vals:
        raise ValueError("mode of an empty value list is undefined")
    sums = [0.0] * bin_count
    counts = [0] * bin_count
    for v in vals:
        idx = bin_index(v, bin_count)
        counts[idx] += 1
        sums[idx] += v
    best = max(range(bin_count), key=lambda i: (counts[i], -i))
    return sums[best] / counts[best]


def infection_value(neighbor_vals: Sequence[float], params: SpreadingParams) -> float | None:
    """Value a node would take from its tagged neighbors, or None when blocked.

    Blocked when there are fewer than min_tagged_neighbors values, or the
    entropy or range gate fails (both comparisons strict: infect only when
    strictly below the threshold).
    """
    if len(neighbor_vals) < params.min_tagged_neighbors:
        return None
    if neighborhood_entropy(neighbor_vals, params.bin_count) >= params.entropy_threshold:
        return None
    if neighborhood_range(neighbor_vals) >= params.range_threshold:
        return None
    return binned_mode(neighbor_vals, params.bin_count)


@dataclass
class ValenceState:
    """Result of one spreading run."""

    valences: dict[str, float]
    is_seed: dict[str, bool]
    rounds: int
    unmatched_seeds: int = 0
    round_log: list[tuple[int, str, float]] | None = field(default=None, compare=False)


def sentiment_spreading(
    network: CooccurrenceNetwork,
    seed: ValenceLexicon | Mapping[str, float],
    params: SpreadingParams,
    record_rounds: bool = False,
) -> ValenceState:
    """Run synchronous spreading from the seed until a fixed point.

    Every round evaluates untagged nodes against the previous round's state
    only, so the result is independent of iteration order. Seed terms that
    are not network nodes are ignored and counted. Terminates within |nodes|
    rounds; the first round that assigns nothing ends the run (and is
    included in the round count).
    """
    seed_map = seed.to_valence_map() if isinstance(seed, ValenceLexicon) else dict(seed)
    valences: dict[str, float] = {}
    is_seed: dict[str, bool] = {}
    unmatched = 0
    for term in sorted(seed_map):
        if term in network:
            valences[term] = seed_map[term]
            is_seed[term] = True
        else:
            unmatched += 1
    if unmatched:
        logger.debug("%d seed term(s) not present in the network", unmatched)
    round_log: list[tuple[int, str, float]] | None = [] if record_rounds else None

    # Only nodes whose tagged neighborhood changed since their last
    # evaluation can flip from blocked to infected, so each round evaluates
    # just the untagged neighbors of the previous round's new assignments.
    candidates: set[str] = set()
    for node in valences:
        for neighbor in network.neighbors(node):
            if neighbor not in valences:
                candidates.add(neighbor)

    rounds = 0
    max_rounds = len(network) + 1
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise InvariantError("spreading did not reach a fixed point within |nodes| rounds")
        newly_tagged: list[tuple[str, float]] = []
        for node in sorted(candidates):
            neighbor_vals = [
                valences[neighbor]
                for neighbor in network.neighbors(node)
                if neighbor in valences
            ]
            value = infection_value(neighbor_vals, params)
            if value is not None:
                newly_tagged.append((node, value))
        if not newly_tagged:
            break
        next_candidates: set[str] = set()
        for node, value in newly_tagged:
            valences[node] = value
            is_seed[node] = False
            if round_log is not None:
                round_log.append((rounds, node, value))
        for node, _ in newly_tagged:
            for neighbor in network.neighbors(node):
                if neighbor not in valences:
                    next_candidates.add(neighbor)
        candidates = next_candidates

    return ValenceState(
        valences=valences,
        is_seed=is_seed,
        rounds=rounds,
        unmatched_seeds=unmatched,
        round_log=round_log,
    )


def spread_and_restrict(
    network: CooccurrenceNetwork,
    train: ValenceLexicon,
    test: ValenceLexicon,
    params: SpreadingParams,
    auxiliary_seeds: ValenceLexicon | None = None,
) -> dict[str, float]:
    """Spread from train plus auxiliary seeds; return modelled test valences.

    Test terms are removed from the auxiliary seeds before spreading so a
    held-out term can only acquire a valence through infection, never by
    seeding. On a term collision the train valence wins. The returned map
    covers exactly the test terms that ended up tagged.
    """
    test_terms = set(test.entries)
    seed_map: dict[str, float] = {}
    if auxiliary_seeds is not None:
        for entry in auxiliary_seeds:
            if entry.term not in test_terms:
                seed_map[entry.term] = entry.valence
    seed_map.update(train.to_valence_map())
    state = sentiment_spreading(network, seed_map, params)
    return {term: state.valences[term] for term in sorted(test_terms) if term in state.valences}


def compute_valences(
    train: ValenceLexicon,
    test: ValenceLexicon,
    corpus: Corpus,
    params: SpreadingParams,
    auxiliary_seeds: ValenceLexicon | None = None,
) -> dict[str, float]:
    """Build the corpus network, spread, and return modelled test-term valences."""
    overlap = set(train.entries) & set(test.entries)
    if overlap:
        raise ValueError(f"train and test lexicons overlap on {len(overlap)} term(s)")
    network = build_network(corpus)
    return spread_and_restrict(network, train, test, params, auxiliary_seeds)


def write_round_log(state: ValenceState, path: str | Path) -> None:
    """Write the audit log as ``round,node,valence`` lines."""
    if state.round_log is None:
        raise ValueError("state has no round log; run spreading with record_rounds=True")
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("round,node,valence\n")
        for round_no, node, value in state.round_log:
            fh.write(f"{round_no},{node},{value!r}\n")
