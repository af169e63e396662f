"""Unweighted lemma co-occurrence network construction.

Two lemmas are linked when at least one non-negated tweet contains both.
Each tweet contributes a clique over its distinct lemmas; duplicate lemmas
inside one tweet collapse to a single node. Negated tweets contribute
nothing at all.
"""

from __future__ import annotations

from bisect import bisect_left
from itertools import combinations
from pathlib import Path
from typing import Iterator, KeysView

from .corpus import Corpus
from .errors import DataFormatError


class CooccurrenceNetwork:
    """Finalized immutable graph with sorted neighbor tuples per node.

    Sorted adjacency gives binary-search edge membership and deterministic
    iteration, which the spreading engine relies on for bit-stable results.
    """

    def __init__(self, adjacency: dict[str, tuple[str, ...]]) -> None:
        self._adj = adjacency

    @property
    def nodes(self) -> KeysView[str]:
        return self._adj.keys()

    def neighbors(self, node: str) -> tuple[str, ...]:
        return self._adj[node]

    def degree(self, node: str) -> int:
        return len(self._adj[node])

    def has_edge(self, a: str, b: str) -> bool:
        neighbors = self._adj.get(a)
        if neighbors is None:
            return False
        i = bisect_left(neighbors, b)
        return i < len(neighbors) and neighbors[i] == b

    def edges(self) -> Iterator[tuple[str, str]]:
        """Each undirected edge once, as (a, b) with a < b, in sorted order."""
        for node in sorted(self._adj):
            for neighbor in self._adj[node]:
                if node < neighbor:
                    yield node, neighbor

    def edge_count(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, node: object) -> bool:
        return node in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CooccurrenceNetwork):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"CooccurrenceNetwork({len(self._adj)} nodes, {self.edge_count()} edges)"


def build_network(corpus: Corpus) -> CooccurrenceNetwork:
    """Build the co-occurrence network from a corpus.

    Single-lemma tweets still register their lemma as an isolated node, so
    the node set covers every lemma of every contributing tweet.
    """
    adj: dict[str, set[str]] = {}
    for tweet in corpus:
        if tweet.negated:
            continue
        distinct = sorted(set(tweet.lemma_strings()))
        for lemma in distinct:
            adj.setdefault(lemma, set())
        for a, b in combinations(distinct, 2):
            adj[a].add(b)
            adj[b].add(a)
    return CooccurrenceNetwork(
        {node: tuple(sorted(neighbors)) for node, neighbors in sorted(adj.items())}
    )


def dump_network(network: CooccurrenceNetwork, path: str | Path) -> None:
    """Write the network as a sorted, bit-stable edge list.

    One line ``a<TAB>b`` per edge with a < b, followed by one bare line per
    isolated node.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for a, b in network.edges():
            fh.write(f"{a}\t{b}\n")
        for node in sorted(network.nodes):
            if network.degree(node) == 0:
                fh.write(f"{node}\n")


def load_network(path: str | Path) -> CooccurrenceNetwork:
    """Read a network written by dump_network."""
    path = Path(path)
    adj: dict[str, set[str]] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) == 1:
                adj.setdefault(parts[0], set())
            elif len(parts) == 2:
                a, b = parts
                if a == b:
                    raise DataFormatError("self-loop edge", path=path, line=lineno)
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            else:
                raise DataFormatError("expected 1 or 2 tab-separated fields", path=path, line=lineno)
    return CooccurrenceNetwork(
        {node: tuple(sorted(neighbors)) for node, neighbors in sorted(adj.items())}
    )
