"""Superdiversity index, null-model reshuffling and ground-truth correlation.

For one region the index repeatedly splits the standard lexicon in half,
spreads valences from the held-in half (plus auxiliary seeds) over the
region's co-occurrence network, and correlates the modelled valences of the
held-out half with their standard values. The index is (1 - r_mean) / 2:
0 means the community uses words with the standard emotional content, 0.5
means no relation, 1 means opposite content.
"""

from __future__ import annotations

import csv
import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus
from .errors import DataFormatError, NoSignalError
from .graph import build_network
from .lexicon import ValenceLexicon, split_lexicon
from .spreading import SpreadingParams, spread_and_restrict

logger = logging.getLogger(__name__)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation of two equal-length vectors.

    Raises ValueError on length mismatch, fewer than 2 pairs, or a constant
    vector (zero variance makes the correlation undefined).
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("correlation needs at least 2 pairs")
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    cov = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = math.fsum((x - mean_x) ** 2 for x in xs)
    var_y = math.fsum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("correlation undefined: constant input vector")
    r = cov / math.sqrt(var_x * var_y)
    return min(1.0, max(-1.0, r))


def si_from_mean_r(mean_r: float) -> float:
    """Map a mean correlation in [-1, 1] to the index value in [0, 1]."""
    return (1.0 - mean_r) / 2.0


@dataclass
class SIResult:
    """Per-region index with its per-iteration evidence."""

    region: str
    si: float
    mean_r: float
    per_iteration_r: list[float]
    matched_test_terms: list[int]

    @property
    def n_iterations_used(self) -> int:
        return len(self.per_iteration_r)


def superdiversity_index(
    standard: ValenceLexicon,
    corpus: Corpus,
    params: SpreadingParams,
    auxiliary_seeds: ValenceLexicon | None = None,
    iteration_count: int = 10,
    base_seed: int = 0,
    split_fraction: float = 0.5,
    region: str = "",
) -> SIResult:
    """Compute the index for one region's corpus.

    Iteration i splits the standard lexicon with seed ``base_seed + i``.
    The co-occurrence network does not depend on the split, so it is built
    once and shared across iterations. Iterations that match fewer than 2
    test terms (or whose matched vectors are constant, leaving the
    correlation undefined) are skipped and counted; if every iteration is
    skipped there is no signal and NoSignalError is raised.
    """
    if iteration_count < 1:
        raise ValueError("iteration_count must be >= 1")
    network = build_network(corpus)
    per_iteration_r: list[float] = []
    matched_counts: list[int] = []
    skipped = 0
    for i in range(iteration_count):
        split = split_lexicon(standard, split_fraction, base_seed + i)
        modelled = spread_and_restrict(network, split.train, split.test, params, auxiliary_seeds)
        matched = sorted(modelled)
        matched_counts.append(len(matched))
        if len(matched) < 2:
            skipped += 1
            logger.info("region %s iteration %d: %d matched test term(s), skipped", region, i, len(matched))
            continue
        standard_vals = [split.test.valence(term) for term in matched]
        modelled_vals = [modelled[term] for term in matched]
        try:
            r = pearson(standard_vals, modelled_vals)
        except ValueError:
            skipped += 1
            logger.info("region %s iteration %d: constant valence vector, skipped", region, i)
            continue
        per_iteration_r.append(r)
    if not per_iteration_r:
        raise NoSignalError(
            f"region {region or '<unnamed>'}: all {iteration_count} iterations were skipped"
        )
    mean_r = sum(per_iteration_r) / len(per_iteration_r)
    return SIResult(
        region=region,
        si=si_from_mean_r(mean_r),
        mean_r=mean_r,
        per_iteration_r=per_iteration_r,
        matched_test_terms=matched_counts,
    )


def region_si_task(
    args: tuple[str, ValenceLexicon, Corpus, SpreadingParams, ValenceLexicon | None, int, int, float],
) -> tuple[str, SIResult | None]:
    """Picklable per-region worker for parallel execution; None on no signal."""
    region, standard, corpus, params, aux, iteration_count, region_seed, split_fraction = args
    try:
        result = superdiversity_index(
            standard,
            corpus,
            params,
            auxiliary_seeds=aux,
            iteration_count=iteration_count,
            base_seed=region_seed,
            split_fraction=split_fraction,
            region=region,
        )
    except NoSignalError:
        return region, None
    return region, result


def null_model_reshuffle(partitions: Mapping[str, Corpus], seed: int) -> dict[str, Corpus]:
    """Redistribute all tweets across regions, keeping each region's count.

    The pooled tweets are permuted once and dealt back in sorted region
    order, breaking the community-text link while preserving every
    per-region tweet count and the global tweet multiset.
    """
    if len(partitions) < 2:
        raise ValueError("null model needs at least 2 regions")
    codes = sorted(partitions)
    pool = [tweet for code in codes for tweet in partitions[code].tweets]
    rng = random.Random(seed)
    rng.shuffle(pool)
    reshuffled: dict[str, Corpus] = {}
    offset = 0
    for code in codes:
        count = len(partitions[code].tweets)
        reshuffled[code] = Corpus(
            tweets=pool[offset : offset + count],
            language_filter=partitions[code].language_filter,
        )
        offset += count
    return reshuffled


@dataclass
class GroundTruthTable:
    """Per-region reference rates (e.g. immigrants per inhabitant)."""

    rates: dict[str, float]

    def __post_init__(self) -> None:
        for region, rate in self.rates.items():
            if not math.isfinite(rate) or rate < 0:
                raise ValueError(f"invalid rate for region {region!r}: {rate!r}")

    @classmethod
    def from_csv(cls, path: str | Path) -> "GroundTruthTable":
        """Load a ground-truth CSV.

        Accepts ``region,immigrants,population`` (rate = immigrants /
        population) or any two-column ``region,<rate>`` file such as the
        synthetic generator's diversity sidecar.
        """
        path = Path(path)
        rates: dict[str, float] = {}
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise DataFormatError("empty ground-truth file", path=path, line=1)
            names = [h.strip().lower() for h in header]
            if names[:3] == ["region", "immigrants", "population"]:
                mode = "counts"
            elif len(names) >= 2 and names[0] == "region":
                mode = "rate"
            else:
                raise DataFormatError(
                    "expected 'region,immigrants,population' or 'region,<rate>' header",
                    path=path,
                    line=1,
                )
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                region = row[0].strip()
                try:
                    if mode == "counts":
                        immigrants = float(row[1])
                        population = float(row[2])
                        if population <= 0:
                            raise ValueError("population must be positive")
                        rate = immigrants / population
                    else:
                        rate = float(row[1])
                except (ValueError, IndexError) as exc:
                    raise DataFormatError(str(exc), path=path, line=lineno) from exc
                if region in rates:
                    raise DataFormatError(f"duplicate region {region!r}", path=path, line=lineno)
                rates[region] = rate
        return cls(rates=rates)


def correlate_with_groundtruth(
    results: Mapping[str, "SIResult | float"],
    truth: GroundTruthTable,
) -> float:
    """Pearson correlation between per-region values and the reference rates.

    Accepts SIResult values or plain floats (so baseline measures can be
    correlated the same way). Regions present in both maps are used, sorted
    by code for determinism; fewer than 2 shared regions is an error.
    """
    shared = sorted(set(results) & set(truth.rates))
    if len(shared) < 2:
        raise ValueError(f"only {len(shared)} region(s) shared between results and ground truth")
    values = []
    for code in shared:
        result = results[code]
        values.append(result.si if isinstance(result, SIResult) else float(result))
    rates = [truth.rates[code] for code in shared]
    return pearson(values, rates)
