"""Superdiversity analysis of geotagged microtext corpora.

The package builds community-dependent emotional lexicons by spreading
valences over lemma co-occurrence networks, scores regions with a
superdiversity index derived from the correlation against a standard
lexicon, and ships null-model controls, baseline diversity measures, a
sentiment-classification harness and a synthetic-corpus generator.
"""

__version__ = "0.1.0"

from .baselines import BaselineReport, baseline_report, language_entropy, ttr
from .classify import (
    EvaluationReport,
    LabeledTweet,
    LinearValenceClassifier,
    MajorityClassLearner,
    SentimentFeatures,
    cross_validate,
    extract_features,
)
from .corpus import (
    Corpus,
    Gazetteer,
    Tweet,
    assign_regions,
    filter_language,
    ingest_corpus,
    partition_by_region,
    top_regions,
    write_corpus,
)
from .graph import CooccurrenceNetwork, build_network, dump_network, load_network
from .lexicon import (
    LexiconEntry,
    LexiconSplit,
    ValenceLexicon,
    balance_lexicon,
    load_lexicon,
    merge_lexicons,
    rescale_swn,
    split_lexicon,
    write_lexicon,
)
from .si import (
    GroundTruthTable,
    SIResult,
    correlate_with_groundtruth,
    null_model_reshuffle,
    pearson,
    si_from_mean_r,
    superdiversity_index,
)
from .spreading import (
    SpreadingParams,
    ValenceState,
    binned_mode,
    compute_valences,
    infection_value,
    neighborhood_entropy,
    neighborhood_range,
    sentiment_spreading,
    spread_and_restrict,
)
from .synth import RegionSpec, SynthConfig, generate_corpus, synthetic_standard_lexicon

__all__ = [
    "BaselineReport",
    "Corpus",
    "CooccurrenceNetwork",
    "EvaluationReport",
    "Gazetteer",
    "GroundTruthTable",
    "LabeledTweet",
    "LexiconEntry",
    "LexiconSplit",
    "LinearValenceClassifier",
    "MajorityClassLearner",
    "RegionSpec",
    "SIResult",
    "SentimentFeatures",
    "SpreadingParams",
    "SynthConfig",
    "Tweet",
    "ValenceLexicon",
    "ValenceState",
    "assign_regions",
    "balance_lexicon",
    "baseline_report",
    "binned_mode",
    "build_network",
    "compute_valences",
    "correlate_with_groundtruth",
    "cross_validate",
    "dump_network",
    "extract_features",
    "filter_language",
    "generate_corpus",
    "infection_value",
    "ingest_corpus",
    "language_entropy",
    "load_lexicon",
    "load_network",
    "merge_lexicons",
    "neighborhood_entropy",
    "neighborhood_range",
    "null_model_reshuffle",
    "partition_by_region",
    "pearson",
    "rescale_swn",
    "sentiment_spreading",
    "si_from_mean_r",
    "split_lexicon",
    "spread_and_restrict",
    "superdiversity_index",
    "synthetic_standard_lexicon",
    "top_regions",
    "ttr",
    "write_corpus",
    "write_lexicon",
]
