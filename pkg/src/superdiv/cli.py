"""Command-line pipeline orchestration.

Subcommands: build-network, spread, si, null-model, baselines,
classify-eval, synth-gen, sweep-params. Each reads a declarative INI
config (every key overridable by a flag of the same name), writes its
outputs plus a manifest into the output directory, and exits 0 on
success, 2 on configuration errors, 3 on data errors and 4 on internal
invariant violations.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from . import __version__
from .baselines import baseline_report, load_population_table
from .classify import LinearValenceClassifier, cross_validate, load_labeled_tweets
from .config import KEY_SPECS, RunConfig, write_manifest, _parse_bool
from .corpus import (
    Corpus,
    Gazetteer,
    assign_regions,
    filter_language,
    ingest_corpus,
    partition_by_region,
    top_regions,
    write_corpus,
)
from .errors import ConfigError, DataFormatError, InvariantError, NoSignalError, SuperdivError
from .graph import build_network, dump_network, load_network
from .lexicon import ValenceLexicon, load_lexicon, merge_lexicons, split_lexicon, write_lexicon
from .si import (
    GroundTruthTable,
    SIResult,
    correlate_with_groundtruth,
    null_model_reshuffle,
    pearson,
    region_si_task,
)
from .spreading import SpreadingParams, sentiment_spreading, spread_and_restrict, write_round_log
from .synth import RegionSpec, SynthConfig, generate_corpus, synthetic_standard_lexicon, write_diversity_sidecar
from .util import derive_seed, fmt_float

logger = logging.getLogger(__name__)

_COMMON_KEYS = ("output_dir", "figures", "jobs")
_CORPUS_KEYS = ("language", "negation_terms", "keep_pos")
_SPREADING_KEYS = ("range_threshold", "entropy_threshold", "bin_count", "min_tagged_neighbors")
_LEXICON_KEYS = ("standard_lexicon", "standard_format", "aux_lexicons")
_REGION_KEYS = ("nuts_level", "top_k", "exclude_regions")

COMMAND_KEYS: dict[str, tuple[str, ...]] = {
    "build-network": ("corpus", *_CORPUS_KEYS, *_COMMON_KEYS),
    "spread": (
        "corpus",
        "network",
        *_LEXICON_KEYS,
        *_CORPUS_KEYS,
        *_SPREADING_KEYS,
        "round_log",
        *_COMMON_KEYS,
    ),
    "si": (
        "corpus",
        *_LEXICON_KEYS,
        "gazetteer",
        "ground_truth",
        *_CORPUS_KEYS,
        *_SPREADING_KEYS,
        *_REGION_KEYS,
        "iteration_count",
        "base_seed",
        "split_fraction",
        *_COMMON_KEYS,
    ),
    "null-model": (
        "corpus",
        *_LEXICON_KEYS,
        "gazetteer",
        "ground_truth",
        *_CORPUS_KEYS,
        *_SPREADING_KEYS,
        *_REGION_KEYS,
        "iteration_count",
        "base_seed",
        "split_fraction",
        *_COMMON_KEYS,
    ),
    "baselines": (
        "corpus",
        "gazetteer",
        "ground_truth",
        "population",
        *_CORPUS_KEYS,
        *_REGION_KEYS,
        *_COMMON_KEYS,
    ),
    "classify-eval": (
        "labeled_data",
        "standard_lexicon",
        "standard_format",
        "eval_lexicons",
        "negation_terms",
        "repeats",
        "train_fraction",
        "base_seed",
        *_COMMON_KEYS,
    ),
    "synth-gen": (
        "standard_lexicon",
        "standard_format",
        "synth_regions",
        "vocab_terms",
        "filler_count",
        "lemmas_per_tweet",
        "valence_shift_sigma",
        "languages",
        "synth_seed",
        *_COMMON_KEYS,
    ),
    "sweep-params": (
        "corpus",
        *_LEXICON_KEYS,
        *_CORPUS_KEYS,
        "bin_count",
        "min_tagged_neighbors",
        "range_grid",
        "entropy_grid",
        "iteration_count",
        "base_seed",
        "split_fraction",
        *_COMMON_KEYS,
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superdiv",
        description="Superdiversity analysis of geotagged microtext corpora.",
    )
    parser.add_argument("--version", action="version", version=f"superdiv {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, keys in COMMAND_KEYS.items():
        sub = subparsers.add_parser(command, help=f"run the {command} step")
        sub.add_argument("--config", type=Path, default=None, help="INI config file")
        sub.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        for key in keys:
            spec = KEY_SPECS[key]
            flag = "--" + key.replace("_", "-")
            if spec.parse is _parse_bool:
                sub.add_argument(flag, action=argparse.BooleanOptionalAction, default=None, help=spec.help)
            else:
                sub.add_argument(flag, type=spec.parse, default=None, help=spec.help, metavar="V")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        key: getattr(args, key)
        for key in COMMAND_KEYS[args.command]
        if getattr(args, key, None) is not None
    }
    return RunConfig.from_sources(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    handler = COMMANDS[args.command]
    try:
        config = config_from_args(args)
        handler(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, NoSignalError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (InvariantError, SuperdivError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # noqa: BLE001 - categorized as internal (exit 4)
        logger.exception("unexpected failure")
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    return 0


# --------------------------------------------------------------------- shared


def _prepare_output_dir(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_standard(config: RunConfig) -> ValenceLexicon:
    config.require_files("standard_lexicon")
    return load_lexicon(config.standard_lexicon, config.standard_format, source="standard")


def _load_aux(config: RunConfig) -> ValenceLexicon | None:
    if not config.aux_lexicons:
        return None
    loaded = []
    for path, fmt in config.aux_lexicons:
        if not Path(path).is_file():
            raise ConfigError(f"auxiliary lexicon does not exist: {path}")
        loaded.append(load_lexicon(path, fmt))
    return merge_lexicons(*loaded)


def _ingest(config: RunConfig, lang: str | None) -> Corpus:
    config.require_files("corpus")
    return ingest_corpus(config.corpus, lang, config.negation_terms, config.keep_pos)


def _spreading_params(config: RunConfig) -> SpreadingParams:
    return SpreadingParams(
        range_threshold=config.range_threshold,
        entropy_threshold=config.entropy_threshold,
        bin_count=config.bin_count,
        min_tagged_neighbors=config.min_tagged_neighbors,
    )


def _regional_partitions(config: RunConfig, corpus: Corpus, apply_top_k: bool = True) -> dict[str, Corpus]:
    if config.gazetteer is not None:
        config.require_files("gazetteer")
        corpus, match_rate = assign_regions(corpus, Gazetteer.from_csv(config.gazetteer))
        logger.info("gazetteer match rate: %.1f%%", 100.0 * match_rate)
    partitions = partition_by_region(corpus, config.nuts_level)
    for code in config.exclude_regions:
        partitions.pop(code, None)
    if apply_top_k and config.top_k is not None:
        partitions = top_regions(partitions, config.top_k)
    if not partitions:
        raise NoSignalError(f"no regions with {config.nuts_level} codes after filtering")
    return partitions


def _run_region_tasks(
    tasks: list[tuple],
    jobs: int,
) -> list[tuple[str, SIResult | None]]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(region_si_task, tasks))
    return [region_si_task(task) for task in tasks]


def _write_si_outputs(
    config: RunConfig,
    out: Path,
    results: dict[str, SIResult],
    skipped: list[str],
    prefix: str,
    title: str,
) -> tuple[list[str], float | None]:
    csv_path = out / f"{prefix}.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["region", "si", "mean_r", "n_iterations_used"])
        for code in sorted(results):
            result = results[code]
            writer.writerow([code, fmt_float(result.si), fmt_float(result.mean_r), result.n_iterations_used])
    detail: dict[str, object] = {
        "regions": {
            code: {
                "si": results[code].si,
                "mean_r": results[code].mean_r,
                "per_iteration_r": results[code].per_iteration_r,
                "matched_test_terms": results[code].matched_test_terms,
            }
            for code in sorted(results)
        },
        "skipped_regions": skipped,
    }
    correlation = None
    truth = None
    if config.ground_truth is not None:
        config.require_files("ground_truth")
        truth = GroundTruthTable.from_csv(config.ground_truth)
        correlation = correlate_with_groundtruth(results, truth)
        detail["ground_truth_correlation"] = correlation
        print(f"correlation with ground truth: {correlation:.4f}")
    detail_path = out / f"{prefix}_detail.json"
    detail_path.write_text(json.dumps(detail, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    outputs = [csv_path.name, detail_path.name]
    if config.figures:
        from . import figures

        bar_path = figures.plot_si_by_region(list(results.values()), out / f"{prefix}_by_region.png", title=title)
        outputs.append(bar_path.name)
        if truth is not None:
            scatter = figures.plot_si_vs_truth(
                list(results.values()), truth, out / f"{prefix}_vs_ground_truth.png", correlation
            )
            outputs.append(scatter.name)
    return outputs, correlation


def _si_pipeline(config: RunConfig, null_model: bool) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    standard = _load_standard(config)
    aux = _load_aux(config)
    params = _spreading_params(config)
    corpus = _ingest(config, config.language)
    partitions = _regional_partitions(config, corpus)

    seed_labels = ("null-model",) if null_model else ()
    derived: dict[str, int] = {}
    if null_model:
        shuffle_seed = derive_seed(config.base_seed, "null-model", "shuffle")
        derived["shuffle"] = shuffle_seed
        original_counts = {code: len(part.tweets) for code, part in partitions.items()}
        partitions = null_model_reshuffle(partitions, seed=shuffle_seed)
        reshuffled_counts = {code: len(part.tweets) for code, part in partitions.items()}
        if reshuffled_counts != original_counts:
            raise InvariantError("null model changed per-region tweet counts")

    tasks = []
    for code in sorted(partitions):
        region_seed = derive_seed(config.base_seed, *seed_labels, code)
        derived[code] = region_seed
        tasks.append(
            (
                code,
                standard,
                partitions[code],
                params,
                aux,
                config.iteration_count,
                region_seed,
                config.split_fraction,
            )
        )
    results: dict[str, SIResult] = {}
    skipped: list[str] = []
    for code, result in _run_region_tasks(tasks, config.jobs):
        if result is None:
            skipped.append(code)
            logger.warning("region %s: no usable iterations, skipped", code)
        else:
            results[code] = result
            print(f"{code}: si={result.si:.4f} mean_r={result.mean_r:.4f} iterations={result.n_iterations_used}")
    if not results:
        raise NoSignalError("every region was skipped")
    prefix = "null_si" if null_model else "si"
    title = "null-model superdiversity index" if null_model else "superdiversity index"
    outputs, _ = _write_si_outputs(config, out, results, skipped, prefix, title)
    write_manifest(config, "null-model" if null_model else "si", derived, outputs)


# ------------------------------------------------------------------- commands


def cmd_build_network(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    corpus = _ingest(config, config.language)
    network = build_network(corpus)
    path = out / "network.tsv"
    dump_network(network, path)
    print(f"{len(network)} nodes, {network.edge_count()} edges -> {path}")
    write_manifest(config, "build-network", {}, [path.name])


def cmd_spread(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    standard = _load_standard(config)
    aux = _load_aux(config)
    if config.network is not None:
        config.require_files("network")
        network = load_network(config.network)
    else:
        network = build_network(_ingest(config, config.language))
    seed = merge_lexicons(standard, aux) if aux is not None else standard
    state = sentiment_spreading(network, seed, _spreading_params(config), record_rounds=config.round_log)
    # simple-csv compatible: the trailing is_seed column is ignored on load
    path = out / "expanded_lexicon.csv"
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["term", "valence", "pos", "is_seed"])
        for term in sorted(state.valences):
            writer.writerow([term, fmt_float(state.valences[term]), "", int(state.is_seed[term])])
    outputs = [path.name]
    if config.round_log:
        log_path = out / "round_log.csv"
        write_round_log(state, log_path)
        outputs.append(log_path.name)
    print(
        f"tagged {len(state.valences)} of {len(network)} nodes in {state.rounds} rounds "
        f"({state.unmatched_seeds} seed terms not in network)"
    )
    write_manifest(config, "spread", {}, outputs)


def cmd_si(config: RunConfig) -> None:
    _si_pipeline(config, null_model=False)


def cmd_null_model(config: RunConfig) -> None:
    _si_pipeline(config, null_model=True)


def cmd_baselines(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    multilingual = _ingest(config, lang=None)
    # top-k ranking must use local-language volume, so it is applied here
    partitions = _regional_partitions(config, multilingual, apply_top_k=False)
    local = {code: filter_language(part, config.language) for code, part in partitions.items()}
    if config.top_k is not None:
        ranked = sorted(partitions, key=lambda code: (-len(local[code].tweets), code))
        keep = set(ranked[: config.top_k])
        partitions = {code: part for code, part in partitions.items() if code in keep}
    population: dict[str, int] = {}
    if config.population is not None:
        config.require_files("population")
        population = load_population_table(config.population)
    reports = []
    for code in sorted(partitions):
        if not local[code].tweets:
            logger.warning("region %s: no %s tweets, skipped", code, config.language)
            continue
        reports.append(
            baseline_report(
                partitions[code].tweets,
                local[code],
                population.get(code),
                region=code,
            )
        )
    if not reports:
        raise NoSignalError("no region had local-language tweets")
    csv_path = out / "baselines.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["region", "tweet_count", "tweets_per_capita", "language_count", "language_entropy", "ttr"]
        )
        for report in reports:
            writer.writerow(
                [
                    report.region,
                    report.tweet_count,
                    fmt_float(report.tweets_per_capita) if report.tweets_per_capita is not None else "",
                    report.language_count,
                    fmt_float(report.language_entropy),
                    fmt_float(report.ttr),
                ]
            )
    outputs = [csv_path.name]
    if config.ground_truth is not None:
        config.require_files("ground_truth")
        truth = GroundTruthTable.from_csv(config.ground_truth)
        corr_path = out / "baseline_correlations.csv"
        with corr_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["measure", "r", "n_regions"])
            for measure in ("tweet_count", "tweets_per_capita", "language_count", "language_entropy", "ttr"):
                values = {
                    report.region: getattr(report, measure)
                    for report in reports
                    if getattr(report, measure) is not None
                }
                try:
                    r = correlate_with_groundtruth(values, truth)
                except ValueError as exc:
                    logger.warning("measure %s: %s", measure, exc)
                    continue
                shared = len(set(values) & set(truth.rates))
                writer.writerow([measure, fmt_float(r), shared])
                print(f"{measure}: r={r:.4f} over {shared} regions")
        outputs.append(corr_path.name)
    if config.figures:
        from . import figures

        fig_path = figures.plot_baselines(reports, out / "baselines.png")
        outputs.append(fig_path.name)
    write_manifest(config, "baselines", {}, outputs)


def cmd_classify_eval(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    config.require_files("labeled_data")
    data = load_labeled_tweets(config.labeled_data, config.negation_terms)
    lexicons: dict[str, ValenceLexicon] = {}
    if config.eval_lexicons:
        for name, path, fmt in config.eval_lexicons:
            if not Path(path).is_file():
                raise ConfigError(f"evaluation lexicon does not exist: {path}")
            lexicons[name] = load_lexicon(path, fmt)
    else:
        lexicons["standard"] = _load_standard(config)
    reports = {}
    for name, lexicon in lexicons.items():
        reports[name] = cross_validate(
            data,
            lexicon.to_valence_map(),
            LinearValenceClassifier(),
            repeats=config.repeats,
            train_fraction=config.train_fraction,
            seed=config.base_seed,
        )
        report = reports[name]
        print(
            f"{name}: accuracy={report.accuracy.mean:.4f}±{report.accuracy.std:.4f} "
            f"over {report.repeats} repeats"
        )
    csv_path = out / "classification_report.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lexicon", "class", "metric", "mean", "std", "n_defined"])
        for name, report in reports.items():
            for label in report.labels:
                for metric, stats in (
                    ("precision", report.precision[label]),
                    ("recall", report.recall[label]),
                    ("f1", report.f1[label]),
                ):
                    writer.writerow(
                        [name, label, metric, fmt_float(stats.mean), fmt_float(stats.std), stats.n_defined]
                    )
            writer.writerow(
                [
                    name,
                    "overall",
                    "accuracy",
                    fmt_float(report.accuracy.mean),
                    fmt_float(report.accuracy.std),
                    report.accuracy.n_defined,
                ]
            )
    outputs = [csv_path.name]
    if config.figures:
        from . import figures

        fig_path = figures.plot_classification_reports(reports, out / "classification_metrics.png")
        outputs.append(fig_path.name)
    write_manifest(config, "classify-eval", {}, outputs)


def cmd_synth_gen(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    if not config.synth_regions:
        raise ConfigError("synth_regions is required (code:n_tweets:diversity_p, comma separated)")
    outputs = []
    if config.standard_lexicon is not None:
        vocabulary = _load_standard(config)
    else:
        vocabulary = synthetic_standard_lexicon(config.vocab_terms, seed=config.synth_seed)
        lex_path = out / "standard_lexicon.csv"
        write_lexicon(vocabulary, lex_path)
        outputs.append(lex_path.name)
    synth_config = SynthConfig(
        regions=[RegionSpec(code, n, p) for code, n, p in config.synth_regions],
        vocabulary=vocabulary,
        filler_count=config.filler_count,
        lemmas_per_tweet=config.lemmas_per_tweet,
        valence_shift_sigma=config.valence_shift_sigma,
        languages=list(config.languages),
        seed=config.synth_seed,
    )
    try:
        synth_config.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    corpus = generate_corpus(synth_config)
    corpus_path = out / "corpus.jsonl"
    write_corpus(corpus, corpus_path)
    sidecar_path = out / "diversity.csv"
    write_diversity_sidecar(synth_config, sidecar_path)
    outputs.extend([corpus_path.name, sidecar_path.name])
    print(f"{len(corpus.tweets)} tweets across {len(synth_config.regions)} regions -> {corpus_path}")
    write_manifest(config, "synth-gen", {"synth": config.synth_seed}, outputs)


def cmd_sweep_params(config: RunConfig) -> None:
    config.validate_common()
    out = _prepare_output_dir(config)
    standard = _load_standard(config)
    aux = _load_aux(config)
    corpus = _ingest(config, config.language)
    network = build_network(corpus)
    if not config.range_grid or not config.entropy_grid:
        raise ConfigError("range_grid and entropy_grid must be non-empty")
    splits = [
        split_lexicon(standard, config.split_fraction, config.base_seed + i)
        for i in range(config.iteration_count)
    ]
    rows: list[tuple[float, float, float, int]] = []
    for range_threshold in config.range_grid:
        for entropy_threshold in config.entropy_grid:
            params = SpreadingParams(
                range_threshold=range_threshold,
                entropy_threshold=entropy_threshold,
                bin_count=config.bin_count,
                min_tagged_neighbors=config.min_tagged_neighbors,
            )
            correlations = []
            for split in splits:
                modelled = spread_and_restrict(network, split.train, split.test, params, aux)
                matched = sorted(modelled)
                if len(matched) < 2:
                    continue
                try:
                    correlations.append(
                        pearson(
                            [split.test.valence(term) for term in matched],
                            [modelled[term] for term in matched],
                        )
                    )
                except ValueError:
                    continue
            mean_r = sum(correlations) / len(correlations) if correlations else float("nan")
            rows.append((range_threshold, entropy_threshold, mean_r, len(correlations)))
            print(f"R={range_threshold:g} S={entropy_threshold:g}: mean_r={mean_r:.4f} ({len(correlations)} used)")
    csv_path = out / "sweep.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["range_threshold", "entropy_threshold", "mean_r", "n_iterations_used"])
        for range_threshold, entropy_threshold, mean_r, used in rows:
            writer.writerow(
                [fmt_float(range_threshold), fmt_float(entropy_threshold), fmt_float(mean_r), used]
            )
    outputs = [csv_path.name]
    if config.figures:
        from . import figures

        fig_path = figures.plot_sweep_heatmap(
            [(r, s, m) for r, s, m, _ in rows], out / "sweep_mean_r.png"
        )
        outputs.append(fig_path.name)
    write_manifest(config, "sweep-params", {}, outputs)


COMMANDS: dict[str, Callable[[RunConfig], None]] = {
    "build-network": cmd_build_network,
    "spread": cmd_spread,
    "si": cmd_si,
    "null-model": cmd_null_model,
    "baselines": cmd_baselines,
    "classify-eval": cmd_classify_eval,
    "synth-gen": cmd_synth_gen,
    "sweep-params": cmd_sweep_params,
}


if __name__ == "__main__":
    sys.exit(main())
