"""Run configuration: INI config file with per-module sections, CLI overrides.

Every config key lives in one section and is overridable by a CLI flag of
the same name. All randomness is controlled by explicit seeds; nothing
defaults to wall-clock state.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import platform
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Mapping

from . import __version__
from .errors import ConfigError

DEFAULT_NEGATION_TERMS = (
    "not",
    "no",
    "never",
    "don't",
    "doesn't",
    "didn't",
    "can't",
    "cannot",
    "won't",
    "isn't",
    "aren't",
    "wasn't",
    "weren't",
    "ain't",
)
DEFAULT_KEEP_POS = ("noun", "verb", "adjective")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_str_tuple(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_float_tuple(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in _parse_str_tuple(text))


def _parse_lexicon_list(text: str) -> tuple[tuple[str, str], ...]:
    """``path:format`` entries separated by commas."""
    entries = []
    for part in _parse_str_tuple(text):
        path, _, fmt = part.rpartition(":")
        if not path:
            raise ValueError(f"expected 'path:format', got {part!r}")
        entries.append((path, fmt))
    return tuple(entries)


def _parse_eval_lexicons(text: str) -> tuple[tuple[str, str, str], ...]:
    """``name:path:format`` entries separated by commas."""
    entries = []
    for part in _parse_str_tuple(text):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValueError(f"expected 'name:path:format', got {part!r}")
        entries.append((pieces[0], pieces[1], pieces[2]))
    return tuple(entries)


def _parse_region_specs(text: str) -> tuple[tuple[str, int, float], ...]:
    """``code:n_tweets:diversity_p`` entries separated by commas."""
    specs = []
    for part in _parse_str_tuple(text):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValueError(f"expected 'code:n_tweets:diversity_p', got {part!r}")
        specs.append((pieces[0], int(pieces[1]), float(pieces[2])))
    return tuple(specs)


def _parse_int_pair(text: str) -> tuple[int, int]:
    pieces = text.split(":")
    if len(pieces) != 2:
        raise ValueError(f"expected 'lo:hi', got {text!r}")
    return int(pieces[0]), int(pieces[1])


def _parse_lang_weights(text: str) -> tuple[tuple[str, float], ...]:
    """``code:weight`` entries separated by commas."""
    weights = []
    for part in _parse_str_tuple(text):
        code, _, weight = part.partition(":")
        weights.append((code, float(weight) if weight else 1.0))
    return tuple(weights)


@dataclass
class KeySpec:
    """One configurable key: its section, parser and CLI help text."""

    section: str
    parse: Callable[[str], Any]
    help: str


KEY_SPECS: dict[str, KeySpec] = {
    # paths
    "corpus": KeySpec("paths", Path, "corpus JSONL file"),
    "standard_lexicon": KeySpec("paths", Path, "standard (ground truth) lexicon file"),
    "standard_format": KeySpec("paths", str, "standard lexicon format (simple-csv/swn-csv/wordlist)"),
    "aux_lexicons": KeySpec("paths", _parse_lexicon_list, "auxiliary seed lexicons, 'path:format' comma list"),
    "gazetteer": KeySpec("paths", Path, "gazetteer CSV (location,nuts1,nuts2,nuts3)"),
    "ground_truth": KeySpec("paths", Path, "ground-truth CSV (region,immigrants,population or region,rate)"),
    "population": KeySpec("paths", Path, "population CSV (region,population)"),
    "labeled_data": KeySpec("paths", Path, "labeled tweets JSONL for classify-eval"),
    "network": KeySpec("paths", Path, "pre-built network dump (alternative to corpus for spread)"),
    "output_dir": KeySpec("paths", Path, "directory for outputs and the manifest"),
    # corpus
    "language": KeySpec("corpus", str, "local language ISO code"),
    "negation_terms": KeySpec("corpus", _parse_str_tuple, "negation token list, comma separated"),
    "keep_pos": KeySpec("corpus", _parse_str_tuple, "POS tags to keep, comma separated"),
    # spreading
    "range_threshold": KeySpec("spreading", float, "percentile-range gate (strict <)"),
    "entropy_threshold": KeySpec("spreading", float, "entropy gate (strict <, natural log)"),
    "bin_count": KeySpec("spreading", int, "histogram bins over [0,10]"),
    "min_tagged_neighbors": KeySpec("spreading", int, "minimum tagged neighbors to infect"),
    # si
    "nuts_level": KeySpec("si", str, "region level: nuts1, nuts2 or nuts3"),
    "top_k": KeySpec("si", int, "keep only the k regions with most tweets"),
    "iteration_count": KeySpec("si", int, "lexicon splits per region"),
    "base_seed": KeySpec("si", int, "root seed for all derived randomness"),
    "split_fraction": KeySpec("si", float, "train fraction of the standard lexicon"),
    "exclude_regions": KeySpec("si", _parse_str_tuple, "region codes to drop, comma separated"),
    # classify
    "repeats": KeySpec("classify", int, "evaluation repeats"),
    "train_fraction": KeySpec("classify", float, "train fraction per repeat"),
    "eval_lexicons": KeySpec("classify", _parse_eval_lexicons, "lexicons to compare, 'name:path:format' comma list"),
    # sweep
    "range_grid": KeySpec("sweep", _parse_float_tuple, "range thresholds to sweep, comma separated"),
    "entropy_grid": KeySpec("sweep", _parse_float_tuple, "entropy thresholds to sweep, comma separated"),
    # synth
    "synth_regions": KeySpec("synth", _parse_region_specs, "regions as 'code:n_tweets:diversity_p' comma list"),
    "vocab_terms": KeySpec("synth", int, "size of the generated standard lexicon"),
    "filler_count": KeySpec("synth", int, "extra non-lexicon lemmas in the vocabulary"),
    "lemmas_per_tweet": KeySpec("synth", _parse_int_pair, "lemmas per tweet as 'lo:hi'"),
    "valence_shift_sigma": KeySpec("synth", float, "noise scale of the shifted valence maps"),
    "languages": KeySpec("synth", _parse_lang_weights, "language mix as 'code:weight' comma list"),
    "synth_seed": KeySpec("synth", int, "generator seed"),
    # output
    "figures": KeySpec("output", _parse_bool, "render figures next to the CSV outputs"),
    "jobs": KeySpec("output", int, "worker processes for per-region computation"),
    "round_log": KeySpec("output", _parse_bool, "write the spreading audit log"),
}


@dataclass
class RunConfig:
    """Resolved configuration for one CLI invocation."""

    corpus: Path | None = None
    standard_lexicon: Path | None = None
    standard_format: str = "simple-csv"
    aux_lexicons: tuple[tuple[str, str], ...] = ()
    gazetteer: Path | None = None
    ground_truth: Path | None = None
    population: Path | None = None
    labeled_data: Path | None = None
    network: Path | None = None
    output_dir: Path = Path("superdiv-out")

    language: str = "en"
    negation_terms: tuple[str, ...] = DEFAULT_NEGATION_TERMS
    keep_pos: tuple[str, ...] = DEFAULT_KEEP_POS

    range_threshold: float = 3.0
    entropy_threshold: float = 1.09
    bin_count: int = 10
    min_tagged_neighbors: int = 1

    nuts_level: str = "nuts2"
    top_k: int | None = None
    iteration_count: int = 10
    base_seed: int = 0
    split_fraction: float = 0.5
    exclude_regions: tuple[str, ...] = ()

    repeats: int = 10
    train_fraction: float = 0.8
    eval_lexicons: tuple[tuple[str, str, str], ...] = ()

    range_grid: tuple[float, ...] = (1.0, 2.0, 3.0, 5.0, 10.0)
    entropy_grid: tuple[float, ...] = (0.5, 0.8, 1.09, 1.5, 2.3)

    synth_regions: tuple[tuple[str, int, float], ...] = ()
    vocab_terms: int = 200
    filler_count: int = 600
    lemmas_per_tweet: tuple[int, int] = (4, 8)
    valence_shift_sigma: float = 2.5
    languages: tuple[tuple[str, float], ...] = (("en", 1.0),)
    synth_seed: int = 0

    figures: bool = True
    jobs: int = 1
    round_log: bool = False

    config_file: Path | None = field(default=None, compare=False)

    @classmethod
    def from_sources(
        cls,
        config_file: str | Path | None,
        overrides: Mapping[str, Any] | None = None,
    ) -> "RunConfig":
        """Build a config from an optional INI file plus CLI overrides.

        Precedence: CLI flag > config file > built-in default.
        """
        values: dict[str, Any] = {}
        if config_file is not None:
            config_path = Path(config_file)
            if not config_path.is_file():
                raise ConfigError(f"config file not found: {config_path}")
            parser = configparser.ConfigParser()
            try:
                parser.read(config_path, encoding="utf-8")
            except configparser.Error as exc:
                raise ConfigError(f"cannot parse config file {config_path}: {exc}") from exc
            for name, spec in KEY_SPECS.items():
                if parser.has_option(spec.section, name):
                    raw = parser.get(spec.section, name)
                    try:
                        values[name] = spec.parse(raw)
                    except (ValueError, TypeError) as exc:
                        raise ConfigError(
                            f"invalid value for [{spec.section}] {name}: {raw!r} ({exc})"
                        ) from exc
            for section in parser.sections():
                for name in parser.options(section):
                    if name not in KEY_SPECS:
                        raise ConfigError(f"unknown config key [{section}] {name}")
        if overrides:
            for name, value in overrides.items():
                if value is None:
                    continue
                if name not in KEY_SPECS:
                    raise ConfigError(f"unknown config key {name!r}")
                values[name] = value
        config = cls(**values)
        config.config_file = Path(config_file) if config_file is not None else None
        return config

    def validate_common(self) -> None:
        if self.nuts_level not in ("nuts1", "nuts2", "nuts3"):
            raise ConfigError(f"nuts_level must be nuts1, nuts2 or nuts3, got {self.nuts_level!r}")
        if self.iteration_count < 1:
            raise ConfigError("iteration_count must be >= 1")
        if not 0.0 < self.split_fraction < 1.0:
            raise ConfigError("split_fraction must be in (0, 1)")
        if self.range_threshold <= 0 or self.entropy_threshold <= 0:
            raise ConfigError("spreading thresholds must be positive")
        if self.bin_count < 2:
            raise ConfigError("bin_count must be at least 2")
        if self.min_tagged_neighbors < 1:
            raise ConfigError("min_tagged_neighbors must be >= 1")
        if self.top_k is not None and self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")

    def require_files(self, *names: str) -> None:
        """Check that the named path options are set and point at files."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"missing required path: {name}")
            if not Path(value).is_file():
                raise ConfigError(f"{name} does not exist: {value}")

    def to_manifest_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for spec_field in fields(self):
            if spec_field.name == "config_file":
                continue
            value = getattr(self, spec_field.name)
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = [list(v) if isinstance(v, tuple) else v for v in value]
            out[spec_field.name] = value
        return out


def write_manifest(
    config: RunConfig,
    command: str,
    derived_seeds: Mapping[str, int] | None = None,
    outputs: list[str] | None = None,
) -> Path:
    """Write manifest.json in the output directory; returns its path.

    The manifest carries everything needed to reproduce the run bit-exactly:
    the command, resolved config, its hash and all derived seeds. It carries
    no timestamps, so reruns produce identical bytes.
    """
    config_dict = config.to_manifest_dict()
    canonical = json.dumps(config_dict, sort_keys=True, separators=(",", ":"))
    manifest = {
        "command": command,
        "package_version": __version__,
        "python_version": platform.python_version(),
        "config": config_dict,
        "config_hash": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        "derived_seeds": dict(derived_seeds or {}),
        "outputs": outputs or [],
    }
    path = Path(config.output_dir) / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
