import logging

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from wn_align.exceptions import ConfigError
from wn_align.utils import stable_digest


logger = logging.getLogger(__name__)

PATH_FIELDS = (
    "wordnet_dir",
    "responses_file",
    "allowlist_file",
    "seeds_file",
    "classified_file",
    "output_dir",
)
NUMBER_FIELDS = {
    "threshold_step": float,
    "seed": int,
    "alpha": float,
    "n_subsets": int,
    "n_unrelated": int,
}

# Configuration keys may also be spelled like the command-line flags.
KEY_ALIASES = {
    "out": "output_dir",
    "responses": "responses_file",
    "allowlist": "allowlist_file",
    "seeds": "seeds_file",
    "classified": "classified_file",
}


@dataclass(frozen=True)
class ScorerSpec:
    """Which gloss scorer to use: the built-in baseline or a file of external scores."""

    kind: str = "baseline"
    path: Optional[Path] = None

    @classmethod
    def parse(cls, value: Union[str, "ScorerSpec"]) -> "ScorerSpec":
        """
        Parse 'baseline' or 'external:PATH'.

        Raises:
            ValueError: For any other value.
        """
        if isinstance(value, ScorerSpec):
            return value
        text = str(value).strip()
        if text == "baseline":
            return cls()
        kind, _, path = text.partition(":")
        if kind == "external" and path:
            return cls(kind="external", path=Path(path))
        raise ValueError(f"'{value}' is not a scorer, use 'baseline' or 'external:PATH'.")

    def __str__(self) -> str:
        return self.kind if self.path is None else f"{self.kind}:{self.path}"


@dataclass(frozen=True)
class RunConfig:
    """
    Effective settings of a run.

    Attributes:
        wordnet_dir: Directory holding index.noun and data.noun.
        responses_file: Raw responses TSV.
        allowlist_file: Optional word allowlist, one word per line.
        seeds_file: Seed triplets CSV for task generation.
        classified_file: A classified triplets CSV to analyze instead of the responses.
        output_dir: Where report files are written.
        threshold_step: Step of the match-rate threshold grid, in (0, 1].
        seed: Seed of every random generator.
        alpha: Significance level of the Mann-Whitney tests, in (0, 1).
        scorer: Gloss similarity scorer.
        n_subsets: Number of task subsets.
        n_unrelated: Number of sampled unrelated pairs.
    """

    wordnet_dir: Optional[Path] = None
    responses_file: Optional[Path] = None
    allowlist_file: Optional[Path] = None
    seeds_file: Optional[Path] = None
    classified_file: Optional[Path] = None
    output_dir: Path = Path("results")
    threshold_step: float = 0.01
    seed: int = 42
    alpha: float = 0.05
    scorer: ScorerSpec = ScorerSpec()
    n_subsets: int = 276
    n_unrelated: int = 30000

    def __post_init__(self) -> None:
        if not 0 < self.threshold_step <= 1:
            raise ConfigError(f"threshold_step must lie in (0, 1], got {self.threshold_step}.")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}.")
        if self.n_subsets < 1:
            raise ConfigError(f"n_subsets must be positive, got {self.n_subsets}.")
        if self.n_unrelated < 0:
            raise ConfigError(f"n_unrelated must not be negative, got {self.n_unrelated}.")

    def require(self, *names: str) -> None:
        """
        Check that settings needed by a stage are given.

        Raises:
            ConfigError: Naming every missing setting.
        """
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"Missing setting(s): {', '.join(missing)}.")

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, (Path, ScorerSpec)):
                value = str(value)
            result[f.name] = value
        return result

    def digest(self) -> str:
        """sha256 of the canonical JSON form of the settings."""
        return stable_digest(self.to_dict())


def _normalize(raw: Mapping[str, Any], base: Optional[Path]) -> Dict[str, Any]:
    known = {f.name for f in fields(RunConfig)}
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        name = str(key).replace("-", "_")
        name = KEY_ALIASES.get(name, name)
        if name not in known:
            raise ConfigError(f"Unknown configuration key '{key}'.")
        if value is None:
            continue
        if name in PATH_FIELDS:
            path = Path(value)
            value = base / path if base is not None and not path.is_absolute() else path
        elif name == "scorer":
            try:
                value = ScorerSpec.parse(value)
            except ValueError as error:
                raise ConfigError(str(error))
        elif name in NUMBER_FIELDS:
            try:
                value = NUMBER_FIELDS[name](value)
            except (TypeError, ValueError):
                raise ConfigError(f"Setting '{key}' expects a number, got '{value}'.")
        values[name] = value
    return values


def load_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    Build the effective run configuration from a YAML file and flag overrides.

    Relative paths in the file are read from the file's directory. Overrides that are None
    are ignored; the others take precedence over the file.

    Args:
        path: Optional YAML mapping of settings.
        overrides: Settings given on the command line.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: On an unreadable file, an unknown key or an invalid value.
    """
    values: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except OSError as error:
            raise ConfigError(f"Cannot read configuration file '{path}': {error.strerror}.")
        except yaml.YAMLError as error:
            raise ConfigError(f"Configuration file '{path}' is not valid YAML: {error}.")
        if not isinstance(raw, dict):
            raise ConfigError(f"Configuration file '{path}' must hold a mapping.")
        values.update(_normalize(raw, path.parent))
    values.update(_normalize(overrides or {}, None))
    try:
        config = replace(RunConfig(), **values)
    except TypeError as error:
        raise ConfigError(f"Invalid configuration: {error}.")
    logger.debug("Effective configuration: %s", config.to_dict())
    return config
