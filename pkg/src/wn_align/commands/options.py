import rich_click as click

from typing import Any, Optional

from wn_align.core.configuration import RunConfig, load_config
from wn_align.core.params import FilterParam, ScorerParam


wordnet_dir_option = click.option(
    "--wordnet-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory holding the WordNet index.noun and data.noun files.",
    metavar="DIR",
)
responses_option = click.option(
    "--responses",
    type=click.Path(dir_okay=False),
    default=None,
    help="Tab-separated file of elicited responses.",
    metavar="FILE",
)
classified_option = click.option(
    "--classified",
    type=click.Path(dir_okay=False),
    default=None,
    help="Classified triplets CSV written by 'classify', used instead of the responses.",
    metavar="FILE",
)
allowlist_option = click.option(
    "--allowlist",
    type=click.Path(dir_okay=False),
    default=None,
    help="Word allowlist, one word per line.",
    metavar="FILE",
)
out_option = click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Output directory.  [default: results]",
    metavar="DIR",
)
seed_option = click.option(
    "--seed", type=int, default=None, help="Random seed.  [default: 42]", metavar="SEED"
)
alpha_option = click.option(
    "--alpha",
    type=click.FloatRange(0, 1, min_open=True, max_open=True),
    default=None,
    help="Significance level of the Mann-Whitney tests.  [default: 0.05]",
    metavar="ALPHA",
)
threshold_step_option = click.option(
    "--threshold-step",
    type=click.FloatRange(0, 1, min_open=True),
    default=None,
    help="Step of the elicitation frequency threshold grid.  [default: 0.01]",
    metavar="STEP",
)
scorer_option = click.option(
    "--scorer",
    type=ScorerParam(),
    default=None,
    help="Gloss scorer, 'baseline' or 'external:PATH' to a CSV of precomputed scores.",
    metavar="SCORER",
)
n_unrelated_option = click.option(
    "--n-unrelated",
    type=click.IntRange(min=0),
    default=None,
    help="Number of unrelated word pairs to sample.  [default: 30000]",
    metavar="N",
)
filter_option = click.option(
    "-f",
    "--filter",
    "filter_with",
    type=FilterParam(),
    required=False,
    help="An expression to filter the classified triplets.",
    metavar="FILTER EXPR",
)


def effective_config(config: Optional[str], **overrides: Any) -> RunConfig:
    """Merge the configuration file with the command flags, flags first."""
    return load_config(config, {k: v for k, v in overrides.items() if v is not None})
