import rich_click as click

from typing import Optional

from wn_align.commands.options import (
    allowlist_option,
    alpha_option,
    classified_option,
    effective_config,
    n_unrelated_option,
    out_option,
    responses_option,
    scorer_option,
    seed_option,
    threshold_step_option,
    wordnet_dir_option,
)
from wn_align.core import base_command, console
from wn_align.core.configuration import ScorerSpec
from wn_align.pipeline import run_pipeline


PROVENANCE_TABLE_COLS = [
    ("Version", "tool_version"),
    ("Config", "config_digest"),
    ("Hapaxes", "hapax_triplets"),
    ("Non-hapaxes", "non_hapax_triplets"),
    ("Excluded", "excluded_triplets"),
]


@click.command(name="report")
@wordnet_dir_option
@responses_option
@classified_option
@allowlist_option
@threshold_step_option
@seed_option
@alpha_option
@scorer_option
@n_unrelated_option
@out_option
@base_command
def report(
    config: Optional[str],
    format: str,
    wordnet_dir: Optional[str],
    responses: Optional[str],
    classified: Optional[str],
    allowlist: Optional[str],
    threshold_step: Optional[float],
    seed: Optional[int],
    alpha: Optional[float],
    scorer: Optional[ScorerSpec],
    n_unrelated: Optional[int],
    out: Optional[str],
    debug: bool,
) -> None:
    """Run the whole pipeline and write every table, report.json and the figures."""
    run_config = effective_config(
        config,
        wordnet_dir=wordnet_dir,
        responses=responses,
        classified=classified,
        allowlist=allowlist,
        threshold_step=threshold_step,
        seed=seed,
        alpha=alpha,
        scorer=scorer,
        n_unrelated=n_unrelated,
        out=out,
    )
    result = run_pipeline(run_config)
    console.formatted_print(result.provenance, format=format, table_cols=PROVENANCE_TABLE_COLS)
