import rich_click as click

from pathlib import Path
from typing import Optional

from wn_align.commands.analyze import load_inputs
from wn_align.commands.options import (
    allowlist_option,
    alpha_option,
    classified_option,
    effective_config,
    filter_option,
    n_unrelated_option,
    out_option,
    responses_option,
    scorer_option,
    seed_option,
    wordnet_dir_option,
)
from wn_align.core import base_command, console
from wn_align.core.configuration import ScorerSpec
from wn_align.core.filters import TripletFilter
from wn_align.elicitation import load_allowlist
from wn_align.gloss_sim import run_gloss_study
from wn_align.pipeline import make_scorer
from wn_align.report import FLOAT_FORMAT


GLOSS_FILE = "gloss_sim.csv"
TESTS_FILE = "tests.csv"
GLOSS_TABLE_COLS = [("Relation", "relation"), ("Group", "group"), ("Mean", "mean"), ("N", "n")]


@click.command(name="gloss")
@wordnet_dir_option
@responses_option
@classified_option
@allowlist_option
@scorer_option
@n_unrelated_option
@seed_option
@alpha_option
@filter_option
@out_option
@base_command
def gloss(
    config: Optional[str],
    format: str,
    wordnet_dir: Optional[str],
    responses: Optional[str],
    classified: Optional[str],
    allowlist: Optional[str],
    scorer: Optional[ScorerSpec],
    n_unrelated: Optional[int],
    seed: Optional[int],
    alpha: Optional[float],
    filter_with: Optional[TripletFilter],
    out: Optional[str],
    debug: bool,
) -> None:
    """Compare the gloss similarity of matched, missing and unrelated word pairs."""
    run_config = effective_config(
        config,
        wordnet_dir=wordnet_dir,
        responses=responses,
        classified=classified,
        allowlist=allowlist,
        scorer=scorer,
        n_unrelated=n_unrelated,
        seed=seed,
        alpha=alpha,
        out=out,
    )
    graph, triplets, _ = load_inputs(run_config)
    if filter_with is not None:
        triplets = filter_with.apply(triplets)
    words = load_allowlist(run_config.allowlist_file) if run_config.allowlist_file else None
    study = run_gloss_study(
        graph,
        triplets,
        make_scorer(run_config),
        run_config.n_unrelated,
        run_config.seed,
        run_config.alpha,
        words,
    )

    output_dir = Path(run_config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    groups = study.groups_frame().round(6)
    groups.to_csv(
        output_dir / GLOSS_FILE, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    study.tests_frame().round(6).to_csv(
        output_dir / TESTS_FILE, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    console.formatted_print(groups, format=format, table_cols=GLOSS_TABLE_COLS)
