import rich_click as click

from typing import List, Optional, Tuple

from wn_align.commands.options import (
    alpha_option,
    classified_option,
    effective_config,
    out_option,
    responses_option,
    threshold_step_option,
    wordnet_dir_option,
)
from wn_align.core import base_command, console
from wn_align.core.configuration import RunConfig
from wn_align.elicitation import ElicitationRecord, ingest_responses
from wn_align.matcher import ClassifiedTriplet, aggregate, classify_all, read_classified
from wn_align.plots import emit_plots
from wn_align.report import build_report
from wn_align.wn_store import WordNetGraph, parse_wordnet


ANALYSIS_TABLE_COLS = [("File", "file")]


def load_inputs(
    run_config: RunConfig,
) -> Tuple[WordNetGraph, List[ClassifiedTriplet], Optional[List[ElicitationRecord]]]:
    """Parse WordNet and get classified triplets, with the raw records when read from responses."""
    if run_config.classified_file is None:
        run_config.require("wordnet_dir", "responses_file")
    else:
        run_config.require("wordnet_dir")
    graph = parse_wordnet(run_config.wordnet_dir)
    if run_config.classified_file is not None:
        return graph, read_classified(run_config.classified_file), None
    records = ingest_responses(run_config.responses_file)
    return graph, classify_all(graph, aggregate(records)), records


@click.command(name="analyze")
@wordnet_dir_option
@responses_option
@classified_option
@threshold_step_option
@alpha_option
@out_option
@click.option(
    "--plots/--no-plots", default=True, show_default=True, help="Also render the SVG figures."
)
@base_command
def analyze(
    config: Optional[str],
    format: str,
    wordnet_dir: Optional[str],
    responses: Optional[str],
    classified: Optional[str],
    threshold_step: Optional[float],
    alpha: Optional[float],
    out: Optional[str],
    plots: bool,
    debug: bool,
) -> None:
    """Compute the frequency, mismatch, association and distance tables."""
    run_config = effective_config(
        config,
        wordnet_dir=wordnet_dir,
        responses=responses,
        classified=classified,
        threshold_step=threshold_step,
        alpha=alpha,
        out=out,
    )
    graph, triplets, records = load_inputs(run_config)
    report = build_report(graph, triplets, run_config, records)
    files = report.write(run_config.output_dir)
    if plots:
        files += emit_plots(report, run_config.output_dir)
    console.formatted_print(
        [{"file": str(path)} for path in files], format=format, table_cols=ANALYSIS_TABLE_COLS
    )
